"""Best-effort monospace drawings of terms.

Wires run left to right as ``-`` on their own rows; ⨾ places drawings side by
side and ⊗ stacks them.  Generators are boxes, ``swap[1,1]`` is a crossing and
larger symmetries are boxes labelled with their arities.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Gen, Id, Par, Seq, Swap, Term


@dataclass
class Block:
    lines: list
    ins: tuple  # row of each input wire
    outs: tuple  # row of each output wire

    @property
    def width(self) -> int:
        return len(self.lines[0]) if self.lines else 0

    @property
    def height(self) -> int:
        return len(self.lines)


def _blank(h: int, w: int) -> list:
    return [[" "] * w for _ in range(h)]


def _freeze(grid: list) -> list:
    return ["".join(row) for row in grid]


def _wires(n: int) -> Block:
    if n == 0:
        return Block([], (), ())
    rows = tuple(range(0, 2 * n - 1, 2))
    grid = _blank(2 * n - 1, 3)
    for r in rows:
        grid[r] = list("---")
    return Block(_freeze(grid), rows, rows)


def _box(label: str, dom: int, cod: int) -> Block:
    w = max(dom, cod, 1)
    h = 2 * w - 1
    inner = f" {label} "
    grid = _blank(h, len(inner) + 4)
    for r in range(h):
        grid[r][1] = "|"
        grid[r][-2] = "|"
    mid = h // 2
    for i, ch in enumerate(inner):
        grid[mid][2 + i] = ch
    ins = tuple(range(0, 2 * dom - 1, 2))
    outs = tuple(range(0, 2 * cod - 1, 2))
    for r in ins:
        grid[r][0] = "-"
    for r in outs:
        grid[r][-1] = "-"
    return Block(_freeze(grid), ins, outs)


def _crossing() -> Block:
    return Block(["-\\ /-", "  X  ", "-/ \\-"], (0, 2), (0, 2))


def _stack(a: Block, b: Block) -> Block:
    if not a.height:
        return b
    if not b.height:
        return a
    w = max(a.width, b.width)
    lines = [_pad(line, w, r in a.ins, r in a.outs) for r, line in enumerate(a.lines)]
    lines.append(" " * w)
    lines += [_pad(line, w, r in b.ins, r in b.outs) for r, line in enumerate(b.lines)]
    off = a.height + 1
    return Block(lines, a.ins + tuple(off + r for r in b.ins), a.outs + tuple(off + r for r in b.outs))


def _pad(line: str, w: int, wire_in: bool, wire_out: bool) -> str:
    extra = w - len(line)
    if extra <= 0:
        return line
    # Extend wires through the padding so they still reach the block edge.
    return line + ("-" if wire_out else " ") * extra


def _connector(outs: tuple, ins: tuple, height: int) -> list:
    moves = [(a, b) for a, b in zip(outs, ins) if a != b]
    grid = _blank(height, len(moves) + 2)
    col = 1
    for a, b in zip(outs, ins):
        if a == b:
            for c in range(len(grid[0])):
                grid[a][c] = "-"
            continue
        grid[a][0] = "-"
        lo, hi = min(a, b), max(a, b)
        for r in range(lo, hi + 1):
            grid[r][col] = "|" if lo < r < hi else "+"
        for c in range(col + 1, len(grid[0])):
            grid[b][c] = "-"
        for c in range(1, col):
            grid[a][c] = "-"
        col += 1
    return _freeze(grid)


def _beside(a: Block, b: Block) -> Block:
    h = max(a.height, b.height)
    left = a.lines + [" " * a.width] * (h - a.height)
    right = b.lines + [" " * b.width] * (h - b.height)
    if a.outs != b.ins and a.outs:
        mid = _connector(a.outs, b.ins, h)
        lines = [x + m + y for x, m, y in zip(left, mid, right)]
    else:
        lines = [x + y for x, y in zip(left, right)]
    return Block(lines, a.ins, b.outs)


def block(t: Term) -> Block:
    if isinstance(t, Id):
        return _wires(t.n)
    if isinstance(t, Gen):
        return _box(t.name, t.dom, t.cod)
    if isinstance(t, Swap):
        if t.n == 1 and t.m == 1:
            return _crossing()
        if t.n == 0 or t.m == 0:
            return _wires(t.n + t.m)
        return _box(f"swap {t.n},{t.m}", t.dom, t.cod)
    if isinstance(t, Seq):
        return _beside(block(t.left), block(t.right))
    if isinstance(t, Par):
        return _stack(block(t.left), block(t.right))
    raise TypeError(f"not a term: {t!r}")


def render(t: Term) -> str:
    b = block(t)
    return "\n".join(line.rstrip() for line in b.lines)
