"""Exception hierarchy shared by every diagre module."""

from __future__ import annotations


class DiagreError(Exception):
    """Base class for all library errors."""


class TypingError(DiagreError):
    """A term could not be typed."""


class UnknownGenerator(TypingError):
    def __init__(self, name: str):
        super().__init__(f"unknown generator {name!r}")
        self.name = name


class SeqMismatch(TypingError):
    def __init__(self, cod_left: int, dom_right: int):
        super().__init__(
            f"sequential composition mismatch: cod(left)={cod_left} != dom(right)={dom_right}"
        )
        self.cod_left = cod_left
        self.dom_right = dom_right


class StateOrEffect(TypingError):
    """A generator with no inputs or no outputs where none are allowed."""

    def __init__(self, name: str):
        super().__init__(f"{name} is a state or an effect")
        self.name = name


class BadArity(TypingError):
    pass


class InvalidPosition(DiagreError):
    def __init__(self, position):
        super().__init__(f"invalid position {position!r}")
        self.position = position


class TypeMismatchAtHole(DiagreError):
    def __init__(self, expected: tuple[int, int], got: tuple[int, int]):
        super().__init__(f"hole has type {expected[0]}->{expected[1]}, got {got[0]}->{got[1]}")
        self.expected = expected
        self.got = got


class SignatureError(DiagreError):
    pass


class DuplicateName(SignatureError):
    def __init__(self, name: str):
        super().__init__(f"duplicate generator name {name!r}")
        self.name = name


class ReservedName(SignatureError):
    def __init__(self, name: str):
        super().__init__(f"{name!r} is a reserved name")
        self.name = name


class ParseError(DiagreError):
    """Malformed term or signature text. ``offset`` or ``line`` locates it."""

    def __init__(self, message: str, *, offset: int | None = None, line: int | None = None):
        where = ""
        if offset is not None:
            where = f" at offset {offset}"
        elif line is not None:
            where = f" on line {line}"
        super().__init__(message + where)
        self.offset = offset
        self.line = line


class NotSymmetryOnly(DiagreError):
    def __init__(self, name: str = ""):
        super().__init__(f"term contains non-symmetry generator {name}".rstrip())
        self.name = name


class NotNormalForm(DiagreError):
    pass


class NotApplicable(DiagreError):
    pass


class StepBudgetExceeded(DiagreError):
    def __init__(self, max_steps: int):
        super().__init__(f"rewriting did not terminate within {max_steps} steps")
        self.max_steps = max_steps


class SizeMismatch(DiagreError):
    pass


class EmptyPermutation(DiagreError):
    pass


class DMismatch(DiagreError):
    pass


class PatternViolation(DiagreError):
    """A rewrite step failed the expected decrease/preserve pattern."""

    def __init__(self, rule, before, after, reasons):
        super().__init__(f"{rule}: {'; '.join(reasons)} ({before} -> {after})")
        self.rule = rule
        self.before = before
        self.after = after
        self.reasons = reasons
