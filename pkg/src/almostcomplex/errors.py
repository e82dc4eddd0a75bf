"""Exception types shared across the package."""


class ParseError(ValueError):
    """Syntax or name error in an expression, with a byte offset."""

    def __init__(self, message, position, expected=(), source=None):
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        self.source = source
        detail = f"{message} at offset {position}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)


class EvaluationError(ArithmeticError):
    """Arithmetic failure while evaluating a field (division by zero, 0^-k)."""

    def __init__(self, message, subexpr=None):
        self.subexpr = subexpr
        if subexpr is not None:
            message = f"{message} in {subexpr}"
        super().__init__(message)


class DomainError(EvaluationError):
    """A field was evaluated outside the open set where it is defined."""


class DegenerateCoframeError(ArithmeticError):
    """The coframe together with its conjugates fails to span at a point."""

    def __init__(self, point, cond):
        self.point = point
        self.cond = cond
        super().__init__(f"coframe degenerate at {[float(x) for x in point]} (condition number {cond:.3e})")


class ConvergenceError(RuntimeError):
    """Zero-set projection did not converge; ``trace`` holds the residual history."""

    def __init__(self, message, trace=()):
        self.trace = list(trace)
        super().__init__(message)


class RegularityError(ArithmeticError):
    """The real Jacobian of f dropped rank during projection."""


class PreconditionError(ValueError):
    """An input violates a documented precondition beyond tolerance."""
