"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(ArithmeticError):
    """Energy sits on the pole of the effective coupling, eps = -cos K."""


class AmbiguityError(RuntimeError):
    """More than one bound-state candidate in a window that admits only one."""
