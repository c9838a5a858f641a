"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class InternalConsistencyError(ArithmeticError):
    """A computed value violated a structural guarantee (NaN, imaginary residue, ...)."""
