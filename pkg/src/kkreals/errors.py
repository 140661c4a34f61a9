"""Exceptions shared across the package."""


class BudgetExhausted(RuntimeError):
    """A semi-decision ran out of its work budget before producing an answer.

    ``diagnostic`` names the route that made the most progress, so callers can
    tell a slow input from a partial one.
    """

    def __init__(self, message, diagnostic=None):
        super().__init__(message)
        self.diagnostic = diagnostic or {}


class EnumerationCapExceeded(ValueError):
    def __init__(self, k, n, cardinality, cap):
        super().__init__(
            f"X^{k}_{n} has {cardinality} elements, above the enumeration cap {cap}"
        )
        self.cardinality = cardinality
        self.cap = cap


class NotInRange(LookupError):
    """A partial inverse was applied outside its domain.

    Only raised when the enclosure provably misses every admissible window;
    running out of budget first raises ``BudgetExhausted`` instead.
    """


class Unstabilized(RuntimeError):
    def __init__(self, message, points):
        super().__init__(message)
        self.points = points
