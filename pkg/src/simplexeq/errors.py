"""Exception hierarchy shared by every backend."""


class SimplexError(Exception):
    pass


# scalar-core
class DivisionByZero(SimplexError, ZeroDivisionError):
    pass


class IncompatibleRings(SimplexError, TypeError):
    pass


class TruncationUnderflow(SimplexError):
    pass


# tensor-ops
class DuplicateLeg(SimplexError, ValueError):
    pass


class LegOutOfRange(SimplexError, ValueError):
    pass


class ArityMismatch(SimplexError, ValueError):
    pass


class SingularOperator(SimplexError, ZeroDivisionError):
    pass


class DenseMaterializationRefused(SimplexError):
    pass


# point-maps
class DomainError(SimplexError):
    """A birational map was evaluated outside its domain of definition."""

    def __init__(self, point, factor_index=None, reason=""):
        self.point = point
        self.factor_index = factor_index
        self.reason = reason
        super().__init__(f"map undefined at {point!r} (factor {factor_index}): {reason}")


class RetryBudgetExhausted(SimplexError):
    pass


class MissingInverseRule(SimplexError):
    pass


# hopf-odouble
class AxiomViolation(SimplexError):
    def __init__(self, axiom, indices):
        self.axiom = axiom
        self.indices = indices
        super().__init__(f"Hopf axiom {axiom!r} fails at basis indices {indices}")


class RepresentationMismatch(SimplexError):
    def __init__(self, relation, indices):
        self.relation = relation
        self.indices = indices
        super().__init__(f"representation violates {relation!r} at {indices}")


# qdilog
class WindowExceeded(SimplexError):
    pass


class FloorExceeded(SimplexError):
    pass


class ConvergenceStalled(SimplexError):
    pass


# cli-harness
class ConfigError(SimplexError):
    pass
