"""Exception hierarchy. Every domain failure derives from SixCirclesError."""


class SixCirclesError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class NonPositiveSide(SixCirclesError, ValueError):
    pass


class TriangleInequalityViolated(SixCirclesError, ValueError):
    pass


class NotConvex(SixCirclesError, ValueError):
    pass


class RadicandNegative(SixCirclesError, ArithmeticError):
    """No circle in the next angle is tangent to the current one."""


class NegativeRoot(SixCirclesError, ArithmeticError):
    pass


class DegenerateCircle(SixCirclesError, ValueError):
    pass


class DomainExceeded(SixCirclesError, ValueError):
    pass


class InvalidParams(SixCirclesError, ValueError):
    pass


class MaxIterExceeded(SixCirclesError, RuntimeError):
    pass


class NoRoot(SixCirclesError, ArithmeticError):
    pass


class NoConvergence(SixCirclesError, RuntimeError):
    pass


class OrbitTerminated(SixCirclesError, RuntimeError):
    pass


class ScenarioError(SixCirclesError, ValueError):
    pass
