"""Exception types raised by the fdsw modules."""


class FdswError(Exception):
    """Base class for numerical failures in fdsw."""


class SecondHarmonicResonance(FdswError):
    pass


class LongWaveResonance(FdswError):
    pass


class NoConvergence(FdswError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(f"no convergence after {iterations} iterations "
                         f"(residual {residual:.3e})")


class SingularJacobian(FdswError):
    pass


class NoSignChange(FdswError):
    pass


class NonRealCoefficient(FdswError):
    pass


class IllConditioned(FdswError):
    pass


class UnsupportedCollision(FdswError):
    pass


class ZeroEigenvalue(FdswError):
    pass


class TruncationTooSmall(FdswError):
    pass


class ConvergenceFailure(FdswError):
    pass


class BlowUp(FdswError):
    pass


class UnderResolved(FdswError):
    pass


class NoLinearRegime(FdswError):
    pass
