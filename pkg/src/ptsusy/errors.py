"""Exception hierarchy shared by all ptsusy modules."""


class PtSusyError(Exception):
    """Base class for all ptsusy errors."""


class NonFiniteSample(PtSusyError):
    """A sampled value was NaN or Inf, i.e. a pole landed on a grid node."""

    def __init__(self, index, x):
        self.index = index
        self.x = x
        super().__init__(f"non-finite sample at node {index} (x = {x!r}); "
                         "shift n_interior by one to move nodes off the pole")


class AsymmetricGrid(PtSusyError):
    """Parity-based operation requested on a grid that is not symmetric about 0."""


class GridMismatch(PtSusyError):
    """Two grid functions that must share a grid do not."""


class EvaluationAtZero(PtSusyError):
    """Logarithmic derivative requested at a zero of the wavefunction."""


class UnsupportedParameters(PtSusyError):
    """Parameter combination outside the closed-form family (e.g. alpha != k)."""


class BranchViolation(PtSusyError):
    """Principal-branch logarithm argument is non-positive in the requested domain."""


class PoleOnPath(PtSusyError):
    """Antiderivative path crosses a pole of the integrand."""


class PoleOnGrid(PtSusyError):
    """A closed-form coefficient is singular at a grid node."""


class DivergentNorm(PtSusyError):
    """Normalization integral overflowed."""


class NoConvergence(PtSusyError):
    """Eigenvalue/eigenvector iteration failed its backward-error certificate."""

    def __init__(self, index, residual, tol):
        self.index = index
        self.residual = residual
        self.tol = tol
        super().__init__(f"eigenpair {index}: backward error {residual:.3e} > {tol:.1e}")


class UnsupportedMode(PtSusyError):
    """Operation only defined for the fixed-k hierarchy indexing mode."""
