"""Exception types raised across the package.

All of them derive from ``ValueError`` so callers that only care about bad
input can catch that.
"""


class LatticeError(ValueError):
    """Base class for every error raised by latticeoptics."""


class PreconditionError(LatticeError):
    """An argument violates a documented precondition."""


class NotHermitianError(PreconditionError):
    def __init__(self, norm, tol):
        self.norm = float(norm)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: ||H - H^dagger||_F = {self.norm:.3e} > {self.tol:.1e}"
        )


class NotUnitaryError(PreconditionError):
    def __init__(self, norm, tol):
        self.norm = float(norm)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not unitary: ||U U^dagger - I||_F = {self.norm:.3e} > {self.tol:.1e}"
        )


class CapacityError(LatticeError):
    """Requested particle content or enumeration size cannot be handled."""


class ClosureError(LatticeError):
    """Commutators do not close on the supplied generators."""


class ConsistencyError(LatticeError):
    """The decomposition drifted away from a unitary solution."""
