"""scikit-learn style wrapper around decomposition and synthesis."""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .exceptions import PreconditionError
from .generators import build_generator_set, parse_spec
from .lattice import LatticeParams, assemble_unitary
from .solver import decompose
from .validation import check_matrix

__all__ = ["TriangularInterferometer"]


class TriangularInterferometer(BaseEstimator, TransformerMixin):
    """Fit lattice settings to a single-particle unitary, then propagate states.

    ``fit`` takes the ``d x d`` target. ``transform`` maps row-vector
    amplitudes over the basis of ``spec`` through the lattice, so a
    multi-particle ``spec`` reuses the fitted settings in Fock space.

    Parameters
    ----------
    spec : str, default="1"
        Particle content used by ``transform``.
    tol : float, default=1e-9
        Maximum Frobenius residual accepted by ``fit``.
    """

    def __init__(self, spec="1", tol=1e-9):
        self.spec = spec
        self.tol = tol

    def fit(self, X, y=None):
        U = check_matrix(X, name="target")
        result = decompose(U, tol=self.tol)
        if result.residual > self.tol:
            raise PreconditionError(
                f"decomposition residual {result.residual:.3e} exceeds tol {self.tol:.1e}"
            )
        self._set_params(result.params)
        self.residual_ = result.residual
        self.blocked_jumps_ = dict(result.blocked_jumps)
        return self

    def fit_params(self, params):
        """Skip the solve and use ``params`` (a :class:`LatticeParams`) directly."""
        if not isinstance(params, LatticeParams):
            params = LatticeParams.from_json(params)
        self._set_params(params)
        self.residual_ = 0.0
        self.blocked_jumps_ = {}
        return self

    def _set_params(self, params):
        genset = build_generator_set(parse_spec(self.spec), params.d)
        self.params_ = params
        self.reflectivity_ = params.reflectivity()
        self.n_ports_ = params.d
        self.labels_ = genset.labels
        self.unitary_ = assemble_unitary(params, genset)

    def _check_states(self, X):
        check_is_fitted(self, "unitary_")
        A = np.asarray(X, dtype=np.complex128)
        one = A.ndim == 1
        A = np.atleast_2d(A)
        if A.ndim != 2 or A.shape[1] != self.unitary_.shape[0]:
            raise PreconditionError(
                f"states must have {self.unitary_.shape[0]} amplitudes, got shape {np.shape(X)}"
            )
        return A, one

    def transform(self, X):
        A, one = self._check_states(X)
        out = A @ self.unitary_
        return out[0] if one else out

    def inverse_transform(self, X):
        A, one = self._check_states(X)
        out = A @ self.unitary_.conj().T
        return out[0] if one else out

    def probabilities(self, X):
        return np.abs(self.transform(X)) ** 2
