"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
import numbers

import numpy as np

from .exceptions import NotHermitianError, NotUnitaryError, PreconditionError


def check_matrix(M, *, square=True, name="matrix"):
    """Return ``M`` as a 2-D complex128 array, raising on bad shapes."""
    A = np.asarray(M)
    if A.ndim != 2:
        raise PreconditionError(f"{name} must be 2-D, got shape {A.shape}")
    if A.size == 0:
        raise PreconditionError(f"{name} must be non-empty")
    if square and A.shape[0] != A.shape[1]:
        raise PreconditionError(f"{name} must be square, got shape {A.shape}")
    A = A.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(A)):
        raise PreconditionError(f"{name} contains non-finite entries")
    return A


def hermitian_defect(M):
    A = np.asarray(M)
    return float(np.linalg.norm(A - A.conj().T))


def unitary_defect(M):
    A = np.asarray(M)
    return float(np.linalg.norm(A @ A.conj().T - np.eye(A.shape[0])))


def check_hermitian(M, tol=1e-12, name="matrix"):
    A = check_matrix(M, name=name)
    norm = hermitian_defect(A)
    if norm > tol:
        raise NotHermitianError(norm, tol)
    return A


def check_unitary(M, tol=1e-10, name="matrix"):
    A = check_matrix(M, name=name)
    norm = unitary_defect(A)
    if norm > tol:
        raise NotUnitaryError(norm, tol)
    return A


def check_port_pair(j, k, d, *, ordered=True):
    """Validate 1-based lattice indices ``1 <= j < k <= d``.

    With ``ordered=False`` any pair of distinct in-range ports is accepted.
    """
    check_port_count(d)
    for v in (j, k):
        if not isinstance(v, numbers.Integral):
            raise PreconditionError(f"port index must be an integer, got {v!r}")
        if not 1 <= v <= d:
            raise PreconditionError(f"port index {v} outside 1..{d}")
    if ordered and not j < k:
        raise PreconditionError(f"expected j < k, got ({j}, {k}); transpose explicitly")
    if j == k:
        raise PreconditionError(f"port pair must be distinct, got ({j}, {k})")


def check_port(j, d):
    check_port_count(d)
    if not isinstance(j, numbers.Integral) or not 1 <= j <= d:
        raise PreconditionError(f"port index {j!r} outside 1..{d}")


def check_port_count(d):
    if not isinstance(d, numbers.Integral) or d < 1:
        raise PreconditionError(f"port count must be a positive integer, got {d!r}")
