"""Dense complex matrix helpers.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Everything here is
a pure function of its inputs.
"""
from functools import reduce

import numpy as np

from .exceptions import PreconditionError
from .validation import check_hermitian, check_matrix, hermitian_defect, unitary_defect

__all__ = [
    "expm_hermitian",
    "expm_taylor",
    "kron",
    "direct_sum",
    "is_unitary",
    "is_hermitian",
    "commutator",
    "matrix_to_json",
    "matrix_from_json",
]


def is_unitary(M, tol=1e-12):
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return unitary_defect(A) <= tol


def is_hermitian(M, tol=1e-12):
    A = np.asarray(M)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return hermitian_defect(A) <= tol


def expm_hermitian(H, theta):
    """Return ``exp(i * theta * H)`` for Hermitian ``H``.

    Uses the spectral decomposition of ``H``; the result is unitary to
    working precision for any real ``theta``.
    """
    H = check_hermitian(H, tol=1e-12, name="generator")
    # symmetrise so eigh sees an exactly Hermitian input
    H = 0.5 * (H + H.conj().T)
    w, V = np.linalg.eigh(H)
    return (V * np.exp(1j * float(theta) * w)) @ V.conj().T


def expm_taylor(A, terms=30):
    """Scaling-and-squaring Taylor exponential of an arbitrary square matrix.

    Kept as an independent reference for :func:`expm_hermitian`.
    """
    A = check_matrix(A, name="exponent")
    norm = np.linalg.norm(A, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.25))) if norm > 0.25 else 0)
    B = A / 2.0**squarings
    term = np.eye(A.shape[0], dtype=np.complex128)
    out = term.copy()
    for m in range(1, terms + 1):
        term = term @ B / m
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def kron(A, B):
    return np.kron(check_matrix(A, square=False), check_matrix(B, square=False))


def kron_all(mats):
    return reduce(np.kron, mats)


def direct_sum(blocks):
    """Block-diagonal matrix built from square blocks."""
    blocks = [check_matrix(b, name="block") for b in blocks]
    if not blocks:
        raise PreconditionError("direct_sum needs at least one block")
    dim = sum(b.shape[0] for b in blocks)
    out = np.zeros((dim, dim), dtype=np.complex128)
    pos = 0
    for b in blocks:
        n = b.shape[0]
        out[pos:pos + n, pos:pos + n] = b
        pos += n
    return out


def commutator(A, B):
    return A @ B - B @ A


def _clean(x):
    # -0.0 would otherwise serialise as "-0.0" for some runs and "0.0" for others
    x = float(x)
    return 0.0 if x == 0.0 else x


def matrix_to_json(M):
    A = check_matrix(M, square=False)
    rows, cols = A.shape
    data = [[_clean(z.real), _clean(z.imag)] for z in A.ravel()]
    return {"rows": rows, "cols": cols, "data": data}


def matrix_from_json(obj):
    try:
        rows = int(obj["rows"])
        cols = int(obj["cols"])
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise PreconditionError(f"malformed matrix object: {exc}") from exc
    if rows < 1 or cols < 1 or len(data) != rows * cols:
        raise PreconditionError(
            f"matrix data has {len(data)} entries, expected rows*cols = {rows * cols}"
        )
    try:
        flat = np.array([complex(float(re), float(im)) for re, im in data])
    except (TypeError, ValueError) as exc:
        raise PreconditionError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return flat.reshape(rows, cols)
