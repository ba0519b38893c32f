"""Printed reference data for small lattices.

Matrices are stored sparsely as ``(row, col, value)`` triples with 0-based
indices over the listed basis. ``ROUTES`` records every signed permutation
identity ``target = sign * P source P`` that the reference listing gives.
"""
import math

import numpy as np

__all__ = [
    "BASIS",
    "SWAPPED",
    "PI",
    "Y",
    "E",
    "ROUTES",
    "FOURIER7_R",
    "FOURIER7_R_EQUAL",
    "FOURIER7_PHI",
    "WIGNER_R",
    "dense",
    "pi_matrix",
]

_H = 0.5j
_Q = 1j / math.sqrt(2)

BASIS = {
    ("2B", 3): (
        (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2),
    ),
    ("2F", 4): (
        (1, 1, 0, 0), (1, 0, 1, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 1, 0, 1), (0, 0, 1, 1),
    ),
}

# basis lists after swapping the slots j and k of every state
SWAPPED = {
    ("2B", 3): {
        (1, 2): ((0, 2, 0), (1, 1, 0), (0, 1, 1), (2, 0, 0), (1, 0, 1), (0, 0, 2)),
        (1, 3): ((0, 0, 2), (0, 1, 1), (1, 0, 1), (0, 2, 0), (1, 1, 0), (2, 0, 0)),
        (2, 3): ((2, 0, 0), (1, 0, 1), (1, 1, 0), (0, 0, 2), (0, 1, 1), (0, 2, 0)),
    },
    ("2F", 4): {
        (1, 2): ((1, 1, 0, 0), (0, 1, 1, 0), (0, 1, 0, 1), (1, 0, 1, 0), (1, 0, 0, 1), (0, 0, 1, 1)),
        (1, 3): ((0, 1, 1, 0), (1, 0, 1, 0), (0, 0, 1, 1), (1, 1, 0, 0), (0, 1, 0, 1), (1, 0, 0, 1)),
        (1, 4): ((0, 1, 0, 1), (0, 0, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0), (1, 1, 0, 0), (1, 0, 1, 0)),
        (2, 3): ((1, 0, 1, 0), (1, 1, 0, 0), (1, 0, 0, 1), (0, 1, 1, 0), (0, 0, 1, 1), (0, 1, 0, 1)),
        (2, 4): ((1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0), (0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0)),
        (3, 4): ((1, 1, 0, 0), (1, 0, 0, 1), (1, 0, 1, 0), (0, 1, 0, 1), (0, 1, 1, 0), (0, 0, 1, 1)),
    },
}

# permutation matrices as lists of (ket, bra) pairs
PI = {
    ("2B", 3): {
        (1, 2): (
            ((0, 2, 0), (2, 0, 0)), ((1, 1, 0), (1, 1, 0)), ((0, 1, 1), (1, 0, 1)),
            ((2, 0, 0), (0, 2, 0)), ((1, 0, 1), (0, 1, 1)), ((0, 0, 2), (0, 0, 2)),
        ),
        (1, 3): (
            ((0, 0, 2), (2, 0, 0)), ((0, 1, 1), (1, 1, 0)), ((1, 0, 1), (1, 0, 1)),
            ((0, 2, 0), (0, 2, 0)), ((1, 1, 0), (0, 1, 1)), ((2, 0, 0), (0, 0, 2)),
        ),
        (2, 3): (
            ((2, 0, 0), (2, 0, 0)), ((1, 0, 1), (1, 1, 0)), ((1, 1, 0), (1, 0, 1)),
            ((0, 0, 2), (0, 2, 0)), ((0, 1, 1), (0, 1, 1)), ((0, 2, 0), (0, 0, 2)),
        ),
    },
    ("2F", 4): {
        (1, 2): (
            ((1, 1, 0, 0), (1, 1, 0, 0)), ((1, 0, 1, 0), (0, 1, 1, 0)), ((1, 0, 0, 1), (0, 1, 0, 1)),
            ((0, 1, 1, 0), (1, 0, 1, 0)), ((0, 1, 0, 1), (1, 0, 0, 1)), ((0, 0, 1, 1), (0, 0, 1, 1)),
        ),
        (1, 3): (
            ((1, 1, 0, 0), (0, 1, 1, 0)), ((1, 0, 1, 0), (1, 0, 1, 0)), ((1, 0, 0, 1), (0, 0, 1, 1)),
            ((0, 1, 1, 0), (1, 1, 0, 0)), ((0, 1, 0, 1), (0, 1, 0, 1)), ((0, 0, 1, 1), (1, 0, 0, 1)),
        ),
        (1, 4): (
            ((1, 1, 0, 0), (0, 1, 0, 1)), ((1, 0, 1, 0), (0, 0, 1, 1)), ((1, 0, 0, 1), (1, 0, 0, 1)),
            ((0, 1, 1, 0), (0, 1, 1, 0)), ((0, 1, 0, 1), (1, 1, 0, 0)), ((0, 0, 1, 1), (1, 0, 1, 0)),
        ),
        (2, 3): (
            ((1, 1, 0, 0), (1, 0, 1, 0)), ((1, 0, 1, 0), (1, 1, 0, 0)), ((1, 0, 0, 1), (1, 0, 0, 1)),
            ((0, 1, 1, 0), (0, 1, 1, 0)), ((0, 1, 0, 1), (0, 0, 1, 1)), ((0, 0, 1, 1), (0, 1, 0, 1)),
        ),
        (2, 4): (
            ((1, 1, 0, 0), (1, 0, 0, 1)), ((1, 0, 1, 0), (1, 0, 1, 0)), ((1, 0, 0, 1), (1, 1, 0, 0)),
            ((0, 1, 1, 0), (0, 0, 1, 1)), ((0, 1, 0, 1), (0, 1, 0, 1)), ((0, 0, 1, 1), (0, 1, 1, 0)),
        ),
        (3, 4): (
            ((1, 1, 0, 0), (1, 1, 0, 0)), ((1, 0, 1, 0), (1, 0, 0, 1)), ((1, 0, 0, 1), (1, 0, 1, 0)),
            ((0, 1, 1, 0), (0, 1, 0, 1)), ((0, 1, 0, 1), (0, 1, 1, 0)), ((0, 0, 1, 1), (0, 0, 1, 1)),
        ),
    },
}


def _pair(r, c, v):
    # a Hermitian off-diagonal pair: -v above, +v below
    return ((r, c, -v), (c, r, v))


def _pairs(v, *rc):
    return tuple(t for r, c in rc for t in _pair(r, c, v))


Y = {
    ("2B", 3): {
        (2, 3): _pairs(_H, (1, 2)) + _pairs(_Q, (3, 4), (4, 5)),
        (1, 3): _pairs(_Q, (0, 2), (2, 5)) + _pairs(_H, (1, 4)),
        (1, 2): _pairs(_Q, (0, 1), (1, 3)) + _pairs(_H, (2, 4)),
    },
    ("2F", 4): {
        (3, 4): _pairs(_H, (1, 2), (3, 4)),
        (2, 4): _pairs(_H, (0, 2), (3, 5)),
        (1, 4): _pairs(_H, (0, 4), (1, 5)),
        (2, 3): _pairs(_H, (0, 1), (4, 5)),
        (1, 3): _pairs(_H, (0, 3), (2, 5)),
        (1, 2): _pairs(_H, (1, 3), (2, 4)),
    },
}

E = {
    ("2B", 3): {
        1: (2, 1, 1, 0, 0, 0),
        2: (0, 1, 0, 2, 1, 0),
        3: (0, 0, 1, 0, 1, 2),
    },
    ("2F", 4): {
        1: (1, 1, 1, 0, 0, 0),
        2: (1, 0, 0, 1, 1, 0),
        3: (0, 1, 0, 1, 0, 1),
        4: (0, 0, 1, 0, 1, 1),
    },
}

# (target, sign, permutation, source): Y[target] = sign * PI[perm] Y[source] PI[perm]
ROUTES = {
    ("2B", 3): (
        ((1, 3), 1, (1, 2), (2, 3)),
        ((1, 2), -1, (1, 3), (2, 3)),
    ),
    ("2F", 4): (
        ((2, 4), 1, (2, 3), (3, 4)),
        ((1, 4), 1, (1, 3), (3, 4)),
        ((1, 4), 1, (1, 2), (2, 4)),
        ((2, 3), -1, (2, 4), (3, 4)),
        ((2, 3), 1, (3, 4), (2, 4)),
        ((1, 3), -1, (1, 4), (3, 4)),
        ((1, 3), 1, (3, 4), (1, 4)),
        ((1, 3), 1, (1, 2), (2, 3)),
        ((1, 2), -1, (1, 4), (2, 4)),
        ((1, 2), 1, (2, 4), (1, 4)),
        ((1, 2), -1, (1, 3), (2, 3)),
        ((1, 2), 1, (2, 3), (1, 3)),
    ),
}


def dense(entries, dim):
    M = np.zeros((dim, dim), dtype=np.complex128)
    for r, c, v in entries:
        M[r, c] = v
    return M


def pi_matrix(key, jk):
    basis = BASIS[key]
    index = {s: i for i, s in enumerate(basis)}
    P = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for ket, bra in PI[key][jk]:
        P[index[ket], index[bra]] = 1.0
    return P


# Fourier transform on 7 ports; values carry three printed decimals unless exact
FOURIER7_R = {
    (1, 7): 0.143, (2, 7): 0.167, (3, 7): 0.2, (4, 7): 0.25, (5, 7): 0.333, (6, 7): 0.5,
    (2, 6): 0.254, (3, 6): 0.371, (4, 6): 0.519, (5, 6): 0.714,
    (3, 5): 0.565, (4, 5): 0.771,
}

# printed equalities R[a] = R[b]
FOURIER7_R_EQUAL = (
    ((1, 6), (2, 7)), ((1, 5), (3, 7)), ((2, 5), (3, 6)),
    ((1, 4), (4, 7)), ((2, 4), (4, 6)), ((3, 4), (4, 5)),
    ((1, 3), (5, 7)), ((2, 3), (5, 6)), ((1, 2), (6, 7)),
)

FOURIER7_PHI = {
    (2, 7): 5.386, (3, 7): 4.488, (4, 7): 3.590, (5, 7): 2.693, (6, 7): 1.795, (7, 7): 0.898,
    (2, 6): 5.503, (3, 6): 4.802, (4, 6): 4.150, (5, 6): 3.525, (6, 6): 2.917,
    (2, 5): 5.582, (3, 5): 4.939, (4, 5): 4.300, (5, 5): 3.656,
    (2, 4): 5.630, (3, 4): 4.992, (4, 4): 4.341,
    (2, 3): 5.659, (3, 3): 5.014,
    (2, 2): 5.675,
    # the first row of the transform is real
    **{(1, k): 0.0 for k in range(1, 8)},
}

# reflectivities of the Wigner d-matrix lattice as functions of t = sin^2(theta/2),
# keyed by matrix dimension; the remaining nodes follow from R[j,k] = R[d+1-k, d+1-j]
WIGNER_R = {
    2: {(1, 2): lambda t: t},
    3: {
        (1, 3): lambda t: t**2,
        (2, 3): lambda t: 2 * t / (t + 1),
    },
    4: {
        (1, 4): lambda t: t**3,
        (2, 4): lambda t: 3 * t**2 / (t**2 + t + 1),
        (3, 4): lambda t: 3 * t / (2 * t + 1),
        (2, 3): lambda t: t * (t + 2) ** 2 / (2 * t + 1) ** 2,
    },
    5: {
        (1, 5): lambda t: t**4,
        (2, 5): lambda t: 4 * t**3 / (t**3 + t**2 + t + 1),
        (3, 5): lambda t: 6 * t**2 / (3 * t**2 + 2 * t + 1),
        (4, 5): lambda t: 4 * t / (3 * t + 1),
        (2, 4): lambda t: t**2 * (t**2 + 2 * t + 3) ** 2 / (3 * t**2 + 2 * t + 1) ** 2,
        (3, 4): lambda t: 6 * t * (t + 1) ** 2 / ((3 * t + 1) * (t**2 + 4 * t + 1)),
    },
}
