"""Recover beam-splitter reflectivities and phases for a target unitary.

Columns are solved from the last output port to the first, and within a
column from the top node down. For node ``(j, k)`` the target entry in row
``j + b`` is split into what earlier nodes of the column already deliver
(the numerator term ``N``) and the path weight reaching the node (``D``)::

    Z = (U[j+b, k] - N) / D,    R = |Z|^2,    e^{i phi} = Z / |Z|

``b`` counts rows that can no longer reach this column because a totally
reflective node above blocked them. The east-going vectors needed for ``N``
and ``D`` are propagated column by column alongside the solve.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConsistencyError, NotUnitaryError
from .lattice import LatticeParams, ReflectivityGrid, assemble_unitary
from .validation import check_matrix, unitary_defect

__all__ = ["DecompositionResult", "RoundtripReport", "decompose", "verify_roundtrip"]

TWO_PI = 2 * math.pi
# |Z|^2 below this is total transmission, 1 - |Z|^2 below it total reflection
DEGENERACY_TOL = 1e-12
# |Z| may exceed one by this much before the solve is declared inconsistent
OVERSHOOT_TOL = 1e-9
# an east vector entry below this counts as a blocked row
BLOCKED_TOL = 1e-12
# conditioned pass: snapping may drop at most this much amplitude
AMPLITUDE_FLOOR = 1e-11
# row-pass residuals above this trigger the conditioned pass
REFINE_ABOVE = 1e-11
# a target column may leave the span of the east vectors by this much
SPAN_TOL = 1e-6


@dataclass(frozen=True)
class DecompositionResult:
    params: LatticeParams
    grid: ReflectivityGrid
    blocked_jumps: dict
    residual: float
    z: dict = field(default_factory=dict, repr=False)
    transmissive: tuple = ()
    reflective: tuple = ()

    def to_json(self):
        out = self.params.to_json()
        out["R"] = {f"{j},{k}": v for (j, k), v in self.grid.R.items()}
        out["x"] = {f"{j},{k}": v for (j, k), v in self.grid.x.items()}
        out["y"] = {f"{j},{k}": v for (j, k), v in self.grid.y.items()}
        out["blocked_jumps"] = {str(k): b for k, b in sorted(self.blocked_jumps.items())}
        out["residual"] = self.residual
        return out


def _phase(z):
    return math.atan2(z.imag, z.real) % TWO_PI


def decompose(target, tol=1e-9, unitary_tol=1e-10):
    """Decompose a ``d x d`` unitary into lattice parameters.

    Raises :class:`NotUnitaryError` for non-unitary input and
    :class:`ConsistencyError` when a column cannot be matched. The residual
    is reported, not enforced; compare it with ``tol``.

    The first pass applies the row equation with fixed thresholds. Near a
    degenerate node the row pivot or the path weight ``D`` can be tiny, and
    rounding carried over from earlier columns then gets amplified. If the
    first pass fails or ends above ``REFINE_ABOVE``, a conditioned pass is run that reads
    each node off the projection of the target column onto its east vector,
    with no division by ``D``, and snaps a node only if that drops less than
    ``AMPLITUDE_FLOOR`` of amplitude. The result
    with the smaller residual is returned.
    """
    U = check_matrix(target, name="target")
    defect = unitary_defect(U)
    if defect > unitary_tol:
        raise NotUnitaryError(defect, unitary_tol)
    try:
        first = _solve(U, conditioned=False)
    except ConsistencyError as exc:
        first, error = None, exc
    if first is not None and first.residual <= min(tol, REFINE_ABOVE):
        return first
    try:
        second = _solve(U, conditioned=True)
    except ConsistencyError:
        if first is None:
            raise error
        return first
    if first is None or second.residual < first.residual:
        return second
    return first


class _Column:
    """Node values of one column as they are solved."""

    def __init__(self, k):
        self.k = k
        self.theta, self.phi, self.z = {}, {}, {}
        self.transmissive, self.reflective = [], []

    def fill_below(self, j):
        # everything under a totally reflective node
        for m in range(j, self.k):
            self.theta[(m, self.k)] = math.pi
            self.phi[(m, self.k)] = 0.0
            self.reflective.append((m, self.k))
        self.phi[(self.k, self.k)] = 0.0


def _blocked_rows(east, k):
    """Row offset ``b`` for each node of column ``k`` (``None`` once exhausted)."""
    d = east.shape[0]
    b, rows = 0, []
    for j in range(1, k + 1):
        while j + b <= d and abs(east[j + b - 1, j - 1]) < BLOCKED_TOL:
            b += 1
        rows.append(j + b - 1 if j + b <= d else None)
    return rows, b


def _column_by_rows(col, east, k, rows):
    out = _Column(k)
    weights = []      # e^{i phi} sqrt(R) * prod(sqrt(1 - R)) per solved node
    through = 1.0     # prod_{l<j} sqrt(1 - R[l,k])
    for j in range(1, k + 1):
        row = rows[j - 1]
        if row is None:
            raise ConsistencyError(f"no unblocked row left for node ({j},{k})")
        numer = sum(weights[m] * east[row, m] for m in range(j - 1))
        z = (col[row] - numer) / (east[row, j - 1] * through)
        out.z[(j, k)] = z
        mod = abs(z)
        if j == k:
            if abs(mod - 1.0) > 1e-6:
                raise ConsistencyError(f"diagonal phase at ({k},{k}) has |Z| = {mod:.3e}")
            out.phi[(k, k)] = _phase(z)
            break
        if mod > 1.0 + OVERSHOOT_TOL:
            raise ConsistencyError(f"|Z| = {mod:.12f} > 1 at node ({j},{k})")
        R = min(mod * mod, 1.0)
        if R < DEGENERACY_TOL:
            R, ph = 0.0, 0.0
            out.transmissive.append((j, k))
        else:
            ph = _phase(z)
        if 1.0 - R < DEGENERACY_TOL:
            out.theta[(j, k)], out.phi[(j, k)] = math.pi, ph
            out.reflective.append((j, k))
            out.fill_below(j + 1)
            break
        out.theta[(j, k)] = 2.0 * math.asin(math.sqrt(R))
        out.phi[(j, k)] = ph
        weights.append(np.exp(1j * ph) * math.sqrt(R) * through)
        through *= math.sqrt(1.0 - R)
    return out


def _column_by_projection(col, east, k):
    # the east vectors of a column are orthonormal, so each node's share of the
    # target column is a plain inner product
    proj = east[:, :k].conj().T @ col
    outside = float(np.linalg.norm(col - east[:, :k] @ proj))
    if outside > SPAN_TOL:
        raise ConsistencyError(f"column {k} leaves the reachable span by {outside:.3e}")
    # amplitude still to be delivered strictly below each node
    rest = np.sqrt(np.append(np.cumsum((np.abs(proj) ** 2)[::-1])[::-1][1:], 0.0))
    through = 1.0
    out = _Column(k)
    for j in range(1, k + 1):
        w = proj[j - 1]
        out.z[(j, k)] = w / through if through > 0 else w
        if j == k:
            out.phi[(k, k)] = _phase(w)
            break
        if abs(w) <= AMPLITUDE_FLOOR:
            out.theta[(j, k)], out.phi[(j, k)] = 0.0, 0.0
            out.transmissive.append((j, k))
        elif rest[j - 1] <= AMPLITUDE_FLOOR:
            out.theta[(j, k)], out.phi[(j, k)] = math.pi, _phase(w)
            out.reflective.append((j, k))
            out.fill_below(j + 1)
            break
        else:
            # atan2 keeps cos(theta/2) accurate when the node is nearly reflective
            out.theta[(j, k)] = 2.0 * math.atan2(abs(w), rest[j - 1])
            out.phi[(j, k)] = _phase(w)
        through = rest[j - 1]
    return out


def _solve(U, conditioned):
    d = U.shape[0]
    theta, phi, z_values, blocked = {}, {}, {}, {}
    transmissive, reflective = [], []
    # east[:, m] holds the vector e[m+1, k] for the column currently solved
    east = np.eye(d, dtype=np.complex128)

    for k in range(d, 0, -1):
        col = U[:, k - 1]
        rows, blocked[k] = _blocked_rows(east, k)
        if conditioned:
            column = _column_by_projection(col, east, k)
        else:
            column = _column_by_rows(col, east, k, rows)
        theta.update(column.theta)
        phi.update(column.phi)
        z_values.update(column.z)
        transmissive += column.transmissive
        reflective += column.reflective

        # advance the east vectors to column k-1
        north = np.exp(1j * phi[(k, k)]) * east[:, k - 1]
        nxt = np.zeros_like(east)
        for j in range(k - 1, 0, -1):
            t = theta[(j, k)]
            ph = np.exp(1j * phi[(j, k)])
            s, c = math.sin(t / 2), math.cos(t / 2)
            e_j = east[:, j - 1]
            north, nxt[:, j - 1] = ph * s * e_j + c * north, ph * c * e_j - s * north
        east = nxt

    params = LatticeParams(d, theta, phi)
    residual = float(np.linalg.norm(assemble_unitary(params) - U))
    return DecompositionResult(
        params=params,
        grid=ReflectivityGrid.from_params(params),
        blocked_jumps=blocked,
        residual=residual,
        z=z_values,
        transmissive=tuple(transmissive),
        reflective=tuple(reflective),
    )


@dataclass(frozen=True)
class RoundtripReport:
    residual: float
    max_abs_error: float
    z_moduli: dict

    def ok(self, tol=1e-9):
        return self.residual <= tol


def verify_roundtrip(result, target):
    """Reassemble ``result.params`` and compare against ``target``."""
    U = check_matrix(target, name="target")
    diff = assemble_unitary(result.params) - U
    return RoundtripReport(
        residual=float(np.linalg.norm(diff)),
        max_abs_error=float(np.abs(diff).max()),
        z_moduli={jk: abs(z) for jk, z in result.z.items()},
    )
