"""Forward synthesis of the triangular interferometer.

The lattice unitary is the ordered product

    U = prod_{k=d..1} [ exp(i phi[k,k] E_k)
                        prod_{j=k-1..1} exp(i phi[j,k] E_j) exp(i theta[j,k] Y[j,k]) ]

with the ``k = d`` factor leftmost. Rows of the single-particle ``U`` are input
ports and columns are output ports.
"""
import math
import weakref
from dataclasses import dataclass, field

import numpy as np

from .exceptions import PreconditionError
from .generators import ParticleSpec, build_generator_set, parse_spec
from .validation import check_port, check_port_count

__all__ = [
    "LatticeParams",
    "ReflectivityGrid",
    "node_order",
    "factor_sequence",
    "assemble_unitary",
    "recursion_build",
    "path_count",
    "synthesize",
]


def node_order(d):
    """Beam-splitter nodes ``(j, k)`` in the order they appear in the product."""
    return [(j, k) for k in range(d, 0, -1) for j in range(k - 1, 0, -1)]


def _parse_key(key):
    if isinstance(key, str):
        try:
            j, k = (int(p) for p in key.split(","))
        except ValueError:
            raise PreconditionError(f"bad lattice key {key!r}; expected 'j,k'")
        return j, k
    j, k = key
    return int(j), int(k)


@dataclass(frozen=True)
class LatticeParams:
    """Beam-splitter angles ``theta[(j, k)]`` (j < k) and phases ``phi[(j, k)]`` (j <= k).

    Missing entries are zero. Indices are 1-based.
    """

    d: int
    theta: dict = field(default_factory=dict)
    phi: dict = field(default_factory=dict)

    def __post_init__(self):
        check_port_count(self.d)
        theta, phi = {}, {}
        for key, val in dict(self.theta).items():
            j, k = _parse_key(key)
            if not 1 <= j < k <= self.d:
                raise PreconditionError(f"theta key ({j},{k}) invalid for d={self.d}")
            theta[(j, k)] = _finite(val)
        for key, val in dict(self.phi).items():
            j, k = _parse_key(key)
            if not 1 <= j <= k <= self.d:
                raise PreconditionError(f"phi key ({j},{k}) invalid for d={self.d}")
            phi[(j, k)] = _finite(val)
        full_t = {jk: theta.get(jk, 0.0) for jk in self.theta_keys(self.d)}
        full_p = {jk: phi.get(jk, 0.0) for jk in self.phi_keys(self.d)}
        object.__setattr__(self, "theta", full_t)
        object.__setattr__(self, "phi", full_p)

    @staticmethod
    def theta_keys(d):
        return [(j, k) for j in range(1, d + 1) for k in range(j + 1, d + 1)]

    @staticmethod
    def phi_keys(d):
        return [(j, k) for j in range(1, d + 1) for k in range(j, d + 1)]

    @classmethod
    def zeros(cls, d):
        return cls(d)

    @classmethod
    def random(cls, d, rng=None):
        rng = np.random.default_rng(rng)
        theta = {jk: float(rng.uniform(0, math.pi)) for jk in cls.theta_keys(d)}
        phi = {jk: float(rng.uniform(0, 2 * math.pi)) for jk in cls.phi_keys(d)}
        return cls(d, theta, phi)

    @classmethod
    def from_reflectivity(cls, d, R, phi=None):
        """Angles from reflectivities ``R = sin^2(theta / 2)``."""
        theta = {}
        for key, r in dict(R).items():
            r = float(r)
            if not 0.0 <= r <= 1.0:
                raise PreconditionError(f"reflectivity {r} outside [0, 1]")
            theta[_parse_key(key)] = 2.0 * math.asin(math.sqrt(r))
        return cls(d, theta, phi or {})

    @property
    def n_parameters(self):
        return len(self.theta) + len(self.phi)

    def in_canonical_range(self):
        return all(0.0 <= t <= math.pi for t in self.theta.values()) and all(
            0.0 <= p < 2 * math.pi for p in self.phi.values()
        )

    def reflectivity(self):
        return {jk: math.sin(t / 2) ** 2 for jk, t in self.theta.items()}

    def to_json(self):
        return {
            "d": self.d,
            "theta": {f"{j},{k}": v for (j, k), v in self.theta.items()},
            "phi": {f"{j},{k}": v for (j, k), v in self.phi.items()},
        }

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(int(obj["d"]), obj.get("theta", {}), obj.get("phi", {}))
        except (KeyError, TypeError, AttributeError) as exc:
            raise PreconditionError(f"malformed lattice parameters: {exc}") from exc


def _finite(v):
    v = float(v)
    if not math.isfinite(v):
        raise PreconditionError("lattice parameters must be finite")
    return v


@dataclass(frozen=True)
class ReflectivityGrid:
    """Reflectivities plus the phases written as ``x + i y`` on the unit circle."""

    d: int
    R: dict
    x: dict
    y: dict

    @classmethod
    def from_params(cls, params):
        R = params.reflectivity()
        x = {jk: math.cos(p) for jk, p in params.phi.items()}
        y = {jk: math.sin(p) for jk, p in params.phi.items()}
        return cls(params.d, R, x, y)

    def to_params(self):
        phi = {jk: math.atan2(self.y[jk], self.x[jk]) % (2 * math.pi) for jk in self.x}
        return LatticeParams.from_reflectivity(self.d, self.R, phi)


def factor_sequence(params):
    """Single-particle factors of the product, left to right.

    Each entry is ``("phase", j, phi)`` or ``("split", j, k, theta)``.
    """
    out = []
    d = params.d
    for k in range(d, 0, -1):
        out.append(("phase", k, params.phi[(k, k)]))
        for j in range(k - 1, 0, -1):
            out.append(("phase", j, params.phi[(j, k)]))
            out.append(("split", j, k, params.theta[(j, k)]))
    return out


def _assemble_single(params):
    d = params.d
    U = np.eye(d, dtype=np.complex128)
    for f in factor_sequence(params):
        if f[0] == "phase":
            _, j, p = f
            U[:, j - 1] *= np.exp(1j * p)
        else:
            _, j, k, t = f
            c, s = math.cos(t / 2), math.sin(t / 2)
            a, b = U[:, j - 1].copy(), U[:, k - 1].copy()
            U[:, j - 1] = c * a - s * b
            U[:, k - 1] = s * a + c * b
    return U


_EIG_CACHE = weakref.WeakKeyDictionary()


def _rotation(genset, key, theta):
    per_set = _EIG_CACHE.setdefault(genset, {})
    if key not in per_set:
        H = genset.Y[key]
        per_set[key] = np.linalg.eigh(0.5 * (H + H.conj().T))
    w, V = per_set[key]
    return (V * np.exp(1j * theta * w)) @ V.conj().T


def assemble_unitary(params, genset=None, *, fast=True):
    """Lattice unitary for ``params`` acting on the basis of ``genset``.

    With ``genset`` omitted (or single-particle) the factors are applied as
    two-mode rotations on the columns instead of full matrix products;
    ``fast=False`` forces the generic product of exponentials.
    """
    if genset is None:
        if fast:
            return _assemble_single(params)
        genset = build_generator_set(ParticleSpec.single(), params.d)
    if params.d != genset.d:
        raise PreconditionError(
            f"parameter grid has d={params.d} but generator set has d={genset.d}"
        )
    if fast and genset.spec.identical and genset.spec.n == 1:
        return _assemble_single(params)
    return _assemble_generic(params, genset)


def _assemble_generic(params, genset):
    U = np.eye(genset.dim, dtype=np.complex128)
    diag = {k: np.real(np.diag(E)) for k, E in genset.E.items()}
    for f in factor_sequence(params):
        if f[0] == "phase":
            _, j, p = f
            U = U * np.exp(1j * p * diag[j])[None, :]
        else:
            _, j, k, t = f
            U = U @ _rotation(genset, (j, k), t)
    return U


def synthesize(params, spec="1"):
    spec = parse_spec(spec)
    if spec == ParticleSpec.single():
        return assemble_unitary(params)
    return assemble_unitary(params, build_generator_set(spec, params.d))


def recursion_build(params):
    """Single-particle lattice unitary from the east/north vector recursion.

    Starting from ``e[j, d] = |j>``, every node (processed from the top-right
    column leftwards, bottom to top within a column) produces

        n[j,k]   = e^{i phi} sin(theta/2) e[j,k] + cos(theta/2) n[j+1,k]
        e[j,k-1] = e^{i phi} cos(theta/2) e[j,k] - sin(theta/2) n[j+1,k]

    with ``n[k,k] = e^{i phi[k,k]} e[k,k]``. Column ``k`` of the result is
    ``n[1,k]``.
    """
    d = params.d
    east = {j: np.eye(d, dtype=np.complex128)[:, j - 1] for j in range(1, d + 1)}
    U = np.zeros((d, d), dtype=np.complex128)
    for k in range(d, 0, -1):
        north = np.exp(1j * params.phi[(k, k)]) * east[k]
        new_east = {}
        for j in range(k - 1, 0, -1):
            t = params.theta[(j, k)]
            ph = np.exp(1j * params.phi[(j, k)])
            s, c = math.sin(t / 2), math.cos(t / 2)
            north, new_east[j] = ph * s * east[j] + c * north, ph * c * east[j] - s * north
        U[:, k - 1] = north
        east = new_east
    return U


def path_count(j, k, d):
    """Number of monotone lattice paths from input ``j`` to output ``k``.

    Dynamic programme over the beam splitters in product order: a path at
    one of the two ports of a node can go straight or turn.
    """
    check_port(j, d)
    check_port(k, d)
    counts = [0] * (d + 1)
    counts[j] = 1
    for a, b in node_order(d):
        ca, cb = counts[a], counts[b]
        counts[a] = counts[b] = ca + cb
    return counts[k]
