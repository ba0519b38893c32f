"""Beam-splitter and phase-shifter generators for any particle content.

Single particles use the generalized Gell-Mann matrices directly. For several
identical particles the generators are built in the occupation-number basis:
the last beam splitter ``Y[d-1, d]`` is a direct sum of spin-y blocks, and all
other splitters follow from it by conjugation with mode-swap permutations.
Distinguishable and partially distinguishable particles are handled as
Kronecker sums of the identical-particle sets.

Lattice indices ``(j, k)`` are 1-based throughout, as are mode labels in
occupation vectors (``state[0]`` is mode 1).
"""
import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, sqrt
from types import MappingProxyType

import numpy as np

from .exceptions import CapacityError, ClosureError, PreconditionError
from .matrix import commutator, direct_sum, kron_all
from .validation import check_port, check_port_count, check_port_pair

__all__ = [
    "ParticleSpec",
    "parse_spec",
    "FockBasis",
    "fock_basis",
    "GeneratorSet",
    "build_generator_set",
    "ggm_y",
    "ggm_x",
    "phase_projector",
    "spin_y",
    "spin_x",
    "swap_permutation",
    "eta",
    "diag_z",
    "su3_check",
    "Su3Table",
    "partition_blocks",
]

_KINDS = ("single", "bosons", "fermions", "distinguishable", "partial")


@dataclass(frozen=True)
class ParticleSpec:
    """Particle content of the interferometer.

    ``groups`` is only used for ``kind == "partial"``: an ordered tuple of
    ``(count, stat)`` pairs with ``stat`` in ``{"B", "F"}``. Particles within a
    group are identical; different groups are mutually distinguishable.
    """

    kind: str
    n: int = 1
    groups: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise PreconditionError(f"unknown particle kind {self.kind!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise PreconditionError(f"particle number must be >= 1, got {self.n!r}")
        if self.kind == "single" and self.n != 1:
            raise PreconditionError("single-particle spec must have n == 1")
        if self.kind == "partial":
            groups = tuple((int(c), str(s)) for c, s in self.groups)
            if not groups:
                raise PreconditionError("partial spec needs at least one group")
            for c, s in groups:
                if c < 1 or s not in ("B", "F"):
                    raise PreconditionError(f"invalid group ({c}, {s!r})")
            if sum(c for c, _ in groups) != self.n:
                raise PreconditionError("group counts must add up to n")
            object.__setattr__(self, "groups", groups)
        elif self.groups:
            raise PreconditionError("groups are only meaningful for partial specs")

    @classmethod
    def single(cls):
        return cls("single")

    @classmethod
    def bosons(cls, n):
        return cls("bosons", n)

    @classmethod
    def fermions(cls, n):
        return cls("fermions", n)

    @classmethod
    def distinguishable(cls, n):
        return cls("distinguishable", n)

    @classmethod
    def partial(cls, groups):
        groups = tuple((int(c), s) for c, s in groups)
        return cls("partial", sum(c for c, _ in groups), groups)

    @property
    def identical(self):
        return self.kind in ("single", "bosons", "fermions")

    def __str__(self):
        if self.kind == "single":
            return "1"
        if self.kind == "partial":
            return "partial:" + ",".join(f"{c}{s}" for c, s in self.groups)
        return f"{self.n}{self.kind[0].upper()}"


_SPEC_RE = re.compile(r"^(\d+)([BFD])$")


def parse_spec(text):
    """Parse ``1 | nB | nF | nD | partial:(cB|cF)(,...)``."""
    if isinstance(text, ParticleSpec):
        return text
    s = str(text).strip()
    if s == "1":
        return ParticleSpec.single()
    if s.startswith("partial:"):
        groups = []
        for part in s[len("partial:"):].split(","):
            m = re.fullmatch(r"(\d+)([BF])", part.strip())
            if not m:
                raise PreconditionError(f"bad partial group {part!r} in spec {text!r}")
            groups.append((int(m.group(1)), m.group(2)))
        return ParticleSpec.partial(groups)
    m = _SPEC_RE.match(s)
    if not m:
        raise PreconditionError(f"cannot parse particle spec {text!r}")
    n = int(m.group(1))
    kind = {"B": "bosons", "F": "fermions", "D": "distinguishable"}[m.group(2)]
    return ParticleSpec(kind, n)


# ---------------------------------------------------------------------------
# single-particle algebra


def ggm_y(j, k, d):
    """Anti-symmetric generalized Gell-Mann matrix ``-(i/2)|j><k| + (i/2)|k><j|``."""
    check_port_pair(j, k, d)
    Y = np.zeros((d, d), dtype=np.complex128)
    Y[j - 1, k - 1] = -0.5j
    Y[k - 1, j - 1] = 0.5j
    return Y


def ggm_x(j, k, d):
    """Symmetric generalized Gell-Mann matrix ``(|j><k| + |k><j|) / 2``."""
    check_port_pair(j, k, d)
    X = np.zeros((d, d), dtype=np.complex128)
    X[j - 1, k - 1] = 0.5
    X[k - 1, j - 1] = 0.5
    return X


def phase_projector(j, d):
    check_port(j, d)
    E = np.zeros((d, d), dtype=np.complex128)
    E[j - 1, j - 1] = 1.0
    return E


def _raising(dim):
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise PreconditionError(f"representation dimension must be >= 1, got {dim!r}")
    s = (dim - 1) / 2
    m = s - np.arange(dim)  # basis ordered m = s, s-1, ..., -s
    Sp = np.zeros((dim, dim), dtype=np.complex128)
    for a in range(1, dim):
        Sp[a - 1, a] = sqrt(s * (s + 1) - m[a] * (m[a] + 1))
    return Sp


def spin_y(dim):
    """``S_y`` of the spin-``(dim-1)/2`` irrep, basis ordered from ``m = s`` down."""
    Sp = _raising(dim)
    return (Sp - Sp.conj().T) / 2j


def spin_x(dim):
    Sp = _raising(dim)
    return (Sp + Sp.conj().T) / 2


# ---------------------------------------------------------------------------
# occupation-number basis


@dataclass(frozen=True, eq=False)
class FockBasis:
    d: int
    spec: ParticleSpec
    states: tuple
    index: MappingProxyType = field(repr=False)

    def __len__(self):
        return len(self.states)

    def position(self, state):
        try:
            return self.index[tuple(int(v) for v in state)]
        except KeyError:
            raise PreconditionError(f"{tuple(state)} is not a state of {self.spec} in d={self.d}")


def partition_blocks(values):
    """Split a sequence into maximal runs of integers increasing by one."""
    blocks = []
    for v in values:
        if blocks and v == blocks[-1][-1] + 1:
            blocks[-1].append(v)
        else:
            blocks.append([v])
    return blocks


def fock_basis(spec, d):
    """Canonically ordered occupation vectors (descending lexicographic)."""
    spec = parse_spec(spec)
    check_port_count(d)
    if not spec.identical:
        raise PreconditionError(f"{spec} particles have no occupation-number basis")
    n = spec.n
    if spec.kind == "fermions" and n > d:
        raise CapacityError(f"{n} fermions do not fit into {d} modes")
    occ = range(2) if spec.kind == "fermions" else range(n + 1)
    states = sorted(
        (t for t in itertools.product(occ, repeat=d) if sum(t) == n), reverse=True
    )
    expected = comb(d, n) if spec.kind == "fermions" else comb(d - 1 + n, n)
    assert len(states) == expected
    states = tuple(states)
    _seed_blocks(states)  # asserts the ordering criterion
    return FockBasis(d, spec, states, MappingProxyType({s: i for i, s in enumerate(states)}))


def _seed_blocks(states):
    """Block sizes for the last beam splitter.

    The runs of the last-mode occupation must coincide with the groups of
    states that only differ in their last two slots; otherwise the ordering
    is not canonical.
    """
    if len(states[0]) < 2:
        return [1] * len(states)
    blocks = partition_blocks([s[-1] for s in states])
    pos = 0
    for b in blocks:
        group = states[pos:pos + len(b)]
        prefix = group[0][:-2]
        if any(s[:-2] != prefix for s in group):
            raise AssertionError(f"non-canonical ordering near {group}")
        pos += len(b)
    prefixes = [s[:-2] for s in states]
    if len({p for p in prefixes}) != len(blocks):
        raise AssertionError("ordering splits a two-mode block")
    return [len(b) for b in blocks]


def swap_permutation(basis, j, k):
    """Permutation matrix exchanging the occupations of modes ``j`` and ``k``."""
    check_port_pair(j, k, basis.d)
    dim = len(basis)
    P = np.zeros((dim, dim), dtype=np.complex128)
    for i, s in enumerate(basis.states):
        t = list(s)
        t[j - 1], t[k - 1] = t[k - 1], t[j - 1]
        P[basis.index[tuple(t)], i] = 1.0
    return P


# ---------------------------------------------------------------------------
# generator sets


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    """All lattice generators for one particle content and port count.

    ``Y``, ``X``, ``perms`` and ``eta`` are keyed by ``(j, k)`` with
    ``j < k``; ``E`` by ``k`` in ``1..d`` and ``Z`` by ``k`` in ``1..d-1``.
    Use :meth:`y` / :meth:`x` for reversed index pairs.
    """

    d: int
    spec: ParticleSpec
    dim: int
    labels: tuple
    Y: MappingProxyType
    X: MappingProxyType
    E: MappingProxyType
    Z: MappingProxyType
    perms: MappingProxyType
    eta: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))

    def y(self, j, k):
        return self.Y[(j, k)] if j < k else self.Y[(k, j)].T

    def x(self, j, k):
        return self.X[(j, k)] if j < k else self.X[(k, j)].T

    def perm(self, j, k):
        return self.perms[(min(j, k), max(j, k))]

    def eta_pair(self, j, k):
        return self.eta[(min(j, k), max(j, k))]


def _freeze(mapping):
    for M in mapping.values():
        M.setflags(write=False)
    return MappingProxyType(dict(sorted(mapping.items())))


def _propagate(seed_key, seed, perms, d):
    """Spread a seed generator over all lattice pairs by swap conjugation.

    Breadth-first search over ordered pairs, so every generator is reached by
    a shortest chain of swaps. Moves: replace the first index
    (``A[c,b] = P[a,c] A[a,b] P[a,c]``), replace the second index
    (``A[a,c] = P[b,c] A[a,b] P[b,c]``), or transpose (``A[b,a] = A[a,b]^T``).
    """
    def P(a, b):
        return perms[(min(a, b), max(a, b))]

    found = {seed_key: seed}
    queue = deque([seed_key])
    while queue:
        a, b = queue.popleft()
        A = found[(a, b)]
        moves = [((b, a), lambda: A.T)]
        for c in range(1, d + 1):
            if c not in (a, b):
                moves.append(((c, b), lambda c=c: P(a, c) @ A @ P(a, c)))
                moves.append(((a, c), lambda c=c: P(b, c) @ A @ P(b, c)))
        for key, make in moves:
            if key not in found:
                found[key] = make()
                queue.append(key)
    return {key: M for key, M in found.items() if key[0] < key[1]}


def _z_from(X, Y, d, dim):
    def x(j, k):
        return X[(j, k)]

    def y(j, k):
        return Y[(j, k)]

    Z = {}
    for k in range(1, d):
        acc = np.zeros((dim, dim), dtype=np.complex128)
        for j in range(1, k + 1):
            acc += j * commutator(x(j, j + 1), y(j, j + 1))
        Z[k] = -1j * sqrt(2.0 / (k * (k + 1))) * acc
    return Z


def _single_set(spec, d):
    Y = {(j, k): ggm_y(j, k, d) for j in range(1, d + 1) for k in range(j + 1, d + 1)}
    X = {(j, k): ggm_x(j, k, d) for j, k in Y}
    E = {k: phase_projector(k, d) for k in range(1, d + 1)}
    perms = {}
    for j, k in Y:
        P = np.eye(d, dtype=np.complex128)
        P[[j - 1, k - 1]] = P[[k - 1, j - 1]]
        perms[(j, k)] = P
    eta_map = {key: np.eye(d, dtype=np.complex128) for key in Y} if spec.kind == "fermions" else {}
    labels = tuple(tuple(int(a == b) for a in range(d)) for b in range(d))
    return GeneratorSet(
        d, spec, d, labels, _freeze(Y), _freeze(X), _freeze(E),
        _freeze(_z_from(X, Y, d, d)), _freeze(perms), _freeze(eta_map),
    )


def _identical_set(spec, d):
    basis = fock_basis(spec, d)
    dim = len(basis)
    pairs = [(j, k) for j in range(1, d + 1) for k in range(j + 1, d + 1)]
    perms = {p: swap_permutation(basis, *p) for p in pairs}
    E = {k: np.diag([float(s[k - 1]) for s in basis.states]).astype(np.complex128)
         for k in range(1, d + 1)}
    Y, X, eta_map = {}, {}, {}
    if d >= 2:
        sizes = _seed_blocks(basis.states)
        seed_y = direct_sum([spin_y(m) for m in sizes])
        seed_x = direct_sum([spin_x(m) for m in sizes])
        Y = _propagate((d - 1, d), seed_y, perms, d)
        X = _propagate((d - 1, d), seed_x, perms, d)
        if spec.kind == "fermions":
            eta_map = _propagate((1, 2), _eta12(spec.n, d, dim), perms, d)
    return GeneratorSet(
        d, spec, dim, basis.states, _freeze(Y), _freeze(X), _freeze(E),
        _freeze(_z_from(X, Y, d, dim)), _freeze(perms), _freeze(eta_map),
    )


def _eta12(n, d, dim):
    diag = np.ones(dim)
    if n > 1:
        diag[: comb(d - 2, n - 2)] = -1.0
    return np.diag(diag).astype(np.complex128)


def _kron_sum(factors, slot, G):
    """Sum of ``G`` placed in ``slot`` with identities elsewhere."""
    mats = [np.eye(f.shape[0], dtype=np.complex128) for f in factors]
    mats[slot] = G
    return kron_all(mats)


def _composite_set(spec, d, parts):
    """Kronecker-sum assembly over independent particle groups."""
    dims = [p.dim for p in parts]
    dim = int(np.prod(dims))
    idents = [np.eye(m, dtype=np.complex128) for m in dims]

    def ksum(getter, key):
        total = np.zeros((dim, dim), dtype=np.complex128)
        for slot, part in enumerate(parts):
            total += _kron_sum(idents, slot, getter(part)[key])
        return total

    Y = {key: ksum(lambda p: p.Y, key) for key in parts[0].Y}
    X = {key: ksum(lambda p: p.X, key) for key in parts[0].X}
    E = {k: ksum(lambda p: p.E, k) for k in parts[0].E}
    perms = {key: kron_all([p.perms[key] for p in parts]) for key in parts[0].perms}
    labels = tuple(itertools.product(*[p.labels for p in parts]))
    return GeneratorSet(
        d, spec, dim, labels, _freeze(Y), _freeze(X), _freeze(E),
        _freeze(_z_from(X, Y, d, dim)), _freeze(perms),
    )


def build_generator_set(spec, d):
    """Construct (and cache) the :class:`GeneratorSet` for ``spec`` and ``d`` ports."""
    spec = parse_spec(spec)
    check_port_count(d)
    return _build(spec, int(d))


@lru_cache(maxsize=64)
def _build(spec, d):
    if spec.kind == "single" or (spec.identical and spec.n == 1):
        return _single_set(spec, d)
    if spec.identical:
        return _identical_set(spec, d)
    if spec.kind == "distinguishable":
        one = _single_set(ParticleSpec.single(), d)
        gs = _composite_set(spec, d, [one] * spec.n)
        # product-basis labels: the mode occupied by each particle
        labels = tuple(tuple(lab.index(1) + 1 for lab in combo) for combo in gs.labels)
        return GeneratorSet(d, spec, gs.dim, labels, gs.Y, gs.X, gs.E, gs.Z, gs.perms)
    parts = []
    for count, stat in spec.groups:
        sub = ParticleSpec("bosons" if stat == "B" else "fermions", count)
        parts.append(build_generator_set(sub, d))
    return _composite_set(spec, d, parts)


def eta(spec, d, j, k):
    """Diagonal sign correction for fermionic commutators."""
    spec = parse_spec(spec)
    if spec.kind != "fermions":
        raise PreconditionError(f"eta is only defined for fermions, got {spec}")
    check_port_pair(j, k, d)
    gs = build_generator_set(ParticleSpec.fermions(spec.n), d)
    return gs.eta[(j, k)]


def diag_z(genset, k):
    """Diagonal generator ``Z_k`` built from nearest-neighbour commutators."""
    if not isinstance(k, (int, np.integer)) or not 0 < k < genset.d:
        raise PreconditionError(f"Z index must satisfy 0 < k < {genset.d}, got {k!r}")
    return genset.Z[k]


# ---------------------------------------------------------------------------
# su(3) structure constants


@dataclass(frozen=True)
class Su3Table:
    f: np.ndarray  # f[a-1, b-1, c-1]
    residual: float
    T: tuple

    def __call__(self, a, b, c):
        return float(self.f[a - 1, b - 1, c - 1])


def su3_check(genset, tol=1e-10):
    """Extract ``f^{abc}`` from ``[T_a, T_b] = i f^{abc} T_c`` for a 3-port set.

    ``T1..T8`` are ``X12, Y12, T3, X13, Y13, X23, Y23, T8`` with
    ``T3 = -i[T1, T2]`` and ``T8 = -(T3 + 2i[T4, T5]) / sqrt(3)``.
    Raises :class:`ClosureError` if a commutator leaves the span of the T's.
    """
    if genset.d != 3:
        raise PreconditionError("su3_check needs a 3-port generator set")
    T1, T2 = genset.X[(1, 2)], genset.Y[(1, 2)]
    T4, T5 = genset.X[(1, 3)], genset.Y[(1, 3)]
    T6, T7 = genset.X[(2, 3)], genset.Y[(2, 3)]
    T3 = -1j * commutator(T1, T2)
    T8 = -(T3 + 2j * commutator(T4, T5)) / sqrt(3)
    T = (T1, T2, T3, T4, T5, T6, T7, T8)

    basis = np.stack([t.ravel() for t in T], axis=1)
    A = np.vstack([basis.real, basis.imag])
    f = np.zeros((8, 8, 8))
    worst = 0.0
    for a in range(8):
        for b in range(8):
            target = (commutator(T[a], T[b]) / 1j).ravel()
            rhs = np.concatenate([target.real, target.imag])
            coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
            worst = max(worst, float(np.linalg.norm(A @ coef - rhs)))
            f[a, b] = coef
    if worst > tol:
        raise ClosureError(f"commutators leave span{{T}}: residual {worst:.3e}")
    f[np.abs(f) < 1e-13] = 0.0
    return Su3Table(f, worst, T)
