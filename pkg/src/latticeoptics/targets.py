"""Reference target unitaries, interference scenarios and brute-force oracles."""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import CapacityError, PreconditionError
from .generators import ParticleSpec, build_generator_set, fock_basis, parse_spec, spin_y
from .lattice import LatticeParams, assemble_unitary, factor_sequence
from .matrix import expm_hermitian

__all__ = [
    "dft",
    "wigner_d",
    "boson_bs_oracle",
    "Scenario",
    "HomResult",
    "hom_3port_params",
    "hom_3port_simulation",
    "BellResult",
    "bell_scattering",
    "path_assignment_oracle",
    "ORACLE_MAX_PARTICLES",
    "ORACLE_MAX_PORTS",
]


def dft(d):
    """Unitary discrete Fourier transform ``exp(2 pi i (j-1)(k-1) / d) / sqrt(d)``."""
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise PreconditionError(f"DFT size must be a positive integer, got {d!r}")
    j = np.arange(d)
    return np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)


def _spin_dim(s):
    twice = Fraction(s).limit_denominator(2) * 2
    if twice.denominator != 1 or twice < 0 or abs(float(s) * 2 - float(twice)) > 1e-12:
        raise PreconditionError(f"spin must be a non-negative half-integer, got {s!r}")
    return int(twice) + 1


def wigner_d(s, theta):
    """Small Wigner matrix ``<j| exp(i theta S_y) |k>`` in the spin-``s`` irrep.

    The result is real; it is returned as a complex array with the
    round-off imaginary part removed.
    """
    M = expm_hermitian(spin_y(_spin_dim(s)), theta)
    return M.real.astype(np.complex128)


def boson_bs_oracle(M, N, theta):
    """Output amplitudes of ``|M, N>`` on a single beam splitter.

    Expands ``(c a1+ - s a2+)^M (c a2+ + s a1+)^N |0,0> / sqrt(M! N!)`` with
    ``c, s = cos(theta/2), sin(theta/2)``. The returned vector is indexed like
    the two-mode occupation basis ``|n, 0>, |n-1, 1>, ..., |0, n>``.
    """
    if M < 0 or N < 0:
        raise PreconditionError("occupations must be non-negative")
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    n = M + N
    coef = np.zeros(n + 1)  # coefficient of a1^m a2^(n-m), indexed by m
    for p in range(M + 1):
        first = math.comb(M, p) * c**p * (-s) ** (M - p)
        for q in range(N + 1):
            coef[p + q] += first * math.comb(N, q) * s**q * c ** (N - q)
    norm = math.sqrt(math.factorial(M) * math.factorial(N))
    amps = np.array(
        [coef[m] * math.sqrt(math.factorial(m) * math.factorial(n - m)) / norm for m in range(n + 1)]
    )
    return amps[::-1].astype(np.complex128)


@dataclass(frozen=True)
class Scenario:
    spec: ParticleSpec
    d: int
    input_state: np.ndarray
    params: LatticeParams

    def __post_init__(self):
        psi = np.asarray(self.input_state, dtype=np.complex128)
        if abs(np.linalg.norm(psi) - 1.0) > 1e-12:
            raise PreconditionError("input state must be normalised")
        object.__setattr__(self, "input_state", psi)

    def unitary(self):
        return assemble_unitary(self.params, build_generator_set(self.spec, self.d))

    def output_state(self):
        # rows of the lattice unitary are inputs, so states propagate as row vectors
        return self.input_state @ self.unitary()

    def labels(self):
        return build_generator_set(self.spec, self.d).labels


def hom_3port_params(theta):
    """Three-port settings that mimic two bosons on one splitter at angle ``theta``."""
    t = math.sin(theta / 2) ** 2
    side = 2 * t / (t + 1)
    return LatticeParams.from_reflectivity(3, {(1, 3): t * t, (2, 3): side, (1, 2): side})


@dataclass(frozen=True)
class HomResult:
    scenario: Scenario
    unitary: np.ndarray
    wigner: np.ndarray
    coincidence_probability: float
    max_deviation: float

    @property
    def passed(self):
        return self.max_deviation <= 1e-12


def hom_3port_simulation(theta=math.pi / 2):
    """Single-particle three-port model of two-boson interference.

    States map as ``|2,0> <-> |1,0,0>``, ``|1,1> <-> |0,1,0>``,
    ``|0,2> <-> |0,0,1>``. The coincidence probability is that of
    ``|0,1,0> -> |0,1,0>``.
    """
    params = hom_3port_params(theta)
    scenario = Scenario(ParticleSpec.single(), 3, np.array([0, 1, 0]), params)
    U = assemble_unitary(params)
    W = wigner_d(1, theta)
    out = scenario.output_state()
    return HomResult(
        scenario=scenario,
        unitary=U,
        wigner=W,
        coincidence_probability=float(abs(out[1]) ** 2),
        max_deviation=float(np.abs(U - W).max()),
    )


@dataclass(frozen=True)
class BellResult:
    theta: float
    unitary: np.ndarray
    psi_plus_out: np.ndarray
    psi_minus_out: np.ndarray
    product_probabilities: np.ndarray


def bell_scattering(theta=math.pi / 2):
    """Two distinguishable particles on one splitter.

    Basis order is ``|ud,0>, |u,d>, |d,u>, |0,du>`` (mode of particle one,
    mode of particle two). Bell states are the column vectors
    ``(0, 1, +-1, 0) / sqrt(2)``; the splitter matrix acts on them from the left.
    """
    gs = build_generator_set(ParticleSpec.distinguishable(2), 2)
    U = expm_hermitian(gs.Y[(1, 2)], theta)
    plus = np.array([0, 1, 1, 0]) / math.sqrt(2)
    minus = np.array([0, 1, -1, 0]) / math.sqrt(2)
    product = np.array([0, 1, 0, 0])
    return BellResult(
        theta=float(theta),
        unitary=U,
        psi_plus_out=U @ plus,
        psi_minus_out=U @ minus,
        product_probabilities=np.abs(U @ product) ** 2,
    )


# ---------------------------------------------------------------------------
# path-assignment oracle

ORACLE_MAX_PARTICLES = 3
ORACLE_MAX_PORTS = 4


def _single_factors(params):
    """Per-factor single-particle transition tables."""
    steps = []
    for f in factor_sequence(params):
        if f[0] == "phase":
            _, j, p = f
            steps.append(("phase", j, np.exp(1j * p)))
        else:
            _, j, k, t = f
            steps.append(("split", j, k, math.cos(t / 2), math.sin(t / 2)))
    return steps


def _histories(steps, start, fermionic):
    """Sum joint histories of labelled particles; returns final modes -> amplitude.

    Every particle independently goes straight or turns at each splitter it
    meets. With ``fermionic`` set, a particle that crosses from one port of a
    splitter to the other picks up ``(-1)`` for every other particle sitting
    on a mode strictly between the two ports: the lattice generators for
    fermions carry no such ordering string, so this factor removes it from
    the antisymmetrised sum.
    """
    amps = {tuple(start): 1.0 + 0j}
    for step in steps:
        nxt = {}
        if step[0] == "phase":
            _, j, ph = step
            for modes, a in amps.items():
                nxt[modes] = a * ph ** modes.count(j)
            amps = nxt
            continue
        _, j, k, c, s = step
        for modes, a in amps.items():
            options = []
            for m in modes:
                if m == j:
                    options.append(((j, c), (k, s)))
                elif m == k:
                    options.append(((k, c), (j, -s)))
                else:
                    options.append(((m, 1.0),))
            for choice in itertools.product(*options):
                new = tuple(m for m, _ in choice)
                w = a
                for p, (m, amp) in enumerate(choice):
                    w = w * amp
                    if fermionic and m != modes[p]:
                        between = sum(1 for q, o in enumerate(modes) if q != p and j < o < k)
                        w = -w if between % 2 else w
                if w != 0:
                    nxt[new] = nxt.get(new, 0) + w
        amps = nxt
    return amps


def _modes_of(occupation):
    return [m + 1 for m, c in enumerate(occupation) for _ in range(int(c))]


def _parity(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def path_assignment_oracle(spec, d, params, in_state, out_state):
    """Amplitude ``<in| U |out>`` summed over single-particle lattice paths.

    ``in_state`` / ``out_state`` are occupation vectors for identical
    particles and per-particle mode tuples (1-based) for distinguishable ones.
    Bosonic sums are symmetrised and normalised by the occupation factorials;
    fermionic sums are antisymmetrised.
    """
    spec = parse_spec(spec)
    if spec.kind == "partial":
        raise PreconditionError("the path oracle covers bosons, fermions and distinguishable particles")
    if spec.n > ORACLE_MAX_PARTICLES or d > ORACLE_MAX_PORTS:
        raise CapacityError(
            f"path enumeration is capped at n <= {ORACLE_MAX_PARTICLES}, d <= {ORACLE_MAX_PORTS}"
        )
    if params.d != d:
        raise PreconditionError("parameter grid and port count disagree")
    steps = _single_factors(params)

    if spec.kind == "distinguishable":
        start, target = tuple(in_state), tuple(out_state)
        if len(start) != spec.n or len(target) != spec.n:
            raise PreconditionError("distinguishable states list one mode per particle")
        return complex(_histories(steps, start, False).get(target, 0.0))

    basis = fock_basis(spec, d)
    basis.position(in_state)
    basis.position(out_state)
    start = _modes_of(in_state)
    target = sorted(_modes_of(out_state))
    fermionic = spec.kind == "fermions"
    total = 0j
    for final, amp in _histories(steps, start, fermionic).items():
        if sorted(final) != target:
            continue
        if fermionic:
            # both start and target are in ascending mode order
            total += _parity(final) * amp
        else:
            total += amp
    if fermionic:
        return complex(total)
    fact = math.prod(math.factorial(int(c)) for c in in_state)
    fact_out = math.prod(math.factorial(int(c)) for c in out_state)
    # each distinct arrangement of the outputs stands for prod(n_out!) permutations
    return complex(total * math.sqrt(fact_out / fact))
