"""Self-test suite run by ``latticeoptics verify``.

Each check returns a list of :class:`CheckResult`; a result passes when its
measured ``value`` does not exceed ``tol``.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import golden
from .exceptions import ClosureError
from .generators import ParticleSpec, build_generator_set, diag_z, parse_spec, su3_check
from .lattice import LatticeParams, assemble_unitary, path_count
from .matrix import commutator, expm_hermitian
from .solver import decompose
from .targets import boson_bs_oracle, dft, hom_3port_simulation, path_assignment_oracle

__all__ = ["CheckResult", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float
    detail: str = ""

    @property
    def passed(self):
        return bool(self.value <= self.tol)

    def to_json(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "value": float(self.value),
            "tol": float(self.tol),
            "detail": self.detail,
        }


def _maxabs(A, B):
    return float(np.abs(np.asarray(A) - np.asarray(B)).max())


def check_fixtures(tol=1e-15):
    out = []
    for key in golden.BASIS:
        name = f"{key[0]},{key[1]}"
        gs = build_generator_set(*key)
        out.append(CheckResult(
            f"fixtures/{name}/basis", 0.0 if tuple(gs.labels) == golden.BASIS[key] else 1.0, 0.0
        ))
        for jk, listed in golden.SWAPPED[key].items():
            j, k = jk
            swapped = []
            for s in golden.BASIS[key]:
                t = list(s)
                t[j - 1], t[k - 1] = t[k - 1], t[j - 1]
                swapped.append(tuple(t))
            out.append(CheckResult(
                f"fixtures/{name}/swap{j}{k}", 0.0 if tuple(swapped) == listed else 1.0, 0.0
            ))
            out.append(CheckResult(
                f"fixtures/{name}/Pi{j}{k}", _maxabs(gs.perms[jk], golden.pi_matrix(key, jk)), tol
            ))
        printed = {jk: golden.dense(e, gs.dim) for jk, e in golden.Y[key].items()}
        for jk, M in printed.items():
            out.append(CheckResult(f"fixtures/{name}/Y{jk[0]}{jk[1]}", _maxabs(gs.Y[jk], M), tol))
        for k, diag in golden.E[key].items():
            out.append(CheckResult(f"fixtures/{name}/E{k}", _maxabs(gs.E[k], np.diag(diag)), tol))
        for target, sign, p, src in golden.ROUTES[key]:
            P = gs.perms[p]
            built = sign * P @ gs.Y[src] @ P
            err = max(_maxabs(built, gs.Y[target]), _maxabs(built, printed[target]))
            label = f"fixtures/{name}/Y{target[0]}{target[1]}={'-' if sign < 0 else '+'}Pi{p[0]}{p[1]}Y{src[0]}{src[1]}Pi"
            out.append(CheckResult(label, err, tol))
    return out


def check_su3(tol=1e-10):
    gs = build_generator_set(ParticleSpec.bosons(2), 3)
    try:
        table = su3_check(gs, tol=tol)
    except ClosureError as exc:
        return [CheckResult("su3/closure", math.inf, tol, str(exc))]
    expected = {
        (1, 2, 3): 1.0, (1, 4, 7): 0.5, (1, 5, 6): -0.5, (2, 4, 6): 0.5, (2, 5, 7): 0.5,
        (3, 4, 5): 0.5, (3, 6, 7): -0.5, (4, 5, 8): math.sqrt(3) / 2, (6, 7, 8): math.sqrt(3) / 2,
    }
    ref = np.zeros((8, 8, 8))
    for (a, b, c), v in expected.items():
        for p, sgn in (((a, b, c), 1), ((b, c, a), 1), ((c, a, b), 1),
                       ((b, a, c), -1), ((a, c, b), -1), ((c, b, a), -1)):
            ref[p[0] - 1, p[1] - 1, p[2] - 1] = sgn * v
    detail = ", ".join(f"f{a}{b}{c}={table(a, b, c):.6g}" for a, b, c in expected)
    return [
        CheckResult("su3/closure", table.residual, tol, detail),
        CheckResult("su3/structure-constants", float(np.abs(table.f - ref).max()), tol),
    ]


def _eta_relations(gs):
    """Worst deviation of the eta-conjugated commutators and of disjoint commutators."""
    d = gs.d
    worst = 0.0
    for a, j, k in itertools.permutations(range(1, d + 1), 3):
        ea, eb = gs.eta_pair(a, j), gs.eta_pair(a, k)
        xy = commutator(gs.x(a, j), gs.y(a, k))
        xx = commutator(gs.x(a, j), gs.x(a, k))
        yy = commutator(gs.y(a, j), gs.y(a, k))
        for e in (ea, eb):
            worst = max(worst, _maxabs(e @ xy @ e, -0.5j * gs.x(j, k)))
            worst = max(worst, _maxabs(e @ xx @ e, 0.5j * gs.y(j, k)))
            worst = max(worst, _maxabs(e @ yy @ e, 0.5j * gs.y(j, k)))
    disjoint = 0.0
    for a, j, b, k in itertools.permutations(range(1, d + 1), 4):
        for A in (gs.x(a, j), gs.y(a, j)):
            for B in (gs.x(b, k), gs.y(b, k)):
                disjoint = max(disjoint, float(np.abs(commutator(A, B)).max()))
    return worst, disjoint


def check_eta(specs=(("2F", 3), ("2F", 4), ("3F", 4)), tol=1e-10):
    out = []
    for spec, d in specs:
        gs = build_generator_set(parse_spec(spec), d)
        worst, disjoint = _eta_relations(gs)
        name = f"eta/{gs.spec},{d}"
        out.append(CheckResult(f"{name}/shared-index", worst, tol))
        if d >= 4:
            out.append(CheckResult(f"{name}/disjoint", disjoint, tol))
        eta_sq = max(_maxabs(e @ e, np.eye(gs.dim)) for e in gs.eta.values())
        out.append(CheckResult(f"{name}/involution", eta_sq, tol))
    return out


def check_z(tol=1e-12):
    sz = np.diag([0.5, -0.5])
    l8 = np.diag([1.0, 1.0, -2.0]) / (2 * math.sqrt(3))
    z1 = diag_z(build_generator_set(ParticleSpec.single(), 2), 1)
    z2 = diag_z(build_generator_set(ParticleSpec.single(), 3), 2)
    return [
        CheckResult("z/single,2/k=1", _maxabs(z1, sz), tol),
        CheckResult("z/single,3/k=2", _maxabs(z2, l8), tol),
    ]


def check_roundtrip(tol=1e-9, seed=0, draws=10):
    from scipy.stats import unitary_group

    out = []
    F7 = decompose(dft(7))
    out.append(CheckResult("roundtrip/dft7", F7.residual, tol))
    rng = np.random.default_rng(seed)
    worst = 0.0
    for d in range(2, 9):
        for _ in range(draws):
            U = unitary_group.rvs(d, random_state=rng)
            worst = max(worst, decompose(U).residual)
    out.append(CheckResult(f"roundtrip/haar(d=2..8,x{draws})", worst, tol))
    return out


def check_statistics(tol=1e-12):
    out = []
    hom = hom_3port_simulation()
    out.append(CheckResult("hom/3port-coincidence", hom.coincidence_probability, tol))
    out.append(CheckResult("hom/3port-vs-wigner", hom.max_deviation, tol))
    U = expm_hermitian(build_generator_set(ParticleSpec.bosons(2), 2).Y[(1, 2)], math.pi / 2)
    out.append(CheckResult("hom/2B-center", abs(U[1, 1]), tol))
    worst = 0.0
    for n in (1, 2, 3):
        Y = build_generator_set(ParticleSpec.distinguishable(n), 2).Y[(1, 2)]
        H = expm_hermitian(Y, math.pi / 2)
        worst = max(worst, float(np.abs(np.abs(H) - 2 ** (-n / 2)).max()))
    out.append(CheckResult("distinguishable/hadamard-moduli", worst, tol))
    return out


def check_oracles(tol=1e-10, seed=0, draws=5):
    rng = np.random.default_rng(seed)
    out = []
    for spec, d in (("2B", 3), ("2F", 3), ("2D", 2)):
        gs = build_generator_set(parse_spec(spec), d)
        worst = 0.0
        for _ in range(draws):
            params = LatticeParams.random(d, rng)
            U = assemble_unitary(params, gs)
            for a, la in enumerate(gs.labels):
                for b, lb in enumerate(gs.labels):
                    amp = path_assignment_oracle(gs.spec, d, params, la, lb)
                    worst = max(worst, abs(amp - U[a, b]))
        out.append(CheckResult(f"oracle/paths/{spec},{d}", worst, tol))
    worst = 0.0
    for n in range(1, 5):
        Y = build_generator_set(ParticleSpec.bosons(n), 2).Y[(1, 2)]
        for theta in rng.uniform(0, 2 * math.pi, draws):
            U = expm_hermitian(Y, theta)
            for M in range(n + 1):
                col = n - M  # basis runs |n,0>, ..., |0,n>
                worst = max(worst, _maxabs(boson_bs_oracle(M, n - M, theta), U[:, col]))
    out.append(CheckResult("oracle/boson-splitter", worst, 1e-11))
    mismatch = 0
    for d in range(1, 7):
        for j in range(1, d + 1):
            for k in range(1, d + 1):
                mismatch += path_count(j, k, d) != _count_paths_dfs(j, k, d)
    out.append(CheckResult("oracle/path-count", float(mismatch), 0.0))
    return out


def _count_paths_dfs(j, k, d):
    nodes = [(a, b) for b in range(d, 0, -1) for a in range(b - 1, 0, -1)]

    def walk(pos, mode):
        if pos == len(nodes):
            return int(mode == k)
        a, b = nodes[pos]
        if mode in (a, b):
            return walk(pos + 1, a) + walk(pos + 1, b)
        return walk(pos + 1, mode)

    return walk(0, j)


CHECKS = {
    "fixtures": check_fixtures,
    "su3": check_su3,
    "eta": check_eta,
    "z": check_z,
    "roundtrip": check_roundtrip,
    "statistics": check_statistics,
    "oracles": check_oracles,
}


def run_checks(names=None, **kwargs):
    """Run the named checks (all by default); ``kwargs`` go to every check that accepts them."""
    import inspect

    names = list(CHECKS) if not names else list(names)
    results = []
    for name in names:
        fn = CHECKS[name]
        accepted = inspect.signature(fn).parameters
        results.extend(fn(**{k: v for k, v in kwargs.items() if k in accepted}))
    return results
