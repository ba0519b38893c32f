"""Command-line front end: ``latticeoptics <command> ...``.

Exit codes: 0 success, 1 failed self-test, 2 malformed input, 3 non-unitary
target, 4 residual above tolerance, 5 capacity exceeded.
"""
import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .checks import CHECKS, check_eta, run_checks
from .exceptions import CapacityError, ConsistencyError, LatticeError, NotUnitaryError
from .generators import build_generator_set, parse_spec
from .io import RunManifest, dumps, format_label, format_modes, load_matrix, read_json, write_text
from .lattice import LatticeParams, assemble_unitary
from .matrix import matrix_to_json
from .solver import decompose
from .targets import (
    Scenario,
    bell_scattering,
    dft,
    hom_3port_simulation,
    path_assignment_oracle,
    wigner_d,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNITARY, EXIT_RESIDUAL, EXIT_CAPACITY = 0, 1, 2, 3, 4, 5

DEFAULT_TOL = 1e-9


class CommandError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _exit_code(exc):
    if isinstance(exc, CapacityError):
        return EXIT_CAPACITY
    if isinstance(exc, NotUnitaryError):
        return EXIT_UNITARY
    if isinstance(exc, ConsistencyError):
        return EXIT_RESIDUAL
    return EXIT_INPUT


def _labels(gs):
    fmt = format_modes if gs.spec.kind == "distinguishable" else format_label
    return [fmt(lab) for lab in gs.labels]


def _complex_pair(z):
    z = complex(z)
    return [z.real + 0.0, z.imag + 0.0]


def _matrix_text(M):
    rows = []
    for row in np.asarray(M):
        rows.append("  ".join(f"{z.real:+.6f}{z.imag:+.6f}j" for z in row))
    return "\n".join(rows) + "\n"


def _emit(args, payload, text=None):
    if args.format == "text" and text is not None:
        write_text(text, args.out)
    else:
        write_text(dumps(payload), args.out)


def _manifest(args, command, inputs=None, tolerances=None):
    return RunManifest(
        command=command,
        inputs=inputs or {},
        tolerances=tolerances or {},
        version=__version__,
    )


def _finish(args, manifest, payload, text=None):
    if args.timing:
        manifest.duration = time.perf_counter() - args._start
    payload["manifest"] = manifest.to_json()
    _emit(args, payload, text)


# ---------------------------------------------------------------------------
# commands


def _decompose_one(path, tol):
    try:
        obj, digest = read_json(path)
        U = load_matrix(obj)
        result = decompose(U, tol=tol)
    except LatticeError as exc:
        return path, None, None, _exit_code(exc), str(exc)
    code = EXIT_OK if result.residual <= tol else EXIT_RESIDUAL
    msg = "" if code == EXIT_OK else f"residual {result.residual:.3e} exceeds tol {tol:.1e}"
    return path, digest, result, code, msg


def cmd_decompose(args):
    tol = DEFAULT_TOL if args.tol is None else args.tol
    jobs = max(1, args.jobs)
    if jobs > 1 and len(args.target) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(lambda p: _decompose_one(p, tol), args.target))
    else:
        outcomes = [_decompose_one(p, tol) for p in args.target]

    code = max(o[3] for o in outcomes)
    for path, _, _, c, msg in outcomes:
        if c:
            print(f"{path}: {msg}", file=sys.stderr)
    done = [o for o in outcomes if o[2] is not None]
    if not done:
        return code
    inputs = {p: dg for p, dg, *_ in done}
    manifest = _manifest(args, "decompose", inputs, {"tol": tol})
    if len(args.target) == 1:
        result = done[0][2]
        payload = result.to_json()
        text = _params_text(result)
    else:
        payload = {"results": [dict(o[2].to_json(), target=o[0]) for o in done]}
        text = "".join(f"# {o[0]}\n" + _params_text(o[2]) for o in done)
    _finish(args, manifest, payload, text)
    return code


def _params_text(result):
    p = result.params
    lines = [f"d = {p.d}   residual = {result.residual:.3e}"]
    for (j, k), t in p.theta.items():
        lines.append(f"node {j},{k}:  R = {math.sin(t / 2) ** 2:.12f}  phi = {p.phi[(j, k)]:.12f}")
    for k in range(1, p.d + 1):
        lines.append(f"phase {k},{k}:  phi = {p.phi[(k, k)]:.12f}")
    return "\n".join(lines) + "\n"


def cmd_synthesize(args):
    obj, digest = read_json(args.params)
    if not isinstance(obj, dict):
        raise CommandError(EXIT_INPUT, "parameter file must hold a JSON object")
    params = LatticeParams.from_json(obj)
    gs = build_generator_set(parse_spec(args.spec), params.d)
    U = assemble_unitary(params, gs)
    manifest = _manifest(args, "synthesize", {args.params: digest})
    payload = {
        "spec": str(gs.spec),
        "d": params.d,
        "labels": _labels(gs),
        "matrix": matrix_to_json(U),
    }
    _finish(args, manifest, payload, _matrix_text(U))
    return EXIT_OK


def cmd_generators(args):
    gs = build_generator_set(parse_spec(args.spec), args.d)

    def pairs(mapping):
        return {f"{j},{k}": matrix_to_json(M) for (j, k), M in mapping.items()}

    payload = {
        "spec": str(gs.spec),
        "d": gs.d,
        "dim": gs.dim,
        "labels": _labels(gs),
        "Y": pairs(gs.Y),
        "X": pairs(gs.X),
        "perms": pairs(gs.perms),
        "E": {str(k): matrix_to_json(M) for k, M in gs.E.items()},
        "Z": {str(k): matrix_to_json(M) for k, M in gs.Z.items()},
    }
    if gs.eta:
        payload["eta"] = pairs(gs.eta)
    text = [f"spec {gs.spec}  d = {gs.d}  dim = {gs.dim}", "basis: " + " ".join(_labels(gs))]
    for name, mapping in (("Y", gs.Y), ("X", gs.X)):
        for (j, k), M in mapping.items():
            text.append(f"{name}[{j},{k}]\n" + _matrix_text(M).rstrip("\n"))
    for k, M in gs.E.items():
        text.append(f"E[{k}] = diag(" + ", ".join(f"{v:g}" for v in np.real(np.diag(M))) + ")")
    _finish(args, _manifest(args, "generators"), payload, "\n".join(text) + "\n")
    return EXIT_OK


def _amplitude_table(labels, amps):
    rows = []
    for lab, a in zip(labels, amps):
        rows.append({"state": lab, "amplitude": _complex_pair(a), "probability": float(abs(a) ** 2)})
    return rows


def _table_text(title, rows):
    width = max(len(r["state"]) for r in rows)
    lines = [title]
    for r in rows:
        re, im = r["amplitude"]
        lines.append(f"  {r['state']:<{width}}  {re:+.12f}{im:+.12f}j  p = {r['probability']:.12f}")
    return lines


def _parse_amplitude(v):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise CommandError(EXIT_INPUT, f"amplitude must be a number or [re, im], got {v!r}")


def _scenario_from_json(obj):
    try:
        spec = parse_spec(str(obj["spec"]))
        d = int(obj["d"])
        params = LatticeParams.from_json(obj.get("params", {"d": d}))
        given = obj["input"]
    except (KeyError, TypeError, ValueError) as exc:
        raise CommandError(EXIT_INPUT, f"malformed scenario: {exc}") from exc
    gs = build_generator_set(spec, d)
    labels = _labels(gs)
    psi = np.zeros(gs.dim, dtype=np.complex128)
    if isinstance(given, dict):
        for lab, amp in given.items():
            if lab not in labels:
                raise CommandError(EXIT_INPUT, f"unknown basis state {lab!r}; expected one of {labels}")
            psi[labels.index(lab)] = _parse_amplitude(amp)
    elif isinstance(given, list) and len(given) == gs.dim:
        psi[:] = [_parse_amplitude(a) for a in given]
    else:
        raise CommandError(EXIT_INPUT, "input must map basis labels to amplitudes or list dim amplitudes")
    return Scenario(spec, d, psi, params), gs


def cmd_simulate(args):
    theta = math.pi / 2 if args.theta is None else args.theta
    inputs = {}
    if args.scenario == "hom":
        res = hom_3port_simulation(theta)
        out = res.scenario.output_state()
        rows = _amplitude_table(["|2,0>", "|1,1>", "|0,2>"], out)
        payload = {
            "scenario": "hom",
            "theta": theta,
            "reflectivities": {f"{j},{k}": r for (j, k), r in res.scenario.params.reflectivity().items()},
            "input": "|1,1>",
            "output": rows,
            "coincidence_probability": res.coincidence_probability,
            "max_deviation_from_wigner": res.max_deviation,
        }
        text = _table_text(f"two-boson splitter via 3 ports, theta = {theta!r}", rows)
        text.append(f"coincidence probability = {res.coincidence_probability:.3e}")
    elif args.scenario == "bell":
        res = bell_scattering(theta)
        labels = ["|ud,0>", "|u,d>", "|d,u>", "|0,du>"]
        plus = _amplitude_table(labels, res.psi_plus_out)
        minus = _amplitude_table(labels, res.psi_minus_out)
        payload = {
            "scenario": "bell",
            "theta": theta,
            "psi_plus": plus,
            "psi_minus": minus,
            "product_input_probabilities": [float(p) for p in res.product_probabilities],
        }
        text = _table_text("psi+ ->", plus) + _table_text("psi- ->", minus)
    else:
        obj, digest = read_json(args.scenario)
        if not isinstance(obj, dict):
            raise CommandError(EXIT_INPUT, "scenario file must hold a JSON object")
        inputs[args.scenario] = digest
        scenario, gs = _scenario_from_json(obj)
        out = scenario.output_state()
        labels = _labels(gs)
        rows = _amplitude_table(labels, out)
        payload = {
            "scenario": "custom",
            "spec": str(gs.spec),
            "d": gs.d,
            "output": rows,
            "total_probability": float(np.sum(np.abs(out) ** 2)),
        }
        text = _table_text(f"spec {gs.spec}, d = {gs.d}", rows)
        if args.oracle:
            # the oracle sums over input basis states one at a time
            worst = 0.0
            for b, lb in enumerate(gs.labels):
                amp = sum(
                    scenario.input_state[a]
                    * path_assignment_oracle(gs.spec, gs.d, scenario.params, la, lb)
                    for a, la in enumerate(gs.labels)
                    if scenario.input_state[a] != 0
                )
                worst = max(worst, abs(amp - out[b]))
            payload["oracle_max_deviation"] = worst
            text.append(f"path oracle max deviation = {worst:.3e}")
    _finish(args, _manifest(args, "simulate", inputs), payload, "\n".join(text) + "\n")
    return EXIT_OK


def cmd_target(args):
    if args.kind == "dft":
        if args.d is None:
            raise CommandError(EXIT_INPUT, "target --kind dft needs --d")
        U = dft(args.d)
        meta = {"kind": "dft", "d": args.d}
    else:
        if args.s is None or args.theta is None:
            raise CommandError(EXIT_INPUT, "target --kind wigner needs --s and --theta")
        U = wigner_d(args.s, args.theta)
        meta = {"kind": "wigner", "s": args.s, "theta": args.theta}
    payload = dict(meta, matrix=matrix_to_json(U))
    _finish(args, _manifest(args, "target"), payload, _matrix_text(U))
    return EXIT_OK


def cmd_verify(args):
    names = args.check or ["all"]
    if "all" in names:
        names = list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise CommandError(EXIT_INPUT, f"unknown check(s) {unknown}; choose from {sorted(CHECKS)}")
    kwargs = {} if args.tol is None else {"tol": args.tol}
    results = []
    for name in names:
        if name == "eta" and args.spec is not None:
            spec = parse_spec(args.spec)
            if spec.kind != "fermions":
                raise CommandError(EXIT_INPUT, "--check eta takes a fermionic --spec")
            build_generator_set(spec, args.d)  # surfaces capacity errors
            results.extend(check_eta(((str(spec), args.d),), **kwargs))
        else:
            results.extend(run_checks([name], **kwargs))
    passed = all(r.passed for r in results)
    tolerances = {r.name: r.tol for r in results}
    payload = {"checks": [r.to_json() for r in results], "passed": passed}
    text = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}  {r.value:.3e} <= {r.tol:.1e}"
            + (f"  [{r.detail}]" if r.detail else "") for r in results]
    text.append("all checks passed" if passed else "some checks FAILED")
    _finish(args, _manifest(args, "verify", tolerances=tolerances), payload, "\n".join(text) + "\n")
    return EXIT_OK if passed else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"numerical tolerance (decompose default {DEFAULT_TOL:g})")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="parallel workers for batch decompose")
    common.add_argument("--timing", action="store_true",
                        help="record wall-clock duration in the manifest (breaks byte-stability)")

    parser = argparse.ArgumentParser(
        prog="latticeoptics",
        description="Synthesize, decompose and simulate triangular multiport interferometers.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="lattice parameters for a target unitary")
    p.add_argument("--target", nargs="+", required=True, help="matrix JSON file(s); - for stdin")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("synthesize", parents=[common], help="lattice unitary from parameters")
    p.add_argument("--params", required=True, help="lattice parameter JSON (decompose output works)")
    p.add_argument("--spec", default="1", help="1 | nB | nF | nD | partial:cB,cF,...")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("generators", parents=[common], help="export the generator set")
    p.add_argument("--spec", required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("simulate", parents=[common], help="run an interference scenario")
    p.add_argument("--scenario", required=True, help="hom | bell | scenario JSON file")
    p.add_argument("--theta", type=float, default=None, help="splitter angle (default pi/2)")
    p.add_argument("--oracle", action="store_true", help="cross-check against the path oracle")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("target", parents=[common], help="emit a reference target matrix")
    p.add_argument("--kind", choices=("dft", "wigner"), required=True)
    p.add_argument("--d", type=int)
    p.add_argument("--s", type=float)
    p.add_argument("--theta", type=float)
    p.set_defaults(func=cmd_target)

    p = sub.add_parser("verify", parents=[common], help="run the built-in self-test suite")
    p.add_argument("--check", action="append", help=f"one of {', '.join(CHECKS)} or all; repeatable")
    p.add_argument("--spec", default=None, help="fermionic spec for --check eta")
    p.add_argument("--d", type=int, default=4)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    args._start = time.perf_counter()
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except LatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
