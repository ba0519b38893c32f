import json
import math
import subprocess
import sys

import numpy as np
import pytest
from scipy.stats import unitary_group

from latticeoptics import golden
from latticeoptics.cli import main
from latticeoptics.generators import build_generator_set
from latticeoptics.lattice import LatticeParams, assemble_unitary
from latticeoptics.matrix import matrix_from_json, matrix_to_json
from latticeoptics.targets import dft


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_fourier7(tmp_path, capsys):
    target = _write(tmp_path / "f7.json", matrix_to_json(dft(7)))
    code, out, _ = _run(["decompose", "--target", target], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["residual"] <= 1e-9
    for (j, k), r in golden.FOURIER7_R.items():
        assert abs(res["R"][f"{j},{k}"] - r) <= 5e-4
    assert set(res["blocked_jumps"]) == {str(k) for k in range(1, 8)}
    assert res["manifest"]["command"] == "decompose"
    assert target in res["manifest"]["inputs"]


def test_decompose_identity(tmp_path, capsys):
    target = _write(tmp_path / "id4.json", matrix_to_json(np.eye(4)))
    code, out, _ = _run(["decompose", "--target", target], capsys)
    assert code == 0
    res = json.loads(out)
    assert all(v == 0.0 for v in res["theta"].values())
    assert all(v == 0.0 for v in res["phi"].values())


def test_decompose_non_unitary(tmp_path, capsys):
    M = np.eye(3)
    M[0, 1] = 0.5
    target = _write(tmp_path / "bad.json", matrix_to_json(M))
    code, out, err = _run(["decompose", "--target", target], capsys)
    assert code == 3
    assert out == ""
    assert "UU" in err or "unitary" in err


@pytest.mark.parametrize("content", ["not json", '{"rows": 2, "cols": 2, "data": [[1, 0]]}', "[1, 2]"])
def test_decompose_malformed(tmp_path, capsys, content):
    path = tmp_path / "m.json"
    path.write_text(content)
    code, _, err = _run(["decompose", "--target", str(path)], capsys)
    assert code == 2
    assert err


def test_decompose_missing_file(tmp_path, capsys):
    code, _, _ = _run(["decompose", "--target", str(tmp_path / "nope.json")], capsys)
    assert code == 2


def test_decompose_residual_flag(tmp_path, capsys):
    target = _write(tmp_path / "f5.json", matrix_to_json(dft(5)))
    code, _, err = _run(["decompose", "--target", target, "--tol", "1e-30"], capsys)
    assert code == 4
    assert "residual" in err


def test_decompose_batch_parallel(tmp_path, capsys):
    rng = np.random.default_rng(3)
    paths = [_write(tmp_path / f"u{i}.json", matrix_to_json(unitary_group.rvs(4 + i, random_state=rng)))
             for i in range(4)]
    code, out, _ = _run(["decompose", "--target", *paths, "--jobs", "3"], capsys)
    assert code == 0
    res = json.loads(out)["results"]
    assert [r["target"] for r in res] == paths
    code, out_serial, _ = _run(["decompose", "--target", *paths], capsys)
    assert json.loads(out_serial)["results"] == res


def test_decompose_synthesize_pipe(tmp_path, capsys):
    U = unitary_group.rvs(6, random_state=np.random.default_rng(8))
    target = _write(tmp_path / "u.json", matrix_to_json(U))
    params = tmp_path / "p.json"
    assert main(["decompose", "--target", target, "--out", str(params)]) == 0
    code, out, _ = _run(["synthesize", "--params", str(params)], capsys)
    assert code == 0
    V = matrix_from_json(json.loads(out)["matrix"])
    assert np.linalg.norm(V - U) <= 1e-9


def test_synthesize_zero_params(tmp_path, capsys):
    params = _write(tmp_path / "z.json", {"d": 3, "theta": {}, "phi": {}})
    code, out, _ = _run(["synthesize", "--params", params], capsys)
    assert code == 0
    assert np.array_equal(matrix_from_json(json.loads(out)["matrix"]), np.eye(3))


def test_synthesize_multi_particle(tmp_path, capsys):
    p = LatticeParams.random(3, np.random.default_rng(1))
    params = _write(tmp_path / "p.json", p.to_json())
    code, out, _ = _run(["synthesize", "--params", params, "--spec", "2B"], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["labels"] == ["|2,0,0>", "|1,1,0>", "|1,0,1>", "|0,2,0>", "|0,1,1>", "|0,0,2>"]
    expected = assemble_unitary(p, build_generator_set("2B", 3))
    assert np.abs(matrix_from_json(res["matrix"]) - expected).max() < 1e-15


def test_synthesize_fermion_capacity(tmp_path, capsys):
    params = _write(tmp_path / "p.json", {"d": 3, "theta": {}, "phi": {}})
    code, _, _ = _run(["synthesize", "--params", params, "--spec", "5F"], capsys)
    assert code == 5


def test_generators_byte_stable(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["generators", "--spec", "2B", "--d", "3", "--out", str(a)]) == 0
    assert main(["generators", "--spec", "2B", "--d", "3", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    res = json.loads(a.read_text())
    assert res["dim"] == 6
    for jk, entries in golden.Y[("2B", 3)].items():
        M = matrix_from_json(res["Y"][f"{jk[0]},{jk[1]}"])
        assert np.abs(M - golden.dense(entries, 6)).max() <= 1e-15


def test_generators_fermions_export_eta(capsys):
    code, out, _ = _run(["generators", "--spec", "2F", "--d", "4"], capsys)
    assert code == 0
    res = json.loads(out)
    assert "eta" in res and res["dim"] == 6


@pytest.mark.parametrize("spec", ["7Q", "partial:", "0B", "B2"])
def test_generators_bad_spec(capsys, spec):
    code, _, _ = _run(["generators", "--spec", spec, "--d", "3"], capsys)
    assert code == 2


def test_simulate_hom(capsys):
    code, out, _ = _run(["simulate", "--scenario", "hom", "--theta", "1.5707963"], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["coincidence_probability"] < 1e-12
    assert res["output"][1]["state"] == "|1,1>"


def test_simulate_bell_text(capsys):
    code, out, _ = _run(["simulate", "--scenario", "bell", "--format", "text"], capsys)
    assert code == 0
    assert out.startswith("psi+ ->")
    assert "|0,du>" in out


def test_simulate_custom_with_oracle(tmp_path, capsys):
    p = LatticeParams.random(3, np.random.default_rng(4))
    scenario = _write(tmp_path / "s.json", {
        "spec": "2F", "d": 3, "params": p.to_json(),
        "input": {"|1,1,0>": [0.6, 0], "|0,1,1>": [0, 0.8]},
    })
    code, out, _ = _run(["simulate", "--scenario", scenario, "--oracle"], capsys)
    assert code == 0
    res = json.loads(out)
    assert abs(res["total_probability"] - 1) < 1e-12
    assert res["oracle_max_deviation"] < 1e-10


def test_simulate_custom_unknown_state(tmp_path, capsys):
    scenario = _write(tmp_path / "s.json", {"spec": "2B", "d": 2, "input": {"|3,0>": 1}})
    code, _, err = _run(["simulate", "--scenario", scenario], capsys)
    assert code == 2
    assert "|3,0>" in err


def test_simulate_custom_unnormalised(tmp_path, capsys):
    scenario = _write(tmp_path / "s.json", {"spec": "1", "d": 2, "input": [1, 1]})
    code, _, _ = _run(["simulate", "--scenario", scenario], capsys)
    assert code == 2


def test_simulate_oracle_capacity(tmp_path, capsys):
    scenario = _write(tmp_path / "s.json", {"spec": "4B", "d": 2, "input": {"|4,0>": 1}})
    code, _, _ = _run(["simulate", "--scenario", scenario, "--oracle"], capsys)
    assert code == 5


def test_target_dft_and_wigner(capsys):
    code, out, _ = _run(["target", "--kind", "dft", "--d", "4"], capsys)
    assert code == 0
    assert np.abs(matrix_from_json(json.loads(out)["matrix"]) - dft(4)).max() < 1e-15
    code, out, _ = _run(["target", "--kind", "wigner", "--s", "1", "--theta", str(math.pi / 2)], capsys)
    assert code == 0
    W = matrix_from_json(json.loads(out)["matrix"])
    assert abs(W[1, 1]) < 1e-15


def test_target_missing_args(capsys):
    assert _run(["target", "--kind", "dft"], capsys)[0] == 2
    assert _run(["target", "--kind", "wigner", "--s", "1"], capsys)[0] == 2


def test_verify_default(capsys):
    code, out, _ = _run(["verify"], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["passed"]
    fixtures = [c for c in res["checks"] if c["name"].startswith("fixtures/")]
    assert fixtures and all(c["value"] <= 1e-10 for c in fixtures)


def test_verify_su3_text(capsys):
    code, out, _ = _run(["verify", "--check", "su3", "--format", "text"], capsys)
    assert code == 0
    assert "PASS  su3/closure" in out
    assert "f123=1" in out


def test_verify_eta_spec(capsys):
    code, out, _ = _run(["verify", "--check", "eta", "--spec", "2F", "--d", "4"], capsys)
    assert code == 0
    names = [c["name"] for c in json.loads(out)["checks"]]
    assert names == ["eta/2F,4/shared-index", "eta/2F,4/disjoint", "eta/2F,4/involution"]


def test_verify_failure_exit(capsys):
    code, out, _ = _run(["verify", "--check", "z", "--tol", "-1"], capsys)
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_unknown_check(capsys):
    assert _run(["verify", "--check", "nope"], capsys)[0] == 2


def test_timing_only_on_request(tmp_path, capsys):
    _, out, _ = _run(["target", "--kind", "dft", "--d", "2"], capsys)
    assert "duration_s" not in json.loads(out)["manifest"]
    _, out, _ = _run(["target", "--kind", "dft", "--d", "2", "--timing"], capsys)
    assert json.loads(out)["manifest"]["duration_s"] >= 0


def test_output_floats_round_trip(tmp_path, capsys):
    U = unitary_group.rvs(5, random_state=np.random.default_rng(2))
    target = _write(tmp_path / "u.json", matrix_to_json(U))
    _, out, _ = _run(["decompose", "--target", target], capsys)
    res = json.loads(out)
    p = LatticeParams.from_json(res)
    assert np.linalg.norm(assemble_unitary(p) - U) == pytest.approx(res["residual"], abs=1e-15)


def test_module_entry_and_stdin(tmp_path):
    f3 = json.dumps(matrix_to_json(dft(3)))
    proc = subprocess.run(
        [sys.executable, "-m", "latticeoptics", "decompose", "--target", "-"],
        input=f3, capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["residual"] <= 1e-9
