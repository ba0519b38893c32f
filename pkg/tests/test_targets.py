import math

import numpy as np
import pytest

from latticeoptics.exceptions import CapacityError, PreconditionError
from latticeoptics.generators import ParticleSpec, build_generator_set, spin_y
from latticeoptics.lattice import LatticeParams, assemble_unitary
from latticeoptics.matrix import expm_hermitian
from latticeoptics.targets import (
    Scenario,
    bell_scattering,
    boson_bs_oracle,
    dft,
    hom_3port_params,
    hom_3port_simulation,
    path_assignment_oracle,
    wigner_d,
)

SQ2 = math.sqrt(2)


def test_dft_two():
    assert np.allclose(dft(2), np.array([[1, 1], [1, -1]]) / SQ2, atol=1e-15)


def test_dft_seven_entry():
    assert abs(dft(7)[1, 1] - np.exp(2j * np.pi / 7) / math.sqrt(7)) < 1e-15


@pytest.mark.parametrize("d", [1, 2, 5, 8, 16])
def test_dft_unitary(d):
    F = dft(d)
    assert np.linalg.norm(F @ F.conj().T - np.eye(d)) < 1e-13


@pytest.mark.parametrize("bad", [0, -3, 2.5, "4"])
def test_dft_rejects(bad):
    with pytest.raises(PreconditionError):
        dft(bad)


def test_wigner_half():
    t = 0.83
    c, s = math.cos(t / 2), math.sin(t / 2)
    W = wigner_d(0.5, t)
    assert np.allclose(np.abs(W), [[c, s], [s, c]], atol=1e-15)
    assert np.allclose(W, W.real)
    assert np.allclose(W @ W.T, np.eye(2), atol=1e-15)


def test_wigner_one_matches_two_boson_form():
    t = 1.234
    c, s = math.cos(t / 2), math.sin(t / 2)
    expected = np.array([
        [c * c, SQ2 * c * s, s * s],
        [-SQ2 * c * s, c * c - s * s, SQ2 * c * s],
        [s * s, -SQ2 * c * s, c * c],
    ])
    assert np.abs(wigner_d(1, t) - expected).max() < 1e-12


def test_wigner_one_hom_center():
    assert abs(wigner_d(1, math.pi / 2)[1, 1]) < 1e-15


@pytest.mark.parametrize("s", [0, 0.5, 1, 1.5, 2, 3.5])
def test_wigner_is_expm_of_spin(s, rng):
    t = rng.uniform(0, 2 * math.pi)
    n = int(2 * s) + 1
    assert np.abs(wigner_d(s, t) - expm_hermitian(spin_y(n), t)).max() < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_wigner_equals_boson_splitter(n, rng):
    Y = build_generator_set(ParticleSpec.bosons(n), 2).Y[(1, 2)]
    for t in rng.uniform(0, 2 * math.pi, 5):
        assert np.abs(wigner_d(n / 2, t) - expm_hermitian(Y, t)).max() < 1e-12


@pytest.mark.parametrize("bad", [-0.5, 0.3, "x"])
def test_wigner_rejects(bad):
    with pytest.raises((PreconditionError, ValueError, TypeError)):
        wigner_d(bad, 0.1)


def test_boson_oracle_hom_input():
    out = boson_bs_oracle(1, 1, math.pi / 2)
    assert abs(out[1]) < 1e-15
    assert np.allclose(np.abs(out[[0, 2]]), 1 / SQ2, atol=1e-15)


def test_boson_oracle_single_particle():
    t = 0.7
    assert np.allclose(boson_bs_oracle(1, 0, t), [math.cos(t / 2), -math.sin(t / 2)], atol=1e-15)


def test_boson_oracle_two_in_one_port():
    t = 2.1
    c, s = math.cos(t / 2), math.sin(t / 2)
    out = boson_bs_oracle(2, 0, t)
    # moduli follow the first row of the two-boson form, signs its first column
    assert np.allclose(np.abs(out), np.abs([c * c, SQ2 * c * s, s * s]), atol=1e-15)
    assert np.allclose(out, [c * c, -SQ2 * c * s, s * s], atol=1e-15)


def test_boson_oracle_matches_generator_columns(rng):
    for n in range(1, 5):
        Y = build_generator_set(ParticleSpec.bosons(n), 2).Y[(1, 2)]
        for t in rng.uniform(0, 2 * math.pi, 20):
            U = expm_hermitian(Y, t)
            for M in range(n + 1):
                col = U[:, n - M]
                assert np.abs(boson_bs_oracle(M, n - M, t) - col).max() < 1e-11


def test_boson_oracle_normalised(rng):
    for M in range(4):
        for N in range(4):
            out = boson_bs_oracle(M, N, rng.uniform(0, 6))
            assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_boson_oracle_rejects_negative():
    with pytest.raises(PreconditionError):
        boson_bs_oracle(-1, 2, 0.3)


def test_hom_half_pi():
    res = hom_3port_simulation()
    assert res.coincidence_probability < 1e-12
    assert res.max_deviation < 1e-12
    assert res.passed
    R = res.scenario.params.reflectivity()
    assert R[(1, 3)] == pytest.approx(0.25, abs=1e-14)
    assert R[(2, 3)] == pytest.approx(2 / 3, abs=1e-14)
    assert R[(1, 2)] == pytest.approx(2 / 3, abs=1e-14)


def test_hom_zero_is_identity():
    res = hom_3port_simulation(0.0)
    assert np.abs(res.unitary - np.eye(3)).max() < 1e-15


@pytest.mark.parametrize("theta", [math.pi / 3, 0.4, 1.9, 2.8])
def test_hom_sweep_matches_wigner(theta):
    res = hom_3port_simulation(theta)
    assert res.max_deviation < 1e-12
    assert res.coincidence_probability == pytest.approx(math.cos(theta) ** 2, abs=1e-12)


def test_hom_params_mapping():
    t = 1.1
    sin2 = math.sin(t / 2) ** 2
    R = hom_3port_params(t).reflectivity()
    assert R[(1, 3)] == pytest.approx(sin2**2, abs=1e-15)
    assert R[(1, 2)] == pytest.approx(2 * sin2 / (sin2 + 1), abs=1e-15)


def test_bell_minus_invariant():
    res = bell_scattering(math.pi / 2)
    minus = np.array([0, 1, -1, 0]) / SQ2
    assert np.abs(res.psi_minus_out - minus).max() < 1e-12


def test_bell_plus_goes_to_noon():
    res = bell_scattering(math.pi / 2)
    out = res.psi_plus_out
    assert abs(out[1]) < 1e-12 and abs(out[2]) < 1e-12
    assert np.allclose(np.abs(out[[0, 3]]), 1 / SQ2, atol=1e-12)


def test_bell_product_quarter():
    assert np.allclose(bell_scattering(math.pi / 2).product_probabilities, 0.25, atol=1e-12)


def test_bell_conserves_probability(rng):
    for t in rng.uniform(0, 2 * math.pi, 10):
        res = bell_scattering(t)
        for v in (res.psi_plus_out, res.psi_minus_out):
            assert abs(np.linalg.norm(v) - 1) < 1e-12
        assert abs(res.product_probabilities.sum() - 1) < 1e-12


def test_scenario_requires_normalised_input():
    p = LatticeParams(2, {}, {})
    with pytest.raises(PreconditionError):
        Scenario(ParticleSpec.single(), 2, np.array([1.0, 1.0]), p)


@pytest.mark.parametrize("spec,d", [("1", 4), ("2B", 3), ("2F", 4), ("3B", 3), ("2D", 3)])
def test_scenarios_conserve_probability(spec, d, rng):
    gs = build_generator_set(spec, d)
    psi = rng.normal(size=gs.dim) + 1j * rng.normal(size=gs.dim)
    psi /= np.linalg.norm(psi)
    sc = Scenario(gs.spec, d, psi, LatticeParams.random(d, rng))
    assert abs(np.linalg.norm(sc.output_state()) - 1) < 1e-12


def test_oracle_2b3_named_entry(rng):
    params = LatticeParams.random(3, rng)
    gs = build_generator_set("2B", 3)
    U = assemble_unitary(params, gs)
    a, b = gs.labels.index((1, 1, 0)), gs.labels.index((0, 1, 1))
    amp = path_assignment_oracle("2B", 3, params, (1, 1, 0), (0, 1, 1))
    assert abs(amp - U[a, b]) < 1e-10


@pytest.mark.parametrize("spec,d", [("2B", 3), ("2F", 3), ("2D", 2)])
def test_oracle_matches_synthesis(spec, d, rng):
    gs = build_generator_set(spec, d)
    for _ in range(20):
        params = LatticeParams.random(d, rng)
        U = assemble_unitary(params, gs)
        got = np.array([
            [path_assignment_oracle(spec, d, params, la, lb) for lb in gs.labels] for la in gs.labels
        ])
        assert np.abs(got - U).max() < 1e-10


@pytest.mark.parametrize("spec,d", [("3B", 3), ("3F", 4), ("2F", 4), ("3D", 2), ("1", 4)])
def test_oracle_matches_synthesis_wider(spec, d, rng):
    gs = build_generator_set(spec, d)
    params = LatticeParams.random(d, rng)
    U = assemble_unitary(params, gs)
    got = np.array([
        [path_assignment_oracle(spec, d, params, la, lb) for lb in gs.labels] for la in gs.labels
    ])
    assert np.abs(got - U).max() < 1e-10


def test_oracle_two_fermions_two_ports(rng):
    for _ in range(5):
        params = LatticeParams.random(2, rng)
        amp = path_assignment_oracle("2F", 2, params, (1, 1), (1, 1))
        assert abs(abs(amp) - 1) < 1e-12


def test_oracle_distinguishable_bell_form():
    params = LatticeParams(2, {(1, 2): math.pi / 2}, {})
    gs = build_generator_set("2D", 2)
    U = expm_hermitian(gs.Y[(1, 2)], math.pi / 2)
    got = np.array([
        [path_assignment_oracle("2D", 2, params, la, lb) for lb in gs.labels] for la in gs.labels
    ])
    assert np.abs(got - U).max() < 1e-12
    assert np.allclose(np.abs(U), 0.5, atol=1e-12)


def test_oracle_caps(rng):
    with pytest.raises(CapacityError):
        path_assignment_oracle("4B", 3, LatticeParams.random(3, rng), (4, 0, 0), (0, 4, 0))
    with pytest.raises(CapacityError):
        path_assignment_oracle("2B", 5, LatticeParams.random(5, rng), (2, 0, 0, 0, 0), (0, 2, 0, 0, 0))


def test_oracle_rejects_unknown_state(rng):
    with pytest.raises(PreconditionError):
        path_assignment_oracle("2B", 3, LatticeParams.random(3, rng), (1, 1, 1), (0, 2, 0))
