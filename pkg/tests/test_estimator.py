import numpy as np
import pytest
from scipy.stats import unitary_group
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from latticeoptics import TriangularInterferometer
from latticeoptics.exceptions import NotUnitaryError, PreconditionError
from latticeoptics.generators import build_generator_set
from latticeoptics.lattice import LatticeParams, assemble_unitary
from latticeoptics.targets import dft


def test_fit_transform_reproduces_target(rng):
    U = unitary_group.rvs(5, random_state=rng)
    est = TriangularInterferometer().fit(U)
    assert est.n_ports_ == 5
    assert est.residual_ <= 1e-9
    assert np.linalg.norm(est.unitary_ - U) <= 1e-9
    X = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    assert np.abs(est.transform(X) - X @ U).max() < 1e-9
    assert np.abs(est.inverse_transform(est.transform(X)) - X).max() < 1e-12


def test_single_state_and_probabilities():
    est = TriangularInterferometer().fit(dft(4))
    probs = est.probabilities(np.array([1, 0, 0, 0]))
    assert probs.shape == (4,)
    assert np.allclose(probs, 0.25, atol=1e-12)


def test_params_round_trip_through_sklearn():
    est = TriangularInterferometer(spec="2B", tol=1e-8)
    assert est.get_params() == {"spec": "2B", "tol": 1e-8}
    twin = clone(est).set_params(spec="2F")
    assert twin.spec == "2F" and est.spec == "2B"


def test_not_fitted():
    with pytest.raises(NotFittedError):
        TriangularInterferometer().transform(np.ones(3))


def test_multi_particle_spec(rng):
    U = unitary_group.rvs(3, random_state=rng)
    est = TriangularInterferometer(spec="2B").fit(U)
    assert len(est.labels_) == 6
    expected = assemble_unitary(est.params_, build_generator_set("2B", 3))
    psi = np.zeros(6)
    psi[est.labels_.index((1, 1, 0))] = 1
    assert np.abs(est.transform(psi) - psi @ expected).max() < 1e-12


def test_fit_params_skips_solve(rng):
    p = LatticeParams.random(4, rng)
    est = TriangularInterferometer().fit_params(p.to_json())
    assert np.abs(est.unitary_ - assemble_unitary(p)).max() < 1e-15
    assert est.reflectivity_ == p.reflectivity()


def test_rejects_bad_input(rng):
    with pytest.raises(NotUnitaryError):
        TriangularInterferometer().fit(np.ones((3, 3)))
    est = TriangularInterferometer().fit(np.eye(3))
    with pytest.raises(PreconditionError):
        est.transform(np.ones(4))


def test_residual_gate():
    with pytest.raises(PreconditionError):
        TriangularInterferometer(tol=1e-30).fit(dft(5))
