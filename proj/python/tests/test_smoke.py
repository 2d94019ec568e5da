import math

import numpy as np
import pytest

import multiloc as ml


def test_mode_relabelling_round_trip():
    for n in (2, 3):
        for k in range(1, n + 1):
            for nu in (-2.5, -0.5, 0.5, 1.5):
                m = ml.beta_mode(n, k, nu)
                assert ml.beta_mode_inverse(n, m) == (k, nu)
    assert ml.beta_mode(2, 1, "1/2") == 1.5


def test_car_and_correlators():
    assert ml.iso_car_residual(2, "11/2") <= 1e-13
    assert ml.iso_correlator_residual(3, 4, 20, 5) <= 1e-9
    with pytest.raises(ValueError):
        ml.iso_car_residual(2, 0.3)


def test_pfaffian_against_determinant():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    a = a - a.T
    pf = ml.pfaffian(a)
    assert abs(pf**2 - np.linalg.det(a)) < 1e-9 * max(1.0, abs(pf) ** 2)


def test_central_terms():
    assert ml.vacuum_bracket("real", 2, 5.5) == pytest.approx(0.25, abs=1e-9)
    assert ml.vacuum_bracket("complex", 2, 5.5) == pytest.approx(0.5, abs=1e-9)
    assert ml.current_ccr(1, -1, "11/2")["residual"] <= 1e-10


def test_gauge_and_stress_modes():
    g = ml.gauge_mixing(math.pi / 2, 0.7, "13/2")
    assert g["finite"] <= 1e-6
    assert g["finite_without_phase"] > 0.5
    assert ml.stress_mode_residual(1, "11/2")["residual"] <= 1e-10


def test_diagonalizer():
    for n in range(1, 6):
        c = ml.diagonalizer_check(n)
        assert c["intertwining"] <= 1e-12 and c["spectrum"] <= 1e-10
    B, m = ml.diagonalizer_matrices(3)
    assert B.shape == (3, 3)
    assert np.allclose(m, [1, 0, -1])


def test_modular_geometry():
    fam = ml.IntervalFamily.symmetric(2, 0.2, 0.95)
    g = ml.ModularGeometry(fam)
    X0 = g.base_point
    for X in (0.3 * X0, X0, 4 * X0):
        O = g.O(X)
        assert np.allclose(O.T @ O, np.eye(2), atol=1e-10)
        assert np.abs(O - g.O_closed_form(X)).max() <= 1e-6
    assert np.array_equal(g.cocycle(0.0, X0), np.eye(2))
    assert g.cocycle_residual(0.05, -0.02, 1.2 * X0) <= 1e-7
    assert g.diagonalization_defect(0.8 * X0, 2.5 * X0) <= 1e-8
    K = ml.K_of_X(fam, X0)
    assert np.allclose(K, -K.T)
    assert g.trajectory_csv(3).startswith("X,O_11,O_12,O_21,O_22\n")


def test_general_family_orderings():
    fam = ml.IntervalFamily.general([(0.1, 0.5), (1.5, 2.2), (-2.5, -1.6)])
    g = ml.ModularGeometry(fam)
    X0 = g.base_point
    assert g.diagonalization_defect(0.8 * X0, 2.5 * X0) <= 1e-8
    assert g.diagonalization_defect(0.8 * X0, 2.5 * X0, ordering="left") > 1e-6
    for p in ml.preimages(fam, X0):
        assert abs(ml.uniformizer(fam, p["z"]) - X0) < 1e-9


def test_ramond():
    assert abs(ml.ramond_current_one_point(complex(0.6, 0.8))) <= 1e-10
    assert ml.ramond_twisted_residual(10, 2) <= 1e-8
    assert ml.ramond_L0_expectation(6) == pytest.approx(1 / 16, abs=1e-12)


def test_suite_report():
    rep = ml.run_suite("ramond", cutoff=6, samples=5, seed=3)
    assert rep["summary"]["all_pass"]
    assert {c["id"] for c in rep["checks"]} >= {"ramond.L0", "ramond.twisted"}
    again = ml.run_suite_json("ramond", cutoff=6, samples=5, seed=3)
    assert again == ml.run_suite_json("ramond", cutoff=6, samples=5, seed=3)
    with pytest.raises(ValueError):
        ml.run_suite("nope")
    with pytest.raises(ValueError):
        ml.run_suite("modular", intervals=[0.1, 0.5, 0.4])
