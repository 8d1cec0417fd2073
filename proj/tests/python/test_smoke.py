import json
import math

import numpy as np
import pytest

import ktop


def test_spin_matrices_commute_correctly():
    s = ktop.spin_matrices(4)
    comm = s["jx"] @ s["jy"] - s["jy"] @ s["jx"]
    assert np.allclose(comm, 1j * s["jz"], atol=1e-12)
    assert np.allclose(np.diag(s["jz"]).real, [2, 1, 0, -1, -2])


def test_coherent_state_expectations():
    jx, jy, jz = ktop.coherent_expectations(6, 1.0, 0.7)
    assert jz == pytest.approx(3 * math.cos(1.0))
    v = ktop.coherent_vector(6, 1.0, 0.7)
    assert np.linalg.norm(v) == pytest.approx(1.0)
    s = ktop.spin_matrices(6)
    assert np.vdot(v, s["jx"] @ v).real == pytest.approx(jx)


def test_moment_propagator_matches_density_matrix():
    two_j, k = 6, 3.0
    v = ktop.coherent_vector(two_j, 1.0, 0.7)
    u = ktop.floquet_operator(two_j, k)
    rho = np.outer(v, v.conj())
    f = ktop.moments_from_delta(two_j, 1.0, 0.7)
    for _ in range(10):
        rho = u @ rho @ u.conj().T
        f = ktop.quantum_step(f, k)
    assert np.max(np.abs(f - ktop.moments_from_density(rho))) < 1e-9


def test_rotation_matrix_two_j_one():
    r = ktop.rotation_matrix(1)
    assert r.shape == (4, 4)
    assert np.all(np.abs(r) == 0.5)


def test_classical_maps_agree():
    g = 0.3 - 0.2j
    x, y, z = 2 * g.real / (1 + abs(g) ** 2), 2 * g.imag / (1 + abs(g) ** 2), (1 - abs(g) ** 2) / (1 + abs(g) ** 2)
    p = ktop.classical_step([x, y, z], 3.0)
    g2 = ktop.classical_step_gamma(g, 3.0)
    assert g2 == pytest.approx(complex(p[0], p[1]) / (1 + p[2]))


def test_grid_point_and_errors():
    rows = ktop.run_grid_point(json.dumps({"steps": 5}), 4, 1.0)
    assert len(rows) == 6
    assert rows[-1]["max_abs_moment_residual"] < 1e-9
    with pytest.raises(ktop.ConfigError):
        ktop.run_grid_point('{"bogus": 1}', 4, 1.0)
    with pytest.raises(ktop.KtopError):
        ktop.unitary_exp(ktop.spin_matrices(1)["jplus"], 1.0)


def test_validate_quick():
    passed, report = ktop.validate(1)
    assert passed
    assert json.loads(report)["passed"] is True
    passed, _ = ktop.validate(1, kc_variant="paper")
    assert not passed
