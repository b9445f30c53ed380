import math

import numpy as np
import pytest

import gapstab


def dimer_T(n, t1=-1.0, t2=-0.3):
    T = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        T[i, i + 1] = T[i + 1, i] = t1 if i % 2 == 0 else t2
    return T


def chain(n):
    lat = gapstab.build_lattice([n], [False])
    return gapstab.model_from_matrix(lat, dimer_T(n))


def test_lattice_distance():
    lat = gapstab.build_lattice([5], [True])
    assert lat.size == 5
    assert lat.distance(0, 4) == 1
    assert lat.diameter() == 2


def test_majorana_structure():
    model = chain(4)
    bdg = gapstab.build_A(model)
    A = bdg.A
    assert np.allclose(A, -A.T)
    assert np.allclose(A, A.conj().T)
    assert np.allclose(bdg.abs_A @ bdg.abs_A, A @ A)
    rep = gapstab.structure_report(bdg, model.gap)
    assert max(rep.values()) < 1e-10 or rep["min_eig_abs_A"] > 0


def test_doubling_identity():
    bdg = gapstab.build_A(chain(2))
    dh = gapstab.build_doubled_h0(bdg)
    res = gapstab.verify_doubling_identity(bdg, dh)
    assert res["spectrum"] < 1e-10
    # the "+tr" variant sits exactly 2 tr|A| away
    assert res["plus_trace_offset"] == pytest.approx(2 * dh.trace_abs_A, rel=1e-10)
    assert dh.gap > 0


def test_filter_values():
    assert gapstab.w_hat(0.0, 1.0) == pytest.approx(1.0)
    assert gapstab.w_hat(0.5, 1.0) == pytest.approx(math.exp(1 - 1 / 0.75))
    assert gapstab.w_hat(1.0, 1.0) == 0.0


def test_flow_is_unitary():
    bdg = gapstab.build_A(chain(2))
    H0 = gapstab.build_doubled_h0(bdg).H0
    rng = np.random.default_rng(3)
    X = rng.normal(size=H0.shape) + 1j * rng.normal(size=H0.shape)
    V = 0.05 * (X + X.conj().T)
    path = gapstab.integrate_flow(H0, V, gapstab.uniform_grid(1.0, 20))
    U = path[-1].U
    assert np.allclose(U.conj().T @ U, np.eye(len(U)), atol=1e-10)
    assert max(s.intertwining_residual for s in path) < 1e-8


def test_run_suite_from_text():
    text = "dims = [3]\nperiodic = [false]\nmax_doubled_sites = 3\n"
    report = gapstab.run_suite(text, ["geometry", "car"])
    assert report["status"] == "pass"
    assert report["summary"]["failed"] == 0
    assert report["config_hash"] == gapstab.config_hash(text)


def test_bad_config_raises():
    with pytest.raises(gapstab.GapstabError):
        gapstab.run_suite("dims = [2]\nperiodic = [true]\n", ["geometry"])
