import math

import numpy as np
import pytest
from scipy.linalg import expm

from ionic_cdw.model import ModelParams, build_T_W
from ionic_cdw.thermal import (EigenSystem, Gibbs, ModelState, log_partition, spectral_window, staggered_correlation,
                               staggered_correlation_sectors, thermal_average, transformed_via_zigzag)


def test_thermal_average_against_expm(rng):
    H = rng.normal(size=(6, 6))
    H = H + H.T
    A = rng.normal(size=(6, 6))
    rho = expm(-0.7 * H)
    assert abs(thermal_average(A, H, 0.7) - np.trace(A @ rho) / np.trace(rho)) < 1e-12
    assert abs(log_partition(H, 0.7) - math.log(np.trace(rho))) < 1e-12


def test_beta_zero_is_uniform(rng):
    H = np.diag(rng.normal(size=5))
    A = np.diag(rng.normal(size=5))
    assert abs(thermal_average(A, H, 0.0) - np.trace(A) / 5) < 1e-14


def test_thermal_errors(rng):
    with pytest.raises(ValueError):
        thermal_average(np.eye(3), np.eye(4), 1.0)
    with pytest.raises(ValueError):
        thermal_average(np.eye(3), np.eye(3), -1.0)


def test_diagonal_gibbs_matches_boltzmann(rng):
    e = rng.uniform(-3, 3, 10)
    g = Gibbs(np.diag(e), 2.0)
    w = np.exp(-2.0 * e)
    assert np.allclose(g.rho_diag, w / w.sum(), atol=1e-14)
    assert abs(g.expect_diag(e) - float(np.dot(e, w) / w.sum())) < 1e-12


def test_large_beta_stable():
    H = np.diag([0.0, 1.0, 1000.0])
    g = Gibbs(H, 1e4)
    assert np.all(np.isfinite(g.rho)) and abs(g.rho[0, 0] - 1.0) < 1e-14


def test_staggered_equivalence_and_sector_route(torus1, fock1):
    p = ModelParams(0.6, 1.2, 0.7, 1.5, 2.0)
    st = ModelState(p, torus1, fock1)
    for k in range(4):
        h, ht = staggered_correlation(k, p, torus1, st)
        assert abs(h - ht) < 1e-10
        assert abs(staggered_correlation_sectors(k, p, torus1, fock1) - h) < 1e-10


def test_observables_move_through_zigzag(torus1, fock1):
    p = ModelParams(0.6, 1.2, 0.7, 1.5, 2.0)
    st = ModelState(p, torus1, fock1)
    A = fock1.charge(0) @ fock1.charge(1)
    assert abs(st.gibbs_H.expect(A) - st.gibbs.expect(transformed_via_zigzag(A, torus1, fock1))) < 1e-12


def test_spectral_window_edges(torus1, fock1):
    T, W = build_T_W(ModelParams(0.2, 0.0, 1.0, 2.0), torus1, fock1)
    eig = EigenSystem.of(T + W)
    assert eig.residual(T + W) < 1e-10
    w0 = spectral_window(eig, 0.0, 4)
    assert w0.rank == 1
    assert np.allclose(w0.projector @ w0.projector, w0.projector, atol=1e-12)
    assert spectral_window(eig, 1e6, 4).rank == fock1.dim
    assert np.allclose(w0.projector + w0.complement, np.eye(fock1.dim))
    with pytest.raises(ValueError):
        spectral_window(eig, -1.0, 4)


def test_peierls_bogoliubov_and_entropy(torus1, fock1, rng):
    for _ in range(5):
        p = ModelParams(*rng.uniform(0, 3, 4), float(rng.choice([0.5, 2.0, 10.0])))
        st = ModelState(p, torus1, fock1)
        logZ = st.gibbs.log_partition
        assert logZ >= -p.beta * st.Ht[0, 0] - 1e-10
        assert -p.beta * st.gibbs.expect(st.Ht).real >= logZ - 4 * math.log(4) - 1e-10
