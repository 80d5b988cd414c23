import numpy as np
import pytest

from ionic_cdw.certify import (CertReport, LocalizationInstance, SUITE, chessboard_value, diagonal_staggered_oracle,
                               localization_instance, model_state, parameter_grid, residual_report, run_entry,
                               run_suite, staggered, verify_chessboard_lattice, verify_contour_inequality,
                               verify_eshift, verify_estR, verify_first_step, verify_lemma_basic2,
                               verify_localization, verify_vacuum_and_q2, verify_zigzag, with_tolerance)
from ionic_cdw.model import ModelParams

CDW = ModelParams(0.1, 0.0, 1.0, 2.0, 10.0)


def test_report_pass_rule_and_serialization():
    r = CertReport("x", dict(a=1.0), 1.0, 2.0, 1.0, 0.0)
    assert r.passed
    assert not CertReport("x", {}, 2.0, 1.0, -1.0, 0.5).passed
    assert CertReport("x", {}, 2.0, 1.0, -1.0, 1.0).passed
    skipped = CertReport("x", {}, 0.0, 0.0, -5.0, 0.0, status="hypothesis not met")
    assert skipped.passed and "SKIP" in skipped.line()
    a = residual_report("r", dict(p=0.5), 1e-12, wall_time=3.0)
    b = residual_report("r", dict(p=0.5), 1e-12, wall_time=7.0)
    assert a.to_json() == b.to_json()
    assert not with_tolerance(a, 0.0).passed


def test_slacks_reproducible():
    p = parameter_grid(1, seed=3)[0]
    a = [r.slack for r in verify_contour_inequality(p)]
    b = [r.slack for r in verify_contour_inequality(model_state(p).params)]
    assert a == b
    assert parameter_grid(4, seed=3) == parameter_grid(4, seed=3)


def test_zigzag_report():
    assert verify_zigzag(CDW).passed


def test_first_step_example():
    r = verify_first_step(CDW, (1, 0))
    assert r.passed and r.params["j"] == "(-1, 0)"


def test_first_step_beta_zero_closed_form():
    r = verify_first_step(ModelParams(0.3, 1.0, 1.0, 1.0, 0.0), (1, 0))
    # uniform state: <q q> = 0, <P0> = 1/2, <P+ P-> = 3/4 * 1/4
    assert abs(r.left) < 1e-14
    assert abs(r.right - (1 - 1.5 - 2 * 3 / 16 - 2 * 3 / 16)) < 1e-14
    assert r.passed


def test_contour_inequality_extremes():
    for p in (ModelParams(0.0, 0.0, 0.5, 4.0, 30.0), ModelParams(0.5, 1.0, 1.0, 1.0, 0.0)):
        reps = verify_contour_inequality(p)
        assert len(reps) == 3 and all(r.passed for r in reps)


def test_chessboard_lattice():
    reps = verify_chessboard_lattice(CDW)
    assert len(reps) == 12 and all(r.passed for r in reps)
    assert 0 <= chessboard_value(model_state(CDW)) <= 1
    singles = [r for r in reps if r.params["gamma"].count(",") == 0]
    assert all(r.info["boundary"] == 2 for r in singles)


def test_estR_edges():
    for d in (0.0, 0.5, 1e3):
        reps = verify_estR(CDW, d)
        assert all(r.passed for r in reps)
    high = [r for r in verify_estR(CDW, 1e3) if r.theorem == "estR-high"]
    assert all(r.left == 0 for r in high)


def test_eshift_cases():
    reps = verify_eshift(ModelParams(0.4, 1.0, 1.0, 2.0))
    assert all(r.passed and r.status == "checked" for r in reps)
    degenerate = verify_eshift(ModelParams(0.4, 0.0, 0.0, 0.0))
    assert degenerate[0].status == "hypothesis not met"


def test_lemma_basic2():
    reps = verify_lemma_basic2(ModelParams(1.0, 0.0, 0.0, 0.0))
    assert all(r.passed for r in reps)
    assert reps[0].info["trace"] == 0


def test_vacuum_q2():
    reps = {r.theorem: r for r in verify_vacuum_and_q2(ModelParams(0.05, 0.0, 1.0, 2.0, 20.0))}
    assert reps["vacuum"].info["e_vacuum"] == -12
    assert reps["q2-positive-S"].status == "checked" and reps["q2-positive-S"].slack > 0
    assert reps["q2-negative-S"].status == "hypothesis not met"
    assert abs(reps["q2-complement"].left) <= 1e-12
    off = {r.theorem: r for r in verify_vacuum_and_q2(ModelParams(0.05, 4.0, 0.0, 0.0, 5.0))}
    assert off["vacuum-ground"].status == "hypothesis not met"
    assert all(r.passed for r in off.values())


def test_localization_trivial_and_random(rng):
    n = 8
    A = np.diag(np.arange(1.0, n + 1))
    psi = np.eye(n)[0]
    N = np.eye(n)[:, -1:]
    inst = LocalizationInstance(A, np.zeros((n, n)), 0.0, 1.0, psi, 5.0, N, 4)
    r = verify_localization(inst)
    assert r.left == 0 and r.right == 0 and r.passed
    for _ in range(20):
        assert verify_localization(localization_instance(rng)).passed


def test_localization_rejects_bad_instances(rng):
    inst = localization_instance(rng)
    bad = LocalizationInstance(inst.A, inst.B, inst.eps, inst.lam, inst.psi, inst.lam + 1e-9, inst.N, inst.d)
    assert bad.gamma >= 1
    with pytest.raises(ValueError, match="gamma"):
        verify_localization(bad)
    wrong = LocalizationInstance(inst.A, 10 * inst.B + np.eye(len(inst.A)), inst.eps, inst.lam, inst.psi, inst.rho,
                                 inst.N, inst.d)
    with pytest.raises(ValueError):
        verify_localization(wrong)


def test_diagonal_oracle_matches_ed_at_t_zero():
    p = ModelParams(0.0, 0.3, 1.0, 2.0, 3.0)
    for j in ((1, 0), (0, 1), (1, 1)):
        assert abs(diagonal_staggered_oracle(p, j) - staggered(p, j)) < 1e-12


def test_suite_registry():
    with pytest.raises(ValueError):
        run_entry("nope")
    with pytest.raises(ValueError):
        run_suite(["zigzag", "nope"])
    res = run_suite(["trend"])
    assert list(res) == ["trend"] and all(r.passed for r in res["trend"])
    assert {"zigzag", "rp-lattice", "chess-modified", "peierls"} <= set(SUITE)
