"""Acceptance criteria, one test each.  Every test prints a single
``[criterion N] PASS|FAIL ...`` line; run ``python3 tests/test_acceptance.py``
to get just the twelve lines."""
import time

import numpy as np
import pytest

from ionic_cdw import certify as C
from ionic_cdw.model import ModelParams, charge_projectors

SEED = 0
GRID = 50


def grid(n=GRID, seed=SEED):
    return C.parameter_grid(n, seed)


def summarize(reports):
    checked = [r for r in reports if r.status == "checked"]
    bad = [r for r in checked if not r.passed]
    worst = min(checked, key=lambda r: r.slack / max(r.tol, 1e-300) if r.tol else r.slack)
    return not bad and bool(checked), bad, worst, len(checked)


def detail(reports):
    ok, bad, worst, n = summarize(reports)
    msg = f"{n} checks, {len(bad)} failed, worst slack {worst.slack:.3e} (tol {worst.tol:.1e}, {worst.theorem})"
    if bad:
        msg += f"; first failure {bad[0].theorem} {C._fmt_params(bad[0].params)} slack {bad[0].slack:.3e}"
    return ok, msg


def criterion_1():
    t0 = time.perf_counter()
    reps = [C.verify_zigzag(p) for p in C.parameter_grid(20, SEED)]
    dt = time.perf_counter() - t0
    ok, msg = detail(reps)
    return ok and dt < 30, f"zigzag identity: {msg}; {dt:.2f}s"


def criterion_2():
    reps = [C.verify_staggered(p) for p in C.parameter_grid(20, SEED)]
    ok, msg = detail(reps)
    return ok, f"staggered equivalence: {msg}"


def criterion_3():
    reps = [C.verify_first_step(p) for p in grid()]
    ok, msg = detail(reps)
    return ok, f"key inequality: {msg}"


def criterion_4():
    reps = [r for p in grid() for r in C.verify_contour_inequality(p)]
    ok, msg = detail(reps)
    return ok, f"contour bound: {msg}"


def criterion_5():
    reps = [r for p in grid() for r in C.verify_chessboard_lattice(p)]
    ok, msg = detail(reps)
    return ok, f"lattice chessboard bound: {msg}"


def criterion_6():
    rng = np.random.default_rng([SEED, 1])
    # 10 parameter points x (10 vertical + 10 horizontal) = 200 lattice trials
    lattice = [r for p in C.parameter_grid(10, SEED) for r in C.verify_rp_lattice(p, rng, trials=10)]
    abstract = C.verify_dls(np.random.default_rng([SEED, 2]), trials=500)
    ok_l, msg_l = detail(lattice)
    ok_a, msg_a = detail(abstract)
    n_trials = len(lattice) // 2
    return ok_l and ok_a and n_trials == 200, f"RP lattice ({n_trials} trials): {msg_l} | DLS + trace lemma: {msg_a}"


def criterion_7():
    std = C.verify_chess_standard(np.random.default_rng([SEED, 4]), trials=100)
    std = [r for r in std if r.params.get("functional") == "ising ring"]
    mod = C.verify_chess_modified(np.random.default_rng([SEED, 5]), trials=100)
    ok_s, msg_s = detail(std)
    ok_m, msg_m = detail(mod)
    return ok_s and ok_m, f"standard 4-cell ring: {msg_s} | modified 5-cell ring: {msg_m}"


def criterion_8():
    reps = []
    for p in grid(20):
        reps += C.verify_eshift(p)
        reps += C.verify_estR(p)
        reps += C.verify_lemma_basic2(p)
        reps += [r for r in C.verify_vacuum_and_q2(p) if r.theorem in ("vacuum", "vacuum-ground")]
    ok, msg = detail(reps)
    return ok, f"spectral shift and bounds chain: {msg}"


def criterion_9():
    rng = np.random.default_rng([SEED, 6])
    reps = []
    for _ in range(100):
        inst = C.localization_instance(rng)
        assert 8 <= inst.A.shape[0] <= 32 and not inst.hypotheses()
        reps.append(C.verify_localization(inst))
    ok, msg = detail(reps)
    return ok and len(reps) == 100, f"localization: {msg}"


def criterion_10():
    reps = []
    for U, V, D in ((0.0, 1.0, 2.0), (3.0, 1.0, 4.0)):
        for beta in (5.0, 20.0):
            for t in (0.02, 0.1):
                reps += [r for r in C.verify_vacuum_and_q2(ModelParams(t, U, V, D, beta))
                         if r.theorem in ("q2-positive-S", "q2-negative-S")]
    checked = [r for r in reps if r.status == "checked"]
    branches = {r.theorem for r in checked}
    ok = len(checked) == 8 and branches == {"q2-positive-S", "q2-negative-S"} and all(r.slack > 0 for r in checked)
    worst = min(checked, key=lambda r: r.slack)
    return ok, f"<q^2> bounds: {len(checked)} checks over both branches, min slack {worst.slack:.3e} ({worst.theorem})"


def criterion_11():
    j = (1, 0)
    p1 = ModelParams(0.1, 0.0, 1.0, 2.0, 1.0)
    p20 = p1.replace(beta=20.0)
    s1, s20 = C.staggered(p1, j), C.staggered(p20, j)
    oracle = C.diagonal_staggered_oracle(p20.replace(t=0.0), j)
    torus, fock = C.small_lattice()
    zero = charge_projectors(torus.origin, torus, fock).zero
    z_lo = C.model_state(ModelParams(0.02, 0.0, 1.0, 2.0, 20.0)).gibbs.expect_diag(zero)
    z_hi = C.model_state(ModelParams(0.5, 0.0, 1.0, 2.0, 1.0)).gibbs.expect_diag(zero)
    ok = s20 > s1 and s20 >= 0.9 * oracle and z_lo <= 0.1 * z_hi
    return ok, (f"trend: stag(beta=1)={s1:.6f}, stag(beta=20)={s20:.6f}, t=0 oracle={oracle:.6f}; "
                f"<P0>(beta=20,t=0.02)={z_lo:.3e} vs 0.1*<P0>(beta=1,t=0.5)={0.1 * z_hi:.3e}")


def criterion_12():
    counts = C.verify_peierls_counts(6, 10)
    series = C.verify_peierls_series()
    ok_c, msg_c = detail(counts)
    ok_s, msg_s = detail(series)
    return ok_c and ok_s, f"side-6 counts: {msg_c} | series: {msg_s}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]


def line(k, ok, msg):
    return f"[criterion {k}] {'PASS' if ok else 'FAIL'} {msg}"


@pytest.mark.parametrize("k", range(1, 13))
def test_criterion(k, capsys):
    ok, msg = CRITERIA[k - 1]()
    with capsys.disabled():
        print("\n" + line(k, ok, msg))
    assert ok, msg


if __name__ == "__main__":
    for k, fn in enumerate(CRITERIA, 1):
        print(line(k, *fn()))
