"""Finite-volume verifiers.  Each returns one or more ``CertReport`` records
with the measured slack; ``passed`` means ``slack >= -tol``."""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .contours import boundary, enumerate_connected_sets, peierls_partial_sum, peierls_series
from .fock import FockSpace, op_norm
from .lattice import build_torus, geometric_torus
from .model import (ModelParams, build_hamiltonian, build_T_W, charge_projectors, chessboard_projectors,
                    gauge_u, zigzag_unitary)
from .thermal import EigenSystem, Gibbs, ModelState, spectral_window

MATRIX_TOL = 1e-10
THERMAL_RTOL = 1e-8


@dataclass
class CertReport:
    theorem: str
    params: dict
    left: float
    right: float
    slack: float
    tol: float
    passed: bool = field(init=False)
    wall_time: float = 0.0
    info: dict = field(default_factory=dict)
    status: str = "checked"  # or "hypothesis not met"

    def __post_init__(self):
        self.passed = bool(self.status != "checked" or self.slack >= -self.tol)

    def record(self) -> dict:
        """Deterministic serialization (wall time omitted)."""
        d = asdict(self)
        d.pop("wall_time")
        return d

    def to_json(self) -> str:
        return json.dumps(self.record(), sort_keys=True, default=_jsonable)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        if self.status != "checked":
            flag = "SKIP"
        return f"[{flag}] {self.theorem} {_fmt_params(self.params)} slack={self.slack:.3e} tol={self.tol:.1e}"


def residual_report(theorem: str, params: dict, residual: float, tol: float = MATRIX_TOL, **kw) -> CertReport:
    """Report for an identity: ``left`` is the residual, ``right`` is 0."""
    return CertReport(theorem, params, float(residual), 0.0, -float(residual), tol, **kw)


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _fmt_params(p: dict) -> str:
    return "(" + ", ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in p.items()) + ")"


def _pdict(params: ModelParams, **extra) -> dict:
    d = dict(t=float(params.t), U=float(params.U), V=float(params.V), delta=float(params.delta), beta=float(params.beta))
    d.update(extra)
    return d


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@lru_cache(maxsize=None)
def small_lattice():
    """The L=1 torus with its Fock space (256 states)."""
    torus = build_torus(1)
    return torus, FockSpace(torus)


def model_state(params: ModelParams) -> ModelState:
    torus, fock = small_lattice()
    return ModelState(params, torus, fock)


def random_params(rng, beta_choices=(0.5, 2.0, 10.0), lo=0.0, hi=4.0) -> ModelParams:
    t, U, V, d = rng.uniform(lo, hi, size=4)
    return ModelParams(float(t), float(U), float(V), float(d), float(rng.choice(beta_choices)))


def parameter_grid(n: int, seed: int = 0, **kw) -> list[ModelParams]:
    rng = np.random.default_rng(seed)
    return [random_params(rng, **kw) for _ in range(n)]


# ---------------------------------------------------------------------------
# zigzag and staggered correlations
# ---------------------------------------------------------------------------

def verify_zigzag(params: ModelParams) -> CertReport:
    torus, fock = small_lattice()
    with _Timer() as tm:
        Z = _zigzag()
        H = build_hamiltonian(params, torus, fock)
        T, W = build_T_W(params, torus, fock)
        r = float(np.abs(Z @ H @ Z.conj().T - (T + W)).max())
    return residual_report("zigzag", _pdict(params), r, wall_time=tm.elapsed)


@lru_cache(maxsize=None)
def _zigzag():
    torus, fock = small_lattice()
    return zigzag_unitary(torus, fock)


def verify_staggered(params: ModelParams, state: ModelState | None = None) -> CertReport:
    torus, fock = small_lattice()
    state = model_state(params) if state is None else state
    with _Timer() as tm:
        worst, vals = 0.0, {}
        qo = fock.charge_diag(torus.origin)
        for k in range(torus.n_sites):
            qq = qo * fock.charge_diag(k)
            h = (1 - 2 * torus.parity(k)) * state.gibbs_H.expect_diag(qq)
            ht = state.gibbs.expect_diag(qq)
            worst = max(worst, abs(h - ht))
            vals[str(torus.sites[k])] = ht
    return residual_report("staggered", _pdict(params), worst, wall_time=tm.elapsed, info={"correlations": vals})


# ---------------------------------------------------------------------------
# key inequality, contour bound, chessboard bound
# ---------------------------------------------------------------------------

def verify_first_step(params: ModelParams, j=None, state: ModelState | None = None, tol: float = MATRIX_TOL) -> CertReport:
    torus, fock = small_lattice()
    state = model_state(params) if state is None else state
    j = (1, 0) if j is None else j
    k = j if isinstance(j, int) else torus.site_index(j)
    o = torus.origin
    with _Timer() as tm:
        g = state.gibbs
        po, pj = charge_projectors(o, torus, fock), charge_projectors(k, torus, fock)
        lhs = g.expect_diag(fock.charge_diag(o) * fock.charge_diag(k))
        rhs = (1 - 3 * g.expect_diag(po.zero) - 2 * g.expect_diag(po.plus * pj.minus)
               - 2 * g.expect_diag(po.minus * pj.plus))
    return CertReport("first-step", _pdict(params, j=str(torus.sites[k])), lhs, rhs, lhs - rhs, tol, wall_time=tm.elapsed)


def _boundary_product(contour, torus, fock):
    d = np.ones(fock.dim)
    for i, j in contour.pairs:
        d = d * charge_projectors(i, torus, fock).plus * charge_projectors(j, torus, fock).minus
    return d


@lru_cache(maxsize=None)
def _small_contours():
    """All connected proper subsets of the side-2 torus with their boundaries."""
    torus, _ = small_lattice()
    out = []
    for s in enumerate_connected_sets(torus, torus.n_sites):
        if len(s) < torus.n_sites:
            out.append(boundary(s, torus))
    return tuple(out)


def verify_contour_inequality(params: ModelParams, n=None, state: ModelState | None = None,
                              rtol: float = THERMAL_RTOL) -> list[CertReport]:
    """<P+_m P-_n> <= sum over connected gamma (m in, n out) of
    <prod over the boundary of P+_i P-_j>, with m the origin."""
    torus, fock = small_lattice()
    state = model_state(params) if state is None else state
    m = torus.origin
    targets = [k for k in range(torus.n_sites) if k != m] if n is None else [n if isinstance(n, int) else torus.site_index(n)]
    g = state.gibbs
    out = []
    for nn in targets:
        with _Timer() as tm:
            lhs = g.expect_diag(charge_projectors(m, torus, fock).plus * charge_projectors(nn, torus, fock).minus)
            rhs, count = 0.0, 0
            for c in _small_contours():
                if m in c.sites and nn not in c.sites:
                    rhs += g.expect_diag(_boundary_product(c, torus, fock))
                    count += 1
        tol = rtol * max(abs(lhs), abs(rhs))
        out.append(CertReport("contour", _pdict(params, n=str(torus.sites[nn])), lhs, rhs, rhs - lhs, tol,
                              wall_time=tm.elapsed, info={"contours": count}))
    return out


def chessboard_value(state: ModelState) -> float:
    torus, fock = small_lattice()
    plus, minus = chessboard_projectors(torus, fock)
    g = state.gibbs
    return max(g.expect_diag(plus), g.expect_diag(minus))


def verify_chessboard_lattice(params: ModelParams, state: ModelState | None = None,
                              rtol: float = THERMAL_RTOL) -> list[CertReport]:
    torus, fock = small_lattice()
    state = model_state(params) if state is None else state
    P = chessboard_value(state)
    out = []
    for c in _small_contours():
        with _Timer() as tm:
            lhs = state.gibbs.expect_diag(_boundary_product(c, torus, fock))
            rhs = P ** (c.length / (2 * torus.n_sites))
        tol = rtol * max(abs(lhs), abs(rhs))
        out.append(CertReport("chessboard", _pdict(params, gamma=str(sorted(c.sites))), lhs, rhs, rhs - lhs, tol,
                              wall_time=tm.elapsed, info={"P": P, "boundary": c.length}))
    return out


# ---------------------------------------------------------------------------
# low/high spectral split
# ---------------------------------------------------------------------------

def default_delta(beta: float, xi: float = 0.5) -> float:
    return beta ** (-xi) if beta > 0 else 1.0


def verify_estR(params: ModelParams, delta: float | None = None, state: ModelState | None = None,
                rtol: float = THERMAL_RTOL) -> list[CertReport]:
    torus, fock = small_lattice()
    state = model_state(params) if state is None else state
    delta = default_delta(params.beta) if delta is None else delta
    eig = state.gibbs.eig
    win = spectral_window(eig, delta, torus.n_sites)
    keep = np.zeros(fock.dim, dtype=bool)
    keep[:win.rank] = True
    p = eig.weights(params.beta)
    V = eig.eigenvectors
    n = torus.n_sites
    out = []
    for name, diag in zip(("+", "-"), chessboard_projectors(torus, fock)):
        with _Timer() as tm:
            overlap = ((np.abs(V) ** 2) * diag[:, None]).sum(axis=0)  # <v_k|P|v_k>
            r_low = float(np.dot(p[keep], overlap[keep]))
            r_high = float(np.dot(p[~keep], overlap[~keep]))
            trace_pe = float(overlap[keep].sum())
            bound_low = 2.0 ** n * math.sqrt(max(trace_pe, 0.0))
            hs_low = float(np.sqrt(np.sum(p ** 2))) * math.sqrt(max(trace_pe, 0.0))
            bound_high = 4.0 ** n * math.exp(-params.beta * delta * n)
            total = state.gibbs.expect_diag(diag)
        common = dict(delta=delta, omega=name)
        out.append(CertReport("estR-low", _pdict(params, **common), abs(r_low), bound_low, bound_low - abs(r_low),
                              rtol * max(bound_low, abs(r_low)), wall_time=tm.elapsed,
                              info={"hilbert_schmidt_bound": hs_low, "trace_PE": trace_pe}))
        out.append(CertReport("estR-high", _pdict(params, **common), abs(r_high), bound_high, bound_high - abs(r_high),
                              rtol * max(bound_high, abs(r_high))))
        split_res = abs(r_low + r_high - total)
        out.append(residual_report("estR-split", _pdict(params, **common), split_res))
    return out


# ---------------------------------------------------------------------------
# spectral shift and the bounds chain
# ---------------------------------------------------------------------------

def shift_constant(params: ModelParams) -> float:
    return 6 * (abs(params.S) + params.V) + params.delta


def ground_energy_t1(params: ModelParams) -> float:
    torus, fock = small_lattice()
    T, W = build_T_W(params.replace(t=1.0), torus, fock)
    return float(np.linalg.eigvalsh(T + W)[0])


def verify_eshift(params: ModelParams, n_grid: int = 25, tol: float = MATRIX_TOL) -> list[CertReport]:
    """B = T moves the spectral content of A = W - e(t=1) down by at most G."""
    torus, fock = small_lattice()
    T, W = build_T_W(params, torus, fock)
    a = np.diag(W) - ground_energy_t1(params)
    G = shift_constant(params)
    out = []
    with _Timer() as tm:
        rows, cols = np.nonzero(np.abs(T) > 0)
        drop = float(np.max(a[cols] - a[rows], initial=0.0))
        levels = np.unique(np.round(a, 12))
        grid = np.unique(np.concatenate([levels, np.linspace(a.min(), a.max() + G, n_grid)]))
        worst = 0.0
        if G > 0 or not np.any(T):
            for e in grid:
                lo = a < e - G
                hi = a >= e
                if lo.any() and hi.any():
                    worst = max(worst, op_norm(T[np.ix_(lo, hi)]))
    status = "checked"
    if G == 0 and np.any(T):
        status = "hypothesis not met"
    out.append(residual_report("eshift", _pdict(params, G=G), worst, tol, wall_time=tm.elapsed,
                               info={"largest_drop": drop, "grid_points": int(grid.size)}, status=status))
    # +-B <= tA, A >= 0 and the gauge relations behind them
    A = np.diag(a)
    scale = max(1.0, float(np.abs(a).max()), op_norm(T))
    e_plus = float(np.linalg.eigvalsh(params.t * A - T)[0])
    e_minus = float(np.linalg.eigvalsh(params.t * A + T)[0])
    out.append(CertReport("form-bound", _pdict(params), -min(e_plus, e_minus), 0.0, min(e_plus, e_minus),
                          MATRIX_TOL * scale))
    out.append(CertReport("A-positive", _pdict(params), -float(a.min()), 0.0, float(a.min()), MATRIX_TOL * scale))
    u = gauge_u(torus, fock)
    r_gauge = max(float(np.abs(u @ T @ u + T).max()), float(np.abs(u @ W @ u - W).max()))
    out.append(residual_report("gauge", _pdict(params), r_gauge))
    return out


def verify_lemma_basic2(params: ModelParams) -> list[CertReport]:
    torus, fock = small_lattice()
    n = torus.n_sites
    T, _ = build_T_W(params, torus, fock)
    nt = op_norm(T)
    bound_T = 8 * params.t * n
    out = [CertReport("pairing-norm", _pdict(params), nt, bound_T, bound_T - nt, MATRIX_TOL * max(1.0, bound_T),
                      info={"trace": float(np.trace(T))})]
    e1 = ground_energy_t1(params)
    lower = -(8 + params.S + params.delta / 2) * n
    status = "checked" if params.cdw_regime else "hypothesis not met"
    out.append(CertReport("ground-lower", _pdict(params), lower, e1, e1 - lower, MATRIX_TOL * max(1.0, abs(lower)),
                          status=status))
    return out


# ---------------------------------------------------------------------------
# localization principle
# ---------------------------------------------------------------------------

@dataclass
class LocalizationInstance:
    A: np.ndarray
    B: np.ndarray
    eps: float
    lam: float
    psi: np.ndarray
    rho: float
    N: np.ndarray  # orthonormal columns spanning the subspace
    d: int

    @property
    def gamma(self) -> float:
        return self.eps * self.rho / (self.rho - self.lam)

    @property
    def P_N(self) -> np.ndarray:
        return self.N @ self.N.conj().T

    def P_rho(self) -> np.ndarray:
        w, v = np.linalg.eigh(self.A)
        keep = w >= self.rho
        return v[:, keep] @ v[:, keep].conj().T

    def hypotheses(self, tol: float = 1e-10) -> list[str]:
        """Names of violated hypotheses."""
        bad = []
        A, B = self.A, self.B
        scale = max(1.0, op_norm(A))
        if np.linalg.eigvalsh(A)[0] < -tol * scale:
            bad.append("A >= 0")
        if not 0 <= self.eps < 1:
            bad.append("0 <= eps < 1")
        if min(np.linalg.eigvalsh(self.eps * A - B)[0], np.linalg.eigvalsh(self.eps * A + B)[0]) < -tol * scale:
            bad.append("+-B <= eps A")
        if np.abs((A + B) @ self.psi - self.lam * self.psi).max() > tol * scale:
            bad.append("eigenpair")
        if not self.rho > self.lam:
            bad.append("rho > lambda")
        if not self.gamma < 1:
            bad.append("gamma < 1")
        if self.d < 1:
            bad.append("d >= 1")
        if bad:
            return bad
        # iterates of B (A - lambda)^-1 on N stay inside ran E_A[rho, inf); the
        # inverse is only ever applied there, where A - lambda >= rho - lambda > 0
        w, v = np.linalg.eigh(A)
        keep = w >= self.rho
        Q = np.eye(A.shape[0]) - self.P_rho()
        K = B @ (v[:, keep] / (w[keep] - self.lam)) @ v[:, keep].conj().T
        chi = self.N.copy()
        for _ in range(self.d):
            if np.abs(Q @ chi).max() > tol * max(1.0, np.abs(chi).max()):
                bad.append("iterates stay in M_rho")
                break
            chi = K @ chi
        return bad


def localization_instance(rng, dim: int | None = None, eps: float | None = None, max_tries: int = 200) -> LocalizationInstance:
    """A diagonal ascending, B tridiagonal between adjacent levels, N the top
    level; d is the number of steps the chain needs to leave M_rho."""
    for _ in range(max_tries):
        n = int(rng.integers(8, 33)) if dim is None else dim
        e = float(rng.uniform(0.1, 0.6)) if eps is None else eps
        a = np.sort(rng.uniform(0.2, 1.0, size=n).cumsum())
        A = np.diag(a)
        b = e * np.sqrt(a[:-1] * a[1:]) / 2 * rng.uniform(-1, 1, size=n - 1)
        B = np.diag(b, 1) + np.diag(b, -1)
        w, v = np.linalg.eigh(A + B)
        lam, psi = float(w[0]), v[:, 0]
        lo = lam / (1 - e)
        if lo >= a[-1]:
            continue
        rho = float(rng.uniform(lo, a[-1]))
        rho = max(rho, np.nextafter(lo, np.inf))
        k_rho = int(np.searchsorted(a, rho))
        d = n - k_rho
        N = np.zeros((n, 1))
        N[-1, 0] = 1.0
        inst = LocalizationInstance(A, B, e, lam, psi, rho, N, d)
        if inst.gamma < 1 and d >= 1:
            return inst
    raise RuntimeError("could not draw an admissible localization instance")


def verify_localization(inst: LocalizationInstance, tol: float = 1e-12) -> CertReport:
    bad = inst.hypotheses()
    if bad:
        raise ValueError(f"localization hypotheses fail: {', '.join(bad)}")
    with _Timer() as tm:
        lhs = float(np.real(inst.psi.conj() @ inst.P_N @ inst.psi))
        rhs = inst.gamma ** inst.d
    return CertReport("localization", dict(dim=inst.A.shape[0], eps=inst.eps, d=inst.d, gamma=inst.gamma),
                      lhs, rhs, rhs - lhs, tol, wall_time=tm.elapsed)


# ---------------------------------------------------------------------------
# vacuum and <q^2>
# ---------------------------------------------------------------------------

def verify_vacuum_and_q2(params: ModelParams, state: ModelState | None = None) -> list[CertReport]:
    torus, fock = small_lattice()
    state = model_state(params) if state is None else state
    n = torus.n_sites
    S, D, V, t, beta = params.S, params.delta, params.V, params.t, params.beta
    T, W = state.TW
    w = np.diag(W)
    out = []
    # (a) vacuum eigenvalue, and ground state of W in the regime S + delta/2 > 0
    vac = -(S + D / 2) * n
    r = abs(w[0] - vac) + float(np.abs(W[:, 0] - W[0, 0] * fock.vacuum()).max())
    out.append(residual_report("vacuum", _pdict(params), r, info={"e_vacuum": float(w[0])}))
    status = "checked" if S + D / 2 > 0 else "hypothesis not met"
    gap = float(w.min() - vac)
    out.append(residual_report("vacuum-ground", _pdict(params), abs(gap), status=status))
    # Peierls-Bogoliubov and the entropy bound for the transformed Hamiltonian
    g = state.gibbs
    logZ = g.log_partition
    e_omega = float(np.real(fock.vacuum() @ (T + W) @ fock.vacuum()))
    out.append(CertReport("peierls-bogoliubov", _pdict(params), -beta * e_omega, logZ, logZ + beta * e_omega,
                          MATRIX_TOL * max(1.0, abs(logZ))))
    mean_h = float(np.real(g.expect(state.Ht)))
    lhs3 = -beta * mean_h
    rhs3 = logZ - n * math.log(4)
    out.append(CertReport("entropy-bound", _pdict(params), rhs3, lhs3, lhs3 - rhs3, MATRIX_TOL * max(1.0, abs(lhs3))))
    # (b), (c): lower bounds on <q_o^2>^{1/2}
    o = torus.origin
    q2 = g.expect_diag(fock.charge_diag(o) ** 2)
    root = math.sqrt(max(q2, 0.0))
    if S >= 0 and S + D / 2 > 0:
        b = 1 - 8 * t / (S + D / 2) - math.log(4) / (beta * (S + D / 2))
        out.append(CertReport("q2-positive-S", _pdict(params), b, root, root - b, MATRIX_TOL))
    else:
        out.append(CertReport("q2-positive-S", _pdict(params), 0.0, 0.0, 0.0, 0.0, status="hypothesis not met"))
    if S < 0 and D / 2 - abs(S) > 0:
        den = D / 2 + 4 * V
        b = (D / 2 - abs(S)) / den - 8 * t / den - 2 * math.log(4) / (beta * den)
        out.append(CertReport("q2-negative-S", _pdict(params), b, root, root - b, MATRIX_TOL))
    else:
        out.append(CertReport("q2-negative-S", _pdict(params), 0.0, 0.0, 0.0, 0.0, status="hypothesis not met"))
    # (d) <P0_o> = 1 - <q_o^2>
    p0 = g.expect_diag(charge_projectors(o, torus, fock).zero)
    r = abs(p0 + q2 - 1)
    out.append(residual_report("q2-complement", _pdict(params), r, 1e-12))
    return out


# ---------------------------------------------------------------------------
# trends
# ---------------------------------------------------------------------------

def diagonal_staggered_oracle(params: ModelParams, j) -> float:
    """(-1)^|j| <q_o q_j>_H at t = 0 by summing Boltzmann weights over all
    occupation configurations directly."""
    torus, _ = small_lattice()
    k = j if isinstance(j, int) else torus.site_index(j)
    n = torus.n_sites
    bonds = [(torus.index[b.source], torus.index[b.target]) for b in torus.bonds]
    stag = [1 - 2 * torus.parity(i) for i in range(n)]
    num = den = 0.0
    emin = None
    rows = []
    for occ in np.ndindex(*([4] * n)):
        q = [bin(x).count("1") - 1 for x in occ]
        e = (params.U * sum(x * x for x in q) + params.V * sum(q[a] * q[b] for a, b in bonds)
             + 0.5 * params.delta * sum(s * x for s, x in zip(stag, q)))
        rows.append((e, q[torus.origin] * q[k]))
        emin = e if emin is None else min(emin, e)
    for e, v in rows:
        wgt = math.exp(-params.beta * (e - emin))
        num += wgt * v
        den += wgt
    return stag[k] * num / den


def staggered(params: ModelParams, j) -> float:
    torus, fock = small_lattice()
    st = model_state(params)
    k = j if isinstance(j, int) else torus.site_index(j)
    return st.gibbs.expect_diag(fock.charge_diag(torus.origin) * fock.charge_diag(k))


def trend_table(U=0.0, V=1.0, delta=2.0, betas=(1.0, 5.0, 20.0), ts=(0.5, 0.1, 0.02), j=(1, 0)):
    torus, fock = small_lattice()
    k = torus.site_index(j)
    o = torus.origin
    po, pj = charge_projectors(o, torus, fock), charge_projectors(k, torus, fock)
    table = {}
    for t in ts:
        for b in betas:
            g = model_state(ModelParams(t, U, V, delta, b)).gibbs
            table[t, b] = (g.expect_diag(po.plus * pj.minus), g.expect_diag(po.zero))
    return table


def verify_trend(U=0.0, V=1.0, delta=2.0, betas=(1.0, 5.0, 20.0), ts=(0.5, 0.1, 0.02)) -> list[CertReport]:
    """Both defect probabilities decrease along increasing beta and decreasing t."""
    table = trend_table(U, V, delta, betas, ts)
    out = []
    for idx, name in ((0, "trend-mismatch"), (1, "trend-zero")):
        worst = float("inf")
        for t in ts:
            for b0, b1 in zip(betas, betas[1:]):
                worst = min(worst, table[t, b0][idx] - table[t, b1][idx])
        for b in betas:
            for t0, t1 in zip(ts, ts[1:]):
                worst = min(worst, table[t0, b][idx] - table[t1, b][idx])
        out.append(CertReport(name, dict(U=U, V=V, delta=delta), 0.0, worst, worst, MATRIX_TOL,
                              info={f"t={t},beta={b}": table[t, b][idx] for t in ts for b in betas}))
    return out


# ---------------------------------------------------------------------------
# Peierls counting
# ---------------------------------------------------------------------------

def verify_peierls_counts(side: int = 6, max_length: int = 10) -> list[CertReport]:
    from .contours import count_contours_range
    torus = geometric_torus(side)
    out = []
    with _Timer() as tm:
        counts = count_contours_range(torus, range(1, max_length + 1))
    for c in counts:
        out.append(CertReport("peierls-count", dict(side=side, length=c.length), c.ratio, 1.0, 1.0 - c.ratio, 0.0,
                              wall_time=tm.elapsed, info={"count": c.count}))
    return out


def verify_peierls_series(points=None, n_sites: int = 4, rtol: float = 1e-10) -> list[CertReport]:
    points = [1e-12, 1e-8, 1e-6, 1e-4, 1e-3, 1e-2] if points is None else points
    out = []
    for P in points:
        s = peierls_series(P, n_sites)
        if s.divergent:
            out.append(CertReport("peierls-series", dict(P=P, n_sites=n_sites), 0.0, 0.0, 0.0, 0.0,
                                  status="hypothesis not met", info={"ratio": s.ratio}))
            continue
        ps = peierls_partial_sum(P, n_sites)
        err = abs(ps - s.value) / max(abs(s.value), 1e-300)
        out.append(residual_report("peierls-series", dict(P=P, n_sites=n_sites), err, rtol,
                                   info={"closed_form": s.value, "partial_sum": ps, "ratio": s.ratio}))
    return out


# ---------------------------------------------------------------------------
# reflection positivity and chessboard suites (CertReport wrappers)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _reflections():
    from .lattice import HORIZONTAL, VERTICAL
    from .rp import Reflection
    torus, fock = small_lattice()
    return {VERTICAL: Reflection(torus, VERTICAL, fock), HORIZONTAL: Reflection(torus, HORIZONTAL, fock)}


def _gaussian(rng, n, complex_=True):
    X = rng.normal(size=(n, n))
    return X + 1j * rng.normal(size=(n, n)) if complex_ else X


def verify_rp_lattice(params: ModelParams, rng, trials: int = 10, kinds=None,
                      tol: float = MATRIX_TOL, rtol: float = THERMAL_RTOL) -> list[CertReport]:
    """<A (x) theta A theta^-1> >= 0 and its Schwarz inequality in the thermal
    state of the transformed Hamiltonian, for random first-half A, B."""
    from .rp import check_rp
    refl = _reflections()
    st = model_state(params)
    out = []
    for kind in (sorted(refl) if kinds is None else kinds):
        r = refl[kind]
        rho4 = r.product_density(st.gibbs.rho)
        dl = r.left.dim
        for k in range(trials):
            with _Timer() as tm:
                A, B = _gaussian(rng, dl), _gaussian(rng, dl)
                rep = check_rp(A, B, r, rho4)
            pp = _pdict(params, reflection=kind, trial=k)
            pos = min(rep.aa / rep.scale_a, rep.bb / rep.scale_b)
            out.append(CertReport("rp-positivity", pp, 0.0, pos, pos, tol, wall_time=tm.elapsed,
                                  info={"aa": rep.aa, "bb": rep.bb}))
            out.append(CertReport("rp-schwarz", pp, abs(rep.ab) ** 2, rep.aa * rep.bb, rep.schwarz_slack,
                                  rtol * rep.scale, info={"unsquared_slack": rep.unsquared_slack}))
    return out


def verify_dls(rng, trials: int = 500, tol: float = MATRIX_TOL, rtol: float = THERMAL_RTOL) -> list[CertReport]:
    from .rp import check_dls, lemma_trace_residual, random_antiunitary
    out = []
    for k in range(trials):
        d = int(rng.integers(2, 5))
        nb = int(rng.integers(0, 4))
        theta = random_antiunitary(d, rng)
        A = _gaussian(rng, d)
        A = (A + A.conj().T) / 2
        Bs = [_gaussian(rng, d) for _ in range(nb)]
        C, D = _gaussian(rng, d), _gaussian(rng, d)
        with _Timer() as tm:
            rep = check_dls(A, Bs, C, D, theta)
        pp = dict(trial=k, dim=d, n_B=nb)
        pos = min(rep.cc / rep.scale_c, rep.dd / rep.scale_d)
        out.append(CertReport("dls-positivity", pp, 0.0, pos, pos, tol, wall_time=tm.elapsed))
        out.append(CertReport("dls-schwarz", pp, abs(rep.cd) ** 2, rep.cc * rep.dd, rep.schwarz_slack,
                              rtol * rep.scale_c * rep.scale_d, info={"unsquared_holds": rep.unsquared_holds}))
        theta3 = random_antiunitary(3, rng)
        res = lemma_trace_residual(_gaussian(rng, 3), _gaussian(rng, 3), theta3)
        out.append(residual_report("trace-lemma", dict(trial=k), res, 1e-12))
    return out


def verify_cone(rng, trials: int = 10, tol: float = MATRIX_TOL) -> list[CertReport]:
    from .rp import random_antiunitary, reflection_positive_cone_check
    out = []
    for k in range(trials):
        d = 2
        theta = random_antiunitary(d, rng)
        Es = [_gaussian(rng, d) for _ in range(3)]
        gens = [(rng.uniform(0, 1, 2), [_gaussian(rng, d) for _ in range(2)]) for _ in range(2)]
        Bs = [0.3 * _gaussian(rng, d) for _ in range(2)]
        rep = reflection_positive_cone_check(rng.uniform(0, 2, 3), Es, theta, gens, Bs=Bs, rng=rng)
        pp = dict(trial=k)
        out.append(CertReport("cone-trace", pp, 0.0, rep.trace, rep.trace, tol * rep.scale))
        out.append(CertReport("cone-products", pp, 0.0, min(rep.product_traces), min(rep.product_traces), tol * rep.scale))
        r = rep.trotter_residuals
        out.append(CertReport("cone-trotter", pp, r[-1], r[0], r[0] - r[-1], 0.0,
                              info={"residuals": r, "monotone": rep.trotter_ok}))
        out.append(CertReport("cone-schwarz", pp, 0.0, rep.schwarz_slack, rep.schwarz_slack, tol * rep.scale))
    return out


def _chess_report(name, pp, rep, tm):
    info = {"assumptions": rep.assumptions}
    ok = "checked" if not rep.assumptions else "hypothesis not met"
    return CertReport(name, pp, rep.lhs, rep.rhs, rep.slack, rep.rtol * max(rep.lhs, rep.rhs),
                      wall_time=tm.elapsed, info=info, status=ok)


def verify_chess_standard(rng, trials: int = 100, rtol: float = THERMAL_RTOL) -> list[CertReport]:
    from .rp import chessboard_standard, ising_ring, lattice_row_functional
    out = []
    K, h = float(rng.uniform(0.1, 1.0)), float(rng.uniform(-0.5, 0.5))
    om = ising_ring(4, K, h)
    for k in range(trials):
        cells = [om.sample(rng) for _ in range(4)]
        with _Timer() as tm:
            rep = chessboard_standard(om, cells, rng, rtol)
        out.append(_chess_report("chess-standard", dict(functional="ising ring", K=K, h=h, trial=k), rep, tm))
    torus, fock = small_lattice()
    p = ModelParams(0.3, 0.5, 1.0, 2.0, 2.0)
    rows = lattice_row_functional(model_state(p).gibbs.rho_diag, torus, fock)
    for k in range(max(1, trials // 10)):
        cells = [rows.sample(rng) for _ in range(rows.arity)]
        with _Timer() as tm:
            rep = chessboard_standard(rows, cells, rng, rtol)
        out.append(_chess_report("chess-standard", _pdict(p, functional="lattice rows", trial=k), rep, tm))
    return out


def verify_chess_modified(rng, trials: int = 100, rtol: float = THERMAL_RTOL,
                          chess2_tol: float = MATRIX_TOL) -> list[CertReport]:
    from .rp import chessboard_modified, split_ising_ring
    out = []
    K, h = float(rng.uniform(0.1, 1.0)), float(rng.uniform(-0.5, 0.5))
    om = split_ising_ring(5, K, h)
    for k in range(trials):
        cells = [om.sample(rng) for _ in range(5)]
        with _Timer() as tm:
            rep = chessboard_modified(om, cells, rng, rtol)
        pp = dict(functional="split ising ring", K=K, h=h, trial=k)
        out.append(_chess_report("chess-modified", pp, rep, tm))
        out.append(residual_report("chess-modified-equality", pp, rep.chess2_residual, chess2_tol))
    return out


def verify_localization_batch(rng, trials: int = 100) -> list[CertReport]:
    return [verify_localization(localization_instance(rng)) for _ in range(trials)]


# ---------------------------------------------------------------------------
# suite
# ---------------------------------------------------------------------------

def _grid_suite(fn, n=50):
    def run(seed):
        out = []
        for p in parameter_grid(n, seed):
            r = fn(p)
            out.extend(r if isinstance(r, list) else [r])
        return out
    return run


def _rp_suite(seed, points: int = 10, trials: int = 10):
    rng = np.random.default_rng([seed, 1])
    out = []
    for p in parameter_grid(points, seed):
        out.extend(verify_rp_lattice(p, rng, trials))
    return out


def _q2_suite(seed):
    out = []
    for U, V, D in ((0.0, 1.0, 2.0), (1.0, 1.0, 2.0), (3.0, 1.0, 4.0)):
        for beta in (5.0, 20.0):
            for t in (0.02, 0.1):
                out.extend(verify_vacuum_and_q2(ModelParams(t, U, V, D, beta)))
    return out


def _trend_suite(seed):
    p1 = ModelParams(0.1, 0.0, 1.0, 2.0, 1.0)
    p20 = p1.replace(beta=20.0)
    j = (1, 0)
    s1, s20 = staggered(p1, j), staggered(p20, j)
    oracle = diagonal_staggered_oracle(p20.replace(t=0.0), j)
    torus, fock = small_lattice()
    zero = charge_projectors(torus.origin, torus, fock).zero
    z_lo = model_state(ModelParams(0.02, 0.0, 1.0, 2.0, 20.0)).gibbs.expect_diag(zero)
    z_hi = model_state(ModelParams(0.5, 0.0, 1.0, 2.0, 1.0)).gibbs.expect_diag(zero)
    pp = dict(U=0.0, V=1.0, delta=2.0, j=str(j))
    return [
        CertReport("trend-beta", dict(pp, t=0.1), s1, s20, s20 - s1, 0.0),
        CertReport("trend-oracle", dict(pp, t=0.1, beta=20.0), 0.9 * oracle, s20, s20 - 0.9 * oracle, 0.0,
                   info={"oracle": oracle}),
        CertReport("trend-zero", pp, z_lo, 0.1 * z_hi, 0.1 * z_hi - z_lo, 0.0),
        *verify_trend(),
    ]


def _peierls_suite(seed):
    return verify_peierls_counts(6, 10) + verify_peierls_series()


def _rng_suite(fn, stream):
    return lambda seed: fn(np.random.default_rng([seed, stream]))


SUITE = {
    "zigzag": _grid_suite(verify_zigzag, 20),
    "staggered": _grid_suite(verify_staggered, 20),
    "first-step": _grid_suite(verify_first_step, 50),
    "contour": _grid_suite(verify_contour_inequality, 50),
    "chessboard": _grid_suite(verify_chessboard_lattice, 50),
    "rp-lattice": _rp_suite,
    "dls": _rng_suite(verify_dls, 2),
    "cone": _rng_suite(verify_cone, 3),
    "chess-standard": _rng_suite(verify_chess_standard, 4),
    "chess-modified": _rng_suite(verify_chess_modified, 5),
    "eshift": _grid_suite(verify_eshift, 20),
    "estR": _grid_suite(verify_estR, 20),
    "bounds": _grid_suite(verify_lemma_basic2, 20),
    "localization": _rng_suite(verify_localization_batch, 6),
    "q2": _q2_suite,
    "trend": _trend_suite,
    "peierls": _peierls_suite,
}


def run_entry(name: str, seed: int = 0) -> list[CertReport]:
    if name not in SUITE:
        raise ValueError(f"unknown theorem id {name!r}; choose from {', '.join(SUITE)}")
    return SUITE[name](seed)


def run_suite(only=None, seed: int = 0, workers: int = 1) -> dict[str, list[CertReport]]:
    names = list(SUITE) if not only else list(only)
    for n in names:
        if n not in SUITE:
            raise ValueError(f"unknown theorem id {n!r}; choose from {', '.join(SUITE)}")
    if workers > 1 and len(names) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as ex:
            results = list(ex.map(run_entry, names, [seed] * len(names)))
    else:
        results = [run_entry(n, seed) for n in names]
    return dict(zip(names, results))


def with_tolerance(report: CertReport, tol: float) -> CertReport:
    from dataclasses import replace
    return replace(report, tol=float(tol))
