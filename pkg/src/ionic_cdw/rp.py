"""Reflection positivity: antiunitary reflections, DLS-type checks and
chessboard estimates for multilinear functionals."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.linalg import expm
from scipy.stats import unitary_group

from .fock import SPINS, FockSpace
from .lattice import HORIZONTAL, VERTICAL, HalfSplit, TorusLattice
from .model import ModelParams, build_T_W, pairing


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class Antiunitary:
    """``theta(psi) = U conj(psi)``, mapping the first factor onto the second."""

    U: np.ndarray

    def __call__(self, psi: np.ndarray) -> np.ndarray:
        return self.U @ np.conj(psi)

    def inverse(self, phi: np.ndarray) -> np.ndarray:
        return np.conj(self.U.conj().T @ phi)

    def conjugate(self, A: np.ndarray) -> np.ndarray:
        """``theta A theta^{-1}``."""
        return self.U @ np.conj(A) @ self.U.conj().T

    def pull_back(self, B: np.ndarray) -> np.ndarray:
        """``theta^{-1} B theta``."""
        return np.conj(self.U.conj().T @ B @ self.U)


def random_antiunitary(n: int, rng) -> Antiunitary:
    return Antiunitary(unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random()) * np.ones((1, 1)))


# ---------------------------------------------------------------------------
# lattice reflections
# ---------------------------------------------------------------------------

class Reflection:
    """Half-lattice factorization together with its antiunitary reflection.

    ``theta`` maps the first-half Fock space onto the second half so that the
    vacuum goes to the vacuum and ``c_{j s} = theta a_{m(j) s} theta^{-1}`` for
    every second-half site ``j`` with mirror image ``m(j)``; here
    ``a = c (-1)^{N_first}``.
    """

    def __init__(self, torus: TorusLattice, kind: str, fock: FockSpace | None = None, tol: float = 1e-10):
        self.torus = torus
        self.kind = kind
        self.fock = FockSpace(torus) if fock is None else fock
        self.split: HalfSplit = torus.split(kind)
        self.left, self.right = self.fock.split_spaces(self.split)
        self.theta = self._build()
        self.residual = self.relation_residual()
        if self.residual > tol:
            raise ConstructionError(f"{kind} reflection violates its defining relations (residual {self.residual:.3e})")

    def _build(self) -> Antiunitary:
        left, right = self.left, self.right
        image = {m: r for r, m in self.split.mirror.items()}  # first-half site -> second-half site
        target = [right.mode(image[left.sites[k // 2]], SPINS[k % 2]) for k in range(left.n_modes)]
        cr = [right.creation(k) for k in range(right.n_modes)]
        U = np.zeros((right.dim, left.dim))
        vac = right.vacuum()
        for b in range(left.dim):
            occ = [k for k in range(left.n_modes) if (b >> k) & 1]
            v = vac
            for k in reversed(occ):
                v = cr[target[k]] @ v
            n = len(occ)
            U[:, b] = (-1) ** (n * (n + 1) // 2) * v
        return Antiunitary(U)

    def a_left(self, site, spin) -> np.ndarray:
        """``a = c (-1)^N`` on the first-half factor."""
        L = self.left
        c = L.annihilation(L.mode(site, spin))
        return c * L.parity_diag()[None, :]

    def relation_residual(self) -> float:
        th = self.theta
        res = abs(th(self.left.vacuum()) - self.right.vacuum()).max()
        for j, m in self.split.mirror.items():
            for sp in SPINS:
                c = self.right.annihilation(self.right.mode(j, sp))
                res = max(res, abs(c - th.conjugate(self.a_left(m, sp))).max())
        return float(res)

    @cached_property
    def permutation(self) -> np.ndarray:
        return self.fock.split_permutation(self.split)

    def to_product(self, A: np.ndarray) -> np.ndarray:
        P = self.permutation
        return P @ A @ P.T

    def from_product(self, A: np.ndarray) -> np.ndarray:
        P = self.permutation
        return P.T @ A @ P

    def product_density(self, rho: np.ndarray) -> np.ndarray:
        dl, dr = self.left.dim, self.right.dim
        return self.to_product(rho).reshape(dl, dr, dl, dr)

    def pair(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        """``A (x) theta B theta^{-1}`` on the full space."""
        return self.from_product(np.kron(A, self.theta.conjugate(B)))

    def pair_expectation(self, A: np.ndarray, B: np.ndarray, rho4: np.ndarray) -> complex:
        """``Tr[(A (x) theta B theta^{-1}) rho]`` with ``rho4`` from ``product_density``."""
        C = self.theta.conjugate(B)
        return complex(np.einsum("ij,kl,jlik->", A, C, rho4, optimize=True))

    def positivity_form(self, rho4: np.ndarray) -> np.ndarray:
        """Matrix ``G`` with ``<A (x) theta B theta^-1> = vec(A) . G . conj(vec(B))``.

        ``G`` is Hermitian; the state is reflection positive for this
        reflection iff ``G >= 0``, and its smallest eigenvalue is the worst
        normalized pair value over all first-half ``A`` (Frobenius norm 1).
        """
        U = self.theta.U
        dl = self.left.dim
        G = np.einsum("jlik,km,ln->ijmn", rho4, U, U.conj(), optimize=True)
        return G.reshape(dl * dl, dl * dl)

    # -- split of T and W ------------------------------------------------------
    def bond_classes(self):
        """Directed Hamiltonian bonds (even, odd) grouped as first-half,
        second-half, and crossing."""
        first = set(self.split.first)
        inner_l, inner_r, cross = [], [], []
        for b in self.torus.bonds:
            e, o = self.torus.index[b.source], self.torus.index[b.target]
            if e in first and o in first:
                inner_l.append((e, o))
            elif e not in first and o not in first:
                inner_r.append((e, o))
            else:
                cross.append((e, o))
        return inner_l, inner_r, cross

    def half_pairing(self, params: ModelParams, space: FockSpace, bonds) -> np.ndarray:
        T = np.zeros((space.dim, space.dim))
        for e, o in bonds:
            for sp in SPINS:
                a, b = space.mode(e, sp), space.mode(o, sp)
                space.monomial([a, b], [True, True], -params.t, out=T)
                space.monomial([b, a], [False, False], -params.t, out=T)
        return T

    def half_potential(self, params: ModelParams, space: FockSpace, bonds) -> np.ndarray:
        q = {k: space.charge_diag(k) for k in space.sites}
        w = sum(params.U * q[k] ** 2 + 0.5 * params.delta * q[k] for k in space.sites)
        for i, j in bonds:
            w = w - params.V * q[i] * q[j]
        return np.diag(w)

    def decomposition(self, params: ModelParams) -> dict:
        """Pieces of ``T + W`` on each half and across the cut.

        ``T_L, W_L`` act on the first factor, ``T_R, W_R`` on the second,
        ``T_LR, W_LR`` are crossing terms on the full space.
        """
        inner_l, inner_r, cross = self.bond_classes()
        F = self.fock
        out = {
            "T_L": self.half_pairing(params, self.left, inner_l),
            "T_R": self.half_pairing(params, self.right, inner_r),
            "W_L": self.half_potential(params, self.left, inner_l),
            "W_R": self.half_potential(params, self.right, inner_r),
        }
        T_LR = np.zeros((F.dim, F.dim))
        for e, o in cross:
            for sp in SPINS:
                a, b = F.mode(e, sp), F.mode(o, sp)
                F.monomial([a, b], [True, True], -params.t, out=T_LR)
                F.monomial([b, a], [False, False], -params.t, out=T_LR)
        W_LR = np.zeros(F.dim)
        for e, o in cross:
            W_LR -= params.V * F.charge_diag(e) * F.charge_diag(o)
        out["T_LR"] = T_LR
        out["W_LR"] = np.diag(W_LR)
        return out

    def crossing_first_end(self, bond):
        e, o = bond
        return e if e in self.split.first else o

    def reflected_crossing(self, params: ModelParams, signed: bool = False):
        """Crossing terms rebuilt from first-half operators and their reflections.

        With ``signed=False`` every crossing bond enters as
        ``-t (a* (x) theta a* theta^{-1} + h.c.)``.  With ``signed=True`` the
        sign follows from the fermionic reordering, which is ``+t`` for bonds
        whose even end lies in the first half.
        """
        _, _, cross = self.bond_classes()
        first = set(self.split.first)
        F = self.fock
        T = np.zeros((F.dim, F.dim), dtype=complex)
        W = np.zeros((F.dim, F.dim), dtype=complex)
        for bond in cross:
            l = self.crossing_first_end(bond)
            s = -1.0 if (signed and bond[0] in first) else 1.0
            for sp in SPINS:
                ad = self.a_left(l, sp).conj().T
                X = self.pair(ad, ad)
                T += -s * params.t * (X + X.conj().T)
            ql = np.diag(self.left.charge_diag(l))
            W += -params.V * self.pair(ql, ql)
        return T, W

    def flipped_crossing_hamiltonian(self, params: ModelParams) -> np.ndarray:
        """T + W with the crossing bonds whose even end is in the first half
        given the opposite hopping sign (diagnostic control; this operator has
        the reflection-positive form for this reflection)."""
        T, W = build_T_W(params, self.torus, self.fock)
        _, _, cross = self.bond_classes()
        first = set(self.split.first)
        bad = [b for b in cross if b[0] in first]
        return T - 2 * pairing(params, self.torus, self.fock, bonds=bad) + W


def antiunitary_vertical(torus: TorusLattice, fock=None) -> Antiunitary:
    return Reflection(torus, VERTICAL, fock).theta


def antiunitary_horizontal(torus: TorusLattice, fock=None) -> Antiunitary:
    return Reflection(torus, HORIZONTAL, fock).theta


# ---------------------------------------------------------------------------
# positivity checks
# ---------------------------------------------------------------------------

@dataclass
class RPReport:
    aa: float          # <A (x) theta A theta^-1>, real part
    bb: float
    ab: complex        # <A (x) theta B theta^-1>
    imag: float        # largest imaginary part of the diagonal pairs
    scale_a: float     # |A|^2 in operator norm
    scale_b: float
    tol: float = 1e-10

    @property
    def scale(self) -> float:
        return self.scale_a * self.scale_b

    @property
    def positivity(self) -> float:
        return min(self.aa, self.bb)

    @property
    def schwarz_slack(self) -> float:
        return self.aa * self.bb - abs(self.ab) ** 2

    @property
    def unsquared_slack(self) -> float:
        return self.aa * self.bb - abs(self.ab)

    @property
    def positive(self) -> bool:
        na = self.aa / max(self.scale_a, 1e-300)
        nb = self.bb / max(self.scale_b, 1e-300)
        return min(na, nb) >= -self.tol

    @property
    def schwarz(self) -> bool:
        return self.schwarz_slack >= -self.tol * max(self.scale, 1e-300)

    @property
    def passed(self) -> bool:
        return self.positive and self.schwarz


def _norm2(A):
    return float(np.linalg.norm(A, 2)) ** 2


def check_rp(A: np.ndarray, B: np.ndarray, refl: Reflection, rho4: np.ndarray, tol: float = 1e-10) -> RPReport:
    """Reflection positivity and its Schwarz inequality against the product-
    basis density ``rho4`` (see ``Reflection.product_density``)."""
    dl = refl.left.dim
    if A.shape != (dl, dl) or B.shape != (dl, dl):
        raise ValueError(f"A and B must be {dl}x{dl} first-half operators")
    aa = refl.pair_expectation(A, A, rho4)
    bb = refl.pair_expectation(B, B, rho4)
    ab = refl.pair_expectation(A, B, rho4)
    na, nb = _norm2(A), _norm2(B)
    return RPReport(aa.real, bb.real, ab, max(abs(aa.imag), abs(bb.imag)), na, nb, tol)


@dataclass
class DLSReport:
    cc: float
    dd: float
    cd: complex
    scale_c: float
    scale_d: float
    tol: float = 1e-10
    rtol: float = 1e-8

    @property
    def positive(self) -> bool:
        return self.cc >= -self.tol * self.scale_c and self.dd >= -self.tol * self.scale_d

    @property
    def schwarz_slack(self) -> float:
        return self.cc * self.dd - abs(self.cd) ** 2

    @property
    def schwarz(self) -> bool:
        return self.schwarz_slack >= -self.rtol * self.scale_c * self.scale_d

    @property
    def unsquared_holds(self) -> bool:
        # the inequality without the square on the left; informational only
        return abs(self.cd) <= self.cc * self.dd + self.rtol * self.scale_c * self.scale_d

    @property
    def passed(self) -> bool:
        return self.positive and self.schwarz


def dls_hamiltonian(A: np.ndarray, Bs, theta: Antiunitary) -> np.ndarray:
    n = A.shape[0]
    I = np.eye(n)
    H = np.kron(A, I) + np.kron(I, theta.conjugate(A))
    for B in Bs:
        Bd = B.conj().T
        H = H - np.kron(B, theta.conjugate(B)) - np.kron(Bd, theta.conjugate(Bd))
    return H


def _gibbs(H: np.ndarray, beta: float = 1.0) -> np.ndarray:
    w, v = np.linalg.eigh(H)
    p = np.exp(-beta * (w - w.min()))
    p /= p.sum()
    return (v * p) @ v.conj().T


def check_dls(A: np.ndarray, Bs, C: np.ndarray, D: np.ndarray, theta: Antiunitary,
              tol: float = 1e-10, rtol: float = 1e-8) -> DLSReport:
    """Positivity and Schwarz inequality for the thermal state (beta = 1) of
    ``A (x) 1 + 1 (x) tAt^-1 - sum (B (x) tBt^-1 + B* (x) tB*t^-1)``."""
    if np.abs(A - A.conj().T).max() > 1e-12 * max(1.0, np.abs(A).max()):
        raise ValueError("A must be Hermitian")
    n = A.shape[0]
    for X in (C, D, *Bs):
        if X.shape != (n, n):
            raise ValueError("all operators must share the dimension of A")
    rho = _gibbs(dls_hamiltonian(A, Bs, theta))
    ev = lambda X, Y: complex(np.trace(np.kron(X, theta.conjugate(Y)) @ rho))
    return DLSReport(ev(C, C).real, ev(D, D).real, ev(C, D), _norm2(C), _norm2(D), tol, rtol)


def lemma_trace_residual(A: np.ndarray, B: np.ndarray, theta: Antiunitary) -> float:
    """``|Tr[A (x) theta B theta^-1] - Tr[A] conj(Tr[B])|``, relative to ``|A||B|``."""
    lhs = np.trace(np.kron(A, theta.conjugate(B)))
    rhs = np.trace(A) * np.conj(np.trace(B))
    return float(abs(lhs - rhs) / max(1.0, np.abs(A).sum() * np.abs(B).sum() / A.shape[0]))


# ---------------------------------------------------------------------------
# reflection-positive cone
# ---------------------------------------------------------------------------

@dataclass
class ConeReport:
    trace: float
    trace_imag: float
    product_traces: list
    trotter_residuals: list
    schwarz_slack: float
    scale: float
    tol: float = 1e-10

    @property
    def trace_ok(self) -> bool:
        return self.trace >= -self.tol * self.scale

    @property
    def products_ok(self) -> bool:
        return all(t >= -self.tol * self.scale for t in self.product_traces)

    @property
    def trotter_ok(self) -> bool:
        r = self.trotter_residuals
        return all(b <= a * (1 + 1e-9) + 1e-13 for a, b in zip(r, r[1:])) and r[-1] < r[0] + 1e-13

    @property
    def schwarz_ok(self) -> bool:
        return self.schwarz_slack >= -self.tol * self.scale

    @property
    def passed(self) -> bool:
        return self.trace_ok and self.products_ok and self.trotter_ok and self.schwarz_ok


def cone_element(coeffs, Es, theta: Antiunitary) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if np.any(coeffs < 0):
        raise ValueError("cone coefficients must be nonnegative")
    return sum(a * np.kron(E, theta.conjugate(E)) for a, E in zip(coeffs, Es))


def reflection_positive_cone_check(coeffs, Es, theta: Antiunitary, generators=(),
                                   A=None, Bs=(), C=None, D=None, steps=(1, 2, 4, 8, 16),
                                   tol: float = 1e-10, rng=None) -> ConeReport:
    """Trace, product closure, Trotter membership of ``exp(-H)`` and the
    Schwarz inequality for ``X = sum a_k E_k (x) theta E_k theta^-1``.

    ``generators`` is a list of ``(coeffs, Es)`` pairs; products of ``X`` with
    each of them are checked.  ``A, Bs`` define the DLS Hamiltonian used for
    the Trotter check; ``C, D`` the Schwarz pair.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    X = cone_element(coeffs, Es, theta)
    n = Es[0].shape[0]
    scale = max(1.0, float(np.abs(X).sum()))
    tr = np.trace(X)
    prods = []
    for gc, gE in generators:
        Y = cone_element(gc, gE, theta)
        prods.append(float(np.trace(X @ Y).real))
    if A is None:
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        A = (A + A.conj().T) / 2
    I = np.eye(n)
    H0 = np.kron(A, I) + np.kron(I, theta.conjugate(A))
    Vop = np.zeros_like(H0, dtype=complex)
    for B in Bs:
        Bd = B.conj().T
        Vop += np.kron(B, theta.conjugate(B)) + np.kron(Bd, theta.conjugate(Bd))
    exact = expm(-(H0 - Vop))
    res = []
    for k in steps:
        step = expm(-H0 / k) @ expm(Vop / k)
        res.append(float(np.linalg.norm(exact - np.linalg.matrix_power(step, k), 2)))
    if C is None:
        C = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    if D is None:
        D = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    t = lambda P, Q: complex(np.trace(np.kron(P, theta.conjugate(Q)) @ X))
    slack = t(C, C).real * t(D, D).real - abs(t(C, D)) ** 2
    sc = scale * _norm2(C) * _norm2(D) * n * n
    return ConeReport(float(tr.real), float(abs(tr.imag)), prods, res, slack, max(sc, 1.0), tol)


# ---------------------------------------------------------------------------
# multilinear functionals and chessboard estimates
# ---------------------------------------------------------------------------

@dataclass
class MultilinearFunctional:
    arity: int
    evaluate: Callable          # list of cell elements -> complex
    J: Callable
    sample: Callable            # rng -> random cell element
    T_plus: Callable | None = None
    T_minus: Callable | None = None
    name: str = ""
    equal: Callable = field(default=lambda a, b: np.allclose(a, b, atol=1e-12))

    def __call__(self, *cells):
        if len(cells) != self.arity:
            raise ValueError(f"{self.name or 'functional'} takes {self.arity} arguments, got {len(cells)}")
        return complex(self.evaluate(list(cells)))

    def self_test(self, rng, trials: int = 20, tol: float = 1e-10) -> list[str]:
        """Names of violated hypotheses (empty when all hold on the samples)."""
        bad = set()
        for _ in range(trials):
            cells = [self.sample(rng) for _ in range(self.arity)]
            v = self(*cells)
            w = self(*cells[1:], cells[0])
            if abs(v - w) > tol * max(1.0, abs(v)):
                bad.add("cyclicity")
            a = cells[0]
            if not self.equal(self.J(self.J(a)), a):
                bad.add("involution")
            if self.T_plus is not None:
                for Ta in (self.T_plus, self.T_minus):
                    for Tb in (self.T_plus, self.T_minus):
                        if not self.equal(Ta(Tb(a)), Tb(a)):
                            bad.add("idempotence")
        return sorted(bad)


@dataclass
class ChessReport:
    lhs: float
    rhs: float
    factors: list
    assumptions: list
    chess2_residual: float = 0.0
    rtol: float = 1e-8

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def relative_slack(self) -> float:
        return self.slack / max(self.rhs, self.lhs, 1e-300)

    @property
    def passed(self) -> bool:
        return not self.assumptions and self.relative_slack >= -self.rtol


def _geo_mean(vals, n):
    vals = np.asarray(vals, dtype=complex)
    re = vals.real
    if np.any(re < 0):
        return float("nan")
    return float(np.prod(np.clip(re, 0, None) ** (1.0 / n)))


def chessboard_standard(omega: MultilinearFunctional, cells, rng=None, rtol: float = 1e-8) -> ChessReport:
    """|omega(A_1..A_n)| <= prod_j omega(JA_j, A_j, ..., JA_j, A_j)^{1/n}."""
    n = omega.arity
    if len(cells) != n or n % 2:
        raise ValueError("chessboard_standard needs an even arity matching the cells")
    issues = omega.self_test(np.random.default_rng(0) if rng is None else rng)
    lhs = abs(omega(*cells))
    factors = [omega(*([omega.J(a), a] * (n // 2))) for a in cells]
    if any(f.real < -1e-12 or abs(f.imag) > 1e-10 * max(1, abs(f)) for f in factors):
        issues.append("reflection positivity of the periodized factors")
    return ChessReport(lhs, _geo_mean(factors, n), factors, issues, 0.0, rtol)


def chessboard_modified(omega: MultilinearFunctional, cells, rng=None, rtol: float = 1e-8) -> ChessReport:
    """Odd-arity estimate with the half-copy maps ``T_plus``, ``T_minus``."""
    n = omega.arity
    if n % 2 == 0:
        raise ValueError("the modified estimate needs odd arity 2M+1")
    M = (n - 1) // 2
    if M % 2:
        raise ValueError(f"the modified estimate needs M even, got M={M}")
    if omega.T_plus is None or omega.T_minus is None:
        raise ValueError("T_plus and T_minus are required")
    if len(cells) != n:
        raise ValueError(f"expected {n} cells")
    issues = omega.self_test(np.random.default_rng(0) if rng is None else rng)
    lhs = abs(omega(*cells))
    J, Tp, Tm = omega.J, omega.T_plus, omega.T_minus
    factors, res = [], 0.0
    for a in cells:
        head = [J(a), a] * M
        f_plus = omega(*head, Tp(J(a)))
        f_minus = omega(*head, Tm(a))
        factors.append(f_plus)
        res = max(res, abs(f_plus - f_minus) / max(1.0, abs(f_plus)))
    if any(f.real < -1e-12 or abs(f.imag) > 1e-10 * max(1, abs(f)) for f in factors):
        issues.append("positivity of the periodized factors")
    return ChessReport(lhs, _geo_mean(factors, n), factors, issues, res, rtol)


# -- constructed reflection-positive rings -------------------------------------

def _ring_transfer(K, h):
    s = np.array([1.0, -1.0])
    return np.exp(K * np.outer(s, s)), np.exp(h * s)


def ising_ring(n_cells: int = 4, K: float = 0.5, h: float = 0.2) -> MultilinearFunctional:
    """Classical nearest-neighbour Ising ring, one spin per cell.

    Cells are complex functions of a spin (length-2 vectors), ``J`` is complex
    conjugation.  ``K >= 0`` makes every bond reflection positive.
    """
    if K < 0:
        raise ValueError("K must be >= 0 for reflection positivity")
    T, f = _ring_transfer(K, h)
    Z = np.trace(np.linalg.matrix_power(np.diag(f) @ T, n_cells))

    def evaluate(cells):
        X = np.eye(2, dtype=complex)
        for a in cells:
            X = X @ np.diag(np.asarray(a) * f) @ T
        return np.trace(X) / Z

    def sample(rng):
        return rng.normal(size=2) + 1j * rng.normal(size=2)

    return MultilinearFunctional(n_cells, evaluate, np.conj, sample, name=f"ising ring ({n_cells} cells)")


def ising_ring_bruteforce(cells, K: float, h: float) -> complex:
    n = len(cells)
    tot, Z = 0j, 0.0
    for s in range(1 << n):
        spins = [1 - 2 * ((s >> k) & 1) for k in range(n)]
        w = np.exp(K * sum(spins[k] * spins[(k + 1) % n] for k in range(n)) + h * sum(spins))
        val = np.prod([cells[k][(1 - spins[k]) // 2] for k in range(n)])
        tot += w * val
        Z += w
    return tot / Z


def split_ising_ring(n_cells: int = 5, K: float = 0.5, h: float = 0.2) -> MultilinearFunctional:
    """Ising ring of ``2 n_cells`` spins, two spins ``(s_l, s_r)`` per cell.

    Cell elements are product pairs ``(a, b)`` standing for
    ``A(s_l, s_r) = a[s_l] b[s_r]``.  ``J`` reflects a cell (swap and
    conjugate); ``T_plus`` copies the reflected left half onto the right half,
    ``T_minus`` the right half onto the left.
    """
    if K < 0:
        raise ValueError("K must be >= 0 for reflection positivity")
    T, f = _ring_transfer(K, h)
    Z = np.trace(np.linalg.matrix_power(np.diag(f) @ T, 2 * n_cells))

    def block(c):
        a, b = c
        return np.diag(np.asarray(a) * f) @ T @ np.diag(np.asarray(b) * f) @ T

    def evaluate(cells):
        X = np.eye(2, dtype=complex)
        for c in cells:
            X = X @ block(c)
        return np.trace(X) / Z

    def J(c):
        return (np.conj(c[1]), np.conj(c[0]))

    def T_plus(c):
        return (c[0], np.conj(c[0]))

    def T_minus(c):
        return (np.conj(c[1]), c[1])

    def sample(rng):
        return tuple(rng.normal(size=2) + 1j * rng.normal(size=2) for _ in range(2))

    def equal(x, y):
        return all(np.allclose(p, q, atol=1e-12) for p, q in zip(x, y))

    return MultilinearFunctional(n_cells, evaluate, J, sample, T_plus, T_minus,
                                 name=f"split ising ring ({n_cells} cells)", equal=equal)


def split_ising_bruteforce(cells, K: float, h: float) -> complex:
    n = 2 * len(cells)
    tot, Z = 0j, 0.0
    for s in range(1 << n):
        spins = [1 - 2 * ((s >> k) & 1) for k in range(n)]
        idx = [(1 - x) // 2 for x in spins]
        w = np.exp(K * sum(spins[k] * spins[(k + 1) % n] for k in range(n)) + h * sum(spins))
        val = 1 + 0j
        for c, (a, b) in enumerate(cells):
            val *= a[idx[2 * c]] * b[idx[2 * c + 1]]
        tot += w * val
        Z += w
    return tot / Z


def lattice_row_functional(rho_diag: np.ndarray, torus: TorusLattice, fock: FockSpace | None = None) -> MultilinearFunctional:
    """omega(A_-L, ..., A_{L-1}) = <prod_k tau_k(A_k)> for number-diagonal row
    operators, given as functions of the row occupation index.  ``J`` is
    entrywise conjugation (it fixes every number operator)."""
    fock = FockSpace(torus) if fock is None else fock
    rows = list(range(-torus.L, torus.L))
    occ = fock.occupations.astype(np.int64)
    row_index = []
    for k in rows:
        sites = [i for i, s in enumerate(torus.sites) if s[1] == k]
        modes = fock.modes_of(sites)
        row_index.append(occ[:, modes] @ (1 << np.arange(len(modes))))
    width = 1 << (4 * torus.L)

    def evaluate(cells):
        v = rho_diag.astype(complex)
        for r, a in zip(row_index, cells):
            v = v * np.asarray(a)[r]
        return v.sum()

    def sample(rng):
        return rng.normal(size=width) + 1j * rng.normal(size=width)

    return MultilinearFunctional(len(rows), evaluate, np.conj, sample, name="lattice rows")
