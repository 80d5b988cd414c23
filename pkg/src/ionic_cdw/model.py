"""Extended ionic Hubbard model and its zigzag-transformed form."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fock import SPINS, FockSpace
from .lattice import TorusLattice


@dataclass(frozen=True)
class ModelParams:
    t: float
    U: float
    V: float
    delta: float
    beta: float = 1.0

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"t must be >= 0, got {self.t}")
        if self.V < 0:
            raise ValueError(f"V must be >= 0, got {self.V}")
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        if self.beta < 0:
            raise ValueError(f"beta must be >= 0, got {self.beta}")

    @property
    def S(self) -> float:
        return 2 * self.V - self.U

    @property
    def cdw_regime(self) -> bool:
        return self.S + self.delta / 2 > 0

    def replace(self, **kw) -> "ModelParams":
        d = dict(t=self.t, U=self.U, V=self.V, delta=self.delta, beta=self.beta)
        d.update(kw)
        return ModelParams(**d)


def _fock(torus, fock):
    return FockSpace(torus) if fock is None else fock


def _bond_indices(torus):
    return [(torus.index[b.source], torus.index[b.target]) for b in torus.bonds]


def _staggering(torus):
    return np.array([1.0 - 2.0 * torus.parity(k) for k in range(torus.n_sites)])


def hopping(params: ModelParams, torus: TorusLattice, fock=None) -> np.ndarray:
    fock = _fock(torus, fock)
    H = np.zeros((fock.dim, fock.dim))
    for i, j in _bond_indices(torus):
        for sp in SPINS:
            a, b = fock.mode(i, sp), fock.mode(j, sp)
            fock.monomial([a, b], [True, False], -params.t, out=H)
            fock.monomial([b, a], [True, False], -params.t, out=H)
    return H


def build_hamiltonian(params: ModelParams, torus: TorusLattice, fock=None) -> np.ndarray:
    """H = hopping + U sum q^2 + V sum_bonds q q + (delta/2) sum (-1)^|j| q."""
    fock = _fock(torus, fock)
    q = np.array([fock.charge_diag(k) for k in range(torus.n_sites)])
    diag = params.U * (q ** 2).sum(axis=0)
    for i, j in _bond_indices(torus):
        diag += params.V * q[i] * q[j]
    diag += 0.5 * params.delta * (_staggering(torus)[:, None] * q).sum(axis=0)
    H = hopping(params, torus, fock)
    H[np.diag_indices(fock.dim)] += diag
    return H


def pairing(params: ModelParams, torus: TorusLattice, fock=None, bonds=None) -> np.ndarray:
    """T = sum_bonds,sigma (-t)(c*_e c*_o + c_o c_e), e the even end of the bond.

    ``bonds`` restricts the sum to a subset of ``(even, odd)`` index pairs.
    """
    fock = _fock(torus, fock)
    T = np.zeros((fock.dim, fock.dim))
    for i, j in (_bond_indices(torus) if bonds is None else bonds):
        for sp in SPINS:
            a, b = fock.mode(i, sp), fock.mode(j, sp)
            fock.monomial([a, b], [True, True], -params.t, out=T)
            fock.monomial([b, a], [False, False], -params.t, out=T)
    return T


def charge_potential_diag(params: ModelParams, torus: TorusLattice, fock=None, form="pp2") -> np.ndarray:
    """Diagonal of W.  ``form='pp2'``: U q^2 - V q q + delta/2 q; ``'wex'``: the
    equivalent -S q^2 + V/2 (q_i - q_j)^2 + delta/2 q."""
    fock = _fock(torus, fock)
    q = np.array([fock.charge_diag(k) for k in range(torus.n_sites)])
    bonds = _bond_indices(torus)
    if form == "pp2":
        w = params.U * (q ** 2).sum(axis=0)
        for i, j in bonds:
            w -= params.V * q[i] * q[j]
    elif form == "wex":
        w = -params.S * (q ** 2).sum(axis=0)
        for i, j in bonds:
            w += 0.5 * params.V * (q[i] - q[j]) ** 2
    else:
        raise ValueError(f"unknown form {form!r}")
    return w + 0.5 * params.delta * q.sum(axis=0)


def build_T_W(params: ModelParams, torus: TorusLattice, fock=None, form="pp2"):
    fock = _fock(torus, fock)
    return pairing(params, torus, fock), np.diag(charge_potential_diag(params, torus, fock, form))


def configuration_energy(params: ModelParams, torus: TorusLattice, m) -> float:
    """Eigenvalue of W on a charge configuration ``m in {-1, 0, 1}^sites``."""
    m = np.asarray(m, dtype=float)
    e = params.U * (m ** 2).sum() + 0.5 * params.delta * m.sum()
    for i, j in _bond_indices(torus):
        e -= params.V * m[i] * m[j]
    return float(e)


def zigzag_unitary(torus: TorusLattice, fock=None) -> np.ndarray:
    """Product over odd sites (canonical order) of v_up v_down, where
    v = [prod_{i != j} (-1)^{n_i sigma}] (c* + c)."""
    fock = _fock(torus, fock)
    Z = np.eye(fock.dim)
    others = {}
    for sp in SPINS:
        others[sp] = fock.occupations[:, [fock.mode(k, sp) for k in range(torus.n_sites)]]
    for j in torus.odd_sites():
        for sp in SPINS:
            k = fock.mode(j, sp)
            n = others[sp].sum(axis=1) - fock.occupations[:, k]
            string = 1.0 - 2.0 * (n & 1)
            majorana = fock.creation(k) + fock.annihilation(k)
            Z = Z @ (string[:, None] * majorana)
    return Z


def gauge_u(torus: TorusLattice, fock=None) -> np.ndarray:
    """(-1)^{N_odd}, which flips the sign of T and leaves W alone."""
    fock = _fock(torus, fock)
    return np.diag(fock.parity_diag(torus.odd_sites()))


@dataclass(frozen=True)
class ProjectorSet:
    """Spectral projectors of a single q_j, stored as diagonals."""

    zero: np.ndarray   # E({0})
    plus: np.ndarray   # E({0, +1})
    minus: np.ndarray  # E({-1})
    lam_plus: np.ndarray  # E({+1})

    @property
    def lam_zero(self):
        return self.zero

    @property
    def lam_minus(self):
        return self.minus

    def matrix(self, name: str) -> np.ndarray:
        return np.diag(getattr(self, name))


def charge_projectors(site, torus: TorusLattice, fock=None) -> ProjectorSet:
    fock = _fock(torus, fock)
    q = fock.charge_diag(site)
    f = lambda m: m.astype(float)
    return ProjectorSet(zero=f(q == 0), plus=f(q >= 0), minus=f(q == -1), lam_plus=f(q == 1))


def chessboard_columns(L: int):
    """Column pattern (j1 -> sign) of the chessboard projector with ``+`` leading.

    Blocks of four columns ``+ - - +`` starting at ``j1 = -L``, one per
    m = 1..M, then the boundary pair ``L-2, L-1`` with the leading sign.  The
    blocks are offset by ``4(m-1)`` so that they tile ``-L .. L-3`` exactly.
    """
    if L % 2 == 0 or L < 1:
        raise ValueError(f"L must be odd, got {L}")
    M = (L - 1) // 2
    cols = {}
    for m in range(1, M + 1):
        for off, sgn in zip(range(4), (1, -1, -1, 1)):
            cols[-L + 4 * (m - 1) + off] = sgn
    cols[L - 2] = 1
    cols[L - 1] = 1
    assert sorted(cols) == list(range(-L, L))
    return cols


def chessboard_projectors(torus: TorusLattice, fock=None):
    """Diagonals of (P_Lambda^(+), P_Lambda^(-))."""
    fock = _fock(torus, fock)
    cols = chessboard_columns(torus.L)
    plus = np.ones(fock.dim)
    minus = np.ones(fock.dim)
    for k, (j1, _) in enumerate(torus.sites):
        p = charge_projectors(k, torus, fock)
        sgn = cols[j1]
        plus *= p.plus if sgn > 0 else p.minus
        minus *= p.minus if sgn > 0 else p.plus
    return plus, minus
