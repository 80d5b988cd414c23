"""Fermionic Fock space with spin over a set of lattice sites.

Modes are ordered by (position of the site in ``sites``, spin) with up before
down; mode ``k`` is bit ``k`` of the basis index.  Basis state ``s`` is the
ascending creation monomial ``c*_{k1} c*_{k2} ... Omega`` (k1 < k2 < ...), which
gives ``c*_k`` the Jordan-Wigner sign ``(-1)^{#occupied modes below k}``.

Operators are plain dense numpy arrays over this basis.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np

from . import _kernels
from .lattice import HalfSplit, TorusLattice

UP, DOWN = 0, 1
SPINS = (UP, DOWN)


def _spin(spin) -> int:
    if spin in (UP, "up", "u", "+"):
        return UP
    if spin in (DOWN, "down", "d", "-"):
        return DOWN
    raise ValueError(f"bad spin {spin!r}")


class FockSpace:
    """Fock space over ``sites`` (canonical indices of ``torus``; default all)."""

    def __init__(self, torus: TorusLattice, sites=None):
        self.torus = torus
        self.sites = tuple(range(torus.n_sites)) if sites is None else tuple(sites)
        self._pos = {s: p for p, s in enumerate(self.sites)}
        self.n_modes = 2 * len(self.sites)
        if self.n_modes > 16:
            raise ValueError(f"{len(self.sites)} sites is too many for a dense Fock space")
        self.dim = 1 << self.n_modes

    def __repr__(self):
        return f"FockSpace(sites={self.sites}, dim={self.dim})"

    # -- indexing ------------------------------------------------------------
    def site_pos(self, site) -> int:
        if not isinstance(site, (int, np.integer)):
            site = self.torus.site_index(site)
        try:
            return self._pos[int(site)]
        except KeyError:
            raise ValueError(f"site {site} is not in this Fock space") from None

    def mode(self, site, spin=UP) -> int:
        return 2 * self.site_pos(site) + _spin(spin)

    def modes_of(self, sites) -> list[int]:
        return [self.mode(s, sp) for s in sites for sp in SPINS]

    @cached_property
    def occupations(self) -> np.ndarray:
        return _kernels.occupations(self.n_modes)

    # -- operators -----------------------------------------------------------
    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim)
        v[0] = 1.0
        return v

    def identity(self) -> np.ndarray:
        return np.eye(self.dim)

    def monomial(self, modes, daggers, coef=1.0, out=None) -> np.ndarray:
        """Dense matrix of ``coef * o_1 ... o_m``; ``o_p = c*`` where ``daggers[p]``."""
        target, sign = _kernels.monomial_action(modes, daggers, self.dim)
        if out is None:
            out = np.zeros((self.dim, self.dim), dtype=np.result_type(float, coef))
        cols = np.nonzero(target >= 0)[0]
        np.add.at(out, (target[cols], cols), coef * sign[cols])
        return out

    def creation(self, mode: int) -> np.ndarray:
        return self.monomial([mode], [True])

    def annihilation(self, mode: int) -> np.ndarray:
        return self.monomial([mode], [False])

    def number_diag(self, mode: int) -> np.ndarray:
        return self.occupations[:, mode].astype(float)

    def site_number_diag(self, site) -> np.ndarray:
        p = self.site_pos(site)
        return self.occupations[:, 2 * p:2 * p + 2].sum(axis=1).astype(float)

    def charge_diag(self, site) -> np.ndarray:
        return self.site_number_diag(site) - 1.0

    def charge(self, site) -> np.ndarray:
        """``q_j = n_{j up} + n_{j down} - 1`` as a (diagonal) matrix."""
        return np.diag(self.charge_diag(site))

    def total_number_diag(self) -> np.ndarray:
        return self.occupations.sum(axis=1).astype(float)

    def total_sz_diag(self) -> np.ndarray:
        occ = self.occupations
        return 0.5 * (occ[:, 0::2].sum(axis=1) - occ[:, 1::2].sum(axis=1))

    def parity_diag(self, sites=None) -> np.ndarray:
        """Diagonal of ``(-1)^{N}`` with ``N`` summed over ``sites`` (default all)."""
        sites = self.sites if sites is None else sites
        cols = self.modes_of(sites)
        n = self.occupations[:, cols].sum(axis=1)
        return 1.0 - 2.0 * (n & 1)

    def a_operator(self, site, spin, split: HalfSplit) -> np.ndarray:
        """``c_{j sigma} (-1)^{N_first}`` for a site in the first half of ``split``."""
        k = site if isinstance(site, (int, np.integer)) else self.torus.site_index(site)
        if split.side_of(int(k)) != 0:
            raise ValueError(f"site {site} is not in the first half of the {split.kind} split")
        c = self.annihilation(self.mode(k, spin))
        return c * self.parity_diag(split.first)[None, :]

    # -- sectors -------------------------------------------------------------
    def sector(self, n=None, sz=None) -> np.ndarray:
        """Basis indices with particle number ``n`` and/or ``S_z = sz``."""
        mask = np.ones(self.dim, dtype=bool)
        if n is not None:
            mask &= self.total_number_diag() == n
        if sz is not None:
            mask &= np.isclose(self.total_sz_diag(), sz)
        return np.nonzero(mask)[0]

    def sectors(self):
        """All nonempty (N, S_z) blocks as ``((n, sz), indices)``."""
        out = []
        for n in range(self.n_modes + 1):
            for two_sz in range(-n, n + 1, 2):
                idx = self.sector(n, two_sz / 2)
                if idx.size:
                    out.append(((n, two_sz / 2), idx))
        return out

    # -- tensor factorization ------------------------------------------------
    def split_spaces(self, split: HalfSplit) -> tuple["FockSpace", "FockSpace"]:
        return FockSpace(self.torus, split.first), FockSpace(self.torus, split.second)

    def split_permutation(self, split: HalfSplit) -> np.ndarray:
        """Signed permutation ``P`` with ``A_product = P A P^T``.

        The product basis vector ``|b_L> (x) |b_R>`` is (ascending first-half
        monomial) (ascending second-half monomial) Omega, indexed as
        ``b_L * dim_R + b_R`` (numpy ``kron`` order).
        """
        if set(split.first) | set(split.second) != set(self.sites):
            raise ValueError("split does not match this Fock space")
        left = self.modes_of(split.first)
        right = self.modes_of(split.second)
        occ = self.occupations.astype(np.int64)
        wl = 1 << np.arange(len(left))
        bl = occ[:, left] @ wl
        br = occ[:, right] @ (1 << np.arange(len(right)))
        # reordering sign: pairs (right mode r, left mode l) with r < l, both occupied
        before = np.array([[int(r < l) for l in left] for r in right])
        pairs = np.einsum("sr,rl,sl->s", occ[:, right], before, occ[:, left])
        sign = 1.0 - 2.0 * (pairs & 1)
        p = np.zeros((self.dim, self.dim))
        p[bl * (1 << len(right)) + br, np.arange(self.dim)] = sign
        return p

    def tensor_split(self, A: np.ndarray, split: HalfSplit) -> np.ndarray:
        if A.shape != (self.dim, self.dim):
            raise ValueError(f"expected a {self.dim}x{self.dim} operator, got {A.shape}")
        p = self.split_permutation(split)
        return p @ A @ p.T

    def tensor_join(self, A_prod: np.ndarray, split: HalfSplit) -> np.ndarray:
        if A_prod.shape != (self.dim, self.dim):
            raise ValueError(f"expected a {self.dim}x{self.dim} operator, got {A_prod.shape}")
        p = self.split_permutation(split)
        return p.T @ A_prod @ p


# -- matrix helpers ----------------------------------------------------------

def is_hermitian(A: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(A - A.conj().T), initial=0.0) <= tol * max(1.0, max_norm(A)))


def op_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, 2))


def max_norm(A: np.ndarray) -> float:
    return float(np.max(np.abs(A), initial=0.0))


def anticommutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B + B @ A


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A
