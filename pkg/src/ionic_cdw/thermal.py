"""Exact diagonalization, Gibbs averages and spectral windows."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import logsumexp

from .fock import FockSpace
from .lattice import TorusLattice
from .model import ModelParams, build_hamiltonian, build_T_W, zigzag_unitary


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @classmethod
    def of(cls, H: np.ndarray) -> "EigenSystem":
        w, v = np.linalg.eigh(H)
        return cls(w, v)

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    def weights(self, beta: float) -> np.ndarray:
        """Normalized Boltzmann weights (uniform at beta = 0)."""
        x = -beta * (self.eigenvalues - self.eigenvalues[0])
        x = np.exp(x - logsumexp(x))
        return x

    def log_partition(self, beta: float) -> float:
        return float(logsumexp(-beta * self.eigenvalues))

    def density(self, beta: float) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.weights(beta)) @ v.conj().T

    def residual(self, H: np.ndarray) -> float:
        v = self.eigenvectors
        r = H @ v - v * self.eigenvalues
        return float(np.abs(r).max())


class Gibbs:
    """Thermal state of ``H`` at ``beta``; caches the density matrix."""

    def __init__(self, H: np.ndarray, beta: float, eig: EigenSystem | None = None):
        self.H = H
        self.beta = float(beta)
        self.eig = EigenSystem.of(H) if eig is None else eig

    @cached_property
    def rho(self) -> np.ndarray:
        return self.eig.density(self.beta)

    @cached_property
    def rho_diag(self) -> np.ndarray:
        v = self.eig.eigenvectors
        return ((np.abs(v) ** 2) * self.eig.weights(self.beta)).sum(axis=1)

    @property
    def log_partition(self) -> float:
        return self.eig.log_partition(self.beta)

    def expect(self, A: np.ndarray) -> complex:
        if A.shape != self.H.shape:
            raise ValueError(f"operator shape {A.shape} does not match {self.H.shape}")
        return complex(np.einsum("ij,ji->", A, self.rho))

    def expect_diag(self, d: np.ndarray) -> float:
        """Average of a diagonal operator given by its diagonal."""
        return float(np.dot(d, self.rho_diag))


def thermal_average(A: np.ndarray, H: np.ndarray, beta: float) -> complex:
    if A.shape != H.shape:
        raise ValueError(f"operator shape {A.shape} does not match {H.shape}")
    if beta < 0:
        raise ValueError("beta must be >= 0")
    return Gibbs(H, beta).expect(A)


def log_partition(H: np.ndarray, beta: float) -> float:
    return EigenSystem.of(H).log_partition(beta)


@dataclass(frozen=True)
class SpectralWindow:
    delta: float
    ground_energy: float
    projector: np.ndarray
    rank: int

    @property
    def complement(self) -> np.ndarray:
        return np.eye(self.projector.shape[0]) - self.projector


def spectral_window(H: np.ndarray | EigenSystem, delta: float, n_sites: int, atol: float = 1e-10) -> SpectralWindow:
    """Projector onto eigenvalues in ``[e0, e0 + delta * n_sites]``."""
    if delta < 0:
        raise ValueError("delta must be >= 0")
    eig = H if isinstance(H, EigenSystem) else EigenSystem.of(H)
    e0 = eig.ground_energy
    scale = max(1.0, float(np.abs(eig.eigenvalues).max()))
    keep = eig.eigenvalues <= e0 + delta * n_sites + atol * scale
    v = eig.eigenvectors[:, keep]
    return SpectralWindow(delta, e0, v @ v.conj().T, int(keep.sum()))


class ModelState:
    """Both thermal states (H and the zigzag-transformed T + W) at one point."""

    def __init__(self, params: ModelParams, torus: TorusLattice, fock: FockSpace | None = None):
        self.params = params
        self.torus = torus
        self.fock = FockSpace(torus) if fock is None else fock

    @cached_property
    def H(self):
        return build_hamiltonian(self.params, self.torus, self.fock)

    @cached_property
    def TW(self):
        return build_T_W(self.params, self.torus, self.fock)

    @cached_property
    def Ht(self):
        T, W = self.TW
        return T + W

    @cached_property
    def gibbs_H(self):
        return Gibbs(self.H, self.params.beta)

    @cached_property
    def gibbs(self):
        """Thermal state of the transformed Hamiltonian; the default for checks."""
        return Gibbs(self.Ht, self.params.beta)

    def charge(self, k):
        return self.fock.charge_diag(k)


def staggered_correlation(j, params: ModelParams, torus: TorusLattice, state: ModelState | None = None):
    """``((-1)^|j| <q_o q_j>_H, <q_o q_j>_Ht)``; the two agree."""
    state = ModelState(params, torus) if state is None else state
    k = j if isinstance(j, (int, np.integer)) else torus.site_index(j)
    qq = state.charge(torus.origin) * state.charge(k)
    sgn = 1 - 2 * torus.parity(int(k))
    return sgn * state.gibbs_H.expect_diag(qq), state.gibbs.expect_diag(qq)


def staggered_correlation_sectors(j, params: ModelParams, torus: TorusLattice, fock: FockSpace | None = None):
    """``(-1)^|j| <q_o q_j>_H`` computed block by block in (N, S_z) sectors."""
    fock = FockSpace(torus) if fock is None else fock
    H = build_hamiltonian(params, torus, fock)
    k = j if isinstance(j, (int, np.integer)) else torus.site_index(j)
    qq = fock.charge_diag(torus.origin) * fock.charge_diag(k)
    logs, vals = [], []
    for _, idx in fock.sectors():
        w, v = np.linalg.eigh(H[np.ix_(idx, idx)])
        logw = -params.beta * w
        logs.append(logw)
        vals.append(((np.abs(v) ** 2) * qq[idx, None]).sum(axis=0))
    logw = np.concatenate(logs)
    p = np.exp(logw - logsumexp(logw))
    sgn = 1 - 2 * torus.parity(int(k))
    return sgn * float(np.dot(p, np.concatenate(vals)))


def transformed_via_zigzag(A: np.ndarray, torus: TorusLattice, fock=None, Z=None) -> np.ndarray:
    """``Z A Z^{-1}``, moving an observable of H to the transformed frame."""
    Z = zigzag_unitary(torus, fock) if Z is None else Z
    return Z @ A @ Z.conj().T
