"""Connected sets, contours and Peierls counting on the geometric torus.

Everything here uses the multiplicity-one nearest-neighbour view of the torus,
so a site of the side-2 torus has two neighbours, not four.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .lattice import TorusLattice

MAX_ENUM_SIDE = 8
MAX_COUNT_SIDE = 6


def neighbour_table(torus: TorusLattice):
    """``(nbr, deg)``: distinct neighbours padded with -1, and their number."""
    n = torus.n_sites
    nbr = -np.ones((n, 4), dtype=np.int64)
    deg = np.zeros(n, dtype=np.int64)
    for k in range(n):
        nb = torus.neighbors(k)
        nbr[k, :len(nb)] = nb
        deg[k] = len(nb)
    return nbr, deg


def is_connected(sites, torus: TorusLattice) -> bool:
    sites = set(sites)
    if not sites:
        return False
    start = next(iter(sites))
    seen = {start}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        for w in torus.neighbors(v):
            if w in sites and w not in seen:
                seen.add(w)
                todo.append(w)
    return seen == sites


def enumerate_connected_sets(torus: TorusLattice, max_size: int) -> list[frozenset]:
    """All connected site sets of size ``1..max_size``, sorted by (size, members)."""
    if torus.side > MAX_ENUM_SIDE:
        raise ValueError(f"enumeration is limited to side <= {MAX_ENUM_SIDE}, got side {torus.side}")
    max_size = min(int(max_size), torus.n_sites)
    if max_size < 1:
        return []
    nbr, deg = neighbour_table(torus)
    hist = np.zeros((max_size + 1, 4 * max_size + 1), dtype=np.int64)
    out = []
    cap = 1024
    for root in range(torus.n_sites):
        while True:
            buf = np.empty((cap, max_size), dtype=np.int64)
            h = np.zeros_like(hist)
            found = _kernels.redelmeier(nbr, deg, root, True, max_size, max_size, buf, h)
            if found <= cap:
                break
            cap = 2 * found
        for row in buf[:found]:
            out.append(frozenset(int(v) for v in row if v >= 0))
    out.sort(key=lambda s: (len(s), sorted(s)))
    return out


@dataclass(frozen=True)
class Contour:
    """Boundary of ``sites``: ordered pairs ``(inside, outside)``."""

    sites: frozenset
    pairs: tuple
    h_even: tuple
    h_odd: tuple
    v_even: tuple
    v_odd: tuple

    @property
    def length(self) -> int:
        return len(self.pairs)

    @property
    def horizontal(self) -> tuple:
        return self.h_even + self.h_odd

    @property
    def vertical(self) -> tuple:
        return self.v_even + self.v_odd


def _wedge(i: int, j: int, axis: int, torus: TorusLattice) -> int:
    # literal smaller coordinate along the bond axis (no wrap-around adjustment)
    return i if torus.sites[i][axis] < torus.sites[j][axis] else j


def boundary(sites, torus: TorusLattice) -> Contour:
    gamma = frozenset(int(s) for s in sites)
    if not gamma or len(gamma) == torus.n_sites:
        raise ValueError("boundary needs a nonempty proper subset of the lattice")
    pairs, splits = [], {(0, 0): [], (0, 1): [], (1, 0): [], (1, 1): []}
    for b in torus.geometric_bonds:
        if (b.i in gamma) == (b.j in gamma):
            continue
        pair = (b.i, b.j) if b.i in gamma else (b.j, b.i)
        pairs.append(pair)
        w = _wedge(b.i, b.j, b.axis, torus)
        splits[b.axis, torus.parity(w)].append(pair)
    return Contour(gamma, tuple(pairs), tuple(splits[0, 0]), tuple(splits[0, 1]),
                   tuple(splits[1, 0]), tuple(splits[1, 1]))


@dataclass(frozen=True)
class Configuration:
    """Signs ``+1/-1`` per site with ``values[m] = +1`` and ``values[n] = -1``."""

    values: tuple
    m: int
    n: int

    def __post_init__(self):
        if any(v not in (1, -1) for v in self.values):
            raise ValueError("configuration values must be +1 or -1")
        if self.values[self.m] != 1 or self.values[self.n] != -1:
            raise ValueError("pinned sites violated")

    def compatible(self, contour: Contour) -> bool:
        return all(self.values[i] == 1 and self.values[j] == -1 for i, j in contour.pairs)


def all_configurations(torus: TorusLattice, m: int, n: int):
    free = [k for k in range(torus.n_sites) if k not in (m, n)]
    for signs in itertools.product((1, -1), repeat=len(free)):
        vals = [0] * torus.n_sites
        vals[m], vals[n] = 1, -1
        for k, s in zip(free, signs):
            vals[k] = s
        yield Configuration(tuple(vals), m, n)


def minimal_set(c: Configuration | tuple, m: int, torus: TorusLattice) -> frozenset:
    """Connected component of the ``+`` sites containing ``m``."""
    values = c.values if isinstance(c, Configuration) else tuple(c)
    if values[m] != 1:
        raise ValueError("the configuration must be + at m")
    seen = {m}
    todo = deque([m])
    while todo:
        v = todo.popleft()
        for w in torus.neighbors(v):
            if values[w] == 1 and w not in seen:
                seen.add(w)
                todo.append(w)
    return frozenset(seen)


@dataclass(frozen=True)
class ContourCount:
    length: int
    count: int
    reference: float  # l^2 3^l

    @property
    def ratio(self) -> float:
        return self.count / self.reference


def default_max_size(torus: TorusLattice, max_length: int) -> int:
    # a set of size s that does not wind around the torus has boundary at
    # least 4 sqrt(s); winding sets with |gamma| <= |Lambda|/2 have boundary
    # at least 2*side.  The +4 is headroom, checked in the tests.
    return min(torus.n_sites // 2, max_length * max_length // 16 + 4)


def contour_histogram(torus: TorusLattice, m: int, max_size: int) -> np.ndarray:
    """``hist[size, l]`` over connected sets containing ``m`` with
    ``size <= min(max_size, |Lambda|/2)``."""
    nbr, deg = neighbour_table(torus)
    cap = torus.n_sites // 2
    max_size = max(1, min(max_size, cap))
    hist = np.zeros((max_size + 1, 4 * max_size + 1), dtype=np.int64)
    empty = np.empty((0, max_size), dtype=np.int64)
    _kernels.redelmeier(nbr, deg, int(m), False, max_size, cap, empty, hist)
    return hist


def count_contours(torus: TorusLattice, length: int, m=None, max_size=None) -> ContourCount:
    """Number of connected ``gamma`` containing ``m`` with ``|boundary| = length``
    among sets of at most half the lattice."""
    return count_contours_range(torus, [length], m, max_size)[0]


def count_contours_range(torus: TorusLattice, lengths, m=None, max_size=None) -> list[ContourCount]:
    if torus.side > MAX_COUNT_SIDE:
        raise ValueError(f"contour counting is limited to side <= {MAX_COUNT_SIDE}, got side {torus.side}")
    lengths = list(lengths)
    m = torus.origin if m is None else (m if isinstance(m, int) else torus.site_index(m))
    if max_size is None:
        max_size = default_max_size(torus, max(lengths))
    hist = contour_histogram(torus, m, max_size).sum(axis=0)
    out = []
    for ell in lengths:
        c = int(hist[ell]) if 0 <= ell < hist.size else 0
        out.append(ContourCount(ell, c, float(ell * ell * 3 ** ell)))
    return out


@dataclass(frozen=True)
class PeierlsSeries:
    value: float
    ratio: float  # 3 * P^(1 / 2|Lambda|)
    divergent: bool


def peierls_series(P: float, n_sites: int, C: float = 1.0) -> PeierlsSeries:
    """``C * sum_{l >= 4} l^2 3^l P^{l / 2|Lambda|}`` in closed form."""
    if C <= 0:
        raise ValueError("C must be positive")
    if not 0 <= P <= 1:
        raise ValueError("P must lie in [0, 1]")
    r = 3.0 * P ** (1.0 / (2 * n_sites)) if P > 0 else 0.0
    if r >= 1:
        return PeierlsSeries(float("inf"), r, True)
    # r^4 sum_k (k+4)^2 r^k, expanded so that no terms cancel
    u = 1.0 - r
    total = r ** 4 * (r * (1 + r) / u ** 3 + 8 * r / u ** 2 + 16 / u)
    return PeierlsSeries(C * total, r, False)


def peierls_partial_sum(P: float, n_sites: int, C: float = 1.0, terms: int = 10_000) -> float:
    r = 3.0 * P ** (1.0 / (2 * n_sites)) if P > 0 else 0.0
    ell = np.arange(4, 4 + terms, dtype=float)
    return float(C * np.sum(ell ** 2 * r ** ell))
