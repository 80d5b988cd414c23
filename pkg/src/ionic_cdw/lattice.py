"""Periodic 2L x 2L square lattice.

Sites are integer pairs ``(j1, j2)`` with ``-L <= j1, j2 < L``; coordinates
wrap modulo ``2L``.  The canonical site order is row-major on ``(j1, j2)`` and
every mode index downstream is derived from it, so it must not change.

Two bond views are exposed:

* ``bonds`` -- directed from each even site along ``+d1, -d1, +d2, -d2``.  This
  is the sum used by the Hamiltonian; on the side-2 torus each geometric pair
  appears twice.
* ``geometric_bonds`` -- unordered nearest-neighbour pairs with multiplicity
  one.  Contours are built on this view.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

Site = tuple[int, int]

DIRECTIONS: tuple[Site, ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))

VERTICAL = "vertical"
HORIZONTAL = "horizontal"


class Bond(NamedTuple):
    source: Site  # always even
    target: Site
    direction: Site


class GeometricBond(NamedTuple):
    i: int  # canonical site indices, i < j
    j: int
    axis: int  # 0: pair differs in j1 (horizontal), 1: differs in j2 (vertical)


def parity(site: Site) -> int:
    """0 if ``|j1| + |j2|`` is even, 1 otherwise."""
    return (abs(site[0]) + abs(site[1])) % 2


def reflect(site: Site, kind: str) -> Site:
    """Reflection across ``j1 = -1/2`` (vertical) or ``j2 = -1/2`` (horizontal).

    The vertical map is defined on the right half ``j1 >= 0`` and the
    horizontal map on the lower half ``j2 <= -1``.
    """
    j1, j2 = site
    if kind == VERTICAL:
        if j1 < 0:
            raise ValueError(f"vertical reflection needs j1 >= 0, got {site}")
        return (-j1 - 1, j2)
    if kind == HORIZONTAL:
        if j2 >= 0:
            raise ValueError(f"horizontal reflection needs j2 <= -1, got {site}")
        return (j1, -j2 - 1)
    raise ValueError(f"unknown reflection kind {kind!r}")


@dataclass(frozen=True)
class HalfSplit:
    """Partition of the torus along a reflection line.

    ``first`` is the left half (vertical) or lower half (horizontal); it is the
    first tensor factor in the Fock-space factorization.
    """

    kind: str
    first: tuple[int, ...]
    second: tuple[int, ...]
    # second-half site index -> mirrored first-half site index
    mirror: dict[int, int] = field(repr=False, compare=False)

    def side_of(self, index: int) -> int:
        return 0 if index in self.first else 1


@dataclass(frozen=True)
class TorusLattice:
    L: int
    sites: tuple[Site, ...]
    index: dict[Site, int] = field(repr=False, compare=False)
    bonds: tuple[Bond, ...] = field(repr=False, compare=False)
    geometric_bonds: tuple[GeometricBond, ...] = field(repr=False, compare=False)

    @property
    def side(self) -> int:
        return 2 * self.L

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def origin(self) -> int:
        return self.index[(0, 0)]

    def wrap(self, site: Site) -> Site:
        s = self.side
        return ((site[0] + self.L) % s - self.L, (site[1] + self.L) % s - self.L)

    def site_index(self, site: Site) -> int:
        return self.index[self.wrap(site)]

    def parity(self, site: Site | int) -> int:
        if isinstance(site, int):
            site = self.sites[site]
        return parity(site)

    def even_sites(self) -> list[int]:
        return [k for k, s in enumerate(self.sites) if parity(s) == 0]

    def odd_sites(self) -> list[int]:
        return [k for k, s in enumerate(self.sites) if parity(s) == 1]

    def reflect(self, site: Site, kind: str) -> Site:
        return reflect(self.wrap(site), kind)

    def neighbors(self, k: int) -> list[int]:
        """Distinct geometric neighbours of site ``k`` (2 on the side-2 torus, else 4)."""
        j1, j2 = self.sites[k]
        out: list[int] = []
        for d in DIRECTIONS:
            n = self.site_index((j1 + d[0], j2 + d[1]))
            if n not in out:
                out.append(n)
        return out

    def split(self, kind: str) -> HalfSplit:
        if kind == VERTICAL:
            first = tuple(k for k, s in enumerate(self.sites) if s[0] <= -1)
            second = tuple(k for k, s in enumerate(self.sites) if s[0] >= 0)
            mirror = {k: self.index[reflect(self.sites[k], VERTICAL)] for k in second}
        elif kind == HORIZONTAL:
            first = tuple(k for k, s in enumerate(self.sites) if s[1] <= -1)
            second = tuple(k for k, s in enumerate(self.sites) if s[1] >= 0)
            # r_h sends lower to upper; the same formula sends upper back to lower
            mirror = {k: self.index[(self.sites[k][0], -self.sites[k][1] - 1)] for k in second}
        else:
            raise ValueError(f"unknown split kind {kind!r}")
        return HalfSplit(kind, first, second, mirror)

    def translate(self, k: int, shift: Site) -> int:
        j1, j2 = self.sites[k]
        return self.site_index((j1 + shift[0], j2 + shift[1]))


def build_torus(L: int) -> TorusLattice:
    """Torus with ``(2L)**2`` sites; ``L`` must be an odd positive integer."""
    if not isinstance(L, int) or isinstance(L, bool):
        raise TypeError(f"L must be an int, got {type(L).__name__}")
    if L < 1:
        raise ValueError(f"L must be a positive odd integer, got {L}")
    if L % 2 == 0:
        raise ValueError(f"L must be odd, got {L}")
    return _build(L)


def geometric_torus(side: int) -> TorusLattice:
    """Torus of any even side, for the classical contour combinatorics.

    The Hamiltonian needs ``side = 2L`` with ``L`` odd; contour counting does
    not, so side 4 and 8 are allowed here.
    """
    if not isinstance(side, int) or side < 2 or side % 2:
        raise ValueError(f"side must be an even integer >= 2, got {side}")
    return _build(side // 2)


def _build(L: int) -> TorusLattice:
    sites = tuple((j1, j2) for j1 in range(-L, L) for j2 in range(-L, L))
    index = {s: k for k, s in enumerate(sites)}
    side = 2 * L

    def wrap(s):
        return ((s[0] + L) % side - L, (s[1] + L) % side - L)

    bonds = []
    for s in sites:
        if parity(s) == 0:
            for d in DIRECTIONS:
                bonds.append(Bond(s, wrap((s[0] + d[0], s[1] + d[1])), d))

    geo = {}
    for k, s in enumerate(sites):
        for axis, d in enumerate(((1, 0), (0, 1))):
            n = index[wrap((s[0] + d[0], s[1] + d[1]))]
            key = (min(k, n), max(k, n))
            geo.setdefault(key, GeometricBond(key[0], key[1], axis))
    return TorusLattice(L, sites, index, tuple(bonds), tuple(geo[k] for k in sorted(geo)))
