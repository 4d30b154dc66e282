"""Product proximity network and its display backbone.

Proximity between two products is the minimum of the two conditional
co-export probabilities, computed from the binary advantage matrix:

    phi_pp' = sum_c M_cp M_cp' / max(k_p0, k_p'0)

The backbone keeps every edge of a maximum spanning tree (forest on
disconnected inputs) plus all edges at or above the display threshold, so
the rendered graph stays connected wherever the phi > 0 graph is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import AtlasError
from .matrix import AdvantageMatrix
from .registry import Registry


@dataclass
class ProximityMatrix:
    products: Registry
    phi: np.ndarray  # symmetric, zero diagonal, values in [0, 1]

    def restrict(self, products) -> "ProximityMatrix":
        preg = self.products.subset(products)
        idx = [self.products.index(p) for p in preg]
        return ProximityMatrix(preg, self.phi[np.ix_(idx, idx)])


@dataclass
class SpaceNode:
    id: str
    size: float  # world trade of the product in the period
    pgi: float | None
    pci: float | None


@dataclass
class SpaceEdge:
    source: str
    target: str
    phi: float


@dataclass
class SpaceGraph:
    nodes: list[SpaceNode]
    links: list[SpaceEdge]

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": n.id, "size": n.size, "pgi": n.pgi, "pci": n.pci}
                for n in self.nodes
            ],
            "links": [
                {"source": e.source, "target": e.target, "phi": e.phi}
                for e in self.links
            ],
        }


def proximity(adv: AdvantageMatrix) -> ProximityMatrix:
    """Pairwise min-conditional co-export probability; diagonal set to zero."""
    m = adv.m.astype(float)
    joint = m.T @ m  # co-export counts
    ub = adv.ubiquity.astype(float)
    denom = np.maximum(ub[:, None], ub[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(denom > 0, joint / denom, 0.0)
    np.fill_diagonal(phi, 0.0)
    phi = np.minimum(phi, phi.T)  # exact symmetry regardless of round-off
    return ProximityMatrix(adv.products, phi)


def pooled_advantage(advs: Sequence[AdvantageMatrix]) -> AdvantageMatrix:
    """OR of advantage matrices across periods, over the union registries."""
    if not advs:
        raise AtlasError("no advantage matrices to pool")
    countries = Registry(c for a in advs for c in a.countries)
    products = Registry(p for a in advs for p in a.products)
    m = np.zeros((len(countries), len(products)), dtype=np.int64)
    for a in advs:
        rows = [countries.index(c) for c in a.countries]
        cols = [products.index(p) for p in a.products]
        m[np.ix_(rows, cols)] |= a.m
    return AdvantageMatrix(countries, products, m)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> bool:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return False
        self.parent[rj] = ri
        return True


def maximum_spanning_edges(phi: np.ndarray) -> list[tuple[int, int]]:
    """Kruskal maximum spanning forest over the phi > 0 graph.

    Ties broken by ascending index pair, so the forest is deterministic.
    """
    n = phi.shape[0]
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if phi[i, j] > 0
    ]
    edges.sort(key=lambda e: (-phi[e[0], e[1]], e[0], e[1]))
    uf = _UnionFind(n)
    return [e for e in edges if uf.union(*e)]


def backbone(
    prox: ProximityMatrix,
    threshold: float = 0.55,
    sizes: Mapping[str, float] | None = None,
    pgi: Mapping[str, float] | None = None,
    pci: Mapping[str, float | None] | None = None,
) -> SpaceGraph:
    """Display graph: maximum spanning forest plus edges with phi >= threshold.

    Node sizes come from the period's world trade per product; PGI/PCI are
    attached where available and left null (explicitly) where not.
    """
    if not 0.0 <= threshold <= 1.0:
        raise AtlasError(f"threshold must be in [0, 1], got {threshold}")
    n = len(prox.products)
    if n == 0:
        raise AtlasError("empty proximity matrix")
    keep = {e for e in maximum_spanning_edges(prox.phi)}
    phi = prox.phi
    for i in range(n):
        for j in range(i + 1, n):
            if phi[i, j] >= threshold and phi[i, j] > 0:
                keep.add((i, j))
    codes = list(prox.products)
    sizes = sizes or {}
    pgi = pgi or {}
    pci = pci or {}
    nodes = [
        SpaceNode(
            id=p,
            size=float(sizes.get(p, 0.0)),
            pgi=pgi.get(p),
            pci=pci.get(p),
        )
        for p in codes
    ]
    links = [
        SpaceEdge(codes[i], codes[j], float(phi[i, j]))
        for i, j in sorted(keep)
    ]
    return SpaceGraph(nodes, links)
