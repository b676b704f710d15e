"""Connectivity and shortest paths on the intersection graph.

All traversals run directly on the bipartite incidence, alternating
vertex-side and attribute-side frontiers; an intersection-graph hop is two
bipartite hops.  This keeps hub cliques implicit: a popular attribute is
expanded once instead of contributing quadratically many edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components as _cc

from .graphgen import BipartiteIncidence, concat_ranges
from .model import VertexWeights

__all__ = [
    "ComponentLabeling",
    "DistanceResult",
    "components",
    "bfs_distance",
    "distances_from",
    "maximal_vertex",
    "unique_edges",
    "degrees",
]

UNREACHED = -1  # in-array marker for "no finite distance"; JSON uses null


@dataclass(frozen=True)
class ComponentLabeling:
    """Vertex component labels, canonical: label k's first vertex precedes
    label k+1's first vertex.  sizes[k] counts vertices; giant is the label
    of a largest component (smallest label on ties)."""

    labels: np.ndarray
    sizes: np.ndarray
    giant: int

    @property
    def count(self) -> int:
        return self.sizes.shape[0]

    def giant_fraction(self) -> float:
        return float(self.sizes[self.giant]) / float(self.labels.shape[0])

    def giant_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.labels == self.giant)


def components(inc: BipartiteIncidence) -> ComponentLabeling:
    """Label connected components of the intersection graph.

    Runs union-style labeling on the bipartite star graph (n vertex nodes +
    one node per occupied attribute), which has the same vertex partition as
    the intersection graph but only total_incidence edges.
    """
    n = inc.n
    a = inc.num_occupied
    rows = np.repeat(np.arange(n, dtype=np.int64), inc.sizes())
    cols = n + inc.set_attrs_dense
    graph = sp.coo_matrix(
        (np.ones(rows.shape[0], dtype=np.int8), (rows, cols)),
        shape=(n + a, n + a),
    )
    _, raw = _cc(graph, directed=False)
    raw = raw[:n]
    uniq, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(uniq.shape[0], dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(uniq.shape[0])
    labels = rank[inverse]
    sizes = np.bincount(labels)
    giant = int(np.argmax(sizes))  # first max, i.e. smallest label
    return ComponentLabeling(labels=labels, sizes=sizes, giant=giant)


@dataclass(frozen=True)
class DistanceResult:
    """hops is None exactly when no path exists; path lists the vertices of
    one shortest path (hops + 1 of them), endpoints included."""

    hops: Optional[int]
    path: Optional[list]


def _bfs(inc: BipartiteIncidence, sources: np.ndarray, targets=None):
    """Level-synchronous BFS from a set of sources.

    Returns (dist, vparent, aparent): dist[v] in intersection hops with
    UNREACHED for unvisited; vparent[v] the dense attribute through which v
    was first reached; aparent[d] the vertex through which dense attribute d
    was first reached.  Parents take the smallest qualifying id at each
    dedup, so reconstructed paths are deterministic.  With targets given,
    the search stops once the level containing the nearest target completes.
    """
    n = inc.n
    dist = np.full(n, UNREACHED, dtype=np.int64)
    vparent = np.full(n, UNREACHED, dtype=np.int64)
    aparent = np.full(inc.num_occupied, UNREACHED, dtype=np.int64)
    attr_seen = np.zeros(inc.num_occupied, dtype=bool)

    target_mask = None
    if targets is not None:
        target_mask = np.zeros(n, dtype=bool)
        target_mask[np.asarray(targets, dtype=np.int64)] = True

    frontier = np.unique(np.asarray(sources, dtype=np.int64))
    dist[frontier] = 0
    if target_mask is not None and np.any(target_mask[frontier]):
        return dist, vparent, aparent
    level = 0
    while frontier.size:
        # vertex frontier -> attributes not yet expanded
        attrs, lens = concat_ranges(inc.set_indptr, inc.set_attrs_dense, frontier)
        owners = np.repeat(frontier, lens)
        fresh = ~attr_seen[attrs]
        attrs, owners = attrs[fresh], owners[fresh]
        if attrs.size:
            order = np.lexsort((owners, attrs))
            attrs, owners = attrs[order], owners[order]
            keep = np.ones(attrs.shape[0], dtype=bool)
            keep[1:] = attrs[1:] != attrs[:-1]
            attrs, owners = attrs[keep], owners[keep]
            attr_seen[attrs] = True
            aparent[attrs] = owners

        # fresh attributes -> vertices not yet visited
        verts, lens = concat_ranges(inc.attr_indptr, inc.attr_vertices, attrs)
        via = np.repeat(attrs, lens)
        fresh = dist[verts] == UNREACHED
        verts, via = verts[fresh], via[fresh]
        if verts.size == 0:
            break
        order = np.lexsort((via, verts))
        verts, via = verts[order], via[order]
        keep = np.ones(verts.shape[0], dtype=bool)
        keep[1:] = verts[1:] != verts[:-1]
        verts, via = verts[keep], via[keep]
        level += 1
        dist[verts] = level
        vparent[verts] = via
        frontier = verts
        if target_mask is not None and np.any(target_mask[verts]):
            break
    return dist, vparent, aparent


def _walk_back(dist, vparent, aparent, v: int) -> list:
    path = [int(v)]
    while dist[path[-1]] > 0:
        via = vparent[path[-1]]
        path.append(int(aparent[via]))
    path.reverse()
    return path


def bfs_distance(inc: BipartiteIncidence, u: int, v: int) -> DistanceResult:
    """Shortest path between two vertices; hops=None when disconnected."""
    for x in (u, v):
        if not (0 <= x < inc.n):
            raise ValueError(f"vertex {x} out of range")
    if u == v:
        return DistanceResult(hops=0, path=[int(u)])
    dist, vparent, aparent = _bfs(inc, np.array([u]), targets=np.array([v]))
    if dist[v] == UNREACHED:
        return DistanceResult(hops=None, path=None)
    return DistanceResult(hops=int(dist[v]),
                          path=_walk_back(dist, vparent, aparent, v))


def distances_from(inc: BipartiteIncidence, u: int) -> np.ndarray:
    """Hop counts from u to every vertex; UNREACHED (-1) where no path."""
    if not (0 <= u < inc.n):
        raise ValueError(f"vertex {u} out of range")
    dist, _, _ = _bfs(inc, np.array([u]))
    return dist


def nearest_of(inc: BipartiteIncidence, source: int, targets: np.ndarray) -> DistanceResult:
    """Shortest path from source to the nearest member of targets.

    Ties go to the smallest-id target at the minimal distance.
    """
    targets = np.asarray(targets, dtype=np.int64)
    if targets.size == 0:
        raise ValueError("targets must be nonempty")
    dist, vparent, aparent = _bfs(inc, np.array([source]), targets=targets)
    reached = targets[dist[targets] != UNREACHED]
    if reached.size == 0:
        return DistanceResult(hops=None, path=None)
    best = reached[np.argmin(dist[reached])]
    hits = reached[dist[reached] == dist[best]]
    best = int(hits.min())
    return DistanceResult(hops=int(dist[best]),
                          path=_walk_back(dist, vparent, aparent, best))


def maximal_vertex(weights: VertexWeights) -> int:
    """Index of the vertex with the largest attribute-set size (ties: smallest id)."""
    return int(np.argmax(weights.sizes))


def unique_edges(inc: BipartiteIncidence) -> np.ndarray:
    """All intersection-graph edges as an (E, 2) array with u < v.

    Expands each multi-vertex attribute into its vertex pairs and dedups.
    Intended for the sparse-overlap regime (m well above n); an attribute
    shared by k vertices contributes k(k-1)/2 raw pairs.
    """
    counts = np.diff(inc.attr_indptr)
    n = inc.n
    keys = []
    for k in np.unique(counts):
        if k < 2:
            continue
        which = np.flatnonzero(counts == k)
        block, _ = concat_ranges(inc.attr_indptr, inc.attr_vertices, which)
        block = block.reshape(-1, int(k))
        iu, ju = np.triu_indices(int(k), 1)
        # vertex lists are sorted, so block[:, iu] < block[:, ju] holds
        keys.append((block[:, iu] * n + block[:, ju]).ravel())
    if not keys:
        return np.empty((0, 2), dtype=np.int64)
    pairs = np.unique(np.concatenate(keys))
    return np.column_stack((pairs // n, pairs % n))


def degrees(inc: BipartiteIncidence) -> np.ndarray:
    """Intersection-graph degree of every vertex."""
    edges = unique_edges(inc)
    deg = np.bincount(edges[:, 0], minlength=inc.n)
    deg += np.bincount(edges[:, 1], minlength=inc.n)
    return deg
