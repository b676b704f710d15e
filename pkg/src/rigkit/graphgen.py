"""Sampling and storage layout for the bipartite vertex-attribute incidence.

A graph instance is kept as two aligned CSR structures: attribute lists per
vertex, and vertex lists per *occupied* attribute.  The attribute pool can be
enormous (the default m-rule gives m ~ n ln^2 n ln ln n), so nothing here ever
allocates an array of length m; attributes are densified to the set that
actually occurs.  The vertex-vertex edge list is likewise never materialized:
heavy vertices share attributes with thousands of others and the induced
cliques would blow up memory, so traversals run on the bipartite structure.
"""

from __future__ import annotations

import numpy as np

from .model import ModelParams, VertexWeights, sample_tilde_weights

__all__ = [
    "BipartiteIncidence",
    "sample_subset",
    "sample_incidence",
    "generate",
    "adjacent",
    "neighbors",
    "concat_ranges",
]

# Largest n*m for which vertex*m + attr packs into int64 with headroom.
_PACK_LIMIT = 2**62


def concat_ranges(indptr: np.ndarray, data: np.ndarray, items: np.ndarray):
    """Concatenate data[indptr[i]:indptr[i+1]] for every i in items.

    Returns (values, lengths).  Vectorized: one np.repeat + one arange,
    no per-item Python loop.
    """
    items = np.asarray(items, dtype=np.int64)
    starts = indptr[items]
    lens = indptr[items + 1] - starts
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=data.dtype), lens
    offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
    idx = np.arange(total, dtype=np.int64) + np.repeat(starts - offsets, lens)
    return data[idx], lens


class BipartiteIncidence:
    """CSR incidence between n vertices and the occupied attributes.

    Attributes
    ----------
    n, m : int
        Vertex count and attribute pool size.
    set_indptr : (n+1,) int64
        Row pointer for per-vertex attribute lists.
    set_attrs : int64
        Original attribute ids, sorted within each vertex.
    attr_ids : (A,) int64
        Sorted original ids of the A occupied attributes.
    set_attrs_dense : int64
        set_attrs relabeled into 0..A-1 (positions in attr_ids).
    attr_indptr : (A+1,) int64
        Row pointer for per-dense-attribute vertex lists.
    attr_vertices : int64
        Vertices holding each dense attribute, sorted within each attribute.
    """

    def __init__(self, n, m, set_indptr, set_attrs, attr_ids, set_attrs_dense,
                 attr_indptr, attr_vertices):
        self.n = int(n)
        self.m = int(m)
        self.set_indptr = set_indptr
        self.set_attrs = set_attrs
        self.attr_ids = attr_ids
        self.set_attrs_dense = set_attrs_dense
        self.attr_indptr = attr_indptr
        self.attr_vertices = attr_vertices

    # -- construction ------------------------------------------------------

    @classmethod
    def from_flat(cls, n: int, m: int, sizes: np.ndarray, flat: np.ndarray,
                  presorted: bool = False) -> "BipartiteIncidence":
        """Build from concatenated per-vertex attribute lists.

        flat holds the lists back to back in vertex order; sizes gives each
        length.  With presorted=True the lists must already be sorted (the
        samplers guarantee this) and the per-vertex sort is skipped.
        """
        n = int(n)
        m = int(m)
        sizes = np.asarray(sizes, dtype=np.int64)
        flat = np.asarray(flat, dtype=np.int64)
        if sizes.shape != (n,):
            raise ValueError("sizes must have length n")
        if int(sizes.sum()) != flat.shape[0]:
            raise ValueError("sizes do not add up to the flat list length")
        if np.any(sizes < 0) or np.any(sizes > m):
            raise ValueError("set sizes must lie in [0, m]")
        if flat.size and (flat.min() < 0 or flat.max() >= m):
            raise ValueError("attribute ids must lie in [0, m)")

        set_indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(sizes, out=set_indptr[1:])
        vert_of = np.repeat(np.arange(n, dtype=np.int64), sizes)
        if not presorted:
            order = np.lexsort((flat, vert_of))
            flat = flat[order]
        if flat.size:
            dup = (vert_of[1:] == vert_of[:-1]) & (flat[1:] == flat[:-1])
            if np.any(dup):
                raise ValueError("a vertex lists the same attribute twice")

        attr_ids, set_attrs_dense = np.unique(flat, return_inverse=True)
        set_attrs_dense = set_attrs_dense.astype(np.int64, copy=False)
        counts = np.bincount(set_attrs_dense, minlength=attr_ids.shape[0])
        attr_indptr = np.zeros(attr_ids.shape[0] + 1, dtype=np.int64)
        np.cumsum(counts, out=attr_indptr[1:])
        inv_order = np.lexsort((vert_of, set_attrs_dense))
        attr_vertices = vert_of[inv_order]
        return cls(n, m, set_indptr, flat, attr_ids, set_attrs_dense,
                   attr_indptr, attr_vertices)

    @classmethod
    def from_sets(cls, n: int, m: int, sets) -> "BipartiteIncidence":
        """Build from an iterable of n attribute-id collections."""
        sets = [np.asarray(s, dtype=np.int64) for s in sets]
        if len(sets) != n:
            raise ValueError(f"expected {n} sets, got {len(sets)}")
        sizes = np.array([s.shape[0] for s in sets], dtype=np.int64)
        flat = np.concatenate(sets) if sets else np.empty(0, dtype=np.int64)
        return cls.from_flat(n, m, sizes, flat, presorted=False)

    # -- accessors ---------------------------------------------------------

    @property
    def num_occupied(self) -> int:
        """Number of attributes held by at least one vertex."""
        return self.attr_ids.shape[0]

    @property
    def total_incidence(self) -> int:
        return self.set_attrs.shape[0]

    def set_of(self, v: int) -> np.ndarray:
        """Sorted original attribute ids of vertex v."""
        return self.set_attrs[self.set_indptr[v]:self.set_indptr[v + 1]]

    def set_size(self, v: int) -> int:
        return int(self.set_indptr[v + 1] - self.set_indptr[v])

    def sizes(self) -> np.ndarray:
        return np.diff(self.set_indptr)

    def vertices_with_attr(self, attr: int) -> np.ndarray:
        """Sorted vertices holding original attribute id attr (may be empty)."""
        pos = np.searchsorted(self.attr_ids, attr)
        if pos == self.attr_ids.shape[0] or self.attr_ids[pos] != attr:
            return np.empty(0, dtype=np.int64)
        return self.attr_vertices[self.attr_indptr[pos]:self.attr_indptr[pos + 1]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteIncidence):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.set_indptr, other.set_indptr)
            and np.array_equal(self.set_attrs, other.set_attrs)
        )

    def __repr__(self) -> str:
        return (f"BipartiteIncidence(n={self.n}, m={self.m}, "
                f"incidence={self.total_incidence}, occupied={self.num_occupied})")


def sample_subset(m: int, z: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform z-subset of {0, ..., m-1}, returned sorted.

    Sparse regime (z <= m/2): the set of the first z distinct values of an
    iid uniform stream, which is exactly uniform over z-subsets and needs
    O(z) draws in expectation.  Dense regime: a permutation prefix.
    """
    if z < 0 or z > m:
        raise ValueError(f"subset size {z} outside [0, {m}]")
    if z == 0:
        return np.empty(0, dtype=np.int64)
    if z > m // 2:
        return np.sort(rng.permutation(m)[:z].astype(np.int64))
    got = np.unique(rng.integers(0, m, size=z, dtype=np.int64))
    while got.shape[0] < z:
        extra = rng.integers(0, m, size=z - got.shape[0], dtype=np.int64)
        got = np.union1d(got, extra)
    return got


def sample_incidence(m: int, sizes: np.ndarray, rng: np.random.Generator) -> "BipartiteIncidence":
    """Sample every vertex's uniform subset at once, sizes[v] attributes each.

    All subsets are drawn in one batch: each raw draw is packed as
    vertex*m + attr, deduplicated with a single np.unique, and vertices left
    short of their quota are topped up in later rounds.  Per vertex this
    realizes the same first-z-distinct stream as sample_subset, so the
    subsets are exactly uniform and mutually independent.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    n = sizes.shape[0]
    if np.any(sizes < 0) or np.any(sizes > m):
        raise ValueError("set sizes must lie in [0, m]")
    total = int(sizes.sum())
    if total == 0:
        return BipartiteIncidence.from_flat(n, m, sizes,
                                            np.empty(0, dtype=np.int64),
                                            presorted=True)
    if n * m >= _PACK_LIMIT:
        # Packed keys would overflow int64; fall back to per-vertex sampling.
        flat = np.concatenate([sample_subset(m, int(z), rng) for z in sizes])
        return BipartiteIncidence.from_flat(n, m, sizes, flat, presorted=True)

    vert_of = np.repeat(np.arange(n, dtype=np.int64), sizes)
    keys = vert_of * m + rng.integers(0, m, size=total, dtype=np.int64)
    keys = np.unique(keys)
    deficit = sizes - np.bincount(keys // m, minlength=n)
    while np.any(deficit > 0):
        need = np.flatnonzero(deficit)
        extra_vert = np.repeat(need, deficit[need])
        extra = extra_vert * m + rng.integers(0, m, size=extra_vert.shape[0],
                                              dtype=np.int64)
        keys = np.union1d(keys, extra)
        deficit = sizes - np.bincount(keys // m, minlength=n)

    # keys are sorted, so attrs come out sorted within each vertex.
    return BipartiteIncidence.from_flat(n, m, sizes, keys % m, presorted=True)


def generate(params: ModelParams, rng: np.random.Generator):
    """Sample a full instance: weights first, then all attribute subsets.

    Returns (incidence, weights).  The rng is consumed in a fixed order
    (one weight batch, then the subset batch), so a given (params, seed)
    pair reproduces the instance bit for bit.
    """
    weights = sample_tilde_weights(params, rng)
    inc = sample_incidence(params.m, weights.sizes, rng)
    return inc, weights


def adjacent(inc: BipartiteIncidence, u: int, v: int) -> bool:
    """True when u and v share at least one attribute.  Requires u != v."""
    if u == v:
        raise ValueError("adjacency is defined for distinct vertices")
    a = inc.set_of(u)
    b = inc.set_of(v)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return False
    if a.shape[0] > b.shape[0]:
        a, b = b, a
    pos = np.searchsorted(b, a)
    pos[pos == b.shape[0]] = b.shape[0] - 1
    return bool(np.any(b[pos] == a))


def neighbors(inc: BipartiteIncidence, u: int) -> np.ndarray:
    """Sorted neighbours of u: every other vertex sharing an attribute."""
    dense = inc.set_attrs_dense[inc.set_indptr[u]:inc.set_indptr[u + 1]]
    verts, _ = concat_ranges(inc.attr_indptr, inc.attr_vertices, dense)
    verts = np.unique(verts)
    return verts[verts != u]
