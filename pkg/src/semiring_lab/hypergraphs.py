"""Kneser hypergraphs and the homomorphism search between them.

Vertices of a Kneser instance are m-subsets of [km] stored as km-bit masks
(bit i-1 set <=> i in the subset).  Homomorphism search runs on the graph
view, where two vertices are adjacent iff their masks are disjoint.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from functools import cached_property

from .terms import Term, Word

KNESER_VERTEX_GUARD = 5000

DEFAULT_BUDGET_MS = 10 * 60 * 1000
DEFAULT_NODE_BUDGET = 10**9


class HypergraphError(ValueError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    vertices: tuple
    hyperedges: tuple  # tuple of frozensets of vertex indices
    uniformity: int | None = None

    def __post_init__(self):
        n = len(self.vertices)
        for e in self.hyperedges:
            if not e:
                raise HypergraphError("empty hyperedge")
            if any(not 0 <= v < n for v in e):
                raise HypergraphError(f"hyperedge {sorted(e)} leaves the vertex range")
            if self.uniformity is not None and len(e) != self.uniformity:
                raise HypergraphError(
                    f"hyperedge {sorted(e)} has size {len(e)}, expected {self.uniformity}")

    def is_uniform(self) -> bool:
        return len({len(e) for e in self.hyperedges}) <= 1


def mask_of(subset) -> int:
    m = 0
    for i in subset:
        m |= 1 << (i - 1)
    return m


def subset_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def vertex_name(mask: int) -> str:
    return "x_" + "_".join(str(i) for i in subset_of(mask))


def _partitions(free: int, m: int):
    """All partitions of the set bits of ``free`` into blocks of size m.

    The block containing the least unused element is fixed first, so each
    unordered partition is produced exactly once.
    """
    if free == 0:
        yield ()
        return
    low = free & -free
    rest = [1 << i for i in range(free.bit_length()) if (free >> i) & 1 and (1 << i) != low]
    for combo in itertools.combinations(rest, m - 1):
        block = low
        for b in combo:
            block |= b
        for tail in _partitions(free & ~block, m):
            yield (block,) + tail


@dataclass(frozen=True)
class KneserInstance:
    k: int
    m: int
    masks: tuple  # vertex masks in lexicographic subset order
    hypergraph: Hypergraph = field(repr=False)

    @cached_property
    def index(self) -> dict:
        return {mask: i for i, mask in enumerate(self.masks)}

    @cached_property
    def adjacency(self) -> tuple:
        """Bitset over vertex indices of the vertices disjoint from each vertex."""
        masks = self.masks
        out = []
        for a in masks:
            bits = 0
            for j, b in enumerate(masks):
                if not a & b:
                    bits |= 1 << j
            out.append(bits)
        return tuple(out)

    @cached_property
    def neighbours(self) -> tuple:
        return tuple(tuple(j for j in range(len(self.masks)) if (adj >> j) & 1)
                     for adj in self.adjacency)

    @property
    def full_mask(self) -> int:
        return (1 << (self.k * self.m)) - 1

    def label(self, i: int) -> tuple[int, ...]:
        return subset_of(self.masks[i])


def expected_vertex_count(k: int, m: int) -> int:
    return math.comb(k * m, m)


def expected_edge_count(k: int, m: int) -> int:
    return math.factorial(k * m) // (math.factorial(m) ** k * math.factorial(k))


def kneser(k: int, m: int, guard: int = KNESER_VERTEX_GUARD) -> KneserInstance:
    if k < 3:
        raise HypergraphError(f"Kneser hypergraphs need k >= 3, got k={k}")
    if m < 1:
        raise HypergraphError(f"m must be positive, got m={m}")
    nv = expected_vertex_count(k, m)
    if nv > guard:
        raise HypergraphError(f"kneser({k},{m}) has {nv} vertices, above the guard {guard}")
    masks = tuple(mask_of(c) for c in itertools.combinations(range(1, k * m + 1), m))
    index = {mask: i for i, mask in enumerate(masks)}
    full = (1 << (k * m)) - 1
    edges = []
    for part in _partitions(full, m):
        edges.append(frozenset(index[b] for b in part))
    inst = KneserInstance(k, m, masks,
                          Hypergraph(tuple(subset_of(x) for x in masks), tuple(edges), k))
    _check_kneser(inst)
    return inst


def _check_kneser(inst: KneserInstance) -> None:
    k, m = inst.k, inst.m
    if len(inst.masks) != expected_vertex_count(k, m):
        raise AssertionError("vertex count mismatch")
    if len(inst.hypergraph.hyperedges) != expected_edge_count(k, m):
        raise AssertionError("hyperedge count mismatch")
    full = inst.full_mask
    for e in inst.hypergraph.hyperedges:
        acc = 0
        for v in e:
            mk = inst.masks[v]
            if acc & mk:
                raise AssertionError(f"hyperedge {sorted(e)} is not pairwise disjoint")
            acc |= mk
        if acc != full:
            raise AssertionError(f"hyperedge {sorted(e)} does not cover [km]")


# -- terms ------------------------------------------------------------------

def hypergraph_terms(h, ordering_mode: str = "single", names=None) -> tuple[Term, Word]:
    """Return (t_H, q_H) for a uniform hypergraph or Kneser instance.

    ``ordering_mode='all'`` emits every ordering of each hyperedge's product;
    ``'single'`` keeps one ordering (increasing vertex index), which is enough
    for evaluation in commutative algebras.
    """
    if isinstance(h, KneserInstance):
        if names is None:
            names = [vertex_name(mk) for mk in h.masks]
        h = h.hypergraph
    if names is None:
        names = [f"x_{i + 1}" for i in range(len(h.vertices))]
    if not h.is_uniform():
        raise HypergraphError("hypergraph terms need a uniform hypergraph")
    if ordering_mode not in ("single", "all"):
        raise ValueError(f"unknown ordering mode {ordering_mode!r}")
    words = []
    for e in h.hyperedges:
        verts = sorted(e)
        if ordering_mode == "single":
            words.append(Word(tuple(names[v] for v in verts)))
        else:
            for perm in itertools.permutations(verts):
                words.append(Word(tuple(names[v] for v in perm)))
    q = Word(tuple(names[v] for v in range(len(h.vertices))))
    return Term(words), q


# -- homomorphisms ----------------------------------------------------------

@dataclass
class HomCertificate:
    kind: str  # "found" | "exhausted" | "timeout"
    source: tuple  # (k, m)
    target: tuple  # (k, n)
    map: list | None = None  # source vertex index -> target vertex index
    nodes: int = 0
    elapsed_ms: float = 0.0
    symmetry: bool = True
    method: str = "search"

    def subset_pairs(self, source: KneserInstance, target: KneserInstance):
        if self.map is None:
            return None
        return [[list(source.label(i)), list(target.label(j))] for i, j in enumerate(self.map)]

    def to_dict(self, source: KneserInstance | None = None, target: KneserInstance | None = None):
        d = {
            "kind": self.kind,
            "source": {"k": self.source[0], "m": self.source[1]},
            "target": {"k": self.target[0], "m": self.target[1]},
            "nodes": self.nodes,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "symmetry": "first-image-fixed" if self.symmetry else "none",
            "method": self.method,
        }
        if self.map is not None and source is not None and target is not None:
            d["map"] = self.subset_pairs(source, target)
        return d


class _Exhausted(Exception):
    pass


def hom_search(source: KneserInstance, target: KneserInstance,
               budget_ms: int = DEFAULT_BUDGET_MS, node_budget: int = DEFAULT_NODE_BUDGET,
               symmetry: bool = True) -> HomCertificate:
    """Search for a disjointness-preserving map between Kneser vertex sets.

    Backtracking with forward checking: assigning ``v -> t`` intersects the
    domain of every source neighbour of ``v`` with the target neighbourhood
    of ``t``.  Branching picks the unassigned vertex with the smallest
    domain (ties: more unassigned neighbours, then lower index).

    With ``symmetry`` on, the first branching vertex is sent to the target
    vertex {1..n}; any homomorphism can be composed with a permutation of
    [kn] to achieve this, so existence is unaffected.
    """
    if source.k != target.k:
        raise HypergraphError("source and target must share k")
    start = time.perf_counter()
    deadline = start + budget_ms / 1000.0
    ns = len(source.masks)
    nt = len(target.masks)
    nbrs = source.neighbours
    tadj = target.adjacency
    full = (1 << nt) - 1
    dom = [full] * ns
    assigned = [-1] * ns
    unassigned = set(range(ns))
    nodes = 0
    check_every = 4096

    def pick():
        best = None
        best_key = None
        for v in unassigned:
            size = dom[v].bit_count()
            free_deg = sum(1 for u in nbrs[v] if assigned[u] < 0)
            key = (size, -free_deg, v)
            if best_key is None or key < best_key:
                best, best_key = v, key
        return best

    def assign(v, t):
        trail = []
        tb = tadj[t]
        for u in nbrs[v]:
            if assigned[u] < 0:
                d = dom[u]
                nd = d & tb
                if nd != d:
                    trail.append((u, d))
                    dom[u] = nd
                    if not nd:
                        return trail, False
        return trail, True

    def undo(trail):
        for u, d in reversed(trail):
            dom[u] = d

    def solve():
        nonlocal nodes
        if not unassigned:
            return True
        v = pick()
        d = dom[v]
        unassigned.discard(v)
        while d:
            low = d & -d
            t = low.bit_length() - 1
            d ^= low
            nodes += 1
            if nodes > node_budget:
                raise _Exhausted("nodes")
            if nodes % check_every == 0 and time.perf_counter() > deadline:
                raise _Exhausted("time")
            assigned[v] = t
            trail, ok = assign(v, t)
            if ok and solve():
                return True
            undo(trail)
            assigned[v] = -1
        unassigned.add(v)
        return False

    if symmetry and ns:
        # pick() with all domains full selects vertex 0; fix its image to {1..n}
        dom[0] = 1 << target.index[(1 << target.m) - 1]

    try:
        found = solve()
    except _Exhausted:
        return HomCertificate("timeout", (source.k, source.m), (target.k, target.m), None,
                              nodes, (time.perf_counter() - start) * 1000, symmetry)
    elapsed = (time.perf_counter() - start) * 1000
    if found:
        hmap = list(assigned)
        if not is_hypergraph_hom(source, target, hmap):
            raise AssertionError("search produced a map that fails hyperedge re-checking")
        return HomCertificate("found", (source.k, source.m), (target.k, target.m), hmap,
                              nodes, elapsed, symmetry)
    return HomCertificate("exhausted", (source.k, source.m), (target.k, target.m), None,
                          nodes, elapsed, symmetry)


def is_hypergraph_hom(source: KneserInstance, target: KneserInstance, hmap) -> bool:
    """Check hyperedge by hyperedge that images are hyperedges of the target."""
    if len(hmap) != len(source.masks):
        return False
    tmasks = target.masks
    full = target.full_mask
    for e in source.hypergraph.hyperedges:
        acc = 0
        for v in e:
            mk = tmasks[hmap[v]]
            if acc & mk:
                return False
            acc |= mk
        if acc != full:
            return False
    return True


def hom_exists_oracle(m: int, n: int) -> bool:
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    return n % m == 0


def block_hom(k: int, m: int, n: int) -> HomCertificate:
    """Explicit homomorphism H_{k,m} -> H_{k,n} for m | n.

    Point i of [km] is blown up to the block of n/m consecutive points
    {(i-1)r+1, ..., ir} of [kn], r = n/m.
    """
    if m < 1 or n < 1 or n % m:
        raise HypergraphError(f"block_hom needs m | n, got m={m}, n={n}")
    start = time.perf_counter()
    src = kneser(k, m)
    tgt = kneser(k, n)
    r = n // m
    block = (1 << r) - 1
    hmap = []
    for mk in src.masks:
        img = 0
        for i in subset_of(mk):
            img |= block << ((i - 1) * r)
        hmap.append(tgt.index[img])
    if not is_hypergraph_hom(src, tgt, hmap):
        raise AssertionError("block map failed hyperedge re-checking")
    return HomCertificate("found", (k, m), (k, n), hmap, 0,
                          (time.perf_counter() - start) * 1000, False, "block")
