"""Graphs on labeled vertices 0..n-1 and the combinatorial kernel.

A :class:`Graph` is immutable. It keeps a read-only boolean adjacency matrix
(used by the numeric paths) and lazily derives an edge set and per-vertex
neighbour bitsets (Python ints, used by every backtracking search).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidArgument, ResourceLimitError

DEFAULT_NODE_BUDGET = 20_000_000


class Graph:
    """Undirected simple graph on vertices ``0..n-1``."""

    __slots__ = ("_adj", "_edges", "_masks", "_key")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise InvalidArgument(f"vertex count must be non-negative, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for pair in edges:
            i, j = (int(x) for x in pair)
            if i == j:
                raise InvalidArgument(f"self-loop at vertex {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidArgument(f"edge ({i}, {j}) out of range for n={n}")
            if adj[i, j]:
                raise InvalidArgument(f"duplicate edge ({min(i, j)}, {max(i, j)})")
            adj[i, j] = adj[j, i] = True
        self._set_adj(adj)

    def _set_adj(self, adj):
        adj.setflags(write=False)
        self._adj = adj
        self._edges = None
        self._masks = None
        self._key = None

    @classmethod
    def from_adjacency(cls, adj, check: bool = True) -> "Graph":
        a = np.array(adj, dtype=bool, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidArgument("adjacency must be a square matrix")
        if check:
            if a.diagonal().any():
                raise InvalidArgument("adjacency has self-loops")
            if not np.array_equal(a, a.T):
                raise InvalidArgument("adjacency is not symmetric")
        g = cls.__new__(cls)
        g._set_adj(a)
        return g

    # --- accessors -----------------------------------------------------

    @property
    def n(self) -> int:
        return self._adj.shape[0]

    vertex_count = n

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def edges(self) -> frozenset:
        if self._edges is None:
            iu, ju = np.nonzero(np.triu(self._adj, 1))
            self._edges = frozenset(zip(iu.tolist(), ju.tolist()))
        return self._edges

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self._adj)) // 2

    @property
    def masks(self) -> tuple:
        """Neighbourhood of each vertex as an integer bitset."""
        if self._masks is None:
            n = self.n
            if n == 0:
                self._masks = ()
            else:
                weights = [1 << j for j in range(n)]
                self._masks = tuple(
                    sum(weights[j] for j in np.flatnonzero(row)) for row in self._adj
                )
        return self._masks

    def degrees(self) -> np.ndarray:
        return self._adj.sum(axis=1)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def _hash_key(self):
        if self._key is None:
            iu = np.triu_indices(self.n, 1)
            self._key = (self.n, np.packbits(self._adj[iu]).tobytes())
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._hash_key() == other._hash_key()

    def __hash__(self):
        return hash(self._hash_key())

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


class VertexEmbedding(tuple):
    """Injective map from pattern vertex ``i`` to host vertex ``self[i]``."""

    def __new__(cls, mapping: Iterable[int], host_n: int | None = None):
        m = tuple(int(v) for v in mapping)
        if len(set(m)) != len(m):
            raise InvalidArgument(f"embedding is not injective: {m}")
        if host_n is not None and any(v < 0 or v >= host_n for v in m):
            raise InvalidArgument(f"embedding {m} out of range for host of {host_n} vertices")
        return super().__new__(cls, m)


# --- named graphs ------------------------------------------------------


def complete_graph(k):
    return Graph(k, itertools.combinations(range(k), 2))


def empty_graph(k):
    return Graph(k)


def path_graph(k):
    return Graph(k, ((i, i + 1) for i in range(k - 1)))


def cycle_graph(k):
    if k < 3:
        raise InvalidArgument("a cycle needs at least 3 vertices")
    return Graph(k, [(i, i + 1) for i in range(k - 1)] + [(0, k - 1)])


def star_graph(k):
    """Star on ``k`` vertices with centre 0."""
    return Graph(k, ((0, i) for i in range(1, k)))


# --- elementary operations ----------------------------------------------


def complement(g: Graph) -> Graph:
    """Complement relative to the complete graph on the same vertices."""
    a = ~g.adjacency
    np.fill_diagonal(a, False)
    return Graph.from_adjacency(a, check=False)


def structure_complement(g: Graph) -> Graph:
    """Complement of a structure within K_{v(g)} on its own labels.

    Graphs here always live on exactly their own vertex set, so this agrees
    with :func:`complement`; it is kept separate because callers mean a
    different thing by it (the non-edges a planted copy forbids).
    """
    return complement(g)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    vs = [int(v) for v in vertices]
    if len(set(vs)) != len(vs):
        raise InvalidArgument(f"duplicate vertex in {vs}")
    if any(v < 0 or v >= g.n for v in vs):
        raise InvalidArgument(f"vertex out of range in {vs} for n={g.n}")
    idx = np.asarray(vs, dtype=np.intp)
    return Graph.from_adjacency(g.adjacency[np.ix_(idx, idx)], check=False)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Graph with edge {perm[i], perm[j]} for every edge {i, j} of ``g``."""
    perm = np.asarray(perm, dtype=np.intp)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return Graph.from_adjacency(g.adjacency[np.ix_(inv, inv)], check=False)


def density(g: Graph) -> Fraction:
    if g.n == 0:
        raise InvalidArgument("density of the null graph is undefined")
    return Fraction(g.edge_count, g.n)


def is_complete(g: Graph) -> bool:
    return g.edge_count == comb(g.n, 2)


def is_edgeless(g: Graph) -> bool:
    return g.edge_count == 0


# --- embedding search ------------------------------------------------------


def _search_order(pattern: Graph) -> list:
    """Order pattern vertices so each one is as constrained as possible."""
    k = pattern.n
    if k == 0:
        return []
    deg = pattern.degrees()
    adj = pattern.adjacency
    placed = []
    remaining = set(range(k))
    while remaining:
        if placed:
            conn = {u: int(adj[u, placed].sum()) for u in remaining}
        else:
            conn = {u: 0 for u in remaining}
        u = max(remaining, key=lambda x: (conn[x], deg[x], -x))
        placed.append(u)
        remaining.remove(u)
    return placed


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit):
        self.limit = limit
        self.left = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise ResourceLimitError(
                f"search exceeded node budget of {self.limit}", bound=self.limit
            )


def iter_embeddings(
    pattern: Graph,
    host: Graph,
    *,
    fixed: dict | None = None,
    exact_degrees: bool = False,
    budget: int = DEFAULT_NODE_BUDGET,
) -> Iterator[tuple]:
    """Yield every injective map pattern -> host whose image induces ``pattern``.

    Each yielded tuple ``m`` satisfies ``m[i]`` = host image of pattern vertex i.
    ``fixed`` pins some pattern vertices to given host vertices.  With
    ``exact_degrees`` the images must have the same degree as their preimages
    (used for isomorphism, where host and pattern have the same order).
    """
    k, n = pattern.n, host.n
    if k > n:
        return
    if k == 0:
        yield ()
        return
    fixed = dict(fixed or {})
    pmasks = pattern.masks
    hmasks = host.masks
    full = (1 << n) - 1
    pdeg = pattern.degrees()
    hdeg = host.degrees()

    allowed = []
    for u in range(k):
        if exact_degrees:
            ok = hdeg == pdeg[u]
        else:
            # neighbours map to neighbours and non-neighbours to non-neighbours
            ok = (hdeg >= pdeg[u]) & ((n - 1 - hdeg) >= (k - 1 - pdeg[u]))
        allowed.append(sum(1 << int(v) for v in np.flatnonzero(ok)))
    for u, h in fixed.items():
        if not (allowed[u] >> h) & 1:
            return
        allowed[u] = 1 << h

    order = _search_order(pattern)
    # pinned vertices first so the rest is constrained by them
    order = [u for u in order if u in fixed] + [u for u in order if u not in fixed]
    # for each depth: list of (earlier depth, adjacent?) constraints
    constraints = []
    for d, u in enumerate(order):
        constraints.append([(e, bool((pmasks[u] >> order[e]) & 1)) for e in range(d)])

    images = [0] * k
    mapping = [0] * k
    tick = _Budget(budget).tick

    def rec(d, used):
        if d == k:
            yield tuple(mapping)
            return
        u = order[d]
        cand = allowed[u] & ~used
        for e, adjacent in constraints[d]:
            if adjacent:
                cand &= hmasks[images[e]]
            else:
                cand &= full & ~hmasks[images[e]]
            if not cand:
                return
        while cand:
            tick()
            low = cand & -cand
            h = low.bit_length() - 1
            cand ^= low
            images[d] = h
            mapping[u] = h
            yield from rec(d + 1, used | low)

    yield from rec(0, 0)


def count_embeddings(pattern: Graph, host: Graph, budget: int = DEFAULT_NODE_BUDGET) -> int:
    return sum(1 for _ in iter_embeddings(pattern, host, budget=budget))


def find_embedding(pattern: Graph, host: Graph, budget: int = DEFAULT_NODE_BUDGET):
    """First induced embedding found, or ``None``."""
    for m in iter_embeddings(pattern, host, budget=budget):
        return VertexEmbedding(m)
    return None


def _invariants(g: Graph):
    return (g.n, g.edge_count, tuple(sorted(g.degrees().tolist())))


def are_isomorphic(a: Graph, b: Graph, budget: int = DEFAULT_NODE_BUDGET) -> bool:
    if _invariants(a) != _invariants(b):
        return False
    for _ in iter_embeddings(a, b, exact_degrees=True, budget=budget):
        return True
    return False


def automorphism_count(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """|Aut(g)| by orbit-stabilizer over a chain of pointwise stabilizers.

    At each level the orbit of the next base point under the current
    stabilizer is found by asking, for every same-degree candidate, whether
    an automorphism extending the pinned prefix exists.
    """
    n = g.n
    if n <= 1:
        return 1
    if g.edge_count in (0, n * (n - 1) // 2):
        return math.factorial(n)
    deg = g.degrees()
    order = sorted(range(n), key=lambda v: (-deg[v], v))
    fixed: dict = {}
    total = 1
    for v in order:
        orbit = 0
        for w in np.flatnonzero(deg == deg[v]).tolist():
            if w in fixed.values() and w != v:
                continue
            pins = dict(fixed)
            pins[v] = w
            for _ in iter_embeddings(g, g, fixed=pins, exact_degrees=True, budget=budget):
                orbit += 1
                break
        total *= orbit
        fixed[v] = v
    return total


def count_induced_copies(host: Graph, pattern: Graph, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Number of vertex subsets of ``host`` inducing a copy of ``pattern``."""
    if pattern.n > host.n:
        return 0
    emb = count_embeddings(pattern, host, budget=budget)
    aut = automorphism_count(pattern)
    assert emb % aut == 0
    return emb // aut


# --- cliques -------------------------------------------------------------


def _greedy_color_bound(P: int, masks) -> int:
    """Number of colours in a greedy colouring of the vertex set ``P``."""
    colors = 0
    U = P
    while U:
        colors += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~masks[v]
            Q &= ~low
            U &= ~low
    return colors


def _color_sort(P: int, masks):
    order, bounds = [], []
    color = 0
    U = P
    while U:
        color += 1
        Q = U
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~masks[v]
            Q &= ~low
            U &= ~low
            order.append(v)
            bounds.append(color)
    return order, bounds


def max_clique(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> list:
    """A maximum clique, by branch and bound with greedy-colouring bounds."""
    masks = g.masks
    if g.n == 0:
        return []
    best: list = []
    tick = _Budget(budget).tick

    def expand(R, P):
        nonlocal best
        order, bounds = _color_sort(P, masks)
        for idx in range(len(order) - 1, -1, -1):
            tick()
            if len(R) + bounds[idx] <= len(best):
                return
            v = order[idx]
            R2 = R + [v]
            newP = P & masks[v]
            if newP:
                expand(R2, newP)
            elif len(R2) > len(best):
                best = R2
            P &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    return sorted(best)


def clique_number(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> int:
    return len(max_clique(g, budget=budget))


def first_clique(g: Graph, k: int, budget: int = DEFAULT_NODE_BUDGET):
    """Lexicographically smallest k-clique of ``g`` (sorted tuple), or None."""
    masks = g.masks
    if k == 0:
        return ()
    if k > g.n:
        return None
    tick = _Budget(budget).tick

    def rec(R, P):
        need = k - len(R)
        if need == 0:
            return tuple(R)
        if P.bit_count() < need or _greedy_color_bound(P, masks) < need:
            return None
        while P:
            tick()
            low = P & -P
            v = low.bit_length() - 1
            P ^= low
            res = rec(R + [v], P & masks[v])
            if res is not None:
                return res
            if P.bit_count() < need:
                return None
        return None

    return rec([], (1 << g.n) - 1)


# --- general induced copies in lexicographic order -----------------------------


def first_induced_copy(host: Graph, pattern: Graph, budget: int = DEFAULT_NODE_BUDGET):
    """Lexicographically smallest vertex set of ``host`` inducing ``pattern``.

    Depth-first over sorted vertex subsets; each partial subset carries every
    partial map into the pattern consistent with what it induces, so the first
    complete subset reached is the smallest one.
    """
    k, n = pattern.n, host.n
    if k == 0:
        return ()
    if k > n:
        return None
    if is_complete(pattern):
        return first_clique(host, k, budget=budget)
    if is_edgeless(pattern):
        return first_clique(complement(host), k, budget=budget)

    hm = host.masks
    pm = pattern.masks
    hdeg = host.degrees()
    pdeg = pattern.degrees()
    # a host vertex can only carry pattern vertices whose degree constraints it meets
    usable = [
        [p for p in range(k) if hdeg[v] >= pdeg[p] and (n - 1 - hdeg[v]) >= (k - 1 - pdeg[p])]
        for v in range(n)
    ]
    tick = _Budget(budget).tick

    def rec(S, maps, start):
        if len(S) == k:
            return tuple(S)
        need = k - len(S)
        for v in range(start, n - need + 1):
            tick()
            if not usable[v]:
                continue
            new_maps = []
            for m in maps:
                taken = set(m)
                for p in usable[v]:
                    if p in taken:
                        continue
                    ok = True
                    for s, ps in zip(S, m):
                        if ((hm[v] >> s) & 1) != ((pm[p] >> ps) & 1):
                            ok = False
                            break
                    if ok:
                        new_maps.append(m + (p,))
            if new_maps:
                res = rec(S + [v], new_maps, v + 1)
                if res is not None:
                    return res
        return None

    return rec([], [()], 0)


def max_structure_size(host: Graph, family, budget: int = DEFAULT_NODE_BUDGET) -> int:
    """Size of the largest family member appearing induced in ``host``.

    ``family`` is ``"clique"``, ``"independent_set"`` or a fixed pattern
    :class:`Graph`; a fixed pattern has one size, so the answer is either its
    order or 0.
    """
    if isinstance(family, Graph):
        if family.n == 0:
            return 0
        if is_complete(family):
            return family.n if clique_number(host, budget) >= family.n else 0
        if is_edgeless(family):
            return family.n if clique_number(complement(host), budget) >= family.n else 0
        return family.n if find_embedding(family, host, budget=budget) is not None else 0
    if family == "clique":
        return clique_number(host, budget)
    if family in ("independent_set", "independent"):
        return clique_number(complement(host), budget)
    raise InvalidArgument(f"unknown structure family {family!r}")


# --- text format ---------------------------------------------------------------


def format_graph(g: Graph, planted: Sequence[int] | None = None) -> str:
    lines = [f"n {g.n}"]
    if planted is not None:
        lines.append("# planted: " + " ".join(str(int(v)) for v in planted))
    lines.extend(f"{i} {j}" for i, j in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    """Parse the ``n <count>`` + ``i j`` per line format. ``#`` lines are comments."""
    n = None
    edges = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise InvalidArgument(f"line {lineno}: expected 'n <vertex_count>', got {raw!r}")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise InvalidArgument(f"line {lineno}: expected 'i j', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        if i == j:
            raise InvalidArgument(f"line {lineno}: self-loop at {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise InvalidArgument(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    if n is None:
        raise InvalidArgument("missing 'n <vertex_count>' header")
    return Graph(n, edges)


def parse_planted(text: str):
    """Vertices from a ``# planted: ...`` line, or a bare whitespace list."""
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("# planted:"):
            return [int(x) for x in line.split(":", 1)[1].split()]
    tokens = text.split()
    if tokens and all(t.lstrip("-").isdigit() for t in tokens):
        return [int(t) for t in tokens]
    return None


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(path, g: Graph, planted=None):
    with open(path, "w") as fh:
        fh.write(format_graph(g, planted))
