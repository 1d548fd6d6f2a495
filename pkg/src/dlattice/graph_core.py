"""Loopless multigraphs, spanning forests, Whitney switches and a brute-force
2-isomorphism oracle.

Edges carry stable integer ids.  The endpoint order ``(u, v)`` of each edge is
the reference orientation: "+1" on an edge always means "directed u -> v".
Orientations are tuples of +1/-1 aligned with ``MultiGraph.ends``.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterator, Mapping, Sequence

import networkx as nx

Orientation = tuple[int, ...]
EdgeBijection = dict[int, int]


class GraphError(ValueError):
    """Invalid graph input or violated precondition."""


class EdgeListError(GraphError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class EnumerationBudgetError(GraphError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    vertex_count: int
    ends: tuple[tuple[int, int], ...]
    ids: tuple[int, ...] = None  # type: ignore[assignment]

    def __post_init__(self):
        ends = tuple((int(u), int(v)) for u, v in self.ends)
        object.__setattr__(self, "ends", ends)
        ids = tuple(range(len(ends))) if self.ids is None else tuple(self.ids)
        object.__setattr__(self, "ids", ids)
        if len(ids) != len(ends) or len(set(ids)) != len(ids):
            raise GraphError("edge ids must be distinct, one per edge")
        for u, v in ends:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range")

    @property
    def edge_count(self) -> int:
        return len(self.ends)

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {e: i for i, e in enumerate(self.ids)}

    def position(self, edge_id: int) -> int:
        try:
            return self._pos[edge_id]
        except KeyError:
            raise GraphError(f"no edge with id {edge_id}") from None

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """Edge positions incident to each vertex."""
        inc = [[] for _ in range(self.vertex_count)]
        for p, (u, v) in enumerate(self.ends):
            inc[u].append(p)
            inc[v].append(p)
        return tuple(tuple(x) for x in inc)

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def other_end(self, p: int, v: int) -> int:
        u, w = self.ends[p]
        return w if v == u else u

    def edge_list_text(self) -> str:
        lines = [f"v {self.vertex_count}"]
        lines += [f"e {u} {v}" for u, v in self.ends]
        return "\n".join(lines) + "\n"


def parse_edge_list(text: str) -> MultiGraph:
    count = None
    ends = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            nums = [int(x) for x in parts[1:]]
        except ValueError:
            raise EdgeListError(lineno, f"non-integer field in {line!r}") from None
        if parts[0] == "v" and len(nums) == 1:
            if count is not None:
                raise EdgeListError(lineno, "duplicate vertex count")
            if nums[0] < 0:
                raise EdgeListError(lineno, "negative vertex count")
            count = nums[0]
        elif parts[0] == "e" and len(nums) == 2:
            u, v = nums
            if u == v:
                raise EdgeListError(lineno, f"loop edge at vertex {u}")
            if count is None:
                raise EdgeListError(lineno, "edge before vertex count line")
            if not (0 <= u < count and 0 <= v < count):
                raise EdgeListError(lineno, f"vertex index out of range in {line!r}")
            ends.append((u, v))
        else:
            raise EdgeListError(lineno, f"malformed line {line!r}")
    if count is None:
        raise EdgeListError(0, "missing vertex count line")
    return MultiGraph(count, tuple(ends))


# --- connectivity ---------------------------------------------------------

def components(g: MultiGraph, vertices: Sequence[int] | None = None,
               edges: Sequence[int] | None = None) -> list[list[int]]:
    """Connected components (sorted lists, ordered by least vertex).

    Optionally restricted to a vertex subset and/or an edge-position subset.
    """
    verts = sorted(range(g.vertex_count) if vertices is None else vertices)
    allowed = set(verts)
    adj = defaultdict(list)
    for p in (range(g.edge_count) if edges is None else edges):
        u, v = g.ends[p]
        if u in allowed and v in allowed:
            adj[u].append(v)
            adj[v].append(u)
    seen = set()
    out = []
    for s in verts:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        out.append(sorted(comp))
    return out


def is_connected(g: MultiGraph) -> bool:
    return g.vertex_count <= 1 or len(components(g)) == 1


def _require_connected(g: MultiGraph):
    if not is_connected(g):
        raise GraphError("graph is not connected")


def cut_edge_positions(g: MultiGraph) -> list[int]:
    """Positions of bridges, by lowlink DFS (parallel edges handled by position)."""
    disc = [-1] * g.vertex_count
    low = [0] * g.vertex_count
    bridges = []
    t = 0
    for root in range(g.vertex_count):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(g.incidence[root]))]
        while stack:
            v, via, it = stack[-1]
            for p in it:
                if p == via:
                    continue
                w = g.other_end(p, v)
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, p, iter(g.incidence[w])))
                    break
                low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    parent = stack[-1][0]
                    low[parent] = min(low[parent], low[v])
                    if low[v] > disc[parent]:
                        bridges.append(via)
    return sorted(bridges)


def is_two_edge_connected(g: MultiGraph) -> bool:
    _require_connected(g)
    return not cut_edge_positions(g)


def contract_cut_edges(g: MultiGraph) -> MultiGraph:
    """Contract every cut-edge; surviving edges keep their ids and orientation."""
    _require_connected(g)
    bridges = set(cut_edge_positions(g))
    if not bridges:
        return g
    parent = list(range(g.vertex_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in bridges:
        a, b = (find(x) for x in g.ends[p])
        parent[max(a, b)] = min(a, b)
    reps = sorted({find(v) for v in range(g.vertex_count)})
    new_index = {r: i for i, r in enumerate(reps)}
    keep = [p for p in range(g.edge_count) if p not in bridges]
    ends = tuple((new_index[find(g.ends[p][0])], new_index[find(g.ends[p][1])]) for p in keep)
    return MultiGraph(len(reps), ends, tuple(g.ids[p] for p in keep))


# --- forests and fundamental cuts/cycles ----------------------------------

@dataclass(frozen=True)
class LayeredForest:
    graph: MultiGraph
    forest_edges: frozenset[int]          # edge ids
    layer: tuple[int, ...]                # root-set index per vertex (0-based)
    parent_edge: tuple[int | None, ...] = field(repr=False)   # position of the forest edge to the parent

    def in_forest(self, edge_id: int) -> bool:
        return edge_id in self.forest_edges


def layered_forest(g: MultiGraph) -> tuple[LayeredForest, Orientation, Orientation]:
    """Spanning forest from successive root sets, plus the orientations O1 and O2.

    R_1 holds the least vertex of each component.  Each component of
    G_{i+1} = G_i - R_i gets as root its least vertex adjacent to R_i, joined
    to its (unique) neighbour in R_i by the least-id edge between them.
    """
    layer = [-1] * g.vertex_count
    parent_edge: list[int | None] = [None] * g.vertex_count
    remaining = set(range(g.vertex_count))
    roots = [c[0] for c in components(g)]
    i = 0
    while True:
        for r in roots:
            layer[r] = i
        remaining -= set(roots)
        if not remaining:
            break
        root_set = set(roots)
        new_roots = []
        for comp in components(g, vertices=remaining):
            best = None
            for v in comp:
                links = [p for p in g.incidence[v] if g.other_end(p, v) in root_set]
                if links:
                    best = (v, min(links, key=lambda p: g.ids[p]))
                    break
            if best is None:  # cannot happen for a component of G_{i+1}
                raise AssertionError("component of G_{i+1} not adjacent to R_i")
            v, p = best
            parent_edge[v] = p
            new_roots.append(v)
        roots = new_roots
        i += 1
    forest = frozenset(g.ids[p] for p in parent_edge if p is not None)
    o1 = []
    for p, (u, v) in enumerate(g.ends):
        if layer[u] == layer[v]:
            raise AssertionError("edge inside a root set")
        o1.append(1 if layer[u] < layer[v] else -1)
    o2 = [s if g.ids[p] in forest else -s for p, s in enumerate(o1)]
    lf = LayeredForest(g, forest, tuple(layer), tuple(parent_edge))
    return lf, tuple(o1), tuple(o2)


def reference_orientation(g: MultiGraph) -> Orientation:
    return (1,) * g.edge_count


def _tail_head(g: MultiGraph, p: int, o: Sequence[int]) -> tuple[int, int]:
    u, v = g.ends[p]
    return (u, v) if o[p] > 0 else (v, u)


def fundamental_cut(forest: LayeredForest, edge_id: int,
                    orientation: Sequence[int] | None = None) -> dict[int, int]:
    """cut(F, e) with cut-orientation signs relative to ``orientation`` (default: reference).

    The side containing the tail of ``e`` is K1; every cut edge is directed
    out of K1 and signed +1 where ``orientation`` agrees with that.
    """
    g = forest.graph
    if edge_id not in forest.forest_edges:
        raise GraphError(f"edge {edge_id} is not a forest edge")
    o = reference_orientation(g) if orientation is None else orientation
    p = g.position(edge_id)
    tree = [q for q in range(g.edge_count) if g.ids[q] in forest.forest_edges and q != p]
    tail, _ = _tail_head(g, p, o)
    k1 = next(set(c) for c in components(g, edges=tree) if tail in c)
    out = {}
    for q, (u, v) in enumerate(g.ends):
        if (u in k1) != (v in k1):
            t, _ = _tail_head(g, q, o)
            out[g.ids[q]] = 1 if t in k1 else -1
    return out


def _forest_path(forest: LayeredForest, a: int, b: int) -> list[tuple[int, int, int]]:
    """Forest path from a to b as (position, from, to) steps."""
    g = forest.graph
    layer, par = forest.layer, forest.parent_edge

    def up(x):
        p = par[x]
        return p, g.other_end(p, x)

    left, right = [], []
    x, y = a, b
    while x != y:
        if layer[x] >= layer[y]:
            p, nx_ = up(x)
            left.append((p, x, nx_))
            x = nx_
        else:
            p, ny = up(y)
            right.append((p, ny, y))
            y = ny
    return left + right[::-1]


def fundamental_cycle(forest: LayeredForest, edge_id: int,
                      orientation: Sequence[int] | None = None) -> dict[int, int]:
    """cyc(F, e), oriented to traverse e along ``orientation``; signs relative to it."""
    g = forest.graph
    if edge_id in forest.forest_edges:
        raise GraphError(f"edge {edge_id} is a forest edge")
    o = reference_orientation(g) if orientation is None else orientation
    p = g.position(edge_id)
    tail, head = _tail_head(g, p, o)
    out = {edge_id: 1}
    for q, a, b in _forest_path(forest, head, tail):
        t, _ = _tail_head(g, q, o)
        out[g.ids[q]] = 1 if t == a else -1
    return out


def cycle_space_basis(g: MultiGraph) -> list[tuple[int, ...]]:
    forest, _, _ = layered_forest(g)
    basis = []
    for p, e in enumerate(g.ids):
        if e not in forest.forest_edges:
            cyc = fundamental_cycle(forest, e)
            basis.append(tuple(int(x in cyc) for x in g.ids))
    return basis


def _cycle_masks(g: MultiGraph) -> list[int]:
    out = []
    for vec in cycle_space_basis(g):
        out.append(sum(1 << p for p, bit in enumerate(vec) if bit))
    return out


def _is_even(g: MultiGraph, mask: int) -> bool:
    parity = [0] * g.vertex_count
    p = 0
    while mask:
        if mask & 1:
            u, v = g.ends[p]
            parity[u] ^= 1
            parity[v] ^= 1
        mask >>= 1
        p += 1
    return not any(parity)


def verify_two_isomorphism(g: MultiGraph, h: MultiGraph, f: Mapping[int, int]) -> bool:
    """True iff the edge bijection ``f`` carries the binary cycle space of g onto that of h."""
    if g.edge_count != h.edge_count:
        raise GraphError("edge sets differ in size")
    if sorted(f) != sorted(g.ids) or sorted(f.values()) != sorted(h.ids):
        return False
    img = [h.position(f[e]) for e in g.ids]
    gbasis = _cycle_masks(g)
    if len(gbasis) != len(_cycle_masks(h)):
        return False
    for mask in gbasis:
        mapped = sum(1 << img[p] for p in range(g.edge_count) if mask >> p & 1)
        if not _is_even(h, mapped):
            return False
    return True


# --- brute force oracle ---------------------------------------------------

def circuits(g: MultiGraph) -> list[int]:
    """All circuits as edge-position bitmasks (exhaustive; small graphs only)."""
    out = []
    for mask in range(1, 1 << g.edge_count):
        deg = [0] * g.vertex_count
        verts = set()
        bits = []
        for p in range(g.edge_count):
            if mask >> p & 1:
                u, v = g.ends[p]
                deg[u] += 1
                deg[v] += 1
                verts.update((u, v))
                bits.append(p)
        if any(d not in (0, 2) for d in deg):
            continue
        if len(components(g, vertices=verts, edges=bits)) == 1:
            out.append(mask)
    return out


def brute_force_two_isomorphism(g: MultiGraph, h: MultiGraph,
                                max_edges: int = 10) -> EdgeBijection | None:
    """Lexicographically least 2-isomorphism (on non-cut edges), or None.

    Backtracks over edge assignments in id order, pruned by per-edge circuit
    length profiles and by checking each circuit as soon as it is fully
    assigned.  Both graphs are first reduced by contracting cut-edges.
    """
    if max(g.edge_count, h.edge_count) > max_edges:
        raise EnumerationBudgetError(f"brute-force oracle limited to {max_edges} edges")
    g, h = contract_cut_edges(g), contract_cut_edges(h)
    if g.edge_count != h.edge_count:
        return None
    cg, ch = circuits(g), circuits(h)
    if len(cg) != len(ch):
        return None
    if sorted(bin(c).count("1") for c in cg) != sorted(bin(c).count("1") for c in ch):
        return None

    def profile(graph, circ):
        prof = [[] for _ in range(graph.edge_count)]
        for c in circ:
            size = bin(c).count("1")
            for p in range(graph.edge_count):
                if c >> p & 1:
                    prof[p].append(size)
        return [tuple(sorted(x)) for x in prof]

    pg, ph = profile(g, cg), profile(h, ch)
    order = sorted(range(g.edge_count), key=lambda p: g.ids[p])
    rank_of = {p: i for i, p in enumerate(order)}
    closing = defaultdict(list)
    for c in cg:
        last = max((p for p in range(g.edge_count) if c >> p & 1), key=rank_of.get)
        closing[last].append(c)
    hset = set(ch)
    h_order = sorted(range(h.edge_count), key=lambda p: h.ids[p])
    img = [-1] * g.edge_count
    used = [False] * h.edge_count

    def search(i: int) -> bool:
        if i == len(order):
            return True
        p = order[i]
        for q in h_order:
            if used[q] or pg[p] != ph[q]:
                continue
            img[p] = q
            ok = True
            for c in closing[p]:
                mapped = 0
                for r in range(g.edge_count):
                    if c >> r & 1:
                        mapped |= 1 << img[r]
                if mapped not in hset:
                    ok = False
                    break
            if ok:
                used[q] = True
                if search(i + 1):
                    return True
                used[q] = False
            img[p] = -1
        return False

    if not search(0):
        return None
    f = {g.ids[p]: h.ids[img[p]] for p in range(g.edge_count)}
    if not verify_two_isomorphism(g, h, f):
        raise AssertionError("oracle produced a map that fails verification")
    return f


# --- switches ---------------------------------------------------------------

def whitney_switch(g: MultiGraph, side_edges, v: int, w: int) -> MultiGraph:
    """Reattach the side ``side_edges`` (given by id) with v and w exchanged."""
    side = {g.position(e) for e in side_edges}
    if v == w:
        raise GraphError("switch vertices must be distinct")
    side_verts = {x for p in side for x in g.ends[p]}
    rest_verts = {x for p in range(g.edge_count) if p not in side for x in g.ends[p]}
    if not (side_verts & rest_verts) <= {v, w}:
        raise GraphError("{v, w} does not separate the side from the rest")
    swap = {v: w, w: v}
    ends = tuple((swap.get(a, a), swap.get(b, b)) if p in side else (a, b)
                 for p, (a, b) in enumerate(g.ends))
    return MultiGraph(g.vertex_count, ends, g.ids)


def separation_pieces(g: MultiGraph, v: int, w: int) -> list[list[int]]:
    """Edge-position groups hanging off {v, w}: one per component of G - {v, w},
    plus one per edge joining v and w directly."""
    pieces = []
    others = [x for x in range(g.vertex_count) if x not in (v, w)]
    for comp in components(g, vertices=others):
        cset = set(comp)
        pieces.append(sorted(p for p in range(g.edge_count)
                             if g.ends[p][0] in cset or g.ends[p][1] in cset))
    pieces += [[p] for p in range(g.edge_count) if set(g.ends[p]) == {v, w}]
    return [pc for pc in pieces if pc]


def random_switch(g: MultiGraph, rng) -> MultiGraph:
    """Apply one random switch along a 2-vertex separation (returns g if none exists)."""
    pairs = []
    for v, w in combinations(range(g.vertex_count), 2):
        pieces = separation_pieces(g, v, w)
        if len(pieces) >= 2:
            pairs.append((v, w, pieces))
    if not pairs:
        return g
    v, w, pieces = pairs[rng.randrange(len(pairs))]
    k = rng.randrange(1, len(pieces))
    chosen = rng.sample(range(len(pieces)), k)
    side = [g.ids[p] for i in chosen for p in pieces[i]]
    return whitney_switch(g, side, v, w)


# --- corpus -----------------------------------------------------------------

def to_networkx(g: MultiGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    for u, v in g.ends:
        if h.has_edge(u, v):
            h[u][v]["m"] += 1
        else:
            h.add_edge(u, v, m=1)
    for u, v, data in h.edges(data=True):
        data["label"] = str(data["m"])
    return h


def _iso_key(h: nx.Graph) -> str:
    return nx.weisfeiler_lehman_graph_hash(h, edge_attr="label", iterations=3)


def enumerate_multigraphs(max_edges: int, two_edge_connected_only: bool = False,
                          budget: int = 8) -> Iterator[MultiGraph]:
    """All connected loopless multigraphs with at most ``max_edges`` edges, up to
    isomorphism, in a fixed order (by edge count, then vertex count, then edges).

    Every connected graph with m+1 edges arises from one with m edges by adding
    an edge between old vertices or a pendant edge, so levels grow from K1.
    """
    if max_edges > budget:
        raise EnumerationBudgetError(f"max_edges {max_edges} exceeds budget {budget}")
    match = nx.algorithms.isomorphism.numerical_edge_match("m", 0)
    level = [MultiGraph(1, ())]
    result = list(level)
    for _ in range(max_edges):
        buckets: dict[str, list[tuple[nx.Graph, MultiGraph]]] = defaultdict(list)
        nxt = []
        for g in level:
            cands = [(a, b) for a in range(g.vertex_count) for b in range(a + 1, g.vertex_count)]
            cands += [(a, g.vertex_count) for a in range(g.vertex_count)]
            for a, b in cands:
                n = max(g.vertex_count, b + 1)
                cand = MultiGraph(n, g.ends + ((a, b),))
                h = to_networkx(cand)
                key = _iso_key(h)
                if any(nx.is_isomorphic(h, other, edge_match=match) for other, _ in buckets[key]):
                    continue
                buckets[key].append((h, cand))
                nxt.append(cand)
        level = nxt
        result.extend(level)
    result.sort(key=lambda g: (g.edge_count, g.vertex_count, g.ends))
    for g in result:
        if not two_edge_connected_only or not cut_edge_positions(g):
            yield g
