"""Cut and flow lattices of a graph and their d-invariants.

Both lattices sit in C_1(G; Z) with the edges as orthonormal basis.  The
``orientation`` argument of the builders fixes which direction of each edge
counts as the positive coordinate (default: the reference orientation).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from . import exact
from .exact import BudgetExceeded
from .graph_core import (GraphError, MultiGraph, Orientation, _require_connected,
                         fundamental_cut, fundamental_cycle, layered_forest,
                         reference_orientation)
from .lattice_core import (Covector, DInvariant, IntegralLattice, Label, TorsorIso,
                           check_torsor_iso, class_of, d_invariant, discriminant_group,
                           lattice_from_basis, restrict_covector)


def _edge_vector(g: MultiGraph, signed: Mapping[int, int]) -> list[int]:
    return [signed.get(e, 0) for e in g.ids]


def cut_lattice(g: MultiGraph, orientation: Sequence[int] | None = None) -> IntegralLattice:
    """Span of the fundamental cuts of the layered forest, in edge-id order."""
    _require_connected(g)
    forest, _, _ = layered_forest(g)
    o = reference_orientation(g) if orientation is None else orientation
    basis = [_edge_vector(g, fundamental_cut(forest, e, o))
             for e in sorted(forest.forest_edges)]
    return lattice_from_basis(g.edge_count, basis)


def flow_lattice(g: MultiGraph, orientation: Sequence[int] | None = None) -> IntegralLattice:
    """Span of the fundamental cycles of the layered forest, in edge-id order."""
    _require_connected(g)
    forest, _, _ = layered_forest(g)
    o = reference_orientation(g) if orientation is None else orientation
    basis = [_edge_vector(g, fundamental_cycle(forest, e, o))
             for e in sorted(set(g.ids) - forest.forest_edges)]
    return lattice_from_basis(g.edge_count, basis)


def special_cut_lattice(g: MultiGraph) -> IntegralLattice:
    """Cut lattice in the coordinates of O1, where every basis entry is 0 or 1."""
    _, o1, _ = layered_forest(g)
    return cut_lattice(g, o1)


def special_flow_lattice(g: MultiGraph) -> IntegralLattice:
    """Flow lattice in the coordinates of O2, where every basis entry is 0 or 1."""
    _, _, o2 = layered_forest(g)
    return flow_lattice(g, o2)


def coboundary(g: MultiGraph, v: int) -> list[int]:
    """The cut vector of a single vertex in reference coordinates (+1 where v is the head)."""
    out = [0] * g.edge_count
    for p in g.incidence[v]:
        out[p] += 1 if g.ends[p][1] == v else -1
    return out


def goeritz_gram(g: MultiGraph, root: int = 0) -> list[list[int]]:
    _require_connected(g)
    if not 0 <= root < g.vertex_count:
        raise GraphError(f"root {root} out of range")
    verts = [v for v in range(g.vertex_count) if v != root]
    mult = {}
    for u, v in g.ends:
        mult[u, v] = mult.get((u, v), 0) + 1
        mult[v, u] = mult.get((v, u), 0) + 1
    return [[g.degree(u) if u == v else -mult.get((u, v), 0) for v in verts] for u in verts]


def spanning_tree_count(g: MultiGraph) -> int:
    return exact.det(goeritz_gram(g, 0))


def orientation_covector(g: MultiGraph, o: Sequence[int],
                         coords: Sequence[int] | None = None) -> tuple[int, ...]:
    """chi_O as a +-1 vector; ``coords`` is the orientation of the coordinate system."""
    if len(o) != g.edge_count:
        raise GraphError("orientation length differs from edge count")
    c = reference_orientation(g) if coords is None else coords
    return tuple(a * b for a, b in zip(o, c))


def all_orientations(g: MultiGraph):
    """Binary counter over edge ids: bit i set means edge id-rank i is reversed."""
    order = sorted(range(g.edge_count), key=lambda p: g.ids[p])
    for mask in range(1 << g.edge_count):
        o = [1] * g.edge_count
        for i, p in enumerate(order):
            if mask >> i & 1:
                o[p] = -1
        yield tuple(o)


def orientation_short_restrictions(g: MultiGraph, lat: IntegralLattice | None = None,
                                   max_edges: int = 24) -> dict[Label, tuple[Fraction, set[Covector]]]:
    """Per class of C(g): the least norm of a restricted orientation covector,
    and every restriction attaining it."""
    if g.edge_count > max_edges:
        raise BudgetExceeded(f"{g.edge_count} edges exceeds orientation budget {max_edges}")
    lat = cut_lattice(g) if lat is None else lat
    seen: dict[Covector, None] = {}
    for o in all_orientations(g):
        seen.setdefault(restrict_covector(lat, o))
    best: dict[Label, tuple[Fraction, set[Covector]]] = {}
    for c in seen:
        label = class_of(lat, c)
        n = lat.norm_of_covector(c)
        cur = best.get(label)
        if cur is None or n < cur[0]:
            best[label] = (n, {c})
        elif n == cur[0]:
            cur[1].add(c)
    if len(best) != discriminant_group(lat).order:
        raise AssertionError("orientation covectors miss a characteristic class")
    return best


def cut_d_invariant_via_orientations(g: MultiGraph, max_edges: int = 24) -> DInvariant:
    lat = cut_lattice(g)
    best = orientation_short_restrictions(g, lat, max_edges)
    values = {label: (m - lat.rank) / 4 for label, (m, _) in best.items()}
    return DInvariant(discriminant_group(lat).invariant_factors, values, lat.rank)


def _natural_class_pairs(g: MultiGraph, cut: IntegralLattice, flow: IntegralLattice,
                         max_edges: int) -> dict[Label, Label]:
    if g.edge_count > max_edges:
        raise BudgetExceeded(f"{g.edge_count} edges exceeds orientation budget {max_edges}")
    pairs: dict[Label, Label] = {}
    for o in all_orientations(g):
        a = class_of(cut, restrict_covector(cut, o))
        b = class_of(flow, restrict_covector(flow, o))
        if pairs.setdefault(a, b) != b:
            raise AssertionError("restriction classes are not in natural bijection")
    return pairs


def flow_d_invariant(g: MultiGraph, method: str = "cvp", max_edges: int = 24) -> DInvariant:
    if method == "cvp":
        return d_invariant(flow_lattice(g))
    if method != "orientations":
        raise ValueError(f"unknown method {method!r}")
    cut, flow = cut_lattice(g), flow_lattice(g)
    dcut = cut_d_invariant_via_orientations(g, max_edges)
    pairs = _natural_class_pairs(g, cut, flow, max_edges)
    values = {pairs[s]: -v for s, v in dcut.values.items()}
    return DInvariant(discriminant_group(flow).invariant_factors, values, flow.rank)


def natural_cut_flow_iso(g: MultiGraph, max_edges: int = 24) -> TorsorIso:
    """The sign -1 torsor map [chi|C] -> [chi|F] for ambient characteristic chi."""
    cut, flow = cut_lattice(g), flow_lattice(g)
    pairs = _natural_class_pairs(g, cut, flow, max_edges)
    factors = discriminant_group(cut).invariant_factors
    if factors != discriminant_group(flow).invariant_factors:
        raise AssertionError("cut and flow discriminant groups differ")
    k = len(factors)
    base = (0,) * k
    offset = pairs[base]
    gens = []
    for i in range(k):
        e = tuple(int(i == j) for j in range(k))
        gens.append(tuple((a - b) % d for a, b, d in zip(pairs[e], offset, factors)))
    iso = TorsorIso(factors, offset, tuple(gens), -1)
    dcut = cut_d_invariant_via_orientations(g, max_edges)
    dflow = d_invariant(flow)
    if iso.class_map() != pairs or not check_torsor_iso(iso, dcut, dflow):
        raise AssertionError("natural map fails to negate the d-invariant")
    return iso


def orientation_with_indegrees(g: MultiGraph, indeg: Sequence[int] | Mapping[int, int]) -> Orientation | None:
    """An orientation with the prescribed in-degree at each vertex, or None.

    Matches each edge to an in-degree slot at one of its endpoints
    (augmenting paths); a perfect matching is exactly such an orientation.
    """
    want = [indeg[v] for v in range(g.vertex_count)]
    if sum(want) != g.edge_count or any(x < 0 or x > g.degree(v) for v, x in enumerate(want)):
        return None
    slots = [(v, j) for v in range(g.vertex_count) for j in range(want[v])]
    slot_index = {s: i for i, s in enumerate(slots)}
    adj = [[slot_index[v, j] for v in dict.fromkeys(g.ends[p]) for j in range(want[v])]
           for p in range(g.edge_count)]
    owner = [-1] * len(slots)

    def augment(p, seen):
        for s in adj[p]:
            if s in seen:
                continue
            seen.add(s)
            if owner[s] < 0 or augment(owner[s], seen):
                owner[s] = p
                return True
        return False

    for p in range(g.edge_count):
        if not augment(p, set()):
            return None
    o = [0] * g.edge_count
    for s, p in enumerate(owner):
        head = slots[s][0]
        o[p] = 1 if g.ends[p][1] == head else -1
    return tuple(o)


def indegrees(g: MultiGraph, o: Sequence[int]) -> list[int]:
    out = [0] * g.vertex_count
    for p, (u, v) in enumerate(g.ends):
        out[v if o[p] > 0 else u] += 1
    return out
