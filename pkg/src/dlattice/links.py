"""Alternating link diagrams, Tait graphs and the mutation decision.

PD convention: each crossing ``X(a, b, c, d)`` lists its four arc labels
counterclockwise starting with the incoming under-strand, so ``a -> c`` is
the under-strand and ``{b, d}`` the over-strand.

Checkerboard convention: the regions at corners 0 (between ``a`` and ``b``)
and 2 (between ``c`` and ``d``) are black.  Black regions are the Tait
vertices, numbered by their least corner ``(crossing, position)``, and
crossing ``i`` becomes edge ``i`` from the corner-0 region to the corner-2
region.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import networkx as nx

from .graph_core import (EdgeBijection, GraphError, MultiGraph, contract_cut_edges,
                         is_connected, is_two_edge_connected, whitney_switch)
from .graph_lattice import flow_d_invariant
from .lattice_core import DInvariant, find_torsor_iso
from .reconstruction import compare_graphs


class LinkError(ValueError):
    pass


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        crossings = tuple(tuple(int(x) for x in c) for c in self.crossings)
        object.__setattr__(self, "crossings", crossings)
        for c in crossings:
            if len(c) != 4:
                raise LinkError(f"crossing {c} does not have four arcs")
        counts = Counter(x for c in crossings for x in c)
        n = len(crossings)
        if set(counts) != set(range(1, 2 * n + 1)):
            raise LinkError(f"arc labels must be exactly 1..{2 * n}")
        bad = sorted(x for x, k in counts.items() if k != 2)
        if bad:
            raise LinkError(f"arc label {bad[0]} appears {counts[bad[0]]} times")

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    def occurrences(self) -> dict[int, list[tuple[int, int]]]:
        occ: dict[int, list[tuple[int, int]]] = {}
        for i, c in enumerate(self.crossings):
            for p, a in enumerate(c):
                occ.setdefault(a, []).append((i, p))
        return occ

    def text(self) -> str:
        return " ".join("X(" + ",".join(map(str, c)) + ")" for c in self.crossings) + "\n"


_TOKEN = re.compile(r"X\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")


def parse_pd(text: str) -> PDCode:
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    crossings = []
    pos = 0
    for m in _TOKEN.finditer(body):
        junk = body[pos:m.start()].strip(" \t\n,;[]")
        if junk:
            raise LinkError(f"unexpected text {junk!r}")
        crossings.append(tuple(int(x) for x in m.groups()))
        pos = m.end()
    junk = body[pos:].strip(" \t\n,;[]")
    if junk:
        raise LinkError(f"unexpected text {junk!r}")
    if not crossings:
        raise LinkError("empty PD code")
    return PDCode(tuple(crossings))


def is_alternating(pd: PDCode) -> bool:
    """Each arc runs from an under-position (0 or 2) to an over-position (1 or 3)."""
    for (i, p), (j, q) in pd.occurrences().values():
        if p % 2 == q % 2:
            return False
    return True


def is_split(pd: PDCode) -> bool:
    if pd.crossing_count == 0:
        return False
    parent = list(range(pd.crossing_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (i, _), (j, _) in pd.occurrences().values():
        parent[find(i)] = find(j)
    return len({find(i) for i in range(pd.crossing_count)}) > 1


def faces(pd: PDCode) -> list[list[tuple[int, int]]]:
    """Regions as cycles of corners; corner (x, p) sits between positions p and p+1."""
    occ = pd.occurrences()
    seen = set()
    out = []
    for start in product(range(pd.crossing_count), range(4)):
        if start in seen:
            continue
        face = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            face.append(cur)
            x, p = cur
            a = pd.crossings[x][(p + 1) % 4]
            here = (x, (p + 1) % 4)
            first, second = occ[a]
            cur = second if first == here else first
        if cur != start:
            raise LinkError("corner tracing did not close up")
        out.append(face)
    return out


def _tait_ends(pd: PDCode) -> tuple[int, list[tuple[int, int]]]:
    """Black-region count and the (possibly looped) Tait edge of each crossing."""
    if pd.crossing_count == 0:
        return 1, []
    if not is_alternating(pd):
        raise LinkError("diagram is not alternating")
    if is_split(pd):
        raise LinkError("diagram is split")
    regions = faces(pd)
    if len(regions) != pd.crossing_count + 2:
        raise LinkError(f"{len(regions)} regions for {pd.crossing_count} crossings; expected n + 2")
    face_of = {}
    black = []
    for face in regions:
        parities = {p % 2 for _, p in face}
        if len(parities) != 1:
            raise LinkError("checkerboard coloring is inconsistent")
        if parities == {0}:
            black.append(min(face))
        for corner in face:
            face_of[corner] = min(face)
    index = {f: i for i, f in enumerate(sorted(black))}
    ends = [(index[face_of[x, 0]], index[face_of[x, 2]]) for x in range(pd.crossing_count)]
    return len(black), ends


def tait_graph(pd: PDCode) -> MultiGraph:
    count, ends = _tait_ends(pd)
    for x, (u, v) in enumerate(ends):
        if u == v:
            raise LinkError(f"crossing {x} is nugatory (its Tait edge is a loop)")
    return MultiGraph(count, tuple(ends))


def is_reduced(pd: PDCode) -> bool:
    _, ends = _tait_ends(pd)
    if any(u == v for u, v in ends):
        return False
    return is_two_edge_connected(tait_graph(pd))


def reduce(pd: PDCode) -> MultiGraph:
    """Tait graph with nugatory crossings removed: loops deleted, cut-edges contracted.

    Edge ids remain crossing indices.
    """
    count, ends = _tait_ends(pd)
    keep = [x for x, (u, v) in enumerate(ends) if u != v]
    g = MultiGraph(count, tuple(ends[x] for x in keep), tuple(keep))
    return contract_cut_edges(g)


def mirror_pd(pd: PDCode) -> PDCode:
    """Switch every crossing (the planar projection is kept)."""
    occ = pd.occurrences()
    head: dict[int, tuple[int, int]] = {}
    pending = [(x, 0) for x in range(pd.crossing_count)]
    while pending:
        x, p = pending.pop()
        a = pd.crossings[x][p]
        if a in head:
            continue
        head[a] = (x, p)
        out = pd.crossings[x][(p + 2) % 4]
        first, second = occ[out]
        tail = (x, (p + 2) % 4)
        pending.append(second if first == tail else first)
    if len(head) != 2 * pd.crossing_count:
        raise LinkError("could not orient every arc")
    new = []
    for x, c in enumerate(pd.crossings):
        start = 1 if head[c[1]] == (x, 1) else 3
        new.append(tuple(c[(start + i) % 4] for i in range(4)))
    return PDCode(tuple(new))


# --- mutation ----------------------------------------------------------------

@dataclass(frozen=True)
class MutationVerdict:
    mutants: bool
    stage: str
    correspondence: EdgeBijection | None = None


def _checked_graph(pd: PDCode, reduce_first: bool, label: str) -> MultiGraph:
    if reduce_first:
        return reduce(pd)
    if not is_reduced(pd):
        raise LinkError(f"{label} diagram is not reduced")
    return tait_graph(pd)


def mutation_verdict(pd1: PDCode, pd2: PDCode, reduce_first: bool = False) -> MutationVerdict:
    g1 = _checked_graph(pd1, reduce_first, "first")
    g2 = _checked_graph(pd2, reduce_first, "second")
    result = compare_graphs(g1, g2)
    if not result.equivalent:
        return MutationVerdict(False, result.stage)
    if g1.edge_count != g2.edge_count:
        raise AssertionError("mutant diagrams with different crossing numbers")
    return MutationVerdict(True, "ok", result.mapping)


def mutation_equivalent(pd1: PDCode, pd2: PDCode,
                        reduce_first: bool = False) -> tuple[bool, EdgeBijection | None]:
    v = mutation_verdict(pd1, pd2, reduce_first)
    return v.mutants, v.correspondence


def branched_cover_d_invariants(pd: PDCode) -> DInvariant:
    if not is_reduced(pd):
        raise LinkError("diagram is not reduced")
    return flow_d_invariant(tait_graph(pd)).negated()


# --- plane graphs and their medial diagrams ----------------------------------------

Dart = tuple[int, int]          # (edge position, endpoint index 0/1)
Rotation = dict[int, list[Dart]]  # counterclockwise darts around each vertex


def _dart_vertex(g: MultiGraph, d: Dart) -> int:
    return g.ends[d[0]][d[1]]


def rotation_faces(g: MultiGraph, rot: Rotation) -> int:
    nxt = {}
    for v, darts in rot.items():
        for i, d in enumerate(darts):
            nxt[d] = darts[(i + 1) % len(darts)]
    seen = set()
    count = 0
    for d in nxt:
        if d in seen:
            continue
        count += 1
        cur = d
        while cur not in seen:
            seen.add(cur)
            cur = nxt[(cur[0], 1 - cur[1])]
    return count


def check_rotation(g: MultiGraph, rot: Rotation):
    darts = sorted(d for ds in rot.values() for d in ds)
    if darts != sorted((p, s) for p in range(g.edge_count) for s in (0, 1)):
        raise GraphError("rotation does not list every dart once")
    for v, ds in rot.items():
        if any(_dart_vertex(g, d) != v for d in ds):
            raise GraphError(f"rotation at {v} lists a foreign dart")
    if g.edge_count and g.vertex_count - g.edge_count + rotation_faces(g, rot) != 2:
        raise GraphError("rotation system is not planar")


def planar_rotation(g: MultiGraph) -> Rotation:
    """A planar rotation system (via networkx on the edge subdivision)."""
    h = nx.Graph()
    h.add_nodes_from(range(g.vertex_count))
    for p, (u, v) in enumerate(g.ends):
        h.add_edge(u, ("e", p))
        h.add_edge(("e", p), v)
    planar, emb = nx.check_planarity(h)
    if not planar:
        raise GraphError("graph is not planar")
    rot: Rotation = {}
    for v in range(g.vertex_count):
        if g.degree(v) == 0:
            continue
        order = list(emb.neighbors_cw_order(v))[::-1]
        rot[v] = [(p, 0 if g.ends[p][0] == v else 1) for _, p in order]
    check_rotation(g, rot)
    return rot


def pd_from_plane_graph(g: MultiGraph, rot: Rotation) -> PDCode:
    """The alternating diagram whose Tait graph is the plane graph (g, rot).

    Each edge becomes a crossing; the arcs are the corners of the embedding.
    """
    check_rotation(g, rot)
    if g.edge_count == 0:
        return PDCode(())
    # corner (v, i): between rot[v][i] and rot[v][i+1]
    slot = {}      # (crossing, slot) -> corner ; slots: NE, NW, SW, SE
    ends_of = {}   # corner -> [(crossing, slot), (crossing, slot)]
    for v, darts in rot.items():
        k = len(darts)
        for i, d in enumerate(darts):
            corner = (v, i)
            e = darts[(i + 1) % k]
            s1 = "NW" if d[1] == 0 else "SE"
            s2 = "SW" if e[1] == 0 else "NE"
            slot[d[0], s1] = corner
            slot[e[0], s2] = corner
            ends_of.setdefault(corner, []).extend([(d[0], s1), (e[0], s2)])
    opposite = {"NW": "SE", "SE": "NW", "NE": "SW", "SW": "NE"}
    labels: dict = {}
    entry: dict[int, str] = {}
    next_label = 1
    for corner in sorted(ends_of):
        if corner in labels:
            continue
        # walk the strand through this corner, leaving it via its first end
        cur = corner
        x, s = ends_of[corner][0]
        while cur not in labels:
            labels[cur] = next_label
            next_label += 1
            if s in ("NW", "SE") and x not in entry:
                entry[x] = s
            out = opposite[s]
            cur = slot[x, out]
            a, b = ends_of[cur]
            x, s = b if a == (x, out) else a
    crossings = []
    for p in range(g.edge_count):
        order = ("NW", "SW", "SE", "NE") if entry[p] == "NW" else ("SE", "NE", "NW", "SW")
        crossings.append(tuple(labels[slot[p, o]] for o in order))
    return PDCode(tuple(crossings))


def planar_switch(g: MultiGraph, rot: Rotation, side_edges, v: int, w: int) -> tuple[MultiGraph, Rotation]:
    """Whitney switch of a plane graph, turning the side over in the plane.

    The side's darts must form one contiguous block at v and one at w.
    """
    side = {g.position(e) for e in side_edges}
    h = whitney_switch(g, side_edges, v, w)

    def split(x):
        ds = rot[x]
        inside = [d[0] in side for d in ds]
        if all(inside) or not any(inside):
            raise GraphError("side must meet both switch vertices without covering them")
        start = next(i for i in range(len(ds)) if inside[i] and not inside[i - 1])
        ds = ds[start:] + ds[:start]
        inside = inside[start:] + inside[:start]
        block = [d for d, f in zip(ds, inside) if f]
        if inside != [True] * len(block) + [False] * (len(ds) - len(block)):
            raise GraphError(f"side darts are not contiguous at vertex {x}")
        return block, ds[len(block):]

    bv, rv = split(v)
    bw, rw = split(w)
    new = {x: list(ds) for x, ds in rot.items()}
    new[v] = bw + rv
    new[w] = bv + rw
    check_rotation(h, new)
    return h, new


# --- two-bridge diagrams -------------------------------------------------------------

@dataclass(frozen=True)
class TwoBridgeSpec:
    bundles: tuple[int, ...]   # |E_1| .. |E_k|
    paths: tuple[int, ...]     # |F_0| .. |F_k|

    def __post_init__(self):
        object.__setattr__(self, "bundles", tuple(int(x) for x in self.bundles))
        object.__setattr__(self, "paths", tuple(int(x) for x in self.paths))
        if len(self.paths) != len(self.bundles) + 1:
            raise LinkError("need exactly k + 1 path lengths for k bundles")
        if any(x < 1 for x in self.bundles + self.paths):
            raise LinkError("bundle sizes and path lengths must be positive")
        if sum(self.paths) < 2:
            raise LinkError("the Hamiltonian cycle needs at least two edges")

    @property
    def k(self) -> int:
        return len(self.bundles)

    @property
    def crossing_number(self) -> int:
        return sum(self.bundles) + sum(self.paths)

    def reversed(self) -> "TwoBridgeSpec":
        return TwoBridgeSpec(self.bundles[::-1], self.paths[::-1])

    def text(self) -> str:
        return (f"tb k={self.k} E={','.join(map(str, self.bundles))} "
                f"F={','.join(map(str, self.paths))}")


def parse_two_bridge(text: str) -> TwoBridgeSpec:
    line = text.split("#", 1)[0].strip()
    m = re.fullmatch(r"tb\s+k=(\d+)\s+E=([\d,]*)\s+F=([\d,]+)", line)
    if not m:
        raise LinkError(f"malformed two-bridge spec {line!r}")
    k = int(m.group(1))
    bundles = tuple(int(x) for x in m.group(2).split(",") if x)
    paths = tuple(int(x) for x in m.group(3).split(",") if x)
    if len(bundles) != k:
        raise LinkError(f"k={k} but {len(bundles)} bundle sizes given")
    return TwoBridgeSpec(bundles, paths)


def _two_bridge_layout(spec: TwoBridgeSpec):
    length = sum(spec.paths)
    marks = []
    pos = 0
    for f in spec.paths[:-1]:
        pos += f
        marks.append(pos)
    ends = [(j, (j + 1) % length) for j in range(length)]
    bundle_edges = []
    for i, m in enumerate(marks):
        bundle_edges.append(list(range(len(ends), len(ends) + spec.bundles[i])))
        ends.extend([(0, m)] * spec.bundles[i])
    return length, marks, ends, bundle_edges


def two_bridge_graph(spec: TwoBridgeSpec) -> MultiGraph:
    length, _, ends, _ = _two_bridge_layout(spec)
    return MultiGraph(length, tuple(ends))


def two_bridge_rotation(spec: TwoBridgeSpec) -> Rotation:
    """Standard drawing: H as a counterclockwise circle, all chords inside."""
    length, marks, ends, bundle_edges = _two_bridge_layout(spec)
    rot: Rotation = {}
    for j in range(length):
        fwd = (j, 0)
        back = ((j - 1) % length, 1)
        rot[j] = [fwd, back]
    rot[0] = [(0, 0)] + [(p, 0) for b in bundle_edges for p in b] + [(length - 1, 1)]
    for m, b in zip(marks, bundle_edges):
        rot[m] = [(m, 0)] + [(p, 1) for p in reversed(b)] + [(m - 1, 1)]
    return rot


def two_bridge_pd(spec: TwoBridgeSpec) -> PDCode:
    g = two_bridge_graph(spec)
    return pd_from_plane_graph(g, two_bridge_rotation(spec))


def two_bridge_specs(max_crossings: int) -> list[TwoBridgeSpec]:
    def compositions(total, parts):
        if parts == 0:
            if total == 0:
                yield ()
            return
        for first in range(1, total - parts + 2):
            for rest in compositions(total - first, parts - 1):
                yield (first,) + rest

    out = []
    for n in range(2, max_crossings + 1):
        for k in range((n - 1) // 2 + 1):
            for split in range(k, n - (k + 1) + 1):
                for bundles in compositions(split, k):
                    for paths in compositions(n - split, k + 1):
                        if sum(paths) >= 2:
                            out.append(TwoBridgeSpec(bundles, paths))
    return out


@dataclass(frozen=True)
class TwoBridgeReport:
    classes: tuple[tuple[TwoBridgeSpec, ...], ...]
    failures: tuple[tuple[TwoBridgeSpec, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def two_bridge_mutation_classes(max_crossings: int, limit: int = 10) -> TwoBridgeReport:
    """Partition all specs up to ``max_crossings`` by flow d-invariant."""
    if max_crossings > limit:
        raise LinkError(f"max_crossings {max_crossings} exceeds {limit}")
    specs = two_bridge_specs(max_crossings)
    dinv = {s: flow_d_invariant(two_bridge_graph(s)) for s in specs}
    classes: list[list[TwoBridgeSpec]] = []
    buckets: dict = {}
    for s in specs:
        d = dinv[s]
        key = (d.factors, d.rank, tuple(d.multiset()))
        for cls in buckets.setdefault(key, []):
            if find_torsor_iso(dinv[cls[0]], d, 1) is not None:
                cls.append(s)
                break
        else:
            cls = [s]
            buckets[key].append(cls)
            classes.append(cls)
    failures = tuple(tuple(c) for c in classes if set(c) != {c[0], c[0].reversed()})
    return TwoBridgeReport(tuple(tuple(c) for c in classes), failures)
