"""Recovering a 2-isomorphism from an isomorphism of d-invariants.

Glue the cut lattice of one graph to the flow lattice of the other, find
the orthonormal basis of the resulting copy of Z^n, and read off each
edge's unit from its membership pattern in the special basis vectors.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import exact
from .graph_core import (EdgeBijection, MultiGraph, contract_cut_edges,
                         verify_two_isomorphism)
from .graph_lattice import special_cut_lattice, special_flow_lattice
from .lattice_core import (IntegralLattice, TorsorIso, d_invariant, find_torsor_iso,
                           glue, orthonormal_basis)


class ReconstructionError(RuntimeError):
    """An internal consistency check failed (never expected for valid input)."""


@dataclass(frozen=True)
class Comparison:
    equivalent: bool
    stage: str                      # "disc groups", "d-multisets", "torsor search" or "ok"
    iso: TorsorIso | None = None
    mapping: EdgeBijection | None = None
    glued: IntegralLattice | None = None


def d_equivalence(g: MultiGraph, h: MultiGraph) -> Comparison:
    """Compare d(C(g)) with -d(F(h)) after contracting cut-edges."""
    g, h = contract_cut_edges(g), contract_cut_edges(h)
    dc = d_invariant(special_cut_lattice(g))
    df = d_invariant(special_flow_lattice(h))
    if dc.factors != df.factors:
        return Comparison(False, "disc groups")
    if sorted(-v for v in dc.values.values()) != df.multiset():
        return Comparison(False, "d-multisets")
    iso = find_torsor_iso(dc, df, -1)
    if iso is None:
        return Comparison(False, "torsor search")
    return Comparison(True, "ok", iso)


def d_equivalent(g: MultiGraph, h: MultiGraph) -> TorsorIso | None:
    return d_equivalence(g, h).iso


def sign_normalize(units: Sequence[Sequence[Fraction]],
                   vectors: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Flip units so every pairing with every vector is 0 or 1."""
    out = []
    for f in units:
        pairings = {exact.dot(f, x) for x in vectors} - {0}
        if pairings <= {1}:
            out.append(tuple(f))
        elif pairings <= {-1}:
            out.append(tuple(-a for a in f))
        else:
            raise ReconstructionError(f"unit pairs with values {sorted(pairings)}; cannot make them 0/1")
    return out


def atom_match(left: Sequence[tuple[int, ...]], right: Sequence[tuple[int, ...]]) -> list[int]:
    """Match positions of ``left`` to positions of ``right`` with equal patterns.

    Within each pattern class positions are paired in increasing order.
    """
    groups_l: dict[tuple, list[int]] = defaultdict(list)
    groups_r: dict[tuple, list[int]] = defaultdict(list)
    for i, pat in enumerate(left):
        groups_l[tuple(pat)].append(i)
    for j, pat in enumerate(right):
        groups_r[tuple(pat)].append(j)
    if {p: len(v) for p, v in groups_l.items()} != {p: len(v) for p, v in groups_r.items()}:
        raise ReconstructionError("support atoms have different sizes")
    out = [0] * len(left)
    for pat, idx in groups_l.items():
        for i, j in zip(idx, groups_r[pat]):
            out[i] = j
    return out


def _embed_and_match(lat: IntegralLattice, offset: int, ambient: int,
                     units: list[tuple[Fraction, ...]]) -> list[int]:
    """Map each edge coordinate of ``lat`` (ambient block at ``offset``) to a unit index."""
    n = lat.ambient_dim
    pad_l = (Fraction(0),) * offset
    pad_r = (Fraction(0),) * (ambient - offset - n)
    images = [pad_l + b + pad_r for b in lat.basis]
    for b in lat.basis:
        if any(x not in (0, 1) for x in b):
            raise ReconstructionError("basis is not a 0/1 basis")
    coords = [[exact.dot(x, f) for f in units] for x in images]
    for b, c in zip(lat.basis, coords):
        if any(abs(v) > 1 for v in c) or sum(v != 0 for v in c) != sum(b):
            raise ReconstructionError("embedded basis vector is not a signed 0/1 sum of units")
    normal = sign_normalize(units, images)
    coords = [[int(exact.dot(x, f)) for f in normal] for x in images]
    for i, x in enumerate(lat.basis):
        for j, y in enumerate(lat.basis):
            overlap = sum(a * b for a, b in zip(coords[i], coords[j]))
            if overlap != lat.gram[i][j]:
                raise ReconstructionError("pairing differs from support overlap")
    edge_patterns = [tuple(int(b[e]) for b in lat.basis) for e in range(n)]
    unit_patterns = [tuple(c[u] for c in coords) for u in range(len(units))]
    return atom_match(edge_patterns, unit_patterns)


def reconstruct_two_isomorphism(g: MultiGraph, h: MultiGraph) -> EdgeBijection | None:
    """A verified 2-isomorphism g -> h (on edges not cut-edges), or None."""
    return compare_graphs(g, h).mapping


def compare_graphs(g: MultiGraph, h: MultiGraph) -> Comparison:
    g, h = contract_cut_edges(g), contract_cut_edges(h)
    verdict = d_equivalence(g, h)
    if not verdict.equivalent:
        return verdict
    cut = special_cut_lattice(g)
    flow = special_flow_lattice(h)
    z2 = glue(cut, flow, verdict.iso)
    if not (g.edge_count == h.edge_count == z2.rank):
        raise ReconstructionError(f"rank mismatch: {g.edge_count}, {h.edge_count}, {z2.rank}")
    units = orthonormal_basis(z2)
    if units is None:
        raise ReconstructionError("glued lattice has no orthonormal basis")
    ambient = z2.ambient_dim
    iota_g = _embed_and_match(cut, 0, ambient, units)
    iota_h = _embed_and_match(flow, g.edge_count, ambient, units)
    back = {u: p for p, u in enumerate(iota_h)}
    mapping = {g.ids[p]: h.ids[back[iota_g[p]]] for p in range(g.edge_count)}
    if not verify_two_isomorphism(g, h, mapping):
        raise ReconstructionError("reconstructed bijection does not preserve cycles")
    return Comparison(True, "ok", verdict.iso, mapping, z2)
