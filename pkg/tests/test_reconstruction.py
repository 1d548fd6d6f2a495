import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from dlattice.graph_core import (MultiGraph, brute_force_two_isomorphism, contract_cut_edges,
                                 enumerate_multigraphs, random_switch, verify_two_isomorphism,
                                 whitney_switch)
from dlattice.lattice_core import check_torsor_iso, d_invariant
from dlattice.graph_lattice import special_cut_lattice, special_flow_lattice
from dlattice.reconstruction import (ReconstructionError, atom_match, compare_graphs, d_equivalence,
                                     d_equivalent, reconstruct_two_isomorphism, sign_normalize)

from strategies import connected_graphs

TRIANGLE = MultiGraph(3, ((0, 1), (1, 2), (0, 2)))
THETA = MultiGraph(2, ((0, 1), (0, 1), (0, 1)))
# two triangles sharing the vertex pair {0, 1} through paths: a 6-cycle with a chord
HEX_CHORD = MultiGraph(5, ((0, 2), (2, 1), (0, 3), (3, 4), (4, 1), (0, 1)))


def test_d_equivalent_examples():
    iso = d_equivalent(TRIANGLE, TRIANGLE)
    assert iso is not None and iso.sign == -1
    dc = d_invariant(special_cut_lattice(TRIANGLE))
    df = d_invariant(special_flow_lattice(TRIANGLE))
    assert check_torsor_iso(iso, dc, df)
    assert d_equivalent(TRIANGLE, THETA) is None
    # both have discriminant group Z/3; the d-values tell them apart
    assert d_equivalence(TRIANGLE, THETA).stage == "d-multisets"
    assert d_equivalence(TRIANGLE, MultiGraph(2, ((0, 1), (0, 1)))).stage == "disc groups"
    switched = whitney_switch(HEX_CHORD, [2, 3, 4], 0, 1)
    assert d_equivalent(HEX_CHORD, switched) is not None


def test_d_equivalence_stages():
    # same discriminant group Z/4 but different d-values: 4-cycle versus 4 parallel edges
    c4 = MultiGraph(4, ((0, 1), (1, 2), (2, 3), (3, 0)))
    four = MultiGraph(2, ((0, 1),) * 4)
    verdict = d_equivalence(c4, four)
    assert not verdict.equivalent and verdict.stage == "d-multisets"
    assert d_equivalence(c4, c4).stage == "ok"


def test_sign_normalize_examples():
    units = [(F(1), F(0)), (F(0), F(1))]
    assert sign_normalize(units, [(1, 1), (0, 1)]) == units
    assert sign_normalize(units, [(-1, 1)]) == [(F(-1), F(0)), (F(0), F(1))]
    # a unit pairing 0 with everything keeps its sign
    assert sign_normalize([(F(0), F(-1))], [(1, 0)]) == [(F(0), F(-1))]
    with pytest.raises(ReconstructionError):
        sign_normalize(units, [(1, 0), (-1, 0)])


def test_atom_match_examples():
    assert atom_match([(1, 0), (0, 1), (1, 1)], [(1, 1), (1, 0), (0, 1)]) == [1, 2, 0]
    assert atom_match([(1,), (1,), (0,)], [(0,), (1,), (1,)]) == [1, 2, 0]
    with pytest.raises(ReconstructionError):
        atom_match([(1,), (1,)], [(1,), (0,)])


def test_triangle_pipeline():
    result = compare_graphs(TRIANGLE, TRIANGLE)
    assert result.equivalent and result.stage == "ok"
    assert verify_two_isomorphism(TRIANGLE, TRIANGLE, result.mapping)
    assert sorted(result.mapping.values()) == [0, 1, 2]
    assert result.glued.determinant == 1 and result.glued.rank == 3
    assert reconstruct_two_isomorphism(TRIANGLE, THETA) is None


def test_switched_six_edge_pair():
    h = whitney_switch(HEX_CHORD, [2, 3, 4], 0, 1)
    assert brute_force_two_isomorphism(HEX_CHORD, h) is not None
    mapping = reconstruct_two_isomorphism(HEX_CHORD, h)
    assert mapping is not None and verify_two_isomorphism(HEX_CHORD, h, mapping)


def test_cut_edges_are_ignored():
    pendant = MultiGraph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4)))
    mapping = reconstruct_two_isomorphism(pendant, TRIANGLE)
    assert mapping is not None and set(mapping) == {0, 1, 2}
    tree = MultiGraph(3, ((0, 1), (1, 2)))
    assert reconstruct_two_isomorphism(tree, MultiGraph(1, ())) == {}


CORPUS = [contract_cut_edges(g) for g in enumerate_multigraphs(6, two_edge_connected_only=True)]


@pytest.mark.parametrize("i", range(len(CORPUS)))
def test_complete_and_sound_against_brute_force(i):
    g = CORPUS[i]
    for h in CORPUS:
        if h.edge_count != g.edge_count:
            continue
        brute = brute_force_two_isomorphism(g, h)
        mapping = reconstruct_two_isomorphism(g, h)
        assert (brute is None) == (mapping is None)
        if mapping is not None:
            assert verify_two_isomorphism(g, h, mapping)


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_vertices=6, max_edges=8), st.integers(0, 10**6))
def test_round_trip_after_random_switch(g, seed):
    g = contract_cut_edges(g)
    h = random_switch(g, random.Random(seed))
    mapping = reconstruct_two_isomorphism(g, h)
    assert mapping is not None and verify_two_isomorphism(g, h, mapping)
