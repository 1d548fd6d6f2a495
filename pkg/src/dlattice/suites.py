"""The acceptance checks, shared by the test-suite and ``dlattice selftest``.

Each check returns a ``SuiteResult``; heavy per-item work can be spread
over worker processes, and results are merged in input order so the
outcome never depends on the worker count.
"""
from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .graph_core import (MultiGraph, to_networkx, brute_force_two_isomorphism, contract_cut_edges,
                         cut_edge_positions, enumerate_multigraphs, is_connected,
                         random_switch, verify_two_isomorphism)
from .graph_lattice import (cut_lattice, flow_d_invariant, flow_lattice,
                            orientation_short_restrictions, spanning_tree_count)
from .lattice_core import (discriminant_group, find_torsor_iso, lattice_from_basis,
                           rho_invariant, short_covectors, short_restriction_surjects,
                           standard_lattice)
from .links import (mutation_verdict, pd_from_plane_graph, planar_rotation,
                    two_bridge_mutation_classes, two_bridge_pd)
from .reconstruction import compare_graphs


EDGE_MATCH = nx.algorithms.isomorphism.numerical_edge_match("m", 0)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: list = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f", {len(self.failures)} failures" if self.failures else ""
        return f"{verdict} {self.name}: {self.checked} checked{extra}"


def fan_out(func, items, jobs: int = 1):
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items, chunksize=max(1, len(items) // (4 * jobs))))


# --- criterion 1, 4 and 9 --------------------------------------------------------

def _contracted_corpus(max_edges: int) -> list[MultiGraph]:
    return [contract_cut_edges(g) for g in enumerate_multigraphs(max_edges)]


def _pair_verdicts(args):
    a, b, da, db = args
    lattice_eq = find_torsor_iso(da, db, 1) is not None
    oracle_eq = brute_force_two_isomorphism(a, b) is not None
    glued_rho = None
    if lattice_eq:
        cmp = compare_graphs(a, b)
        if not cmp.equivalent:
            # flow invariants match but the cut/flow comparison does not: inconsistent
            return lattice_eq, oracle_eq, None, False
        glued_rho = rho_invariant(cmp.glued).values
    return lattice_eq, oracle_eq, glued_rho, True


def theorem_suite(max_edges: int = 6, jobs: int = 1) -> tuple[SuiteResult, SuiteResult]:
    """Partition by d-invariant vs brute force; also rho of every glue lattice."""
    graphs = _contracted_corpus(max_edges)
    dinv = fan_out(flow_d_invariant, graphs, jobs)
    pairs = [(graphs[i], graphs[j], dinv[i], dinv[j])
             for i in range(len(graphs)) for j in range(i, len(graphs))]
    verdicts = fan_out(_pair_verdicts, pairs, jobs)
    partition = SuiteResult("theorem: d-invariant partition equals 2-isomorphism partition", True, len(pairs))
    rho = SuiteResult("van der Blij on glue lattices", True, 0)
    for (a, b, _, _), (lat_eq, bf_eq, glued_rho, consistent) in zip(pairs, verdicts):
        if lat_eq != bf_eq or not consistent:
            partition.failures.append((a, b, lat_eq, bf_eq))
        if glued_rho is not None:
            rho.checked += 1
            if glued_rho != {(): Fraction(0)}:
                rho.failures.append((a, b, glued_rho))
    partition.passed = not partition.failures
    rho.passed = not rho.failures
    return partition, rho


def van_der_blij_standard(max_rank: int = 6) -> SuiteResult:
    res = SuiteResult("van der Blij on Z^n", True, 0)
    for n in range(max_rank + 1):
        res.checked += 1
        if rho_invariant(standard_lattice(n)).values != {(0,) * 0: Fraction(0)}:
            res.failures.append(n)
    res.passed = not res.failures
    return res


def _methods_agree(g):
    return flow_d_invariant(g, "cvp") == flow_d_invariant(g, "orientations")


def method_suite(max_edges: int = 6, jobs: int = 1) -> SuiteResult:
    graphs = _contracted_corpus(max_edges)
    ok = fan_out(_methods_agree, graphs, jobs)
    res = SuiteResult("orientation and CVP d-invariants agree", all(ok), len(graphs))
    res.failures = [g for g, good in zip(graphs, ok) if not good]
    return res


# --- criterion 2, 3 and 5 --------------------------------------------------------

def _short_sets_agree(g):
    lat = cut_lattice(g)
    via_cvp = short_covectors(lat)
    via_orientations = set()
    for _, reps in orientation_short_restrictions(g, lat).values():
        via_orientations |= reps
    return via_cvp == via_orientations


def short_graph_suite(max_edges: int = 5, jobs: int = 1) -> SuiteResult:
    graphs = list(enumerate_multigraphs(max_edges, two_edge_connected_only=True))
    ok = fan_out(_short_sets_agree, graphs, jobs)
    res = SuiteResult("short cut covectors are orientation restrictions", all(ok), len(graphs))
    res.failures = [g for g, good in zip(graphs, ok) if not good]
    return res


def numeric_example_suite() -> SuiteResult:
    sub = lattice_from_basis(2, [[1, 2]])
    amb = standard_lattice(2)
    observed = (discriminant_group(sub).order, len(short_covectors(amb)),
                short_restriction_surjects(amb, sub))
    res = SuiteResult("span(e1+2e2) in Z^2: disc 5, |Short(Z^2)| 4, no surjection",
                      observed == (5, 4, False), 3)
    if not res.passed:
        res.failures.append(observed)
    return res


def _kirchhoff(g):
    t = spanning_tree_count(g)
    return cut_lattice(g).determinant == flow_lattice(g).determinant == t


def kirchhoff_suite(max_edges: int = 7, jobs: int = 1) -> SuiteResult:
    graphs = list(enumerate_multigraphs(max_edges))
    ok = fan_out(_kirchhoff, graphs, jobs)
    res = SuiteResult("disc C = disc F = spanning trees", all(ok), len(graphs))
    res.failures = [g for g, good in zip(graphs, ok) if not good]
    return res


# --- criterion 6, 7 and 8 --------------------------------------------------------

def random_two_edge_connected(rng: random.Random, max_edges: int = 8) -> MultiGraph:
    while True:
        n = rng.randint(3, 7)
        m = rng.randint(n, max_edges)
        ends = []
        for _ in range(m):
            u, v = rng.sample(range(n), 2)
            ends.append((u, v))
        g = MultiGraph(n, tuple(ends))
        if is_connected(g) and not cut_edge_positions(g):
            return g


def shuffled(g: MultiGraph, rng: random.Random) -> MultiGraph:
    """Relabel vertices and reorder edges at random (ids follow the new order)."""
    perm = list(range(g.vertex_count))
    rng.shuffle(perm)
    order = list(range(g.edge_count))
    rng.shuffle(order)
    ends = []
    for p in order:
        u, v = g.ends[p]
        ends.append((perm[v], perm[u]) if rng.random() < 0.5 else (perm[u], perm[v]))
    return MultiGraph(g.vertex_count, tuple(ends))


def _nontrivial_switch(g: MultiGraph, rng: random.Random, tries: int = 8) -> MultiGraph:
    """A random switch, preferring one that changes the isomorphism class."""
    base = to_networkx(g)
    h = g
    for _ in range(tries):
        h = random_switch(g, rng)
        if not nx.is_isomorphic(base, to_networkx(h), edge_match=EDGE_MATCH):
            break
    return h


def switch_pairs(count: int = 200, seed: int = 2024, max_edges: int = 8) -> list[tuple[MultiGraph, MultiGraph]]:
    rng = random.Random(seed)
    pairs = []
    for _ in range(count):
        g = random_two_edge_connected(rng, max_edges)
        h = g
        for _ in range(rng.randint(1, 3)):
            h = _nontrivial_switch(h, rng)
        pairs.append((g, shuffled(h, rng)))
    return pairs


def _roundtrip(pair):
    g, h = pair
    f = compare_graphs(g, h).mapping
    return f is not None and verify_two_isomorphism(g, h, f)


def roundtrip_suite(count: int = 200, seed: int = 2024, jobs: int = 1) -> SuiteResult:
    pairs = switch_pairs(count, seed)
    ok = fan_out(_roundtrip, pairs, jobs)
    res = SuiteResult("switch pairs reconstruct to verified 2-isomorphisms", all(ok), len(pairs))
    res.failures = [p for p, good in zip(pairs, ok) if not good]
    return res


def two_bridge_suite(max_crossings: int = 8):
    report = two_bridge_mutation_classes(max_crossings)
    checked = sum(len(c) for c in report.classes)
    res = SuiteResult("two-bridge classes are {spec, reversed spec}", report.ok, checked)
    res.failures = list(report.failures)
    return res, report


def _lifted_switch_pair(pair):
    g, h = pair
    pd_g = pd_from_plane_graph(g, planar_rotation(g))
    pd_h = pd_from_plane_graph(h, planar_rotation(h))
    v = mutation_verdict(pd_g, pd_h)
    return v.mutants, pd_g.crossing_count, pd_h.crossing_count


def _lifted_spec_pair(pair):
    a, b = pair
    pa, pb = two_bridge_pd(a), two_bridge_pd(b)
    v = mutation_verdict(pa, pb)
    return v.mutants, pa.crossing_count, pb.crossing_count


def crossing_number_suite(count: int = 200, seed: int = 2024, max_crossings: int = 8,
                          jobs: int = 1) -> SuiteResult:
    """Every positive mutation decision relates diagrams with equally many crossings."""
    res = SuiteResult("mutant diagrams have equal crossing numbers", True, 0)
    outcomes = fan_out(_lifted_switch_pair, switch_pairs(count, seed), jobs)
    report = two_bridge_mutation_classes(max_crossings)
    spec_pairs = [(c[0], s) for c in report.classes for s in c]
    outcomes += fan_out(_lifted_spec_pair, spec_pairs, jobs)
    for mutants, n1, n2 in outcomes:
        if not mutants:
            res.failures.append(("expected a positive decision", n1, n2))
            continue
        res.checked += 1
        if n1 != n2:
            res.failures.append((n1, n2))
    res.passed = not res.failures
    return res


def run_all(max_edges: int = 6, jobs: int = 1) -> list[SuiteResult]:
    """Every criterion at the given scale (full scale for max_edges=6)."""
    partition, rho_glue = theorem_suite(max_edges, jobs)
    return [
        partition,
        short_graph_suite(min(5, max_edges), jobs),
        numeric_example_suite(),
        van_der_blij_standard(max_edges),
        rho_glue,
        kirchhoff_suite(max_edges + 1, jobs),
        roundtrip_suite(200 if max_edges >= 6 else 40, jobs=jobs),
        two_bridge_suite(max_edges + 2)[0],
        crossing_number_suite(200 if max_edges >= 6 else 40, max_crossings=max_edges + 2, jobs=jobs),
        method_suite(max_edges, jobs),
    ]
