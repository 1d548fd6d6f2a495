"""Exact d-invariants of cut and flow lattices, graph 2-isomorphism by lattice
gluing, and mutation equivalence of alternating link diagrams."""

from .exact import BudgetExceeded
from .graph_core import (EdgeListError, GraphError, LayeredForest, MultiGraph,
                         brute_force_two_isomorphism, contract_cut_edges, cycle_space_basis,
                         enumerate_multigraphs, fundamental_cut, fundamental_cycle,
                         is_two_edge_connected, layered_forest, parse_edge_list,
                         verify_two_isomorphism, whitney_switch)
from .graph_lattice import (cut_d_invariant_via_orientations, cut_lattice, flow_d_invariant,
                            flow_lattice, goeritz_gram, natural_cut_flow_iso,
                            orientation_covector, orientation_with_indegrees,
                            spanning_tree_count)
from .lattice_core import (DInvariant, DiscriminantGroup, IntegralLattice, TorsorIso,
                           canonical_char, char_classes, check_iso_respects_b, d_invariant,
                           discriminant_form, discriminant_group, dual_basis, find_torsor_iso,
                           glue, lattice_from_basis, minimize_in_class, orthonormal_basis,
                           restrict_covector, rho, short_restriction_surjects)
from .links import (PDCode, TwoBridgeSpec, branched_cover_d_invariants, is_reduced,
                    mutation_equivalent, parse_pd, tait_graph, two_bridge_graph,
                    two_bridge_mutation_classes)
from .reconstruction import (atom_match, compare_graphs, d_equivalent,
                             reconstruct_two_isomorphism, sign_normalize)

__version__ = "0.1.0"
