"""Quasistable divisors and degree-2 Abel map combinatorics on multigraphs."""

from .errors import (ClosureViolationError, ConventionError, DenominatorEscape,
                     EnumerationGuardError, GuardError, InputError,
                     InternalInvariantError, LemmaViolationError,
                     NonTerminationError, OracleFailure, TropabelError,
                     UnsupportedInputError)
from .graphs import (Edge, MultiGraph, Subdivision, boundary_edges, delta,
                     graph_from_json, graph_to_json, is_connected_induced,
                     relabel, subdivide, subdivide_uniform)
from .divisors import (Divisor, Polarization, div_of_subset, is_principal,
                       laplacian_div, linearly_equivalent, reduce_divisor,
                       reduce_with_function, vertex_divisor, zero_polarization)
from .quasistable import (find_violating_subset, is_quasistable,
                          oracle_quasistable_class, quasistable_in_box,
                          quasistable_rep)
from .hemispheres import (FamilyF, FreeTower, Hemisphere, IntersectionCase,
                          classify_23_intersection, convert_deg2,
                          enumerate_hemispheres, family_f, free_tower,
                          hemispheres_between, is_free, is_hemisphere,
                          make_hemisphere, minimal_member)
from .tropical import (CombinatorialType, ConstancyReport, OrientedEdge, Region,
                       TropicalDivisor, TropicalPoint, combinatorial_type,
                       divisor_on_curve, is_quasistable_tropical, point_on_edge,
                       qs_abel2, region_constancy, region_from_name,
                       tropical_divisor_from_json, tropical_point_from_json,
                       vertex_point)
from .planner import (BlowupPlan, NodePairClassification, blowup_plan,
                      classify_node_pair, tails)
from .hyperelliptic import (LEVEL_GAMMA, LEVEL_GAMMA_TILDE, Witness,
                            find_witnesses, gamma_witnesses,
                            is_graph_pseudo_hyperelliptic)

__version__ = "0.1.0"
