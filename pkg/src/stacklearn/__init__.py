"""Learning optimal Stackelberg commitments from best-response queries.

Everything runs on exact reduced rationals: the simulated follower, the
polytope geometry of best-response regions, the bounded-bit sampling and
the boundary searches, so learned regions and values are exact, not
approximate.
"""

from .baseline import (GroundTruth, all_separating_hyperplanes,
                       brute_force_optimal, ground_truth,
                       naive_binary_search_queries, true_regions)
from .errors import (AssertionViolation, DegenerateGeometry, DepthExceeded,
                     DomainError, FullyCovered, InsufficientVertices,
                     OrientationError, ParseError, RetryBudgetExhausted)
from .finder import FinderContext, find_hyperplane, route_side_points
from .geometry import (Halfspace, Hyperplane, Polytope, enumerate_vertices,
                       halfspace, hyperplane_from_points, intersect_halfspace,
                       linearly_independent, solve_square_system)
from .learner import (LearnOutcome, LearnerConfig, check_vertex, learn,
                      sample_uncovered_interior)
from .oracle import (GameInstance, QueryOracle, best_response, leader_value,
                     mixed_strategy)
from .rational import (Rational, as_pair, bit_complexity, checked_sum,
                       from_pair, rational, vector_bits)
from .sampler import interior_anchor, sample_int, sample_simplex_facet
from .search import SearchResult, binary_search, stern_brocot
from .workbench import (bundled_instance_path, generate_random,
                        generate_with_duplicate_column, parse_instance,
                        serialize_instance, theorem_budget, write_instance)

__version__ = "0.1.0"
