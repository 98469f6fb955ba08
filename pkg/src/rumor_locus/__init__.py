"""Rumor source estimation on regular trees: simulation, the ML estimator,
and exact, limiting and bounded laws of the source-to-estimate distance."""

from .analytic import (cumulative_within, dn_exact_delta3, epsilon, f_closed,
                       g_bound, limit_correct_prob, limit_dn_series, p1, p2)
from .estimator import local_center_check, ml_estimate, rumor_centrality
from .model import DistanceDistribution, Kind, RegularTreeParams
from .tree_sim import (InfectedTree, SubtreePartition, distance, simulate_clock,
                       simulate_uniform, subtree_partition, trial_stream)

__version__ = "0.1.0"
