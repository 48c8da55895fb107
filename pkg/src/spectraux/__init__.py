"""Strategy-proof greedy spectrum auction over interference conflict graphs.

Operators bid a vector of per-station values; a single channel is allocated
round by round to the operator with the largest residual bid sum, priced at
its critical neighbour's conflicting bid sum. An exact VCG baseline, a
randomized deviation harness and scaling benchmarks ship alongside.
"""
from .auction import critical_operator, run_auction, settle_utilities
from .graph import (ConflictGraph, ResidualView, build_conflict_graph, neighborhood_of_operator,
                    remove_closed_neighborhood)
from .kernels import BACKEND
from .metrics import allocation_efficiency, social_welfare
from .model import (AuctionResult, BaseStation, BidVector, RoundRecord, Scenario, ValuationVector,
                    VcgResult, operator_bid_sum, operator_true_sum)
from .scenario import generate, load, save
from .vcg import InstanceTooLarge, max_weight_independent_set, vcg_auction

__version__ = "0.1.0"
