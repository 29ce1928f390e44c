"""Exact computations on the stratification of Fl(n) x Mat_n by the invariant v."""

from .exactmat import QMatrix, det, nw_rank_table, rank
from .permcomb import PartialPermutation, Permutation, bruhat_leq
from .stratmap import FlagPoint, point_stratum_perm, stratification_poset, stratum_report, v_of_point

__version__ = "0.1.0"

__all__ = [
    "QMatrix", "det", "rank", "nw_rank_table",
    "Permutation", "PartialPermutation", "bruhat_leq",
    "FlagPoint", "v_of_point", "point_stratum_perm", "stratification_poset", "stratum_report",
]
