"""Exact and approximate Frechet distances of polygonal curves.

Exact decision and value for the continuous and the discrete distance, and
block-based approximate deciders that certify every yes answer up to a
fixed ratio bound (see ``ratio_bound`` on the results).
"""

from .approx import (ApproxResult, BlockIndex, CoverIndex, Decider, Params, Partition,
                     audit, compute_approx, cover_query, decide_approx, find_surrogate,
                     partition, preprocess_block, reach)
from .approx_discrete import (DisCoverIndex, DiscreteBlock, DiscreteDecider,
                              compute_approx_discrete, decide_approx_discrete,
                              dis_cover_build, dis_cover_query)
from .freespace import (compute_exact, decide_exact, dis_wave, discrete_compute_exact,
                        discrete_decide_exact, wavefront)
from .geometry import (CurveError, CurvePoint, IntervalArray, as_curve, generate_synthetic,
                       read_csv, tolerance, write_csv)
from .matching import DiscreteMatching, Matching, MatchingError, build_discrete_matching, build_matching
from .simplification import Simplification, simplify_continuous, simplify_discrete

__version__ = "0.1.0"

__all__ = [
    "ApproxResult", "BlockIndex", "CoverIndex", "Decider", "Params", "Partition", "audit",
    "compute_approx", "cover_query", "decide_approx", "find_surrogate", "partition",
    "preprocess_block", "reach",
    "DisCoverIndex", "DiscreteBlock", "DiscreteDecider", "compute_approx_discrete",
    "decide_approx_discrete", "dis_cover_build", "dis_cover_query",
    "compute_exact", "decide_exact", "dis_wave", "discrete_compute_exact",
    "discrete_decide_exact", "wavefront",
    "CurveError", "CurvePoint", "IntervalArray", "as_curve", "generate_synthetic", "read_csv",
    "tolerance", "write_csv",
    "DiscreteMatching", "Matching", "MatchingError", "build_discrete_matching", "build_matching",
    "Simplification", "simplify_continuous", "simplify_discrete",
]
