"""Population sizing laboratory for selecto-recombinative genetic
algorithms on additively decomposable, uniformly scaled problems.
"""

from .engine import RunRecord, run_ga
from .problems import (ProblemSpec, bb_count, evaluate, load_problem, onemax,
                       subfunction_stats, trap4)
from .strategies import SizingObservation, SizingStrategy, percentile_supply
from .theory import (TheoryParams, WalkSpec, gr_success, p_decide_from_variance,
                     p_decide_model, simulate_walk, size_from_p, size_static,
                     std_normal_cdf)

__version__ = "0.1.0"
