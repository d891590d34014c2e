"""Hot-loop kernels with a compiled core and a numpy fallback.

The compiled extension (``_core``, built from Cython) is used when it
imports cleanly; otherwise the numpy fallback is selected. Both backends
are deterministic functions of their inputs, so GA runs are bit-identical
across backends. The choice can be forced with the environment variable
``POPSIZE_LAB_KERNELS=cython`` or ``=fallback``, or at runtime with
:func:`set_backend`.
"""

import os

from . import _fallback

try:
    from . import _core
except ImportError:
    _core = None

_BACKENDS = {"fallback": _fallback}
if _core is not None:
    _BACKENDS["cython"] = _core

BACKEND = None
evaluate_configs = None
bb_counts = None
tournament_pass = None
shuffle_columns = None
binomial_small_cdf = None
walk_round = None


def available_backends():
    return tuple(_BACKENDS)


def set_backend(name):
    """Select a kernel backend by name ('cython' or 'fallback')."""
    global BACKEND, evaluate_configs, bb_counts, tournament_pass, \
        shuffle_columns, binomial_small_cdf, walk_round
    if name not in _BACKENDS:
        raise ValueError(f"unknown or unavailable kernel backend: {name!r} "
                         f"(available: {', '.join(_BACKENDS)})")
    impl = _BACKENDS[name]
    BACKEND = name
    evaluate_configs = impl.evaluate_configs
    bb_counts = impl.bb_counts
    tournament_pass = impl.tournament_pass
    shuffle_columns = impl.shuffle_columns
    binomial_small_cdf = impl.binomial_small_cdf
    walk_round = impl.walk_round


_requested = os.environ.get("POPSIZE_LAB_KERNELS")
if _requested:
    set_backend(_requested)
else:
    set_backend("cython" if _core is not None else "fallback")
