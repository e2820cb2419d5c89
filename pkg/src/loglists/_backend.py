"""Kernel backend selection.

The structural kernels in :mod:`loglists._kernels` run numba-compiled by
default. Setting ``LOGLISTS_BACKEND=python`` (or running without numba
installed) executes the same kernel source as plain Python over the numpy
arenas -- bit-identical results, roughly two orders of magnitude slower.
``benchmarks/backend_compare.py`` times the two paths against each other.
"""

import os

_requested = os.environ.get("LOGLISTS_BACKEND", "").strip().lower()


def _identity_njit(*args, **kwargs):
    if args and callable(args[0]):
        return args[0]

    def deco(fn):
        return fn

    return deco


if _requested == "python":
    njit = _identity_njit
    BACKEND = "python"
else:
    try:
        from numba import njit

        BACKEND = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        njit = _identity_njit
        BACKEND = "python"
