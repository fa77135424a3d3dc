"""Kernel backend selection.

The environment variable ``TENSORSYM_BACKEND`` picks the elimination kernels:
``numba`` (default, falls back silently if numba cannot be imported) or
``numpy`` (pure-numpy reference path).  Both backends are exact and produce
identical output; ``bench/compare_backends.py`` times them side by side.
"""

import os

_requested = os.environ.get("TENSORSYM_BACKEND", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise ValueError(
        f"TENSORSYM_BACKEND must be 'numba' or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from ._kernels_numpy import BACKEND_NAME, rref_int, rref_mod
else:
    try:
        from ._kernels_numba import BACKEND_NAME, rref_int, rref_mod
    except ImportError:
        if _requested == "numba":
            raise
        from ._kernels_numpy import BACKEND_NAME, rref_int, rref_mod

__all__ = ["BACKEND_NAME", "rref_mod", "rref_int"]
