"""Kernel backend dispatch.

The compiled extension is preferred when present; the numpy/Python
fallback is a drop-in replacement. Set SIEVEKIT_BACKEND=python to force
the fallback, or SIEVEKIT_BACKEND=cython to insist on the extension
(import fails loudly if it was never built).
"""

import os

_requested = os.environ.get("SIEVEKIT_BACKEND", "").strip().lower()

if _requested in ("python", "py"):
    from . import _kernels_py as _impl

    BACKEND = "python"
elif _requested in ("cython", "c", "compiled"):
    from . import _kernels_cy as _impl

    BACKEND = "cython"
elif _requested == "":
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"
else:
    raise ImportError(
        f"unknown SIEVEKIT_BACKEND value {_requested!r}; use 'python' or 'cython'"
    )

mark_segment_odds = _impl.mark_segment_odds
spf_fill = _impl.spf_fill
multiplicative_tables = _impl.multiplicative_tables
divisor_count_table = _impl.divisor_count_table
pi_error_scan = _impl.pi_error_scan
psi_error_scan = _impl.psi_error_scan
k_offset_scan = _impl.k_offset_scan
