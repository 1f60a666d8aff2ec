"""Numeric kernels for the weight recurrence and Stein-operator rows.

The compiled extension is preferred when it built successfully; otherwise
the pure-Python reference implementation is used. ``IMPLEMENTATION``
records which one is active.
"""

try:
    from steinw1._kernels._fast import bespoke_pi, delta_t_wp

    IMPLEMENTATION = "compiled"
except ImportError:  # extension not built; fall back
    from steinw1._kernels._ref import bespoke_pi, delta_t_wp

    IMPLEMENTATION = "python"

__all__ = ["bespoke_pi", "delta_t_wp", "IMPLEMENTATION"]
