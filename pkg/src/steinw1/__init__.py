"""Certified Wasserstein-1 bounds between discrete laws and continuous targets.

The library computes tuned discrete-derivative weight sequences, Stein
factors, and assembled W1 bounds, and validates every bound against an
independent exact-W1 quadrature oracle.
"""

from steinw1._kernels import IMPLEMENTATION as kernel_implementation

__version__ = "0.1.0"
__all__ = ["kernel_implementation", "__version__"]
