"""ellipsum: arbitrary-precision elliptic multiple zeta values, modular graph
functions, conical zeta sums, and genus-zero amplitude expansions."""

from .numkernel import PrecisionCtx

__version__ = "0.1.0"

__all__ = ["PrecisionCtx", "__version__"]
