"""Exact workbench for self-replicating functional equations.

Subpackages cover: truncated power series over exact rationals, integer
sequence families with multiple routes, a generic functional-equation
solver and verifier, Lucas/supercongruence scans, parameter sweeps,
linear-recurrence guessing, formal q-expansions, arbitrary-precision
AGM-type iterations for 1/pi constants, and bivariate identities for
Legendre generating functions.
"""

from .powerseries import RationalFunction, TruncatedSeries

__all__ = ["RationalFunction", "TruncatedSeries"]

__version__ = "0.1.0"
