"""Geometric associative r-matrices on Weierstrass cubic curves.

Construction engines (elliptic / nodal / cuspidal / semistable), a catalog of
the closed-form solutions, and residual checks for the associative, classical
and quantum Yang-Baxter equations.
"""

__version__ = "0.1.0"
