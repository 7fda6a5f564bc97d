"""Exact Weingarten calculus for the classical ensembles.

Rational Weingarten values, large-dimension series with path-count
coefficients, certified bounds, exact Haar moments, and a Monte Carlo
cross-check, all surfaced through the ``wg`` command.
"""

__version__ = "0.1.0"
