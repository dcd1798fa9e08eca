"""Numerical verification of Poincare, Hardy and Rellich type inequalities on model manifolds."""

__version__ = "0.1.0"
