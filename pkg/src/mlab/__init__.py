"""Numerical laboratory for weighted Poincare-Sobolev and Riesz potential estimates."""
