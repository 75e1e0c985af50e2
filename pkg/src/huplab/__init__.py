"""Numerical checks of Heisenberg uniqueness pairs built from single-layer potentials."""

__version__ = "0.1.0"
