"""Exact construction and verification of Poisson and Hamiltonian superpairs."""

__version__ = "0.1.0"
