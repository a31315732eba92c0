"""Motivic, topological and stringy zeta invariants from resolution data."""

__version__ = "0.1.0"
