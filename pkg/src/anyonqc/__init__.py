"""Quantum computation with anyons of finite solvable non-nilpotent groups."""

__version__ = "0.1.0"
