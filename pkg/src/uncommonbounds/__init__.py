"""Variational entropy estimation and bounds on quantum uncommon information."""

__version__ = "0.1.0"
