"""Stable triply graded homology of torus-link style Koszul models."""

__version__ = "0.1.0"
