"""Quantum transport matrices on planar networks and the identities they satisfy."""

__version__ = "0.1.0"
