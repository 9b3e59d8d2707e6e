"""Exact and numeric tools for the coupled Painleve III systems of type D4(1)."""

__version__ = "0.1.0"
