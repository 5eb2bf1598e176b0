"""Exact Holant, matchgate and perfect-matching toolkit."""

__version__ = "0.1.0"
