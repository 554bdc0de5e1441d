"""Relativistic bit commitment toolkit."""

__version__ = "0.1.0"
