"""Capacity bounds and random-ensemble experiments for Abelian group codes."""

__version__ = "0.1.0"
