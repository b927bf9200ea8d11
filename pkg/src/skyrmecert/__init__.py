"""Exact certification of Skyrmion linear stability."""

__version__ = "0.1.0"
