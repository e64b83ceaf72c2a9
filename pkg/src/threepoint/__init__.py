"""Exact arithmetic for circle actions with three isolated fixed points."""

__version__ = "0.1.0"
