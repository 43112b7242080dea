"""Exact local analysis of planar real analytic vector fields."""

__version__ = "0.1.0"
