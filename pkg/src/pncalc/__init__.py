"""Exact symbolic checks for Poisson and Nijenhuis structures."""

__version__ = "0.1.0"
