"""Confidence intervals for the Hurst parameter of fractional Brownian motion."""

__version__ = "0.1.0"
