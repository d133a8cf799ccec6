"""Verification laboratory for real zeros of random polynomials with exchangeable coefficients."""

__version__ = "0.1.0"
