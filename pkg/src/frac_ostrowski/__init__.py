"""Numerical checks of Ostrowski-type bounds for Riemann-Liouville fractional integrals."""

__version__ = "0.1.0"
