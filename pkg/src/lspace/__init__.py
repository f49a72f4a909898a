"""Numerical tools for degree-3 L-functions of conductor one: Gamma-factor
landscapes, Plancherel measures, approximate functional equations, L-point
search, explicit-formula exclusion and trace-space measures."""

__version__ = "0.1.0"
