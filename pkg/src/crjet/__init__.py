"""Exact jet parametrization of local biholomorphisms between real-analytic hypersurfaces."""

__version__ = "0.1.0"
