"""Exact focal coefficients and cyclicity certificates for 3D Hopf singular points."""
__version__ = "0.1.0"
