"""Dirichlet-type spaces of M-harmonic functions on the unit ball of C^n."""

from ._accel import BACKEND_NAME

__version__ = "0.1.0"

__all__ = ["BACKEND_NAME", "__version__"]
