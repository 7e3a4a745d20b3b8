"""Determinantal point process kernels, noncolliding diffusions, and
Fredholm determinant numerics."""

__version__ = "0.1.0"
