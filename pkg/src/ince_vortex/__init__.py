"""Ince-Gaussian vortex states of a two-mode radiation field.

Submodules:

``ince_poly``   Ince polynomials from a tridiagonal eigenproblem
``modes``       Laguerre-Gauss and (helical) Ince-Gauss mode functions
``decompose``   helical IG → helical LG expansion coefficients
``fock``        fixed-photon-number two-mode states and the mode converter
``wigner``      four-dimensional Wigner functions and slices
``entropy``     reduced density matrices and entanglement entropy
``cli``         batch command-line driver
"""

__version__ = "0.1.0"

from .errors import InceVortexError, NumericalError, ValidationError

__all__ = ["InceVortexError", "NumericalError", "ValidationError", "__version__"]
