"""Solver and verification toolkit for coupled p/q-Laplacian Dirichlet systems.

Submodules
----------
mesh      grids, fields, discrete calculus, norms
plap      regularized scalar p-Laplacian solver (energy continuation)
spectral  Rayleigh-quotient eigenvalues and embedding constants
problems  built-in nonlinearities, hypothesis checkers, manufactured solutions
schaefer  coupled solution operator, damped Picard driver, norm window
fibering  subsolution construction and positivity certificates
moser     exponent ladders and sup-norm bounds
cli       batch front end
"""

from . import fibering, mesh, moser, plap, problems, schaefer, spectral  # noqa: F401

__version__ = "0.1.0"
