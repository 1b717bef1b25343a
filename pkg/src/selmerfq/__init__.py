"""Arithmetic of Weierstrass models over F_q(t): local invariants,
L-polynomials, lattice orbit counts, and parameter-space censuses."""

__version__ = "0.1.0"

from . import census, ffpoly, lattice, lfunction, localdata, rng, weierstrass  # noqa: E402,F401
