"""Finite monoids, word identities and isoterms, with checkers for non-finite-basis conditions."""

__version__ = "0.1.0"
