"""Exact homological algebra for finite-dimensional associative algebras.

The package computes with algebras given by structure constants or quiver
presentations over Q or F_p, builds partially minimal projective
resolutions relative to a surjection, measures Ext/Tor groups, certifies
relative sphericalness of self-injective contexts, and realizes the
associated twist autoequivalences at the level of explicit chain
complexes.  Everything is exact arithmetic; nothing here floats.
"""

__version__ = "0.1.0"
