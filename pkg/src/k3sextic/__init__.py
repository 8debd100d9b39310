"""Degree-2 projective models of the supersingular K3 surface with Artin
invariant 1 in characteristic 5, computed from the Fermat sextic double
plane w^2 = x^6 + y^6 + z^6."""

__version__ = "0.1.0"
