"""Exact enumeration and certification of geometric permutations in the plane and in space."""

__version__ = "0.1.0"
