"""Finite-field linear algebra, group enumeration and module analysis for fixed-point subgroups of symplectic groups over F_2."""

__version__ = "0.1.0"
