"""Exact desk-scale computations with Maurer-Cartan elements, gauge actions
and bar constructions over the rationals."""

__version__ = "0.1.0"
