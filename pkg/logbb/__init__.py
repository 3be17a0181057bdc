"""Exact log Baum-Bott residues for foliations by curves along free divisors."""

__version__ = "0.1.0"
