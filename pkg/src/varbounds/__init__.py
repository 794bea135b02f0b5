"""Variance-based bounds for complex point sets, real samples, spectra and
polynomial roots, each checkable against brute-force oracles."""

__version__ = "0.1.0"
