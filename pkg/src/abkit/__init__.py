"""Aharonov-Bohm phase shifts computed from the electron's and the sources' side."""

__version__ = "0.1.0"
