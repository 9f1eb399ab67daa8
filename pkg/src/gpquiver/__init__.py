"""Gorenstein projectivity over tensor products of quiver algebras."""

__version__ = "0.1.0"
