"""Eisenstein theta elements and Selmer predictions for prime level."""

__version__ = "0.1.0"
