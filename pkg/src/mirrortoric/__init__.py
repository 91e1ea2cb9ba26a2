"""Exact toric geometry for comparing mirror families of Calabi-Yau threefolds."""

__version__ = "0.1.0"
