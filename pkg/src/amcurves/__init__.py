"""Generalized Artin-Mumford curves L1(X) * L2(Y) = 1 over finite fields."""

__version__ = "0.1.0"
