"""Exact computations for involutory subalgebras of affine Kac-Moody algebras."""

__version__ = "0.1.0"
