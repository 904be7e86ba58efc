"""Exact computations with multiplication tensors of finite-dimensional algebras."""

__version__ = "0.1.0"
