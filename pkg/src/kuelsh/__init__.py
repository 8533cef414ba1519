"""Derived-equivalence invariants of bound quiver algebras over finite fields."""

__version__ = "0.1.0"
