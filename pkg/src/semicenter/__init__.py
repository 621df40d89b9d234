"""Exact invariant theory of Lie-Poisson algebras: Poisson centers, semi-invariants and rationality certificates."""

from __future__ import annotations

__version__ = "0.1.0"

from .liecore import InvalidAlgebra, JacobiViolation, LieAlgebra, algebra_from_dict, load_algebra

__all__ = ["__version__", "InvalidAlgebra", "JacobiViolation", "LieAlgebra", "algebra_from_dict", "load_algebra"]
