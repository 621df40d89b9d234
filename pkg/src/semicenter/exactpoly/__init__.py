"""Exact rationals, sparse polynomials, and exact linear algebra."""

from .gcd import gcd_many, poly_gcd
from .linalg import (
    PolyMatrix,
    RatMatrix,
    pfaffian,
    poly_det,
    poly_rank,
    random_points,
    rat_det,
    rat_kernel,
    rat_rank,
    rref,
    sparse_kernel,
    sparse_rref,
)
from .parse import parse_poly
from .poly import (
    NEG_INF,
    NotDivisible,
    Poly,
    UsageError,
    count_monomials,
    default_names,
    divides,
    exact_divide,
    glex_key,
    monomials_of_degree,
)
from .rat import ONE, ZERO, Rat, rat, rat_str


def differentiate(p: Poly, var: int) -> Poly:
    return p.diff(var)


def evaluate(p: Poly, point) -> Rat:
    return p.evaluate(point)


__all__ = [
    "NEG_INF",
    "NotDivisible",
    "ONE",
    "Poly",
    "PolyMatrix",
    "Rat",
    "RatMatrix",
    "UsageError",
    "ZERO",
    "count_monomials",
    "default_names",
    "differentiate",
    "divides",
    "evaluate",
    "exact_divide",
    "gcd_many",
    "glex_key",
    "monomials_of_degree",
    "parse_poly",
    "pfaffian",
    "poly_det",
    "poly_gcd",
    "poly_rank",
    "random_points",
    "rat",
    "rat_det",
    "rat_kernel",
    "rat_rank",
    "rat_str",
    "rref",
    "sparse_kernel",
    "sparse_rref",
]
