"""Index, magic number, fundamental semi-invariant, stabilizers and the Frobenius semi-radical."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations

from gmpy2 import mpq

from .exactpoly import (
    ZERO,
    Poly,
    gcd_many,
    pfaffian,
    poly_det,
    poly_rank,
    rat_kernel,
)
from .exactpoly.linalg import COORD_BOUND
from .liecore import (
    LieAlgebra,
    LinFunc,
    Subspace,
    centralizer,
    is_commutative,
    is_ideal,
    is_subalgebra,
)

FROBENIUS_PATIENCE = 20
FROBENIUS_SAMPLE_CAP = 500


class StructureError(AssertionError):
    """A structural identity that must hold failed (indicates a bug or bad input)."""


def index(L: LieAlgebra, seed: int = 0, mode: str = "randomized") -> int:
    """i(g) = dim g - generic rank of the structure matrix."""
    key = ("index", seed, mode)
    if key not in L._memo:
        rank = poly_rank(L.structure_matrix(), seed=seed, mode=mode)
        i = L.dim - rank
        if (L.dim - i) % 2:
            raise StructureError(f"dim - index = {L.dim - i} is odd")
        L._memo[key] = i
    return L._memo[key]


def magic_number(L: LieAlgebra, seed: int = 0, mode: str = "randomized") -> int:
    return (L.dim + index(L, seed, mode)) // 2


def is_frobenius(L: LieAlgebra, seed: int = 0, mode: str = "randomized") -> bool:
    return index(L, seed, mode) == 0


def principal_pfaffians(L: LieAlgebra, t: int):
    B = L.structure_matrix()
    for S in combinations(range(L.dim), t):
        yield pfaffian(B.submatrix(S, S))


def _minors(L: LieAlgebra, t: int):
    B = L.structure_matrix()
    subsets = list(combinations(range(L.dim), t))
    for S in subsets:
        yield poly_det(B.submatrix(S, S))
    for R in subsets:
        for C in subsets:
            if R != C:
                yield poly_det(B.submatrix(R, C))


def fundamental_semiinvariant(L: LieAlgebra, seed: int = 0, mode: str = "randomized") -> tuple[Poly, Poly]:
    """(p_g, q_g): gcds of principal t x t Pfaffians and of all t x t minors, t = dim - index.

    Both are in normal form; checks p^2 = q up to a scalar and deg p <= t/2.
    """
    key = ("pq", seed, mode)
    if key in L._memo:
        return L._memo[key]
    n = L.dim
    t = n - index(L, seed, mode)
    one = Poly.const(n, 1)
    if t == 0:
        p = q = one
    else:
        p = gcd_many(principal_pfaffians(L, t), n)
        q = gcd_many(_minors(L, t), n)
        if not p or not q:
            raise StructureError("all t x t Pfaffians vanish; index is wrong")
        if (p * p).normalized() != q:
            raise StructureError(f"p^2 != q up to scalar: p = {p}, q = {q}")
        if p.degree() > t // 2:
            raise StructureError("deg p exceeds t/2")
    L._memo[key] = (p, q)
    return p, q


def structure_at(L: LieAlgebra, xi: LinFunc) -> list[list]:
    """The rational matrix xi([x_i, x_j])."""
    n = L.dim
    m = [[ZERO] * n for _ in range(n)]
    for (i, j), vec in L.structure.items():
        v = sum((c * xi.coords[k] for k, c in vec.items()), ZERO)
        m[i][j] = v
        m[j][i] = -v
    return m


def stabilizer(L: LieAlgebra, xi: LinFunc) -> Subspace:
    """g(xi) = {x : xi([x, y]) = 0 for all y}."""
    if L.dim == 0:
        return Subspace.zero(0)
    return Subspace.span(L.dim, rat_kernel(structure_at(L, xi)))


def is_regular(L: LieAlgebra, xi: LinFunc, seed: int = 0) -> bool:
    return stabilizer(L, xi).dim == index(L, seed)


@dataclass(frozen=True)
class SemiradicalSample:
    """F(g) as accumulated from sampled regular functionals."""

    subspace: Subspace
    seed: int
    samples: int
    regular_samples: int
    stop_reason: str
    label: str = "generically exact"


def sample_frobenius_semiradical(L: LieAlgebra, seed: int = 0) -> SemiradicalSample:
    key = ("F", seed)
    if key in L._memo:
        return L._memo[key]
    n = L.dim
    i = index(L, seed)
    rng = random.Random(seed)
    acc = Subspace.zero(n)
    quiet = samples = regular = 0
    reason = "sample cap"
    if i == 0:
        reason = "index 0 (Frobenius)"
    else:
        while samples < FROBENIUS_SAMPLE_CAP:
            xi = LinFunc(tuple(mpq(rng.randint(-COORD_BOUND, COORD_BOUND)) for _ in range(n)))
            samples += 1
            stab = stabilizer(L, xi)
            if stab.dim != i:
                continue
            regular += 1
            grown = acc + stab
            if grown.dim > acc.dim:
                acc, quiet = grown, 0
            else:
                quiet += 1
            if acc.is_whole():
                reason = "whole algebra reached"
                break
            if quiet >= FROBENIUS_PATIENCE:
                reason = f"{FROBENIUS_PATIENCE} regular samples without growth"
                break
        if regular == 0:
            raise StructureError("no regular functional found among samples")
    if not is_ideal(L, acc):
        raise StructureError("sampled Frobenius semi-radical is not an ideal")
    out = SemiradicalSample(acc, seed, samples, regular, reason)
    L._memo[key] = out
    return out


def frobenius_semiradical(L: LieAlgebra, seed: int = 0) -> Subspace:
    """F(g), the sum of stabilizers of regular functionals (sampled)."""
    return sample_frobenius_semiradical(L, seed).subspace


def quasi_quadratic(L: LieAlgebra, seed: int = 0) -> bool:
    return frobenius_semiradical(L, seed).is_whole()


def centralizer_bound_check(L: LieAlgebra, u, seed: int = 0) -> bool:
    """F(L) lies in C(u) whenever C(u) has codimension one (vacuously true otherwise)."""
    c = centralizer(L, u)
    if c.dim != L.dim - 1:
        return True
    return c.contains_subspace(frobenius_semiradical(L, seed))


@dataclass(frozen=True)
class CPCheck:
    is_cp: bool
    is_cpi: bool
    reasons: tuple[str, ...] = field(default_factory=tuple)


def check_cp(L: LieAlgebra, h: Subspace, seed: int = 0) -> CPCheck:
    """Is ``h`` a commutative polarization (and a CP-ideal)?"""
    reasons = []
    c = magic_number(L, seed)
    sub = is_subalgebra(L, h)
    if not sub:
        reasons.append("not a subalgebra")
    comm = sub and is_commutative(L, h)
    if sub and not comm:
        reasons.append("not commutative")
    if h.dim != c:
        reasons.append(f"dim {h.dim} != c(g) = {c}")
    is_cp = sub and comm and h.dim == c
    ideal = is_ideal(L, h)
    if is_cp and not ideal:
        reasons.append("not an ideal")
    return CPCheck(is_cp, is_cp and ideal, tuple(reasons))


def pin_symbolic_index(L: LieAlgebra, seed: int = 0) -> int:
    """Compute the index by exact symbolic rank and make it the value every later stage uses."""
    i = index(L, seed, "symbolic")
    L._memo[("index", seed, "randomized")] = i
    return i
