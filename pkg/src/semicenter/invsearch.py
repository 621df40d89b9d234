"""Degree-by-degree invariants and semi-invariants of S(g).

Homogeneous components are split into blocks by the eigenvalues of the basis
elements whose adjoint action is diagonal in the given basis (e.g. the
Cartan element of an sl(2) factor).  A weight vector under these elements
can only be a semi-invariant if it lives in a single block, and invariants
live in the zero block, which keeps the linear systems small.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

from gmpy2 import mpq
from sympy import Poly as SymPoly
from sympy import QQ, Rational, Symbol
from sympy.polys.matrices import DomainMatrix

from .exactpoly import (
    ONE,
    ZERO,
    Poly,
    PolyMatrix,
    Rat,
    count_monomials,
    glex_key,
    monomials_of_degree,
    poly_rank,
    rat_kernel,
    sparse_kernel,
    sparse_rref,
)
from .exactpoly.poly import Monomial
from .liecore import LieAlgebra, LinFunc, Subspace, ad_basis_terms, derived_algebra
from .structura import index

DEFAULT_MONOMIAL_CAP = 200_000


class ResourceCapExceeded(RuntimeError):
    def __init__(self, n: int, d: int, count: int, cap: int):
        self.cap = cap
        super().__init__(
            f"degree {d} in {n} variables has {count} monomials, above the monomial cap {cap}"
            " (raise it with --monomial-cap)"
        )


# helpers on polynomial lists


def poly_rref(polys: Sequence[Poly], nvars: int) -> list[Poly]:
    """Echelon basis of the span, over graded-lex monomials (leading monomial first),
    each scaled to a primitive integer polynomial with positive leading coefficient."""
    monos = sorted({m for p in polys for m in p.terms}, key=glex_key, reverse=True)
    pos = {m: k for k, m in enumerate(monos)}
    vecs = [{pos[m]: c for m, c in p.terms.items()} for p in polys if p]
    rows = sparse_rref(vecs)
    return [Poly._raw(nvars, {monos[k]: c for k, c in r.items()}).normalized() for r in rows]


def reduce_modulo(p: Poly, basis: Sequence[Poly]) -> Poly:
    """Remainder of ``p`` against an echelon basis (distinct leading monomials)."""
    r = p
    for b in basis:
        lm = b.leading_monomial()
        c = r.coefficient(lm)
        if c:
            r = r - b.scale(c / b.terms[lm])
    return r


def in_span(p: Poly, basis: Sequence[Poly]) -> bool:
    ech = poly_rref(basis, p.nvars) if basis else []
    return not reduce_modulo(p, ech)


# diagonal structure


def _diagonal_data(L: LieAlgebra):
    if "diag" in L._memo:
        return L._memo["diag"]
    n = L.dim
    diag = []
    for d in range(n):
        if all(not L._ad[d][j] or (len(L._ad[d][j]) == 1 and L._ad[d][j][0][0] == j) for j in range(n)):
            if any(L._ad[d][j] for j in range(n)):
                diag.append(d)
    weights = []
    for j in range(n):
        w = []
        for d in diag:
            entry = L._ad[d][j]
            w.append(entry[0][1] if entry else ZERO)
        weights.append(tuple(w))
    L._memo["diag"] = (diag, weights)
    return diag, weights


def _check_cap(n: int, d: int, cap: int) -> None:
    count = count_monomials(n, d)
    if count > cap:
        raise ResourceCapExceeded(n, d, count, cap)


def _blocks(L: LieAlgebra, d: int, cap: int) -> dict[tuple, list[Monomial]]:
    n = L.dim
    _check_cap(n, d, cap)
    diag, weights = _diagonal_data(L)
    blocks: dict[tuple, list[Monomial]] = {}
    k = len(diag)
    for m in monomials_of_degree(n, d):
        w = [ZERO] * k
        for j, e in enumerate(m):
            if e:
                for t in range(k):
                    if weights[j][t]:
                        w[t] += e * weights[j][t]
        blocks.setdefault(tuple(w), []).append(m)
    return blocks


def _kernel_on_block(L: LieAlgebra, monos: Sequence[Monomial], ops: Sequence[Sequence[Rat]]) -> list[Poly]:
    """Common kernel of ``ad y`` (y in ``ops``) on the span of ``monos``, echelon form."""
    n = L.dim
    if not monos:
        return []
    keys: dict[tuple, int] = {}
    columns = []
    active = [[(i, c) for i, c in enumerate(y) if c] for y in ops]
    for m in monos:
        col: dict[int, Rat] = {}
        unit = {m: ONE}
        for t, y in enumerate(active):
            for i, c in y:
                for mm, v in ad_basis_terms(L, i, unit).items():
                    key = keys.setdefault((t, mm), len(keys))
                    s = col.get(key, ZERO) + c * v
                    if s:
                        col[key] = s
                    else:
                        col.pop(key, None)
        columns.append(col)
    ker = sparse_kernel(columns)
    return [Poly._raw(n, {monos[k]: c for k, c in vec.items()}).normalized() for vec in ker]


def _basis_op(n: int, i: int) -> list[Rat]:
    v = [ZERO] * n
    v[i] = ONE
    return v


# invariants


def invariants_of_degree(L: LieAlgebra, d: int, cap: int = DEFAULT_MONOMIAL_CAP) -> list[Poly]:
    """Echelon basis of Y(g)_d, the degree-d invariants."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    # checked before the cache so the outcome never depends on earlier calls
    _check_cap(L.dim, d, cap)
    key = ("Y", d)
    if key in L._memo:
        return L._memo[key]
    n = L.dim
    if d == 0:
        out = [Poly.const(n, 1)]
    else:
        diag, _ = _diagonal_data(L)
        blocks = _blocks(L, d, cap)
        zero = tuple(ZERO for _ in diag)
        ops = [_basis_op(n, i) for i in range(n) if i not in diag and any(L._ad[i])]
        monos = blocks.get(zero, [])
        out = _kernel_on_block(L, monos, ops) if ops else [Poly.monomial(m) for m in monos]
    L._memo[key] = out
    return out


# semi-invariants


@dataclass(frozen=True)
class WeightedInvariant:
    poly: Poly
    weight: LinFunc


@dataclass(frozen=True)
class SemiInvariantSlices:
    """Semi-invariants of one degree, grouped by weight."""

    degree: int
    slices: tuple[tuple[LinFunc, tuple[Poly, ...]], ...]
    unresolved: int = 0

    def weights(self) -> list[LinFunc]:
        return [w for w, _ in self.slices]

    def slice(self, weight: LinFunc) -> tuple[Poly, ...]:
        for w, basis in self.slices:
            if w == weight:
                return basis
        return ()


def _coords_in(p: Poly, basis: Sequence[Poly]) -> list[Rat]:
    coords = []
    r = p
    for b in basis:
        lm = b.leading_monomial()
        c = r.coefficient(lm) / b.terms[lm]
        coords.append(c)
        if c:
            r = r - b.scale(c)
    if r:
        raise AssertionError("operator does not preserve the subspace")
    return coords


def _rational_roots(mat: list[list[Rat]]) -> tuple[list[Rat], int]:
    """Distinct rational eigenvalues and the total degree of irrational factors."""
    k = len(mat)
    dm = DomainMatrix([[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in mat], (k, k), QQ)
    coeffs = dm.charpoly()
    lam = Symbol("lam")
    _, factors = SymPoly([QQ.to_sympy(c) for c in coeffs], lam, domain=QQ).factor_list()
    roots, irrational = [], 0
    for f, mult in factors:
        if f.degree() == 1:
            a, b = f.all_coeffs()
            r = -Rational(b) / Rational(a)
            roots.append(mpq(int(r.p), int(r.q)))
        else:
            irrational += f.degree() * mult
    return sorted(roots), irrational


def _joint_eigenspaces(L: LieAlgebra, W: list[Poly], ops: Sequence[int]):
    n = L.dim
    spaces = [W]
    unresolved = 0
    for i in ops:
        nxt = []
        for B in spaces:
            images = [Poly._raw(n, ad_basis_terms(L, i, b.terms)) for b in B]
            if not any(images):
                nxt.append(B)
                continue
            cols = [_coords_in(g, B) for g in images]
            k = len(B)
            A = [[cols[j][r] for j in range(k)] for r in range(k)]
            roots, irr = _rational_roots(A)
            unresolved += irr
            for r in roots:
                shifted = [[A[a][b] - (r if a == b else ZERO) for b in range(k)] for a in range(k)]
                ker = rat_kernel(shifted)
                polys = []
                for vec in ker:
                    acc = Poly.zero(n)
                    for c, b in zip(vec, B):
                        if c:
                            acc = acc + b.scale(c)
                    polys.append(acc)
                if polys:
                    nxt.append(poly_rref(polys, n))
        spaces = nxt
    return spaces, unresolved


def weight_of(L: LieAlgebra, f: Poly) -> LinFunc | None:
    """The weight of ``f`` if it is a semi-invariant, else None."""
    if not f:
        return None
    lm = f.leading_monomial()
    lc = f.terms[lm]
    vals = []
    for i in range(L.dim):
        g = Poly._raw(L.dim, ad_basis_terms(L, i, f.terms))
        c = g.coefficient(lm) / lc
        if g != f.scale(c):
            return None
        vals.append(c)
    return LinFunc(tuple(vals))


def semiinvariants_of_degree(L: LieAlgebra, d: int, cap: int = DEFAULT_MONOMIAL_CAP) -> SemiInvariantSlices:
    """Semi-invariants of degree ``d`` grouped by their Q-rational weights."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    _check_cap(L.dim, d, cap)
    key = ("S", d)
    if key in L._memo:
        return L._memo[key]
    n = L.dim
    diag, weights = _diagonal_data(L)
    blocks = _blocks(L, d, cap)
    derived = derived_algebra(L).vectors()
    shifting = [_basis_op(n, i) for i in range(n) if i not in diag and any(weights[i])]
    # remaining basis elements preserve every block and commute on the common kernel
    neutral = [i for i in range(n) if i not in diag and not any(weights[i]) and any(L._ad[i])]
    found: dict[LinFunc, list[Poly]] = {}
    unresolved = 0
    for w in sorted(blocks):
        W = _kernel_on_block(L, blocks[w], derived + shifting)
        if not W:
            continue
        spaces, irr = _joint_eigenspaces(L, W, neutral)
        unresolved += irr
        for B in spaces:
            lam = weight_of(L, B[0])
            if lam is None:
                raise AssertionError("joint eigenvector is not a semi-invariant")
            for b in B[1:]:
                if weight_of(L, b) != lam:
                    raise AssertionError("inconsistent weights in one eigenspace")
            found.setdefault(lam, []).extend(B)
    slices = tuple(
        (lam, tuple(poly_rref(found[lam], n)))
        for lam in sorted(found, key=lambda w: (not w.is_zero(), w.coords))
    )
    out = SemiInvariantSlices(d, slices, unresolved)
    L._memo[key] = out
    return out


def weights_up_to(L: LieAlgebra, D: int, cap: int = DEFAULT_MONOMIAL_CAP) -> list[LinFunc]:
    ws = set()
    for d in range(1, D + 1):
        ws.update(semiinvariants_of_degree(L, d, cap).weights())
    return sorted(ws, key=lambda w: (not w.is_zero(), w.coords))


def proper_weights_up_to(L: LieAlgebra, D: int, cap: int = DEFAULT_MONOMIAL_CAP) -> list[LinFunc]:
    return [w for w in weights_up_to(L, D, cap) if not w.is_zero()]


def truncation_estimate(L: LieAlgebra, D: int, cap: int = DEFAULT_MONOMIAL_CAP) -> Subspace:
    """Intersection of the kernels of the weights found up to degree D (an upper bound on g_Lambda)."""
    ws = proper_weights_up_to(L, D, cap)
    if not ws:
        return Subspace.whole(L.dim)
    return Subspace.span(L.dim, rat_kernel([list(w.coords) for w in ws]))


# algebraic independence


def jacobian_matrix(polys: Sequence[Poly]) -> PolyMatrix:
    n = polys[0].nvars
    return PolyMatrix([[p.diff(i) for i in range(n)] for p in polys], n)


def jacobian_rank(polys: Sequence[Poly], seed: int = 0, mode: str = "randomized") -> int:
    """Generic rank of the Jacobian; equals len(polys) iff they are algebraically independent.

    In randomized mode a rank below full is confirmed symbolically.
    """
    if not polys:
        return 0
    J = jacobian_matrix(polys)
    if mode == "symbolic":
        return poly_rank(J, seed, "symbolic")
    r = poly_rank(J, seed, "randomized")
    if r < min(J.rows, J.cols):
        r = poly_rank(J, seed, "symbolic")
    return r


def _products_of_degree(gens: Sequence[Poly], d: int, nvars: int) -> list[Poly]:
    degs = [g.degree() for g in gens]
    out = []
    for k in range(1, d + 1):
        for combo in combinations_with_replacement(range(len(gens)), k):
            if sum(degs[c] for c in combo) == d:
                p = Poly.const(nvars, 1)
                for c in combo:
                    p = p * gens[c]
                out.append(p)
    return out


def generator_candidates(
    L: LieAlgebra,
    D: int,
    seed: int = 0,
    cap: int = DEFAULT_MONOMIAL_CAP,
    table: "GradedInvariantTable | None" = None,
) -> list[Poly]:
    """Up to i(g) homogeneous invariants chosen by ascending degree.

    At each degree the invariants are reduced modulo products of the
    generators already chosen; a remainder is admitted if it raises the
    Jacobian rank.
    """
    n = L.dim
    target = index(L, seed)
    chosen: list[Poly] = []
    rank = 0
    for d in range(1, D + 1):
        if len(chosen) >= target:
            break
        Yd = table.invariants[d] if table is not None and d in table.invariants else invariants_of_degree(L, d, cap)
        if not Yd:
            continue
        prods = poly_rref(_products_of_degree(chosen, d, n), n) if chosen else []
        rems = [reduce_modulo(y, prods) for y in Yd]
        for cand in poly_rref([r for r in rems if r], n):
            if len(chosen) >= target:
                break
            r2 = jacobian_rank(chosen + [cand], seed)
            if r2 > rank:
                chosen.append(cand)
                rank = r2
    return chosen


# tables


@dataclass
class GradedInvariantTable:
    max_degree: int
    invariants: dict[int, list[Poly]] = field(default_factory=dict)
    semiinvariants: dict[int, SemiInvariantSlices] = field(default_factory=dict)

    def proper_weights(self) -> list[LinFunc]:
        ws = {w for s in self.semiinvariants.values() for w in s.weights() if not w.is_zero()}
        return sorted(ws, key=lambda w: w.coords)

    def has_proper_semiinvariants(self) -> bool:
        return bool(self.proper_weights())

    def unresolved(self) -> int:
        return sum(s.unresolved for s in self.semiinvariants.values())

    def min_invariant_degree(self) -> int | None:
        for d in sorted(self.invariants):
            if d >= 1 and self.invariants[d]:
                return d
        return None

    def invariant_dims(self) -> dict[int, int]:
        return {d: len(b) for d, b in sorted(self.invariants.items())}


def build_table(
    L: LieAlgebra,
    D: int,
    cap: int = DEFAULT_MONOMIAL_CAP,
    workers: int = 1,
) -> GradedInvariantTable:
    """Invariants and semi-invariants for every degree 1..D."""
    if D < 1:
        raise ValueError("max degree must be at least 1")
    # fill shared caches before fanning out
    _diagonal_data(L)
    derived_algebra(L)
    degrees = list(range(1, D + 1))

    def job(d: int):
        return d, invariants_of_degree(L, d, cap), semiinvariants_of_degree(L, d, cap)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, degrees))
    else:
        results = [job(d) for d in degrees]
    table = GradedInvariantTable(D)
    for d, inv, semi in sorted(results, key=lambda r: r[0]):
        table.invariants[d] = inv
        table.semiinvariants[d] = semi
    return table
