"""Exact linear algebra over Q and over Q[x1..xn].

Dense routines work on lists of rows of ``mpq``; the sparse kernel works on
column vectors given as ``{row_key: coefficient}`` dicts and is the
workhorse of the invariant search.
"""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Hashable, Sequence

from gmpy2 import mpq

from .poly import Poly, UsageError, exact_divide
from .rat import ONE, ZERO, Rat, rat

RANDOM_EVALUATIONS = 5
COORD_BOUND = 997


class RatMatrix:
    """Rectangular matrix of rationals."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        self.entries = tuple(tuple(rat(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != cols for r in self.entries):
            raise UsageError("ragged matrix")
        self.cols = cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and (self.rows, self.cols, self.entries) == (
            other.rows,
            other.cols,
            other.entries,
        )

    def __repr__(self):
        return f"RatMatrix({[[str(x) for x in r] for r in self.entries]})"


class PolyMatrix:
    """Rectangular matrix of polynomials sharing one variable count."""

    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, entries: Sequence[Sequence[Poly]], nvars: int | None = None):
        self.entries = tuple(tuple(row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise UsageError("ragged matrix")
        if nvars is None:
            nvars = self.entries[0][0].nvars if self.rows and self.cols else 0
        for row in self.entries:
            for p in row:
                if p.nvars != nvars:
                    raise UsageError("entries must share the variable count")
        self.nvars = nvars

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_antisymmetric(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[i][j] == -self.entries[j][i]
            for i in range(self.rows)
            for j in range(i, self.rows)
        )

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.entries[i][j] for j in cols] for i in rows], self.nvars)

    def evaluate(self, point: Sequence) -> RatMatrix:
        return RatMatrix([[p.evaluate(point) for p in row] for row in self.entries], self.cols)


# dense rational elimination


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Rat]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[rat(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        pr = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], pr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rat_rank(m) -> int:
    rows = m.entries if isinstance(m, RatMatrix) else m
    return len(rref(rows)[1])


def rat_kernel(m) -> list[list[Rat]]:
    """Right null space basis in reduced row echelon form."""
    if isinstance(m, RatMatrix):
        rows, ncols = m.entries, m.cols
    else:
        rows = m
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [[ONE if i == j else ZERO for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return rref(basis)[0]


def rat_det(m) -> Rat:
    rows = [list(r) for r in (m.entries if isinstance(m, RatMatrix) else m)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise UsageError("determinant of a non-square matrix")
    det = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = ONE / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det


# sparse kernel


def sparse_kernel(columns: Sequence[dict[Hashable, Rat]]) -> list[dict[int, Rat]]:
    """Kernel of the linear map sending unknown ``j`` to the sparse vector ``columns[j]``.

    Returns kernel vectors as ``{unknown_index: coefficient}`` dicts, reduced
    to row echelon form over the unknown ordering (smallest index leads).
    """
    pivots: dict[Hashable, tuple[dict, dict]] = {}
    kernel: list[dict[int, Rat]] = []
    for j, col in enumerate(columns):
        v = dict(col)
        comb = {j: ONE}
        while True:
            hits = [k for k in v if k in pivots]
            if not hits:
                break
            k = min(hits)
            pv, pc = pivots[k]
            f = v[k]
            for kk, x in pv.items():
                y = v.get(kk, ZERO) - f * x
                if y:
                    v[kk] = y
                else:
                    v.pop(kk, None)
            for kk, x in pc.items():
                y = comb.get(kk, ZERO) - f * x
                if y:
                    comb[kk] = y
                else:
                    comb.pop(kk, None)
        if v:
            k = min(v)
            inv = ONE / v[k]
            pivots[k] = ({kk: x * inv for kk, x in v.items()}, {kk: x * inv for kk, x in comb.items()})
        else:
            kernel.append(comb)
    return sparse_rref(kernel)


def sparse_rref(vectors: Sequence[dict[int, Rat]]) -> list[dict[int, Rat]]:
    """Reduced row echelon form of sparse vectors keyed by integer positions."""
    rows: list[dict[int, Rat]] = []
    lead: list[int] = []
    for vec in vectors:
        v = dict(vec)
        for r, p in zip(rows, lead):
            f = v.get(p)
            if f:
                for k, x in r.items():
                    y = v.get(k, ZERO) - f * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
        if not v:
            continue
        p = min(v)
        inv = ONE / v[p]
        v = {k: x * inv for k, x in v.items()}
        for idx, r in enumerate(rows):
            f = r.get(p)
            if f:
                for k, x in v.items():
                    y = r.get(k, ZERO) - f * x
                    if y:
                        r[k] = y
                    else:
                        r.pop(k, None)
        rows.append(v)
        lead.append(p)
    order = sorted(range(len(rows)), key=lambda i: lead[i])
    return [rows[i] for i in order]


# polynomial matrices


def pfaffian(m: PolyMatrix) -> Poly:
    """Pfaffian by first-row expansion, memoized on index subsets."""
    if m.rows != m.cols:
        raise UsageError("Pfaffian of a non-square matrix")
    if m.rows % 2:
        raise UsageError("Pfaffian of an odd-size matrix")
    if not m.is_antisymmetric():
        raise UsageError("Pfaffian of a non-antisymmetric matrix")
    n = m.rows
    nv = m.nvars
    a = m.entries

    @lru_cache(maxsize=None)
    def pf(idx: tuple[int, ...]) -> Poly:
        if not idx:
            return Poly.const(nv, 1)
        i0 = idx[0]
        total = Poly.zero(nv)
        for j in range(1, len(idx)):
            e = a[i0][idx[j]]
            if not e:
                continue
            rest = idx[1:j] + idx[j + 1:]
            sub = pf(rest)
            if not sub:
                continue
            term = e * sub
            total = total + term if j % 2 == 1 else total - term
        return total

    return pf(tuple(range(n)))


def _bareiss(entries: list[list[Poly]], nv: int, det_mode: bool):
    """Fraction-free elimination with full pivoting.

    Returns (rank, sign-corrected last pivot) where the last pivot is the
    determinant when the matrix is square and nonsingular.
    """
    a = [list(r) for r in entries]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    prev = Poly.const(nv, 1)
    sign = 1
    rank = 0
    for k in range(min(nrows, ncols)):
        piv = None
        for j in range(k, ncols):
            for i in range(k, nrows):
                if a[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != k:
            a[k], a[i] = a[i], a[k]
            sign = -sign
        if j != k:
            for row in a:
                row[k], row[j] = row[j], row[k]
            sign = -sign
        rank += 1
        akk = a[k][k]
        for i in range(k + 1, nrows):
            aik = a[i][k]
            for j in range(k + 1, ncols):
                num = akk * a[i][j] - aik * a[k][j]
                a[i][j] = exact_divide(num, prev) if num else num
            a[i][k] = Poly.zero(nv)
        prev = akk
    if det_mode:
        if rank < nrows:
            return rank, Poly.zero(nv)
        return rank, prev.scale(sign)
    return rank, None


def poly_det(m: PolyMatrix) -> Poly:
    """Determinant by fraction-free (Bareiss) elimination."""
    if m.rows != m.cols:
        raise UsageError("determinant of a non-square matrix")
    if m.rows == 0:
        return Poly.const(m.nvars, 1)
    return _bareiss([list(r) for r in m.entries], m.nvars, True)[1]


def random_points(nvars: int, seed: int, count: int = RANDOM_EVALUATIONS) -> list[list[Rat]]:
    rng = random.Random(seed)
    return [[mpq(rng.randint(-COORD_BOUND, COORD_BOUND)) for _ in range(nvars)] for _ in range(count)]


def poly_rank(m: PolyMatrix, seed: int = 0, mode: str = "randomized") -> int:
    """Generic rank over the fraction field.

    ``randomized``: max rank over seeded random integer evaluations (a lower
    bound, exact with overwhelming probability).  ``symbolic``: exact rank by
    fraction-free elimination over the polynomial ring.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    if mode == "symbolic":
        return _bareiss([list(r) for r in m.entries], m.nvars, False)[0]
    if mode != "randomized":
        raise UsageError(f"unknown rank mode {mode!r}")
    best = 0
    full = min(m.rows, m.cols)
    for pt in random_points(m.nvars, seed):
        best = max(best, rat_rank(m.evaluate(pt)))
        if best == full:
            break
    return best
