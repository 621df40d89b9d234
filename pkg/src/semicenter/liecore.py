"""Lie algebras given by rational structure constants.

Basis indices are 0-based in the Python API and 1-based in the JSON file
format and in every user-facing message.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exactpoly import ONE, ZERO, Poly, PolyMatrix, Rat, parse_poly, rat, rat_kernel, rat_str, rref
from .exactpoly.poly import Monomial, UsageError

Vector = list  # list of Rat, one coordinate per basis element

ALGEBRAIC_VALUES = ("yes", "no", "unknown")


class InvalidAlgebra(ValueError):
    """Malformed algebra description."""


class JacobiViolation(InvalidAlgebra):
    def __init__(self, triple: tuple[int, int, int], residual: Sequence[Rat], names=None):
        self.triple = triple  # 1-based
        self.residual = [rat(c) for c in residual]
        i, j, k = triple
        label = f"(x{i}, x{j}, x{k})"
        if names:
            label = f"({names[i - 1]}, {names[j - 1]}, {names[k - 1]})"
        res = ", ".join(rat_str(c) for c in self.residual)
        super().__init__(f"Jacobi identity fails on triple {label} = {triple}: residual [{res}]")


class LieAlgebra:
    """Finite-dimensional Lie algebra over Q.

    ``structure`` maps ``(i, j)`` with ``i < j`` to ``{k: c}``, the
    coefficients of ``[x_i, x_j]``.  Construction validates the Jacobi
    identity; instances are treated as immutable.
    """

    __slots__ = (
        "name",
        "dim",
        "basis",
        "structure",
        "flags",
        "split",
        "summands",
        "_ad",
        "_memo",
    )

    def __init__(
        self,
        name: str,
        basis: Sequence[str],
        structure: Mapping[tuple[int, int], Mapping[int, object]],
        flags: Mapping[str, str] | None = None,
        split: Mapping[str, Sequence[int]] | None = None,
        summands: Sequence[Sequence[int]] | None = None,
        validate_jacobi: bool = True,
    ):
        self.name = name
        self.basis = tuple(basis)
        self.dim = n = len(self.basis)
        if len(set(self.basis)) != n:
            raise InvalidAlgebra("basis names must be distinct")
        clean: dict[tuple[int, int], dict[int, Rat]] = {}
        for (i, j), vec in structure.items():
            if not (0 <= i < j < n):
                raise InvalidAlgebra(f"bracket pair ({i + 1}, {j + 1}) must satisfy 1 <= i < j <= {n}")
            v = {}
            for k, c in vec.items():
                if not 0 <= k < n:
                    raise InvalidAlgebra(f"bracket [x{i + 1}, x{j + 1}] has term index {k + 1} out of range")
                c = rat(c)
                if c:
                    v[k] = v.get(k, ZERO) + c
            v = {k: c for k, c in sorted(v.items()) if c}
            if v:
                clean[(i, j)] = v
        self.structure = dict(sorted(clean.items()))
        flags = dict(flags or {})
        alg = flags.get("algebraic", "unknown")
        if alg not in ALGEBRAIC_VALUES:
            raise InvalidAlgebra(f"flags.algebraic must be one of {ALGEBRAIC_VALUES}, got {alg!r}")
        flags["algebraic"] = alg
        self.flags = flags
        self.split = None
        if split is not None:
            levi = tuple(sorted(split["levi"]))
            module = tuple(sorted(split["module"]))
            if any(not 0 <= k < n for k in levi + module):
                raise InvalidAlgebra("split marker index out of range")
            self.split = {"levi": levi, "module": module}
        self.summands = None
        if summands is not None:
            parts = tuple(tuple(sorted(s)) for s in summands)
            if sorted(k for s in parts for k in s) != list(range(n)):
                raise InvalidAlgebra("summands must partition the basis")
            self.summands = parts
        # ad tables: _ad[i][j] = list of (k, c) for [x_i, x_j]
        ad = [[[] for _ in range(n)] for _ in range(n)]
        for (i, j), vec in self.structure.items():
            ad[i][j] = [(k, c) for k, c in vec.items()]
            ad[j][i] = [(k, -c) for k, c in vec.items()]
        self._ad = ad
        self._memo = {}
        if validate_jacobi:
            validate(self)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    def bracket_basis(self, i: int, j: int) -> dict[int, Rat]:
        return dict(self._ad[i][j])

    def key(self) -> tuple:
        """Hashable description, used for memoization and digests."""
        return (
            self.name,
            self.basis,
            tuple((ij, tuple(v.items())) for ij, v in self.structure.items()),
            tuple(sorted(self.flags.items())),
        )

    def is_abelian(self) -> bool:
        return not self.structure

    def structure_matrix(self) -> PolyMatrix:
        n = self.dim
        rows = [[Poly.zero(n) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if self._ad[i][j]:
                    rows[i][j] = Poly(n, {_unit(n, k): c for k, c in self._ad[i][j]})
        return PolyMatrix(rows, n)

    def basis_vector(self, i: int) -> Vector:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def sub_algebra(self, indices: Sequence[int], name: str | None = None) -> "LieAlgebra":
        """Algebra on a subset of basis elements whose span is a subalgebra."""
        idx = list(indices)
        pos = {k: a for a, k in enumerate(idx)}
        struct = {}
        for a, b in combinations(range(len(idx)), 2):
            vec = self._ad[idx[a]][idx[b]]
            out = {}
            for k, c in vec:
                if k not in pos:
                    raise InvalidAlgebra("index set does not span a subalgebra")
                out[pos[k]] = c
            if out:
                struct[(a, b)] = out
        return LieAlgebra(
            name or f"{self.name}[{','.join(str(k + 1) for k in idx)}]",
            [self.basis[k] for k in idx],
            struct,
        )


def _unit(n: int, k: int) -> Monomial:
    e = [0] * n
    e[k] = 1
    return tuple(e)


# validation


def validate(L: LieAlgebra) -> None:
    """Raise :class:`JacobiViolation` for the first failing triple i<j<k."""
    n = L.dim
    for i, j, k in combinations(range(n), 3):
        res = [ZERO] * n
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, coef in L._ad[a][b]:
                for t, c2 in L._ad[m][c]:
                    res[t] += coef * c2
        if any(res):
            raise JacobiViolation((i + 1, j + 1, k + 1), res, L.basis)


# brackets and actions


def bracket(L: LieAlgebra, u: Sequence, v: Sequence) -> Vector:
    n = L.dim
    out = [ZERO] * n
    u = [rat(a) for a in u]
    v = [rat(b) for b in v]
    for i in range(n):
        if not u[i]:
            continue
        for j in range(n):
            if not v[j] or i == j:
                continue
            f = u[i] * v[j]
            for k, c in L._ad[i][j]:
                out[k] += f * c
    return out


def ad_matrix(L: LieAlgebra, x: Sequence) -> list[list[Rat]]:
    """Matrix of ad x; column j holds the coordinates of [x, x_j]."""
    n = L.dim
    cols = [bracket(L, x, L.basis_vector(j)) for j in range(n)]
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def ad_basis_terms(L: LieAlgebra, i: int, terms: Mapping[Monomial, Rat]) -> dict[Monomial, Rat]:
    """ad x_i applied to a polynomial given by its term dict."""
    out: dict[Monomial, Rat] = {}
    row = L._ad[i]
    for m, c in terms.items():
        for j, e in enumerate(m):
            if not e or not row[j]:
                continue
            f = c * e
            base = list(m)
            base[j] -= 1
            for k, ck in row[j]:
                base[k] += 1
                mm = tuple(base)
                base[k] -= 1
                out[mm] = out.get(mm, ZERO) + f * ck
    return {m: c for m, c in out.items() if c}


def ad_action(L: LieAlgebra, x: Sequence, f: Poly) -> Poly:
    """The derivation of S(g) extending ad x."""
    if f.nvars != L.dim:
        raise UsageError("polynomial is not in the algebra's variables")
    acc: dict[Monomial, Rat] = {}
    for i, xi in enumerate(x):
        xi = rat(xi)
        if not xi:
            continue
        for m, c in ad_basis_terms(L, i, f.terms).items():
            acc[m] = acc.get(m, ZERO) + xi * c
    return Poly._raw(L.dim, {m: c for m, c in acc.items() if c})


def ad_basis(L: LieAlgebra, i: int, f: Poly) -> Poly:
    return Poly._raw(L.dim, ad_basis_terms(L, i, f.terms))


def poisson_bracket(L: LieAlgebra, f: Poly, g: Poly) -> Poly:
    """{f, g} = sum_ij [x_i, x_j] df/dx_i dg/dx_j."""
    if f.nvars != L.dim or g.nvars != L.dim:
        raise UsageError("polynomials are not in the algebra's variables")
    acc = Poly.zero(L.dim)
    for i in f.variables():
        acc = acc + f.diff(i) * ad_basis(L, i, g)
    return acc


# subspaces and functionals


@dataclass(frozen=True)
class Subspace:
    """Subspace of g in canonical reduced row echelon form."""

    n: int
    rows: tuple[tuple[Rat, ...], ...]

    @classmethod
    def span(cls, n: int, vectors: Iterable[Sequence]) -> "Subspace":
        vecs = [[rat(x) for x in v] for v in vectors]
        for v in vecs:
            if len(v) != n:
                raise UsageError("vector length mismatch")
        red, _ = rref(vecs) if vecs else ([], [])
        return cls(n, tuple(tuple(r) for r in red))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, ())

    @classmethod
    def whole(cls, n: int) -> "Subspace":
        return cls.span(n, [[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def coordinate(cls, n: int, indices: Iterable[int]) -> "Subspace":
        return cls.span(n, [[ONE if i == j else ZERO for j in range(n)] for i in indices])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def vectors(self) -> list[list[Rat]]:
        return [list(r) for r in self.rows]

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.rows]

    def contains(self, v: Sequence) -> bool:
        v = [rat(x) for x in v]
        for r, p in zip(self.rows, self.pivots()):
            if v[p]:
                f = v[p]
                v = [a - f * b for a, b in zip(v, r)]
        return not any(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def coordinates(self, v: Sequence) -> list[Rat]:
        """Coordinates of ``v`` in the echelon basis (``v`` must lie in the span)."""
        if not self.contains(v):
            raise UsageError("vector not in subspace")
        return [rat(v[p]) for p in self.pivots()]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.n, self.vectors() + other.vectors())

    def intersect(self, other: "Subspace") -> "Subspace":
        # v = sum a_i r_i = sum b_j s_j
        a, b = self.vectors(), other.vectors()
        if not a or not b:
            return Subspace.zero(self.n)
        cols = a + [[-x for x in s] for s in b]
        mat = [[cols[c][i] for c in range(len(cols))] for i in range(self.n)]
        ker = rat_kernel(mat)
        out = []
        for k in ker:
            v = [ZERO] * self.n
            for coef, r in zip(k[: len(a)], a):
                if coef:
                    v = [x + coef * y for x, y in zip(v, r)]
            out.append(v)
        return Subspace.span(self.n, out)

    def is_whole(self) -> bool:
        return self.dim == self.n

    def to_json(self) -> list[list[str]]:
        return [[rat_str(x) for x in r] for r in self.rows]

    def describe(self, names: Sequence[str]) -> str:
        if not self.rows:
            return "0"
        parts = []
        for r in self.rows:
            p = Poly.linear(r)
            parts.append(p.to_text(names))
        return "<" + ", ".join(parts) + ">"


@dataclass(frozen=True)
class LinFunc:
    """Linear functional on g, by its values on the basis."""

    coords: tuple[Rat, ...]

    @classmethod
    def of(cls, values: Iterable) -> "LinFunc":
        return cls(tuple(rat(v) for v in values))

    @classmethod
    def zero(cls, n: int) -> "LinFunc":
        return cls((ZERO,) * n)

    def __call__(self, v: Sequence) -> Rat:
        return sum((a * rat(b) for a, b in zip(self.coords, v)), ZERO)

    def __add__(self, other: "LinFunc") -> "LinFunc":
        return LinFunc(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "LinFunc":
        c = rat(c)
        return LinFunc(tuple(a * c for a in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> list[str]:
        return [rat_str(x) for x in self.coords]

    def describe(self, names: Sequence[str]) -> str:
        if self.is_zero():
            return "0"
        return ", ".join(f"{nm}:{rat_str(c)}" for nm, c in zip(names, self.coords) if c)


def subalgebra_bracket_span(L: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    vecs = [bracket(L, u, v) for u in a.vectors() for v in b.vectors()]
    return Subspace.span(L.dim, vecs)


def is_ideal(L: LieAlgebra, s: Subspace) -> bool:
    whole = Subspace.whole(L.dim)
    return s.contains_subspace(subalgebra_bracket_span(L, whole, s))


def is_subalgebra(L: LieAlgebra, s: Subspace) -> bool:
    return s.contains_subspace(subalgebra_bracket_span(L, s, s))


def is_commutative(L: LieAlgebra, s: Subspace) -> bool:
    return subalgebra_bracket_span(L, s, s).dim == 0


def derived_algebra(L: LieAlgebra) -> Subspace:
    if "derived" not in L._memo:
        whole = Subspace.whole(L.dim)
        L._memo["derived"] = subalgebra_bracket_span(L, whole, whole)
    return L._memo["derived"]


def derived_series(L: LieAlgebra) -> list[Subspace]:
    """g, [g,g], [[g,g],[g,g]], ... up to stabilization (the fixed point is listed once)."""
    series = [Subspace.whole(L.dim)]
    while True:
        nxt = subalgebra_bracket_span(L, series[-1], series[-1])
        if nxt == series[-1]:
            return series
        series.append(nxt)
        if nxt.dim == 0:
            return series


def is_solvable(L: LieAlgebra) -> bool:
    return derived_series(L)[-1].dim == 0


def centralizer(L: LieAlgebra, u: Sequence) -> Subspace:
    """C(u) = {x : [u, x] = 0}."""
    return Subspace.span(L.dim, rat_kernel(ad_matrix(L, u)))


def center(L: LieAlgebra) -> Subspace:
    n = L.dim
    rows = []
    # x in Z iff [x_j, x] = 0 for all j: stack the ad x_j matrices
    for j in range(n):
        rows.extend(ad_matrix(L, L.basis_vector(j)))
    if not rows:
        return Subspace.zero(0)
    return Subspace.span(n, rat_kernel(rows))


def trace_form(L: LieAlgebra) -> LinFunc:
    """tau(x) = tr(ad x)."""
    n = L.dim
    vals = []
    for i in range(n):
        vals.append(sum((c for j in range(n) for k, c in L._ad[i][j] if k == j), ZERO))
    return LinFunc(tuple(vals))


def is_unimodular(L: LieAlgebra) -> bool:
    return trace_form(L).is_zero()


def restrict(L: LieAlgebra, s: Subspace, name: str | None = None) -> LieAlgebra:
    """The subalgebra ``s`` as a Lie algebra on its echelon basis."""
    vecs = s.vectors()
    struct = {}
    for a, b in combinations(range(len(vecs)), 2):
        w = bracket(L, vecs[a], vecs[b])
        if not s.contains(w):
            raise UsageError("subspace is not a subalgebra")
        coords = s.coordinates(w)
        v = {k: c for k, c in enumerate(coords) if c}
        if v:
            struct[(a, b)] = v
    names = [f"e{k + 1}" for k in range(len(vecs))]
    return LieAlgebra(name or f"{L.name}|sub", names, struct)


def embedding_images(L: LieAlgebra, s: Subspace) -> list[Poly]:
    """Images in S(g) of the variables of S(s) for the echelon basis of ``s``."""
    return [Poly.linear(r) for r in s.rows]


def direct_sum(L1: LieAlgebra, L2: LieAlgebra, name: str | None = None) -> LieAlgebra:
    n1 = L1.dim
    names1, names2 = list(L1.basis), list(L2.basis)
    if set(names1) & set(names2):
        names1 = [f"{a}_1" for a in names1]
        names2 = [f"{a}_2" for a in names2]
    struct: dict[tuple[int, int], dict[int, Rat]] = {}
    for (i, j), v in L1.structure.items():
        struct[(i, j)] = dict(v)
    for (i, j), v in L2.structure.items():
        struct[(i + n1, j + n1)] = {k + n1: c for k, c in v.items()}
    a1, a2 = L1.flags["algebraic"], L2.flags["algebraic"]
    if "no" in (a1, a2):
        alg = "no"
    elif a1 == a2 == "yes":
        alg = "yes"
    else:
        alg = "unknown"
    if L1.dim == 0:
        return L2
    if L2.dim == 0:
        return L1
    return LieAlgebra(
        name or f"{L1.name}+{L2.name}",
        names1 + names2,
        struct,
        flags={"algebraic": alg},
        summands=[list(range(n1)), list(range(n1, n1 + L2.dim))],
    )


def abelian(n: int, name: str | None = None) -> LieAlgebra:
    return LieAlgebra(name or f"abelian{n}", [f"x{i + 1}" for i in range(n)], {}, flags={"algebraic": "yes"})


# file format


def algebra_from_dict(data: Mapping) -> LieAlgebra:
    try:
        name = str(data.get("name", "unnamed"))
        dim = int(data["dim"])
        basis = data.get("basis") or [f"x{i + 1}" for i in range(dim)]
        if len(basis) != dim:
            raise InvalidAlgebra(f"basis has {len(basis)} names but dim is {dim}")
        struct: dict[tuple[int, int], dict[int, Rat]] = {}
        for entry in data.get("brackets", []):
            i, j = int(entry["i"]), int(entry["j"])
            if not (1 <= i < j <= dim):
                raise InvalidAlgebra(f"bracket pair ({i}, {j}) must satisfy 1 <= i < j <= {dim}")
            if (i - 1, j - 1) in struct:
                raise InvalidAlgebra(f"bracket pair ({i}, {j}) listed twice")
            vec: dict[int, Rat] = {}
            for t in entry.get("terms", []):
                k = int(t["k"])
                if not 1 <= k <= dim:
                    raise InvalidAlgebra(f"term index {k} out of range in bracket ({i}, {j})")
                vec[k - 1] = vec.get(k - 1, ZERO) + rat(str(t["c"]))
            struct[(i - 1, j - 1)] = vec
        flags = dict(data.get("flags") or {})
        split = data.get("split")
        if split is not None:
            split = {"levi": [int(k) - 1 for k in split["levi"]], "module": [int(k) - 1 for k in split["module"]]}
        summands = data.get("summands")
        if summands is not None:
            summands = [[int(k) - 1 for k in s] for s in summands]
    except InvalidAlgebra:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidAlgebra(f"malformed algebra description: {exc}") from exc
    return LieAlgebra(name, basis, struct, flags=flags, split=split, summands=summands)


def algebra_to_dict(L: LieAlgebra) -> dict:
    out = {
        "name": L.name,
        "dim": L.dim,
        "basis": list(L.basis),
        "brackets": [
            {"i": i + 1, "j": j + 1, "terms": [{"k": k + 1, "c": rat_str(c)} for k, c in v.items()]}
            for (i, j), v in L.structure.items()
        ],
        "flags": dict(sorted(L.flags.items())),
    }
    if L.split is not None:
        out["split"] = {"levi": [k + 1 for k in L.split["levi"]], "module": [k + 1 for k in L.split["module"]]}
    if L.summands is not None:
        out["summands"] = [[k + 1 for k in s] for s in L.summands]
    return out


def load_algebra(path) -> LieAlgebra:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidAlgebra(f"{path}: invalid JSON: {exc}") from exc
    return algebra_from_dict(data)


def algebra_from_matrix(
    name: str,
    rows: Sequence[str],
    basis: Sequence[str] | None = None,
    **kwargs,
) -> LieAlgebra:
    """Build an algebra from the rows of its structure matrix ``([x_i, x_j])``.

    Each row is an ``&``-separated list of linear entries such as
    ``-2x_3`` or ``x_6``; the matrix must be antisymmetric.
    """
    n = len(rows)
    names = [f"x_{i + 1}" for i in range(n)]
    cells = [[c.strip() for c in r.split("&")] for r in rows]
    if any(len(c) != n for c in cells):
        raise InvalidAlgebra("structure matrix must be square")
    mat = [[_parse_entry(e, names) for e in row] for row in cells]
    for i in range(n):
        for j in range(n):
            if mat[i][j] != -mat[j][i]:
                raise InvalidAlgebra(f"structure matrix not antisymmetric at ({i + 1}, {j + 1})")
    struct = {}
    for i in range(n):
        for j in range(i + 1, n):
            p = mat[i][j]
            if not p.is_homogeneous() or (p and p.degree() != 1):
                raise InvalidAlgebra(f"entry ({i + 1}, {j + 1}) is not linear")
            struct[(i, j)] = {m.index(1): c for m, c in p.terms.items()}
    return LieAlgebra(name, basis or [f"x{i + 1}" for i in range(n)], struct, **kwargs)


def _parse_entry(text: str, names: Sequence[str]) -> Poly:
    # "2x_3" -> "2*x_3"
    text = re.sub(r"^([+-]?\d+)(x_)", r"\1*\2", text)
    return parse_poly(text, names)
