"""Sparse multivariate polynomials over Q.

A :class:`Poly` maps exponent tuples to nonzero rationals.  Terms are
iterated in graded-lex order with ``x1 > x2 > ... > xn``.
"""

from __future__ import annotations

from functools import reduce
from math import gcd as igcd, lcm as ilcm
from typing import Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq

from .rat import ONE, ZERO, Rat, rat, rat_str

Monomial = tuple[int, ...]


class UsageError(ValueError):
    """Raised when an operation is called outside its domain."""


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_divide` when the quotient is not a polynomial."""


class _NegInfDegree:
    """Degree of the zero polynomial.

    Compares below every integer but refuses arithmetic, so it can never
    leak into a degree sum unnoticed.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NEG_INF"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("NEG_INF")

    def _no_arith(self, *args):
        raise TypeError("arithmetic on the degree of the zero polynomial")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = _no_arith
    __int__ = __index__ = _no_arith


NEG_INF = _NegInfDegree()


def glex_key(m: Monomial) -> tuple[int, Monomial]:
    """Sort key: larger key = larger monomial in graded-lex order."""
    return (sum(m), m)


class Poly:
    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        if nvars < 0:
            raise UsageError("negative variable count")
        self.nvars = nvars
        clean: dict[Monomial, Rat] = {}
        if terms:
            for m, c in terms.items():
                m = tuple(int(e) for e in m)
                if len(m) != nvars or any(e < 0 for e in m):
                    raise UsageError(f"bad exponent vector {m} for {nvars} variables")
                c = rat(c)
                if c:
                    clean[m] = clean.get(m, ZERO) + c
                    if not clean[m]:
                        del clean[m]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Rat]) -> "Poly":
        # trusted constructor: exponent tuples valid, coefficients nonzero mpq
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        c = rat(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int, coeff=1) -> "Poly":
        if not 0 <= i < nvars:
            raise UsageError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): coeff})

    @classmethod
    def monomial(cls, m: Monomial, coeff=1) -> "Poly":
        return cls(len(m), {tuple(m): coeff})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "Poly":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = rat(c)
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(n, terms)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.nvars in self.terms)

    def constant_value(self) -> Rat:
        return self.terms.get((0,) * self.nvars, ZERO)

    def degree(self):
        """Total degree, or :data:`NEG_INF` for the zero polynomial."""
        if not self.terms:
            return NEG_INF
        return max(sum(m) for m in self.terms)

    def degree_in(self, i: int):
        if not self.terms:
            return NEG_INF
        return max(m[i] for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def variables(self) -> set[int]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def sorted_terms(self) -> list[tuple[Monomial, Rat]]:
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: glex_key(t[0]), reverse=True)

    def __iter__(self) -> Iterator[tuple[Monomial, Rat]]:
        return iter(self.sorted_terms())

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise UsageError("zero polynomial has no leading term")
        return max(self.terms, key=glex_key)

    def leading_coefficient(self) -> Rat:
        return self.terms[self.leading_monomial()]

    def coefficient(self, m: Monomial) -> Rat:
        return self.terms.get(tuple(m), ZERO)

    # arithmetic

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise UsageError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def scale(self, c) -> "Poly":
        c = rat(c)
        if not c:
            return Poly.zero(self.nvars)
        return Poly._raw(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars)
        out: dict[Monomial, Rat] = {}
        get = out.get
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = get(m)
                out[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.nvars, {m: c for m, c in out.items() if c})

    def __rmul__(self, other) -> "Poly":
        return self.scale(other)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise UsageError("exponent must be a nonnegative integer")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, Poly):
            return exact_divide(self, other)
        c = rat(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(ONE / c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        try:
            c = rat(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.terms == ({(0,) * self.nvars: c} if c else {})

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # calculus and evaluation

    def diff(self, i: int) -> "Poly":
        """Formal partial derivative with respect to variable ``i`` (0-based)."""
        if not 0 <= i < self.nvars:
            raise UsageError(f"variable index {i} out of range")
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                m2 = m[:i] + (e - 1,) + m[i + 1:]
                out[m2] = c * e
        return Poly._raw(self.nvars, out)

    def evaluate(self, point: Sequence) -> Rat:
        if len(point) != self.nvars:
            raise UsageError(f"point has {len(point)} coordinates, expected {self.nvars}")
        pt = [rat(v) for v in point]
        total = ZERO
        for m, c in self.terms.items():
            t = c
            for v, e in zip(pt, m):
                if e:
                    t = t * v**e
            total += t
        return total

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable ``i`` by ``images[i]`` (all in a common ring)."""
        if len(images) != self.nvars:
            raise UsageError("need one image per variable")
        if not images:
            return self
        target = images[0].nvars
        result = Poly.zero(target)
        cache: dict[tuple[int, int], Poly] = {}
        for m, c in self.terms.items():
            t = Poly.const(target, c)
            for i, e in enumerate(m):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = images[i] ** e
                    t = t * cache[key]
            result = result + t
        return result

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.nvars, {m: c for m, c in self.terms.items() if sum(m) == d})

    # normal forms

    def content(self) -> Rat:
        """Positive rational c with ``self / c`` a primitive integer polynomial."""
        if not self.terms:
            return ZERO
        nums = [int(c.numerator) for c in self.terms.values()]
        dens = [int(c.denominator) for c in self.terms.values()]
        return mpq(reduce(igcd, nums), reduce(ilcm, dens))

    def normalized(self) -> "Poly":
        """Primitive integer multiple with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self.scale(ONE / c)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        return self.scale(ONE / self.leading_coefficient())

    # text

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.nvars)
        if len(names) != self.nvars:
            raise UsageError("need one name per variable")
        if not self.terms:
            return "0"
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            a = -c if neg else c
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = rat_str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = rat_str(a) + "*" + "*".join(factors)
            if k == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.to_text()!r})"


def default_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def exact_divide(a: Poly, b: Poly) -> Poly:
    """Return q with ``a == q * b`` or raise :class:`NotDivisible`."""
    a._check(b)
    if not b.terms:
        raise UsageError("division by the zero polynomial")
    if not a.terms:
        return Poly.zero(a.nvars)
    n = a.nvars
    lm_b = b.leading_monomial()
    lc_b = b.terms[lm_b]
    b_rest = [(m, c) for m, c in b.terms.items() if m != lm_b]
    rem = dict(a.terms)
    quot: dict[Monomial, Rat] = {}
    # heap-free: recompute leading monomial each step; remainders stay small in practice
    while rem:
        lm = max(rem, key=glex_key)
        shift = tuple(x - y for x, y in zip(lm, lm_b))
        if any(e < 0 for e in shift):
            raise NotDivisible("leading term not divisible")
        coef = rem.pop(lm) / lc_b
        quot[shift] = coef
        for m, c in b_rest:
            mm = tuple(x + y for x, y in zip(m, shift))
            v = rem.get(mm, ZERO) - coef * c
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return Poly._raw(n, quot)


def divides(b: Poly, a: Poly) -> bool:
    try:
        exact_divide(a, b)
    except NotDivisible:
        return False
    return True


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree ``d`` in ``n`` variables, descending graded-lex."""
    if n == 0:
        return [()] if d == 0 else []
    out: list[Monomial] = []

    def rec(prefix: list[int], i: int, left: int) -> None:
        if i == n - 1:
            out.append(tuple(prefix) + (left,))
            return
        for e in range(left, -1, -1):
            prefix.append(e)
            rec(prefix, i + 1, left - e)
            prefix.pop()

    rec([], 0, d)
    return out


def count_monomials(n: int, d: int) -> int:
    from math import comb

    if n == 0:
        return 1 if d == 0 else 0
    return comb(n + d - 1, d)


def poly_sum(polys: Iterable[Poly], nvars: int) -> Poly:
    acc: dict[Monomial, Rat] = {}
    for p in polys:
        for m, c in p.terms.items():
            acc[m] = acc.get(m, ZERO) + c
    return Poly._raw(nvars, {m: c for m, c in acc.items() if c})
