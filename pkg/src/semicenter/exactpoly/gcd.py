"""Multivariate gcd over Q by recursive primitive PRS.

Variables are eliminated in index order: the main variable at each level
is the smallest-index variable present, coefficients live in the ring of
the remaining variables and their gcds are computed recursively.
"""

from __future__ import annotations

from typing import Iterable

from .poly import Poly, divides, exact_divide


def _coeffs_in(p: Poly, v: int) -> dict[int, Poly]:
    """Coefficients of ``p`` viewed as a polynomial in variable ``v``."""
    out: dict[int, dict] = {}
    for m, c in p.terms.items():
        k = m[v]
        m0 = m[:v] + (0,) + m[v + 1:]
        out.setdefault(k, {})[m0] = c
    return {k: Poly._raw(p.nvars, t) for k, t in out.items()}


def _deg_in(p: Poly, v: int) -> int:
    return max(m[v] for m in p.terms)


def _var_power(n: int, v: int, k: int) -> Poly:
    e = [0] * n
    e[v] = k
    return Poly.monomial(tuple(e))


def _content_in(p: Poly, v: int) -> Poly:
    g = None
    for c in sorted(_coeffs_in(p, v).values(), key=len):
        g = c.normalized() if g is None else _gcd(g, c.normalized())
        if g.is_constant():
            return Poly.const(p.nvars, 1)
    return g


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    db = _deg_in(b, v)
    lcb = _coeffs_in(b, v)[db]
    r = a
    while r:
        dr = _deg_in(r, v)
        if dr < db:
            break
        lcr = _coeffs_in(r, v)[dr]
        r = (r * lcb - lcr * _var_power(r.nvars, v, dr - db) * b).normalized()
    return r


def _gcd(a: Poly, b: Poly) -> Poly:
    # a, b nonzero and normalized
    n = a.nvars
    if a.is_constant() or b.is_constant():
        return Poly.const(n, 1)
    if len(a) > len(b):
        a, b = b, a
    if divides(a, b):
        return a
    va, vb = a.variables(), b.variables()
    v = min(va | vb)
    if v not in va:
        return _gcd(a, _content_in(b, v))
    if v not in vb:
        return _gcd(_content_in(a, v), b)
    ca, cb = _content_in(a, v), _content_in(b, v)
    pa = exact_divide(a, ca).normalized()
    pb = exact_divide(b, cb).normalized()
    gc = _gcd(ca, cb)
    if _deg_in(pa, v) < _deg_in(pb, v):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, v)
        if not r:
            g = pb
            break
        if _deg_in(r, v) == 0:
            g = Poly.const(n, 1)
            break
        pa, pb = pb, exact_divide(r, _content_in(r, v)).normalized()
    return (gc * g).normalized()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor in normal form (primitive, positive leading coefficient).

    ``gcd(p, 0)`` is the normal form of ``p``; ``gcd(0, 0)`` is ``0``.
    """
    a._check(b)
    if not a:
        return b.normalized()
    if not b:
        return a.normalized()
    return _gcd(a.normalized(), b.normalized())


def gcd_many(polys: Iterable[Poly], nvars: int, stop_at_one: bool = True) -> Poly:
    g = Poly.zero(nvars)
    for p in polys:
        g = poly_gcd(g, p)
        if stop_at_one and g.is_constant() and g:
            return g
    return g
