"""Built-in algebras with their expected values, and the regression driver."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import cache

from .certify import (
    CertificationFailure,
    certify_polynomial_center,
    coregularity_obstruction,
    frobenius_analysis,
    rationality_verdict,
)
from .exactpoly import Poly, UsageError, parse_poly
from .invsearch import (
    DEFAULT_MONOMIAL_CAP,
    build_table,
    in_span,
    invariants_of_degree,
    jacobian_rank,
    truncation_estimate,
)
from .liecore import LieAlgebra, Subspace, ad_basis, algebra_from_matrix, algebra_to_dict, direct_sum
from .structura import fundamental_semiinvariant, index, magic_number, sample_frobenius_semiradical

# Structure matrices ([x_i, x_j]) of the eleven 9-dimensional entries, rows as transcribed.
_MATRICES = {
    "L9_1": (
        "0 &2x_2 &-2x_3 &0 &0 &x_6 &-x_7 &0 &0",
        "-2x_2 &0 &x_1 &0 &0 &0 &x_6 &0 &0",
        "2x_3 &-x_1 &0 &0 &0 &x_7 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &x_4",
        "-x_6 &0 &-x_7 &0 &0 &0 &x_4 &0 &0",
        "x_7 &-x_6 &0 &0 &0 &-x_4 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &x_5",
        "0 &0 &0 &0 &-x_4 &0 &0 &-x_5 &0",
    ),
    "L9_2": (
        "0 &2x_2 &-2x_3 &0 &x_5 &-x_6 &0 &0 &0",
        "-2x_2 &0 &x_1 &0 &0 &x_5 &0 &0 &0",
        "2x_3 &-x_1 &0 &0 &x_6 &0 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "-x_5 &0 &-x_6 &0 &0 &x_4 &0 &0 &0",
        "x_6 &-x_5 &0 &0 &-x_4 &0 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &x_4 &-x_7",
        "0 &0 &0 &0 &0 &0 &-x_4 &0 &x_8",
        "0 &0 &0 &0 &0 &0 &x_7 &-x_8 &0",
    ),
    "L9_3": (
        "0 &2x_2 &-2x_3 &0 &x_5 &-x_6 &x_7 &-x_8 &0",
        "-2x_2 &0 &x_1 &0 &0 &x_5 &0 &x_7 &0",
        "2x_3 &-x_1 &0 &0 &x_6 &0 &x_8 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "-x_5 &0 &-x_6 &0 &0 &0 &0 &0 &0",
        "x_6 &-x_5 &0 &0 &0 &0 &0 &0 &0",
        "-x_7 &0 &-x_8 &0 &0 &0 &0 &x_4 &x_5",
        "x_8 &-x_7 &0 &0 &0 &0 &-x_4 &0 &x_6",
        "0 &0 &0 &0 &0 &0 &-x_5 &-x_6 &0",
    ),
    "L9_4": (
        "0 &2x_2 &-2x_3 &0 &2x_5 &0 &-2x_7 &x_8 &-x_9",
        "-2x_2 &0 &x_1 &0 &0 &2x_5 &x_6 &0 &x_8",
        "2x_3 &-x_1 &0 &0 &x_6 &2x_7 &0 &x_9 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "-2x_5 &0 &-x_6 &0 &0 &0 &0 &0 &0",
        "0 &-2x_5 &-2x_7 &0 &0 &0 &0 &0 &0",
        "2x_7 &-x_6 &0 &0 &0 &0 &0 &0 &0",
        "-x_8 &0 &-x_9 &0 &0 &0 &0 &0 &x_4",
        "x_9 &-x_8 &0 &0 &0 &0 &0 &-x_4 &0",
    ),
    "L9_5": (
        "0 &2x_2 &-2x_3 &x_4 &-x_5 &x_6 &-x_7 &0 &0",
        "-2x_2 &0 &x_1 &0 &x_4 &0 &x_6 &0 &0",
        "2x_3 &-x_1 &0 &x_5 &0 &x_7 &0 &0 &0",
        "-x_4 &0 &-x_5 &0 &x_8 &0 &0 &0 &0",
        "x_5 &-x_4 &0 &-x_8 &0 &0 &0 &0 &0",
        "-x_6 &0 &-x_7 &0 &0 &0 &x_9 &0 &0",
        "x_7 &-x_6 &0 &0 &0 &-x_9 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
    ),
    "L9_6": (
        "0 &2x_2 &-2x_3 &0 &0 &x_6 &-x_7 &x_8 &-x_9",
        "-2x_2 &0 &x_1 &0 &0 &0 &x_6 &0 &x_8",
        "2x_3 &-x_1 &0 &0 &0 &x_7 &0 &x_9 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "0 &0 &0 &0 &0 &0 &0 &0 &0",
        "-x_6 &0 &-x_7 &0 &0 &0 &0 &0 &x_4",
        "x_7 &-x_6 &0 &0 &0 &0 &0 &-x_4 &0",
        "-x_8 &0 &-x_9 &0 &0 &0 &x_4 &0 &x_5",
        "x_9 &-x_8 &0 &0 &0 &-x_4 &0 &-x_5 &0",
    ),
    "L9_7": (
        "0 &2x_2 &-2x_3 &2x_4 &0 &-2x_6 &2x_7 &0 &-2x_9",
        "-2x_2 &0 &x_1 &0 &x_4 &2x_5 &0 &2x_7 &x_8",
        "2x_3 &-x_1 &0 &2x_5 &x_6 &0 &x_8 &2x_9 &0",
        "-2x_4 &0 &-2x_5 &0 &0 &0 &0 &0 &0",
        "0 &-x_4 &-x_6 &0 &0 &0 &0 &0 &0",
        "2x_6 &-2x_5 &0 &0 &0 &0 &0 &0 &0",
        "-2x_7 &0 &-x_8 &0 &0 &0 &0 &x_4 &x_5",
        "0 &-2x_7 &-2x_9 &0 &0 &0 &-x_4 &0 &x_6",
        "2x_9 &-x_8 &0 &0 &0 &0 &-x_5 &-x_6 &0",
    ),
    "L9_8": (
        "0 &2x_2 &-2x_3 &x_4 &-x_5 &x_6 &-x_7 &x_8 &-x_9",
        "-2x_2 &0 &x_1 &0 &x_4 &0 &x_6 &0 &x_8",
        "2x_3 &-x_1 &0 &x_5 &0 &x_7 &0 &x_9 &0",
        "-x_4 &0 &-x_5 &0 &0 &0 &0 &0 &0",
        "x_5 &-x_4 &0 &0 &0 &0 &0 &0 &0",
        "-x_6 &0 &-x_7 &0 &0 &0 &0 &0 &0",
        "x_7 &-x_6 &0 &0 &0 &0 &0 &0 &0",
        "-x_8 &0 &-x_9 &0 &0 &0 &0 &0 &0",
        "x_9 &-x_8 &0 &0 &0 &0 &0 &0 &0",
    ),
    "L9_9": (
        "0 &2x_2 &-2x_3 &2x_4 &0 &-2x_6 &2x_7 &0 &-2x_9",
        "-2x_2 &0 &x_1 &0 &2x_4 &x_5 &0 &2x_7 &x_8",
        "2x_3 &-x_1 &0 &x_5 &2x_6 &0 &x_8 &2x_9 &0",
        "-2x_4 &0 &-x_5 &0 &0 &0 &0 &0 &0",
        "0 &-2x_4 &-2x_6 &0 &0 &0 &0 &0 &0",
        "2x_6 &-x_5 &0 &0 &0 &0 &0 &0 &0",
        "-2x_7 &0 &-x_8 &0 &0 &0 &0 &0 &0",
        "0 &-2x_7 &-2x_9 &0 &0 &0 &0 &0 &0",
        "2x_9 &-x_8 &0 &0 &0 &0 &0 &0 &0",
    ),
    "L9_10": (
        "0 &2x_2 &-2x_3 &3x_4 &x_5 &-x_6 &-3x_7 &x_8 &-x_9",
        "-2x_2 &0 &x_1 &0 &3x_4 &2x_5 &x_6 &0 &x_8",
        "2x_3 &-x_1 &0 &x_5 &2x_6 &3x_7 &0 &x_9 &0",
        "-3x_4 &0 &-x_5 &0 &0 &0 &0 &0 &0",
        "-x_5 &-3x_4 &-2x_6 &0 &0 &0 &0 &0 &0",
        "x_6 &-2x_5 &-3x_7 &0 &0 &0 &0 &0 &0",
        "3x_7 &-x_6 &0 &0 &0 &0 &0 &0 &0",
        "-x_8 &0 &-x_9 &0 &0 &0 &0 &0 &0",
        "x_9 &-x_8 &0 &0 &0 &0 &0 &0 &0",
    ),
    "L9_11": (
        "0 &2x_2 &-2x_3 &5x_4 &3x_5 &x_6 &-x_7 &-3x_8 &-5x_9",
        "-2x_2 &0 &x_1 &0 &5x_4 &4x_5 &3x_6 &2x_7 &x_8",
        "2x_3 &-x_1 &0 &x_5 &2x_6 &3x_7 &4x_8 &5x_9 &0",
        "-5x_4 &0 &-x_5 &0 &0 &0 &0 &0 &0",
        "-3x_5 &-5x_4 &-2x_6 &0 &0 &0 &0 &0 &0",
        "-x_6 &-4x_5 &-3x_7 &0 &0 &0 &0 &0 &0",
        "x_7 &-3x_6 &-4x_8 &0 &0 &0 &0 &0 &0",
        "3x_8 &-2x_7 &-5x_9 &0 &0 &0 &0 &0 &0",
        "5x_9 &-x_8 &0 &0 &0 &0 &0 &0 &0",
    ),
}

PUBLISHED = "published"
COMPUTED = "computed"

_L9_GENERATORS = {
    "L9_1": ["x4", "2*x4*x8 - x5^2", "x1^2*x4 + 2*x1*x6*x7 + 4*x2*x3*x4 + 2*x2*x7^2 - 2*x3*x6^2"],
    "L9_2": ["x4", "x4*x9 + x7*x8", "x1^2*x4 + 2*x1*x5*x6 + 4*x2*x3*x4 + 2*x2*x6^2 - 2*x3*x5^2"],
    "L9_3": [
        "x4",
        "x4*x9 - x5*x8 + x6*x7",
        "2*x1*x5*x6 + 2*x2*x6^2 - 2*x3*x5^2 + x4*x9^2 - 2*x5*x8*x9 + 2*x6*x7*x9",
    ],
    "L9_4": [
        "x4",
        "4*x5*x7 - x6^2",
        "x1*x4*x6 + 2*x2*x4*x7 - 2*x3*x4*x5 - x5*x9^2 + x6*x8*x9 - x7*x8^2",
    ],
    "L9_5": [
        "x8",
        "x9",
        "2*x1*x4*x5*x9 + 2*x1*x6*x7*x8 + x1^2*x8*x9 + 4*x2*x3*x8*x9 + 2*x2*x7^2*x8 + 2*x2*x5^2*x9"
        " - 2*x3*x4^2*x9 - 2*x3*x6^2*x8 + 2*x4*x5*x6*x7 - x4^2*x7^2 - x5^2*x6^2",
    ],
    "L9_6": [
        "x4",
        "x5",
        "x1^2*x4^2 + 2*x1*x4*x6*x9 + 2*x1*x4*x7*x8 - 2*x1*x5*x6*x7 + 4*x2*x4*x7*x9 - 2*x2*x5*x7^2"
        " + 4*x2*x3*x4^2 - 4*x3*x4*x6*x8 + 2*x3*x5*x6^2 + x6^2*x9^2 - 2*x6*x7*x8*x9 + x7^2*x8^2",
    ],
    "L9_7": ["x4*x6 - x5^2", "x4*x9 - x5*x8 + x6*x7", "2*x1*x5 + 2*x2*x6 - 2*x3*x4 + 4*x7*x9 - x8^2"],
    "L9_8": ["x4*x7 - x5*x6", "x4*x9 - x5*x8", "x6*x9 - x7*x8"],
    "L9_9": ["4*x4*x6 - x5^2", "4*x7*x9 - x8^2", "2*x4*x9 + 2*x6*x7 - x5*x8"],
    "L9_10": [],
    "L9_11": [],
}

# sampled F(g) as 1-based basis indices
_L9_F = {
    "L9_1": list(range(1, 9)),
    **{f"L9_{k}": list(range(1, 10)) for k in range(2, 8)},
    **{f"L9_{k}": list(range(4, 10)) for k in range(8, 12)},
}

# L9_11 invariant-space dimensions beyond the default degree range
STRETCH_GOLDENS = {"L9_11": {8: 2, 12: 3}}


@dataclass(frozen=True)
class Expected:
    index: int
    magic: int
    p: str
    F_basis: tuple[tuple[str, ...], ...]
    truncation: tuple[tuple[str, ...], ...]
    coregular: bool
    invariant_generators: tuple[str, ...]
    min_invariant_degree: int | None
    verdict_rule: str
    anchors: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    expected: Expected
    description: str

    def generators(self) -> list[Poly]:
        return [parse_poly(t, self.algebra.basis) for t in self.expected.invariant_generators]


def _coord(n: int, idx) -> tuple[tuple[str, ...], ...]:
    return tuple(tuple(r) for r in Subspace.coordinate(n, [k - 1 for k in idx]).to_json())


def _anchors(label: str, computed: tuple[str, ...] = ()) -> dict:
    keys = ("index", "magic", "p", "F_basis", "truncation", "coregular", "invariant_generators",
            "min_invariant_degree", "verdict_rule")
    return {k: f"{COMPUTED if k in computed else PUBLISHED}: {label}" for k in keys}


def _l9(name: str) -> CatalogEntry:
    k = int(name.split("_")[1])
    split = {"levi": [0, 1, 2], "module": list(range(3, 9))} if k >= 8 else None
    L = algebra_from_matrix(name, _MATRICES[name], flags={"algebraic": "yes"}, split=split)
    gens = _L9_GENERATORS[name]
    exp = Expected(
        index=3,
        magic=6,
        p="1",
        F_basis=_coord(9, _L9_F[name]),
        truncation=_coord(9, range(1, 10)),
        coregular=k <= 9,
        invariant_generators=tuple(gens),
        min_invariant_degree=2 if k in (7, 8, 9) else 4 if k >= 10 else 1,
        verdict_rule="R5" if k >= 10 else "R3",
        anchors=_anchors(f"{name} table entry"),
    )
    desc = f"9-dim algebraic Lie algebra {name}: sl(2) plus a 6-dim radical"
    return CatalogEntry(name, L, exp, desc)


def _sl2(name: str = "example_4_3_L1") -> LieAlgebra:
    return LieAlgebra(name, ["h", "x", "y"], {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, flags={"algebraic": "yes"})


def _l2(name: str = "example_4_3_L2") -> LieAlgebra:
    return LieAlgebra(
        name, ["x1", "x2", "x3", "x4"], {(0, 1): {1: 1}, (0, 2): {2: 1}, (0, 3): {3: -2}}, flags={"algebraic": "yes"}
    )


def _nonabelian2(name: str = "nonabelian2") -> LieAlgebra:
    return LieAlgebra(name, ["x", "y"], {(0, 1): {1: 1}}, flags={"algebraic": "yes"})


def _small(name: str) -> CatalogEntry:
    if name == "example_4_3_L1":
        L = _sl2()
        exp = Expected(1, 2, "1", _coord(3, [1, 2, 3]), _coord(3, [1, 2, 3]), True, ("h^2 + 4*x*y",), 2, "R3",
                       _anchors("sl(2) with its Casimir element", ("F_basis", "truncation")))
        return CatalogEntry(name, L, exp, "sl(2) with basis h, x, y")
    if name == "example_4_3_L2":
        L = _l2()
        exp = Expected(
            2, 3, "1", _coord(4, [2, 3, 4]), _coord(4, [2, 3, 4]), False,
            ("x2^2*x4", "x3^2*x4", "x2*x3*x4"), 3, "R1",
            _anchors("solvable 4-dim algebra", ("index", "magic", "p", "F_basis", "truncation")),
        )
        return CatalogEntry(name, L, exp, "solvable 4-dim algebra, [x1,x2] = x2, [x1,x3] = x3, [x1,x4] = -2x4")
    if name == "example_4_3":
        # algebraic flag deliberately left unknown so the direct-product rule is the one exercised
        L = direct_sum(_sl2("sl2"), _l2("L2"), name)
        L = LieAlgebra(name, L.basis, L.structure, flags={"algebraic": "unknown"}, summands=L.summands)
        exp = Expected(
            3, 5, "1", _coord(7, [1, 2, 3, 5, 6, 7]), _coord(7, [1, 2, 3, 5, 6, 7]), False,
            ("h^2 + 4*x*y", "x2^2*x4", "x3^2*x4", "x2*x3*x4"), 2, "R7",
            _anchors("direct product sl(2) + L2", ("index", "magic", "p", "F_basis", "truncation")),
            extras={"relation": ["x2^2*x4", "x3^2*x4", "x2*x3*x4"], "jacobian_rank": 2},
        )
        return CatalogEntry(name, L, exp, "direct product sl(2) + example_4_3_L2")
    if name == "nonabelian2":
        L = _nonabelian2()
        exp = Expected(0, 1, "y", (), _coord(2, [2]), True, (), None, "R1",
                       _anchors("smallest Frobenius algebra", ("index", "magic", "p", "F_basis", "truncation")),
                       extras={"frobenius": True})
        return CatalogEntry(name, L, exp, "2-dim nonabelian algebra, [x, y] = y")
    if name == "nonabelian2_squared":
        L = direct_sum(_nonabelian2("b1"), _nonabelian2("b2"), name)
        exp = Expected(0, 2, "y_1*y_2", (), _coord(4, [2, 4]), True, (), None, "R1",
                       _anchors("direct square of nonabelian2", ("index", "magic", "p", "F_basis", "truncation")),
                       extras={"frobenius": True})
        return CatalogEntry(name, L, exp, "nonabelian2 + nonabelian2")
    if name == "heisenberg":
        L = LieAlgebra(name, ["x", "y", "z"], {(0, 1): {2: 1}}, flags={"algebraic": "yes"})
        exp = Expected(1, 2, "z", _coord(3, [3]), _coord(3, [1, 2, 3]), True, ("z",), 1, "R1",
                       _anchors("3-dim Heisenberg algebra", ("index", "magic", "p", "F_basis", "truncation")))
        return CatalogEntry(name, L, exp, "3-dim Heisenberg algebra, [x, y] = z")
    raise UsageError(f"unknown catalog entry {name!r}")


_SMALL = ("example_4_3_L1", "example_4_3_L2", "example_4_3", "nonabelian2", "nonabelian2_squared", "heisenberg")
_NAMES = tuple(f"L9_{k}" for k in range(1, 12)) + _SMALL


def catalog_list() -> list[str]:
    return list(_NAMES)


@cache
def catalog_get(name: str) -> CatalogEntry:
    if name in _MATRICES:
        return _l9(name)
    if name in _SMALL:
        return _small(name)
    raise UsageError(f"unknown catalog entry {name!r}; known: {', '.join(_NAMES)}")


def catalog_export(name: str) -> dict:
    """The entry in the standard input file format."""
    return algebra_to_dict(catalog_get(name).algebra)


# regression driver


@dataclass
class EntryResult:
    name: str
    checks: dict = field(default_factory=dict)
    diffs: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.diffs

    def check(self, key: str, got, want) -> None:
        self.checks[key] = got
        if got != want:
            self.diffs.append({"check": key, "expected": want, "got": got})

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "checks": self.checks, "diffs": self.diffs}


@dataclass
class RegressionReport:
    max_degree: int
    seed: int
    entries: list[EntryResult]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_json(self) -> dict:
        return {
            "max_degree": self.max_degree,
            "seed": self.seed,
            "ok": self.ok,
            "entries": [e.to_json() for e in self.entries],
        }


def verify_entry(
    name: str,
    D: int = 4,
    seed: int = 0,
    include_stretch: bool = False,
    cap: int = DEFAULT_MONOMIAL_CAP,
) -> EntryResult:
    entry = catalog_get(name)
    L, exp = entry.algebra, entry.expected
    res = EntryResult(name)
    start = time.perf_counter()
    names = L.basis
    res.check("index", index(L, seed), exp.index)
    res.check("magic", magic_number(L, seed), exp.magic)
    p, q = fundamental_semiinvariant(L, seed)
    res.check("p", p.to_text(names), exp.p)
    res.check("p_squared_is_q", (p * p).normalized() == q, True)
    F = sample_frobenius_semiradical(L, seed).subspace
    res.check("F_basis", [list(r) for r in F.to_json()], [list(r) for r in exp.F_basis])
    res.check("truncation", [list(r) for r in truncation_estimate(L, D, cap).to_json()],
              [list(r) for r in exp.truncation])
    table = build_table(L, D, cap)
    mind = table.min_invariant_degree()
    want_mind = exp.min_invariant_degree if exp.min_invariant_degree is not None and exp.min_invariant_degree <= D else None
    res.check("min_invariant_degree", mind, want_mind)

    gens = entry.generators()
    res.check("generators_invariant", all(not ad_basis(L, k, f) for f in gens for k in range(L.dim)), True)
    res.check(
        "generators_in_search_span",
        all(in_span(f, table.invariants[f.degree()]) for f in gens if f.degree() <= D),
        True,
    )
    if exp.extras.get("frobenius"):
        try:
            cert = frobenius_analysis(L, D, seed, table, cap)
            res.check("frobenius_complete", cert.payload["complete"], True)
        except CertificationFailure as exc:
            res.check("frobenius_complete", str(exc), True)
    elif exp.coregular and gens:
        try:
            cert = certify_polynomial_center(L, gens, seed, table)
            res.check("certified_degree_sum", cert.fact("degree_sum"), exp.magic - max(p.degree(), 0))
        except CertificationFailure as exc:
            res.check("certified_degree_sum", str(exc), exp.magic - max(p.degree(), 0))
    if not exp.coregular and name.startswith("L9"):
        obs = coregularity_obstruction(L, table, seed)
        res.check("obstruction", obs is not None, True)
    if "relation" in exp.extras:
        f1, f2, f3 = (parse_poly(t, names) for t in exp.extras["relation"])
        res.check("relation_f1f2_eq_f3sq", f1 * f2 == f3 * f3, True)
        res.check("jacobian_rank", jacobian_rank([f1, f2, f3], seed), exp.extras["jacobian_rank"])
    verdict = rationality_verdict(L, table, seed=seed, cap=cap)
    res.check("verdict_rule", verdict.rule, exp.verdict_rule)
    if include_stretch and name in STRETCH_GOLDENS:
        for d, want in STRETCH_GOLDENS[name].items():
            res.check(f"stretch_dim_Y{d}", len(invariants_of_degree(L, d, max(cap, 10**6))), want)
    res.seconds = time.perf_counter() - start
    return res


def verify_paper(
    D: int = 4,
    seed: int = 0,
    include_stretch: bool = False,
    cap: int = DEFAULT_MONOMIAL_CAP,
    names=None,
) -> RegressionReport:
    """Run the full pipeline on every entry and diff against the expected values."""
    names = list(names) if names is not None else catalog_list()
    return RegressionReport(D, seed, [verify_entry(n, D, seed, include_stretch, cap) for n in names])
