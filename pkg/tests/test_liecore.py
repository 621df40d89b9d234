from __future__ import annotations

import json
import random

import pytest

from semicenter.catalog import catalog_get
from semicenter.exactpoly import Poly, parse_poly, rat
from semicenter.liecore import (
    InvalidAlgebra,
    JacobiViolation,
    LieAlgebra,
    Subspace,
    abelian,
    ad_action,
    ad_basis,
    ad_matrix,
    algebra_from_dict,
    algebra_from_matrix,
    algebra_to_dict,
    bracket,
    center,
    centralizer,
    derived_algebra,
    derived_series,
    direct_sum,
    embedding_images,
    is_ideal,
    is_solvable,
    is_subalgebra,
    is_unimodular,
    load_algebra,
    poisson_bracket,
    restrict,
    trace_form,
)


def sl2():
    return LieAlgebra("sl2", ["h", "x", "y"], {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}})


def test_bracket_antisymmetry_and_values():
    L = sl2()
    h, x, y = (L.basis_vector(k) for k in range(3))
    assert bracket(L, h, x) == [0, 2, 0]
    assert bracket(L, x, h) == [0, -2, 0]
    assert bracket(L, x, y) == [1, 0, 0]
    assert bracket(L, x, x) == [0, 0, 0]


def test_jacobi_violation_names_triple():
    with pytest.raises(JacobiViolation) as exc:
        LieAlgebra("bad", ["a", "b", "c"], {(0, 1): {0: 1}, (0, 2): {1: 1}})
    assert exc.value.triple == (1, 2, 3)
    assert "(a, b, c)" in str(exc.value)
    assert any(exc.value.residual)


def test_json_jacobi_violation_is_invalid_algebra():
    data = {
        "dim": 3,
        "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "c": 1}]}, {"i": 1, "j": 3, "terms": [{"k": 2, "c": 1}]}],
    }
    with pytest.raises(InvalidAlgebra):
        algebra_from_dict(data)


@pytest.mark.parametrize(
    "data",
    [
        {"dim": 2, "brackets": [{"i": 2, "j": 1, "terms": []}]},
        {"dim": 2, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "c": 1}]}]},
        {"dim": 2, "flags": {"algebraic": "maybe"}},
        {"dim": 2, "basis": ["a"]},
        {"brackets": []},
        {"dim": 2, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 1, "c": "x"}]}]},
    ],
)
def test_malformed_input_rejected(data):
    with pytest.raises(InvalidAlgebra):
        algebra_from_dict(data)


def test_file_round_trip(tmp_path):
    L = catalog_get("L9_10").algebra
    data = algebra_to_dict(L)
    assert data["split"] == {"levi": [1, 2, 3], "module": [4, 5, 6, 7, 8, 9]}
    path = tmp_path / "l.json"
    path.write_text(json.dumps(data))
    M = load_algebra(path)
    assert M.structure == L.structure and M.flags == L.flags and M.split == L.split
    assert algebra_to_dict(M) == data


def test_flags_default_unknown():
    assert algebra_from_dict({"dim": 1}).flags["algebraic"] == "unknown"


def test_matrix_transcription_rejects_non_antisymmetric():
    with pytest.raises(InvalidAlgebra):
        algebra_from_matrix("m", ["0 & x_1", "x_1 & 0"])


@pytest.mark.parametrize("name", [f"L9_{k}" for k in range(1, 12)])
def test_catalog_structure_matrices_transcribed(name):
    L = catalog_get(name).algebra
    B = L.structure_matrix()
    assert B.is_antisymmetric()
    # the sl(2) block is standard in every entry
    assert L.bracket_basis(1, 2) == {0: 1}
    assert L.bracket_basis(0, 1) == {1: 2}
    assert L.bracket_basis(0, 2) == {2: -2}
    assert is_unimodular(L)


def test_ad_matrix_columns():
    L = sl2()
    m = ad_matrix(L, L.basis_vector(0))
    assert [m[k][1] for k in range(3)] == [0, 2, 0]
    assert [m[k][2] for k in range(3)] == [0, 0, -2]


def test_derived_center_solvable():
    assert derived_algebra(catalog_get("L9_1").algebra).dim == 7
    assert derived_algebra(catalog_get("L9_2").algebra).dim == 8
    assert derived_algebra(catalog_get("L9_3").algebra).dim == 8
    assert derived_algebra(catalog_get("L9_4").algebra).is_whole()
    assert center(catalog_get("L9_1").algebra) == Subspace.coordinate(9, [3])
    assert center(catalog_get("L9_5").algebra).dim == 2
    assert center(catalog_get("L9_7").algebra).dim == 0
    L2 = catalog_get("example_4_3_L2").algebra
    assert is_solvable(L2)
    assert [s.dim for s in derived_series(L2)] == [4, 3, 0]
    assert not is_solvable(sl2())
    # weights 1, 1, -2 on x2, x3, x4 cancel
    assert is_unimodular(L2)
    assert not is_unimodular(catalog_get("nonabelian2").algebra)
    assert trace_form(catalog_get("nonabelian2").algebra).coords == (1, 0)


def test_centralizer_and_ideals():
    L = catalog_get("L9_1").algebra
    x8 = L.basis_vector(7)
    assert centralizer(L, x8) == Subspace.coordinate(9, range(8))
    assert is_ideal(L, Subspace.coordinate(9, range(8)))
    assert is_subalgebra(L, Subspace.coordinate(9, [0, 1, 2]))
    assert not is_ideal(L, Subspace.coordinate(9, [0, 1, 2]))


def test_subspace_operations():
    a = Subspace.span(3, [[1, 1, 0], [2, 2, 0]])
    b = Subspace.span(3, [[0, 1, 1]])
    assert a.dim == 1
    assert (a + b).dim == 2
    assert a.intersect(b).dim == 0
    assert (a + b).contains([1, 2, 1])
    assert not (a + b).contains([1, 0, 0])
    assert a.describe(["p", "q", "r"]) == "<p + q>"


def test_direct_sum_and_restrict():
    L = direct_sum(sl2(), catalog_get("example_4_3_L2").algebra)
    assert L.dim == 7 and L.summands == ((0, 1, 2), (3, 4, 5, 6))
    assert L.flags["algebraic"] == "unknown"
    sq = direct_sum(catalog_get("nonabelian2").algebra, catalog_get("nonabelian2").algebra)
    assert sq.basis == ("x_1", "y_1", "x_2", "y_2")
    assert sq.flags["algebraic"] == "yes"
    assert direct_sum(abelian(0), sl2()).dim == 3
    s = Subspace.coordinate(4, [1, 2, 3])
    M = restrict(catalog_get("example_4_3_L2").algebra, s)
    assert M.dim == 3 and M.is_abelian()
    assert embedding_images(catalog_get("example_4_3_L2").algebra, s)[0] == Poly.var(4, 1)


def test_ad_action_matches_poisson_bracket():
    L = catalog_get("L9_4").algebra
    f = parse_poly("x1*x4*x6 + x5*x9^2 - 3*x2", L.basis)
    for k in range(L.dim):
        assert ad_basis(L, k, f) == poisson_bracket(L, Poly.var(9, k), f)
    v = [1, 0, 2, 0, 0, -1, 0, 0, 3]
    assert ad_action(L, v, f) == sum(
        (ad_basis(L, k, f).scale(rat(c)) for k, c in enumerate(v) if c), Poly.zero(9)
    )


def _random_poly(rng: random.Random, n: int) -> Poly:
    terms = {}
    for _ in range(rng.randint(1, 4)):
        m = [0] * n
        for _ in range(rng.randint(0, 3)):
            m[rng.randrange(n)] += 1
        terms[tuple(m)] = rat(rng.randint(-5, 5))
    return Poly(n, terms)


@pytest.mark.parametrize("name", ["L9_3", "L9_9", "example_4_3"])
def test_poisson_bracket_laws_on_seeded_triples(name):
    L = catalog_get(name).algebra
    rng = random.Random(f"poisson-{name}")
    for _ in range(100):
        f, g, h = (_random_poly(rng, L.dim) for _ in range(3))
        fg = poisson_bracket(L, f, g)
        assert fg == -poisson_bracket(L, g, f)
        assert poisson_bracket(L, f, g * h) == poisson_bracket(L, f, g) * h + g * poisson_bracket(L, f, h)
        jac = (
            poisson_bracket(L, f, poisson_bracket(L, g, h))
            + poisson_bracket(L, g, poisson_bracket(L, h, f))
            + poisson_bracket(L, h, poisson_bracket(L, f, g))
        )
        assert not jac
