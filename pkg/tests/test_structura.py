from __future__ import annotations

import pytest

from semicenter.catalog import catalog_get, catalog_list
from semicenter.exactpoly import parse_poly
from semicenter.liecore import LinFunc, Subspace, abelian
from semicenter.structura import (
    FROBENIUS_PATIENCE,
    centralizer_bound_check,
    check_cp,
    fundamental_semiinvariant,
    index,
    is_frobenius,
    is_regular,
    magic_number,
    pin_symbolic_index,
    quasi_quadratic,
    sample_frobenius_semiradical,
    stabilizer,
)

ALL = catalog_list()


@pytest.mark.parametrize("name", ALL)
def test_index_parity_and_symbolic_agreement(name):
    L = catalog_get(name).algebra
    i = index(L)
    assert (L.dim - i) % 2 == 0
    assert index(L, mode="symbolic") == i
    assert magic_number(L) == (L.dim + i) // 2


@pytest.mark.parametrize("name", ALL)
def test_p_squared_is_q(name):
    L = catalog_get(name).algebra
    p, q = fundamental_semiinvariant(L)
    assert (p * p).normalized() == q
    assert p.degree() <= (L.dim - index(L)) // 2


def test_small_fundamental_semiinvariants():
    assert fundamental_semiinvariant(catalog_get("nonabelian2").algebra)[0].to_text(["x", "y"]) == "y"
    assert fundamental_semiinvariant(catalog_get("heisenberg").algebra)[0].to_text(["x", "y", "z"]) == "z"
    sq = catalog_get("nonabelian2_squared").algebra
    assert fundamental_semiinvariant(sq)[0].to_text(sq.basis) == "y_1*y_2"
    assert fundamental_semiinvariant(abelian(3))[0].is_constant()


def test_index_values():
    assert index(abelian(4)) == 4
    assert is_frobenius(catalog_get("nonabelian2").algebra)
    assert index(catalog_get("example_4_3_L1").algebra) == 1
    assert index(catalog_get("example_4_3_L2").algebra) == 2


def test_stabilizer_of_explicit_functional():
    L = catalog_get("L9_1").algebra
    xi = LinFunc.of([1, 0, 0, 1, 0, 0, 0, 0, 0])
    assert stabilizer(L, xi) == Subspace.coordinate(9, [0, 3, 7])
    assert is_regular(L, xi)


def test_semiradical_sampling_metadata():
    s = sample_frobenius_semiradical(catalog_get("L9_8").algebra, seed=4)
    assert s.label == "generically exact"
    assert s.regular_samples >= FROBENIUS_PATIENCE
    assert s.subspace == Subspace.coordinate(9, range(3, 9))
    assert quasi_quadratic(catalog_get("L9_2").algebra)
    assert not quasi_quadratic(catalog_get("L9_1").algebra)


def test_centralizer_bound():
    L = catalog_get("L9_1").algebra
    assert centralizer_bound_check(L, L.basis_vector(7))
    assert centralizer_bound_check(L, L.basis_vector(0))  # codim > 1: vacuous


def test_cp_ideal_checks():
    L = catalog_get("L9_10").algebra
    W = Subspace.coordinate(9, range(3, 9))
    cp = check_cp(L, W)
    assert cp.is_cp and cp.is_cpi
    bad = check_cp(catalog_get("L9_1").algebra, Subspace.coordinate(9, range(0, 6)))
    assert not bad.is_cp and bad.reasons


def test_pin_symbolic_index():
    L = catalog_get("L9_7").algebra
    assert pin_symbolic_index(L) == 3 == index(L)


def test_fundamental_semiinvariant_of_frobenius_is_pfaffian_factor():
    L = catalog_get("nonabelian2_squared").algebra
    p, _ = fundamental_semiinvariant(L)
    assert p == parse_poly("y_1*y_2", L.basis)
