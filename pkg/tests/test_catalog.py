from __future__ import annotations

import pytest

from oracles import binary_form_invariant_dim
from semicenter.catalog import (
    COMPUTED,
    PUBLISHED,
    STRETCH_GOLDENS,
    catalog_export,
    catalog_get,
    catalog_list,
    verify_entry,
    verify_paper,
)
from semicenter.exactpoly import UsageError
from semicenter.liecore import ad_basis, algebra_from_dict


def test_listing_is_stable():
    names = catalog_list()
    assert names[:11] == [f"L9_{k}" for k in range(1, 12)]
    assert names == catalog_list()
    assert {"example_4_3_L1", "example_4_3_L2", "example_4_3", "nonabelian2"} <= set(names)


def test_unknown_entry():
    with pytest.raises(UsageError):
        catalog_get("L9_12")


def test_small_entries():
    e = catalog_get("L9_1")
    assert e.expected.index == 3
    l2 = catalog_get("example_4_3_L2")
    assert set(l2.expected.invariant_generators) == {"x2^2*x4", "x3^2*x4", "x2*x3*x4"}
    assert l2.expected.verdict_rule == "R1"
    nb = catalog_get("nonabelian2")
    assert nb.expected.index == 0 and nb.expected.p == "y"


@pytest.mark.parametrize("name", catalog_list())
def test_every_expected_value_is_anchored(name):
    anchors = catalog_get(name).expected.anchors
    assert set(anchors) >= {"index", "magic", "p", "F_basis", "verdict_rule"}
    assert all(a.split(":")[0] in (PUBLISHED, COMPUTED) for a in anchors.values())


@pytest.mark.parametrize("name", catalog_list())
def test_export_reloads_through_validator(name):
    L = catalog_get(name).algebra
    M = algebra_from_dict(catalog_export(name))
    assert M.structure == L.structure
    assert M.split == L.split and M.summands == L.summands and M.flags == L.flags


@pytest.mark.parametrize("name", catalog_list())
def test_listed_generators_are_exact_invariants(name):
    e = catalog_get(name)
    L = e.algebra
    for f in e.generators():
        for k in range(L.dim):
            assert not ad_basis(L, k, f), (f.to_text(L.basis), L.basis[k])


def test_long_generators_transcribed():
    assert len(catalog_get("L9_5").generators()[2].terms) == 11
    assert len(catalog_get("L9_6").generators()[2].terms) == 12


def test_regression_default_run():
    report = verify_paper(D=4, seed=0)
    assert report.ok, [e.to_json() for e in report.entries if not e.ok]
    by = {e.name: e for e in report.entries}
    assert by["L9_10"].checks["min_invariant_degree"] == 4
    assert by["L9_10"].checks["obstruction"] is True
    assert by["example_4_3"].checks["relation_f1f2_eq_f3sq"] is True
    assert by["example_4_3"].checks["jacobian_rank"] == 2


def test_regression_reports_diffs():
    res = verify_entry("L9_1", D=3)
    assert res.ok
    res.check("index", 4, 3)
    assert not res.ok
    assert res.diffs == [{"check": "index", "expected": 3, "got": 4}]


def test_stretch_goldens_agree_with_classical_count():
    # dimensions of degree-d invariants of the binary quintic
    for d, want in STRETCH_GOLDENS["L9_11"].items():
        assert binary_form_invariant_dim(5, d) == want
    assert binary_form_invariant_dim(5, 4) == 1


@pytest.mark.stretch
def test_stretch_l9_11_high_degrees():
    res = verify_entry("L9_11", D=4, include_stretch=True)
    assert res.checks["stretch_dim_Y8"] == 2
    assert res.checks["stretch_dim_Y12"] == 3
    assert res.ok
