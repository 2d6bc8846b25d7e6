from fractions import Fraction

import pytest

from graphbell.catalog import (
    CATALOG,
    GraphError,
    beta_masks,
    catalog_entry,
    catalog_lookup,
    catalog_names,
    expand_beta,
    validate_catalog,
)
from graphbell.lhv import BellOperator, classical_bound
from graphbell.metrics import format_settings, settings_signature

# rows whose printed generators do not follow from any single edge list
KNOWN_GENERATOR_TYPOS = {("y5", 2), ("h6", 5), ("h6", 6), ("no17", 1)}

# listed operators whose bound on the catalog graph differs from the printed one
LISTED_BOUND_EXCEPTIONS = {"h6": 8, "no16": 18, "no19": 17}


def test_catalog_has_eighteen_connected_entries():
    assert [e.number for e in CATALOG] == list(range(2, 20))
    assert len(catalog_names()) == 18
    for e in CATALOG:
        g = e.graph()
        assert g.is_connected() and g.n == e.n
        if e.q is not None:
            assert e.D == Fraction(e.q, e.bound)


def test_aliases():
    assert catalog_entry("GHZ3").number == 2
    assert catalog_entry("no11").name == "h6"
    assert catalog_lookup("no18").name == "rc6"
    with pytest.raises(GraphError):
        catalog_entry("no1")


def test_generator_discrepancies_are_exactly_the_known_ones():
    found = {(d.graph, d.generator) for d in validate_catalog()}
    assert found == KNOWN_GENERATOR_TYPOS


def test_no19_generators_match_table():
    assert not [d for d in validate_catalog() if d.graph == "no19"]


def test_expand_beta_ghz3():
    assert expand_beta("g1(1+g2)(1+g3)", 3) == {1: 1, 3: 1, 5: 1, 7: 1}


def test_expand_beta_signed_terms_and_sets():
    assert expand_beta("S-1", 2) == {1: 1, 2: 1, 3: 1}
    assert expand_beta("ODD", 3) == {1: 1, 2: 1, 4: 1, 7: 1}
    assert expand_beta("g1g1", 2) == {0: 1}
    assert expand_beta("g1-g1", 2) == {}


@pytest.mark.parametrize("text", ["g1(", "g7", "g1)", "x"])
def test_expand_beta_errors(text):
    with pytest.raises(ValueError):
        expand_beta(text, 3)


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.name)
def test_listed_operator_term_count(entry):
    masks = beta_masks(entry)
    expected = entry.q if entry.q is not None else 30
    assert len(masks) == expected


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.name)
def test_listed_operator_bound(entry):
    op = BellOperator(entry.graph(), tuple(beta_masks(entry)))
    expected = LISTED_BOUND_EXCEPTIONS.get(entry.name, entry.bound)
    assert classical_bound(op).bound == expected


def test_listed_h6_operator_has_table_settings():
    e = catalog_entry("h6")
    op = BellOperator(e.graph(), tuple(beta_masks(e)))
    assert format_settings(settings_signature(op)) == e.settings
