import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_p, satisfaction_table
from graphbell.catalog import CATALOG, beta_masks, catalog_entry, catalog_lookup
from graphbell.graph_state import GraphSpec
from graphbell.lhv import (
    BellOperator,
    LHVAssignment,
    LHVError,
    affine_code_reduction,
    brute_force_bound,
    classical_bound,
    direct_bound,
    satisfied_count,
    slot_name,
)

SMALL = [e.graph() for e in CATALOG if e.n <= 4] + [GraphSpec.from_edges(3, [(1, 2), (2, 3)], "lc3")]
FIVE = [e.graph() for e in CATALOG if e.n == 5]


@st.composite
def small_operators(draw, graphs=SMALL):
    g = draw(st.sampled_from(graphs))
    masks = draw(st.sets(st.integers(1, (1 << g.n) - 1), min_size=1))
    return BellOperator(g, tuple(masks))


@settings(max_examples=400, deadline=None)
@given(small_operators())
def test_fast_bound_matches_brute_force(op):
    fast, brute = classical_bound(op), brute_force_bound(op)
    assert fast.p == brute.p
    assert fast.witness == brute.witness


@settings(max_examples=300, deadline=None)
@given(small_operators(FIVE))
def test_fast_bound_matches_direct_enumeration_n5(op):
    fast, ref = classical_bound(op), direct_bound(op)
    assert (fast.p, fast.bound) == (ref.p, ref.bound)
    assert fast.witness == ref.witness


@settings(max_examples=400, deadline=None)
@given(small_operators(SMALL + FIVE))
def test_bound_invariants(op):
    res = classical_bound(op)
    assert res.bound == 2 * res.p - op.q
    assert res.bound % 2 == op.q % 2
    assert res.p >= -(-op.q // 2)
    assert satisfied_count(res.witness, op) == res.p


@pytest.mark.parametrize("name", ["ghz3", "ghz4", "lc4"])
def test_all_subsets_against_dense_oracle(name):
    g = catalog_lookup(name)
    table = satisfaction_table(g)
    m = (1 << g.n) - 1
    subsets = np.array([[(s >> j) & 1 for j in range(m)] for s in range(1, 1 << m)])
    expected = oracle_p(table, subsets)
    for s in range(1, 1 << m, 97):
        op = BellOperator(g, tuple(j + 1 for j in range(m) if s >> j & 1))
        assert classical_bound(op).p == expected[s - 1]


@pytest.mark.parametrize("name,q,p", [("ghz3", 4, 3), ("ghz5", 16, 10)])
def test_mermin_closed_form(name, q, p):
    e = catalog_entry(name)
    res = classical_bound(BellOperator(e.graph(), tuple(beta_masks(e))))
    assert (len(beta_masks(e)), res.p) == (q, p)
    n = e.n
    assert q == 2 ** (n - 1) and p == 2 ** (n - 2) + 2 ** ((n - 3) // 2)


def test_ghz3_witness_is_lexicographically_least():
    g = catalog_lookup("ghz3")
    res = classical_bound(BellOperator(g, (1, 3, 5, 7)))
    assert res.witness.as_slot_dict() == {"X1": 1, "Y1": 1, "Y2": 1, "Z2": 1, "Y3": 1, "Z3": 1}


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.name)
def test_full_group_code_rank(entry):
    g = entry.graph()
    code = affine_code_reduction(BellOperator(g, tuple(range(1, 1 << g.n))))
    assert code.rank == 2 * g.n - 1


def test_operator_validation():
    g = catalog_lookup("ghz3")
    with pytest.raises(LHVError):
        BellOperator(g, ())
    with pytest.raises(LHVError):
        BellOperator(g, (0, 1))
    with pytest.raises(LHVError):
        BellOperator(g, (1, 1))
    with pytest.raises(LHVError):
        BellOperator(g, (8,))
    assert BellOperator(g, (5, 1)).term_masks == (1, 5)


def test_assignment_errors_and_slot_names():
    a = LHVAssignment({(0, "X"): 1})
    with pytest.raises(LHVError):
        a[1, "Z"]
    assert slot_name(0) == "X1" and slot_name(5) == "Z2"
    with pytest.raises(LHVError):
        brute_force_bound(BellOperator(catalog_lookup("ghz5"), (1,)))
