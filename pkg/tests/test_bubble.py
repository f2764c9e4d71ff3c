from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import brute_alpha, brute_omega, frozen_corpus, gen_params
from ububble.bubble import (
    END,
    START,
    ConstructionState,
    PropertyViolation,
    build_model,
    column_alpha_bounds,
    compute_alpha,
    compute_prev,
    max_clique,
    merge_almost_twins,
    model_to_intervals,
    structural_report,
)
from ububble.core import (
    Bubble,
    Kind,
    Representation,
    UBubbleModel,
    graph_of_model,
    graph_of_representation,
    model_from_lists,
    validate_model,
)
from ububble.gen import GenParams, random_representation
from ububble.maxcut import counterexample_model

CLAW = Representation.from_triples([(1, "++", -1), (2, "++", 0), (3, "--", 0), (4, "++", 1)])


# construction: worked examples --------------------------------------------------


def test_single_interval():
    m = build_model(Representation.from_triples([(7, "++", 0)]))
    assert m.columns == ((Bubble(pp=(7,)),),)


def test_claw_construction():
    m = build_model(CLAW)
    assert m.columns == (
        (Bubble(pp=(1,)),),
        (Bubble(pp=(2,), mm=(3,)),),
        (Bubble(pp=(4,)),),
    )
    bubbles, unit = merge_almost_twins(CLAW)
    state = ConstructionState(bubbles, unit, debug_properties=True)
    for i in range(len(bubbles)):
        state.process(i)
    # both arcs between consecutive column tops carry the level mark
    assert state.path() == [0, 1, 2]
    assert state.level == {0, 1}


def test_disjoint_pair_lands_in_different_rows():
    rep = Representation.from_triples([(0, "++", 0), (1, "++", Fraction(3, 2))])
    m = build_model(rep)
    assert m.k == 2
    pos = m.positions()
    assert (pos[0].row, pos[0].col) == (1, 1) and (pos[1].row, pos[1].col) == (2, 2)
    assert graph_of_model(m).m == 0


def test_twins_collapse_into_one_bubble():
    rep = random_representation(GenParams(n=4, seed=3, twin_rate=1.0))
    m = build_model(rep)
    assert m.k == 1 and m.rows == 1
    assert graph_of_model(m).m == 6


def test_prev_pointers_on_a_small_chain():
    rep = Representation.from_triples(
        [(0, "++", 0), (1, "++", Fraction(1, 2)), (2, "++", 1), (3, "++", Fraction(7, 4))]
    )
    bubbles, unit = merge_almost_twins(rep)
    assert [b.key for b in bubbles] == [0, 2, 4, 7] and unit == 4
    # 0 and 1/2 start before the first right end; 1 equals r(0); 7/4 has r(1/2)=3/2 as last end before it
    assert compute_prev(bubbles, unit) == [START, START, 0, 1]


def test_property_checker_detects_a_broken_path():
    bubbles, unit = merge_almost_twins(CLAW)
    state = ConstructionState(bubbles, unit, debug_properties=True)
    state.process(0)
    state.process(1)
    state.level.discard(0)  # drop a level mark behind the builder's back
    with pytest.raises(PropertyViolation) as info:
        state.check_properties()
    assert info.value.prop == 3
    assert END not in state.path()


# construction: roundtrips -------------------------------------------------------


@given(gen_params(max_n=40))
def test_roundtrip_a(p):
    rep = random_representation(p)
    m = build_model(rep, debug_properties=p.n <= 20)
    assert validate_model(m) == []
    assert graph_of_model(m) == graph_of_representation(rep)


@given(gen_params(max_n=40))
def test_roundtrip_a_per_component(p):
    rep = random_representation(p)
    m = build_model(rep, per_component=True)
    assert validate_model(m) == []
    assert graph_of_model(m) == graph_of_representation(rep)


@given(gen_params(max_n=40))
def test_roundtrip_b(p):
    m = build_model(random_representation(p))
    back = model_to_intervals(m)
    assert graph_of_representation(back) == graph_of_model(m)


@given(gen_params(max_n=30))
def test_columns_follow_sigma_and_size_sanity(p):
    rep = random_representation(p)
    bubbles, unit = merge_almost_twins(rep)
    state = ConstructionState(bubbles, unit)
    for i in range(len(bubbles)):
        state.process(i)
    assert state.col == sorted(state.col)
    m = build_model(rep)
    assert m.k <= p.n and m.rows <= p.n


def test_roundtrip_b_on_handmade_models():
    for m in (
        counterexample_model(),
        model_from_lists([[{"pp": [1]}], [{"pp": [2], "mm": [3]}], [{"pp": [4]}]]),
        model_from_lists([[{"mp": [0]}, {"pm": [1]}], [{}, {"pp": [2], "mm": [3]}]]),
    ):
        assert validate_model(m) == []
        assert graph_of_representation(model_to_intervals(m)) == graph_of_model(m)


def test_reverse_construction_lefts():
    rep = model_to_intervals(UBubbleModel(((Bubble(pp=(5,)),),)))
    assert [(iv.vertex, iv.left, iv.kind) for iv in rep] == [(5, 1, Kind.PP)]
    lefts = {iv.vertex: iv.left for iv in model_to_intervals(counterexample_model())}
    assert lefts == {1: 1, 2: Fraction(3, 2), 3: 2, 4: 2, 5: 2, 6: Fraction(5, 2)}
    assert all(iv.kind is Kind.PM for iv in model_to_intervals(counterexample_model()))


# structural bounds --------------------------------------------------------------


def test_alpha_examples():
    assert compute_alpha(CLAW) == 3
    assert compute_alpha(model_to_intervals(counterexample_model())) == 2
    assert compute_alpha(Representation.from_triples([(0, "--", 0)])) == 1


def test_max_clique_examples():
    assert max_clique(counterexample_model()) == 4
    assert max_clique(UBubbleModel(((Bubble(pp=(0, 1), mm=(2,)), Bubble(pm=(3,))),))) == 4
    claw = build_model(CLAW)
    assert max_clique(claw) == 2


def test_column_alpha_bounds_examples():
    path = model_from_lists([[{"pp": [v]}] for v in range(4)])
    assert column_alpha_bounds(path) == (2, 4)
    g = graph_of_model(path)
    assert brute_alpha(g) == 2  # lower end is reached by a path
    clique = model_from_lists([[{"pp": [0, 1, 2, 3]}]])
    assert column_alpha_bounds(clique) == (1, 1)
    assert brute_alpha(graph_of_model(clique)) == 1


def test_structural_bounds_on_corpus():
    for _, m in frozen_corpus()[:200]:
        g = graph_of_model(m)
        alpha = brute_alpha(g)
        lo, hi = column_alpha_bounds(m)
        assert lo == math.ceil(m.k / 2) and hi == m.k
        assert lo <= alpha <= hi
        assert compute_alpha(model_to_intervals(m)) == alpha
        assert max_clique(m) == brute_omega(g)


@given(gen_params(max_n=12))
def test_alpha_and_omega_match_brute_force(p):
    rep = random_representation(p)
    g = graph_of_representation(rep)
    m = build_model(rep)
    assert compute_alpha(rep) == brute_alpha(g)
    assert max_clique(m) == brute_omega(g)


def test_structural_report_fields():
    rep = structural_report(counterexample_model())
    assert (rep.k, rep.r, rep.alpha, rep.omega) == (2, 2, 2, 4)
    assert (rep.columns_bound, rep.rows_bound, rep.alpha_bound, rep.clique_bound) == (5, 6, 7, 5)
    assert rep.phi is None and rep.best == 5


@given(st.integers(1, 9))
def test_clique_column(n):
    m = UBubbleModel(((Bubble(pp=tuple(range(n))),),))
    assert max_clique(m) == n
