from __future__ import annotations

import itertools
import json
import math
import os
import random
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import frozen_corpus, gen_params, naive_maxcut
from ububble.core import Bubble, Cut, Graph, UBubbleModel, ValidationError, cut_size, graph_of_model
from ububble.gen import GenParams, random_model
from ububble.maxcut import (
    FLAWED_CLAIM,
    BorderCut,
    ColumnRef,
    HeavyPart,
    PartSolver,
    SweepStats,
    TooLarge,
    border_cuts,
    counterexample,
    counterexample_model,
    crossing,
    default_threshold,
    heavy_part_maxcut,
    light_pair_value,
    maxcut,
    maxcut_bounded_columns,
    maxcut_bruteforce,
    partition_heavy,
)
from ububble.maxcut import _kernels
from ububble.maxcut.dp import VIRTUAL, _slots, border_members, internal_edges


def complete(n: int) -> Graph:
    return Graph(tuple(range(n)), frozenset(itertools.combinations(range(n), 2)))


def columns_of(model: UBubbleModel):
    return [ColumnRef(j, model.columns[j - 1]) for j in range(1, model.k + 1)]


def sub_graph(g: Graph, keep) -> Graph:
    keep = set(keep)
    return Graph(tuple(keep), frozenset(e for e in g.edges if e[0] in keep and e[1] in keep))


def best_extension(g: Graph, fixed_in: set, free: list) -> int:
    """Max cut of g over cuts containing fixed_in and any subset of free (others outside)."""
    best = -1
    for mask in range(1 << len(free)):
        side = set(fixed_in) | {free[t] for t in range(len(free)) if mask >> t & 1}
        best = max(best, cut_size(g, side))
    return best


def random_border(col: ColumnRef, rnd: random.Random) -> BorderCut:
    return BorderCut(tuple(tuple(rnd.randint(0, x) for x in b.counts()) for b in col.bubbles))


# brute force ----------------------------------------------------------------------


def test_brute_force_examples():
    assert maxcut_bruteforce(graph_of_model(counterexample_model())) == 7
    p4 = Graph((0, 1, 2, 3), frozenset({(0, 1), (1, 2), (2, 3)}))
    assert maxcut_bruteforce(p4) == 3
    assert maxcut_bruteforce(complete(4)) == 4
    assert maxcut_bruteforce(Graph((3,), frozenset())) == 0


def test_brute_force_guard():
    with pytest.raises(TooLarge):
        maxcut_bruteforce(complete(31))


@pytest.mark.parametrize("kernel", [_kernels._brute_numba, _kernels._brute_numpy])
def test_brute_kernels_agree_with_naive_enumeration(kernel):
    for _, m in frozen_corpus()[:120]:
        g = graph_of_model(m)
        value, cut = maxcut_bruteforce(g, with_cut=True, kernel=kernel)
        assert value == naive_maxcut(g) == cut_size(g, cut)


def test_brute_kernels_pick_the_same_witness():
    for _, m in frozen_corpus()[:120]:
        g = graph_of_model(m)
        a = maxcut_bruteforce(g, with_cut=True, kernel=_kernels._brute_numba)
        b = maxcut_bruteforce(g, with_cut=True, kernel=_kernels._brute_numpy)
        assert a == b


# helpers ---------------------------------------------------------------------------


def test_crossing_examples():
    assert crossing(1, 0, 0, 1) == 1
    assert crossing(2, 1, 1, 2) == 5
    assert all(crossing(0, 0, x, y) == 0 for x in range(4) for y in range(4))


def test_default_threshold_is_ceil_sqrt():
    for n in range(1, 200):
        assert default_threshold(n) == math.ceil(math.sqrt(n))


# decomposition -----------------------------------------------------------------------


def _sized_model(sizes):
    vid = itertools.count()
    return UBubbleModel(tuple((Bubble(pp=tuple(next(vid) for _ in range(s))),) for s in sizes))


def test_partition_example_from_column_sizes():
    m = _sized_model((1, 5, 5, 2, 1))
    assert partition_heavy(m).threshold == 4  # ceil(sqrt(14))
    part = partition_heavy(m, threshold=3)
    assert part.describe() == [
        {"left": 1, "right": 4, "heavy": [2, 3]},
        {"left": 4, "right": 5, "heavy": []},
    ]


def test_partition_all_light_and_all_heavy():
    m = _sized_model((1, 2, 1))
    assert [(p["left"], p["right"], p["heavy"]) for p in partition_heavy(m).describe()] == [
        (1, 2, []),
        (2, 3, []),
    ]
    assert partition_heavy(_sized_model((3,)), threshold=3).describe() == [{"left": 1, "right": None, "heavy": []}]
    assert partition_heavy(_sized_model((3,))).describe() == [{"left": None, "right": None, "heavy": [1]}]
    m = _sized_model((9, 9, 9))
    assert partition_heavy(m, threshold=2).describe() == [{"left": None, "right": None, "heavy": [1, 2, 3]}]


@given(gen_params(max_n=30), st.integers(1, 8))
def test_partition_covers_every_column_once(p, t):
    m = random_model(p)
    hp = partition_heavy(m, threshold=t)
    seen = []
    for a, b in zip(hp.parts, hp.parts[1:]):
        assert a.border_right == b.border_left
    for part in hp.parts:
        for c in part.heavy:
            assert c.size > t
            seen.append(c.index)
    seen += [c.index for c in hp.light if not c.virtual]
    assert sorted(seen) == list(range(1, m.k + 1))
    assert all(c.virtual or c.size <= t for c in hp.light)


def test_slots_are_row_major_with_empty_bubbles():
    m = UBubbleModel(
        (
            (Bubble(pp=(0,)), Bubble(pp=(1,))),
            (Bubble(), Bubble(pp=(2,)), Bubble(pp=(3,))),
        )
    )
    part = HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(m)))
    slots = _slots(part, merged=False)
    assert [(s.row, s.c) for s in slots] == [(1, 0), (1, 1), (2, 0), (2, 1), (3, 1)]
    # the level term only fires on a same-row left neighbour
    assert [s.pred for s in slots] == [False, True, False, True, False]


@given(gen_params(max_n=24))
def test_level_term_only_for_same_row_predecessor(p):
    m = random_model(p)
    slots = _slots(HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(m))), merged=False)
    prev = None
    for s in slots:
        assert s.pred == (prev == (s.row, s.c - 1))
        if not s.pred:
            assert s.ztot == 0
        prev = (s.row, s.c)


# border cuts and the light pair -------------------------------------------------------


def test_border_cut_enumeration_and_validation():
    col = ColumnRef(1, (Bubble(pp=(0, 1), mm=(2,)),))
    cuts = border_cuts(col)
    assert len(cuts) == 3 * 2
    assert cuts[0].counts == ((0, 0, 0, 0),) and cuts[-1].counts == ((2, 0, 0, 1),)
    assert border_members(col, BorderCut(((1, 0, 0, 1),))) == [0, 2]
    assert internal_edges(col, BorderCut(((1, 0, 0, 1),))) == 2
    part = HeavyPart(col, VIRTUAL, ())
    with pytest.raises(ValidationError):
        light_pair_value(part, BorderCut(((3, 0, 0, 0),)), BorderCut())


def test_light_pair_examples():
    part = HeavyPart(VIRTUAL, VIRTUAL, ())
    assert light_pair_value(part, BorderCut(), BorderCut()) == 0
    a = ColumnRef(1, (Bubble(pp=(0,)),))
    b = ColumnRef(2, (Bubble(pp=(1,)),))
    part = HeavyPart(a, b, ())
    one, zero = BorderCut(((1, 0, 0, 0),)), BorderCut(((0, 0, 0, 0),))
    assert light_pair_value(part, one, one) == 0
    assert light_pair_value(part, one, zero) == 1


@given(gen_params(max_n=14), st.randoms(use_true_random=False))
def test_light_pair_matches_brute_force(p, rnd):
    m = random_model(p)
    if m.k < 2:
        return
    cols = columns_of(m)
    j = rnd.randrange(m.k - 1)
    a, b = cols[j], cols[j + 1]
    sa, sb = random_border(a, rnd), random_border(b, rnd)
    g = sub_graph(graph_of_model(m), [v for c in (a, b) for bb in c.bubbles for v in bb.vertices])
    side = set(border_members(a, sa)) | set(border_members(b, sb))
    assert light_pair_value(HeavyPart(a, b, ()), sa, sb) == cut_size(g, side)


# the heavy-part table ----------------------------------------------------------------


def test_heavy_part_examples():
    whole = HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(counterexample_model())))
    assert heavy_part_maxcut(whole, BorderCut(), BorderCut()) == 7
    k4 = UBubbleModel(((Bubble(pp=(0, 1), mm=(2, 3)),),))
    part = HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(k4)))
    assert heavy_part_maxcut(part, BorderCut(), BorderCut()) == 4


def test_heavy_part_rejects_bad_borders():
    part = HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(counterexample_model())))
    with pytest.raises(ValidationError):
        heavy_part_maxcut(part, BorderCut(((0, 0, 0, 0),)), BorderCut())


def _random_part(m: UBubbleModel, rnd: random.Random) -> HeavyPart:
    cols = columns_of(m)
    lo = rnd.randrange(m.k)
    hi = rnd.randrange(lo, m.k)
    left = cols[lo - 1] if lo > 0 and rnd.random() < 0.8 else VIRTUAL
    right = cols[hi + 1] if hi + 1 < m.k and rnd.random() < 0.8 else VIRTUAL
    return HeavyPart(left, right, tuple(cols[lo : hi + 1]))


def _part_check(m: UBubbleModel, part: HeavyPart, sl: BorderCut, sr: BorderCut):
    """Brute force over completions of the border cut, on the part's own graph."""
    g_all = graph_of_model(m)
    border_v = [v for c in (part.border_left, part.border_right) for b in c.bubbles for v in b.vertices]
    free = sorted(v for c in part.heavy for b in c.bubbles for v in b.vertices)
    g = sub_graph(g_all, border_v + free)
    fixed = set(border_members(part.border_left, sl)) | set(border_members(part.border_right, sr))
    want = best_extension(g, fixed, free)
    value, cut = heavy_part_maxcut(part, sl, sr, with_cut=True)
    assert value == want
    assert cut_size(g, cut) == value
    assert fixed <= cut.members


@given(gen_params(max_n=12), st.randoms(use_true_random=False))
def test_heavy_part_matches_brute_force_over_completions(p, rnd):
    m = random_model(p)
    part = _random_part(m, rnd)
    sl, sr = random_border(part.border_left, rnd), random_border(part.border_right, rnd)
    _part_check(m, part, sl, sr)


def test_heavy_part_on_corpus_parts():
    rnd = random.Random(11)
    for _, m in frozen_corpus()[:150]:
        if m.n > 12:
            continue
        part = _random_part(m, rnd)
        _part_check(m, part, random_border(part.border_left, rnd), random_border(part.border_right, rnd))


@given(gen_params(max_n=12), st.randoms(use_true_random=False))
def test_numba_and_numpy_tables_agree(p, rnd):
    m = random_model(p)
    part = _random_part(m, rnd)
    sl, sr = random_border(part.border_left, rnd), random_border(part.border_right, rnd)
    solver = PartSolver(part)
    a, _, _ = solver._run(sl, sr, True, kernel=_kernels._dp_step_numba)
    b, _, _ = solver._run(sl, sr, True, kernel=_kernels._dp_step_numpy)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


@given(gen_params(max_n=10))
def test_every_final_state_backtracks_to_a_matching_cut(p):
    m = random_model(p)
    g = graph_of_model(m)
    part = HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(m)))
    solver = PartSolver(part)
    col_of = {v: pos.col for v, pos in m.positions().items()}
    for counts, _a, value, cut in solver.final_states(BorderCut(), BorderCut()):
        assert cut_size(g, cut) == value
        per_col = [0] * m.k
        for v in cut.members:
            per_col[col_of[v] - 1] += 1
        assert tuple(per_col) == counts


def test_final_states_are_exact_per_column_optima():
    rnd = random.Random(2)
    for _, m in frozen_corpus()[:60]:
        if m.n > 10:
            continue
        g = graph_of_model(m)
        vs = list(g.vertices)
        col_of = {v: pos.col for v, pos in m.positions().items()}
        want: dict = {}
        for mask in range(1 << len(vs)):
            side = {vs[t] for t in range(len(vs)) if mask >> t & 1}
            key = [0] * m.k
            for v in side:
                key[col_of[v] - 1] += 1
            key = tuple(key)
            want[key] = max(want.get(key, -1), cut_size(g, side))
        solver = PartSolver(HeavyPart(VIRTUAL, VIRTUAL, tuple(columns_of(m))))
        got: dict = {}
        for counts, _a, value, _cut in solver.final_states(BorderCut(), BorderCut()):
            got[counts] = max(got.get(counts, -1), value)
        assert got == want
        rnd.random()


# full solvers -------------------------------------------------------------------------


def test_counterexample_report():
    rep = counterexample(with_cut=True)
    assert rep["bruteforce"] == rep["dp"] == rep["bounded"] == 7
    assert rep["claimedByFlawedAlgorithm"] == FLAWED_CLAIM == 8
    assert rep["cutSize"] == 7 and {1, 4, 5} <= set(rep["cut"])
    assert rep["exampleCut"] == [1, 4, 5] and rep["exampleCutSize"] == 7


def test_bounded_examples():
    assert maxcut_bounded_columns(counterexample_model()) == 7
    for n in range(1, 8):
        m = UBubbleModel(((Bubble(pp=tuple(range(n))),),))
        assert maxcut_bounded_columns(m) == max(s * (n - s) for s in range(n + 1))


def test_merged_mode_is_only_for_two_columns():
    cols = tuple(columns_of(random_model(GenParams(n=12, seed=1, window=4))))
    with pytest.raises(ValueError):
        PartSolver(HeavyPart(VIRTUAL, VIRTUAL, cols[:1]), merged=True)


@given(gen_params(max_n=14))
def test_dp_matches_brute_force(p):
    m = random_model(p)
    g = graph_of_model(m)
    want = maxcut_bruteforce(g)
    value, cut = maxcut(m, with_cut=True)
    assert value == want == cut_size(g, cut)
    assert cut_size(g, cut) == cut_size(g, cut.complement(g))


@given(gen_params(max_n=14), st.sampled_from([1, 2, 3, None, 100]))
def test_threshold_does_not_change_the_value(p, t):
    m = random_model(p)
    assert maxcut(m, threshold=t) == maxcut_bruteforce(graph_of_model(m))


@given(gen_params(max_n=14))
def test_bounded_matches_brute_force(p):
    m = random_model(p)
    g = graph_of_model(m)
    value, cut = maxcut_bounded_columns(m, with_cut=True)
    assert value == maxcut_bruteforce(g) == cut_size(g, cut)


def test_bounded_on_two_column_instances():
    for seed in range(40):
        m = random_model(GenParams(n=1 + seed % 14, seed=seed, grid=1 + seed % 4, window=1))
        assert m.k <= 2
        assert maxcut_bounded_columns(m) == maxcut_bruteforce(graph_of_model(m))


def test_all_light_path_is_exact():
    m = random_model(GenParams(n=14, seed=4, grid=2, window=8))
    stats = SweepStats(threshold=0)
    value = maxcut(m, threshold=m.n, stats=stats)
    assert all(not part["heavy"] for part in stats.parts)
    assert value == maxcut_bruteforce(graph_of_model(m))


def test_parallel_sweep_is_deterministic():
    m = random_model(GenParams(n=20, seed=9, grid=3, window=6))
    one = maxcut(m, with_cut=True, parallel=1)
    four = maxcut(m, with_cut=True, parallel=4)
    assert one == four


def test_witnesses_pick_smallest_ids_within_quadrants():
    m = UBubbleModel(((Bubble(pp=(3, 1, 2, 0)),),))
    value, cut = maxcut_bounded_columns(m, with_cut=True)
    assert value == 4 and cut.members in ({0, 1}, {2, 3})
    value, cut = maxcut(m, threshold=1, with_cut=True)
    assert cut.members == frozenset({0, 1})


def test_cut_complement():
    g = graph_of_model(counterexample_model())
    c = Cut(frozenset({2, 6}))
    assert c.complement(g).members == frozenset({1, 3, 4, 5})


def test_numpy_fallback_backend_in_a_fresh_process():
    code = (
        "from ububble.maxcut import BACKEND, maxcut, counterexample_model;"
        "from ububble.gen import GenParams, random_model;"
        "m = random_model(GenParams(n=16, seed=3, grid=2, window=5));"
        "print(BACKEND, maxcut(counterexample_model()), maxcut(m, threshold=2))"
    )
    env = dict(os.environ, UBUBBLE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, ce, value = out.stdout.split()
    m = random_model(GenParams(n=16, seed=3, grid=2, window=5))
    assert backend == "numpy"
    assert int(ce) == 7 and int(value) == maxcut(m, threshold=2) == maxcut_bruteforce(graph_of_model(m))


def test_kernel_benchmark_runs_and_agrees():
    script = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_kernels.py"
    out = subprocess.run(
        [sys.executable, str(script), "--repeat", "1", "--brute-n", "12", "--dp-n", "16", "--json"],
        capture_output=True,
        text=True,
        check=True,
    )
    rows = json.loads(out.stdout)
    assert {r["kernel"] for r in rows} == {"dp_step", "brute"} and all(r["agree"] for r in rows)
