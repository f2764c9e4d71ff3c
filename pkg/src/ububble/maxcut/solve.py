"""Exact MaxCut entry points: brute force, the light-column sweep, bounded columns."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..core import Bubble, Cut, Graph, UBubbleModel, check_model, cut_size, graph_of_model
from . import _kernels
from .dp import (
    VIRTUAL,
    BorderCut,
    HeavyPart,
    PartSolver,
    border_cuts,
    border_members,
    internal_edges,
    light_pair_value,
    partition_heavy,
)

BRUTE_LIMIT = 30


class TooLarge(ValueError):
    pass


def maxcut_bruteforce(g: Graph, with_cut: bool = False, kernel=None):
    """Exhaustive MaxCut over all cuts with one vertex pinned (n <= 30)."""
    n = g.n
    if n > BRUTE_LIMIT:
        raise TooLarge(f"brute force refuses n = {n} > {BRUTE_LIMIT}")
    index = {v: t for t, v in enumerate(g.vertices)}
    adj = np.zeros((n, n), dtype=np.int8)
    for u, v in g.edges:
        adj[index[u], index[v]] = adj[index[v], index[u]] = 1
    value, mask = (kernel or _kernels.brute_maxcut)(adj)
    value, mask = int(value), int(mask)
    if not with_cut:
        return value
    members = frozenset(g.vertices[t + 1] for t in range(n - 1) if mask >> t & 1)
    return value, Cut(members)


@dataclass
class SweepStats:
    threshold: int
    parts: list = field(default_factory=list)
    pairs_evaluated: int = 0


def _part_evaluator(part: HeavyPart):
    if part.l == 0:
        return lambda sl, sr: light_pair_value(part, sl, sr)
    solver = PartSolver(part)
    return lambda sl, sr: solver.solve(sl, sr)


def maxcut(
    model: UBubbleModel,
    threshold: int | None = None,
    with_cut: bool = False,
    parallel: int = 1,
    stats: SweepStats | None = None,
):
    """Exact MaxCut of ``graph_of_model(model)`` via heavy parts and light-column sweep.

    For each cut of the current light column the best value of everything to
    its left is kept, so only two consecutive light columns are ever
    enumerated together.  Inner light columns belong to two parts, so their
    internal cut edges are subtracted once.
    """
    check_model(model)
    partition = partition_heavy(model, threshold)
    if stats is not None:
        stats.threshold = partition.threshold
        stats.parts = partition.describe()
    light = partition.light
    cuts = [border_cuts(c) for c in light]
    best = [0] * len(cuts[0])
    choice: list[list[int]] = []
    pool = ThreadPoolExecutor(parallel) if parallel > 1 else None
    try:
        for t, part in enumerate(partition.parts, start=1):
            evaluate = _part_evaluator(part)
            left_cuts = cuts[t - 1]
            penalty = (
                [internal_edges(light[t - 1], c) for c in left_cuts] if t > 1 else [0] * len(left_cuts)
            )
            prior = [b - p for b, p in zip(best, penalty)]

            def best_for(right: BorderCut, _ev=evaluate, _lc=left_cuts, _prior=prior):
                top, arg = None, -1
                for idx, (cl, base) in enumerate(zip(_lc, _prior)):
                    v = base + _ev(cl, right)
                    if top is None or v > top:
                        top, arg = v, idx
                return top, arg

            results = list(pool.map(best_for, cuts[t])) if pool else [best_for(c) for c in cuts[t]]
            if stats is not None:
                stats.pairs_evaluated += len(left_cuts) * len(cuts[t])
            best = [v for v, _ in results]
            choice.append([a for _, a in results])
    finally:
        if pool:
            pool.shutdown()
    end = int(np.argmax(best))
    value = int(best[end])
    if not with_cut:
        return value
    picks = [end]
    for t in range(len(partition.parts), 0, -1):
        picks.append(choice[t - 1][picks[-1]])
    picks.reverse()  # picks[t] indexes cuts[t]
    members: set[int] = set()
    for t, part in enumerate(partition.parts, start=1):
        sl, sr = cuts[t - 1][picks[t - 1]], cuts[t][picks[t]]
        if part.l == 0:
            members.update(border_members(part.border_left, sl))
            members.update(border_members(part.border_right, sr))
        else:
            _, cut = PartSolver(part).solve(sl, sr, with_cut=True)
            members.update(cut.members)
    witness = Cut(frozenset(members))
    return value, witness


def _whole_part(model: UBubbleModel) -> HeavyPart:
    from .dp import ColumnRef

    cols = tuple(ColumnRef(j, model.columns[j - 1]) for j in range(1, model.k + 1))
    return HeavyPart(VIRTUAL, VIRTUAL, cols)


def maxcut_bounded_columns(model: UBubbleModel, with_cut: bool = False):
    """MaxCut treating the whole model as one heavy part with empty borders.

    Polynomial for a fixed number of columns.  With two columns only the
    right sign matters in column 1 and only the left sign in column 2, so the
    table merges quadrants accordingly.
    """
    check_model(model)
    solver = PartSolver(_whole_part(model), merged=model.k == 2)
    return solver.solve(BorderCut(), BorderCut(), with_cut=with_cut)


# --------------------------------------------------------------------------
# the published counterexample
# --------------------------------------------------------------------------

# value the flawed published recurrence returns on this model (quoted, not recomputed)
FLAWED_CLAIM = 8


def counterexample_model() -> UBubbleModel:
    """Two columns: {v1},{v2} over {v3,v4,v5},{v6}; every vertex closed-open."""
    return UBubbleModel(
        (
            (Bubble(pm=(1,)), Bubble(pm=(2,))),
            (Bubble(pm=(3, 4, 5)), Bubble(pm=(6,))),
        )
    )


def counterexample(with_cut: bool = False) -> dict:
    model = counterexample_model()
    g = graph_of_model(model)
    brute = maxcut_bruteforce(g)
    report = {
        "bruteforce": brute,
        "dp": maxcut(model),
        "bounded": maxcut_bounded_columns(model),
        "claimedByFlawedAlgorithm": FLAWED_CLAIM,
        "edges": g.m,
    }
    if with_cut:
        _, cut = maxcut(model, with_cut=True)
        if 1 not in cut.members:
            cut = cut.complement(g)
        report["cut"] = sorted(cut.members)
        report["cutSize"] = cut_size(g, cut)
        example = Cut(frozenset({1, 4, 5}))
        report["exampleCut"] = sorted(example.members)
        report["exampleCutSize"] = cut_size(g, example)
    return report
