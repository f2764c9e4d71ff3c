"""Heavy/light column decomposition and the per-part MaxCut table.

A column is heavy when it holds more than ``threshold`` vertices.  A heavy
part is a maximal run of heavy columns together with the light column on
either side (virtual empty columns stand in at the model's ends).  Given cut
counts on both borders, the part is solved by a table over

    (cut count in each heavy column, cut count among the right-closed
     vertices of the last processed bubble)

filled one bubble slot at a time in row-major order (row by row from the
top, left to right within a row).  Empty bubbles are real slots: that keeps
"the previous slot is the same-row bubble of the previous column" exact.

Quadrant members are true twins, so a cut is described by per-quadrant
counts everywhere; witnesses take the smallest vertex ids of each quadrant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ..core import QUADRANTS, Bubble, Cut, UBubbleModel, ValidationError
from . import _kernels
from ._kernels import NEG, NEG_HALF


def crossing(s1: int, t1: int, s2: int, t2: int) -> int:
    """Cut edges between two mutually complete sets with s cut / t non-cut vertices each."""
    return s1 * t2 + t1 * s2


def default_threshold(n: int) -> int:
    return math.isqrt(n - 1) + 1 if n > 0 else 1


# --------------------------------------------------------------------------
# decomposition
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ColumnRef:
    index: int | None  # 1-based model column, None for a virtual empty column
    bubbles: tuple[Bubble, ...] = ()

    @property
    def virtual(self) -> bool:
        return self.index is None

    @property
    def size(self) -> int:
        return sum(b.size for b in self.bubbles)

    def bubble(self, row: int) -> Bubble:
        if 1 <= row <= len(self.bubbles):
            return self.bubbles[row - 1]
        return _EMPTY


_EMPTY = Bubble()
VIRTUAL = ColumnRef(None, ())


@dataclass(frozen=True)
class HeavyPart:
    border_left: ColumnRef
    border_right: ColumnRef
    heavy: tuple[ColumnRef, ...]

    @property
    def l(self) -> int:
        return len(self.heavy)


@dataclass(frozen=True)
class HeavyPartition:
    threshold: int
    parts: tuple[HeavyPart, ...]
    light: tuple[ColumnRef, ...]

    def describe(self) -> list[dict]:
        return [
            {
                "left": p.border_left.index,
                "right": p.border_right.index,
                "heavy": [c.index for c in p.heavy],
            }
            for p in self.parts
        ]


def partition_heavy(model: UBubbleModel, threshold: int | None = None) -> HeavyPartition:
    if threshold is None:
        threshold = default_threshold(model.n)
    if threshold < 1:
        raise ValueError("threshold must be positive")
    cols = [ColumnRef(j, model.columns[j - 1]) for j in range(1, model.k + 1)]
    heavy_flags = [c.size > threshold for c in cols]
    light: list[ColumnRef] = []
    runs: list[list[ColumnRef]] = []
    if not cols or heavy_flags[0]:
        light.append(VIRTUAL)
    run: list[ColumnRef] = []
    for c, is_heavy in zip(cols, heavy_flags):
        if is_heavy:
            run.append(c)
        else:
            if light:
                runs.append(run)
            run = []
            light.append(c)
    if run or len(light) == 1:
        runs.append(run)
        light.append(VIRTUAL)
    parts = tuple(HeavyPart(light[t], light[t + 1], tuple(runs[t])) for t in range(len(runs)))
    return HeavyPartition(threshold, parts, tuple(light))


# --------------------------------------------------------------------------
# border cuts
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BorderCut:
    """Per-bubble, per-quadrant cut counts (pp, pm, mp, mm) for one light column."""

    counts: tuple[tuple[int, int, int, int], ...] = ()

    def row(self, r: int) -> tuple[int, int, int, int]:
        if 1 <= r <= len(self.counts):
            return self.counts[r - 1]
        return (0, 0, 0, 0)

    @property
    def total(self) -> int:
        return sum(sum(q) for q in self.counts)


EMPTY_CUT = BorderCut(())


def check_border(col: ColumnRef, cut: BorderCut) -> None:
    if len(cut.counts) != len(col.bubbles):
        raise ValidationError(
            f"border cut has {len(cut.counts)} bubbles, column {col.index} has {len(col.bubbles)}"
        )
    for r, (b, q) in enumerate(zip(col.bubbles, cut.counts), start=1):
        if len(q) != 4 or any(x < 0 or x > y for x, y in zip(q, b.counts())):
            raise ValidationError(f"border cut counts {q} do not fit bubble at row {r}")


def border_cuts(col: ColumnRef) -> list[BorderCut]:
    """All count vectors of a column, in lexicographic order."""
    ranges = [range(x + 1) for b in col.bubbles for x in b.counts()]
    out = []
    for flat in itertools.product(*ranges):
        out.append(BorderCut(tuple(tuple(flat[4 * r : 4 * r + 4]) for r in range(len(col.bubbles)))))
    return out


def internal_edges(col: ColumnRef, cut: BorderCut) -> int:
    s = cut.total
    return s * (col.size - s)


def cut_from_counts(bubble: Bubble, counts: Sequence[int]) -> list[int]:
    out: list[int] = []
    for q, x in zip(QUADRANTS, counts):
        out.extend(getattr(bubble, q)[:x])
    return out


def border_members(col: ColumnRef, cut: BorderCut) -> list[int]:
    out: list[int] = []
    for b, q in zip(col.bubbles, cut.counts):
        out.extend(cut_from_counts(b, q))
    return out


class _BorderView:
    """Prefix sums over one border column under a fixed cut."""

    def __init__(self, col: ColumnRef, cut: BorderCut):
        rows = len(col.bubbles)
        self.cut_row = [sum(cut.row(r)) for r in range(1, rows + 1)]
        self.tot_row = [b.size for b in col.bubbles]
        self.rows = rows
        self.col = col
        self.cut = cut

    def above(self, r: int) -> tuple[int, int]:
        k = max(0, min(r - 1, self.rows))
        return sum(self.cut_row[:k]), sum(self.tot_row[:k])

    def below(self, r: int) -> tuple[int, int]:
        k = max(0, min(r, self.rows))
        return sum(self.cut_row[k:]), sum(self.tot_row[k:])

    def right_closed(self, r: int) -> tuple[int, int]:
        pp, _, mp, _ = self.cut.row(r)
        return pp + mp, len(self.col.bubble(r).right_closed)

    def left_closed(self, r: int) -> tuple[int, int]:
        pp, pm, _, _ = self.cut.row(r)
        return pp + pm, len(self.col.bubble(r).left_closed)


# --------------------------------------------------------------------------
# two consecutive light columns
# --------------------------------------------------------------------------


def light_pair_value(part: HeavyPart, s_left: BorderCut, s_right: BorderCut) -> int:
    """Cut edges inside both borders and between them, for a part with no heavy column."""
    if part.l != 0:
        raise ValueError("light_pair_value needs a part without heavy columns")
    cl, cr = part.border_left, part.border_right
    check_border(cl, s_left)
    check_border(cr, s_right)
    value = internal_edges(cl, s_left) + internal_edges(cr, s_right)
    if cl.virtual or cr.virtual:
        return value
    left = _BorderView(cl, s_left)
    right = _BorderView(cr, s_right)
    # left vertex strictly below the right one
    for r in range(1, right.rows + 1):
        cut_r, tot_r = right.cut_row[r - 1], right.tot_row[r - 1]
        cut_b, tot_b = left.below(r)
        value += crossing(cut_r, tot_r - cut_r, cut_b, tot_b - cut_b)
    # same row: right-closed on the left, left-closed on the right
    for r in range(1, min(left.rows, right.rows) + 1):
        a, ta = left.right_closed(r)
        b, tb = right.left_closed(r)
        value += crossing(a, ta - a, b, tb - b)
    return value


# --------------------------------------------------------------------------
# the heavy-part table
# --------------------------------------------------------------------------


class Slot(NamedTuple):
    row: int
    c: int  # 0-based heavy column
    bubble: Bubble
    above_c: int  # vertices of column c in rows above
    above_n: int  # vertices of column c+1 in rows above, -1 if c is the last heavy column
    pred: bool  # previous slot is (row, c-1)
    ztot: int  # right-closed vertices of the previous slot when pred
    uses_a: bool
    uses_l: bool


def _slots(part: HeavyPart, merged: bool) -> list[Slot]:
    heavy = part.heavy
    l = len(heavy)
    heights = [len(c.bubbles) for c in heavy]
    prefix = [[0] for _ in heavy]
    for c, col in enumerate(heavy):
        for b in col.bubbles:
            prefix[c].append(prefix[c][-1] + b.size)
    slots = []
    prev: tuple[int, int] | None = None
    for r in range(1, max(heights) + 1):
        for c in range(l):
            if r > heights[c]:
                continue
            pred = prev == (r, c - 1)
            ztot = len(heavy[c - 1].bubble(r).right_closed) if pred else 0
            above_n = prefix[c + 1][min(r - 1, heights[c + 1])] if c + 1 < l else -1
            slots.append(
                Slot(
                    row=r,
                    c=c,
                    bubble=heavy[c].bubble(r),
                    above_c=prefix[c][r - 1],
                    above_n=above_n,
                    pred=pred,
                    ztot=ztot,
                    uses_a=not merged or c == 0,
                    uses_l=not merged or c == 1,
                )
            )
            prev = (r, c)
    return slots


def _choices(b: Bubble, uses_a: bool, uses_l: bool) -> list[tuple[int, int, int]]:
    """Distinct (cut size, right-closed cut, left-closed cut) triples a bubble allows.

    With ``uses_a``/``uses_l`` off the corresponding coordinate is pinned to 0,
    which merges quadrants that the table cannot tell apart.
    """
    pp, pm, mp, mm = b.counts()
    size = pp + pm + mp + mm
    out = set()
    if uses_a and uses_l:
        for a in range(pp + mp + 1):
            for L in range(pp + pm + 1):
                lo = max(0, a - mp, L - pm)
                hi = min(pp, a, L)
                if lo > hi:
                    continue
                for bb in range(a + L - hi, a + L - lo + mm + 1):
                    out.add((bb, a, L))
    elif uses_a:
        rc = pp + mp
        for a in range(rc + 1):
            for bb in range(a, a + size - rc + 1):
                out.add((bb, a, 0))
    elif uses_l:
        lc = pp + pm
        for L in range(lc + 1):
            for bb in range(L, L + size - lc + 1):
                out.add((bb, 0, L))
    else:
        for bb in range(size + 1):
            out.add((bb, 0, 0))
    return sorted(out)


@dataclass
class _Prepared:
    slot: Slot
    tb: np.ndarray
    ta: np.ndarray
    tl: np.ndarray
    lvals: np.ndarray
    tli: np.ndarray


@dataclass
class PartSolver:
    """Precomputed slot data for one heavy part; solve() runs the table for a border cut pair."""

    part: HeavyPart
    merged: bool = False
    slots: list[Slot] = field(init=False)
    sdims: np.ndarray = field(init=False)
    a1: int = field(init=False)

    def __post_init__(self):
        if self.part.l < 1:
            raise ValueError("a heavy part needs at least one heavy column")
        if self.merged and (
            self.part.l != 2 or not (self.part.border_left.virtual and self.part.border_right.virtual)
        ):
            raise ValueError("merged quadrants need exactly two columns and empty borders")
        self.slots = _slots(self.part, self.merged)
        self.sdims = np.array([c.size + 1 for c in self.part.heavy], dtype=np.int64)
        self.a1 = 1 + max(
            (len(s.bubble.right_closed) for s in self.slots if s.uses_a), default=0
        )
        self._prep = []
        for s in self.slots:
            ch = _choices(s.bubble, s.uses_a, s.uses_l)
            tb = np.array([t[0] for t in ch], dtype=np.int64)
            ta = np.array([t[1] for t in ch], dtype=np.int64)
            tl = np.array([t[2] for t in ch], dtype=np.int64)
            if s.pred:
                lvals, tli = np.unique(tl, return_inverse=True)
                lvals = lvals.astype(np.int64)
                tli = tli.astype(np.int64).reshape(-1)
            else:
                lvals = np.zeros(1, dtype=np.int64)
                tli = np.zeros(len(ch), dtype=np.int64)
            self._prep.append(_Prepared(s, tb, ta, tl, lvals, tli))

    @property
    def n_states(self) -> int:
        return int(np.prod(self.sdims)) * self.a1

    def _consts(self, p: _Prepared, left: _BorderView, right: _BorderView) -> np.ndarray:
        s = p.slot
        l = self.part.l
        bi = s.bubble.size
        lt = len(s.bubble.left_closed)
        rc = len(s.bubble.right_closed)
        tb, ta, tl = p.tb, p.ta, p.tl
        const = tb * (bi - tb)
        if s.c == 0:
            nd, td = left.below(s.row)
            const = const + tb * (td - nd) + (bi - tb) * nd
            nl, tll = left.right_closed(s.row)
            const = const + nl * (lt - tl) + (tll - nl) * tl
        if s.c == l - 1:
            nu, tu = right.above(s.row)
            const = const + tb * (tu - nu) + (bi - tb) * nu
            nr, tr = right.left_closed(s.row)
            const = const + ta * (tr - nr) + (rc - ta) * nr
        return np.ascontiguousarray(const, dtype=np.int64)

    def _seed(self, left: _BorderView, right: _BorderView) -> np.ndarray:
        f = np.full(self.n_states, NEG, dtype=np.int64)
        f[0] = internal_edges(left.col, left.cut) + internal_edges(right.col, right.cut)
        return f

    def _run(self, s_left: BorderCut, s_right: BorderCut, keep: bool, kernel=None):
        part = self.part
        check_border(part.border_left, s_left)
        check_border(part.border_right, s_right)
        step = kernel or _kernels.dp_step
        left = _BorderView(part.border_left, s_left)
        right = _BorderView(part.border_right, s_right)
        f = self._seed(left, right)
        layers = [f]
        for p in self._prep:
            s = p.slot
            out = np.empty_like(f)
            step(
                f,
                self.sdims,
                self.a1,
                s.c,
                s.c + 1 if s.above_n >= 0 else -1,
                s.bubble.size,
                s.above_c,
                max(s.above_n, 0),
                s.pred,
                s.ztot,
                len(s.bubble.left_closed),
                p.tb,
                p.ta,
                p.tli,
                self._consts(p, left, right),
                p.lvals,
                out,
            )
            f = out
            if keep:
                layers.append(f)
            else:
                layers[0] = f
        return layers, left, right

    def _witness(self, layers, idx, left, right) -> Cut:
        members = self._backtrack(layers, idx, left, right)
        members += border_members(self.part.border_left, left.cut)
        members += border_members(self.part.border_right, right.cut)
        return Cut(frozenset(members))

    def solve(
        self, s_left: BorderCut, s_right: BorderCut, with_cut: bool = False, kernel=None
    ):
        layers, left, right = self._run(s_left, s_right, with_cut, kernel)
        f = layers[-1]
        best_idx = int(np.argmax(f))
        value = int(f[best_idx])
        if value <= NEG_HALF:
            raise AssertionError("heavy part table has no feasible state")
        if not with_cut:
            return value
        return value, self._witness(layers, best_idx, left, right)

    def final_states(self, s_left: BorderCut, s_right: BorderCut):
        """Every reachable final state as ``(column counts, a, value, witness cut)``."""
        layers, left, right = self._run(s_left, s_right, True)
        f = layers[-1]
        shape = tuple(int(d) for d in self.sdims) + (self.a1,)
        for idx in np.flatnonzero(f > NEG_HALF):
            state = np.unravel_index(int(idx), shape)
            counts = tuple(int(x) for x in state[:-1])
            yield counts, int(state[-1]), int(f[idx]), self._witness(layers, int(idx), left, right)

    def _term(self, s: Slot, b, a, L, sc_old, sn, z, left, right) -> int:
        """Value added by one slot choice; mirrors the kernel plus _consts."""
        l = self.part.l
        bubble = s.bubble
        bi = bubble.size
        lt = len(bubble.left_closed)
        rc = len(bubble.right_closed)
        v = b * (bi - b) + crossing(b, bi - b, sc_old, s.above_c - sc_old)
        if s.above_n >= 0:
            v += crossing(b, bi - b, sn, s.above_n - sn)
        if s.pred:
            v += crossing(z, s.ztot - z, L, lt - L)
        if s.c == 0:
            nd, td = left.below(s.row)
            v += crossing(b, bi - b, nd, td - nd)
            nl, tll = left.right_closed(s.row)
            v += crossing(nl, tll - nl, L, lt - L)
        if s.c == l - 1:
            nu, tu = right.above(s.row)
            v += crossing(b, bi - b, nu, tu - nu)
            nr, tr = right.left_closed(s.row)
            v += crossing(a, rc - a, nr, tr - nr)
        return v

    def _backtrack(self, layers, idx, left, right) -> list[int]:
        shape = tuple(int(d) for d in self.sdims) + (self.a1,)
        members: list[int] = []
        for i in range(len(self.slots), 0, -1):
            s = self.slots[i - 1]
            f_now, f_prev = layers[i], layers[i - 1]
            target = int(f_now[idx])
            state = list(np.unravel_index(idx, shape))
            a_state = state[-1]
            sc_new = state[s.c]
            sn = state[s.c + 1] if s.above_n >= 0 else 0
            pp, pm, mp, mm = s.bubble.counts()
            found = None
            for x, y, w, u in itertools.product(
                range(pp + 1), range(pm + 1), range(mp + 1), range(mm + 1)
            ):
                a = x + w if s.uses_a else 0
                if a != a_state:
                    continue
                b = x + y + w + u
                if b > sc_new:
                    continue
                L = x + y if s.uses_l else 0
                for z in range(self.a1):
                    prev_state = list(state)
                    prev_state[s.c] = sc_new - b
                    prev_state[-1] = z
                    pidx = int(np.ravel_multi_index(prev_state, shape))
                    pv = int(f_prev[pidx])
                    if pv <= NEG_HALF:
                        continue
                    if pv + self._term(s, b, a, L, sc_new - b, sn, z, left, right) == target:
                        found = ((x, y, w, u), pidx)
                        break
                if found:
                    break
            if found is None:
                raise AssertionError(f"backtrack failed at slot {i}")
            counts, idx = found
            members.extend(cut_from_counts(s.bubble, counts))
        return members


def heavy_part_maxcut(
    part: HeavyPart, s_left: BorderCut, s_right: BorderCut, with_cut: bool = False
):
    """Maximum cut of a part's graph agreeing with the given border counts.

    Includes the edges inside both borders.  Returns the value, or
    ``(value, Cut)`` with ``with_cut``.
    """
    return PartSolver(part).solve(s_left, s_right, with_cut)
