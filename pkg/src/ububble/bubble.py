"""Bubble models from interval representations and back, plus structural bounds."""

from __future__ import annotations

import contextlib
import gc
import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    EMPTY_BUBBLE,
    Bubble,
    Kind,
    QUADRANT_OF_KIND,
    Representation,
    UBubbleModel,
    UnitInterval,
    check_model,
    intervals_intersect,
)

START = -1
END = -2


class PropertyViolation(AssertionError):
    """A construction invariant failed (only raised with ``debug_properties``)."""

    def __init__(self, prop: int, detail: str):
        super().__init__(f"construction property {prop} violated: {detail}")
        self.prop = prop


class _RawBubble:
    __slots__ = ("left", "key", "quads")

    def __init__(self, left: Fraction, key: int = 0):
        self.left = left
        self.key = key  # left end times the common denominator
        self.quads = {"pp": [], "pm": [], "mp": [], "mm": []}

    def freeze(self) -> Bubble:
        return Bubble(**self.quads)


def merge_almost_twins(rep: Representation) -> tuple[list[_RawBubble], int]:
    """Group intervals with equal left endpoint; result is sorted by left end (sigma order).

    Left ends are scaled by the common denominator ``unit`` so the sweep
    compares plain integers; a right end is ``key + unit``.
    """
    unit = 1
    for d in {iv.left.denominator for iv in rep.intervals}:
        unit = math.lcm(unit, d)
    by_key: dict[int, _RawBubble] = {}
    for iv in rep.intervals:
        x = iv.left
        key = x.numerator * (unit // x.denominator)
        b = by_key.get(key)
        if b is None:
            b = by_key[key] = _RawBubble(x, key)
        b.quads[QUADRANT_OF_KIND[iv.kind]].append(iv.vertex)
    return [by_key[key] for key in sorted(by_key)], unit


def compute_prev(bubbles: list[_RawBubble], unit: int) -> list[int]:
    """prev pointer for each bubble as a sigma index (or START)."""
    index_of_key = {b.key: idx for idx, b in enumerate(bubbles)}
    prev = []
    ptr = -1  # largest index with right < current left
    first_right = bubbles[0].key + unit if bubbles else 0
    for idx, b in enumerate(bubbles):
        while ptr + 1 < idx and bubbles[ptr + 1].key + unit < b.key:
            ptr += 1
        if b.key < first_right:
            prev.append(START)
        elif b.key - unit in index_of_key:
            prev.append(index_of_key[b.key - unit])
        else:
            prev.append(ptr)
    return prev


class ConstructionState:
    """Mutable state of the sigma-order sweep that assigns columns and the row path."""

    def __init__(self, bubbles: list[_RawBubble], unit: int = 1, debug_properties: bool = False):
        self.bubbles = bubbles
        self.unit = unit
        self.prev = compute_prev(bubbles, unit)
        self.col: list[int] = [0] * len(bubbles)
        self.nxt: dict[int, int] = {START: END}
        self.level: set[int] = set()  # sources of arcs carrying the L indicator
        self.tops: dict[int, int] = {}
        self.curr = 0
        self.processed = 0
        self.debug = debug_properties
        self._last_order: list[int] = []

    def _insert_after(self, a: int, b: int, level: bool) -> None:
        self.nxt[b] = self.nxt[a]
        self.nxt[a] = b
        self.level.discard(b)
        if level:
            self.level.add(a)
        else:
            self.level.discard(a)

    def path(self) -> list[int]:
        out, node = [], self.nxt[START]
        while node != END:
            out.append(node)
            node = self.nxt[node]
        return out

    def process(self, i: int) -> None:
        bs = self.bubbles
        b = bs[i]
        if i == 0:
            self.curr = 1
            self.col[0] = 1
            self.tops[1] = 0
            self._insert_after(START, 0, False)
        else:
            top = bs[self.tops[self.curr]]
            top_right = top.key + self.unit
            if b.key >= top_right:
                on_level = b.key == top_right
                self.curr += 1
                self.col[i] = self.curr
                self.tops[self.curr] = i
                if on_level:  # case ii
                    self._insert_after(self.tops[self.curr - 1], i, True)
            else:
                on_level = False
                self.col[i] = self.curr
            if not on_level:  # cases i and iii
                p = self.prev[i]
                if p != START and bs[p].key + self.unit == b.key:
                    self._insert_after(p, i, True)  # case 1
                elif self.prev[i - 1] == p:
                    self._insert_after(i - 1, i, False)  # case 2a
                else:
                    self._insert_after(p, i, False)  # case 2b
        self.processed = i + 1
        if self.debug:
            self.check_properties()

    def rows(self) -> list[int]:
        row = [0] * len(self.bubbles)
        r, node = 0, START
        while self.nxt[node] != END:
            nxt = self.nxt[node]
            r = r if node in self.level else r + 1
            row[nxt] = r
            node = nxt
        return row

    def check_properties(self) -> None:
        bs = self.bubbles
        order = self.path()
        done = self.processed
        # 1: exactly the first `done` bubbles are on the path
        if sorted(order) != list(range(done)):
            raise PropertyViolation(1, f"path holds {sorted(order)} after {done} bubbles")
        # 2: relative order of earlier bubbles is unchanged
        seen_before = len(self._last_order)
        restricted = [x for x in order if x < seen_before]
        if restricted != self._last_order:
            raise PropertyViolation(2, "relative path order changed")
        self._last_order = order
        pos = {x: t for t, x in enumerate(order)}
        # 3: L on (A,B) iff r(A) = l(B); L arcs go to a later column
        for t, a in enumerate(order):
            nb = order[t + 1] if t + 1 < len(order) else END
            has_l = a in self.level
            want = nb != END and bs[a].key + self.unit == bs[nb].key
            if has_l != want:
                raise PropertyViolation(3, f"arc {a}->{nb}: L={has_l}, r(A)=l(B) is {want}")
            if has_l and not self.col[a] < self.col[nb]:
                raise PropertyViolation(3, f"L arc {a}->{nb} within a column")
        if START in self.level:
            raise PropertyViolation(3, "arc out of START carries L")
        # 4: columns monotone along sigma
        for x in range(1, done):
            if self.col[x - 1] > self.col[x]:
                raise PropertyViolation(4, f"col drops between bubbles {x - 1} and {x}")
        # 5: prev(B) is the closest path ancestor in the previous column
        for x in range(done):
            cands = [a for a in order[: pos[x]] if self.col[a] == self.col[x] - 1]
            want = cands[-1] if cands else START
            if self.prev[x] != want:
                raise PropertyViolation(5, f"prev({x}) = {self.prev[x]}, path says {want}")
        # 6: path order within a column equals sigma order
        last_in_col: dict[int, int] = {}
        for x in order:
            c = self.col[x]
            if c in last_in_col and last_in_col[c] > x:
                raise PropertyViolation(6, f"column {c} out of sigma order at bubble {x}")
            last_in_col[c] = x


def _assemble(bubbles: list[_RawBubble], cols: list[int], rows: list[int], row_offset: int = 0):
    k = max(cols)
    grid: list[dict[int, Bubble]] = [dict() for _ in range(k)]
    for b, c, r in zip(bubbles, cols, rows):
        grid[c - 1][r + row_offset] = b.freeze()
    columns = []
    for cells in grid:
        col = [EMPTY_BUBBLE] * max(cells)
        for r, b in cells.items():
            col[r - 1] = b
        columns.append(tuple(col))
    return columns


def _components(bubbles: list[_RawBubble], unit: int) -> list[list[_RawBubble]]:
    """Split sigma-ordered bubbles into connected components of the interval graph."""
    groups = [[bubbles[0]]]
    for a, b in zip(bubbles, bubbles[1:]):
        linked = b.key < a.key + unit or (
            b.key == a.key + unit
            and (a.quads["pp"] or a.quads["mp"])
            and (b.quads["pp"] or b.quads["pm"])
        )
        if linked:
            groups[-1].append(b)
        else:
            groups.append([b])
    return groups


def build_model(
    rep: Representation,
    *,
    per_component: bool = False,
    debug_properties: bool = False,
    validate: bool = True,
) -> UBubbleModel:
    """Linear-time bubble model of a mixed unit interval representation.

    Bubbles are processed in left-endpoint order.  Each one gets its column
    immediately; rows come from a single walk over the auxiliary path, where
    an arc marked L keeps the row and any other arc moves one row down.

    With ``per_component`` each connected component is built on its own and
    later components are appended to the right, shifted below the last
    column of what precedes them.
    """
    if len(rep) == 0:
        raise ValueError("empty representation")
    with _gc_paused():
        bubbles, unit = merge_almost_twins(rep)
        groups = _components(bubbles, unit) if per_component else [bubbles]
        columns: list[tuple[Bubble, ...]] = []
        for group in groups:
            state = ConstructionState(group, unit, debug_properties)
            for i in range(len(group)):
                state.process(i)
            offset = len(columns[-1]) if columns else 0
            columns.extend(_assemble(group, state.col, state.rows(), offset))
        model = UBubbleModel(tuple(columns))
        return check_model(model) if validate else model


@contextlib.contextmanager
def _gc_paused():
    # the sweep allocates many small acyclic objects; cyclic GC passes only cost time
    was = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was:
            gc.enable()


def model_to_intervals(model: UBubbleModel) -> Representation:
    """Interval representation with left end ``j + (i-1)/rows`` for a vertex at (i, j)."""
    eps = Fraction(1, model.rows)
    out = []
    for j, col in enumerate(model.columns, start=1):
        for i, b in enumerate(col, start=1):
            left = j + (i - 1) * eps
            for v, kind in b.members():
                out.append(UnitInterval(v, left, kind))
    out.sort(key=lambda iv: iv.vertex)
    return Representation(tuple(out))


def compute_alpha(rep: Representation) -> int:
    """Maximum independent set size by the earliest-right-end greedy.

    At equal right coordinate an open right end sorts first; at equal left
    coordinate a closed left end sorts first.
    """
    order = sorted(
        rep.intervals,
        key=lambda iv: (iv.left + 1, iv.kind.right_closed, iv.left, not iv.kind.left_closed),
    )
    count, last = 0, None
    for iv in order:
        if last is None or not intervals_intersect(last, iv):
            count += 1
            last = iv
    return count


def max_clique(model: UBubbleModel) -> int:
    """Clique number read off two consecutive columns of the model."""
    if model.k == 1:
        return model.column_size(1)
    best = 0
    for j in range(1, model.k):
        left, right = model.columns[j - 1], model.columns[j]
        rj, rn = len(left), len(right)
        sizes_l = [b.size for b in left]
        sizes_r = [b.size for b in right]
        for i in range(1, rn + 1):
            below = sum(sizes_l[i:])  # rows i+1..r_j of column j
            above = sum(sizes_r[: i - 1])  # rows 1..i-1 of column j+1
            if i <= rj:
                bl, br = left[i - 1], right[i - 1]
                a = max(bl.size, br.size, len(bl.right_closed) + len(br.left_closed))
            else:
                a = sizes_r[i - 1]
            best = max(best, below + above + a)
    return best


def column_alpha_bounds(model: UBubbleModel) -> tuple[int, int]:
    """The range ``(ceil(k/2), k)`` known to contain the independence number."""
    return math.ceil(model.k / 2), model.k


@dataclass
class BoundsReport:
    k: int
    r: int
    alpha: int
    omega: int
    phi: int | None = None
    columns_bound: int = 0  # k + 3
    rows_bound: int = 0  # 2r + 2
    alpha_bound: int = 0  # 2 alpha + 3
    groups_bound: int | None = None  # phi + 2
    clique_bound: int = 0  # omega + 1
    best: int = 0

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "alpha": self.alpha,
            "omega": self.omega,
            "phi": self.phi,
            "k_plus_3": self.columns_bound,
            "two_r_plus_2": self.rows_bound,
            "two_alpha_plus_3": self.alpha_bound,
            "phi_plus_2": self.groups_bound,
            "omega_plus_1": self.clique_bound,
            "min": self.best,
        }


def structural_report(model: UBubbleModel) -> BoundsReport:
    """Bounds that need no group structure; the clique-width module fills phi."""
    alpha = compute_alpha(model_to_intervals(model))
    omega = max_clique(model)
    rep = BoundsReport(k=model.k, r=model.rows, alpha=alpha, omega=omega)
    rep.columns_bound = model.k + 3
    rep.rows_bound = 2 * model.rows + 2
    rep.alpha_bound = 2 * alpha + 3
    rep.clique_bound = omega + 1
    rep.best = min(rep.columns_bound, rep.rows_bound, rep.alpha_bound, rep.clique_bound)
    return rep
