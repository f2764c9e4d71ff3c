"""Value types for mixed unit interval graphs and their bubble models.

Endpoints are exact rationals (:class:`fractions.Fraction`).  Every type here
is immutable; all operations are pure functions.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Sequence

Rational = Fraction


class ValidationError(ValueError):
    """Raised when an input violates a structural precondition."""


def to_rational(value) -> Fraction:
    """Parse an int, decimal string, ``p/q`` string or Fraction exactly.

    Floats are rejected on purpose: ``0.1`` is not a rational you meant.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValidationError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {value!r}") from exc
    raise ValidationError(f"not a rational: {value!r}")


class Kind(enum.Enum):
    """Endpoint type of a unit interval: (left sign, right sign)."""

    PP = "++"  # closed
    PM = "+-"  # closed-open
    MP = "-+"  # open-closed
    MM = "--"  # open

    @property
    def left_closed(self) -> bool:
        return self.value[0] == "+"

    @property
    def right_closed(self) -> bool:
        return self.value[1] == "+"

    @classmethod
    def parse(cls, text: str) -> Kind:
        text = text.strip().replace("−", "-")
        try:
            return cls(text)
        except ValueError:
            raise ValidationError(f"unknown interval kind {text!r}") from None

    def __str__(self) -> str:
        return self.value


IntervalKind = Kind

# quadrant field names of Bubble, in Kind order
QUADRANTS = ("pp", "pm", "mp", "mm")
KIND_OF_QUADRANT = dict(zip(QUADRANTS, Kind))
QUADRANT_OF_KIND = {k: q for q, k in KIND_OF_QUADRANT.items()}


@dataclass(frozen=True, order=True)
class UnitInterval:
    vertex: int
    left: Fraction
    kind: Kind = field(compare=False)

    def __post_init__(self):
        if not isinstance(self.vertex, int) or self.vertex < 0:
            raise ValidationError(f"vertex id must be a nonnegative int: {self.vertex!r}")
        object.__setattr__(self, "left", to_rational(self.left))

    @property
    def right(self) -> Fraction:
        return self.left + 1


def intervals_intersect(u: UnitInterval, v: UnitInterval) -> bool:
    """Exact point-set intersection test for two unit intervals."""
    if v.left < u.left:
        u, v = v, u
    if v.left < u.left + 1:
        return True
    if v.left == u.left + 1:
        return u.kind.right_closed and v.kind.left_closed
    return False


@dataclass(frozen=True)
class Representation:
    intervals: tuple[UnitInterval, ...]

    def __post_init__(self):
        intervals = tuple(self.intervals)
        object.__setattr__(self, "intervals", intervals)
        seen = set()
        for iv in intervals:
            if iv.vertex in seen:
                raise ValidationError(f"duplicate vertex id {iv.vertex}")
            seen.add(iv.vertex)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self) -> Iterator[UnitInterval]:
        return iter(self.intervals)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(iv.vertex for iv in self.intervals))

    @classmethod
    def from_triples(cls, triples: Iterable[tuple]) -> Representation:
        """Build from ``(vertex, kind, left)`` triples; kind may be a string."""
        out = []
        for vertex, kind, left in triples:
            if not isinstance(kind, Kind):
                kind = Kind.parse(kind)
            out.append(UnitInterval(vertex, to_rational(left), kind))
        return cls(tuple(out))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on integer vertex ids.

    ``edges`` holds each edge once as ``(u, v)`` with ``u < v``; two graphs
    compare equal iff they have the same vertex ids and the same edge set.
    """

    vertices: tuple[int, ...]
    edges: frozenset

    def __post_init__(self):
        vertices = tuple(sorted(self.vertices))
        if len(set(vertices)) != len(vertices):
            raise ValidationError("duplicate vertex id in graph")
        norm = set()
        vset = set(vertices)
        for u, v in self.edges:
            if u == v:
                raise ValidationError(f"self-loop on {u}")
            if u not in vset or v not in vset:
                raise ValidationError(f"edge ({u}, {v}) leaves the vertex set")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(norm))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def adjacency(self) -> dict[int, set[int]]:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges


@dataclass(frozen=True)
class Bubble:
    """One model cell, split into quadrants by interval kind."""

    pp: tuple[int, ...] = ()
    pm: tuple[int, ...] = ()
    mp: tuple[int, ...] = ()
    mm: tuple[int, ...] = ()

    def __post_init__(self):
        for q in QUADRANTS:
            object.__setattr__(self, q, tuple(sorted(getattr(self, q))))

    def quadrant(self, kind: Kind) -> tuple[int, ...]:
        return getattr(self, QUADRANT_OF_KIND[kind])

    @property
    def vertices(self) -> tuple[int, ...]:
        return self.pp + self.pm + self.mp + self.mm

    @property
    def size(self) -> int:
        return len(self.pp) + len(self.pm) + len(self.mp) + len(self.mm)

    @property
    def right_closed(self) -> tuple[int, ...]:
        """Vertices of type (*,+)."""
        return self.pp + self.mp

    @property
    def left_closed(self) -> tuple[int, ...]:
        """Vertices of type (+,*)."""
        return self.pp + self.pm

    def __bool__(self) -> bool:
        return self.size > 0

    def counts(self) -> tuple[int, int, int, int]:
        return len(self.pp), len(self.pm), len(self.mp), len(self.mm)

    def members(self) -> Iterator[tuple[int, Kind]]:
        for q in QUADRANTS:
            for v in getattr(self, q):
                yield v, KIND_OF_QUADRANT[q]


EMPTY_BUBBLE = Bubble()


class Position(NamedTuple):
    row: int  # 1-based
    col: int  # 1-based
    kind: Kind


@dataclass(frozen=True)
class UBubbleModel:
    """Columns of bubbles; ``columns[j-1][i-1]`` is the bubble at row i, column j."""

    columns: tuple[tuple[Bubble, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(tuple(col) for col in self.columns))

    @property
    def k(self) -> int:
        return len(self.columns)

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(len(col) for col in self.columns)

    @property
    def rows(self) -> int:
        return max(self.heights, default=0)

    @property
    def n(self) -> int:
        return sum(b.size for col in self.columns for b in col)

    def bubble(self, i: int, j: int) -> Bubble:
        """Bubble at 1-based row i, column j; empty if outside the column."""
        if 1 <= j <= self.k and 1 <= i <= len(self.columns[j - 1]):
            return self.columns[j - 1][i - 1]
        return EMPTY_BUBBLE

    def top(self, j: int) -> int | None:
        for i, b in enumerate(self.columns[j - 1], start=1):
            if b:
                return i
        return None

    def column_size(self, j: int) -> int:
        return sum(b.size for b in self.columns[j - 1])

    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(v for col in self.columns for b in col for v in b.vertices))

    def positions(self) -> dict[int, Position]:
        pos = {}
        for j, col in enumerate(self.columns, start=1):
            for i, b in enumerate(col, start=1):
                for v, kind in b.members():
                    pos[v] = Position(i, j, kind)
        return pos


@dataclass(frozen=True)
class Cut:
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def complement(self, g: Graph) -> Cut:
        return Cut(frozenset(g.vertices) - self.members)


# --------------------------------------------------------------------------
# graph construction
# --------------------------------------------------------------------------


def graph_of_representation(rep: Representation | Iterable[UnitInterval]) -> Graph:
    """Intersection graph of a family of unit intervals.

    Sweeps intervals by left endpoint so the work is proportional to n plus
    the number of edges.
    """
    if not isinstance(rep, Representation):
        rep = Representation(tuple(rep))
    ivs = sorted(rep.intervals, key=lambda iv: iv.left)
    edges = set()
    for a in range(len(ivs)):
        u = ivs[a]
        limit = u.left + 1
        for b in range(a + 1, len(ivs)):
            v = ivs[b]
            if v.left > limit:
                break
            if intervals_intersect(u, v):
                edges.add((u.vertex, v.vertex))
    return Graph(rep.vertices, frozenset(edges))


def _model_adjacent(p: Position, q: Position) -> bool:
    if p.col == q.col:
        return True
    if p.col > q.col:
        p, q = q, p
    if q.col - p.col != 1:
        return False
    if p.row > q.row:
        return True
    return p.row == q.row and p.kind.right_closed and q.kind.left_closed


def graph_of_model(model: UBubbleModel) -> Graph:
    """Graph given by a bubble model (edges only within and between adjacent columns)."""
    pos = model.positions()
    if len(pos) != model.n:
        raise ValidationError("vertex ids repeat across quadrants")
    by_col: dict[int, list[int]] = {}
    for v, p in pos.items():
        by_col.setdefault(p.col, []).append(v)
    edges = set()
    for j in range(1, model.k + 1):
        here = by_col.get(j, [])
        for u, v in itertools.combinations(here, 2):
            edges.add((u, v))
        for u in here:
            pu = pos[u]
            for v in by_col.get(j + 1, []):
                if _model_adjacent(pu, pos[v]):
                    edges.add((u, v))
    return Graph(tuple(pos), frozenset(edges))


def cut_size(g: Graph, s: Cut | Iterable[int]) -> int:
    members = s.members if isinstance(s, Cut) else frozenset(s)
    extra = members - set(g.vertices)
    if extra:
        raise ValidationError(f"cut members not in graph: {sorted(extra)}")
    return sum((u in members) != (v in members) for u, v in g.edges)


# --------------------------------------------------------------------------
# model validation
# --------------------------------------------------------------------------


class Violation(NamedTuple):
    condition: str  # "ii", "iii", "iv" or "disjoint"
    index: int | None
    message: str

    def __str__(self) -> str:
        where = "" if self.index is None else f" at {self.index}"
        return f"({self.condition}){where}: {self.message}"


def validate_model(model: UBubbleModel) -> list[Violation]:
    """Check the bubble-model conditions; an empty list means valid.

    Indices in violations are 1-based column (or row, for row emptiness).
    """
    out: list[Violation] = []
    seen: dict[int, tuple[int, int]] = {}
    if model.k == 0:
        return [Violation("ii", None, "model has no columns")]
    filled_rows: set[int] = set()
    tops: list[int | None] = []
    for j, col in enumerate(model.columns, start=1):
        top = None
        for i, b in enumerate(col, start=1):
            if b is EMPTY_BUBBLE or not b:
                continue
            if top is None:
                top = i
            filled_rows.add(i)
            for v in b.vertices:
                if v in seen:
                    out.append(Violation("disjoint", j, f"vertex {v} repeats (also at {seen[v]})"))
                else:
                    seen[v] = (i, j)
        tops.append(top)
        if top is None:
            out.append(Violation("ii", j, "column has no nonempty bubble"))
    for i in range(1, model.rows + 1):
        if i not in filled_rows:
            out.append(Violation("ii", i, f"row {i} has no nonempty bubble"))
    for j, col in enumerate(model.columns, start=1):
        if col and not col[-1]:
            out.append(Violation("iii", j, "column ends with an empty bubble"))
    if tops[0] != 1:
        out.append(Violation("iv", 1, f"top(1) = {tops[0]}, expected 1"))
    for j in range(1, model.k):
        a, b = tops[j - 1], tops[j]
        if a is not None and b is not None and a > b:
            out.append(Violation("iv", j + 1, f"top({j}) = {a} > top({j + 1}) = {b}"))
    return out


def check_model(model: UBubbleModel) -> UBubbleModel:
    problems = validate_model(model)
    if problems:
        raise ValidationError("invalid bubble model: " + "; ".join(map(str, problems)))
    return model


def model_from_lists(columns: Sequence[Sequence[dict | Bubble]]) -> UBubbleModel:
    """Convenience constructor: bubbles given as dicts with keys pp/pm/mp/mm."""
    cols = []
    for col in columns:
        cols.append(tuple(b if isinstance(b, Bubble) else Bubble(**b) for b in col))
    return UBubbleModel(tuple(cols))
