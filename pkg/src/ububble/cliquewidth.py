"""Clique-width expressions: AST, evaluator, S-expression I/O and two builders.

``build_expr_columns`` uses one label per model column plus three scratch
labels.  ``build_expr_groups`` uses one label per live group of equal
next-column neighbourhoods, plus a dead label and one label for the vertex
being added.  Both return plain expression trees; all tree walks are
iterative so deep left-leaning expressions are fine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union as _U

from .bubble import BoundsReport, structural_report
from .core import Graph, UBubbleModel, ValidationError, check_model, graph_of_model


class ExpressionError(ValidationError):
    pass


@dataclass(frozen=True)
class CreateVertex:
    label: int
    vertex: int


@dataclass(frozen=True)
class Union:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Relabel:
    src: int
    dst: int
    child: "Expr"


@dataclass(frozen=True)
class Connect:
    i: int
    j: int
    child: "Expr"


Expr = _U[CreateVertex, Union, Relabel, Connect]


def _children(e: Expr) -> tuple:
    if isinstance(e, Union):
        return (e.left, e.right)
    if isinstance(e, (Relabel, Connect)):
        return (e.child,)
    return ()


def _postorder(expr: Expr):
    stack = [(expr, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(_children(node)):
            stack.append((c, False))


def labels_of(expr: Expr) -> set[int]:
    out: set[int] = set()
    for node in _postorder(expr):
        if isinstance(node, CreateVertex):
            out.add(node.label)
        elif isinstance(node, Relabel):
            out.update((node.src, node.dst))
        elif isinstance(node, Connect):
            out.update((node.i, node.j))
    return out


def width(expr: Expr) -> int:
    """Number of distinct labels mentioned anywhere in the tree."""
    return len(labels_of(expr))


def node_count(expr: Expr) -> int:
    return sum(1 for _ in _postorder(expr))


def eval_expression(expr: Expr) -> tuple[Graph, int]:
    """Evaluate bottom-up; returns the graph (labels dropped) and the width."""
    seen: set[int] = set()
    edges: set[tuple[int, int]] = set()
    results: list[dict[int, list[int]]] = []
    for node in _postorder(expr):
        if isinstance(node, CreateVertex):
            if node.vertex in seen:
                raise ExpressionError(f"vertex {node.vertex} is created twice")
            seen.add(node.vertex)
            results.append({node.label: [node.vertex]})
        elif isinstance(node, Union):
            right = results.pop()
            left = results.pop()
            if sum(map(len, left.values())) < sum(map(len, right.values())):
                left, right = right, left
            for lab, vs in right.items():
                left.setdefault(lab, []).extend(vs)
            results.append(left)
        elif isinstance(node, Relabel):
            top = results[-1]
            if node.src != node.dst and node.src in top:
                top.setdefault(node.dst, []).extend(top.pop(node.src))
        elif isinstance(node, Connect):
            if node.i == node.j:
                raise ExpressionError(f"connect needs two different labels, got {node.i} twice")
            top = results[-1]
            for u in top.get(node.i, ()):
                for v in top.get(node.j, ()):
                    edges.add((u, v) if u < v else (v, u))
        else:
            raise ExpressionError(f"unknown node {node!r}")
    return Graph(tuple(seen), frozenset(edges)), width(expr)


# --------------------------------------------------------------------------
# S-expressions
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def format_sexp(expr: Expr) -> str:
    parts: list[str] = []
    stack: list[object] = [expr]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif isinstance(item, CreateVertex):
            parts.append(f"(v {item.label} {item.vertex})")
        elif isinstance(item, Union):
            parts.append("(union ")
            stack.extend([")", item.right, " ", item.left])
        elif isinstance(item, Relabel):
            parts.append(f"(relabel {item.src} {item.dst} ")
            stack.extend([")", item.child])
        elif isinstance(item, Connect):
            parts.append(f"(connect {item.i} {item.j} ")
            stack.extend([")", item.child])
    return "".join(parts)


def _int(tok: str) -> int:
    if not re.fullmatch(r"-?\d+", tok):
        raise ExpressionError(f"expected an integer, got {tok!r}")
    return int(tok)


def parse_sexp(text: str) -> Expr:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ExpressionError("empty expression")
    # frames: [op, ints, children]
    frames: list[list] = []
    done: Expr | None = None
    pos = 0
    while pos < len(tokens):
        tok = tokens[pos]
        if done is not None:
            raise ExpressionError(f"trailing input at token {pos}: {tok!r}")
        if tok == "(":
            if pos + 1 >= len(tokens):
                raise ExpressionError("unexpected end of input")
            op = tokens[pos + 1]
            arity = {"v": 2, "union": 0, "relabel": 2, "connect": 2}.get(op)
            if arity is None:
                raise ExpressionError(f"unknown operator {op!r}")
            ints = [_int(t) for t in tokens[pos + 2 : pos + 2 + arity]]
            if len(ints) != arity:
                raise ExpressionError(f"{op} needs {arity} integers")
            frames.append([op, ints, []])
            pos += 2 + arity
            continue
        if tok != ")":
            raise ExpressionError(f"unexpected token {tok!r}")
        if not frames:
            raise ExpressionError("unbalanced ')'")
        op, ints, kids = frames.pop()
        want = {"v": 0, "union": 2, "relabel": 1, "connect": 1}[op]
        if len(kids) != want:
            raise ExpressionError(f"{op} takes {want} subexpressions, got {len(kids)}")
        if op == "v":
            node: Expr = CreateVertex(ints[0], ints[1])
        elif op == "union":
            node = Union(kids[0], kids[1])
        elif op == "relabel":
            node = Relabel(ints[0], ints[1], kids[0])
        else:
            node = Connect(ints[0], ints[1], kids[0])
        if frames:
            frames[-1][2].append(node)
        else:
            done = node
        pos += 1
    if frames or done is None:
        raise ExpressionError("unbalanced '('")
    return done


def diamond_expression() -> Expr:
    """The diamond on u=1, v=2, w=3, x=4 (all edges except vw) with two labels."""
    inner = Connect(1, 2, Union(Union(CreateVertex(1, 1), CreateVertex(2, 2)), CreateVertex(2, 3)))
    return Connect(1, 2, Union(Relabel(2, 1, inner), CreateVertex(2, 4)))


# --------------------------------------------------------------------------
# builder plumbing
# --------------------------------------------------------------------------


class _Builder:
    """Grows a left-deep expression and tracks how many vertices hold each label."""

    def __init__(self):
        self.expr: Expr | None = None
        self.live: dict[int, int] = {}

    def add(self, label: int, v: int) -> None:
        leaf = CreateVertex(label, v)
        self.expr = leaf if self.expr is None else Union(self.expr, leaf)
        self.live[label] = self.live.get(label, 0) + 1

    def connect(self, i: int, j: int) -> None:
        if i != j and self.live.get(i) and self.live.get(j):
            self.expr = Connect(i, j, self.expr)

    def relabel(self, src: int, dst: int) -> None:
        cnt = self.live.pop(src, 0)
        if cnt and src != dst:
            self.expr = Relabel(src, dst, self.expr)
            self.live[dst] = self.live.get(dst, 0) + cnt
        elif cnt:
            self.live[src] = cnt

    def result(self) -> Expr:
        if self.expr is None:
            raise ExpressionError("model has no vertices")
        return self.expr


# quadrant orders used by the two builders
_COLUMN_ORDER = ("mm", "pm", "mp", "pp")
_GROUP_ORDER = ("pp", "pm", "mp", "mm")


def build_expr_columns(model: UBubbleModel) -> Expr:
    """Expression with labels 1..k for columns and k+1..k+3 as scratch labels.

    Vertices go row by row, left to right, and within a bubble by quadrant
    (--, +-, -+, ++) then id.  Right-closed vertices of the bubble in
    progress sit on l2; those of the previous bubble in the same row on l1.
    """
    check_model(model)
    k = model.k
    l1, l2, l3 = k + 1, k + 2, k + 3
    heights = model.heights
    bld = _Builder()
    for i in range(1, model.rows + 1):
        for j in range(1, k + 1):
            if i > heights[j - 1]:
                continue
            b = model.bubble(i, j)
            nxt = j + 1 if j < k else None
            for q in _COLUMN_ORDER:
                for v in getattr(b, q):
                    if q in ("mm", "pm"):
                        bld.add(l3, v)
                        if nxt:
                            bld.connect(l3, nxt)
                        bld.connect(l3, j)
                        bld.connect(l3, l2)
                        if q == "pm":
                            bld.connect(l3, l1)
                        bld.relabel(l3, j)
                    else:
                        bld.add(l3, v)
                        if nxt:
                            bld.connect(l3, nxt)
                        bld.connect(l3, j)
                        bld.connect(l3, l2)
                        if q == "pp":
                            bld.connect(l3, l1)
                        bld.relabel(l3, l2)
            # bubble finished: the previous bubble's right side is no longer special
            if j > 1:
                bld.relabel(l1, j - 1)
            if nxt and i <= heights[nxt - 1]:
                bld.relabel(l2, l1)
            else:
                bld.relabel(l2, j)
    return bld.result()


# --------------------------------------------------------------------------
# groups
# --------------------------------------------------------------------------


@dataclass
class GroupStructure:
    """Per column: vertex -> group key (sorted next-column neighbourhood)."""

    key: dict[int, tuple[int, ...]] = field(default_factory=dict)
    column: dict[int, int] = field(default_factory=dict)
    groups: list[dict[tuple[int, ...], list[int]]] = field(default_factory=list)
    g: dict[int, int] = field(default_factory=dict)

    @property
    def phi(self) -> int:
        return max(self.g.values(), default=0)

    def group_of(self, v: int) -> tuple[int, tuple[int, ...]]:
        return self.column[v], self.key[v]

    def counts(self) -> list[int]:
        return [len(gs) for gs in self.groups]


def _next_neighbours(model: UBubbleModel, i: int, j: int, b_quadrant: str) -> tuple[int, ...]:
    """Neighbours in column j+1 of a vertex in quadrant ``b_quadrant`` of B_{i,j}."""
    if j >= model.k:
        return ()
    col = model.columns[j]
    out: list[int] = []
    for r in range(1, min(i - 1, len(col)) + 1):
        out.extend(col[r - 1].vertices)
    if b_quadrant in ("pp", "mp") and i <= len(col):
        out.extend(col[i - 1].left_closed)
    return tuple(sorted(out))


def group_structure(model: UBubbleModel) -> GroupStructure:
    check_model(model)
    gs = GroupStructure()
    for j, col in enumerate(model.columns, start=1):
        groups: dict[tuple[int, ...], list[int]] = {}
        for i, b in enumerate(col, start=1):
            for q in _GROUP_ORDER:
                quad = getattr(b, q)
                if not quad:
                    continue
                key = _next_neighbours(model, i, j, q)
                for v in quad:
                    gs.key[v] = key
                    gs.column[v] = j
                    groups.setdefault(key, []).append(v)
        gs.groups.append(groups)

    def gid(v: int):
        return gs.column[v], gs.key[v]

    for j, col in enumerate(model.columns, start=1):
        prev = model.columns[j - 2] if j > 1 else ()
        for i, b in enumerate(col, start=1):
            base: set = set()
            for r in range(i + 1, len(prev) + 1):
                base.update(gid(u) for u in prev[r - 1].vertices)
            for r in range(1, i):
                base.update(gid(u) for u in col[r - 1].vertices)
            left_rc = prev[i - 1].right_closed if i <= len(prev) else ()
            for v, kind in b.members():
                # A = right-closed of B_{i,j-1} plus left-closed of B_{i,j}, within N(v)
                a1 = set(gid(u) for u in b.left_closed if u != v)
                if kind.left_closed:
                    a1.update(gid(u) for u in left_rc)
                a2 = set(gid(u) for u in b.vertices if u != v)
                gs.g[v] = max(len(base | a1), len(base | a2))
    return gs


def phi(model: UBubbleModel) -> int:
    return group_structure(model).phi


def build_expr_groups(model: UBubbleModel, gs: GroupStructure | None = None) -> Expr:
    """Expression with label 1 for finished vertices and one label per live group.

    Vertices go column by column, top to bottom, and within a bubble by
    quadrant (++, +-, -+, --) then id.  Before a vertex arrives, every group
    not adjacent to it is moved to label 1; it never gains a neighbour again.
    """
    if gs is None:
        gs = group_structure(model)
    bld = _Builder()
    label_of: dict[tuple, int] = {}  # live group -> label
    used: set[int] = set()
    members_next: dict[tuple, frozenset] = {}
    for j, col in enumerate(model.columns, start=1):
        for i, b in enumerate(col, start=1):
            for q in _GROUP_ORDER:
                for v in getattr(b, q):
                    for grp in list(label_of):
                        gcol, key = grp
                        if gcol == j:
                            continue
                        if gcol == j - 1:
                            nbrs = members_next.get(grp)
                            if nbrs is None:
                                nbrs = members_next[grp] = frozenset(key)
                            if v in nbrs:
                                continue
                        lab = label_of.pop(grp)
                        used.discard(lab)
                        bld.relabel(lab, 1)
                    fresh = 2
                    while fresh in used:
                        fresh += 1
                    bld.add(fresh, v)
                    for lab in sorted(label_of.values()):
                        bld.connect(fresh, lab)
                    grp = (j, gs.key[v])
                    if grp in label_of:
                        bld.relabel(fresh, label_of[grp])
                    else:
                        label_of[grp] = fresh
                        used.add(fresh)
    return bld.result()


def cwd_upper_bounds(model: UBubbleModel) -> BoundsReport:
    rep = structural_report(model)
    rep.phi = phi(model)
    rep.groups_bound = rep.phi + 2
    rep.best = min(rep.best, rep.groups_bound)
    return rep


def check_expression(model: UBubbleModel, expr: Expr) -> tuple[bool, int]:
    """(evaluates to graph_of_model(model), width)."""
    g, w = eval_expression(expr)
    return g == graph_of_model(model), w


__all__ = [
    "Connect",
    "CreateVertex",
    "Expr",
    "ExpressionError",
    "GroupStructure",
    "Relabel",
    "Union",
    "build_expr_columns",
    "build_expr_groups",
    "check_expression",
    "cwd_upper_bounds",
    "diamond_expression",
    "eval_expression",
    "format_sexp",
    "group_structure",
    "labels_of",
    "node_count",
    "parse_sexp",
    "phi",
    "width",
]
