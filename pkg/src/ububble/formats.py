"""Text formats: ``.muir`` interval lists and bubble-model JSON."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .core import (
    Bubble,
    Kind,
    QUADRANTS,
    Representation,
    UBubbleModel,
    UnitInterval,
    ValidationError,
    to_rational,
)

# JSON keys for quadrants, in Kind order
JSON_KEYS = ("pp", "pm", "mp", "mm")


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_muir(text: str) -> Representation:
    """Parse ``<vertex-id> <kind> <left>`` lines; ``#`` comments, blank lines skipped."""
    intervals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValidationError(f"line {lineno}: expected '<id> <kind> <left>', got {raw!r}")
        vid, kind, left = parts
        try:
            vertex = int(vid)
        except ValueError:
            raise ValidationError(f"line {lineno}: bad vertex id {vid!r}") from None
        if vertex < 0:
            raise ValidationError(f"line {lineno}: negative vertex id {vertex}")
        try:
            intervals.append(UnitInterval(vertex, to_rational(left), Kind.parse(kind)))
        except ValidationError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
    if not intervals:
        raise ValidationError("no intervals in input")
    return Representation(tuple(intervals))


def format_muir(rep: Representation) -> str:
    lines = [f"{iv.vertex} {iv.kind.value} {format_rational(iv.left)}" for iv in rep.intervals]
    return "\n".join(lines) + "\n"


def read_muir(path) -> Representation:
    return parse_muir(Path(path).read_text(encoding="utf-8"))


def write_muir(rep: Representation, path) -> None:
    Path(path).write_text(format_muir(rep), encoding="utf-8")


def model_to_dict(model: UBubbleModel) -> dict:
    return {
        "columns": [
            [{key: list(getattr(b, q)) for key, q in zip(JSON_KEYS, QUADRANTS)} for b in col]
            for col in model.columns
        ]
    }


def model_from_dict(data: dict) -> UBubbleModel:
    if not isinstance(data, dict) or not isinstance(data.get("columns"), list):
        raise ValidationError("model JSON needs a 'columns' list")
    cols = []
    for j, col in enumerate(data["columns"], start=1):
        if not isinstance(col, list):
            raise ValidationError(f"column {j} is not a list")
        bubbles = []
        for i, b in enumerate(col, start=1):
            if not isinstance(b, dict):
                raise ValidationError(f"bubble ({i},{j}) is not an object")
            unknown = set(b) - set(JSON_KEYS)
            if unknown:
                raise ValidationError(f"bubble ({i},{j}) has unknown keys {sorted(unknown)}")
            quads = {}
            for key, q in zip(JSON_KEYS, QUADRANTS):
                ids = b.get(key, [])
                if not isinstance(ids, list) or not all(
                    isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in ids
                ):
                    raise ValidationError(f"bubble ({i},{j}) quadrant {key} must list vertex ids")
                quads[q] = tuple(ids)
            bubbles.append(Bubble(**quads))
        cols.append(tuple(bubbles))
    return UBubbleModel(tuple(cols))


def dumps_model(model: UBubbleModel) -> str:
    return json.dumps(model_to_dict(model), separators=(",", ":"))


def loads_model(text: str) -> UBubbleModel:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed model JSON: {exc}") from None
    return model_from_dict(data)


def read_model(path) -> UBubbleModel:
    return loads_model(Path(path).read_text(encoding="utf-8"))


def write_model(model: UBubbleModel, path) -> None:
    Path(path).write_text(dumps_model(model) + "\n", encoding="utf-8")
