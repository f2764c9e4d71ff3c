"""Seeded generators of interval representations and bubble models.

The random source is SplitMix64, so a given parameter set yields the same
instance on any platform and in any language that implements it.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .bubble import build_model
from .core import Kind, Representation, UBubbleModel, UnitInterval

MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection (no modulo bias)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound

    def unit(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class GenParams:
    n: int
    seed: int = 0
    grid: int = 2  # left ends are multiples of 1/grid
    window: int = 4  # left ends lie in [0, window]
    kind_weights: tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)  # ++, +-, -+, --
    twin_rate: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.grid < 1 or self.window < 0:
            raise ValueError("grid must be positive and window nonnegative")
        if len(self.kind_weights) != 4 or min(self.kind_weights) < 0 or sum(self.kind_weights) <= 0:
            raise ValueError("kind_weights needs four nonnegative weights with a positive sum")
        object.__setattr__(self, "kind_weights", tuple(float(w) for w in self.kind_weights))


def _pick_kind(rng: SplitMix64, weights) -> Kind:
    u = rng.unit() * sum(weights)
    acc = 0.0
    for kind, w in zip(Kind, weights):
        acc += w
        if u < acc and w > 0:
            return kind
    return [k for k, w in zip(Kind, weights) if w > 0][-1]


def random_representation(p: GenParams) -> Representation:
    rng = SplitMix64(p.seed)
    slots = p.window * p.grid + 1
    out: list[UnitInterval] = []
    for v in range(p.n):
        if out and p.twin_rate > 0 and rng.unit() < p.twin_rate:
            src = out[rng.below(len(out))]
            out.append(UnitInterval(v, src.left, src.kind))
            continue
        left = Fraction(rng.below(slots), p.grid)
        out.append(UnitInterval(v, left, _pick_kind(rng, p.kind_weights)))
    return Representation(tuple(out))


def random_model(p: GenParams) -> UBubbleModel:
    return build_model(random_representation(p))


def corpus_params(size: int = 500, seed: int = 2024, max_n: int = 14) -> list[GenParams]:
    """Parameter sets of the default oracle corpus; instance t uses seed ``seed ^ t``."""
    grids = (1, 2, 3, 4)
    windows = (1, 2, 3, 4, 6)
    weight_menu = (
        (1.0, 1.0, 1.0, 1.0),
        (1.0, 0.0, 0.0, 0.0),
        (3.0, 1.0, 1.0, 1.0),
        (1.0, 1.0, 1.0, 3.0),
    )
    out = []
    for t in range(size):
        rng = SplitMix64(seed ^ t)
        out.append(
            GenParams(
                n=1 + rng.below(max_n),
                seed=rng.next_u64(),
                grid=grids[rng.below(len(grids))],
                window=windows[rng.below(len(windows))],
                kind_weights=weight_menu[rng.below(len(weight_menu))],
                twin_rate=(0.0, 0.15, 0.4)[rng.below(3)],
            )
        )
    return out


def default_corpus(size: int = 500, seed: int = 2024, max_n: int = 14) -> list[UBubbleModel]:
    return [random_model(p) for p in corpus_params(size, seed, max_n)]


def params_dict(p: GenParams) -> dict:
    return asdict(p)


__all__ = [
    "GenParams",
    "SplitMix64",
    "corpus_params",
    "default_corpus",
    "params_dict",
    "random_model",
    "random_representation",
]
