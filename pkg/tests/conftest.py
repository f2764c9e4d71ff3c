from __future__ import annotations

import itertools
import json
import os
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ububble.core import Graph
from ububble.formats import model_from_dict
from ububble.gen import GenParams

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@lru_cache(maxsize=1)
def frozen_corpus() -> list:
    data = json.loads((FIXTURES / "corpus.json").read_text())
    return [(inst["params"], model_from_dict(inst["model"])) for inst in data["instances"]]


def gen_params(max_n: int = 14, min_n: int = 1):
    """Hypothesis strategy over generator parameters; small grids force coincidences."""
    return st.builds(
        GenParams,
        n=st.integers(min_n, max_n),
        seed=st.integers(0, 2**63),
        grid=st.sampled_from([1, 2, 3, 4, 6]),
        window=st.sampled_from([1, 2, 3, 5, 8]),
        kind_weights=st.sampled_from(
            [(1, 1, 1, 1), (1, 0, 0, 0), (0, 0, 0, 1), (0, 1, 1, 0), (3, 1, 1, 1), (1, 1, 1, 3)]
        ),
        twin_rate=st.sampled_from([0.0, 0.2, 0.5]),
    )


# brute-force oracles over explicit graphs -----------------------------------


def brute_alpha(g: Graph) -> int:
    adj = g.adjacency()
    vs = list(g.vertices)
    best = 0
    for mask in range(1 << len(vs)):
        chosen = [vs[t] for t in range(len(vs)) if mask >> t & 1]
        if len(chosen) > best and all(b not in adj[a] for a, b in itertools.combinations(chosen, 2)):
            best = len(chosen)
    return best


def brute_omega(g: Graph) -> int:
    adj = g.adjacency()
    vs = list(g.vertices)
    best = 0
    for mask in range(1 << len(vs)):
        chosen = [vs[t] for t in range(len(vs)) if mask >> t & 1]
        if len(chosen) > best and all(b in adj[a] for a, b in itertools.combinations(chosen, 2)):
            best = len(chosen)
    return best


def naive_maxcut(g: Graph) -> int:
    """Direct enumeration, independent of the packaged kernels."""
    vs = list(g.vertices)
    best = 0
    for mask in range(1 << max(len(vs) - 1, 0)):
        side = {vs[t + 1] for t in range(len(vs) - 1) if mask >> t & 1}
        best = max(best, sum((u in side) != (v in side) for u, v in g.edges))
    return best
