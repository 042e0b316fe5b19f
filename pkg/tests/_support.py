"""Fixture loading and hypothesis strategies shared by the test modules."""

from __future__ import annotations

import ast
import random
import re
from dataclasses import dataclass
from pathlib import Path

from hypothesis import strategies as st

from khlee.diagram import TangleDiagram, parse_pd
from khlee.generate import braid_closure, braid_tangle, random_closed, random_tangle

ROOT = Path(__file__).resolve().parent.parent
FIXTURE_DIR = ROOT / "fixtures"
FIXTURES = sorted(p.stem for p in FIXTURE_DIR.glob("*.pd") if p.stem != "corrupt")
CLOSED = [f for f in FIXTURES if not parse_pd((FIXTURE_DIR / f"{f}.pd").read_text()).boundary]


@dataclass
class Fixture:
    name: str
    diagram: TangleDiagram
    c: int
    heights: dict[int, int]


def load_fixture(name: str) -> Fixture:
    text = (FIXTURE_DIR / f"{name}.pd").read_text()
    c = int(re.search(r"expected c:\s*(\d+)", text).group(1))
    heights = ast.literal_eval(re.search(r"expected heights:\s*(\{[^}]*\})", text).group(1))
    return Fixture(name, parse_pd(text), c, heights)


def random_diagrams(seed: int, count: int, closed: bool = True) -> list[TangleDiagram]:
    rng = random.Random(seed)
    make = random_closed if closed else random_tangle
    return [make(rng) for _ in range(count)]


@st.composite
def braid_words(draw, max_strands=3, max_len=6, min_len=0):
    strands = draw(st.integers(2, max_strands))
    gens = st.integers(1, strands - 1).flatmap(lambda i: st.sampled_from((i, -i)))
    return strands, draw(st.lists(gens, min_size=min_len, max_size=max_len))


closed_diagrams = braid_words().map(lambda sw: braid_closure(*sw))


def _open(sw):
    strands, word = sw
    return braid_tangle(strands, word)


open_tangles = braid_words(min_len=2).filter(
    lambda sw: {abs(g) for g in sw[1]} | {abs(g) + 1 for g in sw[1]} == set(range(1, sw[0] + 1))
).map(_open)
