"""Random planar diagrams built by inserting crossings into trivial braids.

Braid words are lists of nonzero integers: ``+i`` is a positive crossing
between positions ``i`` and ``i + 1`` (1-based), ``-i`` a negative one.
All strands run upwards.
"""

from __future__ import annotations

import random

from .diagram import Crossing, TangleDiagram


def _braid_crossings(strands: int, word: list[int]):
    bottom = list(range(1, strands + 1))
    current = list(bottom)
    fresh = strands + 1
    crossings = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < strands - 1:
            raise ValueError(f"generator {g} out of range for {strands} strands")
        a, b = current[i], current[i + 1]
        left, right = fresh, fresh + 1
        fresh += 2
        if g > 0:
            crossings.append((b, right, left, a))
        else:
            crossings.append((a, b, right, left))
        current[i], current[i + 1] = left, right
    return bottom, current, crossings


def _compact(crossings, boundary, circles) -> TangleDiagram:
    order: dict[int, int] = {}
    for x in crossings:
        for e in x:
            order.setdefault(e, len(order) + 1)
    return TangleDiagram(
        tuple(Crossing(tuple(order[e] for e in x)) for x in crossings),
        tuple(order[b] for b in boundary),
        circles,
    )


def braid_closure(strands: int, word: list[int]) -> TangleDiagram:
    bottom, top, crossings = _braid_crossings(strands, word)
    touched = {abs(g) - 1 for g in word} | {abs(g) for g in word}
    glue = {t: b for t, b in zip(top, bottom)}
    circles = strands - len(touched)
    crossings = [tuple(glue.get(e, e) for e in x) for x in crossings]
    return _compact(crossings, (), circles)


def braid_tangle(strands: int, word: list[int]) -> TangleDiagram:
    """Open braid; boundary runs along the bottom left to right, then the top right to left."""
    touched = {abs(g) - 1 for g in word} | {abs(g) for g in word}
    if len(touched) != strands:
        raise ValueError("every strand of an open braid must meet a crossing")
    bottom, top, crossings = _braid_crossings(strands, word)
    return _compact(crossings, tuple(bottom) + tuple(reversed(top)), 0)


def random_word(rng: random.Random, strands: int, length: int) -> list[int]:
    if strands < 2:
        return []
    return [rng.choice((1, -1)) * rng.randint(1, strands - 1) for _ in range(length)]


def random_closed(rng: random.Random, max_crossings: int = 6, max_strands: int = 3) -> TangleDiagram:
    """A random closed diagram with at most ``max_crossings`` crossings and at
    most ``max_strands`` components."""
    strands = rng.randint(1, max_strands)
    length = rng.randint(0, max_crossings) if strands > 1 else 0
    return braid_closure(strands, random_word(rng, strands, length))


def random_tangle(rng: random.Random, max_crossings: int = 6, max_strands: int = 3) -> TangleDiagram:
    while True:
        strands = rng.randint(2, max_strands)
        word = random_word(rng, strands, rng.randint(strands - 1, max_crossings))
        try:
            return braid_tangle(strands, word)
        except ValueError:
            continue
