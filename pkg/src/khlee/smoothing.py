"""Smoothings, alternate colourings, and the orientation bijection."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .diagram import GREEN, RED, Dart, Orientation, TangleDiagram

# port pairs joined by the 0- and 1-smoothing of a crossing
RESOLUTION_PAIRS = {0: ((0, 1), (2, 3)), 1: ((0, 3), (1, 2))}


@dataclass(frozen=True, order=True)
class Curve:
    """A component of a crossingless 1-manifold.

    ``edges`` are the diagram edges the curve runs along (free circles use
    negative pseudo-edges); ``ends`` are its two boundary darts, or empty
    for a closed circle.
    """

    edges: tuple[int, ...]
    ends: tuple[Dart, ...] = ()

    @property
    def closed(self) -> bool:
        return not self.ends


@dataclass(frozen=True)
class Smoothing:
    """A crossingless smoothing of (part of) a diagram.

    ``choices`` records the resolution bit of every crossing that was
    resolved, as sorted ``(crossing, bit)`` pairs.
    """

    curves: tuple[Curve, ...]
    choices: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(sorted(self.curves)))
        object.__setattr__(self, "choices", tuple(sorted(self.choices)))

    @cached_property
    def curve_of_edge(self) -> dict[int, int]:
        return {e: i for i, c in enumerate(self.curves) for e in c.edges}

    @cached_property
    def curve_of_end(self) -> dict[Dart, int]:
        return {d: i for i, c in enumerate(self.curves) for d in c.ends}

    @property
    def boundary(self) -> tuple[Dart, ...]:
        return tuple(sorted(self.curve_of_end))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.choices)

    def __len__(self) -> int:
        return len(self.curves)

    def confluences(self, d: TangleDiagram) -> tuple[tuple[int, int, int], ...]:
        """Per resolved crossing: (crossing, curve of one arc segment, curve of the other)."""
        out = []
        for ci, bit in self.choices:
            ports = d.crossings[ci].ports
            (a, _), (b, _) = RESOLUTION_PAIRS[bit]
            out.append((ci, self.curve_of_edge[ports[a]], self.curve_of_edge[ports[b]]))
        return tuple(out)

    def to_json(self) -> dict:
        return {
            "choices": [b for _, b in self.choices],
            "curves": [list(c.edges) for c in self.curves],
        }


@dataclass(frozen=True)
class ColouredSmoothing:
    smoothing: Smoothing
    colours: tuple[str, ...]

    def __post_init__(self):
        if len(self.colours) != len(self.smoothing.curves):
            raise ValueError("one colour per curve required")
        if any(c not in (RED, GREEN) for c in self.colours):
            raise ValueError(f"colours must be {RED!r} or {GREEN!r}")

    def is_alternating(self, d: TangleDiagram) -> bool:
        return all(self.colours[i] != self.colours[j] for _, i, j in self.smoothing.confluences(d))

    def sort_key(self):
        return (self.smoothing.bits, self.colours)

    def to_json(self) -> dict:
        return {"choices": list(self.smoothing.bits), "colours": list(self.colours)}


def _union_find(items: Iterable):
    parent = {x: x for x in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    return parent, find


def resolve_piece(
    d: TangleDiagram, choices: Mapping[int, int], with_circles: bool | None = None
) -> Smoothing:
    """Resolve the sub-tangle made of the crossings in ``choices``.

    Edges with both ends among these crossings are internal; every other
    dart at these crossings becomes an end of an arc.  Free circles are
    included by default only when all crossings are resolved.
    """
    darts = [d.port_dart[(ci, p)] for ci in choices for p in range(4)]
    parent, find = _union_find(darts)
    for ci, bit in choices.items():
        for a, b in RESOLUTION_PAIRS[bit]:
            parent[find(d.port_dart[(ci, a)])] = find(d.port_dart[(ci, b)])
    present = set(darts)
    for e, s in darts:
        if s == 0 and (e, 1) in present:
            parent[find((e, 0))] = find((e, 1))
    groups: dict = {}
    for x in darts:
        groups.setdefault(find(x), []).append(x)
    curves = []
    for g in groups.values():
        edges = tuple(sorted({e for e, _ in g}))
        ends = tuple(sorted(x for x in g if (x[0], 1 - x[1]) not in present))
        curves.append(Curve(edges, ends))
    if with_circles is None:
        with_circles = len(choices) == d.n
    if with_circles:
        curves.extend(Curve((-(i + 1),)) for i in range(d.circles))
    return Smoothing(tuple(curves), tuple(choices.items()))


def resolve(d: TangleDiagram, choices: Iterable[int]) -> Smoothing:
    choices = tuple(choices)
    if len(choices) != d.n:
        raise ValueError(f"expected {d.n} resolution choices, got {len(choices)}")
    return resolve_piece(d, dict(enumerate(choices)), with_circles=True)


def alternating_colourings(d: TangleDiagram, s: Smoothing) -> list[tuple[str, ...]]:
    """All alternate colourings of ``s``, by parity propagation over confluences."""
    k = len(s.curves)
    parent = list(range(k))
    parity = [0] * k  # colour relative to root

    def find(x):
        if parent[x] == x:
            return x, 0
        r, p = find(parent[x])
        parent[x] = r
        parity[x] ^= p
        return r, parity[x]

    for _, i, j in s.confluences(d):
        ri, pi = find(i)
        rj, pj = find(j)
        if ri == rj:
            if pi == pj:
                return []
            continue
        parent[ri] = rj
        parity[ri] = pi ^ pj ^ 1
    roots = sorted({find(i)[0] for i in range(k)})
    out = []
    for bits in itertools.product((0, 1), repeat=len(roots)):
        base = dict(zip(roots, bits))
        out.append(tuple(RED if base[find(i)[0]] ^ find(i)[1] == 0 else GREEN for i in range(k)))
    out.sort()
    return out


def enumerate_alternately_coloured(d: TangleDiagram) -> list[ColouredSmoothing]:
    out = []
    for bits in itertools.product((0, 1), repeat=d.n):
        s = resolve(d, bits)
        out.extend(ColouredSmoothing(s, col) for col in alternating_colourings(d, s))
    return out


def oriented_choices(d: TangleDiagram, o: Orientation) -> tuple[int, ...]:
    """0 at crossings that are positive under ``o``, 1 at negative ones."""
    return tuple(0 if d.crossing_sign(ci, o) > 0 else 1 for ci in range(d.n))


def orientation_to_colouring(d: TangleDiagram, o: Orientation) -> ColouredSmoothing:
    s = resolve(d, oriented_choices(d, o))
    board = d.checkerboard
    colours = []
    for curve in s.curves:
        seen = {
            board[d.right_region(e, not o.reversed[d.component_of_edge[e]])]
            for e in curve.edges
        }
        assert len(seen) == 1, f"right-hand colours disagree along curve {curve.edges}"
        colours.append(seen.pop())
    cs = ColouredSmoothing(s, tuple(colours))
    assert cs.is_alternating(d)
    return cs


def colouring_to_orientation(d: TangleDiagram, cs: ColouredSmoothing) -> Orientation:
    board = d.checkerboard
    s = cs.smoothing
    flags = []
    for strand in d.strands:
        votes = {
            cs.colours[s.curve_of_edge[e]] != board[d.right_region(e, True)]
            for e in strand.edges
        }
        if len(votes) != 1:
            raise ValueError(f"colouring induces inconsistent orientation on strand {strand.edges}")
        flags.append(votes.pop())
    o = Orientation(tuple(flags))
    if oriented_choices(d, o) != s.bits:
        raise ValueError("smoothing is not the oriented smoothing of the induced orientation")
    return o


def generator_height(d: TangleDiagram, o: Orientation) -> int:
    by_linking = d.linking_sum(o)
    by_cube = sum(oriented_choices(d, o)) - d.n_minus
    assert by_linking == by_cube, (by_linking, by_cube)
    return by_linking
