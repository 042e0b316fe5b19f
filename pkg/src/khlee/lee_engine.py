"""End-to-end Lee pipeline: split each crossing into colours, cancel the
invertible saddles, fold the pieces together and cross-check the result."""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from .cobordism import LEE
from .complex import (
    FormalComplex,
    colour_split,
    gaussian_eliminate,
    joining_diagram,
    khovanov_cube,
    planar_tensor,
)
from .diagram import GREEN, RED, TangleDiagram
from .karoubi import ColouredObject
from .oracle import lee_homology
from .smoothing import (
    ColouredSmoothing,
    Curve,
    Smoothing,
    colouring_to_orientation,
    enumerate_alternately_coloured,
    generator_height,
    orientation_to_colouring,
)


@dataclass(frozen=True)
class LeeGenerator:
    coloured: ColouredSmoothing
    height: int

    def sort_key(self):
        return (self.height,) + self.coloured.sort_key()

    def to_json(self) -> dict:
        return {
            "smoothing": self.coloured.smoothing.to_json(),
            "colours": list(self.coloured.colours),
            "height": self.height,
        }


def split_crossing(d: TangleDiagram, ci: int) -> FormalComplex:
    """The one-crossing cube with every object split into its four colourings."""
    return colour_split(khovanov_cube(d, LEE, [ci]))


def crossing_piece(d: TangleDiagram, ci: int) -> FormalComplex:
    """Two coloured objects per height with zero differential."""
    return gaussian_eliminate(split_crossing(d, ci))


def fold_order(d: TangleDiagram, crossings: list[int]) -> list[int]:
    """Greedy connection order: next is the crossing sharing most edges so far."""
    left = sorted(crossings)
    if not left:
        return []
    order = [left.pop(0)]
    seen = set(d.crossings[order[0]].ports)
    while left:
        best = max(left, key=lambda ci: (len(seen & set(d.crossings[ci].ports)), -ci))
        left.remove(best)
        order.append(best)
        seen |= set(d.crossings[best].ports)
    return order


def circle_complex(index: int) -> FormalComplex:
    s = Smoothing((Curve((-(index + 1),)),))
    return FormalComplex({0: [ColouredObject(s, (RED,)), ColouredObject(s, (GREEN,))]})


def lee_complex(d: TangleDiagram, crossings: list[int] | None = None) -> FormalComplex:
    """Fold crossing pieces one at a time; mixed-colour strands are dropped
    as soon as they are glued.  Free circles join only for the full diagram."""
    full = crossings is None
    crossings = list(range(d.n)) if full else list(crossings)
    pieces = [crossing_piece(d, ci) for ci in fold_order(d, crossings)]
    if full:
        pieces += [circle_complex(i) for i in range(d.circles)]
    if not pieces:
        return FormalComplex({0: [ColouredObject(Smoothing(()), ())]})
    acc = pieces[0]
    for p in pieces[1:]:
        acc = planar_tensor(joining_diagram([acc, p]), [acc, p])
        if acc.differential:
            acc = gaussian_eliminate(acc)
    return acc


def generators_of(c: FormalComplex) -> list[LeeGenerator]:
    out = [LeeGenerator(o.coloured_smoothing, h) for h, objs in c.objects.items() for o in objs]
    return sorted(out, key=LeeGenerator.sort_key)


def lee_generators(d: TangleDiagram) -> list[LeeGenerator]:
    c = lee_complex(d)
    if not c.has_zero_differential():
        raise AssertionError("pipeline left a nonzero differential")
    return generators_of(c)


def enumerated_generators(d: TangleDiagram) -> list[LeeGenerator]:
    out = [
        LeeGenerator(cs, generator_height(d, colouring_to_orientation(d, cs)))
        for cs in enumerate_alternately_coloured(d)
    ]
    return sorted(out, key=LeeGenerator.sort_key)


def bijection_round_trips(d: TangleDiagram) -> bool:
    for o in d.orientations():
        if colouring_to_orientation(d, orientation_to_colouring(d, o)) != o:
            return False
    for cs in enumerate_alternately_coloured(d):
        if orientation_to_colouring(d, colouring_to_orientation(d, cs)) != cs:
            return False
    return True


@dataclass
class VerificationReport:
    diagram: str
    c: int
    pipeline: list[LeeGenerator]
    enumeration: list[LeeGenerator]
    oracle_ranks: dict[int, int] | None
    checks: dict[str, bool]
    timing: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def heights(self) -> dict[int, int]:
        return dict(sorted(Counter(g.height for g in self.pipeline).items()))

    def to_json(self) -> dict:
        # timing is left out so that reports are byte-identical across runs
        return {
            "diagram": self.diagram,
            "c": self.c,
            "expected": 2 ** self.c,
            "generators": [g.to_json() for g in self.pipeline],
            "oracle_ranks": None if self.oracle_ranks is None else {str(h): r for h, r in sorted(self.oracle_ranks.items())},
            "checks": {k: "pass" if v else "fail" for k, v in self.checks.items()},
        }


def verify(d: TangleDiagram, oracle: bool = True) -> VerificationReport:
    timing = {}
    t0 = time.perf_counter()
    c = lee_complex(d)
    pipeline = generators_of(c)
    timing["pipeline"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    enumeration = enumerated_generators(d)
    timing["enumeration"] = time.perf_counter() - t0
    expected = 2 ** d.c
    heights = Counter(g.height for g in pipeline)
    checks = {
        "zero_differential": c.has_zero_differential(),
        "pipeline_equals_enumeration": pipeline == enumeration,
        "count_is_2^c": len(pipeline) == expected and len(enumeration) == expected,
        "heights_equal_linking_sum": all(
            g.height == d.linking_sum(colouring_to_orientation(d, g.coloured)) for g in enumeration
        ),
        "orientation_bijection": bijection_round_trips(d),
    }
    ranks = None
    if oracle and not d.boundary:
        t0 = time.perf_counter()
        ranks = lee_homology(d)
        timing["oracle"] = time.perf_counter() - t0
        checks["oracle_total_is_2^c"] = sum(ranks.values()) == expected
        checks["oracle_heights_match"] = ranks == dict(heights)
    return VerificationReport(d.to_pd(), d.c, pipeline, enumeration, ranks, checks, timing)
