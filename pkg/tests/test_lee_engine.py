import json
import random
from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from khlee.complex import joining_diagram, planar_tensor
from khlee.diagram import GREEN, RED, parse_pd
from khlee.lee_engine import (
    circle_complex,
    crossing_piece,
    enumerated_generators,
    generators_of,
    lee_complex,
    lee_generators,
    split_crossing,
    verify,
)

from _support import closed_diagrams, load_fixture, open_tangles

POS = parse_pd("X 1 4 2 3\nBOUNDARY 1 4 2 3")


def _summary(gens):
    return sorted((g.height, g.coloured.smoothing.bits, g.coloured.colours) for g in gens)


def test_positive_crossing_piece():
    split = split_crossing(POS, 0)
    assert split.counts() == {0: 4, 1: 4}
    assert len(list(split.entries())) == 2
    piece = crossing_piece(POS, 0)
    assert piece.counts() == {0: 2, 1: 2}
    assert piece.has_zero_differential()
    cols = {h: sorted(o.colours for o in objs) for h, objs in piece.objects.items()}
    assert cols == {0: [(GREEN, RED), (RED, GREEN)], 1: [(GREEN, RED), (RED, GREEN)]}


def test_negative_crossing_piece():
    piece = crossing_piece(POS.mirror(), 0)
    assert piece.counts() == {-1: 2, 0: 2}
    assert piece.has_zero_differential()


def test_fixture_generators(fixture):
    gens = lee_generators(fixture.diagram)
    assert len(gens) == 2**fixture.c
    assert dict(Counter(g.height for g in gens)) == fixture.heights
    assert gens == enumerated_generators(fixture.diagram)


def test_empty_diagram_has_one_generator():
    gens = lee_generators(parse_pd(""))
    assert len(gens) == 1 and gens[0].height == 0


def test_crossings_plus_loose_circle():
    d = load_fixture("hopf_negative").diagram.disjoint_union(parse_pd("CIRCLES 1"))
    report = verify(d)
    assert report.passed
    assert report.heights() == {-2: 4, 0: 4}


def test_fixture_reports_pass(fixture):
    report = verify(fixture.diagram)
    assert report.passed, report.checks
    if fixture.diagram.boundary:
        assert report.oracle_ranks is None
    else:
        assert report.oracle_ranks == fixture.heights


def test_report_json_is_deterministic():
    d = load_fixture("whitehead").diagram
    a, b = (json.dumps(verify(d).to_json(), sort_keys=True) for _ in range(2))
    assert a == b
    js = json.loads(a)
    assert js["c"] == 2 and js["expected"] == 4
    assert js["oracle_ranks"] == {"0": 4}
    assert "timing" not in js


@settings(max_examples=40, deadline=None)
@given(closed_diagrams)
def test_random_closed_verify(d):
    report = verify(d)
    assert report.passed, (d.to_pd(), report.checks)


@settings(max_examples=40, deadline=None)
@given(open_tangles)
def test_random_tangle_verify(d):
    report = verify(d)
    assert report.passed, (d.to_pd(), report.checks)


def _canonical(gens, rename=None):
    """Generators up to crossing order: height plus the colour of each curve, by edge set."""
    rename = rename or {}
    return Counter(
        (
            g.height,
            frozenset(
                (frozenset(rename.get(e, e) for e in c.edges), col)
                for c, col in zip(g.coloured.smoothing.curves, g.coloured.colours)
            ),
        )
        for g in gens
    )


@settings(max_examples=25, deadline=None)
@given(closed_diagrams.filter(lambda d: d.n > 0), st.integers(0, 2**32))
def test_generators_invariant_under_relabelling_and_reordering(d, seed):
    rng = random.Random(seed)
    labels = list(d.edges)
    image = labels[:]
    rng.shuffle(image)
    text = d.relabel(dict(zip(labels, image))).to_pd().splitlines()
    rng.shuffle(text)
    e = parse_pd("\n".join(text))
    back = dict(zip(image, labels))
    assert _canonical(lee_generators(e), back) == _canonical(lee_generators(d))


@settings(max_examples=25, deadline=None)
@given(st.one_of(closed_diagrams, open_tangles).filter(lambda d: d.n >= 2), st.integers(0, 2**32))
def test_locality(d, seed):
    rng = random.Random(seed)
    crossings = list(range(d.n))
    rng.shuffle(crossings)
    cut = rng.randint(1, d.n - 1)
    left, right = lee_complex(d, crossings[:cut]), lee_complex(d, crossings[cut:])
    glued = planar_tensor(joining_diagram([left, right]), [left, right])
    for i in range(d.circles):
        glued = planar_tensor(joining_diagram([glued, circle_complex(i)]), [glued, circle_complex(i)])
    assert glued.has_zero_differential()
    assert _summary(generators_of(glued)) == _summary(lee_generators(d))


def test_two_braid_locality():
    d = load_fixture("two_braid").diagram
    a, b = crossing_piece(d, 0), crossing_piece(d, 1)
    glued = planar_tensor(joining_diagram([a, b]), [a, b])
    assert glued.counts() == {0: 2, 2: 2}
    assert _summary(generators_of(glued)) == _summary(lee_generators(d))
