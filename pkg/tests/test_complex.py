import pytest
from hypothesis import given, settings

from khlee.cobordism import KHOVANOV, LEE, CobMorphism
from khlee.complex import (
    FormalComplex,
    colour_split,
    gaussian_eliminate,
    joining_diagram,
    khovanov_cube,
    planar_tensor,
)
from khlee.diagram import GREEN, RED, parse_pd
from khlee.karoubi import KarMorphism, KarObject
from khlee.oracle import FrobeniusData, lee_homology, tqft_evaluate
from khlee.smoothing import Curve, Smoothing

from _support import closed_diagrams, load_fixture, open_tangles


def test_two_braid_cube_shape():
    d = load_fixture("two_braid").diagram
    c = khovanov_cube(d)
    assert c.counts() == {0: 1, 1: 2, 2: 1}
    assert len(list(c.entries())) == 4
    assert c.d_squared_is_zero()


def test_negative_crossing_shifts_down():
    d = parse_pd("X 1 4 2 3\nBOUNDARY 1 4 2 3").mirror()
    assert d.signs == (-1,)
    assert khovanov_cube(d).counts() == {-1: 1, 0: 1}


@pytest.mark.parametrize("theory", [KHOVANOV, LEE], ids=["khovanov", "lee"])
def test_fixture_cubes_square_to_zero(fixture, theory):
    assert khovanov_cube(fixture.diagram, theory).d_squared_is_zero()


@settings(max_examples=25, deadline=None)
@given(closed_diagrams.filter(lambda d: d.n <= 5))
def test_random_cubes_square_to_zero(d):
    c = khovanov_cube(d)
    assert c.d_squared_is_zero()
    assert len(c) == 2**d.n


def test_split_single_crossing():
    d = parse_pd("X 1 4 2 3\nBOUNDARY 1 4 2 3")
    s = colour_split(khovanov_cube(d, LEE, [0]))
    assert s.counts() == {0: 4, 1: 4}
    entries = [(s.objects[h][i].colours, s.objects[h + 1][j].colours, m.scalar) for h, j, i, m in s.entries()]
    assert sorted(entries) == [((GREEN, GREEN), (GREEN, GREEN), 1), ((RED, RED), (RED, RED), 1)]
    r = gaussian_eliminate(s)
    assert r.counts() == {0: 2, 1: 2}
    assert r.has_zero_differential()
    assert all(o.coloured_smoothing.is_alternating(d) for objs in r.objects.values() for o in objs)


def test_split_needs_lee():
    d = parse_pd("X 1 4 2 3\nBOUNDARY 1 4 2 3")
    with pytest.raises(ValueError):
        colour_split(khovanov_cube(d, KHOVANOV))


def test_elimination_cancels_identity():
    s = Smoothing((Curve((-1,)),))
    a, b = KarObject.plain(s), KarObject.plain(s)
    c = FormalComplex({0: [a], 1: [b]}, {0: {(0, 0): KarMorphism(a, b, CobMorphism.identity(s, LEE))}})
    assert len(gaussian_eliminate(c)) == 0


def test_elimination_keeps_non_invertible():
    s = Smoothing((Curve((-1,)),))
    a = KarObject.plain(s, KHOVANOV)
    dot = KarMorphism(a, a, CobMorphism.identity(s, KHOVANOV, [0]))
    c = FormalComplex({0: [a], 1: [a]}, {0: {(0, 0): dot}})
    assert gaussian_eliminate(c).counts() == {0: 1, 1: 1}


@pytest.mark.parametrize("name", ["trefoil", "hopf_negative", "figure_eight"])
def test_planar_tensor_of_crossings_matches_cube(name):
    d = load_fixture(name).diagram
    pieces = [khovanov_cube(d, LEE, [ci]) for ci in range(d.n)]
    whole = planar_tensor(joining_diagram(pieces), pieces)
    assert whole.counts() == khovanov_cube(d).counts()
    assert whole.d_squared_is_zero()
    assert tqft_evaluate(whole, FrobeniusData(1)).homology_ranks() == lee_homology(d)
    assert tqft_evaluate(whole, FrobeniusData(0)).homology_ranks() == lee_homology(d, 0)


@settings(max_examples=15, deadline=None)
@given(closed_diagrams.filter(lambda d: d.n <= 4))
def test_elimination_preserves_oracle_ranks(d):
    frob = FrobeniusData(1)
    split = colour_split(khovanov_cube(d))
    assert split.d_squared_is_zero()
    reduced = gaussian_eliminate(split)
    assert reduced.d_squared_is_zero()
    want = lee_homology(d)
    assert tqft_evaluate(split, frob).homology_ranks() == want
    assert tqft_evaluate(reduced, frob).homology_ranks() == want


@settings(max_examples=20, deadline=None)
@given(open_tangles.filter(lambda d: d.n <= 4))
def test_split_tangle_cubes_reduce_to_zero_differential(d):
    reduced = gaussian_eliminate(colour_split(khovanov_cube(d)))
    assert reduced.has_zero_differential()
    assert len(reduced) == 2**d.c


def test_complex_json_is_ordered():
    d = load_fixture("two_braid").diagram
    js = khovanov_cube(d).to_json()
    assert [h["h"] for h in js["heights"]] == [0, 1, 2]
    assert [len(e["entries"]) for e in js["differentials"]] == [2, 2]
