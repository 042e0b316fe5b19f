import pytest
from hypothesis import given, settings

from khlee.diagram import GREEN, RED, Orientation, PDError, parse_pd
from khlee.generate import braid_closure

from _support import closed_diagrams, load_fixture, open_tangles

TREFOIL = "X 1 4 2 5\nX 3 6 4 1\nX 5 2 6 3\n"


def test_trefoil_parses_with_three_negative_crossings():
    d = parse_pd(TREFOIL)
    assert d.n == 3 and d.c == 1
    assert d.signs == (-1, -1, -1)
    assert d.n_regions == 5


def test_single_crossing_tangle():
    d = parse_pd("X 1 4 2 3\nBOUNDARY 1 4 2 3")
    assert d.signs == (1,)
    assert d.c == 2
    assert len(d.boundary) == 4


def test_boundary_order_must_be_planar():
    with pytest.raises(PDError):
        parse_pd("X 1 3 2 4\nBOUNDARY 1 2 3 4")
    assert parse_pd("X 1 3 2 4\nBOUNDARY 1 3 2 4").c == 2


def test_kinked_unknot_and_free_circles():
    assert parse_pd("X 1 1 2 2").c == 1
    d = parse_pd("# two loose circles\nCIRCLES 2\n")
    assert d.n == 0 and d.c == 2
    assert parse_pd("").c == 0


@pytest.mark.parametrize(
    "text, line",
    [
        ("X 1 4 2 5\nX 3 6 4\nX 5 2 6 3", 2),
        ("X 1 2 3 4\nFOO 1", 2),
        ("\n\nX 1 a 2 3", 3),
    ],
)
def test_parse_errors_report_line(text, line):
    with pytest.raises(PDError) as exc:
        parse_pd(text)
    assert exc.value.line == line
    assert f"line {line}" in str(exc.value)


@pytest.mark.parametrize(
    "text",
    [
        "X 1 2 3 4",  # dangling edges, no boundary
        "X 1 2 3 4\nX 1 2 3 4\nX 1 2 3 4",  # edge used thrice
        "X 1 4 2 3\nBOUNDARY 1 4 2",  # odd boundary
    ],
)
def test_inconsistent_diagrams_rejected(text):
    with pytest.raises(PDError):
        parse_pd(text)


def test_hopf_linking():
    d = parse_pd("X 4 1 3 2\nX 2 3 1 4")
    assert d.signs == (-1, -1)
    assert sorted(d.linking_sum(o) for o in d.orientations()) == [-2, -2, 0, 0]


def test_whitehead_linking_vanishes():
    d = load_fixture("whitehead").diagram
    assert {d.linking_sum(o) for o in d.orientations()} == {0}


def test_figure_eight_is_amphichiral_in_signs():
    d = load_fixture("figure_eight").diagram
    assert sorted(d.signs) == [-1, -1, 1, 1]


def test_mirror_flips_signs():
    d = parse_pd(TREFOIL)
    assert d.mirror().signs == (1, 1, 1)


def test_orientation_flip_preserves_signs():
    d = braid_closure(3, [1, -2, 1, 2])
    for o in d.orientations():
        assert all(d.crossing_sign(ci, o) == d.crossing_sign(ci, o.flipped()) for ci in range(d.n))


@settings(max_examples=60, deadline=None)
@given(closed_diagrams)
def test_checkerboard_alternates_across_edges(d):
    board = d.checkerboard
    assert board[0] == GREEN
    for e in d.edges:
        assert board[d.right_region(e, True)] != board[d.right_region(e, False)]
    assert set(board.colours) <= {RED, GREEN}


@settings(max_examples=60, deadline=None)
@given(closed_diagrams)
def test_pd_round_trip_and_relabel(d):
    again = parse_pd(d.to_pd())
    assert again.signs == d.signs and again.c == d.c
    shift = {e: e + 100 for e in d.edges}
    moved = d.relabel(shift)
    assert moved.signs == d.signs
    assert sorted(moved.linking_sum(o) for o in moved.orientations()) == sorted(
        d.linking_sum(o) for o in d.orientations()
    )


@settings(max_examples=60, deadline=None)
@given(closed_diagrams)
def test_knot_linking_sum_is_zero(d):
    if d.c == 1:
        assert all(d.linking_sum(o) == 0 for o in d.orientations())


@settings(max_examples=40, deadline=None)
@given(open_tangles)
def test_tangles_have_consistent_regions(d):
    assert len(d.boundary) % 2 == 0
    assert sum(1 for _ in d.orientations()) == 2**d.c
    assert Orientation.original(d.c).reversed == (False,) * d.c


def test_disjoint_union_adds_components():
    a, b = parse_pd(TREFOIL), parse_pd("X 4 1 3 2\nX 2 3 1 4")
    u = a.disjoint_union(b)
    assert u.c == 3 and u.n == 5
