"""Dotted cobordisms between smoothings, modulo the local relations

    sphere = 0,  dotted sphere = 1,  two dots = delta,  neck-cutting,

with ``delta = 0`` (Khovanov) or ``delta = 1`` (Lee).

A generator is a surface given by its connected components ("sheets").
Each sheet records which boundary curves it touches, as refs ``('s', i)``
(source curve ``i``) or ``('t', j)`` (target curve ``j``), together with
its genus and dot count.  Arc curves are joined to each other by the side
walls ``I x (boundary point)``, so the boundary of a sheet is a union of
closed *cycles* of curves; see :func:`boundary_cycles`.

Normalized generators have genus 0, at most one dot per sheet and no
closed components.  These span every hom space but are not linearly
independent (neck-cutting relates them), so equality is decided in the
disc basis: every cycle capped by a disc that is dotted or not.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .smoothing import Curve, Smoothing

Ref = tuple[str, int]


@dataclass(frozen=True)
class Theory:
    delta: int

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")


KHOVANOV = Theory(0)
LEE = Theory(1)


@dataclass(frozen=True, order=True)
class Sheet:
    curves: tuple[Ref, ...]
    genus: int = 0
    dots: int = 0

    def __post_init__(self):
        object.__setattr__(self, "curves", tuple(sorted(self.curves)))


@dataclass(frozen=True)
class CobGenerator:
    source: Smoothing
    target: Smoothing
    sheets: tuple[Sheet, ...]
    closed: tuple[tuple[int, int], ...] = ()  # (genus, dots) of closed components

    def __post_init__(self):
        object.__setattr__(self, "sheets", tuple(sorted(self.sheets)))
        object.__setattr__(self, "closed", tuple(sorted(self.closed)))

    @property
    def is_normal(self) -> bool:
        return not self.closed and all(s.genus == 0 and s.dots <= 1 for s in self.sheets)


def is_dyadic(q: Fraction) -> bool:
    den = Fraction(q).denominator
    return den & (den - 1) == 0


# ----------------------------------------------------------------------
# boundary cycles


@lru_cache(maxsize=1 << 16)
def _cycles(src: tuple[Curve, ...], tgt: tuple[Curve, ...]) -> tuple[tuple[Ref, ...], ...]:
    src_ends = {d for c in src for d in c.ends}
    tgt_ends = {d for c in tgt for d in c.ends}
    if src_ends != tgt_ends:
        raise ValueError("source and target have different boundary points")
    refs = [("s", i) for i in range(len(src))] + [("t", j) for j in range(len(tgt))]
    parent = {r: r for r in refs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    by_end: dict = {}
    for side, curves in (("s", src), ("t", tgt)):
        for i, c in enumerate(curves):
            for d in c.ends:
                by_end.setdefault(d, []).append((side, i))
    for pair in by_end.values():
        a, b = pair
        parent[find(a)] = find(b)
    groups: dict = {}
    for r in refs:
        groups.setdefault(find(r), []).append(r)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


def boundary_cycles(src: Smoothing, tgt: Smoothing) -> tuple[tuple[Ref, ...], ...]:
    """Closed curves in the boundary of ``(disk) x I`` formed by source
    curves, side walls and target curves."""
    return _cycles(src.curves, tgt.curves)


def _cycle_lookup(src: Smoothing, tgt: Smoothing) -> dict[Ref, int]:
    return {r: k for k, cyc in enumerate(boundary_cycles(src, tgt)) for r in cyc}


def _check_sheets(src: Smoothing, tgt: Smoothing, sheets: Iterable[Sheet]):
    lookup = _cycle_lookup(src, tgt)
    seen: set[Ref] = set()
    cycles = boundary_cycles(src, tgt)
    for sh in sheets:
        if seen & set(sh.curves):
            raise ValueError("a boundary curve lies on two sheets")
        seen |= set(sh.curves)
        for r in sh.curves:
            if not set(cycles[lookup[r]]) <= set(sh.curves):
                raise ValueError(f"sheet {sh.curves} cuts a boundary cycle")
        if not sh.curves:
            raise ValueError("sheets must touch the boundary; use closed components")
    if seen != set(lookup):
        raise ValueError("sheets do not cover every boundary curve")


def _count_cycles(src: Smoothing, tgt: Smoothing, refs: Iterable[Ref]) -> int:
    lookup = _cycle_lookup(src, tgt)
    return len({lookup[r] for r in refs})


# ----------------------------------------------------------------------
# local relations


def _closed_value(genus: int, dots: int, delta: int) -> int:
    dots += genus
    coeff = 2**genus
    if dots % 2 == 0:
        return 0
    return coeff * delta ** ((dots - 1) // 2)


def normalize(g: CobGenerator, t: Theory) -> CobMorphism:
    """Reduce a generator to a scalar multiple of a normalized generator.

    Handles become dots (a handle is two dots), pairs of dots become
    ``delta``, and closed components are evaluated.
    """
    coeff = 1
    sheets = []
    for sh in g.sheets:
        dots = sh.dots + sh.genus
        coeff *= 2**sh.genus
        coeff *= t.delta ** (dots // 2)
        sheets.append(Sheet(sh.curves, 0, dots % 2))
    for genus, dots in g.closed:
        coeff *= _closed_value(genus, dots, t.delta)
    if coeff == 0:
        return CobMorphism.zero(g.source, g.target, t)
    return CobMorphism(g.source, g.target, t, {tuple(sorted(sheets)): Fraction(coeff)})


def normalize_randomized(g: CobGenerator, t: Theory, rng: random.Random) -> CobMorphism:
    """Same relations as :func:`normalize`, applied one step at a time in a
    random order."""
    coeff = Fraction(1)
    comps = [["sheet", sh.curves, sh.genus, sh.dots] for sh in g.sheets]
    comps += [["closed", (), genus, dots] for genus, dots in g.closed]
    while True:
        moves = []
        for k, (kind, _, genus, dots) in enumerate(comps):
            if genus > 0:
                moves.append(("neck", k))
            if dots >= 2:
                moves.append(("dots", k))
            if kind == "closed" and genus == 0 and dots <= 1:
                moves.append(("eval", k))
        if not moves:
            break
        move, k = rng.choice(moves)
        if move == "neck":
            comps[k][2] -= 1
            comps[k][3] += 1
            coeff *= 2
        elif move == "dots":
            comps[k][3] -= 2
            coeff *= t.delta
        else:
            coeff *= comps[k][3]  # sphere 0, dotted sphere 1
            comps.pop(k)
        if coeff == 0:
            return CobMorphism.zero(g.source, g.target, t)
    sheets = tuple(sorted(Sheet(c[1], 0, c[3]) for c in comps))
    return CobMorphism(g.source, g.target, t, {sheets: coeff})


# ----------------------------------------------------------------------
# gluing


def _glue(nodes: list[dict], links: list[tuple[int, int, int]]) -> list[dict]:
    """Union sheets along glued curves; each link is (a, b, euler loss)."""
    parent = list(range(len(nodes)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    loss: dict[int, int] = defaultdict(int)
    for a, _, chi in links:
        loss[find(a)] += chi
    merged: dict[int, dict] = {}
    for k, nd in enumerate(nodes):
        r = find(k)
        m = merged.setdefault(r, {"chi": 0, "dots": 0, "refs": set(), "tags": set()})
        m["chi"] += nd["chi"]
        m["dots"] += nd["dots"]
        m["refs"] |= nd["refs"]
        m["tags"] |= nd.get("tags", set())
    for r, m in merged.items():
        m["chi"] -= loss[r]
    return [merged[r] for r in sorted(merged)]


def _assemble(src: Smoothing, tgt: Smoothing, merged: list[dict]) -> CobGenerator:
    sheets, closed = [], []
    for m in merged:
        b = _count_cycles(src, tgt, m["refs"]) if m["refs"] else 0
        twice_genus = 2 - m["chi"] - b
        assert twice_genus >= 0 and twice_genus % 2 == 0, (m, b)
        if m["refs"]:
            sheets.append(Sheet(tuple(m["refs"]), twice_genus // 2, m["dots"]))
        else:
            closed.append((twice_genus // 2, m["dots"]))
    return CobGenerator(src, tgt, tuple(sheets), tuple(closed))


def _sheet_nodes(src: Smoothing, tgt: Smoothing, sheets, rename) -> list[dict]:
    out = []
    for sh in sheets:
        b = _count_cycles(src, tgt, sh.curves)
        out.append({
            "chi": 2 - 2 * sh.genus - b,
            "dots": sh.dots,
            "refs": {rename(r) for r in sh.curves if rename(r) is not None},
            "tags": set(sh.curves),
        })
    return out


def glue_vertical(f: CobGenerator, h: CobGenerator) -> list[dict]:
    """Merged components of ``h o f`` (f first), before normalization.

    Each component carries ``chi``, ``dots``, outer ``refs`` and ``tags``
    (``('f', ref)``/``('h', ref)`` for every curve it came from).
    """
    if f.target.curves != h.source.curves:
        raise ValueError("boundary mismatch: target of f is not the source of h")
    mid = f.target
    fn = _sheet_nodes(f.source, mid, f.sheets, lambda r: r if r[0] == "s" else None)
    hn = _sheet_nodes(mid, h.target, h.sheets, lambda r: r if r[0] == "t" else None)
    for nd in fn:
        nd["tags"] = {("f",) + r for r in nd["tags"]}
    for nd in hn:
        nd["tags"] = {("h",) + r for r in nd["tags"]}
    f_of = {r: k for k, sh in enumerate(f.sheets) for r in sh.curves}
    h_of = {r: k for k, sh in enumerate(h.sheets) for r in sh.curves}
    links = []
    for j, c in enumerate(mid.curves):
        links.append((f_of[("t", j)], len(fn) + h_of[("s", j)], 0 if c.closed else 1))
    nodes = fn + hn
    nodes += [{"chi": 2 - 2 * g, "dots": d, "refs": set()} for g, d in f.closed + h.closed]
    return _glue(nodes, links)


@dataclass(frozen=True)
class PlanarArcDiagram:
    """A planar arc diagram given by the edges along which inputs are joined.

    Both ends ``(e, 0)`` and ``(e, 1)`` of every joined edge must appear
    exactly once among the boundary points of the inputs.
    """

    joins: frozenset[int]

    @classmethod
    def between(cls, objects: Sequence[Smoothing]) -> PlanarArcDiagram:
        ends = [d for o in objects for d in o.boundary]
        present = set(ends)
        return cls(frozenset(e for e, s in present if s == 0 and (e, 1) in present))


def planar_compose_objects(D: PlanarArcDiagram, objects: Sequence[Smoothing]):
    """Glue smoothings along ``D``; returns the result and, per input, the
    map from its curve indices to curves of the result."""
    owner: dict = {}
    for p, o in enumerate(objects):
        for i, c in enumerate(o.curves):
            for d in c.ends:
                if d in owner:
                    raise ValueError(f"boundary point {d} appears twice")
                owner[d] = (p, i)
    nodes = [(p, i) for p, o in enumerate(objects) for i in range(len(o.curves))]
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    joined = set()
    for e in D.joins:
        a, b = (e, 0), (e, 1)
        if a not in owner or b not in owner:
            raise ValueError(f"pattern mismatch: edge {e} is not available on both sides")
        parent[find(owner[a])] = find(owner[b])
        joined |= {a, b}
    groups: dict = {}
    for x in nodes:
        groups.setdefault(find(x), []).append(x)
    curves = {}
    for root, members in groups.items():
        edges = tuple(sorted({e for p, i in members for e in objects[p].curves[i].edges}))
        ends = tuple(sorted(d for p, i in members for d in objects[p].curves[i].ends if d not in joined))
        curves[root] = Curve(edges, ends)
    choices = tuple(ch for o in objects for ch in o.choices)
    result = Smoothing(tuple(curves.values()), choices)
    index = {c: k for k, c in enumerate(result.curves)}
    maps = [{} for _ in objects]
    for x in nodes:
        maps[x[0]][x[1]] = index[curves[find(x)]]
    return result, maps


def glue_planar(D: PlanarArcDiagram, gens: Sequence[CobGenerator], src_maps, tgt_maps, src, tgt):
    nodes, links = [], []
    starts = []
    for p, g in enumerate(gens):
        starts.append(len(nodes))

        def rename(r, p=p):
            return ("s", src_maps[p][r[1]]) if r[0] == "s" else ("t", tgt_maps[p][r[1]])

        sheet_nodes = _sheet_nodes(g.source, g.target, g.sheets, rename)
        for nd in sheet_nodes:
            nd["tags"] = {(p,) + r for r in nd["tags"]}
        nodes += sheet_nodes
    where: dict = {}
    for p, g in enumerate(gens):
        sheet_of = {r: k for k, sh in enumerate(g.sheets) for r in sh.curves}
        for i, c in enumerate(g.source.curves):
            for d in c.ends:
                where[d] = starts[p] + sheet_of[("s", i)]
    for e in sorted(D.joins):
        links.append((where[(e, 0)], where[(e, 1)], 1))
    for g in gens:
        nodes += [{"chi": 2 - 2 * gg, "dots": d, "refs": set()} for gg, d in g.closed]
    return _glue(nodes, links)


# ----------------------------------------------------------------------
# morphisms


class CobMorphism:
    """A formal dyadic-rational combination of normalized generators."""

    __slots__ = ("source", "target", "theory", "terms")

    def __init__(self, source: Smoothing, target: Smoothing, theory: Theory, terms=None):
        self.source = source
        self.target = target
        self.theory = theory
        clean = {}
        for sheets, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(sorted(sheets))] = clean.get(tuple(sorted(sheets)), 0) + c
        self.terms = {k: v for k, v in sorted(clean.items()) if v}

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, source: Smoothing, target: Smoothing, theory: Theory) -> CobMorphism:
        return cls(source, target, theory)

    @classmethod
    def identity(cls, obj: Smoothing, theory: Theory, dots: Sequence[int] = ()) -> CobMorphism:
        sheets = tuple(
            Sheet((("s", i), ("t", i)), 0, 1 if i in dots else 0) for i in range(len(obj.curves))
        )
        return cls(obj, obj, theory, {sheets: 1})

    @classmethod
    def from_generator(cls, g: CobGenerator, theory: Theory, coeff=1) -> CobMorphism:
        _check_sheets(g.source, g.target, g.sheets)
        return coeff * normalize(g, theory)

    @classmethod
    def connecting(cls, source: Smoothing, target: Smoothing, theory: Theory) -> CobMorphism:
        """Curtains on curves common to both ends, one sheet joining the rest.

        For two smoothings differing at one crossing this is the saddle.
        """
        tgt_index = {c: j for j, c in enumerate(target.curves)}
        sheets, rest = [], []
        used = set()
        for i, c in enumerate(source.curves):
            j = tgt_index.get(c)
            if j is not None:
                sheets.append(Sheet((("s", i), ("t", j))))
                used.add(j)
            else:
                rest.append(("s", i))
        rest += [("t", j) for j in range(len(target.curves)) if j not in used]
        if rest:
            sheets.append(Sheet(tuple(rest)))
        return cls.from_generator(CobGenerator(source, target, tuple(sheets)), theory)

    # arithmetic -------------------------------------------------------

    def _like(self, other: CobMorphism):
        if self.theory != other.theory:
            raise ValueError("morphisms from different theories")
        if self.source.curves != other.source.curves or self.target.curves != other.target.curves:
            raise ValueError("morphisms between different objects")

    def __add__(self, other: CobMorphism) -> CobMorphism:
        self._like(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return CobMorphism(self.source, self.target, self.theory, terms)

    def __neg__(self) -> CobMorphism:
        return CobMorphism(self.source, self.target, self.theory, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: CobMorphism) -> CobMorphism:
        return self + (-other)

    def __rmul__(self, scalar) -> CobMorphism:
        scalar = Fraction(scalar)
        return CobMorphism(self.source, self.target, self.theory, {k: scalar * v for k, v in self.terms.items()})

    __mul__ = __rmul__

    def __matmul__(self, other: CobMorphism) -> CobMorphism:
        """``self @ other`` is ``self o other`` (other applied first)."""
        return compose(other, self)

    # comparison -------------------------------------------------------

    def canonical(self) -> dict[frozenset[int], Fraction]:
        """Coordinates in the disc basis, keyed by the set of dotted cycles."""
        cycles = boundary_cycles(self.source, self.target)
        lookup = {r: k for k, cyc in enumerate(cycles) for r in cyc}
        delta = self.theory.delta
        out: dict[frozenset[int], Fraction] = defaultdict(Fraction)
        for sheets, coeff in self.terms.items():
            partial = {frozenset(): coeff}
            for sh in sheets:
                own = sorted({lookup[r] for r in sh.curves})
                nxt = defaultdict(Fraction)
                for mask in range(1 << len(own)):
                    undotted = [own[k] for k in range(len(own)) if mask >> k & 1]
                    power = len(undotted) + sh.dots
                    value = delta ** ((power - 1) // 2) if power % 2 else 0
                    if not value:
                        continue
                    dotted = frozenset(own) - frozenset(undotted)
                    for key, c in partial.items():
                        nxt[key | dotted] += c * value
                partial = nxt
            for key, c in partial.items():
                out[key] += c
        return {k: v for k, v in out.items() if v}

    def is_zero(self) -> bool:
        return not self.terms or not self.canonical()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CobMorphism):
            return NotImplemented
        if self.theory != other.theory:
            return False
        if self.source.curves != other.source.curves or self.target.curves != other.target.curves:
            return False
        return self.canonical() == (other.canonical())

    __hash__ = None

    def __repr__(self) -> str:
        return f"CobMorphism({len(self.source)}->{len(self.target)} curves, {self.terms})"

    def to_json(self) -> list[dict]:
        return [
            {
                "coeff": f"{c.numerator}/{c.denominator}",
                "components": [
                    {"boundary_curves": [f"{side}{i}" for side, i in sh.curves], "dots": sh.dots}
                    for sh in sheets
                ],
            }
            for sheets, c in self.terms.items()
        ]


def compose(f: CobMorphism, h: CobMorphism) -> CobMorphism:
    """``h o f``: glue ``f: A -> B`` and ``h: B -> C`` along ``B``."""
    if f.theory != h.theory:
        raise ValueError("morphisms from different theories")
    if f.target.curves != h.source.curves:
        raise ValueError("boundary mismatch: target of f is not the source of h")
    total = CobMorphism.zero(f.source, h.target, f.theory)
    terms: dict = {}
    for fs, fc in f.terms.items():
        fg = CobGenerator(f.source, f.target, fs)
        for hs, hc in h.terms.items():
            hg = CobGenerator(h.source, h.target, hs)
            glued = _assemble(f.source, h.target, glue_vertical(fg, hg))
            for k, v in normalize(glued, f.theory).terms.items():
                terms[k] = terms.get(k, 0) + fc * hc * v
    if terms:
        total = CobMorphism(f.source, h.target, f.theory, terms)
    return total


def planar_compose(D: PlanarArcDiagram, morphisms: Sequence[CobMorphism]) -> CobMorphism:
    """Side-by-side composition of morphisms joined along ``D``."""
    theory = morphisms[0].theory
    if any(m.theory != theory for m in morphisms):
        raise ValueError("morphisms from different theories")
    src, smaps = planar_compose_objects(D, [m.source for m in morphisms])
    tgt, tmaps = planar_compose_objects(D, [m.target for m in morphisms])
    terms: dict = {}

    def rec(p, chosen, coeff):
        if p == len(morphisms):
            gens = [CobGenerator(m.source, m.target, s) for m, s in zip(morphisms, chosen)]
            glued = _assemble(src, tgt, glue_planar(D, gens, smaps, tmaps, src, tgt))
            for k, v in normalize(glued, theory).terms.items():
                terms[k] = terms.get(k, 0) + coeff * v
            return
        for sheets, c in morphisms[p].terms.items():
            rec(p + 1, chosen + [sheets], coeff * c)

    rec(0, [], Fraction(1))
    return CobMorphism(src, tgt, theory, terms)


def evaluate_closed(m: CobMorphism) -> Fraction:
    if m.source.curves or m.target.curves:
        raise ValueError("evaluate_closed needs a morphism from the empty smoothing to itself")
    return m.terms.get((), Fraction(0))


EMPTY = Smoothing(())
