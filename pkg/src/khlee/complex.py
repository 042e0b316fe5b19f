"""Formal complexes over Mat(Kar(Cob)): the cube of resolutions, planar
tensor products, colour splitting and Gaussian elimination."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import karoubi
from .cobordism import LEE, CobMorphism, PlanarArcDiagram, Theory
from .diagram import GREEN, RED, TangleDiagram
from .karoubi import (
    ColouredMorphism,
    ColouredObject,
    KarMorphism,
    KarObject,
    planar_compose_kar,
    planar_compose_kar_objects,
    sheet_scalar,
)
from .smoothing import resolve_piece


@dataclass
class FormalComplex:
    """Objects per height and sparse differentials.

    ``differential[h][(j, i)]`` is the entry from object ``i`` at height
    ``h`` to object ``j`` at height ``h + 1``; zero entries are omitted.
    """

    objects: dict[int, list[KarObject]]
    differential: dict[int, dict[tuple[int, int], KarMorphism]] = field(default_factory=dict)

    def __post_init__(self):
        self.objects = {h: list(v) for h, v in sorted(self.objects.items()) if v}
        self.differential = {
            h: {k: m for k, m in sorted(v.items()) if not m.is_zero()}
            for h, v in sorted(self.differential.items())
        }
        self.differential = {h: v for h, v in self.differential.items() if v}

    @property
    def heights(self) -> list[int]:
        return sorted(self.objects)

    def counts(self) -> dict[int, int]:
        return {h: len(v) for h, v in self.objects.items()}

    def __len__(self) -> int:
        return sum(len(v) for v in self.objects.values())

    def entries(self):
        for h, row in self.differential.items():
            for (j, i), m in row.items():
                yield h, j, i, m

    def has_zero_differential(self) -> bool:
        return all(m.is_zero() for *_, m in self.entries())

    def d_squared_is_zero(self) -> bool:
        for h, row in self.differential.items():
            nxt = self.differential.get(h + 1, {})
            if not nxt:
                continue
            by_source = defaultdict(list)
            for (k, j), m in nxt.items():
                by_source[j].append((k, m))
            sums: dict = {}
            for (j, i), m in row.items():
                for k, m2 in by_source.get(j, ()):
                    term = m2 @ m
                    sums[(k, i)] = term if (k, i) not in sums else sums[(k, i)] + term
            if any(not s.is_zero() for s in sums.values()):
                return False
        return True

    def to_json(self) -> dict:
        return {
            "heights": [{"h": h, "objects": [o.to_json() for o in objs]} for h, objs in self.objects.items()],
            "differentials": [
                {
                    "h": h,
                    "entries": [
                        {"from": i, "to": j, "morphism": _morphism_json(m)}
                        for (j, i), m in row.items()
                    ],
                }
                for h, row in self.differential.items()
            ],
        }


def _morphism_json(m: KarMorphism):
    if isinstance(m, ColouredMorphism):
        s = m.scalar
        return {"coloured_scalar": f"{s.numerator}/{s.denominator}"}
    return m.morphism.to_json()


# ----------------------------------------------------------------------
# cube of resolutions


def khovanov_cube(d: TangleDiagram, theory: Theory = LEE, crossings: Sequence[int] | None = None) -> FormalComplex:
    """The flattened cube of the (sub-)tangle made of ``crossings``.

    Vertices sit at height (number of 1-resolutions) minus the number of
    negative crossings; the edge changing coordinate ``k`` carries the
    sign ``(-1)^(number of 1s before k)``.
    """
    full = crossings is None
    crossings = list(range(d.n)) if full else sorted(crossings)
    n_minus = sum(1 for ci in crossings if d.signs[ci] < 0)
    index: dict[tuple[int, ...], tuple[int, int]] = {}
    objects: dict[int, list[KarObject]] = defaultdict(list)
    smoothings = {}
    for bits in itertools.product((0, 1), repeat=len(crossings)):
        s = resolve_piece(d, dict(zip(crossings, bits)), with_circles=full)
        h = sum(bits) - n_minus
        index[bits] = (h, len(objects[h]))
        objects[h].append(KarObject.plain(s, theory))
        smoothings[bits] = s
    differential: dict = defaultdict(dict)
    for bits, (h, i) in index.items():
        for k, b in enumerate(bits):
            if b:
                continue
            nb = bits[:k] + (1,) + bits[k + 1:]
            sign = -1 if sum(bits[:k]) % 2 else 1
            _, j = index[nb]
            saddle = sign * CobMorphism.connecting(smoothings[bits], smoothings[nb], theory)
            differential[h][(j, i)] = KarMorphism(objects[h][i], objects[h + 1][j], saddle, check=False)
    return FormalComplex(dict(objects), dict(differential))


# ----------------------------------------------------------------------
# colour splitting


def _entry_colour_pairs(f: CobMorphism, a, b):
    """All (colours of a, colours of b) on which ``f`` may survive."""
    pairs = set()
    na, nb = len(a.curves), len(b.curves)
    for sheets in f.terms:
        for cols in itertools.product((RED, GREEN), repeat=len(sheets)):
            ca, cb = [None] * na, [None] * nb
            for sh, c in zip(sheets, cols):
                for side, i in sh.curves:
                    (ca if side == "s" else cb)[i] = c
            pairs.add((tuple(ca), tuple(cb)))
    return pairs


def colour_split(c: FormalComplex) -> FormalComplex:
    """Replace every plain object by the direct sum of its colourings.

    Requires Lee theory; entries become coloured scalars.
    """
    objects: dict[int, list[ColouredObject]] = {}
    where: dict[int, dict] = {}
    for h, objs in c.objects.items():
        objects[h], where[h] = [], {}
        for i, o in enumerate(objs):
            if isinstance(o, ColouredObject):
                where[h][(i, o.colours)] = len(objects[h])
                objects[h].append(o)
                continue
            if o.theory.delta != 1:
                raise ValueError("colour splitting requires Lee theory")
            for co in karoubi.colourings(o.obj):
                where[h][(i, co.colours)] = len(objects[h])
                objects[h].append(co)
    differential: dict = defaultdict(dict)
    for h, j, i, m in c.entries():
        src, tgt = c.objects[h][i].obj, c.objects[h + 1][j].obj
        for ca, cb in _entry_colour_pairs(m.morphism, src, tgt):
            a = objects[h][where[h][(i, ca)]]
            b = objects[h + 1][where[h + 1][(j, cb)]]
            scalar = sum((coeff * sheet_scalar(a, b, sheets) for sheets, coeff in m.morphism.terms.items()), Fraction(0))
            if scalar:
                differential[h][(where[h + 1][(j, cb)], where[h][(i, ca)])] = ColouredMorphism(a, b, scalar)
    return FormalComplex(objects, dict(differential))


# ----------------------------------------------------------------------
# planar tensor product


def _boundary_of(c: FormalComplex) -> tuple:
    for objs in c.objects.values():
        return tuple(objs[0].obj.boundary)
    return ()


def joining_diagram(complexes: Sequence[FormalComplex]) -> PlanarArcDiagram:
    """Join every edge whose two ends both occur among the complexes' boundaries."""
    present = {x for c in complexes for x in _boundary_of(c)}
    return PlanarArcDiagram(frozenset(e for e, s in present if s == 0 and (e, 1) in present))


def _restrict(D: PlanarArcDiagram, darts: Iterable) -> PlanarArcDiagram:
    darts = set(darts)
    return PlanarArcDiagram(frozenset(e for e in D.joins if (e, 0) in darts and (e, 1) in darts))


def _tensor_pair(D: PlanarArcDiagram, c1: FormalComplex, c2: FormalComplex) -> FormalComplex:
    objects: dict[int, list] = defaultdict(list)
    pos: dict = {}
    for (h1, objs1), (h2, objs2) in itertools.product(c1.objects.items(), c2.objects.items()):
        for (i1, o1), (i2, o2) in itertools.product(enumerate(objs1), enumerate(objs2)):
            o = planar_compose_kar_objects(D, [o1, o2])
            if o is None:
                continue
            pos[(h1, i1, h2, i2)] = (h1 + h2, len(objects[h1 + h2]))
            objects[h1 + h2].append(o)
    differential: dict = defaultdict(dict)

    def put(src_key, tgt_key, m):
        if m is None or src_key not in pos or tgt_key not in pos:
            return
        h, i = pos[src_key]
        _, j = pos[tgt_key]
        differential[h][(j, i)] = m

    for h1, j1, i1, m1 in c1.entries():
        for h2, objs2 in c2.objects.items():
            for i2, o2 in enumerate(objs2):
                put((h1, i1, h2, i2), (h1 + 1, j1, h2, i2), planar_compose_kar(D, [m1, o2.identity]))
    for h2, j2, i2, m2 in c2.entries():
        for h1, objs1 in c1.objects.items():
            sign = -1 if h1 % 2 else 1
            for i1, o1 in enumerate(objs1):
                m = planar_compose_kar(D, [o1.identity, m2])
                put((h1, i1, h2, i2), (h1, i1, h2 + 1, j2), None if m is None else sign * m)
    return FormalComplex(dict(objects), dict(differential))


def planar_tensor(D: PlanarArcDiagram, complexes: Sequence[FormalComplex]) -> FormalComplex:
    """Total complex of the planar composition; differentials follow the
    Leibniz rule with sign ``(-1)^(height of the factors to the left)``."""
    acc = complexes[0]
    for c in complexes[1:]:
        acc = _tensor_pair(_restrict(D, _boundary_of(acc) + _boundary_of(c)), acc, c)
    return acc


# ----------------------------------------------------------------------
# Gaussian elimination


def gaussian_eliminate(c: FormalComplex, check: bool | None = None) -> FormalComplex:
    """Cancel invertible differential entries until none remain.

    Cancelling ``phi: A -> B`` removes ``A`` and ``B`` and replaces each
    entry ``X -> Y`` by ``d(X->Y) - d(A->Y) phi^-1 d(X->B)``.
    """
    check = karoubi.CHECKS if check is None else check
    objects = {h: dict(enumerate(v)) for h, v in c.objects.items()}
    out: dict[int, dict[int, dict[int, KarMorphism]]] = defaultdict(lambda: defaultdict(dict))
    inn: dict[int, dict[int, dict[int, KarMorphism]]] = defaultdict(lambda: defaultdict(dict))
    for h, j, i, m in c.entries():
        out[h][i][j] = m
        inn[h][j][i] = m

    def set_entry(h, i, j, m):
        if m.is_zero():
            out[h][i].pop(j, None)
            inn[h][j].pop(i, None)
        else:
            out[h][i][j] = m
            inn[h][j][i] = m

    for h in sorted(objects):
        while True:
            pivot = None
            for (j, i) in sorted((j, i) for i, row in out[h].items() for j in row):
                inv = out[h][i][j].inverse()
                if inv is not None:
                    pivot = (i, j, inv)
                    break
            if pivot is None:
                break
            a, b, inv = pivot
            alphas = {y: m for y, m in out[h][a].items() if y != b}
            betas = {x: m for x, m in inn[h][b].items() if x != a}
            for x, beta in betas.items():
                zig = inv @ beta
                for y, alpha in alphas.items():
                    corr = alpha @ zig
                    cur = out[h][x].get(y)
                    set_entry(h, x, y, (cur - corr) if cur is not None else -corr)
            # drop every entry touching a or b
            for y in list(out[h][a]):
                inn[h][y].pop(a, None)
            out[h].pop(a, None)
            for x in list(inn[h][b]):
                out[h][x].pop(b, None)
            inn[h].pop(b, None)
            for x in list(inn[h - 1].get(a, {})):
                out[h - 1][x].pop(a, None)
            inn[h - 1].pop(a, None)
            for y in list(out[h + 1].get(b, {})):
                inn[h + 1][y].pop(b, None)
            out[h + 1].pop(b, None)
            del objects[h][a]
            del objects[h + 1][b]
            if check:
                assert _rebuild(objects, out).d_squared_is_zero()
    return _rebuild(objects, out)


def _rebuild(objects, out) -> FormalComplex:
    renum = {h: {old: new for new, old in enumerate(sorted(objs))} for h, objs in objects.items()}
    new_objects = {h: [objs[k] for k in sorted(objs)] for h, objs in objects.items()}
    differential: dict = defaultdict(dict)
    for h, rows in out.items():
        for i, row in rows.items():
            for j, m in row.items():
                differential[h][(renum[h + 1][j], renum[h][i])] = m
    return FormalComplex(new_objects, dict(differential))


def one_object_complex(obj: KarObject, height: int = 0) -> FormalComplex:
    return FormalComplex({height: [obj]})
