"""Karoubi envelope of the cobordism category, and the red/green calculus.

Objects of the envelope are pairs (smoothing, projection).  The colour
projections ``r = (1 + dot)/2`` and ``g = (1 - dot)/2`` (Lee theory only)
label every curve of a smoothing; such *coloured objects* have hom spaces
of rank at most one.  Between coloured objects ``A`` and ``B`` every
boundary cycle of ``(A, B)`` must be monochrome for the hom space to be
nonzero, and it is then spanned by the elementary morphism ``E(A, B)``:
each cycle capped by a disc carrying its colour projection.  Coloured
morphisms are therefore stored as a single scalar multiple of ``E`` and
composed in closed form; the dotted expansion is produced only on demand.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .cobordism import (
    LEE,
    CobGenerator,
    CobMorphism,
    PlanarArcDiagram,
    Sheet,
    Theory,
    boundary_cycles,
    glue_planar,
    glue_vertical,
    planar_compose,
    planar_compose_objects,
)
from .diagram import GREEN, RED
from .smoothing import ColouredSmoothing, Smoothing

# absorption invariants are re-verified only when this is set
CHECKS = os.environ.get("KHLEE_CHECKS", "") == "1"


def sigma(colour: str) -> int:
    """Eigenvalue of a dot on a curve of this colour."""
    return 1 if colour == RED else -1


class KarObject:
    """An object ``(obj, p)`` of the Karoubi envelope."""

    def __init__(self, obj: Smoothing, projection: CobMorphism, check: bool | None = None):
        if projection.source.curves != obj.curves or projection.target.curves != obj.curves:
            raise ValueError("projection must be an endomorphism of the object")
        if (CHECKS if check is None else check) and not (projection @ projection == projection):
            raise ValueError("not a projection: p o p != p")
        self.obj = obj
        self._projection = projection

    @classmethod
    def plain(cls, obj: Smoothing, theory: Theory = LEE) -> KarObject:
        return cls(obj, CobMorphism.identity(obj, theory), check=False)

    @property
    def projection(self) -> CobMorphism:
        return self._projection

    @property
    def theory(self) -> Theory:
        return self.projection.theory

    @property
    def identity(self) -> KarMorphism:
        return KarMorphism(self, self, self.projection, check=False)

    def is_zero(self) -> bool:
        return self.projection.is_zero()

    def key(self):
        return ("generic", self.obj.curves, self.obj.choices, tuple(sorted(self.projection.canonical().items())))

    def __eq__(self, other):
        return isinstance(other, KarObject) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"KarObject({len(self.obj.curves)} curves, choices={self.obj.bits})"

    def to_json(self) -> dict:
        return {"smoothing": self.obj.to_json(), "colours": "generic"}


class ColouredObject(KarObject):
    """A smoothing with a red/green projection on every curve."""

    def __init__(self, obj: Smoothing, colours: Sequence[str]):
        colours = tuple(colours)
        if len(colours) != len(obj.curves):
            raise ValueError("one colour per curve required")
        self.obj = obj
        self.colours = colours

    @cached_property
    def projection(self) -> CobMorphism:
        return expand_colour_projection(self.obj, self.colours)

    @property
    def theory(self) -> Theory:
        return LEE

    @property
    def coloured_smoothing(self) -> ColouredSmoothing:
        return ColouredSmoothing(self.obj, self.colours)

    @property
    def identity(self) -> ColouredMorphism:
        return ColouredMorphism(self, self, identity_scalar(self))

    def is_zero(self) -> bool:
        return False

    def key(self):
        return ("coloured", self.obj.curves, self.obj.choices, self.colours)

    def __repr__(self):
        return f"ColouredObject({''.join(self.colours)}, choices={self.obj.bits})"

    def to_json(self) -> dict:
        return {"smoothing": self.obj.to_json(), "colours": list(self.colours)}


class KarMorphism:
    """A morphism ``f: (O1, p1) -> (O2, p2)`` with ``f = f p1 = p2 f``."""

    def __init__(self, source: KarObject, target: KarObject, morphism: CobMorphism, check: bool | None = None):
        self.source = source
        self.target = target
        self._morphism = morphism
        if CHECKS if check is None else check:
            if not (morphism @ source.projection == morphism and target.projection @ morphism == morphism):
                raise ValueError("morphism is not absorbed by the projections")

    @property
    def morphism(self) -> CobMorphism:
        return self._morphism

    def is_zero(self) -> bool:
        return self.morphism.is_zero()

    def _check_shape(self, other: KarMorphism):
        if self.source != other.source or self.target != other.target:
            raise ValueError("morphisms between different objects")

    def __add__(self, other: KarMorphism) -> KarMorphism:
        self._check_shape(other)
        return KarMorphism(self.source, self.target, self.morphism + other.morphism, check=False)

    def __neg__(self) -> KarMorphism:
        return KarMorphism(self.source, self.target, -self.morphism, check=False)

    def __sub__(self, other: KarMorphism) -> KarMorphism:
        return self + (-other)

    def __rmul__(self, scalar) -> KarMorphism:
        return KarMorphism(self.source, self.target, Fraction(scalar) * self.morphism, check=False)

    __mul__ = __rmul__

    def __matmul__(self, other: KarMorphism) -> KarMorphism:
        """``self @ other`` is ``self o other``."""
        return kar_compose(other, self)

    def __eq__(self, other):
        if not isinstance(other, KarMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.morphism == other.morphism

    __hash__ = None

    def inverse(self) -> KarMorphism | None:
        """Inverse if this is a nonzero multiple of an identity projection."""
        if self.source != self.target:
            return None
        p = self.source.projection
        canon, pc = self.morphism.canonical(), p.canonical()
        if not pc or set(canon) != set(pc):
            return None
        ratios = {canon[k] / pc[k] for k in pc}
        if len(ratios) != 1:
            return None
        return (1 / ratios.pop()) * self.source.identity

    def __repr__(self):
        return f"KarMorphism({self.source!r} -> {self.target!r})"


class ColouredMorphism(KarMorphism):
    """``scalar * E(source, target)`` between coloured objects."""

    def __init__(self, source: ColouredObject, target: ColouredObject, scalar):
        self.source = source
        self.target = target
        scalar = Fraction(scalar)
        if scalar and cycle_colours(source, target) is None:
            raise ValueError("nonzero coloured morphism across a mixed boundary cycle")
        self.scalar = scalar

    @cached_property
    def morphism(self) -> CobMorphism:
        return self.scalar * elementary(self.source, self.target)

    def is_zero(self) -> bool:
        return not self.scalar

    def __add__(self, other: KarMorphism) -> KarMorphism:
        if isinstance(other, ColouredMorphism):
            self._check_shape(other)
            return ColouredMorphism(self.source, self.target, self.scalar + other.scalar)
        return super().__add__(other)

    def __neg__(self) -> ColouredMorphism:
        return ColouredMorphism(self.source, self.target, -self.scalar)

    def __rmul__(self, scalar) -> ColouredMorphism:
        return ColouredMorphism(self.source, self.target, Fraction(scalar) * self.scalar)

    __mul__ = __rmul__

    def __eq__(self, other):
        if isinstance(other, ColouredMorphism):
            return self.source == other.source and self.target == other.target and self.scalar == other.scalar
        return super().__eq__(other)

    __hash__ = None

    def inverse(self) -> ColouredMorphism | None:
        """Every nonzero coloured morphism is invertible."""
        if not self.scalar:
            return None
        a, b = self.source, self.target
        mu = identity_scalar(a) / (self.scalar * kappa(a, b, a))
        return ColouredMorphism(b, a, mu)

    def __repr__(self):
        return f"ColouredMorphism({self.scalar} * E[{self.source!r} -> {self.target!r}])"


# ----------------------------------------------------------------------
# the colour calculus


def expand_colour_projection(s: Smoothing, colours: Sequence[str], theory: Theory = LEE) -> CobMorphism:
    """Product of ``r``/``g`` insertions on the identity curtain of ``s``."""
    if theory.delta != 1:
        raise ValueError("r and g are projections only when two dots equal one (Lee theory)")
    total = CobMorphism.zero(s, s, theory)
    k = len(s.curves)
    for dotted in itertools.product((0, 1), repeat=k):
        coeff = Fraction(1, 2**k)
        for colour, dot in zip(colours, dotted):
            if dot:
                coeff *= sigma(colour)
        total = total + coeff * CobMorphism.identity(s, theory, [i for i in range(k) if dotted[i]])
    return total


def _colour_of_ref(a: ColouredObject, b: ColouredObject, ref) -> str:
    side, i = ref
    return a.colours[i] if side == "s" else b.colours[i]


def cycle_colours(a: ColouredObject, b: ColouredObject) -> tuple[str, ...] | None:
    """Colour of each boundary cycle of (a, b), or None if one is mixed."""
    out = []
    for cyc in boundary_cycles(a.obj, b.obj):
        cols = {_colour_of_ref(a, b, r) for r in cyc}
        if len(cols) > 1:
            return None
        out.append(cols.pop())
    return tuple(out)


def elementary(a: ColouredObject, b: ColouredObject) -> CobMorphism:
    """``E(a, b)``: every boundary cycle capped by a colour-projected disc."""
    cycles = boundary_cycles(a.obj, b.obj)
    cols = cycle_colours(a, b)
    if cols is None:
        return CobMorphism.zero(a.obj, b.obj, LEE)
    terms = {}
    for dotted in itertools.product((0, 1), repeat=len(cycles)):
        coeff = Fraction(1, 2 ** len(cycles))
        for c, dot in zip(cols, dotted):
            if dot:
                coeff *= sigma(c)
        sheets = tuple(Sheet(cyc, 0, dot) for cyc, dot in zip(cycles, dotted))
        terms[sheets] = coeff
    return CobMorphism(a.obj, b.obj, LEE, terms)


def _component_value(colour_set: set[str], twice_genus: int, b: int) -> Fraction:
    """Value of a connected surface carrying one colour insertion, as a
    multiple of the product of its boundary discs."""
    if len(colour_set) != 1:
        return Fraction(0)
    s = 2 * sigma(next(iter(colour_set)))
    return Fraction(s) ** (twice_genus // 2 + b - 1)


def sheet_scalar(a: ColouredObject, b: ColouredObject, sheets: Sequence[Sheet]) -> Fraction:
    """Scalar ``c`` with ``p_b o G o p_a = c E(a, b)`` for a normalized generator ``G``."""
    lookup = {r: k for k, cyc in enumerate(boundary_cycles(a.obj, b.obj)) for r in cyc}
    value = Fraction(1)
    for sh in sheets:
        cols = {_colour_of_ref(a, b, r) for r in sh.curves}
        if len(cols) != 1:
            return Fraction(0)
        col = cols.pop()
        nb = len({lookup[r] for r in sh.curves})
        value *= sigma(col) ** sh.dots * _component_value({col}, 2 * sh.genus, nb)
    return value


def coloured_scalar(f: CobMorphism, a: ColouredObject, b: ColouredObject) -> Fraction:
    if cycle_colours(a, b) is None:
        return Fraction(0)
    return sum((c * sheet_scalar(a, b, sheets) for sheets, c in f.terms.items()), Fraction(0))


def identity_scalar(a: ColouredObject) -> Fraction:
    """``p_a = identity_scalar(a) * E(a, a)``: a factor 2σ per closed curve."""
    value = Fraction(1)
    for curve, col in zip(a.obj.curves, a.colours):
        if curve.closed:
            value *= 2 * sigma(col)
    return value


def _disc_generator(a: ColouredObject, b: ColouredObject) -> CobGenerator:
    return CobGenerator(a.obj, b.obj, tuple(Sheet(cyc) for cyc in boundary_cycles(a.obj, b.obj)))


def _merged_value(a, b, merged, colour_of_tag) -> Fraction:
    lookup = {r: k for k, cyc in enumerate(boundary_cycles(a.obj, b.obj)) for r in cyc}
    value = Fraction(1)
    for m in merged:
        nb = len({lookup[r] for r in m["refs"]})
        twice_genus = 2 - m["chi"] - nb
        value *= _component_value({colour_of_tag(t) for t in m["tags"]}, twice_genus, nb)
    return value


@lru_cache(maxsize=1 << 16)
def _kappa(a, b, c) -> Fraction:
    ca, cb, cc = (ColouredObject(*x) for x in (a, b, c))
    if cycle_colours(ca, cb) is None or cycle_colours(cb, cc) is None:
        return Fraction(0)
    merged = glue_vertical(_disc_generator(ca, cb), _disc_generator(cb, cc))

    def colour(tag):
        who, side, i = tag
        if who == "f":
            return ca.colours[i] if side == "s" else cb.colours[i]
        return cb.colours[i] if side == "s" else cc.colours[i]

    return _merged_value(ca, cc, merged, colour)


def kappa(a: ColouredObject, b: ColouredObject, c: ColouredObject) -> Fraction:
    """``E(b, c) o E(a, b) = kappa * E(a, c)``."""
    return _kappa((a.obj, a.colours), (b.obj, b.colours), (c.obj, c.colours))


def kar_compose(f: KarMorphism, h: KarMorphism) -> KarMorphism:
    """``h o f``."""
    if f.target != h.source:
        raise ValueError("object mismatch in composition")
    if isinstance(f, ColouredMorphism) and isinstance(h, ColouredMorphism):
        scalar = f.scalar * h.scalar
        if scalar:
            scalar *= kappa(f.source, f.target, h.target)
        return ColouredMorphism(f.source, h.target, scalar)
    return KarMorphism(f.source, h.target, h.morphism @ f.morphism)


def restrict_morphism(f: CobMorphism, p1: KarObject, p2: KarObject) -> KarMorphism:
    """The morphism ``p2 o f o p1`` between Karoubi objects."""
    if f.source.curves != p1.obj.curves or f.target.curves != p2.obj.curves:
        raise ValueError("shape mismatch between morphism and objects")
    if isinstance(p1, ColouredObject) and isinstance(p2, ColouredObject):
        return ColouredMorphism(p1, p2, coloured_scalar(f, p1, p2))
    return KarMorphism(p1, p2, p2.projection @ f @ p1.projection, check=False)


def dot_action(s: ColouredSmoothing, component: int) -> int:
    """Eigenvalue of a dot on the given curve of a coloured smoothing."""
    return sigma(s.colours[component])


def colourings(obj: Smoothing) -> list[ColouredObject]:
    return [ColouredObject(obj, cols) for cols in itertools.product((RED, GREEN), repeat=len(obj.curves))]


# ----------------------------------------------------------------------
# planar composition of coloured data


def planar_compose_coloured(D: PlanarArcDiagram, objects: Sequence[ColouredObject]) -> ColouredObject | None:
    """Glue coloured objects; ``None`` (the zero object) if a joined strand
    receives both colours."""
    result, maps = planar_compose_objects(D, [o.obj for o in objects])
    cols: list = [None] * len(result.curves)
    for o, m in zip(objects, maps):
        for i, k in m.items():
            if cols[k] is None:
                cols[k] = o.colours[i]
            elif cols[k] != o.colours[i]:
                return None
    return ColouredObject(result, cols)


def planar_compose_kar(D: PlanarArcDiagram, morphisms: Sequence[KarMorphism]) -> KarMorphism | None:
    """Horizontal composition; ``None`` when the glued objects vanish."""
    if all(isinstance(m, ColouredMorphism) for m in morphisms):
        src = planar_compose_coloured(D, [m.source for m in morphisms])
        tgt = planar_compose_coloured(D, [m.target for m in morphisms])
        if src is None or tgt is None:
            return None
        scalar = Fraction(1)
        for m in morphisms:
            scalar *= m.scalar
        if scalar:
            scalar *= planar_kappa(D, [(m.source, m.target) for m in morphisms], src, tgt)
        return ColouredMorphism(src, tgt, scalar)
    src = planar_compose_kar_objects(D, [m.source for m in morphisms])
    tgt = planar_compose_kar_objects(D, [m.target for m in morphisms])
    if src is None or tgt is None:
        return None
    return KarMorphism(src, tgt, planar_compose(D, [m.morphism for m in morphisms]), check=False)


def planar_compose_kar_objects(D: PlanarArcDiagram, objects: Sequence[KarObject]) -> KarObject | None:
    if all(isinstance(o, ColouredObject) for o in objects):
        return planar_compose_coloured(D, objects)
    proj = planar_compose(D, [o.projection for o in objects])
    if proj.is_zero():
        return None
    return KarObject(proj.source, proj, check=False)


def planar_kappa(D, pairs, src: ColouredObject, tgt: ColouredObject) -> Fraction:
    """Scalar with ``D(E(a_i, b_i)) = planar_kappa * E(D(a), D(b))``."""
    gens = [_disc_generator(a, b) for a, b in pairs]
    _, smaps = planar_compose_objects(D, [a.obj for a, _ in pairs])
    _, tmaps = planar_compose_objects(D, [b.obj for _, b in pairs])
    merged = glue_planar(D, gens, smaps, tmaps, src.obj, tgt.obj)

    def colour(tag):
        p, side, i = tag
        a, b = pairs[p]
        return a.colours[i] if side == "s" else b.colours[i]

    return _merged_value(src, tgt, merged, colour)


# ----------------------------------------------------------------------
# splitting


@dataclass
class Splitting:
    """``O = im p (+) im (1 - p)`` with the two mutually inverse matrices."""

    whole: KarObject
    summands: tuple[KarObject, KarObject]
    iso_to: tuple[KarMorphism, KarMorphism]  # O -> summands, a 1x2 row
    iso_from: tuple[KarMorphism, KarMorphism]  # summands -> O, a 2x1 column

    def round_trip_whole(self) -> CobMorphism:
        """iso_from o iso_to, which must be the identity of O."""
        a, b = ((f @ t).morphism for f, t in zip(self.iso_from, self.iso_to))
        return a + b

    def round_trip_summands(self) -> list[list[KarMorphism]]:
        """iso_to o iso_from as a 2x2 matrix, which must be diag(p, 1 - p)."""
        return [[self.iso_to[i] @ self.iso_from[j] for j in range(2)] for i in range(2)]

    def verify(self) -> bool:
        if not self.round_trip_whole() == self.whole.projection:
            return False
        m = self.round_trip_summands()
        for i in range(2):
            for j in range(2):
                want = self.summands[i].projection if i == j else None
                got = m[i][j].morphism
                if want is None and not got.is_zero():
                    return False
                if want is not None and not got == want:
                    return False
        return True


def split(obj: Smoothing | KarObject, p: CobMorphism) -> Splitting:
    whole = obj if isinstance(obj, KarObject) else KarObject.plain(obj, p.theory)
    if not (p @ p == p):
        raise ValueError("not a projection: p o p != p")
    q = whole.projection - p
    im_p = KarObject(whole.obj, p, check=False)
    im_q = KarObject(whole.obj, q, check=False)
    iso_to = (KarMorphism(whole, im_p, p, check=False), KarMorphism(whole, im_q, q, check=False))
    iso_from = (KarMorphism(im_p, whole, p, check=False), KarMorphism(im_q, whole, q, check=False))
    return Splitting(whole, (im_p, im_q), iso_to, iso_from)
