"""Brute-force homology oracle.

Closed diagrams only.  The Frobenius algebra ``A = Q[X]/(X^2 - delta)``
is checked against the local relations at construction time.  Cobordisms
are evaluated sheet by sheet as products followed by coproducts, without
going through any normal form, and ranks come from exact sparse
elimination over the integers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .cobordism import CobMorphism, Theory
from .complex import FormalComplex, khovanov_cube
from .diagram import TangleDiagram
from .karoubi import ColouredMorphism, ColouredObject, boundary_cycles, cycle_colours, sigma
from .smoothing import resolve

class FrobeniusData:
    """Basis ``(1, X)`` encoded as 0 and 1."""

    def __init__(self, delta: int):
        self.delta = delta
        self._sheets: dict = {}
        self._check()

    def mult(self, a: int, b: int) -> dict[int, int]:
        if a + b < 2:
            return {a + b: 1}
        return {0: self.delta} if self.delta else {}

    def comult(self, a: int) -> dict[tuple[int, int], int]:
        # copairing 1 (x) X + X (x) 1, pushed through left multiplication
        out: dict = {}
        for u, v in ((0, 1), (1, 0)):
            for w, c in self.mult(a, u).items():
                out[(w, v)] = out.get((w, v), 0) + c
        return {k: c for k, c in out.items() if c}

    def counit(self, a: int) -> int:
        return 1 if a == 1 else 0

    def handle(self, a: int) -> dict[int, int]:
        """Multiplication after comultiplication."""
        out: dict = {}
        for (u, v), c in self.comult(a).items():
            for w, c2 in self.mult(u, v).items():
                out[w] = out.get(w, 0) + c * c2
        return {k: v for k, v in out.items() if v}

    def _check(self):
        B = (0, 1)

        def mul_vec(x: dict, y: dict) -> dict:
            out: dict = {}
            for a, ca in x.items():
                for b, cb in y.items():
                    for w, c in self.mult(a, b).items():
                        out[w] = out.get(w, 0) + ca * cb * c
            return {k: v for k, v in out.items() if v}

        for a, b, c in itertools.product(B, repeat=3):
            assert mul_vec(mul_vec({a: 1}, {b: 1}), {c: 1}) == mul_vec({a: 1}, mul_vec({b: 1}, {c: 1}))
        for a, b in itertools.product(B, repeat=2):
            # Frobenius: Delta(ab) = (a (x) 1) Delta(b)
            lhs: dict = {}
            for w, c in self.mult(a, b).items():
                for k, v in self.comult(w).items():
                    lhs[k] = lhs.get(k, 0) + c * v
            rhs: dict = {}
            for (u, v), c in self.comult(b).items():
                for w, c2 in self.mult(a, u).items():
                    rhs[(w, v)] = rhs.get((w, v), 0) + c * c2
            assert {k: v for k, v in lhs.items() if v} == {k: v for k, v in rhs.items() if v}
        for a in B:
            # counit on either side of the coproduct is the identity
            left: dict = {}
            right: dict = {}
            for (u, v), c in self.comult(a).items():
                left[v] = left.get(v, 0) + c * self.counit(u)
                right[u] = right.get(u, 0) + c * self.counit(v)
            assert {k: v for k, v in left.items() if v} == {a: 1} == {k: v for k, v in right.items() if v}
        # sphere, dotted sphere, two dots, handle
        assert self.counit(0) == 0 and self.counit(1) == 1
        assert mul_vec({1: 1}, {1: 1}) == ({0: self.delta} if self.delta else {})
        assert self.handle(0) == {1: 2}
        # neck-cutting: x = eps(x) X + eps(X x) 1
        for a in B:
            cut: dict = {}
            if self.counit(a):
                cut[1] = cut.get(1, 0) + self.counit(a)
            for w, c in self.mult(1, a).items():
                if self.counit(w):
                    cut[0] = cut.get(0, 0) + c * self.counit(w)
            assert cut == {a: 1}

    # -- whole surfaces ------------------------------------------------

    def sheet_map(self, inputs: Sequence[int], n_out: int, genus: int, dots: int) -> dict[tuple[int, ...], int]:
        """Connected surface with ``len(inputs)`` incoming and ``n_out`` outgoing circles."""
        key = (tuple(inputs), n_out, genus, dots)
        if key not in self._sheets:
            self._sheets[key] = self._sheet_map(*key)
        return self._sheets[key]

    def _sheet_map(self, inputs, n_out, genus, dots):
        vec = {0: 1}
        for a in inputs:
            vec = _lin(vec, lambda x, a=a: self.mult(x, a))
        for _ in range(dots):
            vec = _lin(vec, lambda x: self.mult(x, 1))
        for _ in range(genus):
            vec = _lin(vec, self.handle)
        if n_out == 0:
            return {(): sum(c * self.counit(a) for a, c in vec.items())}
        out = {(a,): c for a, c in vec.items()}
        for _ in range(n_out - 1):
            nxt: dict = {}
            for t, c in out.items():
                for (u, v), c2 in self.comult(t[-1]).items():
                    key = t[:-1] + (u, v)
                    nxt[key] = nxt.get(key, 0) + c * c2
            out = nxt
        return {k: v for k, v in out.items() if v}


def _lin(vec: dict, f) -> dict:
    out: dict = {}
    for a, c in vec.items():
        for w, c2 in f(a).items():
            out[w] = out.get(w, 0) + c * c2
    return {k: v for k, v in out.items() if v}


# ----------------------------------------------------------------------
# exact linear algebra


def _integral_rows(rows: list[dict]) -> list[dict[int, int]]:
    out = []
    for row in rows:
        row = {k: Fraction(v) for k, v in row.items() if v}
        if not row:
            continue
        m = lcm(*(v.denominator for v in row.values()))
        out.append({k: int(v * m) for k, v in row.items()})
    return out


def exact_rank(rows: list[dict]) -> int:
    """Rank of a sparse matrix given as rows ``{column: value}``."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in _integral_rows(rows):
        while row:
            col = min(row)
            if col not in pivots:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                pivots[col] = {k: v // g for k, v in row.items()}
                rank += 1
                break
            p = pivots[col]
            a, b = p[col], row[col]
            new = {k: a * v for k, v in row.items()}
            for k, v in p.items():
                new[k] = new.get(k, 0) - b * v
            row = {k: v for k, v in new.items() if v}
            if row:
                g = 0
                for v in row.values():
                    g = gcd(g, v)
                row = {k: v // g for k, v in row.items()}
    return rank


@dataclass
class RationalChainComplex:
    """``dims[h]`` is the ambient dimension, ``chain_ranks[h]`` the rank of
    the chain group (they differ when objects carry projections);
    ``matrices[h]`` maps height ``h`` to ``h + 1`` as sparse rows."""

    dims: dict[int, int]
    chain_ranks: dict[int, int]
    matrices: dict[int, list[dict[int, Fraction]]]

    def homology_ranks(self) -> dict[int, int]:
        rk = {h: exact_rank(m) for h, m in self.matrices.items()}
        out = {}
        for h, n in sorted(self.chain_ranks.items()):
            r = n - rk.get(h, 0) - rk.get(h - 1, 0)
            if r:
                out[h] = r
        return out


# ----------------------------------------------------------------------
# cubes


def _basis(k: int):
    return list(itertools.product((0, 1), repeat=k))


def lee_homology(d: TangleDiagram, delta: int = 1) -> dict[int, int]:
    """Homology ranks of the cobordism cube of ``d`` evaluated in ``A``."""
    if d.boundary:
        raise ValueError("oracle requires closed diagram")
    return tqft_evaluate(khovanov_cube(d, Theory(delta)), FrobeniusData(delta)).homology_ranks()


def direct_homology(d: TangleDiagram, delta: int = 1) -> dict[int, int]:
    """Same ranks from a cube assembled directly out of merge and split maps."""
    if d.boundary:
        raise ValueError("oracle requires closed diagram")
    return direct_chain_complex(d, FrobeniusData(delta)).homology_ranks()


def direct_chain_complex(d: TangleDiagram, frob: FrobeniusData) -> RationalChainComplex:
    n = d.n
    cube = {bits: resolve(d, bits) for bits in itertools.product((0, 1), repeat=n)}
    offset: dict[tuple, int] = {}
    dims: dict[int, int] = {}
    for bits, s in cube.items():
        h = sum(bits) - d.n_minus
        offset[bits] = dims.get(h, 0)
        dims[h] = dims.get(h, 0) + 2 ** len(s.curves)
    rows: dict[int, dict[int, dict[int, int]]] = {}
    for bits, s in cube.items():
        h = sum(bits) - d.n_minus
        for k in range(n):
            if bits[k]:
                continue
            nb = bits[:k] + (1,) + bits[k + 1:]
            t = cube[nb]
            sign = -1 if sum(bits[:k]) % 2 else 1
            for (j, col), v in _saddle_matrix(d, k, s, t, frob).items():
                r = rows.setdefault(h, {}).setdefault(offset[nb] + j, {})
                r[offset[bits] + col] = r.get(offset[bits] + col, 0) + sign * v
    matrices = {h: [r for r in m.values()] for h, m in rows.items()}
    return RationalChainComplex(dims, dict(dims), matrices)


def _saddle_matrix(d, k, s, t, frob):
    ports = d.crossings[k].ports
    edges_at = set(ports)
    key_s = [frozenset(c.edges) for c in s.curves]
    key_t = [frozenset(c.edges) for c in t.curves]
    stay = [(i, key_t.index(e)) for i, e in enumerate(key_s) if not (e & edges_at)]
    moved_s = [i for i, e in enumerate(key_s) if e & edges_at]
    moved_t = [j for j, e in enumerate(key_t) if e & edges_at]
    bt = _basis(len(t.curves))
    index_t = {b: i for i, b in enumerate(bt)}
    out = {}
    for col, b in enumerate(_basis(len(s.curves))):
        for outs, c in frob.sheet_map([b[i] for i in moved_s], len(moved_t), 0, 0).items():
            tb = [0] * len(t.curves)
            for i, j in stay:
                tb[j] = b[i]
            for j, v in zip(moved_t, outs):
                tb[j] = v
            out[(index_t[tuple(tb)], col)] = c
    return out


# ----------------------------------------------------------------------
# evaluation of formal complexes


def evaluate_morphism(f: CobMorphism, frob: FrobeniusData) -> dict[tuple[int, int], Fraction]:
    """Matrix of ``F(f)`` between tensor powers of ``A``, as ``{(row, col): value}``."""
    src, tgt = f.source, f.target
    if any(not c.closed for c in src.curves + tgt.curves):
        raise ValueError("oracle requires closed diagram")
    src_basis = _basis(len(src.curves))
    bt = {b: i for i, b in enumerate(_basis(len(tgt.curves)))}
    # integer accumulation over a common denominator
    den = lcm(1, *(Fraction(c).denominator for c in f.terms.values()))
    out: dict = {}
    for sheets, coeff in f.terms.items():
        scale = int(coeff * den)
        plan = [
            ([i for side, i in sh.curves if side == "s"], [j for side, j in sh.curves if side == "t"], sh.genus, sh.dots)
            for sh in sheets
        ]
        slots = [j for _, outs, _, _ in plan for j in outs]
        for col, b in enumerate(src_basis):
            partial = {(): scale}
            for ins, outs, genus, dots in plan:
                m = frob.sheet_map(tuple(b[i] for i in ins), len(outs), genus, dots)
                partial = {p + q: c * c2 for p, c in partial.items() for q, c2 in m.items() if c2}
                if not partial:
                    break
            for vals, c in partial.items():
                tb = [0] * len(tgt.curves)
                for j, v in zip(slots, vals):
                    tb[j] = v
                key = (bt[tuple(tb)], col)
                out[key] = out.get(key, 0) + c
    return {k: Fraction(v, den) for k, v in out.items() if v}


def _evaluate_factored(n_src: int, n_tgt: int, factors, frob: FrobeniusData) -> dict[tuple[int, int], Fraction]:
    """Matrix of a tensor product of sheets, each carrying a dot polynomial
    ``{dots: coeff}``; one evaluation per sheet instead of per expanded term."""
    bt = {b: i for i, b in enumerate(_basis(n_tgt))}
    slots = [j for _, outs, _, _ in factors for j in outs]
    cache: dict = {}

    def local(k, vals):
        key = (k, vals)
        if key not in cache:
            _, outs, genus, poly = factors[k]
            acc: dict = {}
            for dots, coeff in poly.items():
                for q, v in frob.sheet_map(vals, len(outs), genus, dots).items():
                    acc[q] = acc.get(q, 0) + coeff * v
            cache[key] = {q: v for q, v in acc.items() if v}
        return cache[key]

    out: dict = {}
    for col, b in enumerate(_basis(n_src)):
        partial = {(): Fraction(1)}
        for k, (ins, _, _, _) in enumerate(factors):
            m = local(k, tuple(b[i] for i in ins))
            partial = {p + q: c * c2 for p, c in partial.items() for q, c2 in m.items()}
            if not partial:
                break
        for vals, c in partial.items():
            tb = [0] * n_tgt
            for j, v in zip(slots, vals):
                tb[j] = v
            key = (bt[tuple(tb)], col)
            out[key] = out.get(key, 0) + c
    return {k: v for k, v in out.items() if v}


def _disc_poly(colour: str, scale=1) -> dict[int, Fraction]:
    # (1 + sigma X) / 2
    return {0: Fraction(scale, 2), 1: Fraction(scale * sigma(colour), 2)}


def evaluate_projection(o, frob: FrobeniusData) -> dict[tuple[int, int], Fraction]:
    if not isinstance(o, ColouredObject):
        return evaluate_morphism(o.projection, frob)
    n = len(o.obj.curves)
    factors = [([i], [i], 0, _disc_poly(col)) for i, col in enumerate(o.colours)]
    return _evaluate_factored(n, n, factors, frob)


def evaluate_kar(m, frob: FrobeniusData) -> dict[tuple[int, int], Fraction]:
    """``F`` of a Karoubi morphism.  A coloured morphism ``s * E(a, b)`` is a
    product of colour-projected discs, one per boundary cycle."""
    if not isinstance(m, ColouredMorphism):
        return evaluate_morphism(m.morphism, frob)
    a, b = m.source, m.target
    if any(not c.closed for c in a.obj.curves + b.obj.curves):
        raise ValueError("oracle requires closed diagram")
    cols = cycle_colours(a, b)
    if not m.scalar or cols is None:
        return {}
    factors = []
    for k, (cyc, col) in enumerate(zip(boundary_cycles(a.obj, b.obj), cols)):
        ins = [i for side, i in cyc if side == "s"]
        outs = [j for side, j in cyc if side == "t"]
        factors.append((ins, outs, 0, _disc_poly(col, m.scalar if k == 0 else 1)))
    if not factors:
        return {(0, 0): m.scalar}
    return _evaluate_factored(len(a.obj.curves), len(b.obj.curves), factors, frob)


def tqft_evaluate(c: FormalComplex, frob: FrobeniusData) -> RationalChainComplex:
    """Apply the TQFT to a complex over Kar(Cob); each object contributes
    ``rank F(p)`` to its chain group."""
    dims: dict[int, int] = {}
    ranks: dict[int, int] = {}
    offset: dict[tuple[int, int], int] = {}
    for h, objs in c.objects.items():
        for i, o in enumerate(objs):
            offset[(h, i)] = dims.get(h, 0)
            dims[h] = dims.get(h, 0) + 2 ** len(o.obj.curves)
            p = evaluate_projection(o, frob)
            ranks[h] = ranks.get(h, 0) + exact_rank(_rows(p))
    matrices: dict[int, dict[int, dict]] = {}
    for h, j, i, m in c.entries():
        for (r, col), v in evaluate_kar(m, frob).items():
            row = matrices.setdefault(h, {}).setdefault(offset[(h + 1, j)] + r, {})
            key = offset[(h, i)] + col
            row[key] = row.get(key, 0) + v
    return RationalChainComplex(dims, ranks, {h: list(m.values()) for h, m in matrices.items()})


def _rows(entries: dict[tuple[int, int], Fraction]) -> list[dict]:
    rows: dict = {}
    for (r, c), v in entries.items():
        rows.setdefault(r, {})[c] = v
    return list(rows.values())


def rank_table(d: TangleDiagram, delta: int = 1) -> dict:
    ranks = lee_homology(d, delta)
    return {"delta": delta, "ranks": {str(h): r for h, r in sorted(ranks.items())}, "total": sum(ranks.values())}
