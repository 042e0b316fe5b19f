"""Tangle and link diagrams given in planar-diagram (PD) notation.

A crossing ``X a b c d`` lists the four edges meeting at the crossing in
counterclockwise order, starting from the incoming under-strand.  Edges
are positive integers.  A diagram may carry a cyclically ordered
(counterclockwise) ``BOUNDARY`` list, making it a tangle, and a number of
crossingless closed circles declared with ``CIRCLES k``.

Every edge has two ends ("darts").  The dart ``(e, s)`` is the ``s``-th
occurrence of edge ``e`` when reading the X-lines in order; the end of a
boundary edge that lies on the boundary circle is ``(e, 1)``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

RED = "R"
GREEN = "G"

Dart = tuple[int, int]


class PDError(ValueError):
    """Malformed or inconsistent PD input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Crossing:
    ports: tuple[int, int, int, int]

    def __post_init__(self):
        if len(self.ports) != 4:
            raise PDError(f"crossing needs four ports, got {self.ports}")


@dataclass(frozen=True)
class Strand:
    """One component of the diagram, traversed in its original direction.

    ``passages`` holds ``(crossing, in_port, out_port)`` triples in order.
    Free circles have a single negative pseudo-edge and no passages.
    """

    edges: tuple[int, ...]
    closed: bool
    passages: tuple[tuple[int, int, int], ...] = ()


@dataclass(frozen=True)
class Orientation:
    """Per-component flag: ``True`` means reversed w.r.t. the original."""

    reversed: tuple[bool, ...]

    def flipped(self) -> Orientation:
        return Orientation(tuple(not f for f in self.reversed))

    @classmethod
    def original(cls, c: int) -> Orientation:
        return cls((False,) * c)


@dataclass(frozen=True)
class CheckerboardColouring:
    """Region colours.  Region 0 is the outer (or marked boundary) region."""

    colours: tuple[str, ...]

    def __getitem__(self, region: int) -> str:
        return self.colours[region]

    def __len__(self) -> int:
        return len(self.colours)


@dataclass(frozen=True)
class TangleDiagram:
    crossings: tuple[Crossing, ...]
    boundary: tuple[int, ...] = ()
    circles: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        object.__setattr__(self, "boundary", tuple(self.boundary))
        self._validate_labels()
        # malformed input fails at construction time
        self.strands
        self.faces
        self._euler_check()

    # ------------------------------------------------------------------
    # validation and dart bookkeeping

    def _validate_labels(self):
        if self.circles < 0:
            raise PDError("negative circle count")
        if len(self.boundary) % 2:
            raise PDError(f"odd number of boundary points ({len(self.boundary)})")
        counts = Counter(e for x in self.crossings for e in x.ports)
        for e in counts:
            if not isinstance(e, int) or e <= 0:
                raise PDError(f"edge label {e!r} is not a positive integer")
        bset = Counter(self.boundary)
        for b, k in bset.items():
            if k != 1:
                raise PDError(f"boundary label {b} listed {k} times")
            if counts.get(b, 0) != 1:
                raise PDError(f"boundary edge {b} must appear once in X-lines, found {counts.get(b, 0)}")
        for e, k in counts.items():
            if e not in bset and k != 2:
                raise PDError(f"edge {e} used {k} times, expected 2")

    @cached_property
    def port_dart(self) -> dict[tuple[int, int], Dart]:
        seen: Counter = Counter()
        out = {}
        for ci, x in enumerate(self.crossings):
            for p, e in enumerate(x.ports):
                out[(ci, p)] = (e, seen[e])
                seen[e] += 1
        return out

    @cached_property
    def dart_location(self) -> dict[Dart, tuple]:
        """Dart -> ``('X', crossing, port)`` or ``('B', boundary_index)``."""
        loc: dict[Dart, tuple] = {d: ("X",) + cp for cp, d in self.port_dart.items()}
        for j, b in enumerate(self.boundary):
            loc[(b, 1)] = ("B", j)
        return loc

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted({e for x in self.crossings for e in x.ports}))

    @property
    def n(self) -> int:
        return len(self.crossings)

    # ------------------------------------------------------------------
    # strand tracing

    def _trace(self, edge: int, arrive: Dart):
        """Follow the strand along ``edge`` arriving at dart ``arrive``.

        Returns edges, passages, and whether the strand closed up.
        """
        edges = [edge]
        passages = []
        start = arrive
        while True:
            loc = self.dart_location[arrive]
            if loc[0] == "B":
                return edges, passages, False
            _, ci, p = loc
            q = (p + 2) % 4
            passages.append((ci, p, q))
            e, s = self.port_dart[(ci, q)]
            arrive = (e, 1 - s)
            if arrive == start:
                return edges, passages, True
            edges.append(e)

    @cached_property
    def strands(self) -> tuple[Strand, ...]:
        visited: set[int] = set()
        raw = []
        for b in self.boundary:
            if b in visited:
                continue
            edges, passages, _ = self._trace(b, (b, 0))
            visited.update(edges)
            raw.append((edges, passages, False))
        for e in self.edges:
            if e in visited:
                continue
            edges, passages, closed = self._trace(e, (e, 1))
            if not closed:
                raise PDError(f"edge {e} lies on an open strand that misses the boundary")
            visited.update(edges)
            raw.append((edges, passages, True))
        strands = [self._orient(*r) for r in raw]
        strands.sort(key=lambda s: min(s.edges))
        strands.extend(Strand((-(i + 1),), True) for i in range(self.circles))
        return tuple(strands)

    def _orient(self, edges, passages, closed) -> Strand:
        under = [p for (_, p, _) in passages if p in (0, 2)]
        forward = None
        if under:
            if all(p == 0 for p in under):
                forward = True
            elif all(p == 2 for p in under):
                forward = False
            else:
                raise PDError(f"strand through edges {sorted(set(edges))} has inconsistent orientation")
        else:
            # over-only strand: direction in which labels increase most often
            seq = list(edges) + ([edges[0]] if closed else [])
            up = sum(b > a for a, b in zip(seq, seq[1:]))
            down = sum(b < a for a, b in zip(seq, seq[1:]))
            forward = up > down or (up == down and seq[0] <= seq[-1])
        if forward:
            return Strand(tuple(edges), closed, tuple(passages))
        if closed:
            # arriving along edges[0] at the first passage; reverse keeps edges[0] first
            redges = [edges[0]] + list(reversed(edges[1:]))
        else:
            redges = list(reversed(edges))
        rpass = tuple((ci, q, p) for (ci, p, q) in reversed(passages))
        return Strand(tuple(redges), closed, rpass)

    @cached_property
    def component_of_edge(self) -> dict[int, int]:
        return {e: i for i, s in enumerate(self.strands) for e in s.edges}

    @cached_property
    def edge_head(self) -> dict[int, Dart]:
        """The dart each edge points into under the original orientation."""
        heads: dict[int, Dart] = {}
        for s in self.strands:
            for ci, p, q in s.passages:
                d_in = self.port_dart[(ci, p)]
                e, t = self.port_dart[(ci, q)]
                for edge, head in ((d_in[0], d_in), (e, (e, 1 - t))):
                    assert heads.setdefault(edge, head) == head
        return heads

    @cached_property
    def over_in_port(self) -> tuple[int, ...]:
        out = [None] * self.n
        for s in self.strands:
            for ci, p, _ in s.passages:
                if p in (1, 3):
                    out[ci] = p
        return tuple(out)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        """Crossing signs under the original orientation (right-hand rule)."""
        return tuple(1 if p == 3 else -1 for p in self.over_in_port)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def crossing_strands(self, ci: int) -> tuple[int, int]:
        """(under component, over component) at crossing ``ci``."""
        ports = self.crossings[ci].ports
        return self.component_of_edge[ports[0]], self.component_of_edge[ports[1]]

    # ------------------------------------------------------------------
    # faces, planarity and checkerboard colouring

    def _next_dart(self, d: Dart) -> Dart:
        """Next leaving dart along the face on the left of ``d``."""
        e, s = d
        arrive = (e, 1 - s)
        loc = self.dart_location[arrive]
        if loc[0] == "B":
            b = self.boundary[(loc[1] + 1) % len(self.boundary)]
            return (b, 1)
        _, ci, p = loc
        return self.port_dart[(ci, (p - 1) % 4)]

    @cached_property
    def faces(self) -> tuple[frozenset, ...]:
        faces = []
        seen: set[Dart] = set()
        for d in sorted(self.dart_location):
            if d in seen:
                continue
            face = []
            cur = d
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                cur = self._next_dart(cur)
            if cur != d:
                raise PDError("face tracing did not close; diagram is not planar")
            faces.append(frozenset(face))
        return tuple(faces)

    @cached_property
    def face_of(self) -> dict[Dart, int]:
        return {d: i for i, f in enumerate(self.faces) for d in f}

    @cached_property
    def pieces(self) -> tuple[tuple[frozenset, bool], ...]:
        """Connected pieces as (set of darts, touches boundary)."""
        parent = {d: d for d in self.dart_location}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            parent[find(a)] = find(b)

        for (e, s) in self.dart_location:
            if (e, 1 - s) in self.dart_location:
                union((e, s), (e, 1 - s))
        for ci in range(self.n):
            for p in range(1, 4):
                union(self.port_dart[(ci, 0)], self.port_dart[(ci, p)])
        bdarts = [(b, 1) for b in self.boundary]
        for a, b in zip(bdarts, bdarts[1:]):
            union(a, b)
        groups: dict = {}
        for d in self.dart_location:
            groups.setdefault(find(d), set()).add(d)
        out = []
        for g in groups.values():
            touches = any(self.dart_location[d][0] == "B" for d in g)
            out.append((frozenset(g), touches))
        out.sort(key=lambda t: min(t[0]))
        return tuple(out)

    def _euler_check(self):
        for darts, touches in self.pieces:
            crossings = {self.dart_location[d][1] for d in darts if self.dart_location[d][0] == "X"}
            edges = {e for e, _ in darts}
            nfaces = len({self.face_of[d] for d in darts})
            k = len(self.boundary) if touches else 0
            v = len(crossings) + k
            ecount = len(edges) + k
            f = nfaces + (1 if touches else 0)
            if v - ecount + f != 2:
                raise PDError(f"planarity check failed: V - E + F = {v - ecount + f} on a piece")

    @cached_property
    def _regions(self) -> tuple[dict[int, int], int]:
        """Map face index -> region index, and total region count."""
        outer_faces = []
        for darts, touches in self.pieces:
            fids = sorted({self.face_of[d] for d in darts})
            if touches:
                outer_faces.append(self.face_of[(self.boundary[0], 1)])
            else:
                fids.sort(key=lambda f: (-len(self.faces[f]), sorted(self.faces[f])))
                outer_faces.append(fids[0])
        region = {f: 0 for f in outer_faces}
        nxt = 1
        for f in range(len(self.faces)):
            if f not in region:
                region[f] = nxt
                nxt += 1
        return region, nxt + self.circles

    @property
    def n_regions(self) -> int:
        return self._regions[1]

    def region_left(self, d: Dart) -> int:
        """Region on the left when leaving along dart ``d``."""
        return self._regions[0][self.face_of[d]]

    @cached_property
    def checkerboard(self) -> CheckerboardColouring:
        region, total = self._regions
        colour: dict[int, str] = {0: GREEN}
        adj: dict[int, set[int]] = {}
        for (e, s) in self.dart_location:
            other = (e, 1 - s)
            if other not in self.dart_location:
                continue
            a, b = region[self.face_of[(e, s)]], region[self.face_of[other]]
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        stack = [0]
        nfaces_regions = total - self.circles
        for r in range(nfaces_regions):
            if r not in colour:
                colour[r] = GREEN
                stack.append(r)
            while stack:
                r0 = stack.pop()
                for r1 in adj.get(r0, ()):
                    want = RED if colour[r0] == GREEN else GREEN
                    if r1 not in colour:
                        colour[r1] = want
                        stack.append(r1)
                    elif colour[r1] != want:
                        raise PDError("regions are not 2-colourable; diagram is not planar")
        for i in range(self.circles):
            colour[nfaces_regions + i] = RED
        return CheckerboardColouring(tuple(colour[r] for r in range(total)))

    def right_region(self, edge: int, forward: bool = True) -> int:
        """Region to the right of ``edge`` traversed with/against the original direction."""
        if edge < 0:
            inner = self._regions[1] - self.circles + (-edge - 1)
            return 0 if forward else inner
        head = self.edge_head[edge]
        tail = (edge, 1 - head[1])
        return self.region_left(head if forward else tail)

    # ------------------------------------------------------------------
    # orientations and linking

    @property
    def c(self) -> int:
        return len(self.strands)

    def orientations(self) -> Iterator[Orientation]:
        for flags in itertools.product((False, True), repeat=self.c):
            yield Orientation(flags)

    def crossing_sign(self, ci: int, o: Orientation | None = None) -> int:
        sign = self.signs[ci]
        if o is None:
            return sign
        u, v = self.crossing_strands(ci)
        return sign if o.reversed[u] == o.reversed[v] else -sign

    def linking_sum(self, o: Orientation) -> int:
        total = 0
        for ci in range(self.n):
            u, v = self.crossing_strands(ci)
            if o.reversed[u] != o.reversed[v]:
                total += self.signs[ci]
        return total

    # ------------------------------------------------------------------
    # constructions

    def to_pd(self) -> str:
        lines = ["X " + " ".join(map(str, x.ports)) for x in self.crossings]
        if self.boundary:
            lines.append("BOUNDARY " + " ".join(map(str, self.boundary)))
        if self.circles:
            lines.append(f"CIRCLES {self.circles}")
        return "\n".join(lines) + "\n"

    def relabel(self, mapping: dict[int, int]) -> TangleDiagram:
        return TangleDiagram(
            tuple(Crossing(tuple(mapping[e] for e in x.ports)) for x in self.crossings),
            tuple(mapping[b] for b in self.boundary),
            self.circles,
        )

    def mirror(self) -> TangleDiagram:
        """Swap over and under at every crossing."""
        out = []
        for x, p in zip(self.crossings, self.over_in_port):
            a, b, c, d = x.ports
            out.append(Crossing((d, a, b, c) if p == 3 else (b, c, d, a)))
        return TangleDiagram(tuple(out), self.boundary, self.circles)

    def disjoint_union(self, other: TangleDiagram) -> TangleDiagram:
        """Side-by-side placement; the other diagram's edges are shifted."""
        if self.boundary and other.boundary:
            raise ValueError("disjoint union of two tangles is not supported")
        shift = max(self.edges, default=0)
        o = other.relabel({e: e + shift for e in other.edges})
        return TangleDiagram(
            self.crossings + o.crossings,
            self.boundary or o.boundary,
            self.circles + other.circles,
        )


def parse_pd(text: str) -> TangleDiagram:
    crossings = []
    boundary: tuple[int, ...] = ()
    circles = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.replace(",", " ").split()
        try:
            values = [int(t) for t in rest]
        except ValueError:
            raise PDError(f"non-integer token in {line!r}", lineno) from None
        key = head.upper()
        if key == "X":
            if len(values) != 4:
                raise PDError(f"X expects 4 labels, got {len(values)}", lineno)
            if any(v <= 0 for v in values):
                raise PDError("edge labels must be positive", lineno)
            crossings.append(Crossing(tuple(values)))
        elif key == "BOUNDARY":
            if boundary:
                raise PDError("duplicate BOUNDARY line", lineno)
            boundary = tuple(values)
        elif key == "CIRCLES":
            if len(values) != 1 or values[0] < 0:
                raise PDError("CIRCLES expects one nonnegative count", lineno)
            circles += values[0]
        else:
            raise PDError(f"unknown token {head!r}", lineno)
    return TangleDiagram(tuple(crossings), boundary, circles)


def component_count(d: TangleDiagram) -> int:
    return d.c


def checkerboard(d: TangleDiagram) -> CheckerboardColouring:
    return d.checkerboard


def crossing_sign(d: TangleDiagram, ci: int, o: Orientation | None = None) -> int:
    return d.crossing_sign(ci, o)


def linking_sum(d: TangleDiagram, o: Orientation) -> int:
    return d.linking_sum(o)
