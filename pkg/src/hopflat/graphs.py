"""Directed ribbon graphs, thickenings, path words, and defect decorations.

A ribbon graph is a directed graph with a cyclic order of edge ends at each
vertex (counterclockwise in figures) and a cilium cutting each cyclic order
into a linear one.  The thickening replaces each edge by four edges
``e^s, e^t, e^L, e^R``; its vertices ("sites") are the corners between
consecutive edge ends.  Paths in the thickening are reduced words of signed
letters, stored first-traversed-first.

Corner bookkeeping: with ends ``x_0 < ... < x_{k-1}`` from the cilium, gap
``i`` lies between ``x_{i-1}`` and ``x_i`` (cyclically), so gap 0 holds the
cilium.  ``e^s`` crosses the start end counterclockwise, ``e^t`` crosses the
target end clockwise, ``e^L``/``e^R`` run along the left/right side of ``e``
seen along its orientation.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .errors import ConfigError, PathError


class Site(NamedTuple):
    vertex: str
    gap: int

    def __str__(self):
        return f"{self.vertex}:{self.gap}"


class Letter(NamedTuple):
    edge: str
    kind: str   # one of "stLR"
    sign: int   # +1 or -1

    def inverse(self):
        return Letter(self.edge, self.kind, -self.sign)

    @property
    def signed_kind(self):
        return self.kind if self.sign > 0 else "-" + self.kind

    def __str__(self):
        return f"{self.edge}^{'' if self.sign > 0 else '-'}{self.kind}"


_LETTER_RE = re.compile(r"^([A-Za-z0-9_]+)\^(-?)([stLR])$")


def parse_letter(text):
    m = _LETTER_RE.match(text.strip())
    if not m:
        raise PathError(f"bad letter {text!r}; expected like 'e3^-L'")
    return Letter(m.group(1), m.group(3), -1 if m.group(2) else 1)


def parse_word(text):
    """Whitespace-separated letters in composition order (rightmost first)."""
    letters = [parse_letter(t) for t in text.split()]
    return tuple(reversed(letters))


def format_word(word):
    return " ".join(str(l) for l in reversed(word))


class Face(NamedTuple):
    index: int
    walk: tuple          # directed edges (edge_id, +-1), counterclockwise
    transits: tuple      # Site visited between walk[i-1] and walk[i]

    def __len__(self):
        return len(self.walk)


class RibbonGraph:
    """Vertices with ciliated cyclic edge-end orders; loops allowed."""

    def __init__(self, vertices, edges):
        """``vertices``: id -> list of (edge_id, 's'|'t') ends, already cut at
        the cilium; ``edges``: id -> (src, dst)."""
        self.vertices = {v: list(ends) for v, ends in vertices.items()}
        self.edges = dict(edges)
        self._check()
        self._positions = {}
        for v, ends in self.vertices.items():
            for pos, end in enumerate(ends):
                self._positions[end] = (v, pos)
        self._faces = None
        self._corner_face = None

    def _check(self):
        seen = {}
        for v, ends in self.vertices.items():
            for end in ends:
                if end in seen:
                    raise ConfigError(f"edge end {end} listed twice")
                seen[end] = v
        for e, (src, dst) in self.edges.items():
            for which, v in (("s", src), ("t", dst)):
                got = seen.pop((e, which), None)
                if got is None:
                    raise ConfigError(f"end ({e},{which}) missing from cyclic orders")
                if got != v:
                    raise ConfigError(f"end ({e},{which}) listed at {got}, edge says {v}")
        if seen:
            raise ConfigError(f"unknown edge ends in cyclic orders: {sorted(seen)}")

    # -- ends and corners ----------------------------------------------------
    def end_position(self, edge, which):
        return self._positions[(edge, which)]

    def degree(self, v):
        return len(self.vertices[v])

    def gap_before(self, edge, which):
        v, p = self.end_position(edge, which)
        return Site(v, p)

    def gap_after(self, edge, which):
        v, p = self.end_position(edge, which)
        return Site(v, (p + 1) % len(self.vertices[v]))

    def sites(self):
        return [Site(v, g) for v, ends in self.vertices.items()
                for g in range(max(1, len(ends)))]

    def letter_endpoints(self, letter):
        """(source site, target site) of one thickened edge."""
        e, k = letter.edge, letter.kind
        if k == "s":
            src, dst = self.gap_before(e, "s"), self.gap_after(e, "s")
        elif k == "t":
            src, dst = self.gap_after(e, "t"), self.gap_before(e, "t")
        elif k == "L":
            src, dst = self.gap_after(e, "s"), self.gap_before(e, "t")
        else:
            src, dst = self.gap_before(e, "s"), self.gap_after(e, "t")
        return (src, dst) if letter.sign > 0 else (dst, src)

    # -- faces ----------------------------------------------------------------
    def faces(self):
        """Maximal-left-turn closed walks; every directed edge in exactly one."""
        if self._faces is not None:
            return self._faces
        remaining = {(e, d) for e in self.edges for d in (1, -1)}
        faces = []
        corner_face = {}
        while remaining:
            start = min(remaining)
            walk = []
            transits = []
            cur = start
            while True:
                walk.append(cur)
                remaining.discard(cur)
                e, d = cur
                w = self.edges[e][1] if d > 0 else self.edges[e][0]
                arrive = (e, "t" if d > 0 else "s")
                _, p = self._positions[arrive]
                k = len(self.vertices[w])
                corner = Site(w, p)
                leave = self.vertices[w][(p - 1) % k]
                transits.append(corner)
                e2, which = leave
                cur = (e2, 1 if which == "s" else -1)
                if cur == start:
                    break
            # transit i sits between walk[i] and walk[i+1]; rotate so
            # transits[i] precedes walk[i]
            transits = tuple(transits[-1:] + transits[:-1])
            face = Face(len(faces), tuple(walk), transits)
            faces.append(face)
            for c in face.transits:
                corner_face[c] = face.index
        self._faces = faces
        self._corner_face = corner_face
        return faces

    def corner_face(self, site):
        self.faces()
        if site not in self._corner_face:
            # vertices of degree zero: single corner, no face walk
            raise PathError(f"no face transit at corner {site}")
        return self._corner_face[site]

    def site_tag(self, site):
        """(vertex, face index) pair labelling the site."""
        return (site.vertex, self.corner_face(site))

    def sites_disjoint(self, s, t):
        vs, fs = self.site_tag(s)
        vt, ft = self.site_tag(t)
        return vs != vt and fs != ft

    # -- distinguished closed paths -------------------------------------------
    def vertex_path(self, site):
        """Clockwise tour of the vertex: letters e^{-s}, e^{t} only."""
        v, g = site
        ends = self.vertices[v]
        k = len(ends)
        word = []
        for i in range(k):
            e, which = ends[(g - 1 - i) % k]
            word.append(Letter(e, "s", -1) if which == "s" else Letter(e, "t", 1))
        return ThickPath(self, tuple(word))

    def face_path(self, site):
        """Clockwise tour of the face of the corner: letters e^{-L}, e^{R}."""
        faces = self.faces()
        f = faces[self.corner_face(site)]
        i = f.transits.index(site)
        walk = f.walk[i:] + f.walk[:i]
        word = []
        for e, d in reversed(walk):
            word.append(Letter(e, "L", -1) if d > 0 else Letter(e, "R", 1))
        return ThickPath(self, tuple(word))

    def thick_edge_count(self):
        return 4 * len(self.edges)

    def __repr__(self):
        return f"RibbonGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"


def _reduce(word):
    out = []
    for l in word:
        if out and out[-1].edge == l.edge and out[-1].kind == l.kind \
                and out[-1].sign == -l.sign:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


class ThickPath:
    """A reduced composable word in the thickening, first-traversed-first."""

    def __init__(self, graph, word, reduce=True):
        self.graph = graph
        self.word = _reduce(word) if reduce else tuple(word)
        for a, b in zip(self.word, self.word[1:]):
            if graph.letter_endpoints(a)[1] != graph.letter_endpoints(b)[0]:
                raise PathError(f"non-composable word at {a} -> {b}")

    @classmethod
    def from_text(cls, graph, text):
        return cls(graph, parse_word(text))

    @property
    def start(self):
        if not self.word:
            return None
        return self.graph.letter_endpoints(self.word[0])[0]

    @property
    def end(self):
        if not self.word:
            return None
        return self.graph.letter_endpoints(self.word[-1])[1]

    def __len__(self):
        return len(self.word)

    def inverse(self):
        return ThickPath(self.graph, tuple(l.inverse() for l in reversed(self.word)))

    def compose(self, other):
        """self o other: ``other`` is traversed first."""
        if other.word and self.word and other.end != self.start:
            raise PathError(f"cannot compose: {other.end} != {self.start}")
        return ThickPath(self.graph, other.word + self.word)

    # -- endpoint sides (signs of the first/last traversed letters) ----------
    @property
    def ends_left(self):
        return self.word[-1].signed_kind in ("-s", "t", "-R", "L")

    @property
    def ends_right(self):
        return self.word[-1].signed_kind in ("s", "-t", "R", "-L")

    @property
    def starts_left(self):
        return self.word[0].signed_kind in ("s", "-t", "R", "-L")

    @property
    def starts_right(self):
        return self.word[0].signed_kind in ("-s", "t", "-R", "L")

    @property
    def side_type(self):
        a = "left" if self.starts_left else "right"
        b = "left" if self.ends_left else "right"
        return f"{a}-{b}"

    def is_closed(self):
        return self.start == self.end

    # -- path classes ----------------------------------------------------------
    def is_ribbon(self):
        seen = set()
        kinds = {}
        for l in self.word:
            key = (l.edge, l.kind)
            if key in seen:
                return False
            seen.add(key)
            kinds.setdefault(l.edge, set()).add(l.kind)
        for ks in kinds.values():
            if ks & {"L", "R"} and ks & {"s", "t"}:
                return False
        return True

    def is_simple(self):
        """Every split is non-crossing or passes a corner of one rectangle."""
        w = self.word
        for i in range(1, len(w)):
            first, second = w[:i], w[i:]
            if _non_crossing(first, second):
                continue
            y, x = w[i - 1], w[i]
            if _corner_kind(x, y) is None:
                return False
            rest1, rest2 = second[1:], first[:-1]
            corner = (y, x)
            if not (_non_crossing(rest2, rest1) and _non_crossing(corner, rest1)
                    and _non_crossing(corner, rest2)):
                return False
        return True

    def classify(self, model=None):
        out = {
            "is_ribbon": self.is_ribbon(),
            "is_simple": self.is_simple(),
            "side_type": self.side_type,
        }
        if model is not None:
            out["is_permissible"] = model.is_permissible(self)
        return out

    def __repr__(self):
        return f"ThickPath({format_word(self.word)})"


def _edge_kinds(word):
    kinds = {}
    for l in word:
        kinds.setdefault(l.edge, set()).add(l.kind)
    return kinds


_COMPATIBLE = {"s": {"t"}, "t": {"s"}, "L": {"R"}, "R": {"L"}}


def _non_crossing(w1, w2):
    k1, k2 = _edge_kinds(w1), _edge_kinds(w2)
    for e in set(k1) & set(k2):
        for a in k1[e]:
            if not k2[e] <= _COMPATIBLE[a]:
                return False
    return True


# two-letter corner words x o y (y traversed first): d = t.R, dbar = (-t).L,
# d' = L.s, dbar' = R.(-s), and their inverses
_CORNERS = {
    ("t", "R"): "d", ("-R", "-t"): "-d",
    ("-t", "L"): "dbar", ("-L", "t"): "-dbar",
    ("L", "s"): "d'", ("-s", "-L"): "-d'",
    ("R", "-s"): "dbar'", ("s", "-R"): "-dbar'",
}


def _corner_kind(x, y):
    """Corner name when x o y is a two-letter rectangle corner on one edge."""
    if x.edge != y.edge:
        return None
    return _CORNERS.get((x.signed_kind, y.signed_kind))


# joint letters: one-letter {L, R, s, t} and two-letter corners
def _joint_splits(word):
    """Decompositions word = rest . a . tail (tail at the end of traversal);
    yields (tail_len, a_letters, rest)."""
    n = len(word)
    for tail_len in range(n):
        cut = n - tail_len
        # one-letter a
        if cut >= 1:
            yield tail_len, word[cut - 1:cut], word[:cut - 1]
        # two-letter corner a
        if cut >= 2 and _corner_kind(word[cut - 1], word[cut - 2]):
            yield tail_len, word[cut - 2:cut], word[:cut - 2]


_SIDE_CLASS = frozenset(["L", "R", "-L", "-R"])
_END_CLASS = frozenset(["s", "t", "-s", "-t"])


def _a_class(letters):
    """'side' for one-letter L/R, 'end' for one-letter s/t, 'corner' for two."""
    if len(letters) == 2:
        return "corner"
    return "side" if letters[0].signed_kind in _SIDE_CLASS else "end"


def left_joint(p1, p2):
    """Whether p1 = rho . e^a . p1', p2 = rho . e^b . p2' with a shared ribbon
    tail rho, the (a, b) combination admitted, and rho, p1', p2' mutually
    non-crossing."""
    g = p1.graph
    for t1, a, rest1 in _joint_splits(p1.word):
        for t2, b, rest2 in _joint_splits(p2.word):
            if t1 != t2 or p1.word[len(p1.word) - t1:] != p2.word[len(p2.word) - t2:]:
                continue
            if a[-1].edge != b[-1].edge:
                continue
            ca, cb = _a_class(a), _a_class(b)
            ok = (ca in ("side", "corner") and cb == "end") or \
                 (ca == "side" and cb in ("end", "corner"))
            if not ok:
                continue
            tail = p1.word[len(p1.word) - t1:]
            if tail and not ThickPath(g, tail, reduce=False).is_ribbon():
                continue
            if _non_crossing(tail, rest1) and _non_crossing(tail, rest2) \
                    and _non_crossing(rest1, rest2):
                return True
    return False


def right_joint(p1, p2):
    return left_joint(p1.inverse(), p2.inverse())


def middle_joint(p1, p2):
    """p1 = p1' o p1'', p2 = p2' o p2'' with a left joint between the
    first-traversed parts and a right joint between the later parts (or with
    p1, p2 swapped)."""
    for q1, q2 in ((p1, p2), (p2, p1)):
        w1, w2 = q1.word, q2.word
        for i in range(1, len(w1)):
            for j in range(1, len(w2)):
                first1 = ThickPath(q1.graph, w1[:i], reduce=False)
                first2 = ThickPath(q2.graph, w2[:j], reduce=False)
                second1 = ThickPath(q1.graph, w1[i:], reduce=False)
                second2 = ThickPath(q2.graph, w2[j:], reduce=False)
                if left_joint(first1, first2) and right_joint(second1, second2):
                    return True
    return False


def joints(p1, p2):
    """Classify the relative position: none-cross, left, right, middle, other."""
    if _non_crossing(p1.word, p2.word):
        return "none-cross"
    if left_joint(p1, p2):
        return "left"
    if right_joint(p1, p2):
        return "right"
    if middle_joint(p1, p2):
        return "middle"
    return "other"


# ---------------------------------------------------------------------------
# defect and boundary decorations


class LineSubgraph(NamedTuple):
    """An oriented cyclic subgraph: ``cycle`` lists edge ids head-to-tail."""
    id: str
    cycle: tuple

    def vertices(self, graph):
        return [graph.edges[e][0] for e in self.cycle]


class DefectGraph:
    """A ribbon graph partitioned into bulk regions, boundary lines bordering
    a bulk region, and defect lines separating two bulk regions."""

    def __init__(self, graph, bulk, boundary=(), defect=(), extra_bulk_vertices=None):
        """``bulk``: id -> list of edge ids.  ``boundary``: iterable of
        (id, cycle, bulk_id).  ``defect``: iterable of (id, cycle, left_bulk,
        right_bulk).  ``extra_bulk_vertices``: id -> vertices kept in a bulk
        region without carrying any of its edges."""
        self.graph = graph
        self.bulk = {b: tuple(e) for b, e in bulk.items()}
        self.boundary = {a[0]: LineSubgraph(a[0], tuple(a[1])) for a in boundary}
        self.boundary_bulk = {a[0]: a[2] for a in boundary}
        self.defect = {d[0]: LineSubgraph(d[0], tuple(d[1])) for d in defect}
        self.defect_bulks = {d[0]: (d[2], d[3]) for d in defect}
        self.extra_bulk_vertices = {b: tuple(v) for b, v in
                                    (extra_bulk_vertices or {}).items()}
        self.edge_region = {}
        for b, es in self.bulk.items():
            for e in es:
                self.edge_region.setdefault(e, []).append(("bulk", b))
        for a, line in self.boundary.items():
            for e in line.cycle:
                self.edge_region.setdefault(e, []).append(("boundary", a))
        for d, line in self.defect.items():
            for e in line.cycle:
                self.edge_region.setdefault(e, []).append(("defect", d))

    # -- derived incidence ----------------------------------------------------
    def region_of_edge(self, e):
        regions = self.edge_region.get(e, [])
        return regions[0] if len(regions) == 1 else None

    def bulk_vertices(self, b):
        vs = set(self.extra_bulk_vertices.get(b, ()))
        for e in self.bulk[b]:
            vs.update(self.graph.edges[e])
        for a, line in self.boundary.items():
            if self.boundary_bulk[a] == b:
                vs.update(line.vertices(self.graph))
        for d, line in self.defect.items():
            if b in self.defect_bulks[d]:
                vs.update(line.vertices(self.graph))
        return vs

    def line_out_in(self, line, v):
        """(outgoing, incoming) edge of an oriented cyclic line at vertex v."""
        out_e = in_e = None
        for e in line.cycle:
            src, dst = self.graph.edges[e]
            if src == v:
                out_e = e
            if dst == v:
                in_e = e
        return out_e, in_e

    def _between_ccw(self, v, start_end, stop_end, query_end):
        """Is query strictly between start and stop counterclockwise at v?"""
        ends = self.graph.vertices[v]
        k = len(ends)
        i = ends.index(start_end)
        j = ends.index(stop_end)
        q = ends.index(query_end)
        span = (j - i) % k
        return 0 < (q - i) % k < span

    # -- Def-style validity -----------------------------------------------------
    def validate(self):
        """One entry per structural condition; all must hold."""
        from .hopf import CheckReport

        g = self.graph
        rep = CheckReport("defect graph", tol=0.5)

        lines = list(self.boundary.values()) + list(self.defect.values())
        shared = 0
        for i, l1 in enumerate(lines):
            for l2 in lines[i + 1:]:
                if set(l1.vertices(g)) & set(l2.vertices(g)):
                    shared += 1
        rep.add("lines-vertex-disjoint", shared)

        bad = sum(1 for e in g.edges if len(self.edge_region.get(e, [])) != 1)
        rep.add("edges-in-exactly-one-region", bad)

        bad = 0
        for ls in list(self.boundary.values()) + list(self.defect.values()):
            if not self._is_cycle(ls):
                bad += 1
        rep.add("lines-are-oriented-cycles", bad)

        bad = 0
        for b, es in self.bulk.items():
            if es and not self._connected(set(es)):
                bad += 1
        rep.add("bulk-regions-connected", bad)

        # defect vertices: edges of the left (right) bulk lie left (right)
        # of the line orientation
        bad = 0
        for d, line in self.defect.items():
            bl, br = self.defect_bulks[d]
            for v in line.vertices(g):
                out_e, in_e = self.line_out_in(line, v)
                if out_e is None or in_e is None:
                    bad += 1
                    continue
                out_end, in_end = (out_e, "s"), (in_e, "t")
                for (e, which) in g.vertices[v]:
                    region = self.region_of_edge(e)
                    if region is None or region[0] != "bulk":
                        continue
                    left = self._between_ccw(v, out_end, in_end, (e, which))
                    if region[1] == bl and not left:
                        bad += 1
                    elif region[1] == br and left:
                        bad += 1
                    elif region[1] not in (bl, br):
                        bad += 1
        rep.add("defect-edges-left-right-placement", bad)

        bad = 0
        for a, line in self.boundary.items():
            ba = self.boundary_bulk[a]
            for v in line.vertices(g):
                out_e, in_e = self.line_out_in(line, v)
                if out_e is None or in_e is None:
                    bad += 1
                    continue
                for (e, which) in g.vertices[v]:
                    region = self.region_of_edge(e)
                    if region is None or region[0] != "bulk":
                        continue
                    if region[1] != ba:
                        bad += 1
                    elif not self._between_ccw(v, (out_e, "s"), (in_e, "t"),
                                               (e, which)):
                        bad += 1
        rep.add("boundary-edges-left-placement", bad)

        bad = 0
        memberships = {v: set() for v in g.vertices}
        for b in self.bulk:
            for v in self.bulk_vertices(b):
                memberships[v].add(b)
        for v, bs in memberships.items():
            if not 1 <= len(bs) <= 2:
                bad += 1
            elif len(bs) == 2:
                ok = any(v in line.vertices(g) and set(self.defect_bulks[d]) == bs
                         for d, line in self.defect.items())
                if not ok:
                    bad += 1
        rep.add("vertices-in-one-or-two-bulks", bad)
        return rep

    def _is_cycle(self, line):
        g = self.graph
        if not line.cycle:
            return False
        for e, f in zip(line.cycle, line.cycle[1:] + line.cycle[:1]):
            if g.edges[e][1] != g.edges[f][0]:
                return False
        heads = [g.edges[e][0] for e in line.cycle]
        return len(set(heads)) == len(heads)

    def _connected(self, edge_set):
        g = self.graph
        adj = {}
        for e in edge_set:
            s, t = g.edges[e]
            adj.setdefault(s, set()).add(t)
            adj.setdefault(t, set()).add(s)
        start = next(iter(adj))
        seen = {start}
        stack = [start]
        while stack:
            for w in adj.get(stack.pop(), ()):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen == set(adj)

    # -- distinguished sites -----------------------------------------------------
    def defect_site_pairs(self, d):
        """(s_L, s_R) per defect vertex: corners immediately left and right
        of the outgoing defect edge."""
        g = self.graph
        line = self.defect[d]
        pairs = []
        for v in line.vertices(g):
            out_e, _ = self.line_out_in(line, v)
            s_l = g.gap_after(out_e, "s")
            s_r = g.gap_before(out_e, "s")
            pairs.append((s_l, s_r))
        return pairs

    def boundary_sites(self, a):
        """The corner immediately left of the outgoing boundary edge, per
        boundary vertex."""
        g = self.graph
        line = self.boundary[a]
        return [g.gap_after(self.line_out_in(line, v)[0], "s")
                for v in line.vertices(g)]

    def site_kind(self, site):
        """('bulk', b), ('boundary', a), ('defect-left/right', d), or None.

        A site away from the lines counts as a site in bulk region ``b``
        when every edge its vertex and face paths touch belongs to ``b``, to
        a boundary line bordering ``b``, or to a defect line with ``b`` on
        one side, and ``b`` is unique.  At line vertices only the
        distinguished corners are classified.
        """
        g = self.graph
        v = site.vertex
        for d, line in self.defect.items():
            if v in line.vertices(g):
                for s_l, s_r in self.defect_site_pairs(d):
                    if site == s_l:
                        return ("defect-left", d)
                    if site == s_r:
                        return ("defect-right", d)
                return None
        for a, line in self.boundary.items():
            if v in line.vertices(g):
                if site in self.boundary_sites(a):
                    return ("boundary", a)
                return None
        vp = g.vertex_path(site)
        candidates = None
        for l in list(vp.word) + (list(g.face_path(site).word)
                                  if g.degree(v) else []):
            r = self.region_of_edge(l.edge)
            if r is None:
                return None
            kind, rid = r
            if kind == "bulk":
                allowed = {rid}
            elif kind == "boundary":
                allowed = {self.boundary_bulk[rid]}
            else:
                allowed = set(self.defect_bulks[rid])
            candidates = allowed if candidates is None else candidates & allowed
        if candidates and len(candidates) == 1:
            return ("bulk", next(iter(candidates)))
        return None

    def is_permissible(self, path):
        """No s/t letters over defect or boundary edges."""
        for l in path.word:
            region = self.region_of_edge(l.edge)
            if region and region[0] in ("boundary", "defect") and l.kind in "st":
                return False
        return True
