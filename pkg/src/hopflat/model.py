"""The lattice model: extended space and its local operators.

A model binds a decorated ribbon graph to one Hopf algebra per bulk region,
one twist of the double per boundary line, and one twist of the tensor
double per defect line.  Edges carry the bulk algebra (bulk and boundary
edges) or the tensor product of the two neighbouring bulk algebras (defect
edges); the extended space is the tensor product over all edges.

Operators are matrix-free; the only dense objects ever formed are cached
column tables.  Holonomies split their argument through the iterated
coproduct of the dual double, assign legs positionally (the last-traversed
letter gets the first leg) and order the triangle factors by classifying
joints letter by letter.
"""

from __future__ import annotations

import itertools

from .actions import coreg_left, coreg_right
from .errors import CapacityError, DomainError, PathError
from .graphs import Letter, Site, ThickPath
from .hopf import (drinfeld_double, el_clean, el_scale, flat, haar,
                   tensor_hopf, unflat)
from .linalg import LinOp, Space
from .scalars import EPS_TOL
from .twists import Twist, project_twist_left, project_twist_right

#: iterated-coproduct guard: legs x nonzeros must stay below this
SPLIT_GUARD = 10 ** 6


class ModelInstance:
    """Immutable binding of a defect graph to algebra and twist data."""

    def __init__(self, defect_graph, bulk_algebras, boundary_twists=None,
                 defect_twists=None, name="model", tol=EPS_TOL,
                 doubles=None, defect_algebras=None):
        self.name = name
        self.dg = defect_graph
        self.graph = defect_graph.graph
        self.tol = tol
        self.bulk_algebras = dict(bulk_algebras)
        fields = {H.field for H in self.bulk_algebras.values()}
        if len(fields) != 1:
            raise DomainError("bulk algebras over mixed scalar fields")
        self.field = fields.pop()

        report = defect_graph.validate()
        if not report.ok:
            raise DomainError(f"invalid defect graph: {report.failures()}")

        # doubles may be supplied so that externally built twists stay bound
        # to the very same algebra objects
        self.doubles = doubles or {b: drinfeld_double(H)
                                   for b, H in self.bulk_algebras.items()}
        self.dh_duals = {b: D.dual() for b, D in self.doubles.items()}
        self.defect_algebras = dict(defect_algebras or {})
        for d, (bl, br) in defect_graph.defect_bulks.items():
            if d not in self.defect_algebras:
                self.defect_algebras[d] = tensor_hopf(self.doubles[bl],
                                                      self.doubles[br])

        self.boundary_twists = dict(boundary_twists or {})
        for a in defect_graph.boundary:
            tw = self.boundary_twists.get(a)
            if tw is None:
                b = defect_graph.boundary_bulk[a]
                self.boundary_twists[a] = Twist.trivial(self.doubles[b])
            elif tw.algebra is not self.doubles[defect_graph.boundary_bulk[a]]:
                raise DomainError(f"boundary twist {a} bound to wrong algebra")
        self.defect_twists = dict(defect_twists or {})
        for d in defect_graph.defect:
            tw = self.defect_twists.get(d)
            if tw is None:
                self.defect_twists[d] = Twist.trivial(self.defect_algebras[d])
            elif tw.algebra is not self.defect_algebras[d]:
                raise DomainError(f"defect twist {d} bound to a foreign algebra")

        # extended space: mixed-radix index over sorted edges
        self.edge_order = sorted(self.graph.edges)
        self.edge_pos = {e: i for i, e in enumerate(self.edge_order)}
        self.edge_dims = []
        self.edge_case = {}   # edge -> ("bulk", b) | ("defect", d)
        for e in self.edge_order:
            kind, rid = defect_graph.region_of_edge(e)
            if kind == "bulk":
                self.edge_dims.append(self.bulk_algebras[rid].dim)
                self.edge_case[e] = ("bulk", rid)
            elif kind == "boundary":
                b = defect_graph.boundary_bulk[rid]
                self.edge_dims.append(self.bulk_algebras[b].dim)
                self.edge_case[e] = ("bulk", b)
            else:
                bl, br = defect_graph.defect_bulks[rid]
                self.edge_dims.append(self.bulk_algebras[bl].dim
                                      * self.bulk_algebras[br].dim)
                self.edge_case[e] = ("defect", rid)
        dim = 1
        for d_ in self.edge_dims:
            dim *= d_
        self.space = Space(f"N[{name}]", dim)

        self._haar = {}
        self._site_twists = {}
        self._ba_cache = {}
        self._order_cache = {}
        self._projected = {}

    # -- indexing ---------------------------------------------------------------
    def decode(self, idx):
        locals_ = [0] * len(self.edge_dims)
        for i in range(len(self.edge_dims) - 1, -1, -1):
            idx, locals_[i] = divmod(idx, self.edge_dims[i])
        return locals_

    def encode(self, locals_):
        idx = 0
        for d_, l in zip(self.edge_dims, locals_):
            idx = idx * d_ + l
        return idx

    # -- per-region data ----------------------------------------------------------
    def haar_double(self, b):
        key = ("D", b)
        if key not in self._haar:
            self._haar[key] = haar(self.doubles[b])
        return self._haar[key]

    def haar_dual_double(self, b):
        key = ("D*", b)
        if key not in self._haar:
            self._haar[key] = haar(self.dh_duals[b])
        return self._haar[key]

    def site_bulk(self, site):
        """The bulk region a classified site belongs to."""
        kind = self.dg.site_kind(site)
        if kind is None:
            raise DomainError(f"site {site} is not a bulk/boundary/defect site")
        tag, rid = kind
        if tag == "bulk":
            return rid
        if tag == "boundary":
            return self.dg.boundary_bulk[rid]
        bl, br = self.dg.defect_bulks[rid]
        return bl if tag == "defect-left" else br

    def site_twist(self, site):
        """The twist of D(H_b) at a site: trivial in the bulk, the boundary
        twist at boundary sites, the projected defect twist at defect sites."""
        if site in self._site_twists:
            return self._site_twists[site]
        kind = self.dg.site_kind(site)
        if kind is None:
            raise DomainError(f"site {site} is not a bulk/boundary/defect site")
        tag, rid = kind
        if tag == "bulk":
            tw = Twist.trivial(self.doubles[rid])
        elif tag == "boundary":
            tw = self.boundary_twists[rid]
        else:
            key = (rid, tag)
            if key not in self._projected:
                T = self.defect_twists[rid]
                self._projected[key] = (project_twist_left(T) if tag == "defect-left"
                                        else project_twist_right(T))
            tw = self._projected[key]
        self._site_twists[site] = tw
        return tw

    def site_pair_of(self, site):
        """The (s_L, s_R) pair a defect site belongs to, or None."""
        kind = self.dg.site_kind(site)
        if kind is None or not kind[0].startswith("defect"):
            return None
        d = kind[1]
        for s_l, s_r in self.dg.defect_site_pairs(d):
            if site in (s_l, s_r):
                return d, (s_l, s_r)
        return None

    def is_permissible(self, path):
        return self.dg.is_permissible(path)

    def _is_vertex_path(self, path):
        start = path.start
        if start is None or not path.is_closed():
            return False
        return path.word == self.graph.vertex_path(start).word

    # -- triangle operators -------------------------------------------------------
    def _local_triangle_cols(self, b, edge, kind, u):
        """Columns of one triangle operator on the local edge space for a
        basis argument ``u`` of the dual double of ``b``."""
        key = ("tri", b, self.edge_case[edge], kind, u)
        cached = self._ba_cache.get(key)
        if cached is not None:
            return cached
        H = self.bulk_algebras[b]
        n = H.dim
        i, j = unflat(u, n)       # a_i (x) alpha_j
        field = self.field
        case, rid = self.edge_case[edge]
        if case == "bulk":
            if rid == b:
                cols = self._tri_case_i(H, i, j)
            else:
                cols = self._tri_scalar(H, i, j, self.edge_dims[self.edge_pos[edge]])
        else:
            bl, br = self.dg.defect_bulks[rid]
            if b == bl:
                cols = self._tri_case_defect(H, self.bulk_algebras[br], i, j,
                                             kind, left=True)
            elif b == br:
                cols = self._tri_case_defect(self.bulk_algebras[bl], H, i, j,
                                             kind, left=False)
            else:
                cols = self._tri_scalar(H, i, j, self.edge_dims[self.edge_pos[edge]])
        if case == "bulk" and rid == b:
            cols = cols[kind]
        self._ba_cache[key] = cols
        return cols

    def _tri_case_i(self, H, i, j):
        """All four positive-letter actions on a plain H-edge."""
        field = self.field
        n = H.dim
        alpha_one = H.unit.get(j)          # <alpha_j, 1>
        eps_h = H.counit[i]
        out = {"s": {}, "t": {}, "L": {}, "R": {}}
        for m in range(n):
            if alpha_one is not None:
                out["s"][m] = el_scale(alpha_one, H.mult[m][i])
                out["t"][m] = el_scale(alpha_one, H.mult[i][m])
            else:
                out["s"][m] = {}
                out["t"][m] = {}
            colR, colL = {}, {}
            if not field.is_zero(eps_h):
                for (m1, m2), c in H.comult[m].items():
                    if m2 == j:
                        colR[m1] = colR.get(m1, field.zero) + eps_h * c
                    if m1 == j:
                        colL[m2] = colL.get(m2, field.zero) + eps_h * c
            out["R"][m] = colR
            out["L"][m] = colL
        return out

    def _tri_scalar(self, H, i, j, local_dim):
        scalar = H.counit[i] * H.unit.get(j, self.field.zero)
        if self.field.is_zero(scalar):
            return {m: {} for m in range(local_dim)}
        return {m: {m: scalar} for m in range(local_dim)}

    def _tri_case_defect(self, HL, HR, i, j, kind, left):
        """Defect-edge actions: the ``left`` bulk acts on the first factor
        (sides via L), the right bulk on the second (sides via R)."""
        field = self.field
        H = HL if left else HR
        other = HR if left else HL
        nH, nO = H.dim, other.dim
        alpha_one = H.unit.get(j)
        eps_h = H.counit[i]
        cols = {}
        for mfull in range(HL.dim * HR.dim):
            m1, m2 = unflat(mfull, HR.dim)
            mine, theirs = (m1, m2) if left else (m2, m1)
            col = {}
            if kind in "st":
                if alpha_one is not None:
                    prod = H.mult[mine][i] if kind == "s" else H.mult[i][mine]
                    for r, c in prod.items():
                        key = flat(r, theirs, HR.dim) if left else flat(theirs, r, HR.dim)
                        col[key] = alpha_one * c
            elif (kind == "L" and left) or (kind == "R" and not left):
                if not field.is_zero(eps_h):
                    for (a, b2), c in H.comult[mine].items():
                        src, dst = (a, b2) if kind == "L" else (b2, a)
                        if src == j:
                            key = (flat(dst, theirs, HR.dim) if left
                                   else flat(theirs, dst, HR.dim))
                            col[key] = col.get(key, field.zero) + eps_h * c
            else:
                sc = eps_h * (alpha_one if alpha_one is not None else field.zero)
                if not field.is_zero(sc):
                    col[mfull] = sc
            cols[mfull] = col
        return cols

    def triangle_op(self, b, edge, letter_kind, sign, beta):
        """Operator on the extended space for one thickened-edge letter.

        ``beta`` is a sparse element of the dual double of ``b``; negative
        letters act through its antipode."""
        Dd = self.dh_duals[b]
        if sign < 0:
            beta = Dd.s(beta)
        pos = self.edge_pos[edge]
        field = self.field
        col_maps = [(self._local_triangle_cols(b, edge, letter_kind, u), c)
                    for u, c in beta.items()]

        def col(idx):
            locals_ = self.decode(idx)
            m = locals_[pos]
            out = {}
            for cols, c in col_maps:
                for r, v in cols[m].items():
                    locals2 = list(locals_)
                    locals2[pos] = r
                    k = self.encode(locals2)
                    out[k] = out.get(k, field.zero) + c * v
            return out

        return LinOp(self.space, self.space, field, col=col,
                     name=f"tri[{edge}^{letter_kind}]")

    # -- holonomy -------------------------------------------------------------------
    def _application_order(self, word, strategy="first"):
        """Positions in application order, chosen by joint classification of
        (rest, first letter) splits; falls back to other split points.

        ``strategy`` picks among admissible cut points ("first" or "last");
        the resulting operator must not depend on it, which is a property
        test rather than an assumption.
        """
        key = (word, strategy)
        if key in self._order_cache:
            return self._order_cache[key]
        order = self._order_rec(word, tuple(range(len(word))), strategy)
        self._order_cache[key] = order
        return order

    def _order_rec(self, word, positions, strategy):
        from .graphs import left_joint, _non_crossing

        if len(positions) <= 1:
            return list(positions)
        g = self.graph
        n = len(positions)
        cuts = range(1, n) if strategy == "first" else range(n - 1, 0, -1)
        for cut in cuts:
            first = tuple(word[p] for p in positions[:cut])
            rest = tuple(word[p] for p in positions[cut:])
            p2 = ThickPath(g, first, reduce=False)
            p1 = ThickPath(g, rest, reduce=False)
            if _non_crossing(rest, first) or left_joint(p2, p1.inverse()):
                return (self._order_rec(word, positions[:cut], strategy)
                        + self._order_rec(word, positions[cut:], strategy))
            if left_joint(p1.inverse(), p2):
                return (self._order_rec(word, positions[cut:], strategy)
                        + self._order_rec(word, positions[:cut], strategy))
        raise PathError("no admissible decomposition for holonomy ordering")

    def holonomy(self, b, path, beta, check=True, strategy="first"):
        """Composite of triangle operators with the argument split through
        the iterated coproduct of the dual double."""
        if isinstance(path, str):
            path = ThickPath.from_text(self.graph, path)
        word = path.word
        if not word:
            return LinOp.identity(self.space, self.field)
        if check:
            if not path.is_simple():
                raise PathError(f"holonomy requires a simple path: {path}")
            if not (self.is_permissible(path) or self._is_vertex_path(path)):
                raise PathError(f"path is not permissible here: {path}")
        Dd = self.dh_duals[b]
        n = len(word)
        legs = Dd.comul_iter(beta, n)
        if len(legs) * n > SPLIT_GUARD:
            raise CapacityError("coproduct splitting exceeds the memory guard")
        order = self._application_order(word, strategy)
        field = self.field
        # leg index for traversal position p is n-1-p
        terms = []
        for legtuple, c in legs.items():
            ops = []
            for p in order:
                l = word[p]
                u = legtuple[n - 1 - p]
                arg = {u: field.one}
                if l.sign < 0:
                    arg = Dd.s(arg)
                ops.append((l, arg))
            terms.append((ops, c))

        tri_cols = {}

        def letter_cols(b_, l, u):
            key = (l.edge, l.kind, l.sign, u)
            got = tri_cols.get(key)
            if got is None:
                got = self._local_triangle_cols(b_, l.edge, l.kind, u)
                tri_cols[key] = got
            return got

        edge_pos = self.edge_pos
        encode = self.encode

        def col(idx):
            base = self.decode(idx)
            out = {}
            for ops, c in terms:
                states = {tuple(base): c}
                for l, arg in ops:
                    pos = edge_pos[l.edge]
                    new = {}
                    for locs, cc in states.items():
                        m = locs[pos]
                        for u, cu in arg.items():
                            cols = letter_cols(b, l, u)
                            for r, v in cols[m].items():
                                locs2 = locs[:pos] + (r,) + locs[pos + 1:]
                                val = cc * cu * v
                                new[locs2] = new.get(locs2, field.zero) + val
                    states = new
                    if not states:
                        break
                for locs, cc in states.items():
                    k = encode(locs)
                    out[k] = out.get(k, field.zero) + cc
            return el_clean(field, out, 0.0 if field.is_exact else 1e-15)

        return LinOp(self.space, self.space, field, col=col,
                     name=f"hol[{b}]")

    # -- site operators -----------------------------------------------------------
    def vertex_op(self, b, site, h):
        """A^h: holonomy of h (x) eps along the vertex path."""
        H = self.bulk_algebras[b]
        D = self.doubles[b]
        n = H.dim
        beta = {}
        for i, ci in h.items():
            for j in range(n):
                cj = H.counit[j]
                if not self.field.is_zero(ci * cj):
                    beta[flat(i, j, n)] = ci * cj
        return self.holonomy(b, self.graph.vertex_path(site), beta, check=False)

    def face_op(self, b, site, alpha):
        """B^alpha: holonomy of 1 (x) alpha along the face path."""
        H = self.bulk_algebras[b]
        n = H.dim
        beta = {}
        for j, cj in alpha.items():
            for i, ci in H.unit.items():
                beta[flat(i, j, n)] = ci * cj
        return self.holonomy(b, self.graph.face_path(site), beta, check=False)

    def ba_basis_op(self, b, site, u):
        """B^alpha A^h for a basis element alpha (x) h of the double."""
        key = ("BA", b, site, u)
        got = self._ba_cache.get(key)
        if got is None:
            n = self.bulk_algebras[b].dim
            i, j = unflat(u, n)
            field = self.field
            op = (self.face_op(b, site, {i: field.one})
                  @ self.vertex_op(b, site, {j: field.one}))
            got = op.materialize() if self.space.dim <= 4096 else op
            self._ba_cache[key] = got
        return got

    def site_op(self, site, x, b=None):
        """BA^x for a sparse element x of D(H_b), linear in x."""
        b = b or self.site_bulk(site)
        acc = None
        for u, c in x.items():
            term = self.ba_basis_op(b, site, u).scale(c)
            acc = term if acc is None else acc + term
        return acc if acc is not None else LinOp.zero(self.space, self.field)

    def pair_op(self, d, x):
        """BA at a defect-site pair for x in D(H_l) (x) D(H_r)."""
        bl, br = self.dg.defect_bulks[d]
        pairs = self.dg.defect_site_pairs(d)
        return self.pair_op_at(d, pairs[0], x)

    def pair_op_at(self, d, pair, x):
        bl, br = self.dg.defect_bulks[d]
        s_l, s_r = pair
        nr = self.doubles[br].dim
        acc = None
        for uv, c in x.items():
            u, v = unflat(uv, nr)
            term = (self.ba_basis_op(bl, s_l, u)
                    @ self.ba_basis_op(br, s_r, v)).scale(c)
            acc = term if acc is None else acc + term
        return acc if acc is not None else LinOp.zero(self.space, self.field)

    # -- projectors ------------------------------------------------------------------
    def projector_sites(self):
        """Sites entering the protected projector: every bulk site, every
        boundary site, and one pair per defect vertex."""
        g = self.graph
        singles = []
        pairs = []
        seen_vertices = set()
        for d in self.dg.defect:
            for s_l, s_r in self.dg.defect_site_pairs(d):
                pairs.append((d, (s_l, s_r)))
                seen_vertices.add(s_l.vertex)
        for a in self.dg.boundary:
            for t in self.dg.boundary_sites(a):
                singles.append(t)
                seen_vertices.add(t.vertex)
        for site in g.sites():
            if site.vertex in seen_vertices:
                continue
            kind = self.dg.site_kind(site)
            if kind and kind[0] == "bulk":
                singles.append(site)
        return singles, pairs

    def site_projector(self, site):
        b = self.site_bulk(site)
        return self.site_op(site, self.haar_double(b), b=b)

    def protected_projector(self):
        """Product of the Haar site projectors over all projector sites."""
        if self.space.dim > 4096:
            raise CapacityError("protected projector over the dense cutoff")
        singles, pairs = self.projector_sites()
        P = LinOp.identity(self.space, self.field)
        for site in singles:
            P = (self.site_projector(site) @ P).materialize()
        for d, pair in pairs:
            bl, br = self.dg.defect_bulks[d]
            lam = {}
            nr = self.doubles[br].dim
            for u, cu in self.haar_double(bl).items():
                for v, cv in self.haar_double(br).items():
                    lam[flat(u, v, nr)] = cu * cv
            P = (self.pair_op_at(d, pair, lam) @ P).materialize()
        return P

    def protected_dim(self, tol=None):
        from .linalg import rank
        return rank(self.protected_projector(), tol or self.tol)

    def excitation_projector(self, assignments, tables=None):
        """Product over sites of isotypic projectors picking out the irrep
        types present in each assigned module.

        ``assignments``: list of (site, module) or ((d, pair), module); sites
        must be pairwise disjoint.
        """
        from .reps import irreducibles

        sites = []
        for target, _ in assignments:
            if isinstance(target, Site):
                sites.append(target)
            else:
                sites.extend(target[1])
        for s, t in itertools.combinations(sites, 2):
            if not self.graph.sites_disjoint(s, t):
                raise DomainError(f"excitation sites {s}, {t} are not disjoint")
        tables = tables or {}
        P = LinOp.identity(self.space, self.field)
        for target, module in assignments:
            if isinstance(target, Site):
                A = self.doubles[self.site_bulk(target)]
            else:
                A = self.defect_algebras[target[0]]
            if A.name not in tables:
                tables[A.name] = irreducibles(A)
            table = tables[A.name]
            mults = table.multiplicities(module)
            idem = table.central_idempotents()
            z = {}
            for i, m in enumerate(mults):
                if m > 0:
                    for k, c in idem[i].items():
                        z[k] = z.get(k, self.field.zero) + c
            op = (self.site_op(target, z) if isinstance(target, Site)
                  else self.pair_op_at(target[0], target[1], z))
            P = (op @ P).materialize() if self.space.dim <= 4096 else op @ P
        return P


# ---------------------------------------------------------------------------
# twisted holonomies, transport, defect removal


def _endpoint_terms(model, site, b, side, antipode=False):
    """Sparse list [(beta_side_element in D(H_b), BA operator, coeff)] from
    the inverse of the endpoint twist, legs ordered by the path side.

    With ``antipode`` the beta-side leg passes through the antipode of the
    endpoint algebra (target-site convention).  For defect endpoints the full
    defect twist acts: the beta side through its projection to the endpoint's
    double (counit on the other factor), the operator side through the pair
    operator.
    """
    field = model.field
    kind = model.dg.site_kind(site)
    if kind is None:
        raise DomainError(f"{site} is not a bulk/boundary/defect site")
    tag, rid = kind
    D = model.doubles[b]
    if tag == "bulk":
        return [({u: field.one}, None, c) for u, c in D.unit.items()]
    if tag == "boundary":
        tw = model.boundary_twists[rid]
        terms = []
        for (x, y), c in tw.inverse.items():
            if side == "R":
                x, y = y, x
            beta_el = D.s({x: field.one}) if antipode else {x: field.one}
            terms.append((beta_el, model.site_op(site, {y: field.one}, b=b), c))
        return terms
    # defect endpoint: full twist of D(H_l) (x) D(H_r), pair operators
    d = rid
    tw = model.defect_twists[d]
    A = model.defect_algebras[d]
    bl, br = model.dg.defect_bulks[d]
    nr = model.doubles[br].dim
    left_factor = (tag == "defect-left")
    Db = model.doubles[bl if left_factor else br]
    Dother = model.doubles[br if left_factor else bl]
    pair = None
    for p in model.dg.defect_site_pairs(d):
        if site in p:
            pair = p
    terms = []
    for (x, y), c in tw.inverse.items():
        if side == "R":
            x, y = y, x
        if antipode:
            xs = A.s({x: field.one})
        else:
            xs = {x: field.one}
        beta_el = {}
        for xx, cx in xs.items():
            u, v = unflat(xx, nr)
            mine, other = (u, v) if left_factor else (v, u)
            sc = cx * Dother.counit[other]
            if not field.is_zero(sc):
                beta_el[mine] = beta_el.get(mine, field.zero) + sc
        terms.append((beta_el, model.pair_op_at(d, pair, {y: field.one}), c))
    return terms


def twisted_holonomy(model, b, path, beta):
    """Holonomy with endpoint twists: the argument is acted on by the start
    twist from the left and the antipoded end twist from the right, while the
    matching twist legs act through the endpoint site operators (target
    first).  Coincides with the plain holonomy between bulk sites."""
    if isinstance(path, str):
        path = ThickPath.from_text(model.graph, path)
    s, t = path.start, path.end
    sigma = "L" if path.starts_left else "R"
    tau = "L" if path.ends_left else "R"
    D = model.doubles[b]
    field = model.field
    start_terms = _endpoint_terms(model, s, b, sigma, antipode=False)
    end_terms = _endpoint_terms(model, t, b, tau, antipode=True)
    acc = None
    for f_el, f_op, cf in start_terms:
        for g_el, g_op, cg in end_terms:
            arg = coreg_right(D, coreg_left(D, f_el, beta), g_el)
            op = model.holonomy(b, path, arg)
            if f_op is not None:
                op = op @ f_op
            if g_op is not None:
                op = op @ g_op
            term = op.scale(cf * cg)
            acc = term if acc is None else acc + term
    return acc


def transport_operator(model, path, b=None):
    """Haar-dressed holonomy moving an excitation from the start site to the
    end site; the twist at the target enters with side-dependent leg order."""
    if isinstance(path, str):
        path = ThickPath.from_text(model.graph, path)
    if not model.is_permissible(path):
        raise PathError("transport requires a permissible path")
    s1, s2 = path.start, path.end
    if not model.graph.sites_disjoint(s1, s2):
        raise DomainError("transport endpoints must be disjoint sites")
    b1, b2 = model.site_bulk(s1), model.site_bulk(s2)
    if b is None:
        b = b1
    if b1 != b2 or b1 != b:
        raise PathError("transport across a defect line is not defined")
    D = model.doubles[b]
    lam = model.haar_double(b)
    integ = model.haar_dual_double(b)
    F = model.site_twist(s2)
    field = model.field
    ba1 = model.site_op(s1, lam, b=b)
    acc = None
    for (x, y), c in F.inverse.items():
        if path.ends_right:
            op_leg, hol_leg = x, y
        else:
            op_leg, hol_leg = y, x
        arg = coreg_right(D, integ, D.s({hol_leg: field.one}))
        term = (ba1 @ model.holonomy(b, path, arg)
                @ model.site_op(s2, {op_leg: field.one}, b=b)).scale(c)
        acc = term if acc is None else acc + term
    return acc


def _merged_gap(old_ends, new_ends, out_end):
    """Gap index in the shortened order where the removed outgoing end sat."""
    pos = old_ends.index(out_end)
    for q in range(pos + 1, len(old_ends)):
        if old_ends[q] in new_ends:
            return new_ends.index(old_ends[q])
    return 0


def remove_transparent_defect(model, d, check_transparency=True):
    """Delete a transparent defect line, merging its two bulk regions.

    Returns ``(model2, R, site_map)``: the shrunken model, the linear map
    between the extended spaces (integral contraction on each removed edge
    factor, identity elsewhere), and per defect vertex the site of the
    merged model that the defect-site pair collapses to.
    """
    from .graphs import DefectGraph, RibbonGraph

    dg = model.dg
    if d not in dg.defect:
        raise DomainError(f"no defect line {d!r}")
    bl, br = dg.defect_bulks[d]
    H = model.bulk_algebras[bl]
    if model.bulk_algebras[br] is not H:
        raise DomainError("defect is not transparent: different bulk algebras")
    if check_transparency:
        from .hopf import el_diff_norm
        from .twists import transparent_twist
        tw, _, _, _ = transparent_twist(model.doubles[bl],
                                        KK=model.defect_algebras[d])
        if el_diff_norm(model.defect_twists[d].tensor, tw.tensor) > model.tol:
            raise DomainError("defect is not transparent: twist mismatch")

    g = model.graph
    removed = set(dg.defect[d].cycle)
    removed_ends = {(e, w) for e in removed for w in ("s", "t")}
    new_vertices = {v: [end for end in ends if end not in removed_ends]
                    for v, ends in g.vertices.items()}
    new_edges = {e: st for e, st in g.edges.items() if e not in removed}
    g2 = RibbonGraph(new_vertices, new_edges)

    bulk2 = {}
    for b2, es in dg.bulk.items():
        if b2 == br:
            continue
        bulk2[b2] = tuple(es) + (dg.bulk[br] if b2 == bl else ())
    rename = lambda b2: bl if b2 == br else b2
    boundary2 = [(a, line.cycle, rename(dg.boundary_bulk[a]))
                 for a, line in dg.boundary.items()]
    defect2 = [(d2, line.cycle, rename(dg.defect_bulks[d2][0]),
                rename(dg.defect_bulks[d2][1]))
               for d2, line in dg.defect.items() if d2 != d]
    extra = {b2: set(vs) for b2, vs in dg.extra_bulk_vertices.items()
             if b2 != br}
    extra.setdefault(bl, set()).update(dg.extra_bulk_vertices.get(br, ()))
    for v in dg.defect[d].vertices(g):
        if not new_vertices[v]:
            extra.setdefault(bl, set()).add(v)
    dg2 = DefectGraph(g2, bulk2, boundary2, defect2,
                      extra_bulk_vertices={b2: tuple(vs) for b2, vs in extra.items()})

    algebras2 = {b2: model.bulk_algebras[rename(b2)] for b2 in bulk2}
    btw2 = {a: model.boundary_twists[a] for a in dg.boundary}
    dtw2 = {d2: model.defect_twists[d2] for d2 in dg.defect if d2 != d}
    model2 = ModelInstance(dg2, algebras2, btw2, dtw2,
                           name=f"{model.name}-minus-{d}", tol=model.tol)

    # the contraction weights: local (i, j) -> integral(a_i S(a_j))
    from .hopf import pairing
    integ = haar(H.dual())
    n = H.dim
    weights = {}
    for i in range(n):
        for j in range(n):
            val = pairing(integ, H.mul(H.basis_el(i), H.s(H.basis_el(j))))
            if val is not None and not model.field.is_zero(val):
                weights[flat(i, j, n)] = val

    removed_pos = [model.edge_pos[e] for e in model.edge_order if e in removed]
    keep_pos = [model.edge_pos[e] for e in model.edge_order if e not in removed]
    field = model.field

    def col(idx):
        locs = model.decode(idx)
        coeff = field.one
        for p in removed_pos:
            w = weights.get(locs[p])
            if w is None:
                return {}
            coeff = coeff * w
        return {model2.encode([locs[p] for p in keep_pos]): coeff}

    R = LinOp(model.space, model2.space, field, col=col, name=f"remove[{d}]")

    site_map = {}
    for v in dg.defect[d].vertices(g):
        out_e, _ = dg.line_out_in(dg.defect[d], v)
        site_map[v] = Site(v, _merged_gap(g.vertices[v], new_vertices[v],
                                          (out_e, "s")))
    return model2, R, site_map
