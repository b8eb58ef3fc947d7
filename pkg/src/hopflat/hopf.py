"""Finite-dimensional algebras and Hopf algebras as sparse structure tensors.

Elements are sparse dicts ``{basis_index: scalar}``.  Tensor-power elements
(R-matrices, twists, coproduct legs) are dicts keyed by index tuples.  All
formulas written in Sweedler notation elsewhere in the package compile to
contractions over the ``comult`` tensors computed here; nested legs are
iterated coproducts expanded left to right.
"""

from __future__ import annotations

import itertools

from .errors import DomainError, NotSemisimple, StructureError
from .linalg import LinOp, Space, Vec, solve_linear
from .scalars import EPS_TOL, Field


# ---------------------------------------------------------------------------
# sparse element helpers

def el_add(x, y):
    out = dict(x)
    for k, c in y.items():
        out[k] = out.get(k, 0 * c) + c
    return out


def el_scale(a, x):
    return {k: a * c for k, c in x.items()}

def el_clean(field, x, tol=EPS_TOL):
    return {k: c for k, c in x.items() if not field.is_zero(c, tol)}


def el_diff_norm(x, y):
    keys = set(x) | set(y)
    dev = 0.0
    for k in keys:
        a = x.get(k)
        b = y.get(k)
        if a is None:
            d = abs(b)
        elif b is None:
            d = abs(a)
        else:
            d = abs(a - b)
        dev = max(dev, d)
    return dev


def pairing(x, y):
    """Dual-basis pairing: both elements indexed over dual bases."""
    acc = None
    for k, c in x.items():
        d = y.get(k)
        if d is not None:
            acc = c * d if acc is None else acc + c * d
    return acc


def t_outer(*parts):
    """Outer product of sparse elements into a tuple-keyed tensor."""
    out = {}
    for combo in itertools.product(*(p.items() for p in parts)):
        key = tuple(k for k, _ in combo)
        c = combo[0][1]
        for _, ci in combo[1:]:
            c = c * ci
        out[key] = out.get(key, 0 * c) + c
    return out


class Algebra:
    """Associative unital algebra over ``field`` given by structure tensors."""

    def __init__(self, name, field, dim, mult, unit):
        self.name = name
        self.field: Field = field
        self.dim = dim
        self.mult = mult        # mult[i][j] = sparse product of basis i, j
        self.unit = unit        # sparse element
        self.space = Space(name, dim)

    def basis_el(self, i):
        return {i: self.field.one}

    def unit_el(self):
        return dict(self.unit)

    def mul(self, x, y):
        out = {}
        zero = self.field.zero
        for i, a in x.items():
            row = self.mult[i]
            for j, b in y.items():
                ab = a * b
                for k, m in row[j].items():
                    out[k] = out.get(k, zero) + ab * m
        return out

    def mul_many(self, *els):
        acc = self.unit_el()
        for e in els:
            acc = self.mul(acc, e)
        return acc

    def left_mult_op(self, x):
        return LinOp(self.space, self.space, self.field,
                     col=lambda j: el_clean(self.field, self.mul(x, self.basis_el(j))),
                     name=f"L[{self.name}]")

    def right_mult_op(self, x):
        return LinOp(self.space, self.space, self.field,
                     col=lambda j: el_clean(self.field, self.mul(self.basis_el(j), x)),
                     name=f"R[{self.name}]")

    def el_vec(self, x):
        return Vec(self.space, x, self.field)

    def check_associative(self, tol=EPS_TOL):
        dev = 0.0
        for i in range(self.dim):
            bi = self.basis_el(i)
            for j in range(self.dim):
                left = self.mult[i][j]
                bj = self.basis_el(j)
                for k in range(self.dim):
                    lhs = self.mul(left, self.basis_el(k))
                    rhs = self.mul(bi, self.mul(bj, self.basis_el(k)))
                    dev = max(dev, el_diff_norm(lhs, rhs))
        return dev

    def check_unit(self, tol=EPS_TOL):
        dev = 0.0
        for i in range(self.dim):
            b = self.basis_el(i)
            dev = max(dev, el_diff_norm(self.mul(self.unit_el(), b), b))
            dev = max(dev, el_diff_norm(self.mul(b, self.unit_el()), b))
        return dev

    def __repr__(self):
        return f"{type(self).__name__}({self.name}, dim={self.dim})"


class HopfAlgebra(Algebra):
    """Hopf algebra; optionally quasitriangular via ``r_matrix``.

    ``comult[i]`` is a sparse 2-tensor ``{(j,k): c}``, ``counit`` a list of
    scalars, ``antipode[i]`` a sparse element.  ``r_matrix``, when present,
    is a 2-tensor over this algebra's own basis.
    """

    def __init__(self, name, field, dim, mult, unit, comult, counit, antipode,
                 r_matrix=None):
        super().__init__(name, field, dim, mult, unit)
        self.comult = comult
        self.counit = counit
        self.antipode = antipode
        self.r_matrix = r_matrix
        self._dual = None
        self._s_inv = None
        self._comul_cache = {}

    # -- coalgebra / antipode ----------------------------------------------
    def comul(self, x):
        out = {}
        zero = self.field.zero
        for i, a in x.items():
            for key, c in self.comult[i].items():
                out[key] = out.get(key, zero) + a * c
        return out

    def counit_of(self, x):
        acc = self.field.zero
        for i, a in x.items():
            acc = acc + a * self.counit[i]
        return acc

    def s(self, x):
        out = {}
        zero = self.field.zero
        for i, a in x.items():
            for k, c in self.antipode[i].items():
                out[k] = out.get(k, zero) + a * c
        return out

    def s_inv(self, x):
        if self._s_inv is None:
            self._s_inv = _invert_sparse_map(self, self.antipode)
        out = {}
        zero = self.field.zero
        for i, a in x.items():
            for k, c in self._s_inv[i].items():
                out[k] = out.get(k, zero) + a * c
        return out

    def s_inv_basis(self, i):
        self.s_inv({})
        return self._s_inv[i]

    def comul_iter_basis(self, i, n):
        """Legs of the iterated coproduct of basis element ``i`` as an
        ``n``-tuple-keyed sparse tensor."""
        if n == 1:
            return {(i,): self.field.one}
        key = (i, n)
        cached = self._comul_cache.get(key)
        if cached is not None:
            return cached
        prev = self.comul_iter_basis(i, n - 1)
        out = {}
        zero = self.field.zero
        for legs, c in prev.items():
            for (a, b), d in self.comult[legs[0]].items():
                k = (a, b) + legs[1:]
                out[k] = out.get(k, zero) + c * d
        self._comul_cache[key] = out
        return out

    def comul_iter(self, x, n):
        if n == 0:
            # single scalar: total counit
            return {(): self.counit_of(x)}
        out = {}
        zero = self.field.zero
        for i, a in x.items():
            for legs, c in self.comul_iter_basis(i, n).items():
                out[legs] = out.get(legs, zero) + a * c
        return out

    # -- derived Hopf algebras ----------------------------------------------
    def dual(self):
        if self._dual is None:
            self._dual = _make_dual(self)
            self._dual._dual = self
        return self._dual

    def without_r(self):
        return HopfAlgebra(self.name, self.field, self.dim, self.mult,
                           self.unit, self.comult, self.counit, self.antipode)


def _invert_sparse_map(alg, columns):
    """Invert a basis-indexed sparse linear map on ``alg``."""
    field = alg.field
    op = LinOp(alg.space, alg.space, field, col=lambda i: columns[i])
    inv = []
    for i in range(alg.dim):
        try:
            part, basis = solve_linear([(op, Vec.basis(alg.space, i, field))])
        except Exception as exc:  # NoSolution
            raise StructureError(f"map on {alg.name} is not invertible") from exc
        if basis:
            raise StructureError(f"map on {alg.name} is not invertible")
        inv.append(el_clean(field, part.coeffs))
    return inv


def _make_dual(H):
    """Dual Hopf algebra on the dual basis.

    Multiplication is the transpose of the coproduct, the coproduct the
    transpose of multiplication, the antipode the transpose of the antipode.
    """
    field = H.field
    n = H.dim
    mult = [[{} for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for (i, j), c in H.comult[k].items():
            d = mult[i][j]
            d[k] = d.get(k, field.zero) + c
    comult = [{} for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k, c in H.mult[i][j].items():
                d = comult[k]
                d[(i, j)] = d.get((i, j), field.zero) + c
    unit = {i: H.counit[i] for i in range(n) if not field.is_zero(H.counit[i])}
    counit = [H.unit.get(i, field.zero) for i in range(n)]
    antipode = [{} for _ in range(n)]
    for i in range(n):
        for k, c in H.antipode[i].items():
            d = antipode[k]
            d[i] = d.get(i, field.zero) + c
    name = H.name[:-1] if H.name.endswith("*") else H.name + "*"
    return HopfAlgebra(name, field, n, mult, unit, comult, counit, antipode)


def dual_of(H):
    """Dual Hopf algebra on the dual basis (cached on ``H``)."""
    return H.dual()


# ---------------------------------------------------------------------------
# constructors

def group_algebra(name, table, field):
    """Group algebra from a multiplication table ``table[i][j] = k``.

    Basis elements are group elements; the coproduct is group-like, the
    counit constant one and the antipode the group inverse.
    """
    n = len(table)
    one = field.one
    identity = None
    for e in range(n):
        if all(table[e][j] == j and table[j][e] == j for j in range(n)):
            identity = e
            break
    if identity is None:
        raise StructureError("multiplication table has no identity")
    inv = [None] * n
    for i in range(n):
        for j in range(n):
            if table[i][j] == identity:
                inv[i] = j
    if any(v is None for v in inv):
        raise StructureError("multiplication table has a non-invertible element")
    mult = [[{table[i][j]: one} for j in range(n)] for i in range(n)]
    unit = {identity: one}
    comult = [{(i, i): one} for i in range(n)]
    counit = [one] * n
    antipode = [{inv[i]: one} for i in range(n)]
    return HopfAlgebra(name, field, n, mult, unit, comult, counit, antipode)


def opposite(H):
    """Reversed multiplication; the antipode becomes its inverse."""
    n = H.dim
    mult = [[H.mult[j][i] for j in range(n)] for i in range(n)]
    H.s_inv({})
    return HopfAlgebra(H.name + "^op", H.field, n, mult, H.unit, H.comult,
                       H.counit, H._s_inv)


def coopposite(H):
    n = H.dim
    comult = [{(j, i): c for (i, j), c in H.comult[k].items()} for k in range(n)]
    H.s_inv({})
    return HopfAlgebra(H.name + "^cop", H.field, n, H.mult, H.unit, comult,
                       H.counit, H._s_inv)


def op_cop(H):
    op = opposite(H)
    n = H.dim
    comult = [{(j, i): c for (i, j), c in H.comult[k].items()} for k in range(n)]
    return HopfAlgebra(H.name + "^opcop", H.field, n, op.mult, H.unit, comult,
                       H.counit, H.antipode)


def flat(i, j, dim2):
    return i * dim2 + j


def unflat(k, dim2):
    return divmod(k, dim2)


def tensor_hopf(H, K):
    """Componentwise Hopf structure on H (x) K, index ``i*dim(K)+j``.

    If both factors are quasitriangular the tensor R-matrix (legs
    interleaved factorwise) is attached.
    """
    field = H.field
    if K.field is not field:
        raise DomainError("tensor factors over different scalar fields")
    n, m = H.dim, K.dim
    N = n * m
    mult = [[None] * N for _ in range(N)]
    for i1, j1 in itertools.product(range(n), range(m)):
        a = flat(i1, j1, m)
        for i2, j2 in itertools.product(range(n), range(m)):
            b = flat(i2, j2, m)
            prod = {}
            for p, c1 in H.mult[i1][i2].items():
                for q, c2 in K.mult[j1][j2].items():
                    prod[flat(p, q, m)] = c1 * c2
            mult[a][b] = prod
    unit = {flat(i, j, m): c1 * c2 for i, c1 in H.unit.items()
            for j, c2 in K.unit.items()}
    comult = [None] * N
    counit = [None] * N
    antipode = [None] * N
    for i, j in itertools.product(range(n), range(m)):
        a = flat(i, j, m)
        cm = {}
        for (i1, i2), c1 in H.comult[i].items():
            for (j1, j2), c2 in K.comult[j].items():
                cm[(flat(i1, j1, m), flat(i2, j2, m))] = c1 * c2
        comult[a] = cm
        counit[a] = H.counit[i] * K.counit[j]
        antipode[a] = {flat(p, q, m): c1 * c2 for p, c1 in H.antipode[i].items()
                       for q, c2 in K.antipode[j].items()}
    r = None
    if H.r_matrix is not None and K.r_matrix is not None:
        r = {}
        for (a1, a2), c1 in H.r_matrix.items():
            for (b1, b2), c2 in K.r_matrix.items():
                r[(flat(a1, b1, m), flat(a2, b2, m))] = c1 * c2
    T = HopfAlgebra(f"{H.name}(x){K.name}", field, N, mult, unit, comult,
                    counit, antipode, r_matrix=r)
    T.tensor_factors = (H, K)
    return T


# ---------------------------------------------------------------------------
# Haar integrals

def haar(H, tol=EPS_TOL):
    """The unique normalized two-sided integral element.

    Solves ``eps(x) = 1`` together with ``x*h = h*x = eps(h)*x`` for all
    basis ``h``; raises ``NotSemisimple`` unless the solution is unique.
    """
    field = H.field
    constraints = []
    scalar_space = Space(f"scalar[{H.name}]", 1)
    for i in range(H.dim):
        b = H.basis_el(i)
        e = H.counit[i]
        left = H.left_mult_op(b) - LinOp.identity(H.space, field).scale(e)
        right = H.right_mult_op(b) - LinOp.identity(H.space, field).scale(e)
        zero = Vec.zero(H.space, field)
        constraints.append((left, zero))
        constraints.append((right, zero))
    counit_row = LinOp(H.space, scalar_space, field,
                       col=lambda i: {0: H.counit[i]}, name="counit")
    constraints.append((counit_row, Vec(scalar_space, {0: field.one}, field)))
    try:
        part, basis = solve_linear(constraints, tol)
    except Exception as exc:
        raise NotSemisimple(f"{H.name}: integral system inconsistent") from exc
    if part is None or basis:
        raise NotSemisimple(
            f"{H.name}: integral solution space has dimension {len(basis)}")
    return el_clean(field, part.coeffs, tol)


# ---------------------------------------------------------------------------
# Drinfel'd double and its dual

def drinfeld_double(H):
    """Quasitriangular Hopf algebra on dual(H) (x) H.

    Basis ordering is (dual index, index), row-major; the R-matrix pairs the
    canonical copairing of the two factors.
    """
    field = H.field
    Hd = H.dual()
    n = H.dim
    N = n * n
    zero = field.zero

    mult = [[{} for _ in range(N)] for _ in range(N)]
    for i, j in itertools.product(range(n), range(n)):
        a = flat(i, j, n)
        jlegs = H.comul_iter_basis(j, 3)
        for k, l in itertools.product(range(n), range(n)):
            out = mult[a][flat(k, l, n)]
            for (k1, k2, k3), c1 in Hd.comul_iter_basis(k, 3).items():
                for (j1, j2, j3), c2 in jlegs.items():
                    if k3 != j1:
                        continue
                    p = H.s_inv_basis(j3).get(k1)
                    if p is None:
                        continue
                    c = c1 * c2 * p
                    for u, cu in Hd.mult[i][k2].items():
                        for v, cv in H.mult[j2][l].items():
                            key = flat(u, v, n)
                            out[key] = out.get(key, zero) + c * cu * cv

    comult = [None] * N
    counit = [None] * N
    antipode = [None] * N
    for i, j in itertools.product(range(n), range(n)):
        a = flat(i, j, n)
        cm = {}
        for (i1, i2), c1 in Hd.comult[i].items():
            for (j1, j2), c2 in H.comult[j].items():
                key = (flat(i2, j1, n), flat(i1, j2, n))
                cm[key] = cm.get(key, zero) + c1 * c2
        comult[a] = cm
        counit[a] = H.unit.get(i, zero) * H.counit[j]
        sp = {}
        for (i1, i2, i3), c1 in Hd.comul_iter_basis(i, 3).items():
            for (j1, j2, j3), c2 in H.comul_iter_basis(j, 3).items():
                if i1 != j3:
                    continue
                p = H.s_inv_basis(j1).get(i3)
                if p is None:
                    continue
                c = c1 * c2 * p
                for u, cu in Hd.s_inv_basis(i2).items():
                    for v, cv in H.antipode[j2].items():
                        key = flat(u, v, n)
                        sp[key] = sp.get(key, zero) + c * cu * cv
        antipode[a] = sp

    unit = {}
    for i in range(n):
        ci = H.counit[i]
        if field.is_zero(ci):
            continue
        for q, cq in H.unit.items():
            unit[flat(i, q, n)] = ci * cq

    r = {}
    for i in range(n):
        # (eps (x) a_i) (x) (alpha_i (x) 1)
        for p in range(n):
            cp = H.counit[p]
            if field.is_zero(cp):
                continue
            for q, cq in H.unit.items():
                key = (flat(p, i, n), flat(i, q, n))
                r[key] = r.get(key, zero) + cp * cq

    D = HopfAlgebra(f"D({H.name})", field, N, mult, unit, comult, counit,
                    antipode, r_matrix=r)
    D.double_of = H
    return D


def drinfeld_double_dual(H):
    """Hopf structure on H (x) dual(H) dual to the Drinfel'd double.

    Built from the explicit formulas (opposite product on the first leg,
    double-dressed coproduct); agreement with ``drinfeld_double(H).dual()``
    is a regression test, not an assumption.
    """
    field = H.field
    Hd = H.dual()
    n = H.dim
    N = n * n
    zero = field.zero

    mult = [[None] * N for _ in range(N)]
    for i, j in itertools.product(range(n), range(n)):
        a = flat(i, j, n)
        for k, l in itertools.product(range(n), range(n)):
            prod = {}
            for u, cu in H.mult[k][i].items():
                for v, cv in Hd.mult[j][l].items():
                    prod[flat(u, v, n)] = cu * cv
            mult[a][flat(k, l, n)] = prod

    comult = [None] * N
    counit = [None] * N
    antipode = [None] * N
    for i, j in itertools.product(range(n), range(n)):
        a = flat(i, j, n)
        cm = {}
        for (i1, i2), c1 in H.comult[i].items():
            for (j1, j2), c2 in Hd.comult[j].items():
                for p, q in itertools.product(range(n), range(n)):
                    c = c1 * c2
                    left_dual = Hd.mul(Hd.mul(H.basis_el(p), {j1: field.one}),
                                       H.basis_el(q))
                    right = H.mul(H.mul(H.s(H.basis_el(q)), {i2: field.one}),
                                  H.basis_el(p))
                    for u, cu in left_dual.items():
                        key_l = flat(i1, u, n)
                        for v, cv in right.items():
                            key = (key_l, flat(v, j2, n))
                            cm[key] = cm.get(key, zero) + c * cu * cv
        comult[a] = cm
        counit[a] = H.counit[i] * H.unit.get(j, zero)
        sp = {}
        si = H.s_inv(H.basis_el(i))
        sj = Hd.s(H.basis_el(j))
        for p, q in itertools.product(range(n), range(n)):
            left = H.mul(H.mul(H.basis_el(p), si), H.basis_el(q))
            right = Hd.mul(Hd.mul(Hd.s_inv(H.basis_el(q)), sj), H.basis_el(p))
            for u, cu in left.items():
                for v, cv in right.items():
                    key = flat(u, v, n)
                    sp[key] = sp.get(key, zero) + cu * cv
        antipode[a] = sp

    unit = {flat(q, i, n): cq * H.counit[i] for q, cq in H.unit.items()
            for i in range(n) if not field.is_zero(H.counit[i])}
    Dd = HopfAlgebra(f"D({H.name})*", field, N, mult, unit, comult, counit,
                     antipode)
    Dd.double_dual_of = H
    return Dd


# ---------------------------------------------------------------------------
# axiom reports

class CheckReport:
    """Named deviations of algebraic identities; passes if all within tol."""

    def __init__(self, subject, tol=EPS_TOL):
        self.subject = subject
        self.tol = tol
        self.entries = []

    def add(self, name, dev):
        self.entries.append((name, float(dev)))

    @property
    def max_deviation(self):
        return max((d for _, d in self.entries), default=0.0)

    @property
    def ok(self):
        return self.max_deviation <= self.tol

    def failures(self):
        return [(n, d) for n, d in self.entries if d > self.tol]

    def __repr__(self):
        state = "ok" if self.ok else f"FAIL {self.failures()}"
        return f"CheckReport({self.subject}: {state})"


def check_hopf(H, tol=EPS_TOL, check_r=True):
    """Exhaustive axiom report over basis tuples.

    Covers algebra, coalgebra, bialgebra and antipode axioms, plus the
    quasitriangular identities when an R-matrix is attached.
    """
    field = H.field
    rep = CheckReport(H.name, tol)
    rep.add("associativity", H.check_associative(tol))
    rep.add("unit", H.check_unit(tol))

    dev = 0.0
    for i in range(H.dim):
        left = {}
        right = {}
        for (a, b), c in H.comult[i].items():
            for (a1, a2), d in H.comult[a].items():
                k = (a1, a2, b)
                left[k] = left.get(k, field.zero) + c * d
            for (b1, b2), d in H.comult[b].items():
                k = (a, b1, b2)
                right[k] = right.get(k, field.zero) + c * d
        dev = max(dev, el_diff_norm(left, right))
    rep.add("coassociativity", dev)

    dev = 0.0
    for i in range(H.dim):
        lhs = {}
        rhs = {}
        for (a, b), c in H.comult[i].items():
            lhs[b] = lhs.get(b, field.zero) + c * H.counit[a]
            rhs[a] = rhs.get(a, field.zero) + c * H.counit[b]
        dev = max(dev, el_diff_norm(lhs, H.basis_el(i)))
        dev = max(dev, el_diff_norm(rhs, H.basis_el(i)))
    rep.add("counit", dev)

    dev = 0.0
    for i in range(H.dim):
        for j in range(H.dim):
            lhs = H.comul(H.mult[i][j])
            rhs = {}
            for (a, b), c in H.comult[i].items():
                for (p, q), d in H.comult[j].items():
                    cd = c * d
                    for u, cu in H.mult[a][p].items():
                        for v, cv in H.mult[b][q].items():
                            k = (u, v)
                            rhs[k] = rhs.get(k, field.zero) + cd * cu * cv
            dev = max(dev, el_diff_norm(lhs, rhs))
            lr = H.counit_of(H.mult[i][j]) - H.counit[i] * H.counit[j]
            dev = max(dev, abs(lr))
    dev = max(dev, el_diff_norm(H.comul(H.unit_el()), t_outer(H.unit, H.unit)))
    dev = max(dev, abs(H.counit_of(H.unit_el()) - field.one))
    rep.add("bialgebra", dev)

    dev = 0.0
    for i in range(H.dim):
        target = el_scale(H.counit[i], H.unit_el())
        lhs = {}
        rhs = {}
        for (a, b), c in H.comult[i].items():
            for u, cu in H.mul(H.s(H.basis_el(a)), H.basis_el(b)).items():
                lhs[u] = lhs.get(u, field.zero) + c * cu
            for u, cu in H.mul(H.basis_el(a), H.s(H.basis_el(b))).items():
                rhs[u] = rhs.get(u, field.zero) + c * cu
        dev = max(dev, el_diff_norm(lhs, target), el_diff_norm(rhs, target))
    rep.add("antipode", dev)

    if check_r and H.r_matrix is not None:
        _check_quasitriangular(H, rep)
    return rep


def r_inverse(H):
    """(S (x) id)(R) inverts any universal R-matrix."""
    field = H.field
    out = {}
    for (a, b), c in H.r_matrix.items():
        for u, cu in H.antipode[a].items():
            key = (u, b)
            out[key] = out.get(key, field.zero) + c * cu
    return el_clean(field, out)


def t2_mul(H, x, y):
    """Product in H (x) H of tuple-keyed 2-tensors."""
    zero = H.field.zero
    out = {}
    for (a1, a2), c in x.items():
        for (b1, b2), d in y.items():
            cd = c * d
            for u, cu in H.mult[a1][b1].items():
                for v, cv in H.mult[a2][b2].items():
                    key = (u, v)
                    out[key] = out.get(key, zero) + cd * cu * cv
    return out


def t3_mul(H, x, y):
    zero = H.field.zero
    out = {}
    for (a1, a2, a3), c in x.items():
        for (b1, b2, b3), d in y.items():
            cd = c * d
            for u, cu in H.mult[a1][b1].items():
                for v, cv in H.mult[a2][b2].items():
                    cuv = cu * cv
                    for w, cw in H.mult[a3][b3].items():
                        key = (u, v, w)
                        out[key] = out.get(key, zero) + cd * cuv * cw
    return out


def _r_legs(H, r, placement):
    """Place a 2-tensor into two of three legs, unit elsewhere."""
    out = {}
    for (a, b), c in r.items():
        for u, cu in H.unit.items():
            if placement == (1, 2):
                key = (a, b, u)
            elif placement == (1, 3):
                key = (a, u, b)
            else:
                key = (u, a, b)
            out[key] = out.get(key, H.field.zero) + c * cu
    return out


def _check_quasitriangular(H, rep):
    field = H.field
    r = H.r_matrix
    rinv = r_inverse(H)
    dev = el_diff_norm(t2_mul(H, r, rinv), t_outer(H.unit, H.unit))
    dev = max(dev, el_diff_norm(t2_mul(H, rinv, r), t_outer(H.unit, H.unit)))
    rep.add("r-invertible", dev)

    # hexagons: (Delta (x) id)(R) = R13 R23, (id (x) Delta)(R) = R13 R12
    lhs1 = {}
    lhs2 = {}
    for (a, b), c in r.items():
        for (a1, a2), d in H.comult[a].items():
            k = (a1, a2, b)
            lhs1[k] = lhs1.get(k, field.zero) + c * d
        for (b1, b2), d in H.comult[b].items():
            k = (a, b1, b2)
            lhs2[k] = lhs2.get(k, field.zero) + c * d
    r13 = _r_legs(H, r, (1, 3))
    rhs1 = t3_mul(H, r13, _r_legs(H, r, (2, 3)))
    rhs2 = t3_mul(H, r13, _r_legs(H, r, (1, 2)))
    rep.add("hexagon-1", el_diff_norm(lhs1, rhs1))
    rep.add("hexagon-2", el_diff_norm(lhs2, rhs2))

    # R Delta(x) = Delta^op(x) R on all basis x
    dev = 0.0
    for i in range(H.dim):
        delta = H.comult[i]
        delta_op = {(b, a): c for (a, b), c in delta.items()}
        dev = max(dev, el_diff_norm(t2_mul(H, r, delta), t2_mul(H, delta_op, r)))
    rep.add("r-intertwines", dev)

    r12 = _r_legs(H, r, (1, 2))
    r23 = _r_legs(H, r, (2, 3))
    qybe = el_diff_norm(t3_mul(H, t3_mul(H, r12, r13), r23),
                        t3_mul(H, t3_mul(H, r23, r13), r12))
    rep.add("yang-baxter", qybe)


def check_antipode_involutive(H, tol=EPS_TOL):
    dev = 0.0
    for i in range(H.dim):
        dev = max(dev, el_diff_norm(H.s(H.s(H.basis_el(i))), H.basis_el(i)))
    return dev


def integral_copairing(H, tol=EPS_TOL):
    """Deviation data for the integral identity enabling excitation transport.

    For the normalized integrals ``lam`` of H and ``integ`` of its dual the
    contraction ``integ(lam_2 h) S(lam_1)`` reproduces ``h`` up to the
    pairing ``<integ, lam>``, which equals ``1/dim`` for the semisimple
    fleet.  Returns ``(max deviation of the rescaled identity,
    |<integ, lam> - 1/dim|)``.
    """
    field = H.field
    lam = haar(H, tol)
    integ = haar(H.dual(), tol)
    scale = pairing(integ, lam)
    legs = H.comul(lam)
    worst = 0.0
    inv_scale = field.inv(scale)
    for h in range(H.dim):
        out = {}
        for (l1, l2), c in legs.items():
            val = pairing(integ, H.mul({l2: field.one}, H.basis_el(h)))
            if val is None:
                continue
            for u, cu in H.s({l1: field.one}).items():
                out[u] = out.get(u, field.zero) + c * val * cu
        out = el_scale(inv_scale, out)
        worst = max(worst, el_diff_norm(out, H.basis_el(h)))
    norm_gap = abs(scale - field.inv(field.of(H.dim)))
    return worst, norm_gap
