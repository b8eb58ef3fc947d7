"""Twists (unitary 2-cocycles), twisted Hopf algebras, and twist equivalences.

A twist for a bialgebra ``B`` is an invertible ``F`` in ``B (x) B`` with
counit normalization and the cocycle identity

    F_12 . (Delta (x) id)(F)  =  F_23 . (id (x) Delta)(F).

Twisting keeps the product and counit, conjugates the coproduct by ``F`` and
the antipode by ``Q = F1.S(F2)``, and conjugates an R-matrix to
``F_21 R F^{-1}``.
"""

from __future__ import annotations

import itertools

from .errors import CapacityError, DomainError, NotFactorizable, TwistError
from .hopf import (CheckReport, HopfAlgebra, el_clean, el_diff_norm, flat,
                   pairing, r_inverse, t2_mul, t3_mul, t_outer, unflat)
from .linalg import LinOp, Space, Vec, rank, solve_linear
from .scalars import EPS_TOL

#: explicit twist inversion materializes left multiplication on B (x) B
_INVERT_CUTOFF = 40


class Twist:
    """A validated twist ``F`` of ``algebra`` with cached inverse and Q."""

    def __init__(self, algebra, tensor, inverse=None, tol=EPS_TOL, name="F"):
        self.algebra = algebra
        self.tensor = el_clean(algebra.field, tensor, tol)
        self.inverse = (invert_2tensor(algebra, tensor, tol)
                        if inverse is None else el_clean(algebra.field, inverse, tol))
        self.name = name
        # the unit twist satisfies the cocycle identity by the bialgebra
        # axioms; skipping its check keeps large tensor algebras cheap
        if el_diff_norm(self.tensor, t_outer(algebra.unit, algebra.unit)) > tol:
            report = twist_check(algebra, self.tensor, self.inverse, tol)
            if not report.ok:
                raise TwistError(f"{name} on {algebra.name}: {report.failures()}")
        self._q = None
        self._q_inv = None

    @classmethod
    def trivial(cls, algebra):
        one = t_outer(algebra.unit, algebra.unit)
        return cls(algebra, one, inverse=one, name="1(x)1")

    @property
    def is_trivial(self):
        one = t_outer(self.algebra.unit, self.algebra.unit)
        return el_diff_norm(self.tensor, one) <= EPS_TOL

    def q_element(self):
        """Q = F1 . S(F2), with inverse S(F^-1_1) . F^-1_2."""
        if self._q is None:
            H = self.algebra
            q = {}
            qi = {}
            for (a, b), c in self.tensor.items():
                for u, cu in H.mul(H.basis_el(a), H.s(H.basis_el(b))).items():
                    q[u] = q.get(u, H.field.zero) + c * cu
            for (a, b), c in self.inverse.items():
                for u, cu in H.mul(H.s(H.basis_el(a)), H.basis_el(b)).items():
                    qi[u] = qi.get(u, H.field.zero) + c * cu
            self._q = el_clean(H.field, q)
            self._q_inv = el_clean(H.field, qi)
        return self._q, self._q_inv

    def swapped(self):
        """F_21 as a raw 2-tensor."""
        return {(b, a): c for (a, b), c in self.tensor.items()}

    def inverse_swapped(self):
        return {(b, a): c for (a, b), c in self.inverse.items()}

    def __repr__(self):
        return f"Twist({self.name} on {self.algebra.name}, {len(self.tensor)} terms)"


def invert_2tensor(B, F, tol=EPS_TOL):
    """Invert an element of B (x) B by solving F.X = 1(x)1."""
    if B.dim > _INVERT_CUTOFF:
        raise CapacityError(
            f"twist inversion over {B.name} (dim {B.dim}) exceeds cutoff; "
            "provide the inverse explicitly")
    n = B.dim
    sq = Space(f"{B.name}^(x)2", n * n)
    field = B.field

    def col(k):
        x = {unflat(k, n): field.one}
        prod = t2_mul(B, F, x)
        return {flat(i, j, n): c for (i, j), c in prod.items()
                if not field.is_zero(c, tol)}

    lm = LinOp(sq, sq, field, col=col, name="F.")
    one = t_outer(B.unit, B.unit)
    rhs = Vec(sq, {flat(i, j, n): c for (i, j), c in one.items()}, field)
    try:
        part, basis = solve_linear([(lm, rhs)], tol)
    except Exception as exc:
        raise TwistError(f"element of {B.name}^(x)2 is not invertible") from exc
    if part is None or basis:
        raise TwistError(f"element of {B.name}^(x)2 is not invertible")
    return {unflat(k, n): c for k, c in part.coeffs.items()}


def twist_check(B, F, F_inv=None, tol=EPS_TOL):
    """Report on counit normalization, the cocycle identity, invertibility."""
    field = B.field
    rep = CheckReport(f"twist on {B.name}", tol)

    eps_left = {}
    eps_right = {}
    for (a, b), c in F.items():
        eps_left[b] = eps_left.get(b, field.zero) + c * B.counit[a]
        eps_right[a] = eps_right.get(a, field.zero) + c * B.counit[b]
    rep.add("counit-left", el_diff_norm(eps_left, B.unit_el()))
    rep.add("counit-right", el_diff_norm(eps_right, B.unit_el()))

    f12 = {}
    f23 = {}
    for (a, b), c in F.items():
        for u, cu in B.unit.items():
            f12[(a, b, u)] = f12.get((a, b, u), field.zero) + c * cu
            f23[(u, a, b)] = f23.get((u, a, b), field.zero) + c * cu
    dF_left = {}
    dF_right = {}
    for (a, b), c in F.items():
        for (a1, a2), d in B.comult[a].items():
            k = (a1, a2, b)
            dF_left[k] = dF_left.get(k, field.zero) + c * d
        for (b1, b2), d in B.comult[b].items():
            k = (a, b1, b2)
            dF_right[k] = dF_right.get(k, field.zero) + c * d
    rep.add("cocycle", el_diff_norm(t3_mul(B, f12, dF_left),
                                    t3_mul(B, f23, dF_right)))

    if F_inv is not None:
        one = t_outer(B.unit, B.unit)
        rep.add("inverse", max(el_diff_norm(t2_mul(B, F, F_inv), one),
                               el_diff_norm(t2_mul(B, F_inv, F), one)))
    return rep


def twist_hopf(H, twist, tol=EPS_TOL):
    """The twisted Hopf algebra: same product, conjugated coproduct/antipode.

    Attaches ``F_21 R F^{-1}`` when ``H`` is quasitriangular.
    """
    if twist.algebra is not H:
        raise DomainError("twist does not belong to this algebra")
    field = H.field
    n = H.dim
    comult = []
    for i in range(n):
        conj = t2_mul(H, t2_mul(H, twist.tensor, H.comult[i]), twist.inverse)
        comult.append(el_clean(field, conj, tol))
    q, q_inv = twist.q_element()
    antipode = []
    for i in range(n):
        conj = H.mul(H.mul(q, H.s(H.basis_el(i))), q_inv)
        antipode.append(el_clean(field, conj, tol))
    r = None
    if H.r_matrix is not None:
        r = el_clean(field, t2_mul(H, t2_mul(H, twist.swapped(), H.r_matrix),
                                   twist.inverse), tol)
    return HopfAlgebra(f"{H.name}_{twist.name}", field, n, H.mult, H.unit,
                       comult, H.counit, antipode, r_matrix=r)


def r_matrix_twist(H, name="R"):
    """Any universal R-matrix is a twist; inverse is (S (x) id)(R)."""
    if H.r_matrix is None:
        raise DomainError(f"{H.name} carries no R-matrix")
    return Twist(H, H.r_matrix, inverse=r_inverse(H), name=name)


def project_twist_left(T, name=None):
    """Push a twist on H (x) K to H along the counit of K."""
    HK = T.algebra
    H, K = HK.tensor_factors
    out = _project(HK, T.tensor, left=True)
    inv = _project(HK, T.inverse, left=True)
    return Twist(H, out, inverse=inv, name=name or f"{T.name}|{H.name}")


def project_twist_right(T, name=None):
    HK = T.algebra
    H, K = HK.tensor_factors
    out = _project(HK, T.tensor, left=False)
    inv = _project(HK, T.inverse, left=False)
    return Twist(K, out, inverse=inv, name=name or f"{T.name}|{K.name}")


def _project(HK, F, left):
    H, K = HK.tensor_factors
    m = K.dim
    field = HK.field
    out = {}
    for (x, y), c in F.items():
        x1, x2 = unflat(x, m)
        y1, y2 = unflat(y, m)
        if left:
            key = (x1, y1)
            c = c * K.counit[x2] * K.counit[y2]
        else:
            key = (x2, y2)
            c = c * H.counit[x1] * H.counit[y1]
        if not field.is_zero(c):
            out[key] = out.get(key, field.zero) + c
    return out


def tensor_twist(HK, F_H, F_K, name="F(x)F"):
    """Twist of H (x) K from twists of the factors, legs interleaved."""
    H, K = HK.tensor_factors
    m = K.dim

    def interleave(a, b):
        out = {}
        for (x1, y1), c in a.items():
            for (x2, y2), d in b.items():
                out[(flat(x1, x2, m), flat(y1, y2, m))] = c * d
        return out

    return Twist(HK, interleave(F_H.tensor, F_K.tensor),
                 inverse=interleave(F_H.inverse, F_K.inverse), name=name)


def embed_subalgebra_twist(HK, F_H, left=True, name=None):
    """A twist of a tensor factor, viewed as a twist of H (x) K."""
    H, K = HK.tensor_factors
    m = K.dim
    out = {}
    inv = {}
    for src, dst in ((F_H.tensor, out), (F_H.inverse, inv)):
        for (x, y), c in src.items():
            for u, cu in (K.unit if left else H.unit).items():
                if left:
                    key = (flat(x, u, m), flat(y, u, m))
                else:
                    key = (flat(u, x, m), flat(u, y, m))
                dst[key] = dst.get(key, HK.field.zero) + c * cu
    return Twist(HK, out, inverse=inv, name=name or f"{F_H.name}<={HK.name}")


# ---------------------------------------------------------------------------
# the factorizable twist equivalence D(K) ~ (K (x) K)_F

def transparent_twist(K, KK=None, tol=EPS_TOL):
    """Twist data making K (x) K twist equivalent to D(K).

    Returns ``(twist, phi, KK, r_example)`` where ``phi`` is the linear
    bijection D(K) -> K (x) K, ``KK`` the tensor Hopf algebra carrying the
    twist, and ``r_example`` the R-matrix on K (x) K for which the
    equivalence is braided.  Raises ``NotFactorizable`` when ``phi`` fails to
    be bijective.
    """
    from .hopf import drinfeld_double, tensor_hopf

    if K.r_matrix is None:
        raise DomainError(f"{K.name} carries no R-matrix")
    field = K.field
    n = K.dim
    if KK is None:
        KK = tensor_hopf(K, K)
    r = K.r_matrix
    rinv = r_inverse(K)

    # F = 1 (x) R2 (x) R1 (x) 1 in (K(x)K) (x) (K(x)K)
    F = {}
    F_inv = {}
    for src, dst in ((r, F), (rinv, F_inv)):
        for (a, b), c in src.items():
            for u, cu in K.unit.items():
                for v, cv in K.unit.items():
                    key = (flat(u, b, n), flat(a, v, n))
                    dst[key] = dst.get(key, field.zero) + c * cu * cv
    twist = Twist(KK, F, inverse=F_inv, name="transparent")

    # r_example = R^(-2) (x) R^(1) (x) R^(-1) (x) R^(2): one inverse copy
    # shared across legs 1,3 and one direct copy across legs 2,4
    r_ex = {}
    for (i1, i2), ci in rinv.items():
        for (a, b), c in r.items():
            key = (flat(i2, a, n), flat(i1, b, n))
            r_ex[key] = r_ex.get(key, field.zero) + ci * c

    DK = drinfeld_double(K)
    Kd = K.dual()

    # phi(alpha (x) h) = <alpha_2, R2><alpha_1, R'2> S(R1)h_1 (x) R'1 h_2
    # with R = R1(x)R2 and R' an independent copy.
    sq = Space(f"{KK.name}", KK.dim)

    def phi_col(idx):
        i, j = unflat(idx, n)  # alpha_i (x) a_j
        out = {}
        for (i1, i2), c0 in Kd.comult[i].items():
            for (j1, j2), c1 in K.comult[j].items():
                # first copy pairs alpha_(2) with its second leg, second copy
                # pairs alpha_(1) with its first leg
                for (a, b), cr in r.items():
                    if b != i2:
                        continue
                    for (a2, b2), cr2 in r.items():
                        if a2 != i1:
                            continue
                        c = c0 * c1 * cr * cr2
                        for u, cu in K.mul(K.s(K.basis_el(a)),
                                           K.basis_el(j1)).items():
                            for v, cv in K.mul(K.basis_el(b2),
                                               K.basis_el(j2)).items():
                                key = flat(u, v, n)
                                out[key] = out.get(key, field.zero) + c * cu * cv
        return el_clean(field, out, tol)

    phi = LinOp(Space(DK.name, DK.dim), sq, field, col=phi_col, name="phi").materialize()
    if rank(phi, tol) != DK.dim:
        raise NotFactorizable(f"{K.name}: the canonical map is not bijective")
    return twist, phi, KK, el_clean(field, r_ex, tol)
