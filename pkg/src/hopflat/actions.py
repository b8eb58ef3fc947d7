"""Coregular actions and Heisenberg doubles.

The dual of a Hopf algebra ``H`` is an ``H``-module algebra under

    h |> alpha = <alpha_2, h> alpha_1        (left coregular)
    alpha <| h = <alpha_1, h> alpha_2        (right coregular)

and the smash products of these actions are the two Heisenberg doubles on
the vector space ``H (x) dual(H)``, indexed here exactly like the dual of
the Drinfel'd double so their products can feed holonomy arguments.
"""

from __future__ import annotations

import itertools

from .errors import DomainError
from .hopf import Algebra, el_clean, flat, unflat
from .linalg import LinOp, Space
from .scalars import EPS_TOL


def coreg_left(H, h, alpha):
    """h |> alpha for h in H, alpha in H.dual()."""
    Hd = H.dual()
    zero = H.field.zero
    out = {}
    for i, c in alpha.items():
        for (a1, a2), d in Hd.comult[i].items():
            p = h.get(a2)
            if p is not None:
                out[a1] = out.get(a1, zero) + c * d * p
    return out


def coreg_right(H, alpha, h):
    """alpha <| h for alpha in H.dual(), h in H."""
    Hd = H.dual()
    zero = H.field.zero
    out = {}
    for i, c in alpha.items():
        for (a1, a2), d in Hd.comult[i].items():
            p = h.get(a1)
            if p is not None:
                out[a2] = out.get(a2, zero) + c * d * p
    return out


def coreg_left_via_s(H, h, alpha):
    """The left action built from the right one: h (x) alpha -> alpha <| S(h)."""
    return coreg_right(H, alpha, H.s(h))


def heisenberg_double(H, variant="R"):
    """Heisenberg double on H (x) dual(H), flat index ``i*dim+j``.

    ``variant="R"`` multiplies by pairing the functional leg against the
    incoming element's second coproduct leg; ``variant="R-bar"`` pairs
    against the antipode of that leg and multiplies functionals on the other
    side.  The ``R`` variant acts on ``H`` itself and that action spans all
    linear endomorphisms.
    """
    if variant not in ("R", "R-bar"):
        raise DomainError(f"unknown Heisenberg variant {variant!r}")
    field = H.field
    Hd = H.dual()
    n = H.dim
    N = n * n
    zero = field.zero
    mult = [[None] * N for _ in range(N)]
    for i, j in itertools.product(range(n), range(n)):
        a = flat(i, j, n)
        for k, l in itertools.product(range(n), range(n)):
            out = {}
            for (j1, j2), cj in Hd.comult[j].items():
                if variant == "R":
                    # <alpha_1, k_2> h k_1 (x) alpha_2 beta
                    for (k1, k2), ck in H.comult[k].items():
                        if k2 != j1:
                            continue
                        c = cj * ck
                        for u, cu in H.mult[i][k1].items():
                            for v, cv in Hd.mult[j2][l].items():
                                key = flat(u, v, n)
                                out[key] = out.get(key, zero) + c * cu * cv
                else:
                    # <alpha_1, S(k_2)> k_1 h (x) beta alpha_2
                    for (k1, k2), ck in H.comult[k].items():
                        p = H.antipode[k2].get(j1)
                        if p is None:
                            continue
                        c = cj * ck * p
                        for u, cu in H.mult[k1][i].items():
                            for v, cv in Hd.mult[l][j2].items():
                                key = flat(u, v, n)
                                out[key] = out.get(key, zero) + c * cu * cv
            mult[a][flat(k, l, n)] = el_clean(field, out)
    unit = {flat(q, i, n): cq * H.counit[i] for q, cq in H.unit.items()
            for i in range(n) if not field.is_zero(H.counit[i])}
    tag = "H_R" if variant == "R" else "H_R-bar"
    A = Algebra(f"{tag}({H.name})", field, N, mult, unit)
    A.heisenberg_of = H
    A.variant = variant
    return A


def heisenberg_action_op(H, x):
    """The action of an ``R``-variant Heisenberg element on ``H``:
    (h (x) alpha) |> m = <alpha, m_2> h m_1."""
    field = H.field
    n = H.dim
    zero = field.zero

    def col(m):
        out = {}
        for key, c in x.items():
            i, j = unflat(key, n)
            for (m1, m2), cm in H.comult[m].items():
                if m2 != j:
                    continue
                for u, cu in H.mult[i][m1].items():
                    out[u] = out.get(u, zero) + c * cm * cu
        return el_clean(field, out)

    return LinOp(H.space, H.space, field, col=col, name="heis")


def heisenberg_action_rank(H, tol=EPS_TOL):
    """Rank of the span of action operators; equals dim(H)^2 when the
    action identifies the double with all endomorphisms of H."""
    from .linalg import rank

    n = H.dim
    N = n * n
    field = H.field
    sp_in = Space(f"heis({H.name})", N)
    sp_out = Space(f"end({H.name})", N)

    def col(k):
        op = heisenberg_action_op(H, {k: field.one})
        out = {}
        for m in range(n):
            for u, c in op.col(m).items():
                out[flat(u, m, n)] = c
        return out

    return rank(LinOp(sp_in, sp_out, field, col=col, name="act"), tol)
