import random

import pytest

from hopflat.errors import DomainError, NoSolution
from hopflat.linalg import (LinOp, Space, Vec, check_linearity, compare_ops,
                            op_equal, random_vec, rank, solve_linear)
from hopflat.scalars import APPROX, EXACT


def dense_mul(a, b):
    n = len(b[0])
    out = [[sum((a[i][k] * b[k][j] for k in range(len(b))), a[0][0] * 0)
            for j in range(n)] for i in range(len(a))]
    return out


def random_op(space, field, rng, name="A"):
    cols = {}
    for j in range(space.dim):
        cols[j] = {i: field.rand(rng) for i in range(space.dim)}
    return LinOp.from_columns(space, space, field, cols, name=name)


@pytest.mark.parametrize("field", [EXACT, APPROX], ids=["exact", "approx"])
def test_identity_and_zero(field):
    sp = Space("V", 5)
    v = Vec(sp, {0: field.of(2), 3: field.of(-1)}, field)
    assert LinOp.identity(sp, field).apply(v).coeffs == v.coeffs
    assert LinOp.zero(sp, field).apply(v).coeffs == {}


@pytest.mark.parametrize("field", [EXACT, APPROX], ids=["exact", "approx"])
def test_composition_matches_dense_product(field):
    rng = random.Random(11)
    sp = Space("V", 4)
    a = random_op(sp, field, rng)
    b = random_op(sp, field, rng)
    composed = (a @ b).dense()
    oracle = dense_mul(a.dense(), b.dense())
    for i in range(4):
        for j in range(4):
            assert abs(composed[i][j] - oracle[i][j]) <= 1e-12
    v = random_vec(sp, field, rng)
    lhs = (a @ b).apply(v)
    rhs = a.apply(b.apply(v))
    assert (lhs - rhs).norm_inf() <= 1e-12


def test_composition_associative():
    rng = random.Random(5)
    sp = Space("V", 4)
    a, b, c = (random_op(sp, APPROX, rng, n) for n in "abc")
    assert op_equal(((a @ b) @ c), (a @ (b @ c)), tol=1e-9)


def test_op_equal_examples_and_dense_oracle():
    sp = Space("V", 8)
    rng = random.Random(3)
    ident = LinOp.identity(sp, APPROX)
    assert op_equal(ident, ident)
    assert not op_equal(ident, LinOp.zero(sp, APPROX))
    a = random_op(sp, APPROX, rng)
    b = random_op(sp, APPROX, rng)
    # dense comparison verdict agrees with op_equal verdict
    dev = max(abs(x - y) for ra, rb in zip(a.dense(), b.dense())
              for x, y in zip(ra, rb))
    assert op_equal(a, b, tol=dev + 1e-12)
    assert not op_equal(a, b, tol=dev / 2)
    with pytest.raises(DomainError):
        op_equal(ident, LinOp.identity(Space("W", 8), APPROX))


def test_space_mismatch_raises():
    v = Vec(Space("V", 3), {0: 1.0 + 0j}, APPROX)
    with pytest.raises(DomainError):
        LinOp.identity(Space("W", 3), APPROX).apply(v)


@pytest.mark.parametrize("field", [EXACT, APPROX], ids=["exact", "approx"])
def test_rank_examples(field):
    sp5 = Space("V", 5)
    assert rank(LinOp.identity(sp5, field)) == 5
    assert rank(LinOp.zero(sp5, field)) == 0
    # (1/2)(id + swap) on a 2x2 tensor square projects onto the symmetric part
    sp4 = Space("VV", 4)
    half = field.of(1) / field.of(2)

    def col(i):
        a, b = divmod(i, 2)
        out = {i: half}
        j = b * 2 + a
        out[j] = out.get(j, field.of(0)) + half
        return {k: c for k, c in out.items() if not field.is_zero(c)}

    proj = LinOp(sp4, sp4, field, col=col)
    assert rank(proj) == 3


def test_rank_invariant_under_invertible_composition():
    rng = random.Random(17)
    sp = Space("V", 6)
    base = LinOp.from_columns(sp, sp, APPROX, {
        j: ({j: 1.0 + 0j} if j < 4 else {}) for j in range(6)})
    assert rank(base) == 4
    for _ in range(3):
        g = random_op(sp, APPROX, rng)
        while rank(g) < 6:
            g = random_op(sp, APPROX, rng)
        assert rank(g @ base) == 4
        assert rank(base @ g) == 4


@pytest.mark.parametrize("field", [EXACT, APPROX], ids=["exact", "approx"])
def test_solve_linear_examples(field):
    sp = Space("V", 2)
    ident = LinOp.identity(sp, field)
    zero_vec = Vec.zero(sp, field)
    # x = x: whole space
    part, basis = solve_linear([(ident - ident, zero_vec)])
    assert part is None and len(basis) == 2
    # x = 0: zero space
    part, basis = solve_linear([(ident, zero_vec)])
    assert part is None and basis == []
    # inconsistent
    with pytest.raises(NoSolution):
        solve_linear([(LinOp.zero(sp, field),
                       Vec(sp, {0: field.one}, field))])


def test_linearity_of_random_ops():
    rng = random.Random(23)
    sp = Space("V", 5)
    for field in (EXACT, APPROX):
        op = random_op(sp, field, rng)
        assert check_linearity(op, rng, trials=10) <= 1e-9


def test_sampled_comparison_flag():
    sp = Space("V", 16)
    ident = LinOp.identity(sp, APPROX)
    eq, dev, sampled = compare_ops(ident, ident, force_sample=False)
    assert eq and not sampled
