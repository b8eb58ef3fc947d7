"""Vectors and matrix-free linear operators on labeled spaces.

Vectors are sparse coefficient dicts over an indexed basis.  Operators are
defined by their action on basis vectors (``col``); composition is lazy and
``materialize`` caches all columns when a dense pass is affordable.  Space
labels are carried along and checked at composition time so tensor factors
cannot be silently miswired.
"""

from __future__ import annotations

import random
from typing import Callable, NamedTuple

from .errors import CapacityError, DomainError, NoSolution
from .scalars import EPS_TOL, Field

#: largest dimension for which dense materialization (rank, solve) is allowed
DENSE_CUTOFF = 8192
#: largest dimension at which operator equality checks the full basis
FULL_COMPARE_CUTOFF = 4096
#: number of pseudo-random basis states probed above the cutoff
SAMPLE_STATES = 64


class Space(NamedTuple):
    label: str
    dim: int

    def __str__(self):
        return f"{self.label}({self.dim})"


class Vec:
    """Sparse vector over the basis of ``space``."""

    __slots__ = ("space", "coeffs", "field")

    def __init__(self, space, coeffs, field):
        self.space = space
        self.coeffs = {i: c for i, c in coeffs.items() if not field.is_zero(c)}
        self.field = field

    @classmethod
    def basis(cls, space, i, field):
        return cls(space, {i: field.one}, field)

    @classmethod
    def zero(cls, space, field):
        return cls(space, {}, field)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, self.field.zero) + c
        return Vec(self.space, out, self.field)

    def __sub__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = out.get(i, self.field.zero) - c
        return Vec(self.space, out, self.field)

    def scale(self, a):
        return Vec(self.space, {i: a * c for i, c in self.coeffs.items()}, self.field)

    def norm_inf(self):
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def _check(self, other):
        if self.space != other.space:
            raise DomainError(f"space mismatch: {self.space} vs {other.space}")

    def __repr__(self):
        return f"Vec({self.space}, {self.coeffs})"


def vec_diff_norm(u, v):
    return (u - v).norm_inf()


class LinOp:
    """Linear operator given by its columns; compose with ``@``."""

    def __init__(self, domain, codomain, field, col=None, name=""):
        self.domain = domain
        self.codomain = codomain
        self.field = field
        self._col_fn: Callable[[int], dict] | None = col
        self._cols: dict[int, dict] = {}
        self.name = name

    # -- construction helpers ---------------------------------------------
    @classmethod
    def identity(cls, space, field):
        return cls(space, space, field, col=lambda i: {i: field.one}, name="id")

    @classmethod
    def zero(cls, space, field, codomain=None):
        return cls(space, codomain or space, field, col=lambda i: {}, name="0")

    @classmethod
    def from_columns(cls, domain, codomain, field, cols, name=""):
        op = cls(domain, codomain, field, name=name)
        op._cols = dict(cols)
        op._col_fn = lambda i: {}
        return op

    @classmethod
    def from_dense(cls, domain, codomain, field, matrix, name=""):
        """``matrix[r][c]`` row-major nested lists."""
        cols = {}
        for j in range(domain.dim):
            col = {}
            for i in range(codomain.dim):
                a = field.of(matrix[i][j])
                if not field.is_zero(a):
                    col[i] = a
            cols[j] = col
        return cls.from_columns(domain, codomain, field, cols, name=name)

    # -- evaluation ---------------------------------------------------------
    def col(self, i):
        c = self._cols.get(i)
        if c is None:
            c = self._col_fn(i)
            self._cols[i] = c
        return c

    def apply(self, v):
        if v.space != self.domain:
            raise DomainError(f"operator domain {self.domain}, vector in {v.space}")
        out: dict = {}
        zero = self.field.zero
        for i, a in v.coeffs.items():
            for r, m in self.col(i).items():
                out[r] = out.get(r, zero) + a * m
        return Vec(self.codomain, out, self.field)

    def __call__(self, v):
        return self.apply(v)

    def materialize(self):
        if self.domain.dim > DENSE_CUTOFF:
            raise CapacityError(f"dim {self.domain.dim} over dense cutoff {DENSE_CUTOFF}")
        cols = {i: self.col(i) for i in range(self.domain.dim)}
        return LinOp.from_columns(self.domain, self.codomain, self.field, cols, name=self.name)

    # -- algebra ------------------------------------------------------------
    def __matmul__(self, other):
        if other.codomain != self.domain:
            raise DomainError(
                f"cannot compose: {self.name or 'op'} domain {self.domain} "
                f"!= {other.name or 'op'} codomain {other.codomain}"
            )
        zero = self.field.zero

        def col(i):
            out: dict = {}
            for k, b in other.col(i).items():
                for r, a in self.col(k).items():
                    out[r] = out.get(r, zero) + a * b
            return out

        return LinOp(other.domain, self.codomain, self.field, col=col,
                     name=f"{self.name}*{other.name}")

    def __add__(self, other):
        if other.domain != self.domain or other.codomain != self.codomain:
            raise DomainError("operator shapes differ")
        zero = self.field.zero

        def col(i):
            out = dict(self.col(i))
            for r, b in other.col(i).items():
                out[r] = out.get(r, zero) + b
            return out

        return LinOp(self.domain, self.codomain, self.field, col=col)

    def __sub__(self, other):
        return self + other.scale(-self.field.one)

    def scale(self, a):
        return LinOp(self.domain, self.codomain, self.field,
                     col=lambda i: {r: a * c for r, c in self.col(i).items()},
                     name=self.name)

    def dense(self):
        """Row-major nested lists; small spaces only."""
        if self.domain.dim > DENSE_CUTOFF:
            raise CapacityError(f"dim {self.domain.dim} over dense cutoff")
        zero = self.field.zero
        m = [[zero] * self.domain.dim for _ in range(self.codomain.dim)]
        for j in range(self.domain.dim):
            for i, a in self.col(j).items():
                m[i][j] = a
        return m

    def __repr__(self):
        return f"LinOp({self.name or '?'}: {self.domain} -> {self.codomain})"


def apply(op, v):
    return op.apply(v)


def compare_ops(a, b, tol=EPS_TOL, seed=0, force_sample=False):
    """Max column deviation between operators.

    Returns ``(equal, max_dev, sampled)``.  Above ``FULL_COMPARE_CUTOFF`` (or
    with ``force_sample``) the comparison probes ``SAMPLE_STATES``
    pseudo-random basis states drawn with the given seed and reports
    ``sampled=True``.
    """
    if a.domain != b.domain or a.codomain != b.codomain:
        raise DomainError(f"cannot compare {a.domain}->{a.codomain} with {b.domain}->{b.codomain}")
    n = a.domain.dim
    sampled = n > FULL_COMPARE_CUTOFF or (force_sample and n > SAMPLE_STATES)
    if sampled:
        rng = random.Random(seed)
        indices = sorted(rng.sample(range(n), min(SAMPLE_STATES, n)))
    else:
        indices = range(n)
    field = a.field
    max_dev = 0.0
    for i in indices:
        ca, cb = a.col(i), b.col(i)
        for r in set(ca) | set(cb):
            d = abs(ca.get(r, field.zero) - cb.get(r, field.zero))
            if d > max_dev:
                max_dev = d
    return max_dev <= tol, max_dev, sampled


def op_equal(a, b, tol=EPS_TOL, seed=0):
    return compare_ops(a, b, tol, seed)[0]


# -- dense elimination over either field -------------------------------------

def _echelon(rows, field, tol):
    """In-place row echelon; returns pivot column list."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        # pick pivot: exact -> first nonzero, approx -> largest magnitude
        pivot = None
        if field.is_exact:
            for i in range(r, nrows):
                if not field.is_zero(rows[i][c]):
                    pivot = i
                    break
        else:
            best = tol
            for i in range(r, nrows):
                if abs(rows[i][c]) > best:
                    best = abs(rows[i][c])
                    pivot = i
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inv(rows[r][c])
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and not field.is_zero(rows[i][c], tol):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def rank(op, tol=EPS_TOL):
    """Numerical rank of the materialized operator."""
    if op.domain.dim > DENSE_CUTOFF or op.codomain.dim > DENSE_CUTOFF:
        raise CapacityError(f"rank: dimension over cutoff {DENSE_CUTOFF}")
    rows = op.dense()
    if not rows:
        return 0
    return len(_echelon([list(r) for r in rows], op.field, tol))


def solve_linear(constraints, tol=EPS_TOL):
    """Solve a stacked system ``op_k(x) = v_k``.

    ``constraints`` is a list of ``(LinOp, Vec)`` pairs over one common
    domain.  Returns ``(particular, basis)`` where ``particular`` is one
    solution (``None`` when the system is homogeneous and the zero vector is
    meant) and ``basis`` spans the homogeneous solution space.  Raises
    ``NoSolution`` when inconsistent.
    """
    if not constraints:
        raise DomainError("empty system")
    domain = constraints[0][0].domain
    field = constraints[0][0].field
    rows = []
    rhs = []
    for op, v in constraints:
        if op.domain != domain:
            raise DomainError("constraints have mixed domains")
        if v.space != op.codomain:
            raise DomainError("right-hand side lives in the wrong space")
        m = op.dense()
        for i in range(op.codomain.dim):
            rows.append(list(m[i]))
            rhs.append(v.coeffs.get(i, field.zero))
    n = domain.dim
    aug = [row + [b] for row, b in zip(rows, rhs)]
    pivots = _echelon(aug, field, tol)
    if n in pivots:
        raise NoSolution("inconsistent linear system")
    pivots_set = set(pivots)
    particular = {c: aug[r][n] for r, c in enumerate(pivots)
                  if not field.is_zero(aug[r][n], tol)}
    basis = []
    for free in range(n):
        if free in pivots_set:
            continue
        coeffs = {free: field.one}
        for r, c in enumerate(pivots):
            a = aug[r][free]
            if not field.is_zero(a, tol):
                coeffs[c] = -a
        basis.append(Vec(domain, coeffs, field))
    homogeneous = all(v.norm_inf() == 0 for _, v in constraints)
    part_vec = None if homogeneous else Vec(domain, particular, field)
    return part_vec, basis


def random_vec(space, field, rng):
    return Vec(space, {i: field.rand(rng) for i in range(space.dim)}, field)


def check_linearity(op, rng, trials=10, tol=EPS_TOL):
    """Max deviation of op(a*v + b*w) - a*op(v) - b*op(w) over random draws."""
    worst = 0.0
    for _ in range(trials):
        v = random_vec(op.domain, op.field, rng)
        w = random_vec(op.domain, op.field, rng)
        a, b = op.field.rand(rng), op.field.rand(rng)
        lhs = op.apply(v.scale(a) + w.scale(b))
        rhs = op.apply(v).scale(a) + op.apply(w).scale(b)
        worst = max(worst, vec_diff_norm(lhs, rhs))
    return worst
