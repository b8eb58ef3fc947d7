"""Finite-dimensional modules over the constructed algebras.

Modules carry dense action matrices per algebra basis element.  Irreducible
decomposition uses the commutant of the regular representation: a seeded
random commutant element is diagonalized, its eigenspaces are irreducible
submodules, and isomorphic ones are grouped by intertwiner search.  The
numerics run in double precision regardless of the ambient field; dimensions,
multiplicities and block data are exact integers, and central idempotents
are re-rationalized (and re-verified) in exact mode when possible.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DecompositionError, DomainError
from .hopf import el_clean, t2_mul
from .linalg import LinOp, Space
from .scalars import EPS_TOL, EXACT, GaussRat

#: eigenvalues closer than this are treated as one eigenspace
GAP_THRESHOLD = 1e-6
#: retries with fresh seeds before giving up on a degenerate random draw
MAX_RETRIES = 8


class Module:
    """A left module: ``action[i]`` is the matrix of basis element ``i``."""

    def __init__(self, algebra, action, name="M"):
        self.algebra = algebra
        self.action = [np.asarray(m, dtype=complex) for m in action]
        self.dim = self.action[0].shape[0] if self.action else 0
        self.name = name

    def act(self, x):
        """Matrix of a sparse algebra element."""
        m = np.zeros((self.dim, self.dim), dtype=complex)
        for i, c in x.items():
            m += complex(c) * self.action[i]
        return m

    def check_module(self, tol=EPS_TOL):
        """Max deviation of rho(1) = id and rho(ab) = rho(a)rho(b)."""
        A = self.algebra
        dev = float(np.max(np.abs(self.act(A.unit_el()) - np.eye(self.dim))))
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = self.act(A.mult[i][j])
                rhs = self.action[i] @ self.action[j]
                dev = max(dev, float(np.max(np.abs(lhs - rhs))))
        return dev

    def __repr__(self):
        return f"Module({self.name}: dim {self.dim} over {self.algebra.name})"


def regular_module(A, name=None):
    n = A.dim
    mats = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for k, c in A.mult[i][j].items():
                m[k, j] += complex(c)
        mats.append(m)
    return Module(A, mats, name=name or f"reg({A.name})")


def trivial_module(H, name="triv"):
    """One-dimensional module through the counit."""
    return Module(H, [np.array([[complex(H.counit[i])]]) for i in range(H.dim)],
                  name=name)


def tensor_module(M, N, name=None):
    """Module on carrier(M) (x) carrier(N) through the coproduct."""
    if M.algebra is not N.algebra:
        raise DomainError("tensor factors over different algebras")
    H = M.algebra
    mats = []
    for i in range(H.dim):
        m = np.zeros((M.dim * N.dim, M.dim * N.dim), dtype=complex)
        for (a, b), c in H.comult[i].items():
            m += complex(c) * np.kron(M.action[a], N.action[b])
        mats.append(m)
    return Module(H, mats, name=name or f"{M.name}(x){N.name}")


def twisted_tensor_module(M, N, twist, name=None):
    """Tensor module through the twisted coproduct F.Delta(.).F^-1."""
    if M.algebra is not N.algebra:
        raise DomainError("tensor factors over different algebras")
    H = M.algebra
    if twist.algebra is not H:
        raise DomainError("twist over the wrong algebra")
    mats = []
    for i in range(H.dim):
        conj = t2_mul(H, t2_mul(H, twist.tensor, H.comult[i]), twist.inverse)
        m = np.zeros((M.dim * N.dim, M.dim * N.dim), dtype=complex)
        for (a, b), c in conj.items():
            m += complex(c) * np.kron(M.action[a], N.action[b])
        mats.append(m)
    return Module(H, mats, name=name or f"{M.name}(x)_F{N.name}")


def dual_module(M, name=None):
    """Dual carrier with action through the transposed antipode."""
    H = M.algebra
    mats = []
    for i in range(H.dim):
        m = np.zeros((M.dim, M.dim), dtype=complex)
        for k, c in H.antipode[i].items():
            m += complex(c) * M.action[k].T
        mats.append(m)
    return Module(H, mats, name=name or f"{M.name}*")


def character(M):
    return [complex(np.trace(M.action[i])) for i in range(M.algebra.dim)]


def intertwiner_space_dim(M, N, tol=1e-7):
    """Dimension of Hom(M, N): nullity of the stacked commutation system."""
    rows = []
    for i in range(M.algebra.dim):
        # N.action[i] X - X M.action[i] = 0, X is (N.dim x M.dim)
        a = np.kron(np.eye(M.dim), N.action[i]) - np.kron(M.action[i].T, np.eye(N.dim))
        rows.append(a)
    system = np.vstack(rows)
    s = np.linalg.svd(system, compute_uv=False)
    return int(np.sum(s <= tol * max(1.0, s[0] if len(s) else 1.0)))


def modules_isomorphic(M, N, tol=1e-7):
    if M.dim != N.dim:
        return False
    return intertwiner_space_dim(M, N, tol) >= 1


class IrrepTable:
    """Representatives of the irreducible modules of a semisimple algebra."""

    def __init__(self, algebra, irreps, seed):
        self.algebra = algebra
        self.irreps = irreps
        self.seed = seed
        self.dims = [m.dim for m in irreps]
        self._idempotents = None

    def multiplicity(self, M, i):
        """Multiplicity of irrep ``i`` in ``M`` via intertwiner dimension."""
        return intertwiner_space_dim(self.irreps[i], M) // 1

    def multiplicities(self, M):
        return [intertwiner_space_dim(irr, M) for irr in self.irreps]

    def central_idempotents(self):
        """Sparse elements z_i with rho_j(z_i) = delta_ij. Exact-mode
        coefficients are rationalized and re-verified when possible."""
        if self._idempotents is not None:
            return self._idempotents
        A = self.algebra
        n = A.dim
        cols = []
        for k in range(n):
            col = []
            for irr in self.irreps:
                col.extend(irr.action[k].flatten())
            cols.append(col)
        system = np.array(cols, dtype=complex).T
        outs = []
        for i, irr in enumerate(self.irreps):
            target = []
            for j, other in enumerate(self.irreps):
                block = np.eye(other.dim) if j == i else np.zeros((other.dim, other.dim))
                target.extend(block.flatten())
            z, *_ = np.linalg.lstsq(system, np.array(target, dtype=complex), rcond=None)
            outs.append(z)
        self._idempotents = [self._as_field_element(z) for z in outs]
        return self._idempotents

    def _as_field_element(self, z):
        A = self.algebra
        field = A.field
        out = {}
        if field is EXACT or field.is_exact:
            limit = 4 * A.dim * A.dim
            for k, c in enumerate(z):
                if abs(c) <= 1e-9:
                    continue
                re = Fraction(c.real).limit_denominator(limit)
                im = Fraction(c.imag).limit_denominator(limit)
                if abs(complex(float(re), float(im)) - c) > 1e-7:
                    raise DecompositionError(
                        f"central idempotent of {A.name} is not rational enough "
                        "for exact mode")
                out[k] = GaussRat(re, im)
        else:
            for k, c in enumerate(z):
                if abs(c) > 1e-9:
                    out[k] = c
        return out

    def __repr__(self):
        return f"IrrepTable({self.algebra.name}: dims {self.dims})"


def irreducibles(A, seed=0, tol=1e-7):
    """Decompose the left regular module into irreducibles.

    The commutant of the left regular action is spanned by right
    multiplications; eigenspaces of a generic commutant element are
    irreducible submodules.  Degenerate draws retry with fresh seeds, capped
    at ``MAX_RETRIES``.
    """
    if A.dim > 256:
        raise DomainError(f"irreducibles: dim {A.dim} over the 256 cutoff")
    reg = regular_module(A)
    n = A.dim
    right_mults = []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        for j in range(n):
            for k, c in A.mult[j][i].items():
                m[k, j] += complex(c)
        right_mults.append(m)

    for attempt in range(MAX_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        C = sum(c * m for c, m in zip(coeffs, right_mults))
        evals, evecs = np.linalg.eig(C)
        order = np.lexsort((evals.imag, evals.real))
        evals, evecs = evals[order], evecs[:, order]
        groups = []
        current = [0]
        for i in range(1, n):
            if abs(evals[i] - evals[current[-1]]) <= GAP_THRESHOLD:
                current.append(i)
            else:
                groups.append(current)
                current = [i]
        groups.append(current)
        try:
            summands = []
            for g in groups:
                basis = np.linalg.qr(evecs[:, g])[0]
                mats = []
                for i in range(n):
                    block = basis.conj().T @ reg.action[i] @ basis
                    resid = reg.action[i] @ basis - basis @ block
                    if np.max(np.abs(resid)) > 1e-6:
                        raise DecompositionError("eigenspace not invariant")
                    mats.append(block)
                summands.append(Module(A, mats, name=f"V{len(summands)}"))
            reps = []
            for s in summands:
                if s.check_module() > 1e-6:
                    raise DecompositionError("summand fails module axioms")
                if intertwiner_space_dim(s, s) != 1:
                    raise DecompositionError("summand not irreducible")
                if not any(modules_isomorphic(s, r) for r in reps):
                    reps.append(s)
            if sum(r.dim * r.dim for r in reps) != n:
                raise DecompositionError("squares of dimensions do not sum up")
            for idx, r in enumerate(reps):
                r.name = f"irr{idx}[{r.dim}]"
            return IrrepTable(A, reps, seed + attempt)
        except DecompositionError:
            continue
    raise DecompositionError(
        f"irreducibles({A.name}): no generic draw within {MAX_RETRIES} retries")


def isotypic_projector(M, table, i):
    """Idempotent intertwiner onto the ``i``-isotypic component of ``M``."""
    z = table.central_idempotents()[i]
    mat = M.act(z)
    sp = Space(M.name, M.dim)

    def col(j):
        out = {}
        for r in range(M.dim):
            c = mat[r, j]
            if abs(c) > 1e-12:
                out[r] = c
        return out

    from .scalars import APPROX
    return LinOp(sp, sp, APPROX, col=col, name=f"P[{i}]")


def artin_wedderburn_blocks(H, table=None, seed=0):
    """Block data for dual(D)-style bimodules: for each irrep ``d`` of the
    algebra ``H``, the projector onto the block is the left coregular action
    of the central idempotent ``z_d``.

    Returns ``(table, projectors, block_bases)`` where ``projectors[i]`` acts
    on ``H.dual()`` coefficient vectors and ``block_bases[i]`` is a list of
    sparse dual elements spanning the block.
    """
    from .actions import coreg_left

    Hd = H.dual()
    table = table or irreducibles(H, seed=seed)
    idem = table.central_idempotents()
    field = H.field
    projectors = []
    bases = []
    for z in idem:
        def col(j, z=z):
            return el_clean(field, coreg_left(H, z, {j: field.one}), 1e-12)

        op = LinOp(Hd.space, Hd.space, field, col=col, name="block")
        projectors.append(op)
        basis = []
        seen_rows = []
        for j in range(Hd.dim):
            v = col(j)
            if not v:
                continue
            row = [complex(v.get(k, field.zero)) for k in range(Hd.dim)]
            stack = seen_rows + [row]
            if np.linalg.matrix_rank(np.array(stack), tol=1e-9) > len(seen_rows):
                seen_rows.append(row)
                basis.append(v)
        bases.append(basis)
    return table, projectors, bases
