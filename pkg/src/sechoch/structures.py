"""Validated algebraic data for a triple (A, B, epsilon).

A is a finite-dimensional unital algebra given by structure constants,
B a commutative one, and epsilon : B -> A an algebra map with central
image.  An optional symmetric non-degenerate invariant bilinear form on A
(as a Gram matrix) powers the degree-lowering operators; an optional
bimodule M supplies coefficients, defaulting to A acting on itself by
multiplication.

Validation checks every axiom on basis elements and reports *all*
violations at once, each with the witnessing basis indices:

* associativity and two-sided unit for A and B,
* commutativity of B,
* epsilon is unital and multiplicative with central image,
* the form is symmetric, invertible and associative-invariant,
* M is a unital bimodule on which epsilon(B) acts the same on both sides.

Elements of A, B and M are plain coordinate lists over ``ctx.field``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Literal, Optional, Sequence

from .linalg import Field, Matrix, kernel_basis, solve_linear


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str
    witness: tuple
    detail: str

    def __str__(self):
        return f"{self.axiom} at {self.witness}: {self.detail}"


class TripleValidationError(ValueError):
    """Raised with the complete list of violated axioms."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"invalid triple ({len(self.violations)} violation(s)):\n{lines}")


class OperatorDomainError(ValueError):
    """An operator was applied outside its domain (missing form, M != A, bad degree)."""


@dataclass(frozen=True)
class AlgebraSpec:
    dim: int
    basis_labels: tuple
    structure: tuple  # structure[i][j] = coordinates of e_i * e_j
    unit: tuple


@dataclass(frozen=True)
class MorphismSpec:
    matrix: tuple  # dim(A) x dim(B), column j = epsilon(e_j) in the A basis


@dataclass(frozen=True)
class BilinearFormSpec:
    gram: Matrix
    gram_inverse: Matrix


@dataclass(frozen=True)
class BimoduleSpec:
    dim: int
    left_action: tuple  # per A-basis index, a dim(M) x dim(M) Matrix
    right_action: tuple


@dataclass
class TripleContext:
    field: Field
    A: AlgebraSpec
    B: AlgebraSpec
    epsilon: MorphismSpec
    form: Optional[BilinearFormSpec]
    M: BimoduleSpec
    coefficients_are_A: bool
    name: str = ""
    cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def dim_a(self):
        return self.A.dim

    @property
    def dim_b(self):
        return self.B.dim

    @property
    def dim_m(self):
        return self.M.dim

    def basis_vector_a(self, i):
        v = [self.field.zero] * self.A.dim
        v[i] = self.field.one
        return v

    def basis_vector_b(self, i):
        v = [self.field.zero] * self.B.dim
        v[i] = self.field.one
        return v

    def require_form(self, what: str) -> BilinearFormSpec:
        if self.form is None:
            raise OperatorDomainError(f"{what} requires a bilinear form, but none is configured")
        return self.form

    def require_coefficients_a(self, what: str):
        if not self.coefficients_are_A:
            raise OperatorDomainError(f"{what} requires coefficients M = A")


def _mul_structure(field, structure, dim, x, y):
    out = [field.zero] * dim
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = structure[i]
        for j, yj in enumerate(y):
            if not yj:
                continue
            c = field.mul(xi, yj)
            for k, s in enumerate(row[j]):
                if s:
                    out[k] = field.add(out[k], field.mul(c, s))
    return out


def mul_a(ctx: TripleContext, x, y):
    """Product in A of two coordinate vectors."""
    return _mul_structure(ctx.field, ctx.A.structure, ctx.A.dim, x, y)


def mul_b(ctx: TripleContext, x, y):
    return _mul_structure(ctx.field, ctx.B.structure, ctx.B.dim, x, y)


def _act(field, matrices, u, m):
    """Apply sum_k u_k * matrices[k] to the coordinate vector m."""
    dim = len(m)
    out = [field.zero] * dim
    for k, uk in enumerate(u):
        if not uk:
            continue
        rows = matrices[k].rows
        for r in range(dim):
            s = out[r]
            for c, mc in enumerate(m):
                if mc:
                    a = rows[r][c]
                    if a:
                        s = field.add(s, field.mul(field.mul(uk, a), mc))
            out[r] = s
    return out


def act_left(ctx: TripleContext, u, m):
    """Left action of u in A on m in M."""
    return _act(ctx.field, ctx.M.left_action, u, m)


def act_right(ctx: TripleContext, m, u):
    """Right action of u in A on m in M."""
    return _act(ctx.field, ctx.M.right_action, u, m)


def action_matrix(ctx: TripleContext, u, side: Literal["left", "right"]):
    """Matrix of the (left or right) action of u on M, as raw rows."""
    field = ctx.field
    mats = ctx.M.left_action if side == "left" else ctx.M.right_action
    dim = ctx.M.dim
    rows = [[field.zero] * dim for _ in range(dim)]
    for k, uk in enumerate(u):
        if not uk:
            continue
        mk = mats[k].rows
        for r in range(dim):
            src = mk[r]
            dst = rows[r]
            for c in range(dim):
                if src[c]:
                    dst[c] = field.add(dst[c], field.mul(uk, src[c]))
    return rows


def multiply(ctx: TripleContext, side: str, x, y):
    """Bilinear extension of the structure tables.

    ``side`` is one of ``"A"``, ``"B"``, ``"M-left"`` (a*m) or ``"M-right"``
    (m*a).
    """
    if side == "A":
        _check_len(x, ctx.A.dim, "A"), _check_len(y, ctx.A.dim, "A")
        return mul_a(ctx, x, y)
    if side == "B":
        _check_len(x, ctx.B.dim, "B"), _check_len(y, ctx.B.dim, "B")
        return mul_b(ctx, x, y)
    if side == "M-left":
        _check_len(x, ctx.A.dim, "A"), _check_len(y, ctx.M.dim, "M")
        return act_left(ctx, x, y)
    if side == "M-right":
        _check_len(x, ctx.M.dim, "M"), _check_len(y, ctx.A.dim, "A")
        return act_right(ctx, x, y)
    raise ValueError(f"unknown side {side!r}")


def _check_len(v, n, what):
    if len(v) != n:
        raise ValueError(f"coordinate vector of length {len(v)} is not in {what} (dim {n})")


def apply_epsilon(ctx: TripleContext, b):
    """epsilon(b) in A-coordinates."""
    _check_len(b, ctx.B.dim, "B")
    field = ctx.field
    out = [field.zero] * ctx.A.dim
    for j, bj in enumerate(b):
        if not bj:
            continue
        for i in range(ctx.A.dim):
            e = ctx.epsilon.matrix[i][j]
            if e:
                out[i] = field.add(out[i], field.mul(e, bj))
    return out


def form_pair(ctx: TripleContext, a, a2):
    """<a, a2> through the Gram matrix."""
    form = ctx.require_form("form_pair")
    _check_len(a, ctx.A.dim, "A"), _check_len(a2, ctx.A.dim, "A")
    field = ctx.field
    s = field.zero
    for i, ai in enumerate(a):
        if not ai:
            continue
        row = form.gram.rows[i]
        for j, aj in enumerate(a2):
            if aj and row[j]:
                s = field.add(s, field.mul(field.mul(ai, row[j]), aj))
    return s


def dual_solve(ctx: TripleContext, phi):
    """The unique t in A with <t, e_k> = phi_k for every basis index k.

    Since the Gram matrix G is symmetric, <t, e_k> = (G t)_k, so
    t = G^{-1} phi.
    """
    form = ctx.require_form("dual_solve")
    _check_len(phi, ctx.A.dim, "A")
    return form.gram_inverse.mul_vec(phi)


def _vec_eq(field, x, y):
    return all(field.sub(a, b) == field.zero for a, b in zip(x, y))


def _fmt(field, v):
    return "(" + ", ".join(str(x) for x in v) + ")"


def _check_algebra(field, alg: AlgebraSpec, label, out):
    dim = alg.dim
    mul = lambda x, y: _mul_structure(field, alg.structure, dim, x, y)
    basis = [[field.one if t == i else field.zero for t in range(dim)] for i in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                lhs = mul(list(alg.structure[i][j]), basis[k])
                rhs = mul(basis[i], list(alg.structure[j][k]))
                if not _vec_eq(field, lhs, rhs):
                    out.append(AxiomViolation(
                        f"{label}.associativity", (i, j, k),
                        f"(e{i}*e{j})*e{k} = {_fmt(field, lhs)} but e{i}*(e{j}*e{k}) = {_fmt(field, rhs)}"))
    for i in range(dim):
        left = mul(list(alg.unit), basis[i])
        right = mul(basis[i], list(alg.unit))
        if not _vec_eq(field, left, basis[i]):
            out.append(AxiomViolation(f"{label}.unit", (i,), f"1*e{i} = {_fmt(field, left)}"))
        if not _vec_eq(field, right, basis[i]):
            out.append(AxiomViolation(f"{label}.unit", (i,), f"e{i}*1 = {_fmt(field, right)}"))


def validate_triple(
    field: Field,
    A: AlgebraSpec,
    B: AlgebraSpec,
    epsilon: MorphismSpec,
    gram: Optional[Matrix] = None,
    M: Optional[BimoduleSpec] = None,
    name: str = "",
) -> TripleContext:
    """Check every axiom and return a ready-to-use context.

    Raises :class:`TripleValidationError` carrying one named violation per
    failed axiom instance.  The Gram inverse is computed and cached here;
    the form itself is optional and only required by the degree-lowering
    operators.
    """
    out = []
    _check_algebra(field, A, "A", out)
    _check_algebra(field, B, "B", out)

    da, db = A.dim, B.dim
    basis_a = [[field.one if t == i else field.zero for t in range(da)] for i in range(da)]
    basis_b = [[field.one if t == i else field.zero for t in range(db)] for i in range(db)]
    mulA = lambda x, y: _mul_structure(field, A.structure, da, x, y)
    mulB = lambda x, y: _mul_structure(field, B.structure, db, x, y)

    for i in range(db):
        for j in range(db):
            if not _vec_eq(field, list(B.structure[i][j]), list(B.structure[j][i])):
                out.append(AxiomViolation(
                    "B.commutativity", (i, j),
                    f"e{i}*e{j} = {_fmt(field, B.structure[i][j])} but e{j}*e{i} = {_fmt(field, B.structure[j][i])}"))

    eps = lambda b: [
        _dot_col(field, epsilon.matrix, b, r, da) for r in range(da)
    ]
    eps_basis = [eps(basis_b[j]) for j in range(db)]

    if not _vec_eq(field, eps(list(B.unit)), list(A.unit)):
        out.append(AxiomViolation("epsilon.unit", (), f"epsilon(1_B) = {_fmt(field, eps(list(B.unit)))} != 1_A"))
    for i in range(db):
        for j in range(db):
            lhs = eps(mulB(basis_b[i], basis_b[j]))
            rhs = mulA(eps_basis[i], eps_basis[j])
            if not _vec_eq(field, lhs, rhs):
                out.append(AxiomViolation(
                    "epsilon.multiplicative", (i, j),
                    f"epsilon(e{i}e{j}) = {_fmt(field, lhs)} but epsilon(e{i})epsilon(e{j}) = {_fmt(field, rhs)}"))
    for j in range(db):
        for i in range(da):
            lhs = mulA(eps_basis[j], basis_a[i])
            rhs = mulA(basis_a[i], eps_basis[j])
            if not _vec_eq(field, lhs, rhs):
                out.append(AxiomViolation(
                    "epsilon.centrality", (j, i),
                    f"epsilon(e{j}) does not commute with e{i} of A"))

    form = None
    if gram is not None:
        for i in range(da):
            for j in range(da):
                if field.sub(gram.rows[i][j], gram.rows[j][i]) != field.zero:
                    out.append(AxiomViolation(
                        "form.symmetry", (i, j),
                        f"<e{i},e{j}> = {gram.rows[i][j]} but <e{j},e{i}> = {gram.rows[j][i]}"))
        for i in range(da):
            for j in range(da):
                for k in range(da):
                    # <e_i e_j, e_k> vs <e_i, e_j e_k>
                    lhs = field.zero
                    for t, c in enumerate(A.structure[i][j]):
                        if c:
                            lhs = field.add(lhs, field.mul(c, gram.rows[t][k]))
                    rhs = field.zero
                    for t, c in enumerate(A.structure[j][k]):
                        if c:
                            rhs = field.add(rhs, field.mul(gram.rows[i][t], c))
                    if field.sub(lhs, rhs) != field.zero:
                        out.append(AxiomViolation(
                            "form.invariance", (i, j, k),
                            f"<e{i}e{j},e{k}> = {lhs} but <e{i},e{j}e{k}> = {rhs}"))
        if kernel_basis(gram):
            out.append(AxiomViolation("form.nondegenerate", (), "Gram matrix is singular"))
        else:
            inv_cols = []
            ident = Matrix.identity(field, da)
            for j in range(da):
                col = solve_linear(gram, [ident.rows[i][j] for i in range(da)])
                inv_cols.append(col)
            inv_rows = [[inv_cols[j][i] for j in range(da)] for i in range(da)]
            form = BilinearFormSpec(gram=gram, gram_inverse=Matrix(field, inv_rows))

    coefficients_are_A = M is None
    if M is None:
        left = tuple(
            Matrix(field, [[A.structure[i][c][r] for c in range(da)] for r in range(da)])
            for i in range(da)
        )
        right = tuple(
            Matrix(field, [[A.structure[c][i][r] for c in range(da)] for r in range(da)])
            for i in range(da)
        )
        M = BimoduleSpec(dim=da, left_action=left, right_action=right)
        # By construction this is the regular bimodule; its axioms are the
        # (already checked) associativity and unit laws of A.
    else:
        dm = M.dim
        unit_left = _combine(field, M.left_action, list(A.unit), dm)
        unit_right = _combine(field, M.right_action, list(A.unit), dm)
        ident = Matrix.identity(field, dm)
        if unit_left != ident:
            out.append(AxiomViolation("M.unital", ("left",), "1_A does not act as identity on the left"))
        if unit_right != ident:
            out.append(AxiomViolation("M.unital", ("right",), "1_A does not act as identity on the right"))
        for i in range(da):
            for j in range(da):
                lhs = M.left_action[i].matmul(M.left_action[j])
                rhs = _combine(field, M.left_action, list(A.structure[i][j]), dm)
                if lhs != rhs:
                    out.append(AxiomViolation("M.left_action", (i, j), "e_i(e_j m) != (e_i e_j)m"))
                lhs = M.right_action[j].matmul(M.right_action[i])
                rhs = _combine(field, M.right_action, list(A.structure[i][j]), dm)
                if lhs != rhs:
                    out.append(AxiomViolation("M.right_action", (i, j), "(m e_i)e_j != m(e_i e_j)"))
                lhs = M.right_action[j].matmul(M.left_action[i])
                rhs = M.left_action[i].matmul(M.right_action[j])
                if lhs != rhs:
                    out.append(AxiomViolation("M.commuting_actions", (i, j), "(e_i m)e_j != e_i(m e_j)"))
        for j in range(db):
            lm = _combine(field, M.left_action, eps_basis[j], dm)
            rm = _combine(field, M.right_action, eps_basis[j], dm)
            if lm != rm:
                out.append(AxiomViolation(
                    "M.epsilon_symmetric", (j,),
                    f"epsilon(e{j}) acts differently on the two sides of M"))

    if out:
        raise TripleValidationError(out)

    return TripleContext(
        field=field, A=A, B=B, epsilon=epsilon, form=form, M=M,
        coefficients_are_A=coefficients_are_A, name=name,
    )


def _dot_col(field, matrix, vec, r, nrows):
    s = field.zero
    for j, vj in enumerate(vec):
        if vj:
            e = matrix[r][j]
            if e:
                s = field.add(s, field.mul(e, vj))
    return s


def _combine(field, matrices, coeffs, dim) -> Matrix:
    rows = [[field.zero] * dim for _ in range(dim)]
    for k, ck in enumerate(coeffs):
        if not ck:
            continue
        mk = matrices[k].rows
        for r in range(dim):
            for c in range(dim):
                if mk[r][c]:
                    rows[r][c] = field.add(rows[r][c], field.mul(ck, mk[r][c]))
    return Matrix(field, rows)
