"""Operators on the cochain complex of a triple (A, B, epsilon).

The complex: C^n = Hom(A^(x n) (x) B^(x n(n-1)/2), M) with the tensor-matrix
picture from :mod:`sechoch.cochains`.  Implemented here:

* ``differential``  - degree +1, the three-part coboundary (general M),
* ``dot``           - degree 0 cup-style product (M = A),
* ``circle_at``     - insertion of g at row j, with the b-columns/rows of
                      the inserted block multiplied through (M = A),
* ``circle``/``bracket`` - signed insertion sum and its graded commutator,
* ``delta_i``/``delta_bv`` - degree -1 family defined against the bilinear
                      form by pairing with a probe element, plus its signed
                      sum (M = A, form required),
* ``rho1``/``rho2`` - the two partial sums of delta_bv over a dot product,
* ``homotopy_H``    - the explicit homotopy whose coboundary relates
                      circle, delta_bv and rho2 on cocycles,
* ``bv_combination``/``bv_defect`` - the BV-style bracket candidate and its
                      deviation from the circle bracket.

Every sign used anywhere lives in one of the ``sign_*`` helpers below, so
a failing identity localizes to a single exponent.
"""

from __future__ import annotations

from .cochains import (
    Cochain,
    GeneralTensorArgs,
    TensorIndex,
    b_pair_count,
    b_slot,
    basis_args,
    enumerate_indices,
    evaluate,
    product_of_b,
    sub_matrix,
)
from .structures import (
    OperatorDomainError,
    TripleContext,
    act_left,
    act_right,
    apply_epsilon,
    dual_solve,
    form_pair,
    mul_a,
)

# ---------------------------------------------------------------------------
# Sign conventions.  Degrees: f in C^n, g in C^m unless stated otherwise.


def sign_circle(j: int, m: int) -> int:
    """(-1)^((j-1)(m-1)) on the j-th insertion term of the circle sum."""
    return -1 if ((j - 1) * (m - 1)) % 2 else 1


def sign_bracket(n: int, m: int) -> int:
    """(-1)^((n-1)(m-1)) in front of the reversed circle product."""
    return -1 if ((n - 1) * (m - 1)) % 2 else 1


def sign_delta(i: int, n: int) -> int:
    """(-1)^(i n) on the i-th term of the degree-lowering sum C^{n+1} -> C^n."""
    return -1 if (i * n) % 2 else 1


def sign_rho(i: int, n: int, m: int) -> int:
    """(-1)^(i(n+m-1)) on the partial degree-lowering sums of a dot product."""
    return -1 if (i * (n + m - 1)) % 2 else 1


def sign_homotopy(i: int, j: int, n: int, m: int) -> int:
    """(-1)^((j-1)(m-1) + i(n+m) + 1) on the (i, j) homotopy term."""
    return -1 if ((j - 1) * (m - 1) + i * (n + m) + 1) % 2 else 1


def sign_defect(n: int, m: int) -> int:
    """(-1)^((n-1)m), the outer sign of the BV-style combination."""
    return -1 if ((n - 1) * m) % 2 else 1


def sign_defect_inner(n: int) -> int:
    """(-1)^n in front of f . delta(g) inside the BV-style combination."""
    return -1 if n % 2 else 1


def sign_commute_dot(n: int, m: int) -> int:
    """(-1)^(nm), the graded-commutativity sign for the dot product."""
    return -1 if (n * m) % 2 else 1


def _accumulate(ctx, acc, term, sign):
    return acc.add(term, ctx.field) if sign > 0 else acc.sub(term, ctx.field)


# ---------------------------------------------------------------------------
# Differential.


def _delta_terms(ctx: TripleContext, Y: TensorIndex):
    """The terms of the coboundary evaluated on the basis tensor matrix Y.

    Yields ``(sign, action, args)``: ``args`` is the (possibly non-basis)
    tensor matrix handed to the degree-n cochain, and ``action`` is None or
    ``("left", u)``/``("right", u)`` for the boundary terms that multiply
    the value by u in A.
    """
    n1 = Y.n
    n = n1 - 1
    args = basis_args(ctx, Y)

    u = mul_a(ctx, args.a[0],
              apply_epsilon(ctx, product_of_b(ctx, [args.b_at(1, q) for q in range(2, n1 + 1)])))
    yield 1, ("left", u), sub_matrix(args, 1, n)

    for i in range(1, n + 1):
        pivot = mul_a(ctx, apply_epsilon(ctx, args.b_at(i, i + 1)),
                      mul_a(ctx, args.a[i - 1], args.a[i]))
        a_new = [args.a[r - 1] if r < i else (pivot if r == i else args.a[r])
                 for r in range(1, n + 1)]
        b_new = []
        for p in range(1, n + 1):
            for q in range(p + 1, n + 1):
                if q < i:
                    b_new.append(args.b_at(p, q))
                elif q == i:  # merged column
                    b_new.append(product_of_b(ctx, (args.b_at(p, i), args.b_at(p, i + 1))))
                elif p < i:
                    b_new.append(args.b_at(p, q + 1))
                elif p == i:  # merged row
                    b_new.append(product_of_b(ctx, (args.b_at(i, q + 1), args.b_at(i + 1, q + 1))))
                else:
                    b_new.append(args.b_at(p + 1, q + 1))
        yield (-1 if i % 2 else 1), None, GeneralTensorArgs(n, a_new, b_new)

    v = mul_a(ctx, apply_epsilon(ctx, product_of_b(ctx, [args.b_at(p, n1) for p in range(1, n1)])),
              args.a[n1 - 1])
    yield (-1 if (n + 1) % 2 else 1), ("right", v), sub_matrix(args, 0, n)


def differential(ctx: TripleContext, f: Cochain) -> Cochain:
    """Coboundary of f, one degree up.  Works for any coefficient bimodule."""
    if f.degree < 0:
        return Cochain.zero(ctx, 0)
    n1 = f.degree + 1
    field = ctx.field
    dm = ctx.dim_m
    values = []
    for Y in enumerate_indices(ctx, n1):
        acc = [field.zero] * dm
        for sign, action, args in _delta_terms(ctx, Y):
            val = evaluate(ctx, f, args)
            if action is not None:
                side, u = action
                val = act_left(ctx, u, val) if side == "left" else act_right(ctx, val, u)
            if sign > 0:
                acc = [field.add(a, b) for a, b in zip(acc, val)]
            else:
                acc = [field.sub(a, b) for a, b in zip(acc, val)]
        values.append(acc)
    return Cochain(n1, values)


def is_cocycle(ctx: TripleContext, f: Cochain) -> bool:
    return differential(ctx, f).is_zero()


# ---------------------------------------------------------------------------
# Dot product and insertions (coefficients must be A itself).


def _block_ordinal(ctx, X: TensorIndex, start: int, size: int) -> int:
    """Ordinal of the basis sub-block on rows start+1 .. start+size of X."""
    da, db = ctx.dim_a, ctx.dim_b
    o = 0
    for r in range(start, start + size):
        o = o * da + X.a_idx[r]
    for p in range(1, size + 1):
        for q in range(p + 1, size + 1):
            o = o * db + X.b_at(start + p, start + q)
    return o


def dot(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """Product of degree 0: f on the top-left block, g on the bottom-right,
    and the rectangle of b-entries in between pushed through epsilon."""
    ctx.require_coefficients_a("the dot product")
    n, m = f.degree, g.degree
    N = n + m
    values = []
    for X in enumerate_indices(ctx, N):
        o_top = _block_ordinal(ctx, X, 0, n)
        o_bot = _block_ordinal(ctx, X, n, m)
        cross = product_of_b(
            ctx,
            [ctx.basis_vector_b(X.b_at(p, q))
             for p in range(1, n + 1) for q in range(n + 1, N + 1)],
        )
        val = mul_a(ctx, f.values[o_top],
                    mul_a(ctx, apply_epsilon(ctx, cross), g.values[o_bot]))
        values.append(val)
    return Cochain(N, values)


def circle_at(ctx: TripleContext, f: Cochain, g: Cochain, j: int) -> Cochain:
    """Insert g at row j of f.

    On an output tensor matrix, row j holds the value of g on the m x m
    block at rows j..j+m-1; b-entries facing the block are multiplied along
    its column (above) and its row (to the right).
    """
    ctx.require_coefficients_a("circle products")
    n, m = f.degree, g.degree
    if n < 1:
        raise OperatorDomainError("insertion needs the outer cochain in degree >= 1")
    if not 1 <= j <= n:
        raise OperatorDomainError(f"insertion position {j} outside 1..{n}")
    N = n + m - 1
    values = []
    for X in enumerate_indices(ctx, N):
        g_val = g.values[_block_ordinal(ctx, X, j - 1, m)]
        a_new = []
        for p in range(1, n + 1):
            if p < j:
                a_new.append(ctx.basis_vector_a(X.a_idx[p - 1]))
            elif p == j:
                a_new.append(g_val)
            else:
                a_new.append(ctx.basis_vector_a(X.a_idx[p + m - 2]))
        b_new = []
        for p in range(1, n + 1):
            for q in range(p + 1, n + 1):
                if q < j:
                    b_new.append(ctx.basis_vector_b(X.b_at(p, q)))
                elif q == j:
                    b_new.append(product_of_b(
                        ctx, [ctx.basis_vector_b(X.b_at(p, j + k)) for k in range(m)]))
                elif p < j:
                    b_new.append(ctx.basis_vector_b(X.b_at(p, q + m - 1)))
                elif p == j:
                    b_new.append(product_of_b(
                        ctx, [ctx.basis_vector_b(X.b_at(j + k, q + m - 1)) for k in range(m)]))
                else:
                    b_new.append(ctx.basis_vector_b(X.b_at(p + m - 1, q + m - 1)))
        values.append(evaluate(ctx, f, GeneralTensorArgs(n, a_new, b_new)))
    return Cochain(N, values)


def circle(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """Signed sum of all insertions of g into f."""
    n, m = f.degree, g.degree
    if n < 1:
        raise OperatorDomainError("circle needs the outer cochain in degree >= 1")
    acc = Cochain.zero(ctx, n + m - 1)
    for j in range(1, n + 1):
        acc = _accumulate(ctx, acc, circle_at(ctx, f, g, j), sign_circle(j, m))
    return acc


def bracket(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """Graded commutator of the circle product."""
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise OperatorDomainError("bracket needs both degrees >= 1")
    return _accumulate(ctx, circle(ctx, f, g), circle(ctx, g, f), -sign_bracket(n, m))


# ---------------------------------------------------------------------------
# Degree-lowering operators from the bilinear form.


def delta_i(ctx: TripleContext, f: Cochain, i: int) -> Cochain:
    """The i-th degree-lowering map, defined by pairing against a probe.

    For a basis tensor matrix X of degree n and a probe a, the defining
    relation pairs the output with a while f sees the rotated matrix: rows
    i..n of X first, then the probe row (all-unit b-entries), then rows
    1..i-1, with each b-entry between a kept row q >= i and a wrapped row
    p < i transposed to the (q-block, p-block) position.
    """
    ctx.require_coefficients_a("degree-lowering operators")
    ctx.require_form("degree-lowering operators")
    np1 = f.degree
    if np1 < 1:
        raise OperatorDomainError("no degree-lowering map below degree 1")
    if not 1 <= i <= np1:
        raise OperatorDomainError(f"index {i} outside 1..{np1}")
    n = np1 - 1
    probe_row = n - i + 2

    a_src = []  # per new row (1-based): source row of X, or None for the probe
    for r in range(1, np1 + 1):
        if r < probe_row:
            a_src.append(i + r - 1)
        elif r == probe_row:
            a_src.append(None)
        else:
            a_src.append(r - probe_row)
    b_map = []  # (new flat slot, old flat slot)
    for p in range(1, n + 1):
        for q in range(p + 1, n + 1):
            if p >= i:
                u, v = p - i + 1, q - i + 1
            elif q < i:
                u, v = probe_row + p, probe_row + q
            else:
                u, v = q - i + 1, probe_row + p
            b_map.append((b_slot(np1, u, v), b_slot(n, p, q)))

    unit_a = list(ctx.A.unit)
    unit_b = list(ctx.B.unit)
    basis_a = [ctx.basis_vector_a(k) for k in range(ctx.dim_a)]
    basis_b = [ctx.basis_vector_b(k) for k in range(ctx.dim_b)]

    values = []
    for X in enumerate_indices(ctx, n):
        a_new = [None] * np1
        probe_pos = None
        for r, src in enumerate(a_src):
            if src is None:
                probe_pos = r
            else:
                a_new[r] = basis_a[X.a_idx[src - 1]]
        b_new = [unit_b] * b_pair_count(np1)
        for new_slot, old_slot in b_map:
            b_new[new_slot] = basis_b[X.b_idx[old_slot]]
        args = GeneralTensorArgs(np1, a_new, b_new)
        phi = []
        for probe in basis_a:
            a_new[probe_pos] = probe
            phi.append(form_pair(ctx, evaluate(ctx, f, args), unit_a))
        values.append(dual_solve(ctx, phi))
    return Cochain(n, values)


def delta_bv(ctx: TripleContext, f: Cochain) -> Cochain:
    """Signed sum of the degree-lowering maps, C^{n+1} -> C^n."""
    np1 = f.degree
    if np1 < 1:
        raise OperatorDomainError("no degree-lowering operator below degree 1")
    n = np1 - 1
    acc = Cochain.zero(ctx, n)
    for i in range(1, np1 + 1):
        acc = _accumulate(ctx, acc, delta_i(ctx, f, i), sign_delta(i, n))
    return acc


def rho1(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """Partial degree-lowering sum of f.g over indices 1..m."""
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise OperatorDomainError("rho operators need both degrees >= 1")
    fg = dot(ctx, f, g)
    acc = Cochain.zero(ctx, n + m - 1)
    for i in range(1, m + 1):
        acc = _accumulate(ctx, acc, delta_i(ctx, fg, i), sign_rho(i, n, m))
    return acc


def rho2(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """Partial degree-lowering sum of f.g over indices m+1..m+n."""
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise OperatorDomainError("rho operators need both degrees >= 1")
    fg = dot(ctx, f, g)
    acc = Cochain.zero(ctx, n + m - 1)
    for i in range(m + 1, m + n + 1):
        acc = _accumulate(ctx, acc, delta_i(ctx, fg, i), sign_rho(i, n, m))
    return acc


def homotopy_H(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """The signed double sum of degree-lowered insertions (zero when n <= 1)."""
    n, m = f.degree, g.degree
    if n + m < 2:
        raise OperatorDomainError("homotopy needs total degree >= 2")
    acc = Cochain.zero(ctx, n + m - 2)
    for j in range(1, n):
        fog = circle_at(ctx, f, g, j)
        for i in range(1, n - j + 1):
            acc = _accumulate(ctx, acc, delta_i(ctx, fog, i), sign_homotopy(i, j, n, m))
    return acc


def bv_combination(ctx: TripleContext, f: Cochain, g: Cochain, variant: bool = False) -> Cochain:
    """(-1)^((n-1)m) (delta(f).g + (-1)^n f.delta(g) - delta(f.g)).

    With ``variant=True`` the middle term is replaced by
    (-1)^(n(m-1)) delta(g).f, its graded-commutativity rewrite; the two
    agree on cohomology but not necessarily as cochains.
    """
    n, m = f.degree, g.degree
    if n < 1 or m < 1:
        raise OperatorDomainError("the BV combination needs both degrees >= 1")
    field = ctx.field
    df, dg = delta_bv(ctx, f), delta_bv(ctx, g)
    if variant:
        middle = dot(ctx, dg, f)
        middle_sign = sign_defect_inner(n) * (-1 if (n * (m - 1)) % 2 else 1)
    else:
        middle = dot(ctx, f, dg)
        middle_sign = sign_defect_inner(n)
    acc = dot(ctx, df, g)
    acc = _accumulate(ctx, acc, middle, middle_sign)
    acc = acc.sub(delta_bv(ctx, dot(ctx, f, g)), field)
    outer = sign_defect(n, m)
    return acc if outer > 0 else acc.neg(field)


def bv_defect(ctx: TripleContext, f: Cochain, g: Cochain) -> Cochain:
    """Bracket minus the BV-style combination; a coboundary on cocycles."""
    return bracket(ctx, f, g).sub(bv_combination(ctx, f, g), ctx.field)
