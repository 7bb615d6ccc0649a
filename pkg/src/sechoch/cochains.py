"""Tensor-matrix indexing and cochain tables.

A degree-n cochain is a multilinear map on A^(x n) (x) B^(x n(n-1)/2),
whose arguments we picture as an upper-triangular "tensor matrix": entries
a_1..a_n on the diagonal and b_{p,q} in B above it, 1 <= p < q <= n.  The
b-positions are flattened row-major: (1,2),(1,3),...,(1,n),(2,3),...,(n-1,n).

Basis tensor matrices are enumerated mixed-radix over the concatenated
digits (a_1,...,a_n, b_{1,2},...,b_{n-1,n}) with the *last* digit varying
fastest.  Cochain values are stored densely in that order, one dim(M)
coordinate vector per basis index.

Degree 0 has the one-point domain (the empty tensor); degree -1 denotes
the zero space below it, with an empty table (only used so that membership
in the image of the degree -1 differential makes sense).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional

from .structures import TripleContext, mul_b


def b_pair_count(n: int) -> int:
    return n * (n - 1) // 2


def b_slot(n: int, p: int, q: int) -> int:
    """Flat slot of the b-entry at 1-based position (p, q), p < q <= n."""
    if not (1 <= p < q <= n):
        raise ValueError(f"bad b position ({p},{q}) for degree {n}")
    return (p - 1) * n - p * (p - 1) // 2 + (q - p - 1)


def domain_dimension(ctx: TripleContext, n: int) -> int:
    """Number of basis tensor matrices in degree n."""
    if n < 0:
        return 0
    return ctx.dim_a ** n * ctx.dim_b ** b_pair_count(n)


@dataclass(frozen=True)
class TensorIndex:
    """One basis tensor matrix: n A-basis digits plus the b-digit triangle."""

    n: int
    a_idx: tuple
    b_idx: tuple

    def __post_init__(self):
        if len(self.a_idx) != self.n or len(self.b_idx) != b_pair_count(self.n):
            raise ValueError("tensor index of inconsistent shape")

    def b_at(self, p: int, q: int) -> int:
        return self.b_idx[b_slot(self.n, p, q)]


def index_to_ordinal(ctx: TripleContext, idx: TensorIndex) -> int:
    o = 0
    da, db = ctx.dim_a, ctx.dim_b
    for d in idx.a_idx:
        o = o * da + d
    for d in idx.b_idx:
        o = o * db + d
    return o


def ordinal_to_index(ctx: TripleContext, n: int, o: int) -> TensorIndex:
    da, db = ctx.dim_a, ctx.dim_b
    nb = b_pair_count(n)
    b_rev = []
    for _ in range(nb):
        o, d = divmod(o, db)
        b_rev.append(d)
    a_rev = []
    for _ in range(n):
        o, d = divmod(o, da)
        a_rev.append(d)
    if o:
        raise ValueError("ordinal out of range")
    return TensorIndex(n, tuple(reversed(a_rev)), tuple(reversed(b_rev)))


def enumerate_indices(ctx: TripleContext, n: int) -> Iterator[TensorIndex]:
    """All basis tensor matrices of degree n in canonical order."""
    if n < 0:
        return
    da, db = ctx.dim_a, ctx.dim_b
    nb = b_pair_count(n)
    a_idx = [0] * n
    b_idx = [0] * nb
    radices = [da] * n + [db] * nb
    digits = a_idx + b_idx
    total = domain_dimension(ctx, n)
    for _ in range(total):
        yield TensorIndex(n, tuple(digits[:n]), tuple(digits[n:]))
        for pos in range(len(digits) - 1, -1, -1):
            digits[pos] += 1
            if digits[pos] < radices[pos]:
                break
            digits[pos] = 0


@dataclass
class GeneralTensorArgs:
    """A tensor matrix with arbitrary (coordinate-vector) entries."""

    n: int
    a: list  # n coordinate vectors in A
    b: list  # b_pair_count(n) coordinate vectors in B, canonical slot order

    def b_at(self, p: int, q: int):
        return self.b[b_slot(self.n, p, q)]


def basis_args(ctx: TripleContext, idx: TensorIndex) -> GeneralTensorArgs:
    return GeneralTensorArgs(
        n=idx.n,
        a=[ctx.basis_vector_a(i) for i in idx.a_idx],
        b=[ctx.basis_vector_b(i) for i in idx.b_idx],
    )


def sub_matrix(args: GeneralTensorArgs, k: int, p: int) -> GeneralTensorArgs:
    """The p x p block on rows k+1 .. k+p of an n-row tensor matrix."""
    n = args.n
    if k < 0 or p < 0 or k + p > n:
        raise ValueError(f"rows {k + 1}..{k + p} do not fit in degree {n}")
    a = args.a[k:k + p]
    b = []
    for u in range(1, p + 1):
        for v in range(u + 1, p + 1):
            b.append(args.b[b_slot(n, k + u, k + v)])
    return GeneralTensorArgs(n=p, a=a, b=b)


class Cochain:
    """Degree plus a dense table of M-coordinate values in canonical order."""

    __slots__ = ("degree", "values")

    def __init__(self, degree: int, values: List[list]):
        self.degree = degree
        self.values = values

    @classmethod
    def zero(cls, ctx: TripleContext, n: int) -> "Cochain":
        z = ctx.field.zero
        dm = ctx.dim_m
        return cls(n, [[z] * dm for _ in range(domain_dimension(ctx, n))])

    @classmethod
    def from_function(cls, ctx: TripleContext, n: int,
                      fn: Callable[[TensorIndex], list]) -> "Cochain":
        return cls(n, [fn(idx) for idx in enumerate_indices(ctx, n)])

    def value_at(self, ctx: TripleContext, idx: TensorIndex):
        return self.values[index_to_ordinal(ctx, idx)]

    def to_vector(self) -> list:
        return [x for val in self.values for x in val]

    @classmethod
    def from_vector(cls, ctx: TripleContext, n: int, vec) -> "Cochain":
        dm = ctx.dim_m
        dom = domain_dimension(ctx, n)
        if len(vec) != dom * dm:
            raise ValueError(f"vector of length {len(vec)} is not a degree-{n} cochain")
        return cls(n, [list(vec[i * dm:(i + 1) * dm]) for i in range(dom)])

    def is_zero(self) -> bool:
        return all(not x for val in self.values for x in val)

    def support_size(self) -> int:
        """Number of nonzero coordinates."""
        return sum(1 for val in self.values for x in val if x)

    def _binary(self, other, op):
        if not isinstance(other, Cochain) or other.degree != self.degree:
            raise ValueError("cochain arithmetic requires equal degrees")
        return Cochain(self.degree,
                       [[op(a, b) for a, b in zip(u, v)]
                        for u, v in zip(self.values, other.values)])

    def add(self, other: "Cochain", field) -> "Cochain":
        return self._binary(other, field.add)

    def sub(self, other: "Cochain", field) -> "Cochain":
        return self._binary(other, field.sub)

    def neg(self, field) -> "Cochain":
        return Cochain(self.degree, [[field.neg(x) for x in val] for val in self.values])

    def scale(self, c, field) -> "Cochain":
        return Cochain(self.degree, [[field.mul(c, x) for x in val] for val in self.values])

    def __eq__(self, other):
        return (isinstance(other, Cochain)
                and self.degree == other.degree
                and self.values == other.values)

    def __repr__(self):
        return f"Cochain(degree={self.degree}, entries={len(self.values)})"


def first_mismatch(f: Cochain, g: Cochain) -> Optional[tuple]:
    """First differing coordinate (ordinal, m_index, lhs, rhs), or None."""
    if f.degree != g.degree:
        return (-1, -1, f.degree, g.degree)
    for o, (u, v) in enumerate(zip(f.values, g.values)):
        for t, (a, b) in enumerate(zip(u, v)):
            if a != b:
                return (o, t, a, b)
    return None


def expand_args(ctx: TripleContext, args: GeneralTensorArgs):
    """Multilinear expansion into [(basis ordinal, coefficient)] pairs."""
    field = ctx.field
    da, db = ctx.dim_a, ctx.dim_b
    terms = [(0, field.one)]
    for vec in args.a:
        new = []
        for o, c in terms:
            base = o * da
            for i, coef in enumerate(vec):
                if coef:
                    new.append((base + i, field.mul(c, coef)))
        terms = new
        if not terms:
            return terms
    for vec in args.b:
        new = []
        for o, c in terms:
            base = o * db
            for i, coef in enumerate(vec):
                if coef:
                    new.append((base + i, field.mul(c, coef)))
        terms = new
        if not terms:
            return terms
    return terms


def evaluate(ctx: TripleContext, f: Cochain, args: GeneralTensorArgs):
    """Value of f on a general tensor matrix, by full multilinear expansion."""
    if args.n != f.degree:
        raise ValueError(f"degree-{f.degree} cochain applied to a {args.n}-row tensor matrix")
    field = ctx.field
    dm = ctx.dim_m
    acc = [field.zero] * dm
    for o, c in expand_args(ctx, args):
        val = f.values[o]
        for t in range(dm):
            if val[t]:
                acc[t] = field.add(acc[t], field.mul(c, val[t]))
    return acc


#: Coefficients of random cochains and cocycles are drawn uniformly from
#: this integer range through :class:`random.Random` (Mersenne Twister),
#: so a seed pins the full table.
RANDOM_COEFF_RANGE = (-3, 3)


def random_cochain(ctx: TripleContext, n: int, seed) -> Cochain:
    """Deterministic pseudo-random cochain; equal seeds give equal tables.

    Coordinates are drawn in canonical order from ``random.Random(seed)``
    with integer values in ``RANDOM_COEFF_RANGE``, mapped into the field.
    """
    rng = random.Random(seed)
    lo, hi = RANDOM_COEFF_RANGE
    field = ctx.field
    dm = ctx.dim_m
    return Cochain(n, [
        [field.from_int(rng.randrange(lo, hi + 1)) for _ in range(dm)]
        for _ in range(domain_dimension(ctx, n))
    ])


def product_of_b(ctx: TripleContext, vecs) -> list:
    """Product in B of a sequence of coordinate vectors (empty -> 1_B)."""
    out = list(ctx.B.unit)
    for v in vecs:
        out = mul_b(ctx, out, v)
    return out
