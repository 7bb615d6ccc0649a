"""Differential matrices, cohomology dimensions and coboundary queries.

Cochain coordinates flatten the dense tables: basis tensor matrix first
(canonical order), then the M coordinate, so C^n has dimension
``domain_dimension(n) * dim(M)``.  Differential matrices are assembled
column-sparse straight from the term expansion of the coboundary; dense
copies exist behind a size guard for callers that want a plain matrix.

Degrees are capped by two configurable resource bounds: the number of
target coordinates of a differential and the dense entry count of its
matrix.  Exceeding either raises :class:`ResourceCapError`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .cochains import (
    RANDOM_COEFF_RANGE,
    Cochain,
    domain_dimension,
    enumerate_indices,
    expand_args,
)
from .linalg import Matrix, SparseColumns
from .operators import _delta_terms, bracket, bv_combination, differential
from .structures import OperatorDomainError, TripleContext, action_matrix

#: Default bound on domain_dimension(n+1) * dim(M) when assembling a
#: differential.
MAX_COORDINATES = 100_000

#: Default bound on rows * columns when a dense differential matrix is
#: materialized.
MAX_DENSE_ENTRIES = 4_000_000


class ResourceCapError(RuntimeError):
    """A requested degree exceeds the configured resource bounds."""


class NotACocycleError(ValueError):
    def __init__(self, which: str, nonzero: int):
        self.which = which
        self.nonzero = nonzero
        super().__init__(f"{which} is not a cocycle: its coboundary has {nonzero} nonzero coordinate(s)")


def check_coordinate_cap(ctx: TripleContext, n: int, cap: Optional[int] = None):
    """Refuse differentials whose target C^{n+1} has too many coordinates."""
    cap = MAX_COORDINATES if cap is None else cap
    coords = domain_dimension(ctx, n + 1) * ctx.dim_m
    if coords > cap:
        raise ResourceCapError(
            f"degree {n}: target has {coords} coordinates, over the cap of {cap}")


def differential_sparse(ctx: TripleContext, n: int, cap: Optional[int] = None) -> SparseColumns:
    """Column-sparse matrix of the degree-n coboundary (cached on the context)."""
    key = ("diff", n)
    cached = ctx.cache.get(key)
    if cached is not None:
        return cached
    check_coordinate_cap(ctx, n, cap)
    field = ctx.field
    dm = ctx.dim_m
    nrows = domain_dimension(ctx, n + 1) * dm
    ncols = domain_dimension(ctx, n) * dm
    out = SparseColumns(field, nrows, ncols)
    if n < 0:
        ctx.cache[key] = out
        return out
    for oy, Y in enumerate(enumerate_indices(ctx, n + 1)):
        base_row = oy * dm
        for sign, action, args in _delta_terms(ctx, Y):
            pairs = expand_args(ctx, args)
            if action is None:
                for ox, c in pairs:
                    v = c if sign > 0 else field.neg(c)
                    col = ox * dm
                    for t in range(dm):
                        out.add(base_row + t, col + t, v)
            else:
                side, u = action
                amat = action_matrix(ctx, u, "left" if side == "left" else "right")
                for ox, c in pairs:
                    v = c if sign > 0 else field.neg(c)
                    col = ox * dm
                    for r in range(dm):
                        row_r = amat[r]
                        for t in range(dm):
                            if row_r[t]:
                                out.add(base_row + r, col + t, field.mul(v, row_r[t]))
    ctx.cache[key] = out
    return out


def differential_matrix(ctx: TripleContext, n: int,
                        cap: Optional[int] = None,
                        dense_cap: Optional[int] = None) -> Matrix:
    """Dense matrix of the degree-n coboundary, C^n -> C^{n+1} coordinates."""
    sp = differential_sparse(ctx, n, cap)
    dense_cap = MAX_DENSE_ENTRIES if dense_cap is None else dense_cap
    if sp.nrows * sp.ncols > dense_cap:
        raise ResourceCapError(
            f"degree {n}: dense matrix would have {sp.nrows * sp.ncols} entries, "
            f"over the cap of {dense_cap}")
    return sp.to_matrix()


@dataclass(frozen=True)
class DegreeDims:
    degree: int
    dim_c: int
    dim_z: int
    dim_b: int
    dim_h: int


@dataclass(frozen=True)
class CohomologyReport:
    triple: str
    field: dict
    max_degree: int
    rows: tuple

    def as_json_obj(self) -> dict:
        return {
            "triple": self.triple,
            "field": self.field,
            "max_degree": self.max_degree,
            "table": [
                {"degree": r.degree, "dim_C": r.dim_c, "dim_Z": r.dim_z,
                 "dim_B": r.dim_b, "dim_H": r.dim_h}
                for r in self.rows
            ],
        }


def cohomology_dims(ctx: TripleContext, max_degree: int,
                    cap: Optional[int] = None) -> CohomologyReport:
    """Kernel/image/quotient dimensions per degree, 0..max_degree."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    ranks = {}
    for n in range(-1, max_degree + 1):
        key = ("rank", n)
        if key not in ctx.cache:
            ctx.cache[key] = differential_sparse(ctx, n, cap).rank()
        ranks[n] = ctx.cache[key]
    rows = []
    for n in range(max_degree + 1):
        dim_c = domain_dimension(ctx, n) * ctx.dim_m
        dim_z = dim_c - ranks[n]
        dim_b = ranks[n - 1]
        dim_h = dim_z - dim_b
        if dim_h < 0 or dim_b > dim_z:
            raise AssertionError(f"inconsistent dimensions at degree {n} - differential is broken")
        rows.append(DegreeDims(n, dim_c, dim_z, dim_b, dim_h))
    return CohomologyReport(
        triple=ctx.name, field=ctx.field.to_json(), max_degree=max_degree, rows=tuple(rows))


def is_coboundary(ctx: TripleContext, z: Cochain,
                  cap: Optional[int] = None) -> Optional[Cochain]:
    """A witness w with coboundary(w) = z, or None.

    Degree 0 uses the zero space below the complex, so only the zero
    cochain is a coboundary there (its witness is the empty degree -1
    cochain).
    """
    N = z.degree
    sp = differential_sparse(ctx, N - 1, cap)
    x = sp.solve(z.to_vector())
    if x is None:
        return None
    return Cochain.from_vector(ctx, N - 1, x) if N >= 1 else Cochain(-1, [])


def kernel_cochains(ctx: TripleContext, n: int, cap: Optional[int] = None):
    """Basis of the degree-n cocycles, as cochains (cached)."""
    key = ("kernel", n)
    cached = ctx.cache.get(key)
    if cached is None:
        basis = differential_sparse(ctx, n, cap).kernel_basis()
        cached = tuple(Cochain.from_vector(ctx, n, v) for v in basis)
        ctx.cache[key] = cached
    return cached


def sample_cocycle(ctx: TripleContext, n: int, seed, cap: Optional[int] = None) -> Cochain:
    """Deterministic random nonzero element of the degree-n cocycle space.

    Coefficients for the kernel basis come from the same documented
    generator and range as :func:`sechoch.cochains.random_cochain`; the
    all-zero outcome is re-drawn.
    """
    basis = kernel_cochains(ctx, n, cap)
    if not basis:
        raise OperatorDomainError(f"no nonzero cocycles in degree {n}")
    field = ctx.field
    lo, hi = RANDOM_COEFF_RANGE
    for attempt in range(64):
        rng = random.Random(f"{seed}:cocycle:{n}:{attempt}")
        acc = Cochain.zero(ctx, n)
        for vec in basis:
            c = field.from_int(rng.randrange(lo, hi + 1))
            if c:
                acc = acc.add(vec.scale(c, field), field)
        if not acc.is_zero():
            return acc
    raise RuntimeError("could not draw a nonzero cocycle (improbable)")


@dataclass
class BracketComparison:
    """Outcome of computing a bracket class along both routes."""

    n: int
    m: int
    z1: Cochain                     # circle-product bracket
    z2: Cochain                     # BV-style combination
    z2_is_cocycle: bool
    difference_is_coboundary: bool
    witness: Optional[Cochain]
    witness_verified: bool          # coboundary of the witness re-matches z1 - z2
    variant_is_coboundary: Optional[bool]  # same question for the rewritten middle term


def bracket_class_compare(ctx: TripleContext, f: Cochain, g: Cochain,
                          check_variant: bool = True,
                          cap: Optional[int] = None) -> BracketComparison:
    """Compare the insertion bracket with the BV-style combination on cocycles."""
    df = differential(ctx, f)
    if not df.is_zero():
        raise NotACocycleError("f", df.support_size())
    dg = differential(ctx, g)
    if not dg.is_zero():
        raise NotACocycleError("g", dg.support_size())
    field = ctx.field
    z1 = bracket(ctx, f, g)
    z2 = bv_combination(ctx, f, g)
    z2_is_cocycle = differential(ctx, z2).is_zero()
    diff = z1.sub(z2, field)
    witness = is_coboundary(ctx, diff, cap)
    verified = witness is not None and differential(ctx, witness) == diff
    variant_ok = None
    if check_variant:
        zv = bv_combination(ctx, f, g, variant=True)
        variant_ok = is_coboundary(ctx, z1.sub(zv, field), cap) is not None
    return BracketComparison(
        n=f.degree, m=g.degree, z1=z1, z2=z2,
        z2_is_cocycle=z2_is_cocycle,
        difference_is_coboundary=witness is not None,
        witness=witness, witness_verified=verified,
        variant_is_coboundary=variant_ok,
    )
