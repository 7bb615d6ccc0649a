"""Exact dense/sparse linear algebra over the rationals and prime fields.

Scalars are plain Python values: ``gmpy2.mpq`` (or ``fractions.Fraction``
when gmpy2 is unavailable) for the rationals, canonical representatives
``0..p-1`` (ints) for GF(p).  A :class:`Field` object supplies the
arithmetic; vectors are plain lists of scalars and matrices carry their
field so that mixed-field data is rejected at construction time.

Row reduction keeps rows as ``{column: value}`` dicts, which makes the
very sparse cochain-differential matrices cheap to reduce while remaining
exact.  Every public operation (rank, kernel, solve) goes through the same
echelon engine.
"""

from __future__ import annotations

from typing import Iterable, Optional

try:
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    from fractions import Fraction as _mpq


class FieldMismatchError(ValueError):
    """A scalar does not belong to the field of the surrounding container."""


class Field:
    """Exact field arithmetic on raw scalar values."""

    kind: str

    def coerce(self, x):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def from_int(self, n: int):
        raise NotImplementedError

    def scalar_to_json(self, a):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


class RationalField(Field):
    kind = "rational"

    def __init__(self):
        self.zero = _mpq(0)
        self.one = _mpq(1)

    def coerce(self, x):
        if isinstance(x, bool) or isinstance(x, float):
            raise FieldMismatchError(f"not an exact rational: {x!r}")
        try:
            return _mpq(x)
        except (TypeError, ValueError) as exc:
            raise FieldMismatchError(f"not an exact rational: {x!r}") from exc

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("division by zero in the rational field")
        return 1 / a

    def from_int(self, n):
        return _mpq(n)

    def scalar_to_json(self, a):
        a = _mpq(a)
        if a.denominator == 1:
            return int(a.numerator)
        return f"{a.numerator}/{a.denominator}"

    def to_json(self):
        return {"kind": "rational"}

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")


class PrimeField(Field):
    """GF(p), elements stored as ints reduced to 0..p-1."""

    kind = "prime"

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"modulus must be prime, got {p}")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x):
        p = self.p
        if isinstance(x, bool) or isinstance(x, float):
            raise FieldMismatchError(f"not a GF({p}) element: {x!r}")
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            num, _, den = x.partition("/")
            try:
                n = int(num)
                d = int(den) if den else 1
            except ValueError as exc:
                raise FieldMismatchError(f"not a GF({p}) element: {x!r}") from exc
            if d % p == 0:
                raise ZeroDivisionError(f"denominator {d} vanishes in GF({p})")
            return (n * pow(d, -1, p)) % p
        raise FieldMismatchError(f"not a GF({p}) element: {x!r}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError(f"division by zero in GF({self.p})")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def scalar_to_json(self, a):
        return int(a % self.p)

    def to_json(self):
        return {"kind": "prime", "p": self.p}

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))


QQ = RationalField()


def field_from_json(obj) -> Field:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError(f"bad field description: {obj!r}")
    if obj["kind"] == "rational":
        return QQ
    if obj["kind"] == "prime":
        return PrimeField(int(obj["p"]))
    raise ValueError(f"unknown field kind: {obj['kind']!r}")


class Matrix:
    """Dense row-major matrix over a single field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Iterable[Iterable], ncols: Optional[int] = None):
        self.field = field
        self.rows = [[field.coerce(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
        elif ncols is not None:
            self.ncols = ncols
        else:
            self.ncols = 0
        for row in self.rows:
            if len(row) != self.ncols:
                raise ValueError("ragged rows in matrix")

    @classmethod
    def _from_raw(cls, field, rows, ncols):
        """Trusted constructor: entries are already field scalars."""
        m = object.__new__(cls)
        m.field = field
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        return m

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls._from_raw(field, [[z] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    def mul_vec(self, v):
        if len(v) != self.ncols:
            raise ValueError(f"shape mismatch: {self.nrows}x{self.ncols} times length-{len(v)}")
        f = self.field
        out = []
        for row in self.rows:
            s = f.zero
            for a, b in zip(row, v):
                if a and b:
                    s = f.add(s, f.mul(a, b))
            out.append(s)
        return out

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatchError("matrix product across different fields")
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions do not match")
        f = self.field
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for row in self.rows:
            new = []
            for col in cols:
                s = f.zero
                for a, b in zip(row, col):
                    if a and b:
                        s = f.add(s, f.mul(a, b))
                new.append(s)
            if not cols:
                new = []
            out.append(new)
        return Matrix._from_raw(f, out, other.ncols)

    def transpose(self) -> "Matrix":
        rows = [list(col) for col in zip(*self.rows)] if self.rows else []
        return Matrix._from_raw(self.field, rows, self.nrows)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    def row_dicts(self):
        out = []
        for row in self.rows:
            out.append({j: x for j, x in enumerate(row) if x})
        return out


def _echelon(row_dicts, field):
    """Incremental row echelon over sparse rows.

    Returns ``{pivot_column: row}`` where each row is reduced against all
    earlier pivots and scaled to a leading 1.  Input dicts are consumed.
    """
    pivots = {}
    for r in row_dicts:
        while r:
            c = min(r)
            p = pivots.get(c)
            if p is None:
                lead = r.pop(c)
                if lead != field.one:
                    inv = field.inv(lead)
                    r = {j: field.mul(v, inv) for j, v in r.items()}
                r[c] = field.one
                pivots[c] = r
                break
            f = r.pop(c)
            for j, v in p.items():
                if j == c:
                    continue
                nv = field.sub(r.get(j, field.zero), field.mul(f, v))
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return pivots


def _back_eliminate(pivots, field):
    """Turn an echelon ``{pivot: row}`` into reduced row echelon form."""
    for c in sorted(pivots, reverse=True):
        prow = pivots[c]
        for c2, row2 in pivots.items():
            if c2 >= c:
                continue
            f = row2.get(c)
            if f is None:
                continue
            for j, v in prow.items():
                if j == c:
                    continue
                nv = field.sub(row2.get(j, field.zero), field.mul(f, v))
                if nv:
                    row2[j] = nv
                else:
                    row2.pop(j, None)
            del row2[c]
    return pivots


def _rank_from_rows(row_dicts, field) -> int:
    return len(_echelon(row_dicts, field))


def _kernel_from_rows(row_dicts, ncols, field):
    pivots = _back_eliminate(_echelon(row_dicts, field), field)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for j in free:
        v = [field.zero] * ncols
        v[j] = field.one
        for c, row in pivots.items():
            coef = row.get(j)
            if coef is not None:
                v[c] = field.neg(coef)
        basis.append(v)
    return basis


def _solve_from_rows(row_dicts, ncols, b, field):
    """One solution of the system given by augmented sparse rows, or None.

    ``row_dicts`` are the coefficient rows; the right-hand side is stored
    in an extra virtual column ``ncols`` which can only become a pivot when
    a row reduces to ``0 = nonzero``.
    """
    aug = []
    for r, bi in zip(row_dicts, b):
        r = dict(r)
        if bi:
            r[ncols] = bi
        aug.append(r)
    pivots = _echelon(aug, field)
    if ncols in pivots:
        return None
    _back_eliminate(pivots, field)
    x = [field.zero] * ncols
    for c, row in pivots.items():
        x[c] = row.get(ncols, field.zero)
    return x


def rank(m: Matrix) -> int:
    """Rank of ``m`` over its exact field."""
    return _rank_from_rows(m.row_dicts(), m.field)


def kernel_basis(m: Matrix):
    """Basis of the right null space, one vector per free column."""
    return _kernel_from_rows(m.row_dicts(), m.ncols, m.field)


def solve_linear(m: Matrix, b):
    """Some x with ``m @ x == b`` (free variables set to 0), or None."""
    if len(b) != m.nrows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {m.nrows}")
    f = m.field
    b = [f.coerce(x) for x in b]
    return _solve_from_rows(m.row_dicts(), m.ncols, b, f)


class SparseColumns:
    """Column-sparse matrix builder for differentials.

    Entries accumulate through :meth:`add`; the rank/kernel/solve queries
    reuse the shared echelon engine on the (implicitly transposed) rows.
    """

    __slots__ = ("field", "nrows", "ncols", "cols")

    def __init__(self, field: Field, nrows: int, ncols: int):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        self.cols = [dict() for _ in range(ncols)]

    def add(self, i: int, j: int, v):
        if not v:
            return
        col = self.cols[j]
        old = col.get(i)
        if old is None:
            col[i] = v
        else:
            nv = self.field.add(old, v)
            if nv:
                col[i] = nv
            else:
                del col[i]

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def mul_vec(self, v):
        if len(v) != self.ncols:
            raise ValueError("shape mismatch in sparse product")
        f = self.field
        out = {}
        for x, col in zip(v, self.cols):
            if not x:
                continue
            for i, a in col.items():
                s = f.add(out.get(i, f.zero), f.mul(a, x))
                if s:
                    out[i] = s
                else:
                    del out[i]
        dense = [f.zero] * self.nrows
        for i, a in out.items():
            dense[i] = a
        return dense

    def matmul(self, other: "SparseColumns") -> "SparseColumns":
        if self.ncols != other.nrows:
            raise ValueError("inner dimensions do not match")
        f = self.field
        out = SparseColumns(f, self.nrows, other.ncols)
        for j, col in enumerate(other.cols):
            acc = out.cols[j]
            for k, x in col.items():
                for i, a in self.cols[k].items():
                    s = f.add(acc.get(i, f.zero), f.mul(a, x))
                    if s:
                        acc[i] = s
                    else:
                        del acc[i]
        return out

    def row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return rows

    def rank(self) -> int:
        return _rank_from_rows(self.row_dicts(), self.field)

    def kernel_basis(self):
        return _kernel_from_rows(self.row_dicts(), self.ncols, self.field)

    def solve(self, b):
        if len(b) != self.nrows:
            raise ValueError(f"right-hand side has length {len(b)}, expected {self.nrows}")
        return _solve_from_rows(self.row_dicts(), self.ncols, b, self.field)

    def to_matrix(self) -> Matrix:
        z = self.field.zero
        rows = [[z] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, v in col.items():
                rows[i][j] = v
        return Matrix._from_raw(self.field, rows, self.ncols)

    def __repr__(self):
        return f"SparseColumns({self.field!r}, {self.nrows}x{self.ncols}, nnz={self.nnz()})"
