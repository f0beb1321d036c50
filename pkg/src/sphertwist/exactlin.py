"""Exact linear algebra over Q and over prime fields.

Everything downstream (algebras, modules, resolutions, homology) reduces to
the operations in this file, so the contract here is strict:

* arithmetic is exact — rationals are reduced fractions, prime-field
  elements are residues in [0, p);
* every returned basis is in a canonical form (reduced row echelon of the
  spanning rows), so equal subspaces produce equal matrices and golden-file
  tests are meaningful;
* all values are immutable after construction and safe to share between
  threads.

A matrix is dense and row-major.  No attempt is made at asymptotically
clever elimination; the dimensions in scope are tiny by numerical-linear-
algebra standards and exactness plus determinism matter more than speed.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatch, ShapeError


class RationalField:
    """The field Q.  Elements are `fractions.Fraction` (auto-normalized)."""

    characteristic = 0

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        raise FieldMismatch("cannot coerce %r into Q" % (value,))

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in Q")
        return 1 / Fraction(a)

    def is_zero(self, a):
        return a == 0

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """The field F_p for a prime p.  Elements are ints in [0, p)."""

    def __init__(self, p):
        if p < 2:
            raise FieldMismatch("modulus must be a prime, got %d" % p)
        k = 2
        while k * k <= p:
            if p % k == 0:
                raise FieldMismatch("modulus must be a prime, got %d" % p)
            k += 1
        self.p = p
        self.characteristic = p

    def coerce(self, value):
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            if "/" in value:
                num, den = value.split("/", 1)
                return self.mul(int(num) % self.p, self.inv(int(den) % self.p))
            return int(value) % self.p
        if isinstance(value, Fraction):
            return self.mul(value.numerator % self.p, self.inv(value.denominator % self.p))
        raise FieldMismatch("cannot coerce %r into F_%d" % (value, self.p))

    def zero(self):
        return 0

    def one(self):
        return 1

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
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def to_str(self, a):
        return str(a % self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return "GF(%d)" % self.p


QQ = RationalField()


def field_from_spec(spec):
    """Build a field from its serialized form: "rational" or a prime int."""
    if spec in ("rational", "Q", "QQ"):
        return QQ
    return PrimeField(int(spec))


class Matrix:
    """Dense exact matrix.  Rows of field elements; treat as immutable."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            for r in self.rows:
                if len(r) != self.ncols:
                    raise ShapeError("ragged rows")
        else:
            if ncols is None:
                ncols = 0
            self.ncols = ncols

    @classmethod
    def from_entries(cls, field, nrows, ncols, entries):
        if len(entries) != nrows * ncols:
            raise ShapeError(
                "entry count %d does not match %dx%d" % (len(entries), nrows, ncols)
            )
        coerced = [field.coerce(e) for e in entries]
        rows = [coerced[i * ncols : (i + 1) * ncols] for i in range(nrows)]
        return cls(field, rows, ncols)

    @classmethod
    def identity(cls, field, n):
        one, zero = field.one(), field.zero()
        return cls(field, [[one if i == j else zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zero(cls, field, nrows, ncols):
        z = field.zero()
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols)

    def entry(self, i, j):
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def column(self, j):
        return [r[j] for r in self.rows]

    def transpose(self):
        return Matrix(
            self.field,
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nrows,
        )

    def is_zero(self):
        f = self.field
        return all(f.is_zero(e) for r in self.rows for e in r)

    def _check_field(self, other):
        if self.field != other.field:
            raise FieldMismatch("matrices over different fields")

    def add(self, other):
        self._check_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeError("addition shape mismatch")
        f = self.field
        return Matrix(
            self.field,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.ncols,
        )

    def sub(self, other):
        self._check_field(other)
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeError("subtraction shape mismatch")
        f = self.field
        return Matrix(
            self.field,
            [
                [f.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            self.ncols,
        )

    def scale(self, c):
        f = self.field
        c = f.coerce(c)
        return Matrix(self.field, [[f.mul(c, e) for e in r] for r in self.rows], self.ncols)

    def mul(self, other):
        self._check_field(other)
        if self.ncols != other.nrows:
            raise ShapeError(
                "product shape mismatch: %dx%d by %dx%d"
                % (self.nrows, self.ncols, other.nrows, other.ncols)
            )
        f = self.field
        zero = f.zero()
        bt = other.transpose().rows
        out = []
        for ra in self.rows:
            row = []
            for cb in bt:
                acc = zero
                for a, b in zip(ra, cb):
                    if not f.is_zero(a) and not f.is_zero(b):
                        acc = f.add(acc, f.mul(a, b))
                row.append(acc)
            out.append(row)
        return Matrix(self.field, out, other.ncols)

    def apply_to_row(self, vec):
        """Row vector times matrix: returns list of length ncols."""
        if len(vec) != self.nrows:
            raise ShapeError("row-vector length mismatch")
        f = self.field
        zero = f.zero()
        out = [zero] * self.ncols
        for a, r in zip(vec, self.rows):
            if f.is_zero(a):
                continue
            for j, e in enumerate(r):
                if not f.is_zero(e):
                    out[j] = f.add(out[j], f.mul(a, e))
        return out

    def hstack(self, other):
        self._check_field(other)
        if self.nrows != other.nrows:
            raise ShapeError("hstack row mismatch")
        return Matrix(
            self.field,
            [ra + rb for ra, rb in zip(self.rows, other.rows)],
            self.ncols + other.ncols,
        )

    def vstack(self, other):
        self._check_field(other)
        if self.ncols != other.ncols:
            raise ShapeError("vstack column mismatch")
        return Matrix(self.field, self.rows + other.rows, self.ncols)

    def submatrix(self, row_indices, col_indices):
        return Matrix(
            self.field,
            [[self.rows[i][j] for j in col_indices] for i in row_indices],
            len(col_indices),
        )

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self):
        if self.nrows == 0 or self.ncols == 0:
            return "Matrix(%r, %dx%d)" % (self.field, self.nrows, self.ncols)
        body = "; ".join(
            " ".join(self.field.to_str(e) for e in r) for r in self.rows
        )
        return "Matrix(%r, [%s])" % (self.field, body)


def rref(m):
    """Reduced row echelon form.  Returns (matrix, pivot column list)."""
    f = m.field
    rows = [list(r) for r in m.rows]
    pivots = []
    rank = 0
    for col in range(m.ncols):
        sel = None
        for i in range(rank, len(rows)):
            if not f.is_zero(rows[i][col]):
                sel = i
                break
        if sel is None:
            continue
        rows[rank], rows[sel] = rows[sel], rows[rank]
        inv = f.inv(rows[rank][col])
        rows[rank] = [f.mul(inv, e) for e in rows[rank]]
        for i in range(len(rows)):
            if i == rank:
                continue
            c = rows[i][col]
            if f.is_zero(c):
                continue
            rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return Matrix(f, rows, m.ncols), pivots


def rank(m):
    return len(rref(m)[1])


def row_space_canonical(m):
    """Canonical basis of the row space: nonzero rows of the rref."""
    r, pivots = rref(m)
    return Matrix(m.field, [r.rows[i] for i in range(len(pivots))], m.ncols)


def kernel_basis(m):
    """Basis of the right null space, returned as columns.

    The basis is the canonical rref form of the standard free-variable
    solutions, so it depends only on the null space, not on m.
    """
    r, pivots = rref(m)
    f = m.field
    pivot_set = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivot_set]
    vecs = []
    for j in free:
        v = [f.zero()] * m.ncols
        v[j] = f.one()
        for i, p in enumerate(pivots):
            v[p] = f.neg(r.rows[i][j])
        vecs.append(v)
    if not vecs:
        return Matrix(f, [], 0) if m.ncols == 0 else Matrix.zero(f, m.ncols, 0)
    canon = row_space_canonical(Matrix(f, vecs, m.ncols))
    return canon.transpose()


def image_basis(m):
    """Canonical basis of the column space, returned as columns."""
    return row_space_canonical(m.transpose()).transpose()


def solve(m, b):
    """One solution x of m·x = b (column vectors), or None if inconsistent."""
    if isinstance(b, Matrix):
        if b.ncols != 1:
            raise ShapeError("right-hand side must be a single column")
        b = b.column(0)
    if len(b) != m.nrows:
        raise ShapeError("right-hand side length mismatch")
    f = m.field
    b = [f.coerce(e) for e in b]
    aug = Matrix(f, [r + [be] for r, be in zip(m.rows, b)], m.ncols + 1)
    if m.nrows == 0:
        aug = Matrix(f, [], m.ncols + 1)
    r, pivots = rref(aug)
    if m.ncols in pivots:
        return None
    x = [f.zero()] * m.ncols
    for i, p in enumerate(pivots):
        x[p] = r.rows[i][m.ncols]
    return x


def solve_matrix(m, b):
    """Solve m·X = b column by column; None if any column is inconsistent."""
    m._check_field(b)
    if b.nrows != m.nrows:
        raise ShapeError("solve_matrix shape mismatch")
    cols = []
    for j in range(b.ncols):
        x = solve(m, b.column(j))
        if x is None:
            return None
        cols.append(x)
    return Matrix(m.field, cols, m.ncols).transpose() if cols else Matrix.zero(m.field, m.ncols, 0)


def kronecker(a, b):
    """Kronecker product, shape (a.rows·b.rows) × (a.cols·b.cols)."""
    a._check_field(b)
    f = a.field
    out = []
    for i in range(a.nrows):
        for k in range(b.nrows):
            row = []
            for j in range(a.ncols):
                aij = a.rows[i][j]
                if f.is_zero(aij):
                    row.extend([f.zero()] * b.ncols)
                else:
                    row.extend(f.mul(aij, e) for e in b.rows[k])
            out.append(row)
    return Matrix(f, out, a.ncols * b.ncols)


def intersect_subspaces(u, v):
    """Basis (columns) of the intersection of two column spans in k^n."""
    u._check_field(v)
    if u.nrows != v.nrows:
        raise ShapeError("ambient dimensions differ")
    if u.ncols == 0 or v.ncols == 0:
        return Matrix.zero(u.field, u.nrows, 0)
    stacked = u.hstack(v.scale(u.field.neg(u.field.one())))
    ker = kernel_basis(stacked)
    cols = []
    for j in range(ker.ncols):
        coeffs = ker.column(j)[: u.ncols]
        cols.append(u.mul(Matrix(u.field, [[c] for c in coeffs], 1)).column(0))
    if not cols:
        return Matrix.zero(u.field, u.nrows, 0)
    return row_space_canonical(Matrix(u.field, cols, u.nrows)).transpose()


class SpanBuilder:
    """Incremental canonical span of row vectors.

    Feed vectors with ``add``; the builder keeps a row-reduced basis and
    reports whether each vector enlarged the span.  ``contains`` answers
    membership without mutating.  Used for ideal closures, factor-through
    subspaces and radd-style intersections, where many candidate vectors
    are zero or redundant and a full rref of everything at once would be
    wasteful.
    """

    def __init__(self, field, width):
        self.field = field
        self.width = width
        self.rows = []      # reduced rows, pivot order increasing
        self.pivots = []

    def _reduce(self, vec):
        f = self.field
        v = list(vec)
        for row, p in zip(self.rows, self.pivots):
            c = v[p]
            if not f.is_zero(c):
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return v

    def contains(self, vec):
        v = self._reduce(vec)
        f = self.field
        return all(f.is_zero(e) for e in v)

    def add(self, vec):
        """Insert a vector; returns True if the span grew."""
        if len(vec) != self.width:
            raise ShapeError("span vector length mismatch")
        f = self.field
        v = self._reduce(vec)
        pivot = None
        for j, e in enumerate(v):
            if not f.is_zero(e):
                pivot = j
                break
        if pivot is None:
            return False
        inv = f.inv(v[pivot])
        v = [f.mul(inv, e) for e in v]
        # Back-substitute into existing rows to stay fully reduced.
        for i, row in enumerate(self.rows):
            c = row[pivot]
            if not f.is_zero(c):
                self.rows[i] = [f.sub(a, f.mul(c, b)) for a, b in zip(row, v)]
        at = 0
        while at < len(self.pivots) and self.pivots[at] < pivot:
            at += 1
        self.rows.insert(at, v)
        self.pivots.insert(at, pivot)
        return True

    def dim(self):
        return len(self.rows)

    def basis_matrix(self):
        """Rows = canonical basis (already rref by construction)."""
        return Matrix(self.field, [list(r) for r in self.rows], self.width)
