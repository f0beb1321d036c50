"""Right modules over a finite-dimensional algebra, as representations.

A module is one action matrix per algebra basis element, acting on
coordinate ROW vectors (v ↦ v·M), so composition reads left to right
everywhere: a hom m → n is a matrix applied on the right of a row, and
h1 then h2 is the product h1.matrix · h2.matrix.

Submodules are carried as embedded row-span matrices of the ambient
module until explicitly converted; that keeps radical-style
intersections in ambient coordinates where they belong.
"""

from __future__ import annotations

from .algebra import Algebra, lift_idempotents, radical
from .errors import (
    AlgebraMismatch,
    NotASubmodule,
    NotSplit,
    ShapeError,
    SphertwistError,
)
from .exactlin import (
    Matrix,
    SpanBuilder,
    kernel_basis,
    kronecker,
    rank,
    row_space_canonical,
    rref,
    solve,
)


def _sparse_rows(m):
    f = m.field
    return [
        [(j, c) for j, c in enumerate(row) if not f.is_zero(c)] for row in m.rows
    ]


def _sparse_mul(f, a_sparse, b_sparse, nrows, ncols):
    out = [[f.zero()] * ncols for _ in range(nrows)]
    for i, row in enumerate(a_sparse):
        for k, c in row:
            for j, c2 in b_sparse[k]:
                out[i][j] = f.add(out[i][j], f.mul(c, c2))
    return out


class Module:
    """Right module given by its action matrices."""

    def __init__(self, algebra, dim, action, tag=None, validate=True):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)
        self.tag = tag
        if len(self.action) != algebra.dim:
            raise ShapeError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.nrows != dim or m.ncols != dim:
                raise ShapeError("action matrix shape mismatch")
            if m.field != algebra.field:
                raise AlgebraMismatch("action over the wrong field")
        if validate:
            self._validate()

    def _validate(self):
        a, f = self.algebra, self.algebra.field
        unit_mat = self.action_of(a.unit)
        if unit_mat != Matrix.identity(f, self.dim):
            raise SphertwistError("unit does not act as identity")
        sparse = [_sparse_rows(m) for m in self.action]
        for i in range(a.dim):
            for j in range(a.dim):
                prod = _sparse_mul(f, sparse[i], sparse[j], self.dim, self.dim)
                want = [[f.zero()] * self.dim for _ in range(self.dim)]
                for k, c in a._sparse[i][j]:
                    for r in range(self.dim):
                        for t, c2 in sparse[k][r]:
                            want[r][t] = f.add(want[r][t], f.mul(c, c2))
                if prod != want:
                    raise SphertwistError(
                        "action not compatible with multiplication on pair (%d,%d)"
                        % (i, j)
                    )

    def action_of(self, avec):
        f = self.algebra.field
        out = Matrix.zero(f, self.dim, self.dim)
        for i, c in enumerate(avec):
            if not f.is_zero(c):
                out = out.add(self.action[i].scale(c))
        return out

    def apply(self, v, avec):
        row = Matrix(self.algebra.field, [list(v)], self.dim)
        return row.mul(self.action_of(avec)).rows[0]

    @classmethod
    def zero(cls, algebra):
        z = Matrix.zero(algebra.field, 0, 0)
        return cls(algebra, 0, [z] * algebra.dim, validate=False)

    @classmethod
    def regular(cls, algebra):
        """The algebra as a right module over itself.

        Cached per algebra; the action matrices are the structure
        constants re-packed, so compatibility is the associativity the
        algebra constructor has already audited.
        """
        cached = getattr(algebra, "_regular_module_cache", None)
        if cached is not None:
            return cached
        action = [
            algebra.right_mult_matrix(algebra.basis_vector(i))
            for i in range(algebra.dim)
        ]
        m = cls(algebra, algebra.dim, action, validate=False)
        algebra._regular_module_cache = m
        return m

    @classmethod
    def coregular(cls, algebra):
        """k-dual of the left regular module, as a right module.

        (f·b)(x) = f(b·x), so b acts by the transpose of left
        multiplication.  Cached per algebra; compatibility is again the
        algebra's own associativity, transposed.
        """
        cached = getattr(algebra, "_coregular_module_cache", None)
        if cached is not None:
            return cached
        action = [
            algebra.left_mult_matrix(algebra.basis_vector(i)).transpose()
            for i in range(algebra.dim)
        ]
        m = cls(algebra, algebra.dim, action, validate=False)
        algebra._coregular_module_cache = m
        return m

    def __repr__(self):
        return "Module(dim=%d over %r)" % (self.dim, self.algebra)


class ModuleHom:
    """Intertwiner between two modules over the same algebra."""

    def __init__(self, source, target, matrix, validate=True):
        if source.algebra is not target.algebra and source.algebra != target.algebra:
            raise AlgebraMismatch("hom between modules over different algebras")
        self.source = source
        self.target = target
        self.matrix = matrix
        if matrix.nrows != source.dim or matrix.ncols != target.dim:
            raise ShapeError("hom matrix shape mismatch")
        if validate:
            self._validate()

    def _validate(self):
        a = self.source.algebra
        for i in range(a.dim):
            lhs = self.source.action[i].mul(self.matrix)
            rhs = self.matrix.mul(self.target.action[i])
            if lhs != rhs:
                raise SphertwistError(
                    "matrix fails to intertwine basis element %d" % i
                )

    def apply(self, v):
        row = Matrix(self.source.algebra.field, [list(v)], self.source.dim)
        return row.mul(self.matrix).rows[0]

    def compose(self, then):
        """self : m → n followed by then : n → p."""
        if then.source is not self.target and then.source.dim != self.target.dim:
            raise ShapeError("composition endpoints do not match")
        return ModuleHom(
            self.source, then.target, self.matrix.mul(then.matrix), validate=False
        )

    def is_zero(self):
        return self.matrix.is_zero()

    def __repr__(self):
        return "ModuleHom(%d→%d)" % (self.source.dim, self.target.dim)


def identity_hom(m):
    return ModuleHom(m, m, Matrix.identity(m.algebra.field, m.dim), validate=False)


def hom_space(m, n):
    """rref-canonical basis of all module maps m → n.

    Solves the intertwining equations against a generating set of the
    algebra (enough, since intertwining is multiplicative), then
    re-verifies every basis hom on every algebra basis element.
    """
    if m.algebra != n.algebra:
        raise AlgebraMismatch("hom between modules over different algebras")
    f = m.algebra.field
    s, t = m.dim, n.dim
    if s == 0 or t == 0:
        return []
    gens = generator_indices(m.algebra)
    blocks = []
    it = Matrix.identity(f, t)
    i_s = Matrix.identity(f, s)
    for g in gens:
        a_side = kronecker(m.action[g], it)
        b_side = kronecker(i_s, n.action[g].transpose())
        blocks.append(a_side.sub(b_side))
    if blocks:
        stacked = blocks[0]
        for b in blocks[1:]:
            stacked = stacked.vstack(b)
        null = kernel_basis(stacked)
    else:
        # the unit generates everything, so any linear map intertwines
        null = Matrix.identity(f, s * t)
    homs = []
    for j in range(null.ncols):
        flat = null.column(j)
        mat = Matrix(f, [flat[r * t : (r + 1) * t] for r in range(s)], t)
        homs.append(ModuleHom(m, n, mat))     # validates on all basis elements
    return homs


def generator_indices(a):
    """Indices of a small set of basis elements generating the algebra."""
    cached = getattr(a, "_generator_cache", None)
    if cached is not None:
        return cached
    f = a.field
    span = SpanBuilder(f, a.dim)
    span.add(a.unit)
    gens = []
    elements = [list(r) for r in span.rows]
    for i in range(a.dim):
        if span.contains(a.basis_vector(i)):
            continue
        gens.append(i)
        frontier = [a.basis_vector(i)]
        span.add(a.basis_vector(i))
        elements.append(a.basis_vector(i))
        while frontier:
            nxt = []
            for x in frontier:
                for y in list(elements):
                    for prod in (a.mul_vec(x, y), a.mul_vec(y, x)):
                        if span.add(prod):
                            nxt.append(prod)
                            elements.append(prod)
            frontier = nxt
    a._generator_cache = gens
    return gens


# ---------------------------------------------------------------------------
# submodules and quotients


def _as_rows(field, vectors, width):
    if isinstance(vectors, Matrix):
        if vectors.ncols == width:
            return vectors
        if vectors.nrows == width:
            return vectors.transpose()
        raise ShapeError("subspace matrix does not fit the module")
    return Matrix(field, [[field.coerce(c) for c in v] for v in vectors], width)


def submodule(m, vectors, check=True):
    """(module on the subspace, inclusion hom).  Rows span the subspace."""
    f = m.algebra.field
    rows = row_space_canonical(_as_rows(f, vectors, m.dim))
    span = SpanBuilder(f, m.dim)
    for r in rows.rows:
        span.add(list(r))
    d = rows.nrows
    pivots = list(span.pivots)

    def coords(vec):
        if check and not span.contains(vec):
            raise NotASubmodule("vector leaves the subspace", witness=vec)
        return [vec[p] for p in pivots]

    action = []
    for i in range(m.algebra.dim):
        imgs = [
            Matrix(f, [list(r)], m.dim).mul(m.action[i]).rows[0] for r in rows.rows
        ]
        action.append(Matrix(f, [coords(v) for v in imgs], d))
    sub = Module(m.algebra, d, action, validate=False)
    incl = ModuleHom(sub, m, rows, validate=False)
    return sub, incl


def quotient(m, vectors):
    """(quotient module, projection hom) by an action-stable subspace."""
    f = m.algebra.field
    rows = row_space_canonical(_as_rows(f, vectors, m.dim))
    span = SpanBuilder(f, m.dim)
    for r in rows.rows:
        span.add(list(r))
    for r in rows.rows:
        for i in range(m.algebra.dim):
            img = Matrix(f, [list(r)], m.dim).mul(m.action[i]).rows[0]
            if not span.contains(img):
                raise NotASubmodule(
                    "subspace not stable under basis element %d" % i, witness=list(r)
                )
    pivot_set = set(span.pivots)
    keep = [j for j in range(m.dim) if j not in pivot_set]

    def project(vec):
        red = span._reduce(vec)
        return [red[j] for j in keep]

    d = len(keep)
    reps = []
    for j in keep:
        v = [f.zero()] * m.dim
        v[j] = f.one()
        reps.append(v)
    action = []
    for i in range(m.algebra.dim):
        action.append(
            Matrix(
                f,
                [project(Matrix(f, [r], m.dim).mul(m.action[i]).rows[0]) for r in reps],
                d,
            )
        )
    q = Module(m.algebra, d, action, validate=False)
    proj = ModuleHom(
        m,
        q,
        Matrix(f, [project(m_basis_row(f, m.dim, j)) for j in range(m.dim)], d),
        validate=False,
    )
    return q, proj


def m_basis_row(field, dim, j):
    v = [field.zero()] * dim
    v[j] = field.one()
    return v


def image_of(h):
    """(image submodule of target, inclusion)."""
    return submodule(h.target, h.matrix, check=False)


def kernel_of(h):
    """(kernel submodule of source, inclusion)."""
    # rows v with v·M = 0  ⇔  Mᵀ·vᵀ = 0
    cols = kernel_basis(h.matrix.transpose())
    return submodule(h.source, cols.transpose(), check=False)


def cokernel_of(h):
    """(cokernel quotient of target, projection)."""
    return quotient(h.target, h.matrix)


def direct_sum(mods):
    """(sum module, injection homs, projection homs)."""
    if not mods:
        raise ShapeError("direct sum of nothing — pass at least one module")
    a = mods[0].algebra
    f = a.field
    for m in mods[1:]:
        if m.algebra != a:
            raise AlgebraMismatch("direct sum across different algebras")
    total = sum(m.dim for m in mods)
    offsets = []
    at = 0
    for m in mods:
        offsets.append(at)
        at += m.dim
    action = []
    for i in range(a.dim):
        big = Matrix.zero(f, total, total)
        rows = [row[:] for row in big.rows]
        for off, m in zip(offsets, mods):
            blk = m.action[i]
            for r in range(m.dim):
                for c in range(m.dim):
                    rows[off + r][off + c] = blk.rows[r][c]
        action.append(Matrix(f, rows, total))
    s = Module(a, total, action, validate=False)
    injections, projections = [], []
    for off, m in zip(offsets, mods):
        inj = Matrix.zero(f, m.dim, total)
        rows = [row[:] for row in inj.rows]
        for r in range(m.dim):
            rows[r][off + r] = f.one()
        injections.append(ModuleHom(m, s, Matrix(f, rows, total), validate=False))
        prj = Matrix.zero(f, total, m.dim)
        rows = [row[:] for row in prj.rows]
        for r in range(m.dim):
            rows[off + r][r] = f.one()
        projections.append(ModuleHom(s, m, Matrix(f, rows, m.dim), validate=False))
    return s, injections, projections


def module_radical(m):
    """Row basis of m·rad(A), in ambient coordinates."""
    f = m.algebra.field
    rad = radical(m.algebra)
    sb = SpanBuilder(f, m.dim)
    for j in range(rad.ncols):
        act = m.action_of(rad.column(j))
        for r in range(m.dim):
            sb.add(Matrix(f, [m_basis_row(f, m.dim, r)], m.dim).mul(act).rows[0])
    return sb.basis_matrix()


def socle(m):
    """Row basis of the annihilator of rad(A) in m."""
    f = m.algebra.field
    rad = radical(m.algebra)
    if rad.ncols == 0:
        return Matrix.identity(f, m.dim)
    stacked = None
    for j in range(rad.ncols):
        act = m.action_of(rad.column(j))
        stacked = act if stacked is None else stacked.hstack(act)
    cols = kernel_basis(stacked.transpose())
    return row_space_canonical(cols.transpose())


# ---------------------------------------------------------------------------
# simples, covers, add-membership


def simple_modules(a):
    """One simple per isomorphism class, tagged by a lifted idempotent.

    Cached per algebra — callers share the module objects.
    """
    cached = getattr(a, "_simple_modules_cache", None)
    if cached is not None:
        return cached
    es = lift_idempotents(a)
    reg = Module.regular(a)
    rad = radical(a)
    rad_rows = rad.transpose()
    out = []
    for e in es:
        pe, pe_rows = _idempotent_piece(a, reg, e)
        # top = eA / (eA ∩ rad) — eA·rad = e·rad ⊆ eA
        erad_rows = [a.mul_vec(e, list(r)) for r in rad_rows.rows]
        pe_mat = row_space_canonical(Matrix(a.field, pe_rows, a.dim))
        # express e·rad inside pe coordinates
        span = SpanBuilder(a.field, a.dim)
        for r in pe_mat.rows:
            span.add(list(r))
        pivots = list(span.pivots)
        sub_rows = []
        for v in erad_rows:
            sub_rows.append([v[p] for p in pivots])
        top, _ = quotient(pe, sub_rows)
        top.tag = e
        out.append(top)
    # dedupe isomorphism classes: simples are isomorphic iff a nonzero hom exists
    reps = []
    for s in out:
        if any(hom_space(s, r) for r in reps):
            continue
        reps.append(s)
    a._simple_modules_cache = reps
    return reps


def _idempotent_piece(a, reg, e):
    """(e·a as a module, its generating rows), cached per algebra."""
    cache = getattr(a, "_piece_cache", None)
    if cache is None:
        cache = a._piece_cache = {}
    key = tuple(e)
    hit = cache.get(key)
    if hit is not None:
        return hit
    pe_rows = [a.mul_vec(e, a.basis_vector(i)) for i in range(a.dim)]
    pe, _ = submodule(reg, pe_rows, check=False)
    cache[key] = (pe, pe_rows)
    return pe, pe_rows


def projective_cover(m):
    """(P, epi) with P a sum of idempotent projectives covering top(m)."""
    a = m.algebra
    f = a.field
    if m.dim == 0:
        z = Module.zero(a)
        epi = ModuleHom(z, m, Matrix.zero(f, 0, 0), validate=False)
        epi.cover_idempotents = []
        epi.cover_piece_modules = []
        return z, epi
    es = lift_idempotents(a)
    reg = Module.regular(a)
    rad_rows = module_radical(m)
    # shared greedy span: radical plus the cyclic submodules already covered
    cover_span = SpanBuilder(f, m.dim)
    for r in rad_rows.rows:
        cover_span.add(list(r))
    pieces = []
    gens = []
    for e in es:
        act_e = m.action_of(e)
        for r in range(m.dim):
            v = Matrix(f, [m_basis_row(f, m.dim, r)], m.dim).mul(act_e).rows[0]
            if cover_span.contains(v):
                continue
            pe, pe_rows = _idempotent_piece(a, reg, e)
            pieces.append(pe)
            gens.append((v, pe_rows, e))
            for i in range(a.dim):
                cover_span.add(
                    Matrix(f, [v], m.dim).mul(m.action[i]).rows[0]
                )
    if not pieces:
        raise SphertwistError("nonzero module with no top — radical not nilpotent?")
    p_sum, _, _ = direct_sum(pieces)
    blocks = []
    for (v, pe_rows, _e), pe in zip(gens, pieces):
        pe_mat = row_space_canonical(Matrix(f, pe_rows, a.dim))
        rows = []
        for r in pe_mat.rows:
            img = Matrix(f, [v], m.dim).mul(m.action_of(list(r))).rows[0]
            rows.append(img)
        blocks.append(Matrix(f, rows, m.dim))
    if blocks:
        big = blocks[0]
        for b in blocks[1:]:
            big = big.vstack(b)
    else:
        big = Matrix.zero(f, 0, m.dim)
    epi = ModuleHom(p_sum, m, big)
    if rank(big) != m.dim:
        raise SphertwistError("projective cover candidate is not surjective")
    # names the summand each block came from, for callers that need the
    # indecomposable decomposition of a module they know to be projective
    epi.cover_idempotents = [e for (_v, _rows, e) in gens]
    epi.cover_piece_modules = pieces
    return p_sum, epi


def in_add(m, n):
    """True iff m is a direct summand of a finite power of n.

    Linear criterion: id_m lies in the span of composites m → n → m.
    """
    if m.algebra != n.algebra:
        raise AlgebraMismatch("add-membership across different algebras")
    f = m.algebra.field
    if m.dim == 0:
        return True
    into = hom_space(m, n)
    back = hom_space(n, m)
    span = SpanBuilder(f, m.dim * m.dim)
    for g in into:
        for h in back:
            comp = g.matrix.mul(h.matrix)
            span.add([e for row in comp.rows for e in row])
    ident = [e for row in Matrix.identity(f, m.dim).rows for e in row]
    return span.contains(ident)


def restrict_scalars(surj, m):
    """A B-module viewed as a module over the source of p : A → B."""
    if m.algebra != surj.target:
        raise AlgebraMismatch("module is not over the surjection target")
    a = surj.source
    action = [m.action_of(surj.apply(a.basis_vector(i))) for i in range(a.dim)]
    return Module(a, m.dim, action, validate=False)


def endomorphism_algebra(m):
    """(End(m) as an Algebra, its hom basis).

    Structure constants come from composing hom-basis elements and
    re-expanding in the basis.  The product is function composition —
    the right factor acts first — so for an idempotent projection e onto
    a direct summand, the right ideal e·End(m) collects the maps out of
    the whole module into that summand.
    """
    homs = hom_space(m, m)
    d = len(homs)
    f = m.algebra.field
    if d == 0:
        raise SphertwistError("zero module has no unital endomorphism algebra")
    flat = Matrix(
        f, [[e for row in h.matrix.rows for e in row] for h in homs], m.dim * m.dim
    ).transpose()

    def coords(mat):
        x = solve(flat, [e for row in mat.rows for e in row])
        if x is None:
            raise SphertwistError("composite endomorphism escapes the hom basis")
        return x

    mult = [
        [coords(homs[j].matrix.mul(homs[i].matrix)) for j in range(d)]
        for i in range(d)
    ]
    unit = coords(Matrix.identity(f, m.dim))
    alg = Algebra(f, mult, unit)
    return alg, homs


def is_indecomposable(m):
    """(verdict, method) — idempotent search in End(m).

    A local endomorphism algebra means indecomposable; a non-split
    semisimple quotient of End(m) is still local, so NotSplit also
    certifies indecomposability.
    """
    if m.dim == 0:
        return False, "zero module"
    alg, _ = endomorphism_algebra(m)
    try:
        es = lift_idempotents(alg)
    except NotSplit:
        return True, "local with non-split residue"
    return len(es) == 1, "idempotent search"


def find_isomorphism(m, n):
    """An explicit invertible hom m → n, or None.

    Tries hom-basis elements and small deterministic combinations; a
    None answer is evidence, not proof, unless dims differ or the hom
    space is zero.
    """
    if m.algebra != n.algebra:
        raise AlgebraMismatch("isomorphism across different algebras")
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return ModuleHom(m, n, Matrix.zero(m.algebra.field, 0, 0), validate=False)
    f = m.algebra.field
    homs = hom_space(m, n)
    if not homs:
        return None
    for h in homs:
        if rank(h.matrix) == m.dim:
            return h
    import random

    rng = random.Random(23)
    for _ in range(120):
        mat = Matrix.zero(f, m.dim, n.dim)
        acc = mat
        for h in homs:
            c = f.coerce(rng.randint(-4, 4))
            acc = acc.add(h.matrix.scale(c))
        if rank(acc) == m.dim:
            return ModuleHom(m, n, acc, validate=False)
    return None
