"""Finite-dimensional associative algebras over exact fields.

An algebra is a dense multiplication table: ``mult[i][j]`` is the
coordinate vector of ``b_i * b_j``.  Construction always runs the full
battery of checks (associativity on every basis triple, two-sided unit
law), so a value of type :class:`Algebra` is trusted everywhere else in
the package.  A sparse view of the table is kept alongside the dense one
because the algebras appearing in practice (path algebras, endomorphism
algebras, their enveloping products) have very few nonzero structure
constants.

Quotients by two-sided ideals produce a :class:`SurjectionData` — the
surjection is the central object the rest of the package revolves
around.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import (
    BadUnit,
    FieldMismatch,
    InfiniteDimensional,
    MalformedRelation,
    NonAssociative,
    NotAnIdeal,
    NotSplit,
    SphertwistError,
    UnsupportedCharacteristic,
)
from .exactlin import Matrix, SpanBuilder, kernel_basis, rref, solve


class Algebra:
    """Associative unital algebra with a distinguished basis."""

    def __init__(self, field, mult, unit, basis_labels=None, idempotents=None):
        self.field = field
        self.dim = len(mult)
        self.mult = [
            [[field.coerce(c) for c in vec] for vec in row] for row in mult
        ]
        self.unit = [field.coerce(c) for c in unit]
        if basis_labels is None:
            basis_labels = ["b%d" % i for i in range(self.dim)]
        self.basis_labels = list(basis_labels)
        # idempotents: list of (role, coordinate vector) — optional tags
        self.idempotents = (
            [(role, [field.coerce(c) for c in vec]) for role, vec in idempotents]
            if idempotents
            else None
        )
        self._sparse = [
            [
                [(t, c) for t, c in enumerate(vec) if not field.is_zero(c)]
                for vec in row
            ]
            for row in self.mult
        ]
        self._validate()

    # -- construction-time checks

    def _validate(self):
        d, f = self.dim, self.field
        if len(self.unit) != d:
            raise BadUnit("unit vector length %d != dim %d" % (len(self.unit), d))
        for row in self.mult:
            if len(row) != d or any(len(vec) != d for vec in row):
                raise SphertwistError("multiplication table shape mismatch")
        for i in range(d):
            ei = self.basis_vector(i)
            if self.mul_vec(self.unit, ei) != ei or self.mul_vec(ei, self.unit) != ei:
                raise BadUnit("unit law fails on basis element %d" % i, witness=i)
        zero = f.zero()
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    lhs = [zero] * d
                    for t, c in self._sparse[i][j]:
                        for u, c2 in self._sparse[t][k]:
                            lhs[u] = f.add(lhs[u], f.mul(c, c2))
                    rhs = [zero] * d
                    for t, c in self._sparse[j][k]:
                        for u, c2 in self._sparse[i][t]:
                            rhs[u] = f.add(rhs[u], f.mul(c, c2))
                    if lhs != rhs:
                        raise NonAssociative(
                            "associativity fails on basis triple (%d,%d,%d)" % (i, j, k),
                            witness=(i, j, k),
                        )
        if self.idempotents:
            for a, (role_a, va) in enumerate(self.idempotents):
                if self.mul_vec(va, va) != va:
                    raise SphertwistError("tagged element %r is not idempotent" % role_a)
                for role_b, vb in self.idempotents[a + 1 :]:
                    if any(not f.is_zero(c) for c in self.mul_vec(va, vb)):
                        raise SphertwistError(
                            "tagged idempotents %r, %r not orthogonal" % (role_a, role_b)
                        )
                    if any(not f.is_zero(c) for c in self.mul_vec(vb, va)):
                        raise SphertwistError(
                            "tagged idempotents %r, %r not orthogonal" % (role_b, role_a)
                        )

    # -- coordinate arithmetic

    def basis_vector(self, i):
        v = [self.field.zero()] * self.dim
        v[i] = self.field.one()
        return v

    def mul_vec(self, x, y):
        f = self.field
        out = [f.zero()] * self.dim
        for i, xi in enumerate(x):
            if f.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if f.is_zero(yj):
                    continue
                c = f.mul(xi, yj)
                for t, s in self._sparse[i][j]:
                    out[t] = f.add(out[t], f.mul(c, s))
        return out

    def left_mult_matrix(self, x):
        """Matrix of v ↦ x·v on row vectors (row i = coords of x·b_i)."""
        return Matrix(self.field, [self.mul_vec(x, self.basis_vector(i)) for i in range(self.dim)], self.dim)

    def right_mult_matrix(self, x):
        """Matrix of v ↦ v·x on row vectors (row i = coords of b_i·x)."""
        return Matrix(self.field, [self.mul_vec(self.basis_vector(i), x) for i in range(self.dim)], self.dim)

    def is_idempotent(self, x):
        return self.mul_vec(x, x) == [self.field.coerce(c) for c in x]

    def idempotent(self, role):
        for r, v in self.idempotents or []:
            if r == role:
                return v
        raise SphertwistError("no idempotent tagged %r" % role)

    def __repr__(self):
        return "Algebra(dim=%d over %r)" % (self.dim, self.field)


def from_structure_constants(field, mult, unit, basis_labels=None, idempotents=None):
    """Validated algebra from a dense multiplication table."""
    return Algebra(field, mult, unit, basis_labels=basis_labels, idempotents=idempotents)


class SurjectionData:
    """A surjective algebra map p : source → target with its kernel.

    ``matrix`` acts on coordinate rows: v ↦ v·matrix.  ``kernel_basis``
    has the kernel as canonical columns in source coordinates.
    """

    def __init__(self, source, target, matrix, kernel):
        self.source = source
        self.target = target
        self.matrix = matrix
        self.kernel_basis = kernel
        self._check()

    def _check(self):
        a, b, f = self.source, self.target, self.source.field
        if f != b.field:
            raise FieldMismatch("surjection endpoints over different fields")
        p = self.matrix
        if p.nrows != a.dim or p.ncols != b.dim:
            raise SphertwistError("surjection matrix shape mismatch")
        if p.apply_to_row(a.unit) != b.unit:
            raise SphertwistError("surjection does not preserve the unit")
        for i in range(a.dim):
            for j in range(a.dim):
                lhs = p.apply_to_row(a.mult[i][j])
                rhs = b.mul_vec(
                    p.apply_to_row(a.basis_vector(i)), p.apply_to_row(a.basis_vector(j))
                )
                if lhs != rhs:
                    raise SphertwistError(
                        "surjection is not multiplicative on basis pair (%d,%d)" % (i, j)
                    )
        if len(rref(p)[1]) != b.dim:
            raise SphertwistError("map is not surjective")
        if self.kernel_basis.nrows != a.dim:
            raise SphertwistError("kernel basis lives in the wrong space")

    def apply(self, vec):
        return self.matrix.apply_to_row(vec)


def _as_vector_list(field, basis, dim):
    """Accept a Matrix (columns) or list of coordinate vectors."""
    if isinstance(basis, Matrix):
        return [basis.column(j) for j in range(basis.ncols)]
    return [[field.coerce(c) for c in v] for v in basis]


def quotient_surjection(a, ideal):
    """Quotient by a two-sided ideal; returns the surjection data."""
    f = a.field
    gens = _as_vector_list(f, ideal, a.dim)
    for g in gens:
        if len(g) != a.dim:
            raise SphertwistError("ideal vector length mismatch")
    span = SpanBuilder(f, a.dim)
    for g in gens:
        span.add(g)
    for g in list(span.rows):
        for i in range(a.dim):
            left = a.mul_vec(a.basis_vector(i), list(g))
            right = a.mul_vec(list(g), a.basis_vector(i))
            if not span.contains(left):
                raise NotAnIdeal(
                    "b%d · ideal element leaves the span" % i, witness=(i, list(g), left)
                )
            if not span.contains(right):
                raise NotAnIdeal(
                    "ideal element · b%d leaves the span" % i, witness=(i, list(g), right)
                )
    ideal_matrix = span.basis_matrix()
    pivots = list(span.pivots)
    keep = [i for i in range(a.dim) if i not in set(pivots)]

    def project(vec):
        # reduce modulo the ideal, then read surviving coordinates
        reduced = span._reduce(vec)
        return [reduced[i] for i in keep]

    def lift(coords):
        v = [f.zero()] * a.dim
        for c, i in zip(coords, keep):
            v[i] = c
        return v

    reps = [
        lift([f.one() if t == s else f.zero() for t in range(len(keep))])
        for s in range(len(keep))
    ]
    mult = [[project(a.mul_vec(ri, rj)) for rj in reps] for ri in reps]
    unit = project(a.unit)
    labels = [a.basis_labels[i] for i in keep]
    target = Algebra(f, mult, unit, basis_labels=labels)
    pmat = Matrix(f, [project(a.basis_vector(i)) for i in range(a.dim)], len(keep))
    kernel = ideal_matrix.transpose()
    return SurjectionData(a, target, pmat, kernel)


def _trace(m):
    f = m.field
    t = f.zero()
    for i in range(min(m.nrows, m.ncols)):
        t = f.add(t, m.rows[i][i])
    return t


def radical(a):
    """Basis (canonical columns) of the Jacobson radical.

    Uses the trace form of the left regular representation, valid in
    characteristic 0 or p > dim; the computed span is verified nilpotent
    by powering it until it dies.
    """
    cached = getattr(a, "_radical_cache", None)
    if cached is not None:
        return cached
    f = a.field
    if f.characteristic != 0 and f.characteristic <= a.dim:
        raise UnsupportedCharacteristic(
            "trace-form radical needs char 0 or p > dim; got p=%d, dim=%d"
            % (f.characteristic, a.dim)
        )
    left_mats = [a.left_mult_matrix(a.basis_vector(i)) for i in range(a.dim)]
    gram = []
    for i in range(a.dim):
        row = []
        for j in range(a.dim):
            prod = a.mult[i][j]
            t = f.zero()
            for k, c in enumerate(prod):
                if not f.is_zero(c):
                    t = f.add(t, f.mul(c, _trace(left_mats[k])))
            row.append(t)
        gram.append(row)
    rad = kernel_basis(Matrix(f, gram, a.dim))
    # nilpotency audit: powers of the span must vanish within dim steps
    current = [rad.column(j) for j in range(rad.ncols)]
    base = list(current)
    steps = 1
    while current:
        if steps > a.dim:
            raise SphertwistError("radical candidate is not nilpotent")
        nxt = SpanBuilder(f, a.dim)
        for u in current:
            for v in base:
                nxt.add(a.mul_vec(u, v))
        current = [list(r) for r in nxt.rows]
        steps += 1
    a._radical_cache = rad
    return rad


def opposite(a):
    """Same space, reversed multiplication.

    Cached both ways, so opposite(opposite(a)) is the original object;
    dualizing a module twice then lands over the algebra it started on.
    """
    cached = getattr(a, "_opposite_cache", None)
    if cached is not None:
        return cached
    mult = [[a.mult[j][i] for j in range(a.dim)] for i in range(a.dim)]
    idem = a.idempotents
    o = Algebra(
        a.field,
        mult,
        a.unit,
        basis_labels=[l + "^op" for l in a.basis_labels],
        idempotents=idem,
    )
    a._opposite_cache = o
    o._opposite_cache = a
    return o


def enveloping(a, b):
    """The algebra b ⊗ aᵒᵖ; its right modules are a-b-bimodules.

    Basis element (j,i) ↦ flat index j·dim(a)+i stands for b_j ⊗ a_iᵒᵖ,
    and a bimodule m becomes a right module via m·(b_j ⊗ a_iᵒᵖ) = a_i·m·b_j.

    Cached per ordered factor pair, and the primitive idempotents of the
    product are seeded from those of the factors: a tensor of two
    primitives has a local corner (radicals are nilpotent and the
    residue fields are the base field on both sides), so the pairs are
    already a complete orthogonal primitive set.
    """
    if a.field != b.field:
        raise FieldMismatch("enveloping factors over different fields")
    cache = getattr(a, "_enveloping_cache", None)
    if cache is None:
        cache = a._enveloping_cache = {}
    hit = cache.get(id(b))
    if hit is not None and hit[0] is b:
        return hit[1]
    f = a.field
    da, db = a.dim, b.dim
    dim = da * db
    zero = f.zero()
    mult = []
    for j in range(db):
        for i in range(da):
            row = []
            for l in range(db):
                for k in range(da):
                    vec = [zero] * dim
                    # (b_j ⊗ a_iᵒᵖ)(b_l ⊗ a_kᵒᵖ) = (b_j b_l) ⊗ (a_k a_i)ᵒᵖ
                    for m, cb in enumerate(b.mult[j][l]):
                        if f.is_zero(cb):
                            continue
                        for n, ca in enumerate(a.mult[k][i]):
                            if f.is_zero(ca):
                                continue
                            vec[m * da + n] = f.add(vec[m * da + n], f.mul(cb, ca))
                    row.append(vec)
            mult.append(row)
    unit = [zero] * dim
    for m, cb in enumerate(b.unit):
        if f.is_zero(cb):
            continue
        for n, ca in enumerate(a.unit):
            if f.is_zero(ca):
                continue
            unit[m * da + n] = f.add(unit[m * da + n], f.mul(cb, ca))
    labels = [
        "%s(x)%s" % (b.basis_labels[j], a.basis_labels[i])
        for j in range(db)
        for i in range(da)
    ]
    env = Algebra(f, mult, unit, basis_labels=labels)
    prims = []
    for fb in lift_idempotents(b):
        for ea in lift_idempotents(a):
            v = [f.zero()] * dim
            for m, cb in enumerate(fb):
                if f.is_zero(cb):
                    continue
                for n, ca in enumerate(ea):
                    if f.is_zero(ca):
                        continue
                    v[m * da + n] = f.mul(f.coerce(cb), f.coerce(ca))
            prims.append(v)
    total = [f.zero()] * dim
    for e in prims:
        if env.mul_vec(e, e) != e:
            raise SphertwistError("seeded tensor idempotent fails to square")
        total = [f.add(x, y) for x, y in zip(total, e)]
    if total != env.unit:
        raise SphertwistError("seeded tensor idempotents do not sum to 1")
    for i, e in enumerate(prims):
        for e2 in prims[i + 1 :]:
            if any(not f.is_zero(c) for c in env.mul_vec(e, e2)) or any(
                not f.is_zero(c) for c in env.mul_vec(e2, e)
            ):
                raise SphertwistError("seeded tensor idempotents not orthogonal")
    env._idempotent_cache = [list(e) for e in prims]
    cache[id(b)] = (b, env)
    return env


# ---------------------------------------------------------------------------
# quiver presentations


class _Path:
    __slots__ = ("src", "tgt", "arrows")

    def __init__(self, src, tgt, arrows):
        self.src = src
        self.tgt = tgt
        self.arrows = tuple(arrows)

    def __len__(self):
        return len(self.arrows)

    def key(self):
        return (self.src, self.tgt, self.arrows)

    def label(self, vertex_labels):
        if not self.arrows:
            return "e_%s" % vertex_labels[self.src]
        return "*".join(self.arrows)


def from_quiver(vertices, arrows, relations, max_path_length=64, field=None):
    """Path algebra of a quiver modulo relations, if finite-dimensional.

    ``vertices``: list of labels.  ``arrows``: (name, source, target)
    triples referring to vertex labels.  ``relations``: each a list of
    (coefficient, [arrow names]) terms; all terms of one relation must be
    parallel paths of length ≥ 1.  Paths compose left to right.  Basis
    enumeration stops at ``max_path_length``; failure to stabilize below
    the cap raises InfiniteDimensional.
    """
    from .exactlin import QQ

    if field is None:
        field = QQ
    f = field
    vlabels = [str(v) for v in vertices]
    vindex = {v: i for i, v in enumerate(vlabels)}
    if len(vindex) != len(vlabels):
        raise MalformedRelation("duplicate vertex labels")
    arrow_map = {}
    for name, s, t in arrows:
        if name in arrow_map or name in vindex:
            raise MalformedRelation("duplicate arrow name %r" % name)
        if str(s) not in vindex or str(t) not in vindex:
            raise MalformedRelation("arrow %r references unknown vertex" % name)
        arrow_map[name] = (vindex[str(s)], vindex[str(t)])

    def path_of(names):
        if not names:
            raise MalformedRelation("relations may not involve trivial paths")
        if names[0] not in arrow_map:
            raise MalformedRelation("unknown arrow %r" % names[0])
        src, at = arrow_map[names[0]]
        for nm in names[1:]:
            if nm not in arrow_map:
                raise MalformedRelation("unknown arrow %r" % nm)
            s, t = arrow_map[nm]
            if s != at:
                raise MalformedRelation("path %r does not compose" % (list(names),))
            at = t
        return _Path(src, at, names)

    rels = []
    max_rel_len = 1
    for rel in relations:
        if not rel:
            raise MalformedRelation("empty relation")
        terms = [(f.coerce(c), path_of(list(names))) for c, names in rel]
        s0, t0 = terms[0][1].src, terms[0][1].tgt
        for _, p in terms[1:]:
            if (p.src, p.tgt) != (s0, t0):
                raise MalformedRelation(
                    "relation terms not parallel", witness=[list(p.arrows) for _, p in terms]
                )
        max_rel_len = max(max_rel_len, max(len(p) for _, p in terms))
        rels.append(terms)

    # enumerate paths by length, watching for stabilization
    paths_by_len = [[_Path(i, i, ()) for i in range(len(vlabels))]]
    arrow_items = sorted(arrow_map.items())

    def extend(plist):
        out = []
        for p in plist:
            for name, (s, t) in arrow_items:
                if s == p.tgt:
                    out.append(_Path(p.src, t, p.arrows + (name,)))
        return out

    stab = None
    L = 0
    while True:
        L += 1
        if L > max_path_length:
            raise InfiniteDimensional(
                "no finite basis below path length %d" % max_path_length
            )
        paths_by_len.append(extend(paths_by_len[-1]))
        if sum(len(pl) for pl in paths_by_len) > 200000:
            raise InfiniteDimensional("path enumeration exploded")
        if L < max_rel_len:
            continue
        if _stabilized(f, paths_by_len, rels, L):
            stab = L
            break

    # working window: products of basis paths have length < 2·stab
    window = 2 * stab
    while len(paths_by_len) - 1 < window:
        paths_by_len.append(extend(paths_by_len[-1]))
    all_paths = [p for pl in paths_by_len for p in pl]
    # reversed coordinate order: longest paths first, so ideal pivots sit
    # on long paths and normal forms prefer short ones
    order = sorted(range(len(all_paths)), key=lambda i: i, reverse=True)
    coord_of = {all_paths[i].key(): pos for pos, i in enumerate(order)}
    width = len(all_paths)

    def vec_of_terms(terms):
        v = [f.zero()] * width
        for c, p in terms:
            v[coord_of[p.key()]] = f.add(v[coord_of[p.key()]], c)
        return v

    ideal = SpanBuilder(f, width)
    frontier = []
    for terms in rels:
        v = vec_of_terms(terms)
        if ideal.add(v):
            frontier.append([(c, p) for c, p in terms])
    while frontier:
        nxt = []
        for terms in frontier:
            for name, (s, t) in arrow_items:
                left = [
                    (c, _Path(s, p.tgt, (name,) + p.arrows))
                    for c, p in terms
                    if p.src == t
                ]
                if left and all(len(p) <= window for _, p in left):
                    if ideal.add(vec_of_terms(left)):
                        nxt.append(left)
                right = [
                    (c, _Path(p.src, t, p.arrows + (name,)))
                    for c, p in terms
                    if p.tgt == s
                ]
                if right and all(len(p) <= window for _, p in right):
                    if ideal.add(vec_of_terms(right)):
                        nxt.append(right)
        frontier = nxt

    pivot_set = set(ideal.pivots)
    basis_paths = [
        p for p in all_paths if coord_of[p.key()] not in pivot_set and len(p) < stab
    ]
    # sanity: every enumerated path of length ≥ stab must be reducible
    for p in all_paths:
        if len(p) >= stab and coord_of[p.key()] not in pivot_set:
            reduced = ideal._reduce(_unit_vec(f, width, coord_of[p.key()]))
            if any(
                not f.is_zero(reduced[coord_of[q.key()]])
                for q in all_paths
                if len(q) >= stab
            ):
                raise InfiniteDimensional(
                    "path of length %d fails to reduce below the stabilization length"
                    % len(p)
                )
    index_of = {p.key(): i for i, p in enumerate(basis_paths)}

    def normal_coords(terms):
        v = ideal._reduce(vec_of_terms(terms))
        out = [f.zero()] * len(basis_paths)
        for pos, c in enumerate(v):
            if f.is_zero(c):
                continue
            p = all_paths[order[pos]]
            out[index_of[p.key()]] = c
        return out

    mult = []
    for pi in basis_paths:
        row = []
        for pj in basis_paths:
            if pi.tgt != pj.src:
                row.append([f.zero()] * len(basis_paths))
            else:
                row.append(
                    normal_coords([(f.one(), _Path(pi.src, pj.tgt, pi.arrows + pj.arrows))])
                )
        mult.append(row)
    unit = [f.zero()] * len(basis_paths)
    idems = []
    for i, v in enumerate(vlabels):
        trivial = _Path(i, i, ())
        unit[index_of[trivial.key()]] = f.one()
        evec = [f.zero()] * len(basis_paths)
        evec[index_of[trivial.key()]] = f.one()
        idems.append(("vertex:%s" % v, evec))
    labels = [p.label(vlabels) for p in basis_paths]
    return Algebra(f, mult, unit, basis_labels=labels, idempotents=idems)


def _unit_vec(f, width, pos):
    v = [f.zero()] * width
    v[pos] = f.one()
    return v


def _stabilized(f, paths_by_len, rels, L):
    """All length-L paths congruent to shorter ones modulo the ideal slice."""
    all_paths = [p for pl in paths_by_len for p in pl]
    order = sorted(range(len(all_paths)), key=lambda i: i, reverse=True)
    coord_of = {all_paths[i].key(): pos for pos, i in enumerate(order)}
    width = len(all_paths)
    span = SpanBuilder(f, width)
    arrow_steps = {}
    frontier = []
    for terms in rels:
        if max(len(p) for _, p in terms) > L:
            return False
        v = [f.zero()] * width
        for c, p in terms:
            v[coord_of[p.key()]] = f.add(v[coord_of[p.key()]], c)
        if span.add(v):
            frontier.append(terms)
    # arrow endpoints recoverable from relation paths’ neighbours
    for pl in paths_by_len[1]:
        arrow_steps[pl.arrows[0]] = (pl.src, pl.tgt)
    while frontier:
        nxt = []
        for terms in frontier:
            for name, (s, t) in sorted(arrow_steps.items()):
                left = [
                    (c, _Path(s, p.tgt, (name,) + p.arrows))
                    for c, p in terms
                    if p.src == t
                ]
                if left and all(len(p) <= L for _, p in left):
                    v = [f.zero()] * width
                    for c, p in left:
                        v[coord_of[p.key()]] = f.add(v[coord_of[p.key()]], c)
                    if span.add(v):
                        nxt.append(left)
                right = [
                    (c, _Path(p.src, t, p.arrows + (name,)))
                    for c, p in terms
                    if p.tgt == s
                ]
                if right and all(len(p) <= L for _, p in right):
                    v = [f.zero()] * width
                    for c, p in right:
                        v[coord_of[p.key()]] = f.add(v[coord_of[p.key()]], c)
                    if span.add(v):
                        nxt.append(right)
        frontier = nxt
    for p in paths_by_len[L]:
        target = [f.zero()] * width
        target[coord_of[p.key()]] = f.one()
        reduced = span._reduce(target)
        if any(
            not f.is_zero(reduced[coord_of[q.key()]])
            for q in paths_by_len[L]
        ):
            return False
    return True


# ---------------------------------------------------------------------------
# polynomials (internal helpers for idempotent lifting)


def _poly_trim(f, p):
    while p and f.is_zero(p[-1]):
        p.pop()
    return p


def _poly_eval(f, p, x):
    acc = f.zero()
    for c in reversed(p):
        acc = f.add(f.mul(acc, x), c)
    return acc


def _poly_mul(f, p, q):
    if not p or not q:
        return []
    out = [f.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if f.is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = f.add(out[i + j], f.mul(a, b))
    return _poly_trim(f, out)


def _poly_divmod(f, p, q):
    p = list(p)
    out = [f.zero()] * max(0, len(p) - len(q) + 1)
    inv = f.inv(q[-1])
    while len(p) >= len(q) and p:
        c = f.mul(p[-1], inv)
        d = len(p) - len(q)
        out[d] = c
        for i, b in enumerate(q):
            p[d + i] = f.sub(p[d + i], f.mul(c, b))
        _poly_trim(f, p)
    return _poly_trim(f, out), p


def _poly_ext_gcd(f, p, q):
    """(g, u, v) with u·p + v·q = g, g monic."""
    r0, r1 = list(p), list(q)
    s0, s1 = [f.one()], []
    t0, t1 = [], [f.one()]
    while r1:
        qt, r = _poly_divmod(f, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(f, s0, _poly_mul(f, qt, s1))
        t0, t1 = t1, _poly_sub(f, t0, _poly_mul(f, qt, t1))
    if r0:
        inv = f.inv(r0[-1])
        r0 = [f.mul(inv, c) for c in r0]
        s0 = [f.mul(inv, c) for c in s0]
        t0 = [f.mul(inv, c) for c in t0]
    return r0, s0, t0


def _poly_sub(f, p, q):
    out = [f.zero()] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] = c
    for i, c in enumerate(q):
        out[i] = f.sub(out[i], c)
    return _poly_trim(f, out)


def _matrix_min_poly(m):
    """Monic minimal polynomial of a square matrix, low-degree first."""
    f = m.field
    n = m.nrows
    powers = [Matrix.identity(f, n)]
    flat = lambda mm: [e for r in mm.rows for e in r]
    while True:
        powers.append(powers[-1].mul(m))
        k = len(powers) - 1
        cols = Matrix(f, [flat(p) for p in powers[:k]], n * n).transpose()
        x = solve(cols, flat(powers[k]))
        if x is not None:
            coeffs = [f.neg(c) for c in x] + [f.one()]
            return _poly_trim(f, coeffs)


def _rational_roots(poly):
    """Roots in Q of a polynomial with Fraction coefficients."""
    denom_lcm = 1
    for c in poly:
        denom_lcm = denom_lcm * c.denominator // _gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in poly]
    roots = []
    low = 0
    while low < len(ints) and ints[low] == 0:
        low += 1
    if low > 0:
        roots.append(Fraction(0))
    if low >= len(ints) - 1:
        return roots
    a0, an = abs(ints[low]), abs(ints[-1])
    if a0 > 10**12 or an > 10**12:
        return roots
    seen = set()
    for p in _divisors(a0):
        for q in _divisors(an):
            for sign in (1, -1):
                cand = Fraction(sign * p, q)
                if cand in seen:
                    continue
                seen.add(cand)
                acc = Fraction(0)
                for c in reversed(poly):
                    acc = acc * cand + c
                if acc == 0:
                    roots.append(cand)
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return []
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def _field_roots(f, poly):
    if f.characteristic == 0:
        return list(_rational_roots(poly))
    if f.characteristic <= 4096:
        return [x for x in range(f.characteristic) if f.is_zero(_poly_eval(f, poly, x))]
    roots = []
    for x in list(range(64)) + [f.characteristic - k for k in range(1, 64)]:
        if f.is_zero(_poly_eval(f, poly, x % f.characteristic)):
            roots.append(x % f.characteristic)
    return roots


# ---------------------------------------------------------------------------
# idempotent lifting


def lift_idempotents(a):
    """Complete list of orthogonal primitive idempotents summing to 1.

    Recursive corner splitting: inside each corner eAe, hunt for an
    element whose minimal polynomial has a root in the base field with a
    nontrivial complementary factor; the corresponding spectral
    idempotent splits the corner.  A corner whose semisimple quotient is
    one-dimensional is local, so its unit is primitive.  If a corner of
    semisimple dimension > 1 defeats the search, the split-semisimplicity
    precondition fails and NotSplit is raised.
    """
    cached = getattr(a, "_idempotent_cache", None)
    if cached is not None:
        return [list(e) for e in cached]
    f = a.field
    result = []
    _split_corner(a, a.unit, result)
    total = [f.zero()] * a.dim
    for e in result:
        total = [f.add(x, y) for x, y in zip(total, e)]
    if total != a.unit:
        raise SphertwistError("lifted idempotents do not sum to 1")
    for i, e in enumerate(result):
        for e2 in result[i + 1 :]:
            if any(not f.is_zero(c) for c in a.mul_vec(e, e2)):
                raise SphertwistError("lifted idempotents not orthogonal")
            if any(not f.is_zero(c) for c in a.mul_vec(e2, e)):
                raise SphertwistError("lifted idempotents not orthogonal")
    a._idempotent_cache = [list(e) for e in result]
    return result


def refine_idempotent(a, e):
    """Split one idempotent into orthogonal primitives summing to it.

    Same corner-splitting search as lift_idempotents, but started from a
    given idempotent instead of the unit.
    """
    f = a.field
    ee = a.mul_vec(e, e)
    if ee != list(e):
        raise SphertwistError("refine_idempotent needs an idempotent")
    if all(f.is_zero(c) for c in e):
        return []
    out = []
    _split_corner(a, list(e), out)
    total = [f.zero()] * a.dim
    for piece in out:
        total = [f.add(x, y) for x, y in zip(total, piece)]
    if total != list(e):
        raise SphertwistError("refined idempotents do not sum to the input")
    return out


def _corner_basis(a, e):
    sb = SpanBuilder(a.field, a.dim)
    for i in range(a.dim):
        sb.add(a.mul_vec(a.mul_vec(e, a.basis_vector(i)), e))
    return [list(r) for r in sb.rows], list(sb.pivots)


def _split_corner(a, e, out):
    f = a.field
    basis, pivots = _corner_basis(a, e)
    n = len(basis)
    if n == 1:
        out.append(e)
        return

    def coords(vec):
        # basis rows are rref, so coordinates sit at the pivots
        return [vec[p] for p in pivots]

    def left_mat(x):
        return Matrix(f, [coords(a.mul_vec(x, c)) for c in basis], n)

    # semisimple dimension of the corner via its own trace form
    lmats = [left_mat(c) for c in basis]
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            prod = coords(a.mul_vec(basis[i], basis[j]))
            t = f.zero()
            for k, c in enumerate(prod):
                if not f.is_zero(c):
                    t = f.add(t, f.mul(c, _trace(lmats[k])))
            row.append(t)
        gram.append(row)
    if f.characteristic != 0 and f.characteristic <= n:
        raise UnsupportedCharacteristic(
            "corner of dim %d over char %d: radical criterion unavailable"
            % (n, f.characteristic)
        )
    rad_dim = kernel_basis(Matrix(f, gram, n)).ncols
    if n - rad_dim == 1:
        out.append(e)          # local corner: e is primitive
        return

    split = _find_corner_idempotent(a, e, basis, left_mat)
    if split is None:
        raise NotSplit(
            "corner of semisimple dimension %d admits no field-rational splitting"
            % (n - rad_dim),
            witness=e,
        )
    e1 = split
    e2 = [f.sub(x, y) for x, y in zip(e, e1)]
    _split_corner(a, e1, out)
    _split_corner(a, e2, out)


def _find_corner_idempotent(a, e, basis, left_mat):
    """Nontrivial idempotent in eAe via spectral projectors, or None."""
    f = a.field
    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append([f.add(x, y) for x, y in zip(basis[i], basis[j])])
    rng = random.Random(91)
    for _ in range(160):
        v = [f.zero()] * a.dim
        for b in basis:
            c = f.coerce(rng.randint(-3, 3))
            v = [f.add(x, f.mul(c, y)) for x, y in zip(v, b)]
        candidates.append(v)
    for z in candidates:
        mp = _matrix_min_poly(left_mat(z))
        if len(mp) <= 2:
            continue
        for lam in _field_roots(f, mp):
            linear = [f.neg(lam), f.one()]
            m = 0
            rest = list(mp)
            while True:
                q, r = _poly_divmod(f, rest, linear)
                if r:
                    break
                rest = q
                m += 1
            if m == 0 or len(rest) < 2:
                continue      # need both spectral factors nontrivial
            f1 = [f.one()]
            for _ in range(m):
                f1 = _poly_mul(f, f1, linear)
            g, u, v = _poly_ext_gcd(f, f1, rest)
            if len(g) != 1:
                continue
            inv = f.inv(g[0])
            v = [f.mul(inv, c) for c in v]
            q_poly = _poly_mul(f, v, rest)   # ≡1 mod (t−λ)^m, ≡0 mod rest
            q_poly = _poly_divmod(f, q_poly, mp)[1]
            # evaluate q(z) inside the algebra, with e as the unit
            acc = [f.zero()] * a.dim
            for c in reversed(q_poly):
                acc = a.mul_vec(acc, z)
                acc = [f.add(x, f.mul(c, y)) for x, y in zip(acc, e)]
            if all(f.is_zero(c) for c in acc):
                continue
            if acc == e:
                continue
            if a.mul_vec(acc, acc) == acc:
                return acc
    return None
