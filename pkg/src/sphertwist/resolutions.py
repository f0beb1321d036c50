"""Projective resolutions, minimal and relative to a projective-type block.

Over the endomorphism algebra of a chosen generator, the idempotent
splitting off its projective part singles out a class of covers that are
only required to be minimal away from that block.  The resulting
"partially minimal" resolutions are the ones whose shape detects the
relative sphericity of the extra summands: middle terms confined to the
additive closure of the projective-type ideal, and a tail that splits
into a projective-type part plus the image of a single summand.

Conventions: a resolution of m is terms[0] ← terms[1] ← ... with
maps[i] : terms[i+1] → terms[i] and an augmentation terms[0] → m.
Exactness is audited degree-wise by rank bookkeeping, projectivity of
every term by the cover criterion (a module is projective exactly when
its projective cover has the same dimension).
"""

from __future__ import annotations

from .errors import (
    CapExceeded,
    NotSurjective,
    ShapeMismatch,
    SphertwistError,
)
from .algebra import refine_idempotent
from .exactlin import Matrix, SpanBuilder, kernel_basis, rank, row_space_canonical
from .frobenius import FrobeniusContext
from .modules import (
    Module,
    ModuleHom,
    direct_sum,
    hom_space,
    kernel_of,
    module_radical,
    projective_cover,
    quotient,
    restrict_scalars,
    simple_modules,
    submodule,
)


def is_projective(m):
    """True iff the projective cover of m is an isomorphism."""
    p, _ = projective_cover(m)
    return p.dim == m.dim


class Resolution:
    """A finite (or truncated) projective resolution, audited at birth.

    The constructor re-verifies everything a builder claims: shapes,
    zero composites, degree-wise exactness via ranks, surjectivity of
    the augmentation, projectivity of each term, and — when the
    resolution is complete — injectivity at the top together with the
    alternating dimension count against the target.
    """

    def __init__(
        self,
        target,
        terms,
        maps,
        augmentation,
        minimal=False,
        partially_minimal=None,
        truncated=False,
    ):
        if not terms:
            raise SphertwistError("a resolution needs at least one term")
        if len(maps) != len(terms) - 1:
            raise SphertwistError("resolution has %d terms but %d maps" % (
                len(terms), len(maps)))
        if augmentation.source is not terms[0] or augmentation.target is not target:
            raise SphertwistError("augmentation endpoints do not match")
        for i, h in enumerate(maps):
            if h.source is not terms[i + 1] or h.target is not terms[i]:
                raise SphertwistError("map %d endpoints do not match" % i)
        self.target = target
        self.terms = terms
        self.maps = maps
        self.augmentation = augmentation
        self.minimal = minimal
        self.partially_minimal = partially_minimal
        self.truncated = truncated
        self._audit()

    @property
    def length(self):
        return len(self.terms) - 1

    @property
    def term_dims(self):
        return [t.dim for t in self.terms]

    def _audit(self):
        aug = self.augmentation
        if rank(aug.matrix) != self.target.dim:
            raise SphertwistError("augmentation is not surjective")
        # composites vanish and images fill kernels, degree by degree
        ranks = [rank(aug.matrix)]
        prev = aug
        for i, h in enumerate(self.maps):
            if not h.compose(prev).matrix.is_zero():
                raise SphertwistError("composite through degree %d is nonzero" % i)
            r = rank(h.matrix)
            if r != self.terms[i].dim - ranks[-1]:
                raise SphertwistError("resolution is not exact at degree %d" % i)
            ranks.append(r)
            prev = h
        if not self.truncated:
            top = self.terms[-1]
            last = ranks[-1] if self.maps else ranks[0]
            if last != top.dim:
                raise SphertwistError("resolution is not exact at the top degree")
            total = 0
            for i, t in enumerate(self.terms):
                total += t.dim if i % 2 == 0 else -t.dim
            if total != self.target.dim:
                raise SphertwistError("alternating dimension count misses the target")
        for i, t in enumerate(self.terms):
            if not is_projective(t):
                raise SphertwistError("term %d is not projective" % i)

    def __repr__(self):
        dims = "<-".join(str(d) for d in self.term_dims)
        tag = ", truncated" if self.truncated else ""
        return "Resolution(length %d, terms %s, minimal=%s, partially_minimal=%s%s)" % (
            self.length, dims, self.minimal, self.partially_minimal, tag)


# ---------------------------------------------------------------------------
# the relative radical and partial covers


def radd0(ctx, m):
    """Row basis of the radical relative to the projective-type block.

    This is the preimage in m of rad(m / m·e·Λ) for the projective-type
    idempotent e: the intersection of the maximal submodules that
    contain everything reachable through the projective-type ideal.  A
    quotient map kills it exactly when the quotient is semisimple with
    the projective-type block acting by zero.
    """
    lam = ctx.endo
    f = lam.field
    if m.dim == 0:
        return Matrix.zero(f, 0, 0)
    act0 = m.action_of(ctx.e_proj)
    span = SpanBuilder(f, m.dim)
    for r in range(m.dim):
        v = list(act0.rows[r])
        for i in range(lam.dim):
            span.add(Matrix(f, [v], m.dim).mul(m.action[i]).rows[0])
    sub_rows = span.basis_matrix()
    q, proj = quotient(m, [list(r) for r in sub_rows.rows])
    if q.dim == 0:
        return row_space_canonical(Matrix.identity(f, m.dim))
    rad_rows = module_radical(q)
    z = kernel_basis(rad_rows)
    pulled = kernel_basis(proj.matrix.mul(z).transpose())
    return row_space_canonical(pulled.transpose())


def is_partially_essential(ctx, epi):
    """True iff the kernel of the surjection sits inside radd0(source)."""
    if rank(epi.matrix) != epi.target.dim:
        raise NotSurjective("partial essentiality is a property of surjections")
    allowed = radd0(ctx, epi.source)
    span = SpanBuilder(ctx.endo.field, epi.source.dim)
    for r in allowed.rows:
        span.add(list(r))
    _, incl = kernel_of(epi)
    return all(span.contains(list(r)) for r in incl.matrix.rows)


def _proj_type_primitives(ctx):
    cached = getattr(ctx, "_proj_prims", None)
    if cached is None:
        cached = refine_idempotent(ctx.endo, ctx.e_proj)
        ctx._proj_prims = cached
    return cached


def partial_cover(ctx, m):
    """(Q, epi) covering m summand by summand of its top.

    Top constituents coming from the extra summands are covered by the
    matching one-copy right ideals (taken in scenario order), everything
    else by primitive pieces of the projective-type idempotent.  The
    kernel lands inside the radical, hence inside radd0(Q) — each stage
    is partially essential, and a projective input is covered by an
    isomorphism.
    """
    lam = ctx.endo
    f = lam.field
    if m.dim == 0:
        z = Module.zero(lam)
        epi = ModuleHom(z, m, Matrix.zero(f, 0, 0), validate=False)
        epi.cover_idempotents = []
        return z, epi
    rad_rows = module_radical(m)
    span = SpanBuilder(f, m.dim)
    for r in rad_rows.rows:
        span.add(list(r))
    order = [copies[0] for copies in ctx.e_copies] + _proj_type_primitives(ctx)
    pieces = []
    gens = []
    for e in order:
        act_e = m.action_of(e)
        for r in range(m.dim):
            v = list(act_e.rows[r])
            if span.contains(v):
                continue
            pe, _ = ctx.right_ideal(e)
            pieces.append(pe)
            gens.append((v, e))
            for i in range(lam.dim):
                span.add(Matrix(f, [v], m.dim).mul(m.action[i]).rows[0])
    if not pieces:
        raise SphertwistError("nonzero module admits no partial cover")
    p_sum, _, _ = direct_sum(pieces)
    blocks = []
    for (v, e), pe in zip(gens, pieces):
        _, incl = ctx.right_ideal(e)
        rows = [
            Matrix(f, [v], m.dim).mul(m.action_of(list(w))).rows[0]
            for w in incl.matrix.rows
        ]
        blocks.append(Matrix(f, rows, m.dim))
    big = blocks[0]
    for b in blocks[1:]:
        big = big.vstack(b)
    epi = ModuleHom(p_sum, m, big)
    if rank(big) != m.dim:
        raise SphertwistError("partial cover candidate is not surjective")
    epi.cover_idempotents = [e for (_v, e) in gens]
    return p_sum, epi


# ---------------------------------------------------------------------------
# resolution builders


def _check_minimal(terms, maps):
    for i, h in enumerate(maps):
        rad = module_radical(terms[i])
        span = SpanBuilder(terms[i].algebra.field, terms[i].dim)
        for r in rad.rows:
            span.add(list(r))
        for r in h.matrix.rows:
            if not span.contains(list(r)):
                return False
    return True


def _check_partially_minimal(ctx, terms, maps):
    sims = stable_simples(ctx)
    for h in maps:
        for s in sims:
            for g in hom_space(h.target, s):
                if not h.compose(g).matrix.is_zero():
                    return False
    return True


def partially_minimal_resolution(ctx, m, cap=None):
    """Resolve m by iterated partial covers.

    Stops as soon as a kernel is projective (the kernel itself becomes
    the final term, included directly), or when the kernel vanishes.
    Raises CapExceeded — carrying the truncated resolution as witness —
    if the length would pass the cap (default 2·dim + 2).
    """
    lam = ctx.endo
    if m.algebra is not lam:
        raise SphertwistError("module lives over a different algebra")
    if cap is None:
        cap = 2 * lam.dim + 2
    if cap < 1:
        raise SphertwistError("resolution cap must be at least 1")
    p0, aug = partial_cover(ctx, m)
    terms = [p0]
    maps = []
    k, incl = kernel_of(aug)
    truncated = False
    while k.dim:
        if len(terms) > cap:
            truncated = True
            break
        if is_projective(k):
            terms.append(k)
            maps.append(incl)
            break
        q, epi = partial_cover(ctx, k)
        maps.append(epi.compose(incl))
        terms.append(q)
        k, incl = kernel_of(epi)
    res = Resolution(
        m,
        terms,
        maps,
        aug,
        minimal=_check_minimal(terms, maps),
        partially_minimal=_check_partially_minimal(ctx, terms, maps),
        truncated=truncated,
    )
    if truncated:
        raise CapExceeded(
            "resolution does not terminate within length %d" % cap, witness=res
        )
    return res


def minimal_resolution(m, cap=None, ctx=None):
    """Resolve m by iterated projective covers (kernels inside radicals).

    When a context is supplied the partial-minimality flag is evaluated
    too; otherwise it is left as None.
    """
    a = m.algebra
    if cap is None:
        cap = 2 * a.dim + 2
    if cap < 1:
        raise SphertwistError("resolution cap must be at least 1")
    p0, aug = projective_cover(m)
    terms = [p0]
    maps = []
    k, incl = kernel_of(aug)
    truncated = False
    while k.dim:
        if len(terms) > cap:
            truncated = True
            break
        q, epi = projective_cover(k)
        maps.append(epi.compose(incl))
        terms.append(q)
        k, incl = kernel_of(epi)
    res = Resolution(
        m,
        terms,
        maps,
        aug,
        minimal=_check_minimal(terms, maps),
        partially_minimal=None
        if ctx is None
        else _check_partially_minimal(ctx, terms, maps),
        truncated=truncated,
    )
    if truncated:
        raise CapExceeded(
            "resolution does not terminate within length %d" % cap, witness=res
        )
    return res


def projective_dimension(ring, m, cap=None):
    """Length of the minimal resolution, or "≥ cap" when it overruns.

    The first argument may be a context (resolving over its
    endomorphism algebra) or the algebra itself.
    """
    a = ring.endo if isinstance(ring, FrobeniusContext) else ring
    if m.algebra is not a:
        raise SphertwistError("module lives over a different algebra")
    if cap is None:
        cap = 2 * a.dim + 2
    try:
        return minimal_resolution(m, cap=cap).length
    except CapExceeded:
        return "≥ %d" % cap


def is_perfect(m, cap=None):
    """True iff m has a finite projective resolution within the cap."""
    try:
        minimal_resolution(m, cap=cap)
        return True
    except CapExceeded:
        return False


# ---------------------------------------------------------------------------
# shape extraction


class ShapeReport:
    """What the tail of a window-length resolution splits into."""

    def __init__(self, tau, tail_projective_count, length):
        self.tau = tau
        self.tail_projective_count = tail_projective_count
        self.length = length

    def __repr__(self):
        return "ShapeReport(tau=%d, tail_projective_count=%d, length=%d)" % (
            self.tau, self.tail_projective_count, self.length)


def _piece_type(ctx, e):
    """Classify a primitive idempotent of the endomorphism algebra.

    Returns None for a projective-type piece, otherwise the index of the
    extra summand whose one-copy ideal it matches.  The test reads which
    block idempotent survives on the simple top of e·Λ.
    """
    cache = getattr(ctx, "_piece_type_cache", None)
    if cache is None:
        cache = {}
        ctx._piece_type_cache = cache
    key = tuple(e)
    if key in cache:
        return cache[key]
    pe, _ = ctx.right_ideal(e)
    top, _ = quotient(pe, [list(r) for r in module_radical(pe).rows])
    result = None
    hits = []
    if not top.action_of(ctx.e_proj).is_zero():
        hits.append(None)
    for j, copies in enumerate(ctx.e_copies):
        if not top.action_of(copies[0]).is_zero():
            hits.append(j)
    if len(hits) != 1:
        raise SphertwistError(
            "top of a primitive ideal meets %d blocks" % len(hits), witness=hits
        )
    result = hits[0]
    cache[key] = result
    return result


def extract_shape(ctx, res, t):
    """Check the window-t shape of a resolution and read off the target.

    Requires a complete resolution of length exactly t whose middle
    terms lie in the additive closure of the projective-type ideal and
    whose tail splits as a projective-type part plus the one-copy ideal
    of a single extra summand; returns that summand's index (with the
    projective multiplicity of the tail) in a ShapeReport.  Any
    violation raises ShapeMismatch — the relative-sphericity hypothesis
    fails for this summand.
    """
    if t < 2:
        raise SphertwistError("shape extraction needs a window of at least 2")
    if res.truncated:
        raise ShapeMismatch("resolution is truncated; no shape to extract")
    if res.length != t:
        raise ShapeMismatch(
            "resolution length %d does not match the window %d" % (res.length, t)
        )
    for i in range(1, t):
        _, epi = projective_cover(res.terms[i])
        if epi.source.dim != res.terms[i].dim:
            raise ShapeMismatch("middle term %d is not projective" % i)
        for e in epi.cover_idempotents:
            if _piece_type(ctx, e) is not None:
                raise ShapeMismatch(
                    "middle term %d leaves the projective-type closure" % i
                )
    tail = res.terms[t]
    p, epi = projective_cover(tail)
    if p.dim != tail.dim:
        raise ShapeMismatch("tail is not projective")
    extra_hits = []
    proj_count = 0
    for e in epi.cover_idempotents:
        j = _piece_type(ctx, e)
        if j is None:
            proj_count += 1
        else:
            extra_hits.append(j)
    if len(extra_hits) != 1:
        raise ShapeMismatch(
            "tail does not split as projective-type plus one summand ideal",
            witness=extra_hits,
        )
    return ShapeReport(extra_hits[0], proj_count, t)


# ---------------------------------------------------------------------------
# the stable quotient's modules, pulled back


def stable_module(ctx):
    """The stable endomorphism algebra as a module over the full one."""
    return restrict_scalars(ctx.to_stable, Module.regular(ctx.stable_endo))


def stable_simples(ctx):
    """Simples of the stable quotient, as modules over the full algebra."""
    cached = getattr(ctx, "_stable_simples", None)
    if cached is None:
        if ctx.stable_endo.dim == 0:
            cached = []
        else:
            cached = [
                restrict_scalars(ctx.to_stable, s)
                for s in simple_modules(ctx.stable_endo)
            ]
        ctx._stable_simples = cached
    return cached


def stable_idempotent_module(ctx, i):
    """One summand's ideal in the stable quotient, over the full algebra.

    The image of the i-th one-copy idempotent generates a right ideal of
    the stable algebra; this is that ideal viewed as a module over the
    full endomorphism algebra.
    """
    con = ctx.stable_endo
    e = ctx.to_stable.apply(ctx.e_copies[i][0])
    reg = stable_module(ctx)
    rows = [con.mul_vec(e, con.basis_vector(k)) for k in range(con.dim)]
    sub, _ = submodule(reg, rows)
    return sub
