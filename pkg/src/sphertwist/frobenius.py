"""Module categories over self-injective algebras, with stable structure.

Over a self-injective algebra the projective and injective modules
coincide, so homs modulo maps-through-projectives form a triangulated
quotient whose shift is the cosyzygy functor.  This module supplies the
detectors (self-injectivity, symmetry, the socle permutation of the
simples), stable hom spaces, syzygy/cosyzygy with projective-summand
stripping, and the bundled context around a chosen additive generator:
its endomorphism algebra, the ideal of maps factoring through a
projective, and the quotient onto the stable endomorphism algebra.
"""

from __future__ import annotations

import random

from .algebra import (
    enveloping,
    lift_idempotents,
    opposite,
    quotient_surjection,
)
from .errors import NotProgenerator, NotSelfInjective, SphertwistError
from .exactlin import Matrix, SpanBuilder, rank, solve, solve_matrix
from .modules import (
    Module,
    ModuleHom,
    cokernel_of,
    direct_sum,
    endomorphism_algebra,
    hom_space,
    in_add,
    kernel_of,
    projective_cover,
    simple_modules,
    socle,
    submodule,
)


def dual_module(m):
    """The vector-space dual as a right module over the opposite algebra.

    In dual-basis coordinates every action matrix simply transposes, and
    dualizing twice lands on a module with the original matrices over the
    original algebra (opposite algebras are cached in pairs).
    """
    aop = opposite(m.algebra)
    action = [mat.transpose() for mat in m.action]
    return Module(aop, m.dim, action, validate=False)


def is_self_injective(a):
    """Whether the regular module and its dual generate the same additive
    closure — projectives equal injectives exactly then."""
    cached = getattr(a, "_selfinj_cache", None)
    if cached is not None:
        return cached
    reg = Module.regular(a)
    co = Module.coregular(a)
    verdict = in_add(reg, co) and in_add(co, reg)
    a._selfinj_cache = verdict
    return verdict


def _require_self_injective(a):
    if not is_self_injective(a):
        raise NotSelfInjective("ambient algebra is not self-injective")


def injective_envelope(m):
    """(envelope module, embedding) — the smallest injective containing m.

    Built by dualizing a projective cover of the dual module over the
    opposite algebra; minimality of the cover dualizes to essentiality
    of the embedding.
    """
    a = m.algebra
    dm = dual_module(m)
    p, c = projective_cover(dm)
    env = Module(a, p.dim, [mat.transpose() for mat in p.action], validate=False)
    # the double dual has the same coordinates as m, so the dual of the
    # cover matrix is already the embedding matrix
    emb = ModuleHom(m, env, c.matrix.transpose(), validate=False)
    return env, emb


def stable_hom(m, n):
    """(stable dimension, basis of the maps factoring through a projective).

    A map factors through some projective exactly when it factors through
    the injective envelope of its source, so the factoring subspace is
    spanned by envelope-then-anything composites.
    """
    _require_self_injective(m.algebra)
    f = m.algebra.field
    homs = hom_space(m, n)
    if not homs:
        return 0, []
    env, emb = injective_envelope(m)
    span = SpanBuilder(f, m.dim * n.dim)
    for g in hom_space(env, n):
        comp = emb.matrix.mul(g.matrix)
        span.add([e for row in comp.rows for e in row])
    basis = []
    for r in span.basis_matrix().rows:
        mat = Matrix(f, [list(r)[j * n.dim : (j + 1) * n.dim] for j in range(m.dim)], n.dim)
        basis.append(ModuleHom(m, n, mat, validate=False))
    return len(homs) - len(basis), basis


def nakayama_permutation(a):
    """The socle permutation: sigma[i] = j when the socle of the i-th
    idempotent projective is the j-th simple.

    Indices refer to positions in ``simple_modules(a)``.
    """
    cached = getattr(a, "_nakayama_cache", None)
    if cached is not None:
        return cached
    _require_self_injective(a)
    simples = simple_modules(a)
    reg = Module.regular(a)
    sigma = []
    for s in simples:
        e = s.tag
        pe_rows = [a.mul_vec(e, a.basis_vector(i)) for i in range(a.dim)]
        pe, _ = submodule(reg, pe_rows, check=False)
        soc_mod, _ = submodule(pe, socle(pe), check=False)
        hits = [
            j
            for j, t in enumerate(simples)
            if soc_mod.dim == t.dim and hom_space(soc_mod, t)
        ]
        if len(hits) != 1:
            raise SphertwistError(
                "socle of an idempotent projective is not simple", witness=e
            )
        sigma.append(hits[0])
    if sorted(sigma) != list(range(len(simples))):
        raise SphertwistError("socle matching is not a permutation", witness=sigma)
    out = tuple(sigma)
    a._nakayama_cache = out
    return out


def _regular_bimodule(a, env):
    """The algebra as a right module over its enveloping algebra."""
    d = a.dim
    action = []
    for j in range(d):
        rj = a.right_mult_matrix(a.basis_vector(j))
        for i in range(d):
            li = a.left_mult_matrix(a.basis_vector(i))
            action.append(li.mul(rj))
    return Module(env, d, action)


def _dual_bimodule(a, env):
    """The dual of the algebra as a right module over its enveloping
    algebra: (f·(b⊗a))(x) = f(b·x·a)."""
    d = a.dim
    action = []
    for j in range(d):
        lj = a.left_mult_matrix(a.basis_vector(j))
        for i in range(d):
            ri = a.right_mult_matrix(a.basis_vector(i))
            action.append(lj.mul(ri).transpose())
    return Module(env, d, action)


def is_symmetric(a):
    """Whether the algebra is isomorphic to its dual as a bimodule.

    Solved over the enveloping algebra; an isomorphism is searched among
    hom-basis elements and seeded low-height combinations, so a negative
    over an infinite field is near-certain rather than proven, while a
    positive is exact.
    """
    cached = getattr(a, "_symmetric_cache", None)
    if cached is not None:
        return cached
    env = enveloping(a, a)
    reg = _regular_bimodule(a, env)
    dual = _dual_bimodule(a, env)
    homs = hom_space(reg, dual)
    found = any(rank(h.matrix) == a.dim for h in homs)
    if not found and homs:
        rng = random.Random(37)
        f = a.field
        for _ in range(200):
            acc = Matrix.zero(f, a.dim, a.dim)
            for h in homs:
                acc = acc.add(h.matrix.scale(f.coerce(rng.randint(-4, 4))))
            if rank(acc) == a.dim:
                found = True
                break
    a._symmetric_cache = found
    return found


# ---------------------------------------------------------------------------
# syzygy, cosyzygy, stripped suspension powers


def syzygy(m):
    """Kernel of a projective cover."""
    _require_self_injective(m.algebra)
    _, c = projective_cover(m)
    ker, _ = kernel_of(c)
    return ker


def cosyzygy(m):
    """Cokernel of the injective envelope."""
    _require_self_injective(m.algebra)
    _, emb = injective_envelope(m)
    coker, _ = cokernel_of(emb)
    return coker


def _indecomposable_projectives(a):
    reg = Module.regular(a)
    out = []
    for e in lift_idempotents(a):
        rows = [a.mul_vec(e, a.basis_vector(i)) for i in range(a.dim)]
        pe, _ = submodule(reg, rows, check=False)
        out.append(pe)
    return out


def strip_projective_summands(m):
    """Split off projective direct summands until none remain.

    An idempotent projective P divides m exactly when some pair of
    hom-basis elements u : P → m, v : m → P composes to an invertible
    endomorphism of P — End(P) is local, so a sum of non-units can never
    be the identity.  Each hit is split off through the explicit
    idempotent v·(uv)⁻¹·u on m and the complement kept.
    """
    a = m.algebra
    f = a.field
    projs = _indecomposable_projectives(a)
    cur = m
    while cur.dim:
        split = None
        for p in projs:
            if p.dim > cur.dim:
                continue
            into = hom_space(p, cur)
            back = hom_space(cur, p)
            for u in into:
                for v in back:
                    w = u.matrix.mul(v.matrix)
                    if rank(w) == p.dim:
                        split = (p, u, v, w)
                        break
                if split:
                    break
            if split:
                break
        if split is None:
            break
        p, u, v, w = split
        w_inv = solve_matrix(w, Matrix.identity(f, p.dim))
        proj_mat = v.matrix.mul(w_inv).mul(u.matrix)
        cur, _ = kernel_of(ModuleHom(cur, cur, proj_mat, validate=False))
    return cur


def suspension_power(m, k):
    """Iterated cosyzygy (k > 0) or syzygy (k < 0), with projective
    summands stripped after every step so dimensions stay tight."""
    _require_self_injective(m.algebra)
    cur = strip_projective_summands(m)
    step = cosyzygy if k > 0 else syzygy
    for _ in range(abs(k)):
        cur = strip_projective_summands(step(cur))
    return cur


# ---------------------------------------------------------------------------
# the bundled context


class FrobeniusContext:
    """Everything downstream layers need about one additive generator.

    ``total`` is the chosen module (projective part first, then the
    extra summands with multiplicities); ``endo`` its endomorphism
    algebra on the canonical hom basis; ``proj_ideal`` the coordinate
    basis of the maps factoring through projectives; ``to_stable`` the
    quotient onto ``stable_endo``.  ``e_proj`` and ``e_extra`` are the
    block idempotents of the summand decomposition inside ``endo``;
    ``e_copies[i]`` lists one projector per copy of extra summand i, so
    its entries are primitive whenever the summand is indecomposable.
    """

    def __init__(
        self,
        ambient,
        summands,
        total,
        endo,
        hom_basis,
        proj_ideal,
        to_stable,
        e_proj,
        e_extra,
        e_copies,
    ):
        self.ambient = ambient
        self.summands = summands
        self.total = total
        self.endo = endo
        self.hom_basis = hom_basis
        self.proj_ideal = proj_ideal
        self.to_stable = to_stable
        self.stable_endo = to_stable.target
        self.e_proj = e_proj
        self.e_extra = e_extra
        self.e_copies = e_copies
        self._ideal_cache = {}

    def right_ideal(self, e):
        """(e·endo as a right module, inclusion into the regular module)."""
        key = tuple(e)
        hit = self._ideal_cache.get(key)
        if hit is not None:
            return hit
        a = self.endo
        reg = Module.regular(a)
        rows = [a.mul_vec(e, a.basis_vector(i)) for i in range(a.dim)]
        pair = submodule(reg, rows, check=False)
        self._ideal_cache[key] = pair
        return pair

    def __repr__(self):
        return "FrobeniusContext(endo dim %d, stable dim %d)" % (
            self.endo.dim,
            self.stable_endo.dim,
        )


def _hom_coords(f, hom_basis, mat):
    flat = Matrix(
        f,
        [[e for row in h.matrix.rows for e in row] for h in hom_basis],
        mat.nrows * mat.ncols,
    ).transpose()
    x = solve(flat, [e for row in mat.rows for e in row])
    if x is None:
        raise SphertwistError("endomorphism escapes the hom basis")
    return x


def build_context(ambient, projective_part, extra_summands):
    """Assemble the context for total = projective_part ⊕ ⊕ Xᵢ^{aᵢ}.

    The projective part must generate the same additive closure as the
    regular module (and be projective); each extra summand comes with a
    positive multiplicity.
    """
    _require_self_injective(ambient)
    reg = Module.regular(ambient)
    if not (in_add(reg, projective_part) and in_add(projective_part, reg)):
        raise NotProgenerator(
            "projective part does not generate the module category"
        )
    blocks = [projective_part]
    block_owner = [None]  # which extra summand each block belongs to
    for idx, (x, mult) in enumerate(extra_summands):
        if mult < 1:
            raise SphertwistError("summand multiplicity must be positive")
        for _ in range(mult):
            blocks.append(x)
            block_owner.append(idx)
    total, injs, projs = direct_sum(blocks)
    endo, hom_basis = endomorphism_algebra(total)
    f = ambient.field

    def block_projector(b):
        return projs[b].matrix.mul(injs[b].matrix)

    e_proj = _hom_coords(f, hom_basis, block_projector(0))
    e_extra = []
    e_copies = []
    for idx in range(len(extra_summands)):
        mat = Matrix.zero(f, total.dim, total.dim)
        copies = []
        for b, owner in enumerate(block_owner):
            if owner == idx:
                mat = mat.add(block_projector(b))
                copies.append(_hom_coords(f, hom_basis, block_projector(b)))
        e_extra.append(_hom_coords(f, hom_basis, mat))
        e_copies.append(copies)
    for e in [e_proj] + e_extra:
        if not endo.is_idempotent(e):
            raise SphertwistError("block projector is not idempotent", witness=e)
    total_e = list(e_proj)
    for e in e_extra:
        total_e = [f.add(x, y) for x, y in zip(total_e, e)]
    if total_e != [f.coerce(c) for c in endo.unit]:
        raise SphertwistError("block idempotents do not sum to the identity")

    _, through_proj = stable_hom(total, total)
    ideal = [_hom_coords(f, hom_basis, h.matrix) for h in through_proj]
    pi = quotient_surjection(endo, ideal)
    summands = [(projective_part, 1)] + [(x, m) for x, m in extra_summands]
    return FrobeniusContext(
        ambient,
        summands,
        total,
        endo,
        hom_basis,
        ideal,
        pi,
        e_proj,
        e_extra,
        e_copies,
    )


def hom_module(ctx, n):
    """Maps from the chosen generator into n, as a right endo-module.

    The action precomposes: a map total → n pulled back along an
    endomorphism of total.  Returns (module, hom basis); the module's
    coordinates are taken in that basis.
    """
    homs = hom_space(ctx.total, n)
    d = len(homs)
    f = ctx.endo.field
    if d == 0:
        return Module.zero(ctx.endo), []
    flat = Matrix(
        f,
        [[e for row in h.matrix.rows for e in row] for h in homs],
        ctx.total.dim * n.dim,
    ).transpose()
    action = []
    for lam in ctx.hom_basis:
        rows = []
        for h in homs:
            composite = lam.matrix.mul(h.matrix)
            x = solve(flat, [e for row in composite.rows for e in row])
            if x is None:
                raise SphertwistError("precomposite escapes the hom basis")
            rows.append(x)
        action.append(Matrix(f, rows, d))
    return Module(ctx.endo, d, action), homs
