"""Partial covers and resolutions over endomorphism algebras of generators.

The independent oracle here recomputes the block-relative radical by
enumeration: every maximal submodule containing the reachable part is
the kernel of a hom to a simple, so the relative radical is the joint
kernel of all such homs.  The production code uses the
preimage-of-the-radical formula instead; the two must agree exactly.
"""

import pytest

from sphertwist.algebra import refine_idempotent
from sphertwist.errors import (
    CapExceeded,
    NotSurjective,
    ShapeMismatch,
    SphertwistError,
)
from sphertwist.exactlin import Matrix, SpanBuilder, kernel_basis, rank, row_space_canonical
from sphertwist.frobenius import build_context, hom_module, strip_projective_summands, syzygy
from sphertwist.modules import (
    Module,
    ModuleHom,
    direct_sum,
    find_isomorphism,
    hom_space,
    in_add,
    kernel_of,
    module_radical,
    projective_cover,
    quotient,
    simple_modules,
)
from sphertwist.resolutions import (
    Resolution,
    extract_shape,
    is_partially_essential,
    is_perfect,
    is_projective,
    minimal_resolution,
    partial_cover,
    partially_minimal_resolution,
    projective_dimension,
    radd0,
    stable_idempotent_module,
    stable_module,
    stable_simples,
)

from fixture_algebras import cyclic_nakayama, dual_numbers


# ---------------------------------------------------------------------------
# shared contexts


@pytest.fixture(scope="module")
def ctx_dual():
    a = dual_numbers()
    s = simple_modules(a)[0]
    return build_context(a, Module.regular(a), [(s, 1)])


@pytest.fixture(scope="module")
def ctx_cycle():
    a = cyclic_nakayama(3)
    sims = simple_modules(a)
    return build_context(a, Module.regular(a), [(x, 1) for x in sims])


@pytest.fixture(scope="module")
def ctx_cycle_one():
    a = cyclic_nakayama(3)
    sims = simple_modules(a)
    return build_context(a, Module.regular(a), [(sims[0], 1)])


def vertex_of(a, s):
    for v in range(a.dim):
        if list(s.tag) == a.basis_vector(v):
            return v
    raise AssertionError("simple tag is not a basis idempotent")


def span_rows(f, width, rows):
    sb = SpanBuilder(f, width)
    for r in rows:
        sb.add(list(r))
    return sb


# ---------------------------------------------------------------------------
# the oracle: relative radical by maximal-submodule enumeration


def oracle_radd0(ctx, m):
    """Joint kernel of every hom to a simple that kills m·e₀·Λ."""
    lam = ctx.endo
    f = lam.field
    if m.dim == 0:
        return Matrix.zero(f, 0, 0)
    reach = SpanBuilder(f, m.dim)
    act0 = m.action_of(ctx.e_proj)
    for r in range(m.dim):
        v = list(act0.rows[r])
        for i in range(lam.dim):
            reach.add(Matrix(f, [v], m.dim).mul(m.action[i]).rows[0])
    urows = reach.basis_matrix()
    mats = []
    for s in simple_modules(lam):
        homs = hom_space(m, s)
        if not homs:
            continue
        sys_rows = []
        for u in urows.rows:
            imgs = [
                Matrix(f, [list(u)], m.dim).mul(h.matrix).rows[0] for h in homs
            ]
            for j in range(s.dim):
                sys_rows.append([imgs[k][j] for k in range(len(homs))])
        if sys_rows:
            sol = kernel_basis(Matrix(f, sys_rows, len(homs)))
        else:
            sol = Matrix.identity(f, len(homs))
        for cidx in range(sol.ncols):
            coeffs = sol.column(cidx)
            hmat = Matrix.zero(f, m.dim, s.dim)
            for k, c in enumerate(coeffs):
                hmat = hmat.add(homs[k].matrix.scale(c))
            mats.append(hmat)
    if not mats:
        return row_space_canonical(Matrix.identity(f, m.dim))
    big = mats[0]
    for h in mats[1:]:
        big = big.hstack(h)
    return row_space_canonical(kernel_basis(big.transpose()).transpose())


# ---------------------------------------------------------------------------
# the relative radical


def test_radd0_of_projective_type_ideal_is_everything(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        pe0, _ = ctx.right_ideal(ctx.e_proj)
        rows = radd0(ctx, pe0)
        assert rows.nrows == pe0.dim


def test_radd0_of_stable_simple_is_zero(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        for t in stable_simples(ctx):
            assert radd0(ctx, t).nrows == 0


def test_radd0_matches_maximal_submodule_oracle(ctx_dual, ctx_cycle_one):
    cases = []
    for ctx in (ctx_dual, ctx_cycle_one):
        pe0, _ = ctx.right_ideal(ctx.e_proj)
        pe1, _ = ctx.right_ideal(ctx.e_extra[0])
        cases.append((ctx, pe0))
        cases.append((ctx, pe1))
        cases.append((ctx, Module.regular(ctx.endo)))
        cases.append((ctx, stable_module(ctx)))
    for ctx, m in cases:
        assert radd0(ctx, m) == oracle_radd0(ctx, m)


def test_radd0_contains_radical(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        for m in (Module.regular(ctx.endo), ctx.right_ideal(ctx.e_extra[0])[0]):
            allowed = span_rows(ctx.endo.field, m.dim, radd0(ctx, m).rows)
            for r in module_radical(m).rows:
                assert allowed.contains(list(r))


# ---------------------------------------------------------------------------
# partially essential surjections


def test_identity_is_partially_essential(ctx_dual):
    pe1, _ = ctx_dual.right_ideal(ctx_dual.e_extra[0])
    ident = ModuleHom(pe1, pe1, Matrix.identity(ctx_dual.endo.field, pe1.dim))
    assert is_partially_essential(ctx_dual, ident)


def test_partial_essentiality_rejects_non_surjections(ctx_dual):
    pe1, _ = ctx_dual.right_ideal(ctx_dual.e_extra[0])
    rad = module_radical(pe1)
    sub_rows = [list(r) for r in rad.rows]
    from sphertwist.modules import submodule

    _, incl = submodule(pe1, sub_rows)
    with pytest.raises(NotSurjective):
        is_partially_essential(ctx_dual, incl)


def test_projective_cover_is_partially_essential(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        for t in stable_simples(ctx):
            _, epi = projective_cover(t)
            assert is_partially_essential(ctx, epi)


def test_stable_quotient_of_summand_ideal_is_partially_essential(ctx_dual):
    ctx = ctx_dual
    pe1, incl = ctx.right_ideal(ctx.e_extra[0])
    # push the ideal through the stable quotient and divide by the kernel
    to_con = incl.matrix.mul(ctx.to_stable.matrix)
    push = ModuleHom(pe1, stable_module(ctx), to_con)
    k, kincl = kernel_of(push)
    assert k.dim == 1
    q, proj = quotient(pe1, [list(r) for r in kincl.matrix.rows])
    assert is_partially_essential(ctx, proj)
    assert find_isomorphism(q, stable_idempotent_module(ctx, 0)) is not None


def test_composites_of_partially_essential_epis(ctx_dual, ctx_cycle_one):
    # divide by a cyclic submodule of the relative radical, twice over;
    # the composite must again have its kernel inside the relative radical
    for ctx in (ctx_dual, ctx_cycle_one):
        lam = ctx.endo
        f = lam.field
        m = Module.regular(lam)
        first = radd0(ctx, m)
        for row in [list(r) for r in first.rows]:
            gen_rows = [
                Matrix(f, [row], m.dim).mul(m.action[i]).rows[0]
                for i in range(lam.dim)
            ]
            q1, p1 = quotient(m, gen_rows)
            assert is_partially_essential(ctx, p1)
            second = radd0(ctx, q1)
            if second.nrows == 0:
                continue
            row2 = list(second.rows[0])
            gen2 = [
                Matrix(f, [row2], q1.dim).mul(q1.action[i]).rows[0]
                for i in range(lam.dim)
            ]
            q2, p2 = quotient(q1, gen2)
            assert is_partially_essential(ctx, p2)
            assert is_partially_essential(ctx, p1.compose(p2))


# ---------------------------------------------------------------------------
# partial covers


def test_partial_cover_of_projective_is_isomorphism(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        for e in [ctx.e_proj, ctx.e_extra[0]]:
            pe, _ = ctx.right_ideal(e)
            q, epi = partial_cover(ctx, pe)
            assert q.dim == pe.dim
            assert rank(epi.matrix) == pe.dim
        reg = Module.regular(ctx.endo)
        q, epi = partial_cover(ctx, reg)
        assert q.dim == reg.dim


def test_partial_cover_of_stable_summand_ideal(ctx_dual):
    ctx = ctx_dual
    target = stable_idempotent_module(ctx, 0)
    q, epi = partial_cover(ctx, target)
    pe1, _ = ctx.right_ideal(ctx.e_extra[0])
    assert q.dim == pe1.dim
    assert find_isomorphism(q, pe1) is not None
    assert is_partially_essential(ctx, epi)


def test_partial_cover_takes_summand_pieces_first(ctx_cycle):
    # a mixed top: one stable simple plus one projective-type top;
    # scenario order puts the summand ideals before the refined pieces
    ctx = ctx_cycle
    prims = refine_idempotent(ctx.endo, ctx.e_proj)
    pe, _ = ctx.right_ideal(prims[0])
    top, _ = quotient(pe, [list(r) for r in module_radical(pe).rows])
    mixed, _, _ = direct_sum([stable_simples(ctx)[1], top])
    q, epi = partial_cover(ctx, mixed)
    assert epi.cover_idempotents[0] == ctx.e_copies[1][0]
    assert is_partially_essential(ctx, epi)
    assert rank(epi.matrix) == mixed.dim


def test_partial_cover_kernels_sit_in_relative_radical(ctx_dual, ctx_cycle_one):
    for ctx in (ctx_dual, ctx_cycle_one):
        mods = [stable_module(ctx)] + stable_simples(ctx)
        for m in mods:
            _, epi = partial_cover(ctx, m)
            assert is_partially_essential(ctx, epi)


# ---------------------------------------------------------------------------
# resolutions: the frozen shapes


def test_stable_algebra_resolution_shape(ctx_dual):
    res = partially_minimal_resolution(ctx_dual, stable_module(ctx_dual))
    assert res.length == 2
    assert res.term_dims == [2, 3, 2]
    assert not res.truncated
    assert res.minimal
    assert res.partially_minimal
    assert 2 - 3 + 2 == stable_module(ctx_dual).dim


def test_resolution_tail_matches_shifted_summand(ctx_dual):
    # the closing term realizes the maps from the generator into the
    # syzygy of the extra summand
    ctx = ctx_dual
    res = partially_minimal_resolution(ctx, stable_module(ctx))
    shifted = strip_projective_summands(syzygy(ctx.summands[1][0]))
    tail_model, _ = hom_module(ctx, shifted)
    assert find_isomorphism(res.terms[-1], tail_model) is not None


def test_projective_resolves_to_length_zero(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        pe0, _ = ctx.right_ideal(ctx.e_proj)
        res = partially_minimal_resolution(ctx, pe0)
        assert res.length == 0
        assert res.minimal and res.partially_minimal


def test_zero_module_resolution(ctx_dual):
    z = Module.zero(ctx_dual.endo)
    res = partially_minimal_resolution(ctx_dual, z)
    assert res.length == 0
    assert res.term_dims == [0]


def test_cycle_context_resolutions_and_window(ctx_cycle):
    ctx = ctx_cycle
    amb = ctx.ambient
    taus = {}
    for i in range(3):
        res = partially_minimal_resolution(ctx, stable_idempotent_module(ctx, i))
        assert res.length == 2
        assert res.term_dims == [2, 3, 2]
        rep = extract_shape(ctx, res, 2)
        taus[i] = rep.tau
    # read the permutation through the ambient vertex labels: one step
    # around the cycle, never the identity
    for i, j in taus.items():
        vi = vertex_of(amb, ctx.summands[i + 1][0])
        vj = vertex_of(amb, ctx.summands[j + 1][0])
        assert vj == (vi + 1) % 3
        assert j != i
    assert sorted(taus.values()) == [0, 1, 2]


def test_single_summand_cycle_resolution(ctx_cycle_one):
    ctx = ctx_cycle_one
    con = stable_module(ctx)
    assert con.dim == 1
    res = partially_minimal_resolution(ctx, con)
    assert res.length == 4
    total = 0
    for i, d in enumerate(res.term_dims):
        total += d if i % 2 == 0 else -d
    assert total == con.dim
    rep = extract_shape(ctx, res, 4)
    assert rep.tau == 0
    for t in (2, 3):
        with pytest.raises(ShapeMismatch):
            extract_shape(ctx, res, t)


def test_cap_exceeded_carries_truncated_witness(ctx_cycle_one):
    ctx = ctx_cycle_one
    with pytest.raises(CapExceeded) as info:
        partially_minimal_resolution(ctx, stable_module(ctx), cap=2)
    partial = info.value.witness
    assert isinstance(partial, Resolution)
    assert partial.truncated
    assert partial.length == 2
    assert partial.term_dims == [2, 2, 2]


def test_minimal_resolution_agrees_here(ctx_dual, ctx_cycle_one):
    for ctx in (ctx_dual, ctx_cycle_one):
        con = stable_module(ctx)
        a = partially_minimal_resolution(ctx, con)
        b = minimal_resolution(con, ctx=ctx)
        assert a.term_dims == b.term_dims
        assert b.minimal
        assert b.partially_minimal


def test_minimal_implies_partially_minimal(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        mods = stable_simples(ctx) + [stable_module(ctx)]
        for i in range(len(ctx.e_extra)):
            mods.append(stable_idempotent_module(ctx, i))
        for m in mods:
            res = minimal_resolution(m, ctx=ctx)
            assert (not res.minimal) or res.partially_minimal


def test_hom_into_stable_simples_kills_internal_maps(ctx_cycle_one):
    # recompute the defining property of the flag by hand
    ctx = ctx_cycle_one
    res = partially_minimal_resolution(ctx, stable_module(ctx))
    assert res.partially_minimal
    for h in res.maps:
        for s in stable_simples(ctx):
            for g in hom_space(h.target, s):
                assert h.compose(g).matrix.is_zero()


def test_resolution_audit_rejects_broken_exactness(ctx_dual):
    ctx = ctx_dual
    res = partially_minimal_resolution(ctx, stable_module(ctx))
    f = ctx.endo.field
    zero_map = ModuleHom(
        res.terms[1], res.terms[0],
        Matrix.zero(f, res.terms[1].dim, res.terms[0].dim),
    )
    with pytest.raises(SphertwistError):
        Resolution(
            res.target,
            res.terms,
            [zero_map] + res.maps[1:],
            res.augmentation,
        )


def test_resolution_audit_rejects_non_projective_term(ctx_dual):
    ctx = ctx_dual
    t1 = stable_simples(ctx)[0]
    ident = ModuleHom(t1, t1, Matrix.identity(ctx.endo.field, 1))
    with pytest.raises(SphertwistError):
        Resolution(t1, [t1], [], ident)


# ---------------------------------------------------------------------------
# projective dimension and perfection


def test_projective_dimension_of_projectives(ctx_dual):
    ctx = ctx_dual
    pe0, _ = ctx.right_ideal(ctx.e_proj)
    assert projective_dimension(ctx, pe0) == 0
    amb = ctx.ambient
    assert projective_dimension(amb, Module.regular(amb)) == 0


def test_projective_dimension_of_stable_algebra(ctx_dual):
    assert projective_dimension(ctx_dual, stable_module(ctx_dual)) == 2


def test_infinite_dimension_reports_the_cap(ctx_dual):
    amb = ctx_dual.ambient
    s = simple_modules(amb)[0]
    assert projective_dimension(amb, s) == "≥ 6"
    assert projective_dimension(amb, s, cap=9) == "≥ 9"
    assert not is_perfect(s)
    assert is_perfect(stable_module(ctx_dual))


def test_projective_dimension_rejects_foreign_modules(ctx_dual):
    amb = ctx_dual.ambient
    with pytest.raises(SphertwistError):
        projective_dimension(ctx_dual, Module.regular(amb))


def test_is_projective_agrees_with_additive_membership(ctx_dual, ctx_cycle):
    for ctx in (ctx_dual, ctx_cycle):
        lam = ctx.endo
        reg = Module.regular(lam)
        pe1, _ = ctx.right_ideal(ctx.e_extra[0])
        rad1 = module_radical(pe1)
        from sphertwist.modules import submodule

        sub1, _ = submodule(pe1, [list(r) for r in rad1.rows])
        cases = [pe1, sub1, stable_simples(ctx)[0]]
        for m in cases:
            if m.dim <= 8:
                assert is_projective(m) == in_add(m, reg)


# ---------------------------------------------------------------------------
# shape extraction edges


def test_extract_shape_window_floor(ctx_dual):
    res = partially_minimal_resolution(ctx_dual, stable_module(ctx_dual))
    with pytest.raises(SphertwistError):
        extract_shape(ctx_dual, res, 1)


def test_extract_shape_rejects_truncated(ctx_cycle_one):
    ctx = ctx_cycle_one
    with pytest.raises(CapExceeded) as info:
        partially_minimal_resolution(ctx, stable_module(ctx), cap=2)
    with pytest.raises(ShapeMismatch):
        extract_shape(ctx, info.value.witness, 2)


def test_extract_shape_rejects_twin_tails(ctx_cycle):
    # resolving two stable simples at once leaves two summand ideals in
    # the tail, which is not a sphere-like shape
    ctx = ctx_cycle
    pair, _, _ = direct_sum([stable_simples(ctx)[0], stable_simples(ctx)[1]])
    res = partially_minimal_resolution(ctx, pair)
    assert res.length == 2
    with pytest.raises(ShapeMismatch):
        extract_shape(ctx, res, 2)


def test_extract_shape_rejects_stable_piece_in_middle(ctx_cycle):
    # pad the middle and tail with a matching extra summand ideal: still
    # an exact resolution, but the middle leaves the projective-type
    # additive closure
    ctx = ctx_cycle
    f = ctx.endo.field
    base = partially_minimal_resolution(ctx, stable_idempotent_module(ctx, 0))
    pe1, _ = ctx.right_ideal(ctx.e_copies[1][0])
    mid, _, _ = direct_sum([base.terms[1], pe1])
    tail, _, _ = direct_sum([base.terms[2], pe1])
    f1 = base.maps[0].matrix.vstack(Matrix.zero(f, pe1.dim, base.terms[0].dim))
    top = base.maps[1].matrix.hstack(Matrix.zero(f, base.terms[2].dim, pe1.dim))
    bottom = Matrix.zero(f, pe1.dim, base.terms[1].dim).hstack(
        Matrix.identity(f, pe1.dim)
    )
    f2 = top.vstack(bottom)
    aug = ModuleHom(base.terms[0], base.target, base.augmentation.matrix)
    padded = Resolution(
        base.target,
        [base.terms[0], mid, tail],
        [ModuleHom(mid, base.terms[0], f1), ModuleHom(tail, mid, f2)],
        aug,
    )
    with pytest.raises(ShapeMismatch):
        extract_shape(ctx, padded, 2)


def test_refined_projective_type_pieces(ctx_dual, ctx_cycle):
    prims1 = refine_idempotent(ctx_dual.endo, ctx_dual.e_proj)
    assert len(prims1) == 1
    prims3 = refine_idempotent(ctx_cycle.endo, ctx_cycle.e_proj)
    assert len(prims3) == 3
    dims = sorted(ctx_cycle.right_ideal(e)[0].dim for e in prims3)
    assert dims == [3, 3, 3]


def test_stable_helpers_shapes(ctx_cycle):
    ctx = ctx_cycle
    con = stable_module(ctx)
    assert con.dim == 3
    for vec in ctx.proj_ideal:
        assert con.action_of(vec).is_zero()
    for i in range(3):
        assert stable_idempotent_module(ctx, i).dim == 1
    assert len(stable_simples(ctx)) == 3
