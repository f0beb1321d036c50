"""Modules-as-representations: homs, simples, covers, add-membership.

`oracle_in_add` is an independent implementation of add-membership used
to cross-check the production criterion: m lies in add(n) iff the
projection onto m belongs to the two-sided ideal generated by the
projection onto n inside End(m ⊕ n).  The two formulations share no
code beyond the hom-space solver.
"""

from fractions import Fraction

import pytest

from sphertwist.algebra import from_structure_constants
from sphertwist.errors import NotASubmodule
from sphertwist.exactlin import QQ, Matrix, SpanBuilder, rank
from sphertwist.modules import (
    Module,
    ModuleHom,
    cokernel_of,
    direct_sum,
    endomorphism_algebra,
    find_isomorphism,
    hom_space,
    identity_hom,
    image_of,
    in_add,
    is_indecomposable,
    kernel_of,
    module_radical,
    projective_cover,
    quotient,
    restrict_scalars,
    simple_modules,
    socle,
    submodule,
)
from sphertwist.algebra import quotient_surjection

from fixture_algebras import (
    cyclic_nakayama,
    dual_numbers,
    product_field_pair,
    two_vertex_arrow,
)


def oracle_in_add(m, n):
    """Ideal-membership formulation of add-membership (test oracle)."""
    f = m.algebra.field
    s, injs, projs = direct_sum([m, n])
    # projection endomorphisms of the sum: project then re-include
    pi_m = projs[0].matrix.mul(injs[0].matrix)
    pi_n = projs[1].matrix.mul(injs[1].matrix)
    ends = hom_space(s, s)
    width = s.dim * s.dim
    span = SpanBuilder(f, width)
    frontier = [pi_n]
    span.add(_flat(pi_n))
    while frontier:
        nxt = []
        for e in frontier:
            for h in ends:
                for prod in (h.matrix.mul(e), e.mul(h.matrix)):
                    if span.add(_flat(prod)):
                        nxt.append(prod)
        frontier = nxt
    return span.contains(_flat(pi_m))


def _flat(mat):
    return [e for row in mat.rows for e in row]


def simple_over(algebra, kill_index):
    """Dim-1 module where basis element kill_index acts by zero."""
    one = Matrix.identity(algebra.field, 1)
    zero = Matrix.zero(algebra.field, 1, 1)
    action = [one] * algebra.dim
    action[kill_index] = zero
    return Module(algebra, 1, action)


# ---------------------------------------------------------------------------
# hom spaces


def test_identity_is_a_hom():
    m = Module.regular(dual_numbers())
    homs = hom_space(m, m)
    ident = Matrix.identity(QQ, 2)
    span = SpanBuilder(QQ, 4)
    for h in homs:
        span.add(_flat(h.matrix))
    assert span.contains(_flat(ident))


def test_hom_simple_into_regular_dual_numbers():
    a = dual_numbers()
    s = simple_over(a, 1)
    reg = Module.regular(a)
    homs = hom_space(s, reg)
    assert len(homs) == 1
    # the image is the socle span{x}
    assert homs[0].matrix.rows[0] == [Fraction(0), Fraction(1)]


def test_hom_between_distinct_simples_vanishes():
    a = cyclic_nakayama(3)
    simples = simple_modules(a)
    assert len(simples) == 3
    for i, s in enumerate(simples):
        for j, t in enumerate(simples):
            assert len(hom_space(s, t)) == (1 if i == j else 0)


def test_hom_composition_is_a_hom():
    a = cyclic_nakayama(3)
    reg = Module.regular(a)
    simples = simple_modules(a)
    p, epi = projective_cover(simples[0])
    back = hom_space(reg, p)
    for h in back:
        comp = h.compose(epi)       # validated on construction
        assert comp.source is reg


# ---------------------------------------------------------------------------
# simples and covers


def test_simples_of_base_field():
    k = from_structure_constants(QQ, [[[1]]], [1])
    simples = simple_modules(k)
    assert len(simples) == 1
    assert simples[0].dim == 1


def test_simples_cyclic_three_all_dim_one():
    simples = simple_modules(cyclic_nakayama(3))
    assert [s.dim for s in simples] == [1, 1, 1]
    for s in simples:
        assert s.tag is not None


def test_simples_two_vertex():
    simples = simple_modules(two_vertex_arrow())
    assert [s.dim for s in simples] == [1, 1]


def test_cover_of_projective_is_identity_sized():
    a = dual_numbers()
    reg = Module.regular(a)
    p, epi = projective_cover(reg)
    assert p.dim == reg.dim
    assert rank(epi.matrix) == reg.dim


def test_cover_of_simple_dual_numbers():
    a = dual_numbers()
    s = simple_over(a, 1)
    p, epi = projective_cover(s)
    assert p.dim == 2
    ker, _ = kernel_of(epi)
    assert ker.dim == 1


def test_cover_of_simple_cyclic_three():
    a = cyclic_nakayama(3)
    simples = simple_modules(a)
    p, epi = projective_cover(simples[0])
    assert p.dim == 2


def test_cover_kernel_inside_radical():
    """The defining property: ker(epi) ⊆ rad(P)."""
    a = cyclic_nakayama(3)
    for s in simple_modules(a):
        p, epi = projective_cover(s)
        rad_rows = module_radical(p)
        span = SpanBuilder(QQ, p.dim)
        for r in rad_rows.rows:
            span.add(list(r))
        ker, incl = kernel_of(epi)
        for i in range(ker.dim):
            row = incl.matrix.rows[i]
            assert span.contains(list(row))


# ---------------------------------------------------------------------------
# constructions


def test_kernel_of_identity_vanishes():
    m = Module.regular(dual_numbers())
    ker, _ = kernel_of(identity_hom(m))
    assert ker.dim == 0


def test_kernel_rank_count():
    a = cyclic_nakayama(3)
    reg = Module.regular(a)
    simples = simple_modules(a)
    for s in simples:
        for h in hom_space(reg, s):
            ker, _ = kernel_of(h)
            assert ker.dim + rank(h.matrix) == reg.dim


def test_socle_equals_radical_for_dual_numbers():
    reg = Module.regular(dual_numbers())
    assert socle(reg) == module_radical(reg)
    assert socle(reg).nrows == 1


def test_cokernel_of_socle_inclusion():
    a = dual_numbers()
    reg = Module.regular(a)
    soc = socle(reg)
    sub, incl = submodule(reg, soc)
    cok, proj = cokernel_of(incl)
    assert cok.dim == 1
    # x acts by zero on the quotient: it is the simple module
    assert cok.action[1].is_zero()


def test_quotient_rejects_non_submodule():
    reg = Module.regular(dual_numbers())
    with pytest.raises(NotASubmodule):
        quotient(reg, [[1, 0]])


def test_direct_sum_shapes_and_homs():
    a = cyclic_nakayama(3)
    simples = simple_modules(a)
    s, injs, projs = direct_sum(simples)
    assert s.dim == 3
    for inj, prj in zip(injs, projs):
        comp = inj.compose(prj)
        assert comp.matrix == Matrix.identity(QQ, inj.source.dim)


def test_image_of_cover_is_everything():
    a = cyclic_nakayama(3)
    s = simple_modules(a)[1]
    p, epi = projective_cover(s)
    img, _ = image_of(epi)
    assert img.dim == s.dim


def test_module_radical_of_regular_cyclic():
    reg = Module.regular(cyclic_nakayama(3))
    assert module_radical(reg).nrows == 3
    assert socle(reg).nrows == 3


# ---------------------------------------------------------------------------
# add-membership, with the independent oracle


def test_in_add_reflexive():
    m = Module.regular(cyclic_nakayama(3))
    assert in_add(m, m)


def test_in_add_simple_not_in_projectives():
    a = dual_numbers()
    s = simple_over(a, 1)
    reg = Module.regular(a)
    assert not in_add(s, reg)
    assert in_add(reg, reg)


def test_in_add_powers():
    a = dual_numbers()
    reg = Module.regular(a)
    double, _, _ = direct_sum([reg, reg])
    assert in_add(double, reg)
    assert in_add(reg, double)


def test_in_add_matches_oracle_on_fixture_pairs():
    a = dual_numbers()
    s = simple_over(a, 1)
    reg = Module.regular(a)
    both, _, _ = direct_sum([s, reg])
    n3 = cyclic_nakayama(3)
    n3_reg = Module.regular(n3)
    n3_simples = simple_modules(n3)
    p1, _ = projective_cover(n3_simples[0])
    pairs = [
        (s, reg),
        (reg, s),
        (s, both),
        (both, reg),
        (reg, both),
        (n3_simples[0], n3_reg),
        (p1, n3_reg),
        (n3_simples[0], n3_simples[0]),
        (n3_simples[0], n3_simples[1]),
    ]
    for m, n in pairs:
        assert m.dim + n.dim <= 14
        assert in_add(m, n) == oracle_in_add(m, n)


# ---------------------------------------------------------------------------
# duality, restriction, endomorphisms


def test_coregular_dual_numbers_selfdual():
    a = dual_numbers()
    reg = Module.regular(a)
    co = Module.coregular(a)
    iso = find_isomorphism(reg, co)
    assert iso is not None
    assert rank(iso.matrix) == 2


def test_coregular_two_vertex_not_regular():
    a = two_vertex_arrow()
    reg = Module.regular(a)
    co = Module.coregular(a)
    assert find_isomorphism(reg, co) is None
    assert not in_add(co, reg)


def test_restrict_scalars_pullback():
    a = dual_numbers()
    surj = quotient_surjection(a, [[0, 1]])
    b_reg = Module.regular(surj.target)
    pulled = restrict_scalars(surj, b_reg)
    assert pulled.dim == 1
    assert pulled.action[1].is_zero()       # x acts by zero upstairs


def test_endomorphism_algebra_of_regular():
    a = dual_numbers()
    end, homs = endomorphism_algebra(Module.regular(a))
    assert end.dim == 2
    assert len(homs) == 2


def test_endomorphism_algebra_of_simple():
    a = cyclic_nakayama(3)
    end, homs = endomorphism_algebra(simple_modules(a)[0])
    assert end.dim == 1


def test_indecomposability_verdicts():
    a = dual_numbers()
    s = simple_over(a, 1)
    reg = Module.regular(a)
    assert is_indecomposable(s)[0]
    assert is_indecomposable(reg)[0]
    pair = Module.regular(product_field_pair())
    assert not is_indecomposable(pair)[0]
    both, _, _ = direct_sum([s, s])
    assert not is_indecomposable(both)[0]


def test_find_isomorphism_distinguishes_simples():
    simples = simple_modules(cyclic_nakayama(3))
    assert find_isomorphism(simples[0], simples[0]) is not None
    assert find_isomorphism(simples[0], simples[1]) is None
