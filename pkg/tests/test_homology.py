"""Derived-functor tests with two-route oracles.

Every dimension list asserted here is frozen from an independent path:
Tor is computed by resolving either argument and the routes must agree;
the tensor square of a surjection is additionally recomputed one-sided
and compared against the bimodule-resolution route; Ext over a
self-injective algebra is cross-checked against stable homs of syzygy
powers.  The cycle fixture's twisting permutation is re-derived from
resolution shapes inside the test rather than hardcoded.
"""

import pytest

from sphertwist.algebra import enveloping, opposite, quotient_surjection
from sphertwist.errors import NotConcentrated, SphertwistError
from sphertwist.exactlin import Matrix, rank
from sphertwist.frobenius import (
    _regular_bimodule,
    build_context,
    dual_module,
    stable_hom,
    suspension_power,
)
from sphertwist.homology import (
    Bimodule,
    cotwist_data,
    ext_dims,
    identity_surjection,
    left_embed,
    left_module_along,
    right_embed,
    tor_bimodule,
    tor_dims,
)
from sphertwist.modules import (
    Module,
    find_isomorphism,
    hom_space,
    restrict_scalars,
    simple_modules,
)
from sphertwist.resolutions import (
    extract_shape,
    partially_minimal_resolution,
    stable_idempotent_module,
    stable_module,
)

from fixture_algebras import cyclic_nakayama, dual_numbers, matrix_units_2


# ---------------------------------------------------------------------------
# shared fixtures


@pytest.fixture(scope="module")
def dual():
    a = dual_numbers()
    return a, simple_modules(a)[0]


@pytest.fixture(scope="module")
def dual_to_point(dual):
    a, _ = dual
    return quotient_surjection(a, [a.basis_vector(1)])


@pytest.fixture(scope="module")
def ctx_dual(dual):
    a, s = dual
    return build_context(a, Module.regular(a), [(s, 1)])


@pytest.fixture(scope="module")
def ctx_cycle():
    a = cyclic_nakayama(3)
    sims = simple_modules(a)
    return build_context(a, Module.regular(a), [(x, 1) for x in sims])


@pytest.fixture(scope="module")
def cycle_cotwist(ctx_cycle):
    return cotwist_data(ctx_cycle.to_stable)


def block_profile(bimod):
    """Nonzero (left block, right block) component ranks of a bimodule."""
    b = bimod.left_algebra
    out = {}
    for i in range(b.dim):
        li = bimod.carrier.action_of(
            left_embed(b, bimod.right_algebra, b.basis_vector(i))
        )
        for j in range(bimod.right_algebra.dim):
            rj = bimod.carrier.action_of(
                right_embed(b, bimod.right_algebra,
                            bimod.right_algebra.basis_vector(j))
            )
            r = rank(li.mul(rj))
            if r:
                out[(i, j)] = r
    return out


# ---------------------------------------------------------------------------
# Ext


def test_ext_degree_zero_is_hom_dimension(dual):
    a, s = dual
    reg = Module.regular(a)
    for m, n in [(s, s), (reg, s), (s, reg), (reg, reg)]:
        assert ext_dims(a, m, n, 1) == [len(hom_space(m, n))]


def test_ext_simple_self_extensions_never_die(dual):
    a, s = dual
    assert ext_dims(a, s, s, 6) == [1] * 6


def test_ext_from_stable_quotient_module(ctx_dual):
    con = stable_module(ctx_dual)
    assert ext_dims(ctx_dual.endo, con, con, 5) == [1, 0, 1, 0, 0]


def test_ext_agrees_with_stable_homs(dual):
    a, s = dual
    dims = ext_dims(a, s, s, 4)
    for i in range(1, 4):
        om = suspension_power(s, -i)
        assert dims[i] == stable_hom(om, s)[0]


def test_ext_agrees_with_stable_homs_on_cycle():
    a = cyclic_nakayama(3)
    sims = simple_modules(a)
    for m in sims:
        for n in sims[:2]:
            dims = ext_dims(a, m, n, 4)
            for i in range(1, 4):
                assert dims[i] == stable_hom(suspension_power(m, -i), n)[0]


def test_ext_rejects_foreign_modules(dual):
    a, s = dual
    b = cyclic_nakayama(3)
    with pytest.raises(SphertwistError):
        ext_dims(b, s, s, 2)
    assert ext_dims(a, s, s, 0) == []


# ---------------------------------------------------------------------------
# Tor, both routes


def test_tor_degree_zero_against_left_regular(dual):
    a, s = dual
    left_reg = Module.regular(opposite(a))
    for m in [s, Module.regular(a)]:
        assert tor_dims(a, m, left_reg, 1) == [m.dim]


def test_tor_point_with_point_never_dies(dual, dual_to_point):
    a, _ = dual
    p = dual_to_point
    right = restrict_scalars(p, Module.regular(p.target))
    left = left_module_along(p)
    assert tor_dims(a, right, left, 6) == [1] * 6
    assert tor_dims(a, right, left, 6, resolve_second=True) == [1] * 6


def test_tor_balance_battery(dual, ctx_dual):
    a, s = dual
    reg = Module.regular(a)
    pairs = [(s, dual_module(s)), (reg, dual_module(s)), (s, dual_module(reg))]
    b = cyclic_nakayama(3)
    sims = simple_modules(b)
    cases = [(a, m, n) for m, n in pairs]
    cases += [(b, sims[0], dual_module(sims[1])), (b, sims[2], dual_module(sims[2]))]
    con = stable_module(ctx_dual)
    cases.append((ctx_dual.endo, con, left_module_along(ctx_dual.to_stable)))
    for alg, m, n in cases:
        first = tor_dims(alg, m, n, 4)
        second = tor_dims(alg, m, n, 4, resolve_second=True)
        assert first == second


def test_tor_of_stable_quotient_with_itself(ctx_dual):
    con = stable_module(ctx_dual)
    left = left_module_along(ctx_dual.to_stable)
    assert tor_dims(ctx_dual.endo, con, left, 5) == [1, 0, 1, 0, 0]
    assert tor_dims(ctx_dual.endo, con, left, 5, resolve_second=True) == [
        1, 0, 1, 0, 0]


def test_tor_rejects_wrong_sided_arguments(dual):
    a, s = dual
    with pytest.raises(SphertwistError):
        tor_dims(a, s, s, 2)  # second argument must live over the opposite


# ---------------------------------------------------------------------------
# the tor bimodule of a surjection


def test_tor_bimodule_of_stable_point(ctx_dual):
    bi = tor_bimodule(ctx_dual.to_stable, 2)
    assert bi.dim == 1
    assert bi.left_algebra is ctx_dual.stable_endo
    assert bi.right_algebra is ctx_dual.stable_endo
    assert bi.right_projective and bi.left_projective


def test_tor_bimodule_refuses_spread_homology(dual_to_point):
    with pytest.raises(NotConcentrated):
        tor_bimodule(dual_to_point, 2)


def test_tor_bimodule_realizes_resolution_permutation(ctx_cycle, cycle_cotwist):
    bi = cycle_cotwist.cotwist_bimodule
    assert bi.dim == 3
    # the permutation from the resolution shapes, derived independently
    tau = {}
    for i in range(len(ctx_cycle.e_copies)):
        m = stable_idempotent_module(ctx_cycle, i)
        res = partially_minimal_resolution(ctx_cycle, m)
        tau[i] = extract_shape(ctx_cycle, res, 2).tau
    assert sorted(tau.values()) == [0, 1, 2]
    assert block_profile(bi) == {(i, tau[i]): 1 for i in range(3)}


def test_tor_bimodule_is_twisted_regular(ctx_cycle, cycle_cotwist):
    bi = cycle_cotwist.cotwist_bimodule
    b = ctx_cycle.stable_endo
    env = enveloping(b, b)
    tau = {}
    for i in range(len(ctx_cycle.e_copies)):
        m = stable_idempotent_module(ctx_cycle, i)
        res = partially_minimal_resolution(ctx_cycle, m)
        tau[i] = extract_shape(ctx_cycle, res, 2).tau
    inverse = {v: k for k, v in tau.items()}

    def right_twisted(perm):
        action = []
        for j in range(b.dim):
            rj = b.right_mult_matrix(b.basis_vector(perm[j]))
            for i in range(b.dim):
                li = b.left_mult_matrix(b.basis_vector(i))
                action.append(li.mul(rj))
        return Module(env, b.dim, action)

    assert find_isomorphism(bi.carrier, right_twisted(inverse)) is not None
    assert find_isomorphism(bi.carrier, right_twisted(tau)) is None
    assert find_isomorphism(bi.carrier, _regular_bimodule(b, env)) is None


def test_bimodule_audits_commuting_actions():
    m = matrix_units_2()
    env = enveloping(m, m)
    # both factors acting by left multiplication: a valid shape, but the
    # two one-sided actions only commute when the algebra is commutative
    action = []
    for j in range(m.dim):
        lj = m.left_mult_matrix(m.basis_vector(j))
        for i in range(m.dim):
            li = m.left_mult_matrix(m.basis_vector(i))
            action.append(li.mul(lj))
    broken = Module(env, m.dim, action, validate=False)
    with pytest.raises(SphertwistError):
        Bimodule(m, m, broken)


def test_bimodule_restrictions_of_the_regular_bimodule():
    a = cyclic_nakayama(3)
    env = enveloping(a, a)
    bi = Bimodule(a, a, _regular_bimodule(a, env))
    right = bi.restrict_right()
    assert right.algebra is a
    assert find_isomorphism(right, Module.regular(a)) is not None
    left = bi.restrict_left()
    assert left.algebra is opposite(a)
    assert find_isomorphism(left, Module.regular(opposite(a))) is not None


# ---------------------------------------------------------------------------
# cotwist data


def test_cotwist_of_identity_has_vanishing_cone(dual):
    a, _ = dual
    data = cotwist_data(identity_surjection(a))
    assert data.tor_dims[0] == a.dim
    assert all(d == 0 for d in data.tor_dims[1:])
    assert all(d == 0 for d in data.cone_dims.values())
    assert data.concentrated is None


def test_cotwist_of_semisimple_identity_is_complete(ctx_cycle):
    b = ctx_cycle.stable_endo
    data = cotwist_data(identity_surjection(b))
    assert data.complete
    assert data.tor_dims == [b.dim]
    assert all(d == 0 for d in data.cone_dims.values())


def test_cotwist_readout_of_stable_point(ctx_dual):
    data = cotwist_data(ctx_dual.to_stable)
    assert data.complete
    assert data.tor_dims == [1, 0, 1]
    assert data.concentrated == 2
    assert data.shift == -3
    assert data.cotwist_bimodule.dim == 1
    assert data.cone_dims == {0: 0, -1: 0, -2: 0, -3: 1}


def test_cotwist_readout_of_cycle(cycle_cotwist):
    data = cycle_cotwist
    assert data.complete
    assert data.tor_dims == [3, 0, 3]
    assert data.concentrated == 2
    assert data.shift == -3
    assert data.cotwist_bimodule.right_projective
    assert data.cotwist_bimodule.left_projective


def test_cotwist_of_non_perfect_quotient_reports_profile(dual_to_point):
    data = cotwist_data(dual_to_point)
    assert not data.complete
    assert data.concentrated is None
    assert data.cotwist_bimodule is None
    assert data.tor_dims == [1] * len(data.tor_dims)
    assert len(data.tor_dims) >= 4
    assert data.cone_dims[0] == 0 and data.cone_dims[-1] == 0
    deeper = [d for deg, d in data.cone_dims.items() if deg <= -2]
    assert deeper and all(x == 1 for x in deeper)


def test_cotwist_profile_matches_one_sided_route(ctx_dual, ctx_cycle,
                                                 dual_to_point):
    cases = []
    for ctx in (ctx_dual, ctx_cycle):
        cases.append((ctx.endo, ctx.to_stable))
    cases.append((dual_to_point.source, dual_to_point))
    for alg, p in cases:
        data = cotwist_data(p)
        right = restrict_scalars(p, Module.regular(p.target))
        left = left_module_along(p)
        count = len(data.tor_dims)
        assert data.tor_dims == tor_dims(alg, right, left, count)


def test_cotwist_degree_zero_always_the_target(ctx_dual, ctx_cycle,
                                               dual_to_point):
    for p in (ctx_dual.to_stable, ctx_cycle.to_stable, dual_to_point):
        data = cotwist_data(p)
        assert data.tor_dims[0] == p.target.dim
