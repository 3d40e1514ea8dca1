import itertools

import pytest

from phigamma import (
    RankOneModule,
    fundamental_character_exponents,
    is_isomorphic,
    kappa,
    normal_form,
    twist_factor,
    weight_profiles,
)
from phigamma.rankone import twist_exponents

from conftest import ctx_for


def test_normal_form():
    ctx = ctx_for(3, 2)
    assert normal_form(ctx, 1, 5).c == (2, 1)
    assert normal_form(ctx, 1, 0).c == (0, 0)
    assert normal_form(ctx, 1, 8).c == (0, 0)
    with pytest.raises(ValueError):
        RankOneModule(ctx, 1, (2, 2))
    with pytest.raises(ValueError):
        RankOneModule(ctx, 0, (1, 0))


def test_isomorphism_classification():
    ctx = ctx_for(3, 2)
    for n in range(0, 16):
        assert is_isomorphic(normal_form(ctx, 2, n), normal_form(ctx, 2, n + 8))
    assert not is_isomorphic(normal_form(ctx, 1, 1), normal_form(ctx, 2, 1))
    assert not is_isomorphic(normal_form(ctx, 1, 1), normal_form(ctx, 1, 2))
    # exhaustive over a small grid: iso iff C equal and Sigma_0 congruent
    for n1 in range(8):
        for n2 in range(8):
            a, b = normal_form(ctx, 2, n1), normal_form(ctx, 2, n2)
            assert is_isomorphic(a, b) == ((n1 - n2) % 8 == 0)


def test_kappa_shapes(ctx31=None):
    ctx = ctx_for(5, 2)
    M0 = RankOneModule(ctx, 2, (0, 0))
    P, G = kappa(M0, ctx.eta)
    assert P.comps[0].agrees_with(ctx.pi(0, 2)) and P.comps[1].agrees_with(ctx.one_series())
    assert G.comps[0].agrees_with(ctx.one_series(), 0, ctx.M) and G.comps[1].agrees_with(ctx.one_series(), 0, ctx.M)
    # cyclotomic f=1: kappa_phi = C pi^((p-1)(p-2))
    c1 = ctx_for(5, 1)
    Mc = RankOneModule(c1, 1, (3,))
    P1, _ = kappa(Mc, c1.eta)
    assert P1.comps[0].val() == 4 * 3


def test_kappa_consistency(rng):
    # P phi(G_gamma) = G_gamma gamma(P)
    ctx = ctx_for(3, 2)
    for _ in range(10):
        c = (rng.randrange(3), rng.randrange(3))
        if all(x == 2 for x in c):
            continue
        M = RankOneModule(ctx, ctx.field.random_element(rng, nonzero=True), c)
        g = ctx.gamma_from_chi(rng.choice([2, 4, 5, 8]))
        P, G = kappa(M, g)
        lhs = P * ctx.phi_act(G)
        rhs = G * ctx.gamma_act(g, P)
        assert lhs.agrees_with(rhs, None, ctx.M - 30)


def test_fundamental_character_exponents():
    c1 = ctx_for(5, 1)
    assert fundamental_character_exponents(RankOneModule(c1, 1, (0,))) == (0,)
    # f=1, c=p-2: exponent -(p-2) = 1 mod p-1, the cyclotomic character on inertia
    assert fundamental_character_exponents(RankOneModule(c1, 1, (3,))) == (-3,)
    assert (-3) % 4 == 1
    c2 = ctx_for(5, 2)
    assert fundamental_character_exponents(RankOneModule(c2, 1, (1, 0))) == (0, -1)


def test_weight_profiles_counts():
    ctx5 = ctx_for(5, 2)
    profs = weight_profiles(RankOneModule(ctx5, 2, (3, 3)), (0, 1))
    assert [p.sign for p in profs] == ["plus", "minus"]
    assert profs[0].a == (5, 5) and profs[1].a == (1, 1)
    ctx3 = ctx_for(3, 2)
    profs = weight_profiles(RankOneModule(ctx3, 2, (1, 1)), ())
    assert {p.b for p in profs} == {(1, 1), (3, 3)}
    ctx53 = ctx_for(5, 3)
    profs = weight_profiles(RankOneModule(ctx53, 2, (1, 2, 3)), (0,))
    assert len(profs) == 1 and profs[0].sign == "unique"


def test_weight_profiles_always_one_or_two():
    ctx = ctx_for(3, 2)
    for c in itertools.product(range(3), repeat=2):
        if all(x == 2 for x in c):
            continue
        M = RankOneModule(ctx, 2, c)
        for r in range(4):
            J = [(), (0,), (1,), (0, 1)][r]
            profs = weight_profiles(M, J)
            assert len(profs) in (1, 2)
            if len(profs) == 2:
                assert {p.sign for p in profs} == {"plus", "minus"}


def test_twist_factor_cases():
    ctx5 = ctx_for(5, 2)
    # f=2, c_0 = p-1, c_1 < p-2, J = S: (pi^(p-1), pi^(2p-2))
    M = RankOneModule(ctx5, 2, (4, 0))
    pr = weight_profiles(M, (0, 1))[0]
    assert twist_exponents(M, pr) == (1, 2)
    tf = twist_factor(M, pr)
    assert tf.comps[0].val() == 4 and tf.comps[1].val() == 8
    # f=2, 1 <= c_i <= p-1, J = empty: (1, 1)
    M2 = RankOneModule(ctx5, 2, (2, 1))
    pr2 = weight_profiles(M2, ())[0]
    assert twist_exponents(M2, pr2) == (0, 0)
    # generic: component i is pi^((p-1) delta_{i-1 in J})
    ctx53 = ctx_for(5, 3)
    M3 = RankOneModule(ctx53, 2, (1, 2, 3))
    for J in [(0,), (1,), (0, 2)]:
        pr3 = weight_profiles(M3, J)[0]
        assert twist_exponents(M3, pr3) == tuple(1 if (i - 1) % 3 in J else 0 for i in range(3))


def test_twist_change_of_basis_identity(rng):
    # phi(<c>_J)/<c>_J * kappa_phi(C, d) = kappa_phi(C, c) as series
    ctx = ctx_for(3, 2)
    for c in [(1, 0), (2, 1), (1, 1), (0, 2)]:
        M = RankOneModule(ctx, 2, c)
        for J in [(), (0,), (1,), (0, 1)]:
            for pr in weight_profiles(M, J):
                u = twist_factor(M, pr)
                # kappa_phi(C, d) has exponents (p-1) d_i with possibly negative d_i
                d = pr.d
                kd = ctx.tate([ctx.pi((ctx.p - 1) * d[i], M.C if i == 0 else 1) for i in range(2)])
                lhs = ctx.phi_act(u) * kd
                rhs = u * M.kappa_phi()
                assert lhs.agrees_with(rhs)
