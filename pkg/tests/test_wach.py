import itertools

import numpy as np

from phigamma import (
    LaurentSeries,
    PadicContext,
    PadicSeries,
    big_lambda_gamma,
    build_wach_rank1,
    example71,
    reduce_mod_p,
    saturation_check,
    split_lattice,
    twist_rank_two,
)

from conftest import ctx_for


def pctx_for(p, f, **kw):
    return PadicContext(ctx_for(p, f), **kw)


def test_q_reduces_to_pi_power():
    for p, f in [(2, 1), (3, 1), (5, 2)]:
        pctx = pctx_for(p, f)
        qbar = pctx.q_series(30).reduce_mod_p(pctx.ctx.field)
        assert qbar.agrees_with(LaurentSeries.monomial(pctx.ctx.field, p - 1), 0, 29)


def test_padic_ring_inverse(rng):
    pctx = pctx_for(3, 2)
    ring = pctx.ring
    for _ in range(50):
        row = np.array([rng.randrange(ring.pN), rng.randrange(ring.pN)])
        if row[0] % 3 == 0 and row[1] % 3 == 0:
            continue
        inv = ring.unit_inv_scalar(row)
        prod = ring.mul_scalar(row, inv)
        assert prod[0] == 1 and prod[1] == 0


def test_lambda_gamma_unit():
    pctx = pctx_for(3, 1)
    g4 = pctx.ctx.gamma_from_chi(4)
    lam, cut = big_lambda_gamma(pctx, g4, 36)
    assert lam.coeff(0)[0] == 1
    assert (lam - PadicSeries.one(pctx.ring, 36)).val() >= 1
    assert cut >= 1
    lam1, cut1 = big_lambda_gamma(pctx, pctx.ctx.gamma_from_chi(1), 36)
    assert (lam1 - PadicSeries.one(pctx.ring, 36)).is_zero() and cut1 == 0


def test_wach_rank1_f1():
    pctx = pctx_for(3, 1)
    N = build_wach_rank1(pctx, 1, (1,))
    # g_0 = Lambda_gamma for f = 1, c = (1)
    lam, _ = big_lambda_gamma(pctx, pctx.ctx.eta, pctx.M)
    assert N.g_table["eta"][0].agrees_with(lam, 0, pctx.M - 4)
    rep = reduce_mod_p(N)
    assert rep.match


def test_wach_chain_identity():
    # g_{f-1} = (q/gamma(q))^{c_{f-1}} phi(g_0)
    pctx = pctx_for(3, 2)
    N = build_wach_rank1(pctx, 1, (1, 2))
    q = pctx.q_series(pctx.M)
    gq = pctx.gamma(q, pctx.ctx.eta)
    lhs = gq.pow(2, pctx.M) * N.g_table["eta"][1]
    rhs = q.pow(2, pctx.M) * pctx.phi(N.g_table["eta"][0])
    assert lhs.agrees_with(rhs, None, pctx.M - 9)


def test_reduction_grid_small():
    for p, f in [(2, 1), (2, 2), (3, 1), (3, 2)]:
        pctx = pctx_for(p, f)
        gelt = pctx.ctx.field.generator()
        tei = pctx.ring.teichmuller(gelt)
        for c in itertools.product(range(p), repeat=f):
            if all(x == p - 1 for x in c):
                continue
            for Ctil in (1, 1 + p, tei):
                N = build_wach_rank1(pctx, Ctil, c)
                rep = reduce_mod_p(N)
                assert rep.match, (p, f, c, rep.details)


def test_reduction_identifies_module():
    pctx = pctx_for(3, 1)
    rep = reduce_mod_p(build_wach_rank1(pctx, 1 + 3, (1,)))
    assert rep.match and rep.module.C == pctx.ctx.field.one()
    gelt = pctx.ctx.field.generator()
    rep2 = reduce_mod_p(build_wach_rank1(pctx, pctx.ring.teichmuller(gelt), (1,)))
    assert rep2.match and rep2.module.C == gelt


def test_example71():
    for p in (3, 5):
        pctx = pctx_for(p, 1)
        N, sub = example71(pctx)
        sat = saturation_check(N, sub)
        assert not sat.exact
        assert sat.t_raw == (p - 1,) and sat.t == (1,)
        assert sat.b_prime == (0,) and sat.a_prime == (p - 1,)
        for name, ok in sat.identities:
            assert ok, name


def test_split_lattice_exact():
    for p, f in [(3, 1), (3, 2)]:
        pctx = pctx_for(p, f)
        b = tuple([p - 1] * f)
        a = tuple([0] * f)
        N, sub = split_lattice(pctx, b, a)
        sat = saturation_check(N, sub)
        assert sat.exact and sat.t_raw == tuple([0] * f)
        for name, ok in sat.identities:
            assert ok, name


def test_twist_preserves_verdict():
    pctx = pctx_for(3, 1)
    N, sub = example71(pctx)
    base = saturation_check(N, sub)
    R = build_wach_rank1(pctx, 1, (1,))
    Nt = twist_rank_two(N, R)
    sat = saturation_check(Nt, sub)
    assert sat.exact == base.exact and sat.t_raw == base.t_raw
    assert Nt.a == (1,) and Nt.b == (3,)
    for name, ok in sat.identities:
        assert ok, name


def test_sigma_congruence_on_nonexact():
    pctx = pctx_for(5, 1)
    N, sub = example71(pctx)
    sat = saturation_check(N, sub)
    q1 = 5 - 1
    assert (sat.b_prime[0] - N.b[0]) % q1 == 0
    assert sat.b_prime[0] <= N.b[0]
