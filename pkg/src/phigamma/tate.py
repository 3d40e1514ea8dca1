"""The ring E_{K,F} = F((pi))^S with its phi and Gamma actions.

phi rotates the S-indexed components and substitutes pi -> pi^p (freshman's
dream in characteristic p); gamma in Gamma substitutes pi -> (1+pi)^chi(gamma) - 1
componentwise.  Substitution on the non-negative part goes through the basis
y = 1 + pi via two Lucas binomial matrices; negative exponents use a cached
ladder of powers of gamma(pi).  All caches are keyed globally so contexts with
equal parameters share them.
"""
from __future__ import annotations

import numpy as np

from .field import Field, FieldElement
from .series import INF, LaurentSeries, PadicInteger, nth_root_unit, one_plus_pi_pow


class NonBijectiveError(ArithmeticError):
    """The operator C pi^((p-1)Sigma) Phi - 1 is not bijective for (C, Sigma) = (1, 0)."""


def smallest_primitive_root(p: int) -> int:
    factors = []
    t, d = p - 1, 2
    while d * d <= t:
        if t % d == 0:
            factors.append(d)
            while t % d == 0:
                t //= d
        d += 1
    if t > 1:
        factors.append(t)
    for g in range(2, p):
        if all(pow(g, (p - 1) // ell, p) != 1 for ell in factors):
            return g
    raise ValueError("no primitive root mod %d" % p)


def canonical_chi_eta(p: int) -> int:
    """Deterministic generator choice for chi(eta); -1 for p = 2."""
    if p == 2:
        return -1
    g = smallest_primitive_root(p)
    if pow(g, p - 1, p * p) == 1:
        g += p
    return g


class GammaElement:
    """An element of Gamma carried by the exact integer value of chi(gamma)."""

    __slots__ = ("p", "chi_int", "ndigits", "name")

    def __init__(self, p: int, chi_int: int, ndigits: int, name: str = ""):
        if chi_int % p == 0:
            raise ValueError("chi(gamma) must be a p-adic unit")
        self.p = p
        self.chi_int = chi_int
        self.ndigits = ndigits
        self.name = name

    @property
    def chi(self) -> PadicInteger:
        return PadicInteger(self.p, self.chi_int, self.ndigits)

    @property
    def level(self) -> int:
        """n >= 1 with chi = 1 mod p^n but not mod p^(n+1); 0 for a non-1-unit."""
        p, v = self.p, self.chi_int - 1
        if v == 0:
            return self.ndigits  # identity; level is "infinite" at working precision
        n = 0
        while v % p == 0 and n < self.ndigits + 64:
            v //= p
            n += 1
        return n

    def __mul__(self, other: "GammaElement") -> "GammaElement":
        return GammaElement(self.p, self.chi_int * other.chi_int, min(self.ndigits, other.ndigits))

    def __pow__(self, e: int) -> "GammaElement":
        if e >= 0:
            return GammaElement(self.p, self.chi_int**e, self.ndigits)
        mod = self.p ** (self.ndigits + 8)
        return GammaElement(self.p, pow(self.chi_int % mod, e, mod), self.ndigits)

    def __repr__(self):
        return "Gamma(%schi=%d)" % (self.name + ", " if self.name else "", self.chi_int)


class TateElement:
    """An element of E_{K,F}: a length-f tuple of Laurent series (index = embedding)."""

    __slots__ = ("ctx", "comps")

    def __init__(self, ctx: "Context", comps):
        comps = tuple(comps)
        if len(comps) != ctx.f:
            raise ValueError("need %d components" % ctx.f)
        self.ctx = ctx
        self.comps = comps

    def __getitem__(self, i: int) -> LaurentSeries:
        return self.comps[i % self.ctx.f]

    def __add__(self, other):
        return TateElement(self.ctx, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return TateElement(self.ctx, [a - b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return TateElement(self.ctx, [-a for a in self.comps])

    def __mul__(self, other):
        if isinstance(other, TateElement):
            return TateElement(self.ctx, [a * b for a, b in zip(self.comps, other.comps)])
        return TateElement(self.ctx, [a * other for a in self.comps])

    __rmul__ = __mul__

    def scale(self, c):
        return TateElement(self.ctx, [a.scale(c) for a in self.comps])

    def truncate(self, order):
        return TateElement(self.ctx, [a.truncate(order) for a in self.comps])

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.comps)

    def agrees_with(self, other, lo=None, hi=None) -> bool:
        return all(a.agrees_with(b, lo, hi) for a, b in zip(self.comps, other.comps))

    def min_order(self):
        return min(a.order for a in self.comps)

    def min_low(self):
        return min(a.low for a in self.comps)

    def __repr__(self):
        return "TateElement(%s)" % (", ".join(repr(c) for c in self.comps))


_REGISTRY = {}


def _cache(key, build):
    if key not in _REGISTRY:
        _REGISTRY[key] = build()
    return _REGISTRY[key]


class _Ladder:
    """Dense table of gamma(pi^n) coefficients for n in [-depth, 0)."""

    def __init__(self):
        self.series = {}  # n -> LaurentSeries
        self.depth = 0
        self.mat = None  # int8 (depth, span); row r = coefficients of gamma(pi^(-1-r))
        self.mat_lo = 0  # column 0 corresponds to exponent mat_lo
        self.orders = None


class Context:
    """Working environment: field, embedding count f, window sizes, Gamma caches."""

    def __init__(self, field: Field, pi_order=None, tail_floor=None, chi_eta=None, padic_depth=3):
        self.field = field
        self.p, self.f, self.m = field.p, field.f, field.m
        p, f = self.p, self.f
        self.M = int(pi_order) if pi_order else 4 * p ** (f + 1)
        self.L = int(tail_floor) if tail_floor else -4 * p**f
        if self.L >= 0 or self.M <= 0:
            raise ValueError("need tail_floor < 0 < pi_order")
        self.padic_depth = padic_depth
        self.chi_eta = int(chi_eta) if chi_eta is not None else canonical_chi_eta(p)
        ndig = 2
        while p**ndig < 4 * (self.M - self.L):
            ndig += 1
        self.ndigits = ndig + 2
        self.eta = GammaElement(p, self.chi_eta, self.ndigits, "eta")
        if p == 2:
            self.xi = GammaElement(p, 5, self.ndigits, "xi")
        else:
            self.xi = GammaElement(p, self.chi_eta ** (p - 1), self.ndigits, "xi")
        self.d_root = (p**f - 1) // (p - 1)

    # -- constructors -----------------------------------------------------------
    def pi(self, n: int = 1, coeff=1, order=INF) -> LaurentSeries:
        return LaurentSeries.monomial(self.field, n, coeff, order)

    def zero_series(self, order=INF) -> LaurentSeries:
        return LaurentSeries.zero(self.field, order)

    def one_series(self, order=INF) -> LaurentSeries:
        return LaurentSeries.one(self.field, order)

    def tate(self, comps) -> TateElement:
        return TateElement(self, comps)

    def tate_zero(self, order=INF) -> TateElement:
        return TateElement(self, [self.zero_series(order)] * self.f)

    def tate_unit_vector(self, i: int, series: LaurentSeries) -> TateElement:
        comps = [self.zero_series(series.order)] * self.f
        comps[i % self.f] = series
        return TateElement(self, comps)

    def tate_const(self, values) -> TateElement:
        return TateElement(self, [LaurentSeries.const(self.field, v) for v in values])

    @property
    def key(self):
        return (self.field.key, self.M, self.L, self.chi_eta)

    def scaled(self, k: int) -> "Context":
        """A context with all windows scaled by k (stability re-runs)."""
        return Context(self.field, k * self.M, k * self.L, self.chi_eta, self.padic_depth)

    def z_of_xi(self) -> FieldElement:
        """z with chi(xi) = 1 + z p mod p^2."""
        return self.field.coerce(((self.xi.chi_int - 1) // self.p) % self.p)

    def gamma_from_chi(self, chi_int: int, name="") -> GammaElement:
        return GammaElement(self.p, chi_int, self.ndigits, name)

    # -- gamma action -------------------------------------------------------------
    def _w(self, gamma: GammaElement) -> LaurentSeries:
        """gamma(pi) = (1+pi)^chi - 1, known to a generous window."""
        span = self.M + 2 - self.L

        def build():
            return one_plus_pi_pow(self.field, gamma.chi_int % self.p**self.ndigits, span) - 1

        return _cache((self.field.key, span, gamma.chi_int, "w"), build)

    def _ladder(self, gamma: GammaElement) -> _Ladder:
        return _cache((self.field.key, self.M, self.L, gamma.chi_int, "ladder"), _Ladder)

    def _extend_ladder(self, gamma: GammaElement, depth: int) -> _Ladder:
        lad = self._ladder(gamma)
        if lad.depth >= depth:
            return lad
        w = self._w(gamma)
        if lad.depth == 0:
            lad.series[-1] = w.inv_unit()
            lad.depth = 1
        winv = lad.series[-1]
        cur = lad.series[-lad.depth]
        for n in range(-lad.depth - 1, -depth - 1, -1):
            cur = cur * winv
            lad.series[n] = cur
        lad.depth = depth
        lad.mat = None
        return lad

    def _ladder_matrix(self, gamma: GammaElement, depth: int):
        """(depth, span) int8 matrix of gamma(pi^(-1-r)) on exponents [mat_lo, M)."""
        lad = self._extend_ladder(gamma, depth)
        if lad.mat is None or lad.mat.shape[0] < depth:
            lo = -lad.depth
            span = self.M - lo
            mat = np.zeros((lad.depth, span), dtype=np.int8)
            orders = np.zeros(lad.depth, dtype=np.int64)
            for r in range(lad.depth):
                s = lad.series[-1 - r]
                hi = int(min(self.M, s.order))
                mat[r, : hi - lo] = s.coeff_rows(lo, hi)[:, 0]
                orders[r] = hi
            lad.mat, lad.mat_lo, lad.orders = mat, lo, orders
        return lad

    def gamma_pi_pow(self, gamma: GammaElement, n: int) -> LaurentSeries:
        """gamma(pi^n) for any integer n."""
        if n == 0:
            return self.one_series()
        if n > 0:
            return self._w(gamma).pow(n, self.M + n)
        lad = self._extend_ladder(gamma, -n)
        return lad.series[n]

    def _head_matrices(self, gamma: GammaElement):
        """Lucas matrices M1[k,n] = (-1)^(n-k) C(n,k), M2T[j,k] = C(chi k, j) on [0, M)."""
        S = self.M
        p = self.p

        def build():
            ctab = np.zeros((p, p), dtype=np.int64)
            for a in range(p):
                c = 1
                for b in range(a + 1):
                    ctab[a, b] = c % p
                    c = c * (a - b) // (b + 1)
            ndig = 1
            while p**ndig < S + 1:
                ndig += 1
            ndig += 1

            def lucas(avals, jvals):
                a = np.broadcast_to(avals, (jvals.shape[0], avals.shape[0])).copy()
                j = np.broadcast_to(jvals[:, None], (jvals.shape[0], avals.shape[0])).copy()
                out = np.ones_like(a)
                for _ in range(ndig):
                    out = out * ctab[a % p, j % p] % p
                    a //= p
                    j //= p
                return out

            ns = np.arange(S, dtype=np.int64)
            m1 = lucas(ns, ns)  # m1[k, n] = C(n, k)
            if p > 2:
                sign = np.where((ns[None, :] - ns[:, None]) % 2 == 1, p - 1, 1)
                m1 = m1 * sign % p
            m1 = np.where(ns[:, None] <= ns[None, :], m1, 0)
            chimod = p**ndig
            avals = (gamma.chi_int % chimod) * ns % chimod
            m2t = lucas(avals, ns)  # m2t[j, k] = C(chi k, j)
            return m1.astype(np.int8), m2t.astype(np.int8)

        return _cache((self.field.key, S, gamma.chi_int, "headmats"), build)

    def gamma_act_series(self, gamma: GammaElement, s: LaurentSeries, out_order=None) -> LaurentSeries:
        """Substitute pi -> gamma(pi) in one Laurent series."""
        order = min(s.order, self.M)
        if out_order is not None:
            order = min(order, out_order)
        if s.is_zero():
            return LaurentSeries.zero(self.field, order)
        if gamma.chi_int == 1:
            return s.truncate(order)
        if s.floor + len(s.rows) > self.M:
            s = s.truncate(self.M)
            if s.is_zero():
                return LaurentSeries.zero(self.field, order)
        order = int(order)
        m = self.field.m
        parts = []
        lo = s.low
        if lo < 0:
            depth = -lo
            lad = self._ladder_matrix(gamma, depth)
            tail = s.coeff_rows(lo, 0)  # (depth', m)
            rows_idx = np.arange(-1, lo - 1, -1)  # exponents -1, -2, ..., lo
            weights = tail[::-1]  # row r corresponds to exponent -1-r
            used = weights.any(axis=1)
            if used.any():
                order = int(min(order, int(lad.orders[: depth][used].min())))
                sub = lad.mat[:depth]
                out_lo = lad.mat_lo
                ncols = order - out_lo
                acc = sub[:, :ncols].T.astype(np.int64) @ weights.astype(np.int64) % self.p
                parts.append(LaurentSeries(self.field, out_lo, order, acc))
        head_hi = min(s.floor + len(s.rows), self.M)
        if head_hi > 0:
            m1, m2t = self._head_matrices(gamma)
            head = s.coeff_rows(0, head_hi)
            if head.any():
                g = m1[:, :head_hi].astype(np.int64) @ head % self.p
                res = m2t[:order if order > 0 else 0].astype(np.int64) @ g % self.p
                if order > 0:
                    parts.append(LaurentSeries(self.field, 0, order, res))
        out = LaurentSeries.zero(self.field, order)
        for part in parts:
            out = out + part
        return out

    def gamma_act(self, gamma: GammaElement, x: TateElement, out_order=None) -> TateElement:
        return TateElement(self, [self.gamma_act_series(gamma, c, out_order) for c in x.comps])

    def phi_act(self, x: TateElement) -> TateElement:
        """Component i of the result is x[i+1](pi^p)."""
        return TateElement(self, [x.comps[(i + 1) % self.f].substitute_power(self.p) for i in range(self.f)])

    # -- lambda units ----------------------------------------------------------------
    def lambda_gamma(self, gamma: GammaElement) -> LaurentSeries:
        """The unique (p^f-1)/(p-1)-th root of gamma(pi)/(chibar(gamma) pi) in 1 + pi F_p[[pi]]."""

        def build():
            if gamma.chi_int == 1:
                return self.one_series(self.M)
            chibar = self.field.coerce(gamma.chi_int)
            u = self._w(gamma).shift(-1).scale(chibar.inv()).truncate(self.M)
            return nth_root_unit(u, self.d_root, self.M)

        return _cache((self.field.key, self.M, self.f, gamma.chi_int, "lambda"), build)

    def lambda_pow(self, gamma: GammaElement, e: int) -> LaurentSeries:
        def build():
            lam = self.lambda_gamma(gamma)
            base = lam if e >= 0 else lam.inv_unit()
            return base.pow(abs(e), self.M)

        return _cache((self.field.key, self.M, self.f, gamma.chi_int, e, "lampow"), build)

    def chibar(self, gamma: GammaElement) -> FieldElement:
        return self.field.coerce(gamma.chi_int)

    def op_lambda_gamma(self, gamma: GammaElement, sigma: int, s: LaurentSeries, out_order=None) -> LaurentSeries:
        """(lambda_gamma^sigma * gamma - 1)(s)."""
        img = self.gamma_act_series(gamma, s, out_order)
        lam = self.lambda_pow(gamma, sigma)
        if out_order is not None:
            lam = lam.truncate(out_order - min(img.low, 0) + 1)
        out = lam * img - s
        return out if out_order is None else out.truncate(out_order)

    def op_lambda_gamma_monomial(self, gamma: GammaElement, sigma: int, e: int, out_order=None) -> LaurentSeries:
        return self.op_lambda_gamma(gamma, sigma, self.pi(e), out_order)


def solve_phi_minus_one(ctx: Context, C: FieldElement, sigma: int, h: LaurentSeries) -> LaurentSeries:
    """Solve (C pi^((p-1)Sigma) Phi - 1)(g) = h on F[[pi]], with Phi(g)(pi) = g(pi^(p^f)).

    Neumann iteration when Sigma > 0; coefficient recursion from degree 0
    upward when Sigma = 0 (requires C != 1).
    """
    field = ctx.field
    C = field.coerce(C)
    if not C:
        raise ValueError("C must be nonzero")
    if sigma < 0:
        raise ValueError("Sigma must be >= 0")
    if not h.is_zero() and h.val() < 0:
        raise ValueError("h must lie in F[[pi]]")
    if sigma == 0 and C == field.one():
        raise NonBijectiveError("C Phi - 1 is not bijective for (C, Sigma) = (1, 0)")
    order = h.order if h.order != INF else ctx.M
    order = int(min(order, ctx.M))
    if sigma > 0:
        shift = (ctx.p - 1) * sigma
        acc = h.truncate(order)
        term = acc
        while not term.is_zero():
            term = term.substitute_power(ctx.p**ctx.f).shift(shift).scale(C).truncate(order)
            acc = acc + term
        return -acc
    return _solve_c_phi_minus_one(ctx, C, h, order)


def _solve_c_phi_minus_one(ctx: Context, C: FieldElement, h: LaurentSeries, order: int) -> LaurentSeries:
    """Recursion for (C Phi - 1) g = h on F[[pi]]; for C = 1 solves in pi F[[pi]]."""
    field = ctx.field
    q = ctx.p**ctx.f
    rows = h.coeff_rows(0, order)
    out = np.zeros_like(rows)
    one = field.one()
    for n in range(order):
        hn = field.from_row(rows[n])
        if n == 0:
            if C == one:
                if hn:
                    raise NonBijectiveError("constant-term obstruction for C = 1")
                continue
            out[0] = (hn / (C - one)).row()
        else:
            gn = -hn
            if n % q == 0:
                gn = gn + C * field.from_row(out[n // q])
            out[n] = gn.row()
    return LaurentSeries(field, 0, order, out)


def solve_phi_unit_tail(ctx: Context, h: LaurentSeries) -> LaurentSeries:
    """Unique g in pi F[[pi]] with (Phi - 1) g = h, for h in pi F[[pi]] (used in the
    trivial-character constructions where the full operator is not bijective)."""
    if not h.is_zero() and h.val() < 1:
        raise ValueError("h must lie in pi F[[pi]]")
    return _solve_c_phi_minus_one(ctx, ctx.field.one(), h, int(min(h.order, ctx.M)))
