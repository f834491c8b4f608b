"""Structures attached to a positive word: the mutation plan Sigma,
interval and fundamental variables, degree formulas, T-system identities,
standard monomials, and the dominant cone.

Vertices of the reduced word seed are the letter positions 1..l; f_i
denotes the i-th unit exponent vector.  The interval variable W_{[j,k]}
(eta_j = eta_k) is the distinguished cluster variable with degree
f_k - f_{j[-1]}, produced along the plan Sigma.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .qtorus import (
    QLaurent, QCoeff, qmul, qmul_many, normalize, degree, unit_vec,
    qpow_times, skew_eval, vec_add, vec_sub, vec_scale, _drop_functional,
)
from .seed import Seed, SeedError, quantize, mutate_word
from .words import WordError, SignedWord, word_indices, seed_from_trapezoid
from .pattern import (
    TrackedSeed, BudgetError, DEFAULT_BUDGET, mutate_tracked,
    is_green_to_red,
)
from .freeze import is_optimized, dominant_membership

INF = math.inf


class DBSError(ValueError):
    """Invalid input to a word-structure computation."""


class SigmaPlan:
    """The mutation plan for a positive word: per-position words Sigma_k,
    the flat composite word, and the final-vertex permutation sigma."""

    __slots__ = ("sigma_k", "word", "sigma")

    def __init__(self, sigma_k, word, sigma):
        self.sigma_k = dict(sigma_k)
        self.word = tuple(word)
        self.sigma = dict(sigma)


class IntervalVar:
    """A cluster variable W_{[j,k]} with its expansion and degree."""

    __slots__ = ("j", "k", "element", "beta")

    def __init__(self, j, k, element, beta):
        self.j = j
        self.k = k
        self.element = element
        self.beta = tuple(beta)

    def __repr__(self):
        return f"IntervalVar([{self.j},{self.k}])"


class DBS:
    """Context over a positive word: reduced seed, plan, cached variables."""

    __slots__ = ("word", "idxs", "rsd", "plan", "budget", "quantum",
                 "_vars", "_stage_seeds", "_monomials")

    def __init__(self, word, quantum=True, budget=DEFAULT_BUDGET):
        if not isinstance(word, SignedWord):
            raise DBSError("expected a signed word")
        if any(a < 0 for a in word.letters):
            raise DBSError("the word must be positive")
        self.word = word
        self.idxs = word_indices(word)
        rsd = seed_from_trapezoid(word).rsd
        if quantum and rsd.n:
            if rsd.I_uf:
                rsd = quantize(rsd)
            else:
                # no exchange directions: the zero form is compatible
                rsd = Seed(rsd.I, rsd.I_uf, rsd.d, rsd.B,
                           [[0] * rsd.n for _ in range(rsd.n)])
        self.rsd = rsd
        self.quantum = quantum
        self.budget = budget
        self.plan = self._build_plan()
        self._vars = None
        self._stage_seeds = None
        self._monomials = {}

    @property
    def l(self):
        return len(self.word.letters)

    def _build_plan(self):
        idxs = self.idxs
        sigma_k = {}
        flat = []
        for k in range(1, self.l + 1):
            kmin = idxs.kmin[k]
            steps = []
            pos = kmin
            for _ in range(idxs.o_plus[k]):
                steps.append(pos)
                pos = idxs.succ[pos]
            sigma_k[k] = tuple(steps)
            flat.extend(steps)
        sigma = {}
        for a in idxs.occ:
            occ = idxs.occ[a]
            for r in range(len(occ) - 1):
                sigma[occ[r]] = occ[len(occ) - 2 - r]
        return SigmaPlan(sigma_k, flat, sigma)

    # -- interval variables --------------------------------------------

    def beta_interval(self, j, k):
        """The degree f_k - f_{j[-1]} of W_{[j,k]} (f at +-infinity is 0)."""
        n = self.l
        out = [0] * n
        if k != -INF and k != INF:
            out[k - 1] += 1
        pred = self.idxs.pred[j]
        if pred != -INF:
            out[pred - 1] -= 1
        return tuple(out)

    def beta(self, i):
        return self.beta_interval(i, i)

    def _walk(self):
        idxs = self.idxs
        occ = idxs.occ
        out = {}
        seeds = []
        ts = TrackedSeed.start(self.rsd, self.budget)
        Bt = [list(r) for r in self.rsd.B]

        def record(r):
            for a, positions in occ.items():
                r_a = sum(1 for p in positions if p <= r)
                for d in range(len(positions) - r_a):
                    key = (positions[r_a], positions[r_a + d])
                    if key in out:
                        continue
                    z = ts.vars[positions[d]]
                    g = degree(z, Bt)
                    if g is None:
                        raise DBSError(f"variable at {key} is not pointed")
                    beta = self.beta_interval(*key)
                    if g[0] != beta:
                        raise DBSError(
                            f"degree of W_[{key}] disagrees with {beta}")
                    out[key] = IntervalVar(key[0], key[1], z, beta)

        record(0)
        seeds.append(ts.seed)
        for r in range(1, self.l + 1):
            for pos in self.plan.sigma_k[r]:
                ts = mutate_tracked(ts, pos)
            record(r)
            seeds.append(ts.seed)
        self._vars = out
        self._stage_seeds = seeds

    def interval_variables(self):
        if self._vars is None:
            self._walk()
        return self._vars

    def stage_seeds(self):
        """The seeds reached after each per-position block of the plan."""
        if self._stage_seeds is None:
            self._walk()
        return self._stage_seeds

    def interval(self, j, k):
        """W_{[j,k]}; the empty interval (j = k[1]) is the unit."""
        cache = self.interval_variables()
        if (j, k) in cache:
            return cache[(j, k)]
        if k != INF and self.idxs.shift(k, 1) == j:
            return IntervalVar(j, k, QLaurent.one(self.l), (0,) * self.l)
        raise DBSError(f"no interval variable at [{j},{k}]")

    def fundamental(self, i):
        return self.interval(i, i)

    # -- standard monomials --------------------------------------------

    def standard_monomial(self, w):
        """M(w) = [W_1^{w_1} * ... * W_l^{w_l}], pointed at sum w_i beta_i."""
        w = tuple(w)
        if len(w) != self.l or any(x < 0 for x in w):
            raise DBSError(f"invalid standard exponent vector {w}")
        if w in self._monomials:
            return self._monomials[w]
        lam = self.rsd.Lam
        Bt = [list(r) for r in self.rsd.B]
        prod = QLaurent.one(self.l)
        for i in range(1, self.l + 1):
            wi = w[i - 1]
            if not wi:
                continue
            base = self.fundamental(i).element
            for _ in range(wi):
                prod = qmul(prod, base, lam)
        z, g = normalize(prod, Bt)
        expect = tuple(sum(w[i] * self.beta(i + 1)[t] for i in range(self.l))
                       for t in range(self.l))
        if g != expect:
            raise DBSError(f"standard monomial degree {g} != {expect}")
        self._monomials[w] = z
        return z

    def beta_coordinates(self, m):
        """Solve m = sum w_i beta_i; integral but possibly negative."""
        m = tuple(m)
        if len(m) != self.l:
            raise DBSError("exponent vector has the wrong length")
        w = [0] * self.l
        for p in range(self.l, 0, -1):
            nxt = self.idxs.succ[p]
            w[p - 1] = m[p - 1] + (w[nxt - 1] if nxt != INF else 0)
        return tuple(w)

    def expand_standard(self, z, support=None, max_steps=10_000):
        """Exact expansion of z over the standard monomials: {w: QCoeff}.

        support, when given, restricts the allowed w to those indices.
        """
        Bt = [list(r) for r in self.rsd.B]
        drop = _drop_functional(Bt)
        coeffs = {}
        r = z
        for _ in range(max_steps):
            if r.is_zero():
                return coeffs
            g = max(r.terms, key=lambda e: (sum(c * x for c, x in zip(drop, e)), e))
            w = self.beta_coordinates(g)
            if any(x < 0 for x in w):
                raise DBSError(f"exponent {g} is outside the standard span")
            if support is not None and any(
                    w[i - 1] for i in range(1, self.l + 1) if i not in support):
                raise DBSError(f"expansion leaves the allowed support at {w}")
            c = r.terms[g]
            r = r - self.standard_monomial(w).scale(c)
            coeffs[w] = c
        raise BudgetError("standard expansion did not terminate")


def _context(eta):
    return eta if isinstance(eta, DBS) else DBS(eta)


def sigma_plan(eta):
    return _context(eta).plan


def interval_variables(eta):
    return _context(eta).interval_variables()


def y_degree(eta, k):
    """deg y_k as an exponent vector together with its beta-expansion.

    The expansion maps interval keys (j, k') to integer coefficients and
    re-evaluates to the B-matrix column exactly.
    """
    ctx = _context(eta)
    idxs = ctx.idxs
    if k not in ctx.rsd.I_uf:
        raise DBSError(f"{k} is not an unfrozen vertex")
    fvec = tuple(ctx.rsd.b(i, k) for i in ctx.rsd.I)
    a = idxs.layer[k]
    k1 = idxs.succ[k]
    expansion = {(k, k): -1, (k1, k1): -1}
    for b, occ in idxs.occ.items():
        if b == a:
            continue
        between = [p for p in occ if k < p < k1]
        if not between:
            continue
        coeff = -ctx.word.cartan.c(b, a)
        key = (between[0], between[-1])
        expansion[key] = expansion.get(key, 0) + coeff
    total = (0,) * ctx.l
    for (j, kk), c in expansion.items():
        total = vec_add(total, vec_scale(c, ctx.beta_interval(j, kk)))
    if total != fvec:
        raise DBSError(f"beta-expansion {total} disagrees with column {fvec}")
    return fvec, expansion


def t_system_check(eta, j, s):
    """Verify the exchange identity among interval variables at (j, s).

    Returns a report with the recomputed q-powers; raises on failure.
    """
    ctx = _context(eta)
    idxs = ctx.idxs
    if not ctx.quantum:
        raise DBSError("T-system verification needs a quantized seed")
    a = idxs.layer.get(j)
    if a is None:
        raise DBSError(f"invalid position {j}")
    js = idxs.shift(j, s)
    js1 = idxs.shift(j, s + 1)
    if s < 0 or js == INF or js1 == INF:
        raise DBSError(f"no T-system at (j={j}, s={s})")
    j1 = idxs.succ[j]
    lam = ctx.rsd.Lam
    Bt = [list(r) for r in ctx.rsd.B]
    w1 = ctx.interval(j, js)
    w2 = ctx.interval(j1, js1)
    w3 = ctx.interval(j1, js)
    w4 = ctx.interval(j, js1)
    lhs = qmul(w1.element, w2.element, lam)
    first = normalize(qmul(w3.element, w4.element, lam), Bt)[0]
    factors = []
    beta_sum = (0,) * ctx.l
    participants = []
    for b, occ in idxs.occ.items():
        if b == a:
            continue
        i = next((p for p in occ if p >= j), None)
        if i is None:
            continue
        last = [p for p in occ if i <= p < js1]
        if not last:
            continue
        i_d = last[-1]
        expo = -ctx.word.cartan.c(b, a)
        var = ctx.interval(i, i_d)
        factors.extend([var.element] * expo)
        beta_sum = vec_add(beta_sum, vec_scale(expo, var.beta))
        participants.append(((i, i_d), expo))
    second = normalize(qmul_many(factors, lam), Bt)[0] if factors \
        else QLaurent.one(ctx.l)
    alpha = Fraction(skew_eval(lam, w1.beta, w2.beta), 2)
    alpha_p = Fraction(skew_eval(lam, w1.beta, beta_sum), 2)
    rhs = qpow_times(first, alpha) + qpow_times(second, alpha_p)
    if lhs != rhs:
        raise DBSError(f"T-system identity fails at (j={j}, s={s})")
    if not alpha > alpha_p:
        raise DBSError(f"expected alpha > alpha' at (j={j}, s={s})")
    return {
        "j": j, "s": s, "alpha": alpha, "alpha_prime": alpha_p,
        "participants": participants, "holds": True,
    }


def t_system_instances(eta):
    """All valid (j, s) pairs for the word."""
    ctx = _context(eta)
    idxs = ctx.idxs
    out = []
    for j in range(1, ctx.l + 1):
        s = 0
        while idxs.shift(j, s + 1) != INF:
            out.append((j, s))
            s += 1
    return out


def standard_monomial(eta, w):
    return _context(eta).standard_monomial(w)


def ls_straightening(eta, j, k):
    """Expand W_k W_j - q^{lambda(beta_k, beta_j)} W_j W_k over standard
    monomials; the support must lie in the positions strictly between."""
    ctx = _context(eta)
    if not 1 <= j <= k <= ctx.l:
        raise DBSError(f"invalid positions ({j}, {k})")
    lam = ctx.rsd.Lam
    wj = ctx.fundamental(j).element
    wk = ctx.fundamental(k).element
    lam_val = skew_eval(lam, ctx.beta(k), ctx.beta(j))
    comm = qmul(wk, wj, lam) - qpow_times(qmul(wj, wk, lam), lam_val)
    allowed = set(range(j + 1, k))
    return ctx.expand_standard(comm, support=allowed)


def dominant_cone_check(eta, m):
    """Is m a dominant degree?  Computed two independent ways and compared:
    nonnegative beta-coordinates versus transported-coordinate signs at
    the per-layer optimized seeds."""
    ctx = _context(eta)
    idxs = ctx.idxs
    w = ctx.beta_coordinates(m)
    by_cone = all(x >= 0 for x in w)
    words = {}
    for a, occ in idxs.occ.items():
        if occ:
            words[occ[-1]] = tuple(occ[:-1])
    by_transport = dominant_membership(m, ctx.rsd, words)
    if by_cone != by_transport:
        raise DBSError(
            f"dominant-cone routes disagree at {m}: {by_cone} vs {by_transport}")
    return by_cone


def green_to_red_check(eta):
    """Does the flat plan word exhibit injective reachability under sigma?"""
    ctx = _context(eta)
    return is_green_to_red(ctx.rsd, ctx.plan.word, ctx.plan.sigma,
                           budget=ctx.budget)
