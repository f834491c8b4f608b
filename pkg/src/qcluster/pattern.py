"""Cluster pattern engine: exact variable expansions under mutation.

All expansions live in the quantum torus of the initial seed.  Mutation
of a tracked variable uses the two-term quantum exchange binomial, each
term a normalized (bar-invariant, leading coefficient 1) localized
monomial of the current cluster.
"""

from __future__ import annotations

from fractions import Fraction

from .qtorus import (
    QLaurent, QCoeff, qmul, left_divide, normalize, degree, unit_vec,
    qpow_times, skew_eval,
)
from .seed import Seed, SeedError, mutate_seed


class BudgetError(RuntimeError):
    """A term-count budget was exceeded; not a mathematical failure."""


DEFAULT_BUDGET = 200_000


class TrackedSeed:
    """A seed reached by a mutation word, with exact variable expansions."""

    __slots__ = ("seed", "initial", "history", "vars", "budget")

    def __init__(self, seed, initial, history, vars, budget):
        self.seed = seed
        self.initial = initial
        self.history = tuple(history)
        self.vars = dict(vars)
        self.budget = budget

    @classmethod
    def start(cls, seed, budget=DEFAULT_BUDGET):
        n = seed.n
        vars = {i: QLaurent.monomial(n, unit_vec(n, seed.idx(i))) for i in seed.I}
        return cls(seed, seed, (), vars, budget)

    @property
    def Bt0(self):
        return [list(r) for r in self.initial.B]

    @property
    def lam0(self):
        return [list(r) for r in self.initial.Lam] if self.initial.Lam is not None else None

    def var_degree(self, i):
        d = degree(self.vars[i], self.Bt0)
        if d is None:
            raise SeedError(f"variable at {i} is not pointed")
        return d[0]


# Intermediate products during an exchange expansion may legitimately be
# larger than the final variable. Their size is capped at a multiple of the
# term budget, and the work of each product (the number of term pairs) at a
# larger multiple, so that a runaway expansion aborts before it is computed
# rather than after.
INTERMEDIATE_SLACK = 10
PAIRS_PER_TERM = 500


def _qmul_checked(ts, a, b):
    if a.num_atoms() * b.num_atoms() > ts.budget * PAIRS_PER_TERM:
        raise BudgetError(
            f"product of {a.num_atoms()} x {b.num_atoms()} q-monomials "
            f"exceeds the work cap for budget {ts.budget}")
    out = qmul(a, b, ts.lam0)
    if out.num_terms() > ts.budget * INTERMEDIATE_SLACK:
        raise BudgetError(
            f"intermediate product exceeds {ts.budget * INTERMEDIATE_SLACK} terms")
    return out


def _power(ts, base, e):
    out = QLaurent.one(ts.initial.n)
    for _ in range(e):
        out = _qmul_checked(ts, out, base)
    return out


def _weyl_exponent(seed, k, exps):
    """Normalization q-exponent for the ordered product x_k^{-1} * prod x_i^{e_i}.

    The Weyl form [Z_1*...*Z_r] = q^(-1/2 sum_{s<t} lam(deg Z_s, deg Z_t))
    Z_1*...*Z_r is bar-invariant; the pairing is read off the current
    quantization matrix.
    """
    if seed.Lam is None:
        return Fraction(0)
    total = 0
    kk = seed.idx(k)
    order = [seed.idx(i) for i in seed.I if exps.get(i, 0)]
    for pos, i in enumerate(order):
        e_i = exps[seed.I[i]]
        total += (-1) * e_i * seed.Lam[kk][i]
        for j in order[pos + 1:]:
            total += e_i * exps[seed.I[j]] * seed.Lam[i][j]
    return Fraction(-total, 2)


def _ordered_product(ts, exps):
    prod = QLaurent.one(ts.initial.n)
    for i in ts.seed.I:
        e = exps.get(i, 0)
        if e:
            prod = _qmul_checked(ts, prod, _power(ts, ts.vars[i], e))
    return prod


def mutate_tracked(ts, k):
    """Mutate the tracked seed at the unfrozen vertex k.

    The new variable is the exchange binomial: the sum of the two
    Weyl-normalized localized monomials x_k^{-1} x^{[±b]_+}, divided
    exactly in the initial quantum torus.
    """
    s = ts.seed
    if k not in s.I_uf:
        raise SeedError(f"cannot mutate at non-unfrozen vertex {k}")
    kk = s.uf_idx(k)
    plus = {i: max(s.B[s.idx(i)][kk], 0) for i in s.I}
    minus = {i: max(-s.B[s.idx(i)][kk], 0) for i in s.I}
    numerator = (qpow_times(_ordered_product(ts, minus), _weyl_exponent(s, k, minus))
                 + qpow_times(_ordered_product(ts, plus), _weyl_exponent(s, k, plus)))
    if numerator.num_atoms() * ts.vars[k].num_atoms() > ts.budget * PAIRS_PER_TERM:
        raise BudgetError(
            f"exchange numerator of {numerator.num_atoms()} q-monomials "
            f"exceeds the work cap for budget {ts.budget}")
    newvar = left_divide(ts.vars[k], numerator, ts.lam0)
    if newvar.num_terms() > ts.budget:
        raise BudgetError(f"expansion at {k} exceeds {ts.budget} terms")
    vars2 = dict(ts.vars)
    vars2[k] = newvar
    return TrackedSeed(mutate_seed(s, k), ts.initial, ts.history + (k,),
                       vars2, ts.budget)


def mutate_tracked_word(ts, word):
    for k in word:
        ts = mutate_tracked(ts, k)
    return ts


def localized_cluster_monomial(ts, m):
    """Normalized product prod x_i(ts)^{m_i}; m_k >= 0 for unfrozen k.

    m is indexed by positions of ts.seed.I.  Returns (QLaurent, degree).
    """
    s = ts.seed
    uf = set(s.I_uf)
    prod = QLaurent.one(ts.initial.n)
    for pos, i in enumerate(s.I):
        e = m[pos]
        if e == 0:
            continue
        if e < 0:
            if i in uf:
                raise SeedError("negative exponent at an unfrozen vertex")
            # frozen variables are monomials in the initial frame: invert
            (g, _), = ts.vars[i].terms.items()
            base = QLaurent.monomial(ts.initial.n, tuple(-x for x in g))
            prod = qmul(prod, _power(ts, base, -e), ts.lam0)
        else:
            prod = _qmul_checked(ts, prod, _power(ts, ts.vars[i], e))
    z, g = normalize(prod, ts.Bt0)
    return z, g


def mutation_pullback(z, seed, k, budget=DEFAULT_BUDGET):
    """Rewrite z from the torus of `seed` into the torus of mutate_seed(seed, k).

    The variables x_i with i != k are shared by the two charts; x_k is
    substituted by its exchange expression.  Exact Laurent output is
    required: if z does not lie in the target torus the division fails
    with ExactDivisionError.
    """
    if k not in seed.I_uf:
        raise SeedError(f"cannot pull back along a non-unfrozen vertex {k}")
    if z.is_zero():
        return z
    sdp = mutate_seed(seed, k)
    # variables of `seed` expanded in the torus of sdp
    ts = mutate_tracked(TrackedSeed.start(sdp, budget), k)
    n = seed.n
    kk = seed.idx(k)
    lam_src = seed.Lam
    lam_dst = ts.lam0
    V = ts.vars[k]
    shift = max(0, -min(g[kk] for g in z.terms))
    num = QLaurent.zero(n)
    for g, c in z.terms.items():
        gp = list(g)
        gp[kk] += shift
        # x^g = q^(shift/2 * lam(e_k, g)) x^(-shift e_k) * x^gp
        alpha = Fraction(0)
        if lam_src is not None:
            alpha = Fraction(shift * skew_eval(lam_src, unit_vec(n, kk), g), 2)
            # x^gp = q^theta x_1^(gp_1) * ... * x_n^(gp_n) in the source torus
            for s in range(n):
                if gp[s]:
                    for t in range(s + 1, n):
                        alpha -= Fraction(gp[s] * gp[t] * lam_src[s][t], 2)
        img = QLaurent.one(n)
        for pos in range(n):
            e = gp[pos]
            if not e:
                continue
            if pos == kk:
                factor = V
                for _ in range(e - 1):
                    factor = qmul(factor, V, lam_dst)
            else:
                factor = QLaurent.monomial(
                    n, tuple(e if t == pos else 0 for t in range(n)))
            img = qmul(img, factor, lam_dst)
        num = num + img.scale(c * QCoeff.qpow(alpha))
        if num.num_terms() > budget:
            raise BudgetError(f"pullback at {k} exceeds {budget} terms")
    if shift == 0:
        return num
    vpow = V
    for _ in range(shift - 1):
        vpow = qmul(vpow, V, lam_dst)
    return left_divide(vpow, num, lam_dst)


# ---------------------------------------------------------------------------
# tropical transformations

def tropical_step(m, seed, k):
    """The piecewise-linear coordinate change from seed to mutate_seed(seed, k)."""
    if k not in seed.I_uf:
        raise SeedError(f"tropical step needs an unfrozen vertex, got {k}")
    kk = seed.idx(k)
    kuf = seed.uf_idx(k)
    mk = m[kk]
    out = list(m)
    out[kk] = -mk
    for i in range(seed.n):
        if i == kk:
            continue
        bik = seed.B[i][kuf]
        if bik >= 0:
            out[i] = m[i] + bik * max(mk, 0)
        else:
            out[i] = m[i] + bik * max(-mk, 0)
    return tuple(out)


def tropical_transport(m, seed, word):
    for k in word:
        m = tropical_step(m, seed, k)
        seed = mutate_seed(seed, k)
    return tuple(m)


def transport_back(m, seed, word):
    """Transport m from the seed reached by `word` back to `seed`."""
    chain = [seed]
    for k in word:
        chain.append(mutate_seed(chain[-1], k))
    for idx in range(len(word) - 1, -1, -1):
        # the step from mu_k s back to s is the tropical step of mu_k s at k
        m = tropical_step(m, chain[idx + 1], word[idx])
    return tuple(m)


class TropicalPoint:
    """A tropical point represented in the seed reached by `word`."""

    def __init__(self, word, m):
        self.word = tuple(word)
        self.m = tuple(m)


def same_tropical_point(seed, p1, p2):
    """Equality of tropical points by transporting both to the initial seed."""
    m1 = transport_back(p1.m, seed, p1.word)
    m2 = transport_back(p2.m, seed, p2.word)
    return m1 == m2


# ---------------------------------------------------------------------------
# green-to-red verification and Laurent reports

def is_green_to_red(seed, word, sigma=None, budget=DEFAULT_BUDGET):
    """Does `word` exhibit injective reachability with vertex matching sigma?

    Checks deg x_{sigma(k)}(final) = -f_k modulo frozen coordinates for
    every unfrozen k.
    """
    sigma = sigma or {}
    ts = mutate_tracked_word(TrackedSeed.start(seed, budget), word)
    uf_pos = {seed.idx(k) for k in seed.I_uf}
    for k in seed.I_uf:
        g = ts.var_degree(sigma.get(k, k))
        target = seed.idx(k)
        for pos in uf_pos:
            want = -1 if pos == target else 0
            if g[pos] != want:
                return False
    return True


def laurent_report(ts):
    """Per-variable {is_laurent, coefficients_nonnegative}."""
    report = {}
    for i, z in ts.vars.items():
        nonneg = all(c >= 0 for coeff in z.terms.values() for c in coeff.terms.values())
        report[i] = {"is_laurent": not z.is_zero(), "coefficients_nonnegative": nonneg}
    return report
