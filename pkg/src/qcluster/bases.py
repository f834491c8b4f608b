"""Similar seeds, the correction technique, base changes, and triangular
bases built on standard monomials.

Two seeds are similar when their unfrozen data agree up to a vertex
permutation and, in the quantum case, the compatibility scalars agree
up to one global ratio rho.  Similar pointed elements transport along
variation maps; normalized products transport up to a frozen monomial
(the correction technique).  On word seeds, the bar involution of the
standard monomial basis is unitriangular, which determines a canonical
bar-invariant basis by the usual Kazhdan-Lusztig style recursion.
"""

from __future__ import annotations

from fractions import Fraction

from .qtorus import (
    QLaurent, QCoeff, qmul, bar, normalize, degree, dominance_leq,
    y_decomposition, unit_vec, skew_eval, _drop_functional,
)
from .seed import SeedError, check_compatible
from .pattern import BudgetError
from .dbs import DBS, DBSError, _context


class BasesError(ValueError):
    """A similarity, correction, or basis computation failed."""


# ---------------------------------------------------------------------------
# similarity and variation

class SimilarityData:
    """A verified similarity between two seeds.

    sigma maps unfrozen ids of `seed` to unfrozen ids of `other`; rho is
    the ratio of the compatibility scalars (1 in the classical case).
    """

    __slots__ = ("seed", "other", "sigma", "rho")

    def __init__(self, seed, other, sigma, rho):
        self.seed = seed
        self.other = other
        self.sigma = dict(sigma)
        self.rho = Fraction(rho)


def similarity_check(t, tp, sigma=None):
    """Verify that t and tp are similar up to sigma; return SimilarityData.

    sigma defaults to the identity on I_uf.  Raises BasesError naming
    the first mismatched entry.
    """
    sigma = dict(sigma) if sigma else {k: k for k in t.I_uf}
    if set(sigma) != set(t.I_uf) or set(sigma.values()) != set(tp.I_uf):
        raise BasesError("sigma is not a bijection between the unfrozen sets")
    for i in t.I_uf:
        if tp.d_of(sigma[i]) != t.d_of(i):
            raise BasesError(f"symmetrizer mismatch at {i}: "
                             f"{t.d_of(i)} vs {tp.d_of(sigma[i])}")
        for j in t.I_uf:
            if tp.b(sigma[i], sigma[j]) != t.b(i, j):
                raise BasesError(f"exchange entry mismatch at ({i},{j}): "
                                 f"{t.b(i, j)} vs {tp.b(sigma[i], sigma[j])}")
    if (t.Lam is None) != (tp.Lam is None):
        raise BasesError("cannot compare a quantum seed with a classical one")
    rho = Fraction(1)
    if t.Lam is not None:
        deltas = check_compatible(t)
        deltasp = check_compatible(tp)
        rho = Fraction(deltasp[sigma[t.I_uf[0]]], deltas[t.I_uf[0]])
        for k in t.I_uf:
            if Fraction(deltasp[sigma[k]], deltas[k]) != rho:
                raise BasesError(f"compatibility scalar ratio differs at {k}")
    return SimilarityData(t, tp, sigma, rho)


def var_element(z, m_prime, sim):
    """The element of sim.other similar to z, pointed at m_prime.

    Termwise x^m y^n maps to x^{m'} y^n with q^{1/2} replaced by
    q^{rho/2}; the unfrozen coordinates of m' must match those of
    deg z under sigma.
    """
    t, tp = sim.seed, sim.other
    Bt = [list(r) for r in t.B]
    d = degree(z, Bt)
    if d is None:
        raise BasesError("var_element needs a pointed input")
    m = d[0]
    m_prime = tuple(m_prime)
    for k in t.I_uf:
        if m_prime[tp.idx(sim.sigma[k])] != m[t.idx(k)]:
            raise BasesError(f"unfrozen coordinate of m' differs at {k}")
    dec = y_decomposition(z, Bt, m)
    out = QLaurent.zero(tp.n)
    for n, c in dec.items():
        g = list(m_prime)
        for k in t.I_uf:
            e = n[t.uf_idx(k)]
            if e:
                col = tp.uf_idx(sim.sigma[k])
                for i in range(tp.n):
                    g[i] += e * tp.B[i][col]
        cp = c.subs_q_scale(sim.rho) if sim.rho != 1 else c
        out = out + QLaurent.monomial(tp.n, tuple(g), cp)
    return out


def correction_check(factors, counterparts, sim, m_prime=None):
    """Verify the correction identity for a normalized product.

    With z = [z_1*...*z_r] in sim.seed and z'_s similar to z_s in
    sim.other, the transported element var(z) pointed at m' equals
    p'.[z'_1*...*z'_r] for a frozen monomial p' with deg p' =
    m' - sum deg z'_s.  m' defaults to sum deg z'_s (then p' = 1).
    Returns {"p_prime": exponent tuple, "holds": True}; raises on any
    violation.
    """
    if len(factors) != len(counterparts) or not factors:
        raise BasesError("factor lists must be nonempty and equal length")
    t, tp = sim.seed, sim.other
    lam = t.Lam
    lamp = tp.Lam
    Bt = [list(r) for r in t.B]
    Btp = [list(r) for r in tp.B]
    prod = factors[0]
    for f in factors[1:]:
        prod = qmul(prod, f, lam)
    z = normalize(prod, Bt)[0]
    prodp = counterparts[0]
    for f in counterparts[1:]:
        prodp = qmul(prodp, f, lamp)
    zp, gp = normalize(prodp, Btp)
    msum = gp
    if m_prime is None:
        m_prime = msum
    m_prime = tuple(m_prime)
    p_exp = tuple(a - b for a, b in zip(m_prime, msum))
    for k in tp.I_uf:
        if p_exp[tp.idx(k)] != 0:
            raise BasesError(f"correction monomial is not frozen at {k}")
    target = var_element(z, m_prime, sim)
    corrected = normalize(
        qmul(QLaurent.monomial(tp.n, p_exp), zp, lamp), Btp)[0]
    if corrected != target:
        raise BasesError("correction identity fails: transported element "
                         "differs from the corrected product")
    return {"p_prime": p_exp, "holds": True}


# ---------------------------------------------------------------------------
# base changes

def base_change_map(t, tp, var, sigma=None, fragments=None):
    """Check that the exponent map `var` defines a variation map t -> tp.

    var sends exponent vectors over t to exponent vectors over tp such
    that x_k maps to x'_{sigma k} times a frozen monomial, y_k to
    y'_{sigma k}, and frozen monomials to frozen monomials; in the
    quantum case the skew forms must satisfy lam'(var g, var h) =
    rho lam(g, h).  Returns (report, phi) where phi applies the induced
    base change to Laurent elements termwise.  Optional fragments is a
    list of (z, z_target) pairs verified to satisfy z_target =
    [p' * phi(z)] with p' frozen.
    """
    sim = similarity_check(t, tp, sigma)
    n, np_ = t.n, tp.n
    units = [unit_vec(n, i) for i in range(n)]
    images = [tuple(var(u)) for u in units]
    for i in range(n):
        for j in range(i + 1, n):
            s = tuple(a + b for a, b in zip(units[i], units[j]))
            if tuple(var(s)) != tuple(a + b for a, b in zip(images[i], images[j])):
                raise BasesError(f"var is not additive at positions ({i},{j})")
    ufp = {tp.idx(k): k for k in tp.I_uf}
    for k in t.I_uf:
        img = images[t.idx(k)]
        for pos, kp in ufp.items():
            want = 1 if kp == sim.sigma[k] else 0
            if img[pos] != want:
                raise BasesError(f"var(x_{k}) has unfrozen part != x'_{sim.sigma[k]}")
    for j in t.I_f:
        img = images[t.idx(j)]
        if any(img[pos] for pos in ufp):
            raise BasesError(f"var(x_{j}) is not a frozen monomial")
    for k in t.I_uf:
        ycol = tuple(t.B[i][t.uf_idx(k)] for i in range(n))
        yimg = tuple(var(ycol))
        want = tuple(tp.B[i][tp.uf_idx(sim.sigma[k])] for i in range(np_))
        if yimg != want:
            raise BasesError(f"var(y_{k}) != y'_{sim.sigma[k]}")
    if t.Lam is not None:
        for i in range(n):
            for j in range(n):
                lhs = skew_eval(tp.Lam, images[i], images[j])
                if Fraction(lhs) != sim.rho * t.Lam[i][j]:
                    raise BasesError(f"skew form mismatch at ({i},{j})")

    def phi(z):
        out = QLaurent.zero(np_)
        for g, c in z.terms.items():
            cp = c.subs_q_scale(sim.rho) if sim.rho != 1 else c
            out = out + QLaurent.monomial(np_, tuple(var(g)), cp)
        return out

    report = {"rho": sim.rho, "sigma": dict(sim.sigma), "fragments": 0}
    if fragments:
        Btp = [list(r) for r in tp.B]
        for z, z_target in fragments:
            img = phi(z)
            gi = degree(img, Btp)
            gt = degree(z_target, Btp)
            if gi is None or gt is None:
                raise BasesError("fragment elements must be pointed")
            p_exp = tuple(a - b for a, b in zip(gt[0], gi[0]))
            if any(p_exp[tp.idx(k)] for k in tp.I_uf):
                raise BasesError("fragment transport needs a frozen monomial")
            moved = normalize(
                qmul(QLaurent.monomial(np_, p_exp), img, tp.Lam), Btp)[0]
            if moved != normalize(z_target, Btp)[0]:
                raise BasesError("fragment does not transport along phi")
            report["fragments"] += 1
    return report, phi


# ---------------------------------------------------------------------------
# standard-basis expansions and the bar-invariant basis

class BasisExpansion:
    """A finite expansion target = sum_w coefficients[w] * M(w)."""

    __slots__ = ("target", "coefficients")

    def __init__(self, target, coefficients):
        self.target = target
        self.coefficients = dict(coefficients)

    def evaluate(self, ctx):
        out = QLaurent.zero(ctx.l)
        for w, c in self.coefficients.items():
            out = out + ctx.standard_monomial(w).scale(c)
        return out


def expand_in_standard(z, eta, degree_bound=None):
    """Expand z over the standard monomials of the word eta, verified.

    degree_bound, when given, is a componentwise cap on the exponent
    vectors w allowed to appear.
    """
    ctx = _context(eta)
    coeffs = ctx.expand_standard(z)
    if degree_bound is not None:
        for w in coeffs:
            if any(a > b for a, b in zip(w, degree_bound)):
                raise BasesError(f"expansion exponent {w} exceeds the bound")
    out = BasisExpansion(z, coeffs)
    if out.evaluate(ctx) != z:
        raise BasesError("standard expansion does not re-evaluate to the input")
    return out


def _bar_matrix(ctx, w):
    """Expansion of bar(M(v)) over M for the dominance-closure of w.

    Returns {v: {u: QCoeff}} with unitriangular structure: the diagonal
    entry is 1 and every off-diagonal index is strictly dominated.
    """
    Bt = [list(r) for r in ctx.rsd.B]
    R = {}
    todo = [tuple(w)]
    while todo:
        v = todo.pop()
        if v in R:
            continue
        mv = ctx.standard_monomial(v)
        exp = ctx.expand_standard(bar(mv))
        if not exp.get(v, QCoeff.zero()).is_one():
            raise BasesError(f"bar matrix diagonal at {v} is not 1")
        gv = degree(mv, Bt)[0]
        for u in exp:
            if u == v:
                continue
            gu = degree(ctx.standard_monomial(u), Bt)[0]
            if not dominance_leq(gu, gv, Bt)[0]:
                raise BasesError(f"bar matrix entry ({u},{v}) breaks triangularity")
            todo.append(u)
        R[v] = exp
    return R


def _order_key(order):
    if order == "rev":
        return lambda w: tuple(reversed(w))
    if order == "lex":
        return lambda w: w
    raise BasesError(f"unknown order {order!r} (expected 'rev' or 'lex')")


def kl_basis(eta, w, order="rev"):
    """The bar-invariant basis element L(w) = M(w) + sum b_{w'} M(w').

    Solved by the standard recursion over the bar matrix, processing
    indices in decreasing `order`; every b_{w'} lies in
    q^{-1/2} Z[q^{-1/2}].  Returns (element, coefficients {w': QCoeff}).
    """
    ctx = _context(eta)
    w = tuple(w)
    key = _order_key(order)
    R = _bar_matrix(ctx, w)
    b = {w: QCoeff.integer(1)}
    for u in sorted((v for v in R if v != w), key=key, reverse=True):
        c = QCoeff.zero()
        for v, bv in b.items():
            c = c + bv.bar() * R[v].get(u, QCoeff.zero())
        if c.bar() + c != QCoeff.zero() or 0 in c.terms:
            raise BasesError(f"bar-invariance equation at {u} has no solution")
        bu = QCoeff({a: x for a, x in c.terms.items() if a < 0})
        b[u] = bu
    element = QLaurent.zero(ctx.l)
    for v, bv in b.items():
        element = element + ctx.standard_monomial(v).scale(bv)
    if bar(element) != element:
        raise BasesError("solved element is not bar-invariant")
    coeffs = {v: bv for v, bv in b.items() if not bv.is_zero()}
    return element, coeffs


# ---------------------------------------------------------------------------
# triangular-basis axioms

def _expand_in_fragment(z, by_degree, Bt, max_steps=10_000):
    """Peel z over a degree-indexed fragment; None when a degree is missing."""
    drop = _drop_functional(Bt)
    coeffs = {}
    r = z
    for _ in range(max_steps):
        if r.is_zero():
            return coeffs
        g = max(r.terms,
                key=lambda e: (sum(c * x for c, x in zip(drop, e)), e))
        if g not in by_degree:
            return None
        c = r.terms[g]
        r = r - by_degree[g].scale(c)
        coeffs[g] = c
    raise BudgetError("fragment expansion did not terminate")


def triangular_axioms_check(fragment, seed):
    """Report the triangular-basis axioms on a finite basis fragment.

    Axioms: every member is bar-invariant; members are pointed at
    pairwise distinct degrees with leading coefficient 1; for every
    initial variable x_i, [x_i * L] expands over the fragment with
    leading coefficient 1 and the other coefficients in
    q^{-1/2} Z[q^{-1/2}].  Products whose expansion leaves the fragment
    are counted as skipped, not failed.
    """
    Bt = [list(r) for r in seed.B]
    lam = seed.Lam
    report = {"bar_failures": [], "pointed_failures": [],
              "product_failures": [], "checked_products": 0,
              "skipped_products": 0, "pass": True}
    by_degree = {}
    for z in fragment:
        d = degree(z, Bt)
        if d is None or not z.terms[d[0]].is_one() or d[0] in by_degree:
            report["pointed_failures"].append(d[0] if d else None)
            continue
        by_degree[d[0]] = z
        if bar(z) != z:
            report["bar_failures"].append(d[0])
    for i in seed.I:
        xi = QLaurent.monomial(seed.n, unit_vec(seed.n, seed.idx(i)))
        for g, z in by_degree.items():
            prod = normalize(qmul(xi, z, lam), Bt)[0]
            exp = _expand_in_fragment(prod, by_degree, Bt)
            if exp is None:
                report["skipped_products"] += 1
                continue
            report["checked_products"] += 1
            top = max(exp, key=lambda e: (
                sum(c * x for c, x in zip(_drop_functional(Bt), e)), e))
            bad = not exp[top].is_one() or any(
                not c.q_exponents_in(lambda a: a < 0)
                for h, c in exp.items() if h != top)
            if bad:
                report["product_failures"].append((i, g))
    report["pass"] = not (report["bar_failures"] or report["pointed_failures"]
                          or report["product_failures"])
    return report
