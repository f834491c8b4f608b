"""Freezing operators on pointed elements and their verified properties.

The freezing operator frz_{F,m} truncates a degree-m element to the
terms x^m y^n whose y-support avoids the frozen-to-be set F.  The
module also provides the stabilization-based evaluation, vanishing
orders, optimized-seed search, and dominant-cone membership tests.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from .qtorus import (
    QLaurent, qmul, normalize, degree, dominance_leq, unit_vec, supp_dim,
)
from .seed import SeedError, freeze_seed, mutate_seed, mutate_word
from .pattern import (
    BudgetError, DEFAULT_BUDGET, mutation_pullback, tropical_transport,
)


class FreezeError(ValueError):
    """Invalid input to a freezing operation."""


class FreezeContext:
    """A seed together with a subset F of unfrozen vertices to freeze."""

    __slots__ = ("seed", "F", "frozen_seed")

    def __init__(self, seed, F):
        F = frozenset(F)
        if not F <= set(seed.I_uf):
            raise FreezeError(f"F = {sorted(F)} is not a subset of I_uf")
        self.seed = seed
        self.F = F
        self.frozen_seed = freeze_seed(seed, F)


def frz(z, F, seed, m=None):
    """Truncate z = sum c_n x^m y^n to the terms with supp n disjoint from F.

    m defaults to the degree of z; every term of z must be dominated by
    m, otherwise the element is not pointed at m and we raise.
    """
    F = set(F)
    if not F <= set(seed.I_uf):
        raise FreezeError(f"F = {sorted(F)} is not a subset of I_uf")
    if z.is_zero():
        return z
    Bt = [list(r) for r in seed.B]
    if m is None:
        d = degree(z, Bt)
        if d is None:
            raise FreezeError("element is not pointed: supply m explicitly")
        m = d[0]
    m = tuple(m)
    fpos = {seed.uf_idx(j) for j in F}
    kept = {}
    for g, c in z.terms.items():
        ok, n = dominance_leq(g, m, Bt)
        if not ok:
            raise FreezeError(f"term exponent {g} is not dominated by {m}")
        if all(n[p] == 0 for p in fpos):
            kept[g] = c
    return QLaurent(z.nvars, kept)


def frz_commutes_with_mutation(z, F, k, seed):
    """Does freezing commute with the mutation pullback at k (k not in F)?

    Both sides are computed in the torus of mutate_seed(seed, k) and
    compared exactly.
    """
    F = set(F)
    if k in F:
        raise FreezeError(f"mutation vertex {k} must avoid F")
    if k not in seed.I_uf:
        raise FreezeError(f"{k} is not an unfrozen vertex")
    sdp = mutate_seed(seed, k)
    zp = mutation_pullback(z, seed, k)
    if degree(z, [list(r) for r in seed.B]) is None or \
            degree(zp, [list(r) for r in sdp.B]) is None:
        raise FreezeError("inapplicable: element is not pointed in both frames")
    lhs = frz(zp, F, sdp)
    fsd = freeze_seed(seed, F)
    rhs = mutation_pullback(frz(z, F, seed), fsd, k)
    return lhs == rhs


def _monomial_leading(seed):
    """Default decomposition engine: leading term = the degree monomial."""
    Bt = [list(r) for r in seed.B]

    def leading(u):
        d = degree(u, Bt)
        if d is None:
            raise FreezeError("decomposition input is not pointed")
        return QLaurent.monomial(u.nvars, d[0])
    return leading


def frz_via_stabilization(z, k, seed, d_max=8, leading=None):
    """Evaluate frz_{{k}} z as the stabilized value [x_k^{-d} * z_0^{(d)}].

    leading(u) must return the leading term of [x_k^d * z] = u in a
    basis with the stabilization and triangularity properties; the
    default keeps the bare degree monomial, which suffices whenever the
    truncation is a single monomial.  Stabilization is declared once
    two consecutive d give the same value.
    """
    if k not in seed.I_uf:
        raise FreezeError(f"{k} is not an unfrozen vertex")
    Bt = [list(r) for r in seed.B]
    lam = seed.Lam
    n = z.nvars
    kk = seed.idx(k)
    kuf = seed.uf_idx(k)
    if supp_dim(z, Bt)[kuf] == 0:
        # z q-commutes with x_k: nothing to truncate
        return z
    if leading is None:
        leading = _monomial_leading(seed)
    prev = None
    for d in range(d_max + 1):
        xpow = QLaurent.monomial(n, tuple(d if t == kk else 0 for t in range(n)))
        u = normalize(qmul(xpow, z, lam), Bt)[0] if d else z
        z0 = leading(u)
        xneg = QLaurent.monomial(n, tuple(-d if t == kk else 0 for t in range(n)))
        cand = normalize(qmul(xneg, z0, lam), Bt)[0]
        if cand == prev:
            return cand
        prev = cand
    raise BudgetError(f"no stabilization within d_max = {d_max}")


def vanishing_order(z, j, seed, denominator=None):
    """Order of vanishing at x_j = 0 of z (or z/denominator)."""
    if z.is_zero():
        raise FreezeError("vanishing order of zero")
    jj = seed.idx(j)
    order = min(g[jj] for g in z.terms)
    if denominator is not None:
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        order -= min(g[jj] for g in denominator.terms)
    return order


def is_optimized(seed, j):
    """Is the frozen vertex j optimized (all b_{jk} >= 0, k unfrozen)?"""
    if j not in seed.I_f:
        raise FreezeError(f"{j} is not a frozen vertex")
    return all(seed.b(j, k) >= 0 for k in seed.I_uf)


def optimized_seed_search(seed, j, explicit=None, depth=8, max_seeds=10_000):
    """A mutation word w with j optimized in mutate_word(seed, w), or None.

    An explicit candidate word is verified first; otherwise a bounded
    breadth-first search over mutation words runs.
    """
    if explicit is not None:
        if is_optimized(mutate_word(seed, explicit), j):
            return tuple(explicit)
    queue = deque([(seed, ())])
    visited = {seed}
    while queue:
        s, w = queue.popleft()
        if is_optimized(s, j):
            return w
        if len(w) >= depth:
            continue
        for k in s.I_uf:
            if w and w[-1] == k:
                continue
            s2 = mutate_seed(s, k)
            if s2 not in visited:
                if len(visited) >= max_seeds:
                    return None
                visited.add(s2)
                queue.append((s2, w + (k,)))
    return None


def dominant_membership(m, seed, optimized_seeds):
    """Is m a dominant degree?  Checked via per-frozen-vertex transport.

    optimized_seeds maps every frozen vertex j to a mutation word whose
    endpoint optimizes j; the transported coordinate at j must be >= 0
    for all frozen j.
    """
    m = tuple(m)
    for j in seed.I_f:
        if j not in optimized_seeds:
            raise FreezeError(f"missing optimized seed for frozen vertex {j}")
        w = optimized_seeds[j]
        target = mutate_word(seed, w)
        if not is_optimized(target, j):
            raise FreezeError(f"supplied word does not optimize {j}")
        t = tropical_transport(m, seed, w)
        if t[target.idx(j)] < 0:
            return False
    return True
