"""Similarity, correction technique, base changes, standard expansions,
and the bar-invariant triangular basis."""

import itertools
import random

import pytest

from qcluster.qtorus import (
    QLaurent, QCoeff, qmul, bar, normalize, degree,
)
from qcluster.seed import Seed, quantize, principal_seed, permute
from qcluster.words import SignedWord, cartan_preset, seed_from_trapezoid
from qcluster.pattern import (
    TrackedSeed, mutate_tracked_word, localized_cluster_monomial,
)
from qcluster.dbs import DBS
from qcluster.bases import (
    BasesError, SimilarityData, similarity_check, var_element,
    correction_check, base_change_map, expand_in_standard, kl_basis,
    triangular_axioms_check,
)

A1 = cartan_preset("A1")
A2 = cartan_preset("A2")


def word_rsd(letters, cartan=A2):
    return quantize(seed_from_trapezoid(SignedWord(letters, cartan)).rsd)


class TestSimilarity:
    def test_principal_seed(self):
        t = word_rsd((1, 2, 1, 2))
        prin, _ = principal_seed(t)
        sim = similarity_check(t, prin)
        assert sim.rho == 1

    def test_permuted_seed(self):
        t = word_rsd((1, 2, 1, 2))
        sigma = {1: 2, 2: 1}
        sim = similarity_check(t, permute(t, sigma), sigma)
        assert sim.rho == 1

    def test_rsd_dsd_classical(self):
        rng = random.Random(60)
        for _ in range(10):
            cart = rng.choice([A1, A2, cartan_preset("B2")])
            letters = tuple(rng.choice(cart.J)
                            for _ in range(rng.randint(1, 5)))
            tz = seed_from_trapezoid(SignedWord(letters, cart))
            assert similarity_check(tz.rsd, tz.dsd).rho == 1

    def test_mismatch_reported(self):
        t = word_rsd((1, 2, 1, 2))
        s = word_rsd((1, 1), A1)
        with pytest.raises(BasesError):
            similarity_check(t, s)
        with pytest.raises(BasesError):
            similarity_check(t, t, {1: 2, 2: 1})


class TestVarElement:
    def test_identity(self):
        t = word_rsd((1, 2, 1, 2))
        sim = similarity_check(t, t)
        ts = mutate_tracked_word(TrackedSeed.start(t), (1, 2))
        for i in t.I:
            z = ts.vars[i]
            m = degree(z, [list(r) for r in t.B])[0]
            assert var_element(z, m, sim) == z

    def test_coefficient_changed_twin(self):
        # same unfrozen data, frozen row scaled: the mutated variable
        # x_1^{-1}(1 + x_2) maps to x_1^{-1}(1 + x_2^2)
        t = quantize(Seed((1, 2), (1,), (1, 1), [[0], [1]]))
        tp = quantize(Seed((1, 2), (1,), (1, 1), [[0], [2]]))
        sim = similarity_check(t, tp)
        ts = mutate_tracked_word(TrackedSeed.start(t), (1,))
        out = var_element(ts.vars[1], (-1, 0), sim)
        expect = (QLaurent.monomial(2, (-1, 0))
                  + QLaurent.monomial(2, (-1, 2)).scale(
                      QCoeff.qpow(sim.rho * 0)))
        assert set(out.terms) == set(expect.terms)

    def test_wrong_unfrozen_target_raises(self):
        t = word_rsd((1, 2, 1, 2))
        sim = similarity_check(t, t)
        ts = mutate_tracked_word(TrackedSeed.start(t), (1,))
        z = ts.vars[1]
        m = list(degree(z, [list(r) for r in t.B])[0])
        m[t.idx(1)] += 1
        with pytest.raises(BasesError):
            var_element(z, tuple(m), sim)


class TestCorrection:
    def test_single_factor_trivial(self):
        t = word_rsd((1, 2, 1, 2))
        prin, _ = principal_seed(t)
        sim = similarity_check(prin, t)
        tsp = mutate_tracked_word(TrackedSeed.start(prin), (1,))
        tst = mutate_tracked_word(TrackedSeed.start(t), (1,))
        rep = correction_check([tsp.vars[1]], [tst.vars[1]], sim)
        assert rep["holds"] and all(v == 0 for v in rep["p_prime"])

    def test_nontrivial_frozen_shift(self):
        t = word_rsd((1, 2, 1, 2))
        prin, _ = principal_seed(t)
        sim = similarity_check(prin, t)
        tsp = mutate_tracked_word(TrackedSeed.start(prin), (1,))
        tst = mutate_tracked_word(TrackedSeed.start(t), (1,))
        g = degree(tst.vars[1], [list(r) for r in t.B])[0]
        shifted = list(g)
        shifted[t.idx(3)] += 2
        rep = correction_check([tsp.vars[1]], [tst.vars[1]], sim,
                               m_prime=tuple(shifted))
        assert rep["holds"]
        assert rep["p_prime"][t.idx(3)] == 2

    def test_products_against_principal(self):
        rng = random.Random(61)
        t = word_rsd((1, 2, 1, 2))
        prin, _ = principal_seed(t)
        sim = similarity_check(prin, t)
        for _ in range(20):
            mw = tuple(rng.choice(t.I_uf) for _ in range(rng.randint(0, 3)))
            tsp = mutate_tracked_word(TrackedSeed.start(prin), mw)
            tst = mutate_tracked_word(TrackedSeed.start(t), mw)
            picks = [rng.choice(t.I_uf) for _ in range(rng.randint(2, 3))]
            rep = correction_check([tsp.vars[i] for i in picks],
                                   [tst.vars[i] for i in picks], sim)
            assert rep["holds"]


class TestBaseChange:
    def test_identity_map(self):
        t = word_rsd((1, 2, 1, 2))
        report, phi = base_change_map(t, t, lambda g: g)
        assert report["rho"] == 1
        ts = mutate_tracked_word(TrackedSeed.start(t), (2,))
        assert phi(ts.vars[2]) == ts.vars[2]

    def test_principal_variation_map(self):
        t = word_rsd((1, 2, 1, 2))
        prin, var = principal_seed(t)
        ts = mutate_tracked_word(TrackedSeed.start(prin), (1, 2))
        tst = mutate_tracked_word(TrackedSeed.start(t), (1, 2))
        fragments = [(ts.vars[k], tst.vars[k]) for k in t.I_uf]
        report, phi = base_change_map(prin, t, var, fragments=fragments)
        assert report["rho"] == 1 and report["fragments"] == len(fragments)

    def test_broken_map_rejected(self):
        t = word_rsd((1, 2, 1, 2))
        prin, var = principal_seed(t)

        def bad(g):
            out = list(var(g))
            out[t.idx(3)] += g[prin.idx(1)]
            return tuple(out)
        with pytest.raises(BasesError):
            base_change_map(prin, t, bad)


class TestExpandInStandard:
    def test_unit_expansion(self):
        ctx = DBS(SignedWord((1, 2, 1), A2))
        w = (0, 1, 1)
        out = expand_in_standard(ctx.standard_monomial(w), ctx)
        assert list(out.coefficients) == [w]
        assert out.coefficients[w].is_one()

    def test_adjacent_product_single_term(self):
        ctx = DBS(SignedWord((1, 2, 1), A2))
        z = qmul(ctx.fundamental(1).element, ctx.fundamental(2).element,
                 ctx.rsd.Lam)
        z = normalize(z, [list(r) for r in ctx.rsd.B])[0]
        out = expand_in_standard(z, ctx)
        assert list(out.coefficients) == [(1, 1, 0)]

    def test_degree_bound_enforced(self):
        ctx = DBS(SignedWord((1, 2, 1), A2))
        z = ctx.standard_monomial((2, 0, 0))
        with pytest.raises(BasesError):
            expand_in_standard(z, ctx, degree_bound=(1, 1, 1))

    def test_bar_expansion_unitriangular(self):
        ctx = DBS(SignedWord((1, 2, 1), A2))
        Bt = [list(r) for r in ctx.rsd.B]
        for w in [(1, 1, 1), (2, 1, 0), (0, 1, 2)]:
            out = expand_in_standard(bar(ctx.standard_monomial(w)), ctx)
            assert out.coefficients[w].is_one()
            gw = degree(ctx.standard_monomial(w), Bt)[0]
            for u in out.coefficients:
                gu = degree(ctx.standard_monomial(u), Bt)[0]
                assert u == w or gu != gw


class TestKLBasis:
    WORDS = [((1, 1, 1), A1), ((1, 2, 1), A2)]

    def test_fundamental_is_its_own_element(self):
        ctx = DBS(SignedWord((1, 2, 1), A2))
        for i in range(1, 4):
            w = tuple(1 if t == i - 1 else 0 for t in range(3))
            L, coeffs = kl_basis(ctx, w)
            assert L == ctx.standard_monomial(w)
            assert list(coeffs) == [w]

    def test_orders_agree_and_bar_invariant(self):
        for letters, cart in self.WORDS:
            ctx = DBS(SignedWord(letters, cart))
            for w in itertools.product(range(4), repeat=3):
                if sum(w) > 3:
                    continue
                Lr, cr = kl_basis(ctx, w, "rev")
                Ll, cl = kl_basis(ctx, w, "lex")
                assert Lr == Ll and cr == cl
                assert bar(Lr) == Lr
                for v, c in cr.items():
                    if v != w:
                        assert c.q_exponents_in(lambda a: a < 0)

    def test_matches_cluster_monomials(self):
        for letters, cart in self.WORDS:
            ctx = DBS(SignedWord(letters, cart))
            s = ctx.rsd
            mwords = [()] + [(k,) for k in s.I_uf] + \
                [(a, b) for a in s.I_uf for b in s.I_uf if a != b]
            hits = 0
            for mw in mwords:
                ts = mutate_tracked_word(TrackedSeed.start(s), mw)
                for m in itertools.product(range(3), repeat=s.n):
                    if not 0 < sum(m) <= 3:
                        continue
                    z, g = localized_cluster_monomial(ts, m)
                    w = ctx.beta_coordinates(g)
                    if any(x < 0 for x in w) or sum(w) > 3:
                        continue
                    L, _ = kl_basis(ctx, w)
                    assert L == z
                    hits += 1
            assert hits >= 20

    def test_unknown_order_rejected(self):
        ctx = DBS(SignedWord((1, 1), A1))
        with pytest.raises(BasesError):
            kl_basis(ctx, (1, 0), order="colex")


class TestStabilizationEngine:
    def test_kl_leading_engine_matches_frz(self):
        # the bar-invariant basis supplies a triangular decomposition
        # engine for the stabilization route to the freezing operator
        from qcluster.freeze import frz, frz_via_stabilization
        ctx = DBS(SignedWord((1, 2, 1), A2))
        s = ctx.rsd
        Bt = [list(r) for r in s.B]

        def leading(u):
            g = degree(u, Bt)[0]
            w = ctx.beta_coordinates(g)
            return kl_basis(ctx, w)[0].scale(u.terms[g])

        for w in itertools.product(range(3), repeat=3):
            if not 0 < sum(w) <= 3:
                continue
            z = ctx.standard_monomial(w)
            assert frz_via_stabilization(z, 1, s, leading=leading) \
                == frz(z, {1}, s)


class TestTriangularAxioms:
    def kl_fragment(self, letters, cart):
        ctx = DBS(SignedWord(letters, cart))
        els = []
        for w in itertools.product(range(4), repeat=3):
            if sum(w) <= 3:
                els.append(kl_basis(ctx, w)[0])
        return ctx, els

    def test_kl_fragments_pass(self):
        for letters, cart in [((1, 1, 1), A1), ((1, 2, 1), A2)]:
            ctx, els = self.kl_fragment(letters, cart)
            rep = triangular_axioms_check(els, ctx.rsd)
            assert rep["pass"]
            assert rep["checked_products"] > 0

    def test_cluster_monomial_fragment_passes(self):
        # finite type: collect cluster monomials from every short walk
        s = word_rsd((1, 2, 1))
        frag = {}
        for mw in [(), (1,), (1, 1)]:
            ts = mutate_tracked_word(TrackedSeed.start(s), mw)
            for m in itertools.product(range(3), repeat=s.n):
                if sum(m) > 3:
                    continue
                z, g = localized_cluster_monomial(ts, m)
                frag[g] = z
        rep = triangular_axioms_check(frag.values(), s)
        assert rep["pass"]
        assert rep["checked_products"] > 0

    def test_non_bar_invariant_member_fails(self):
        s = quantize(Seed((1, 2), (1,), (1, 1), [[0], [1]]))
        z = (QLaurent.monomial(2, (0, 0))
             + QLaurent.monomial(2, (0, 1)).scale(QCoeff.qpow(1)))
        rep = triangular_axioms_check([z], s)
        assert not rep["pass"]
        assert rep["bar_failures"]
