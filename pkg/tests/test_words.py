"""Signed words, trapezoid seeds, the closed B-matrix formula, and the
word operations with their verified seed-level witnesses."""

import math
import random
from fractions import Fraction

import pytest

from qcluster.seed import (
    Seed, opposite, mutate_seed, mutate_word, subseed_check, quantize,
    check_compatible,
)
from qcluster.words import (
    WordError, CartanData, cartan_preset, SignedWord, word_indices,
    seed_from_formula, seed_from_trapezoid, stable_dsd, flip, sort_signs,
    braid_move, left_reflection, right_reflection, subword_embedding,
    letter_extension,
)
from seedgen import sl2_opposite_seed

INF = math.inf

A1 = cartan_preset("A1")
A2 = cartan_preset("A2")
B2 = cartan_preset("B2")
G2 = cartan_preset("G2")
K2 = cartan_preset("K2")


def w(letters, cartan=A2):
    return SignedWord(letters, cartan)


class TestCartan:
    def test_presets(self):
        assert A2.c(1, 2) == -1 and A2.sym(1) == 1
        assert B2.c(2, 1) == -2 and (B2.sym(1), B2.sym(2)) == (1, 2)
        assert G2.c(2, 1) == -3 and G2.sym(2) == 3
        assert K2.c(1, 2) == -2 and K2.sym(1) == K2.sym(2) == 1

    def test_symmetrizers_solved(self):
        c = cartan_preset('{"C": [[2, -1], [-2, 2]]}')
        assert (c.sym(1), c.sym(2)) == (1, 2)

    def test_invalid(self):
        with pytest.raises(WordError):
            cartan_preset('{"C": [[2, 1], [1, 2]]}')
        with pytest.raises(WordError):
            cartan_preset("Z9")

    def test_extension_relation(self):
        assert K2.is_extension_of(A1)
        assert not A2.is_extension_of(B2)


class TestWordIndices:
    def test_single_letter(self):
        idx = word_indices(w((1,), A1))
        assert idx.kmin[1] == idx.kmax[1] == 1
        assert idx.o_minus[1] == idx.o_plus[1] == 0
        assert idx.succ[1] == INF and idx.pred[1] == -INF

    def test_kronecker_successors(self):
        idx = word_indices(w((1, 2, 1, 1, 2, 2, 1), K2))
        assert idx.succ[1] == 3 and idx.succ[3] == 4 and idx.succ[4] == 7
        assert idx.succ[2] == 5 and idx.succ[5] == 6
        assert idx.succ[7] == INF and idx.succ[6] == INF

    def test_ordered_labels(self):
        idx = word_indices(w((1, 2, 1, -2, -1, -2)))
        assert idx.ordered_labels() == [(1, 0), (2, 0), (1, 1), (2, 1), (1, 2), (2, 2)]

    def test_counting_identity(self):
        rng = random.Random(30)
        for _ in range(20):
            word = w(tuple(rng.choice((1, -1, 2, -2)) for _ in range(6)))
            idx = word_indices(word)
            for k in range(1, 7):
                a = idx.layer[k]
                assert idx.o_minus[k] + idx.o_plus[k] + 1 == idx.O(a)
                if idx.succ[k] != INF:
                    assert idx.pred[idx.succ[k]] == k
                assert idx.shift(k, -idx.o_minus[k]) == idx.kmin[k]
                assert idx.shift(k, idx.o_plus[k]) == idx.kmax[k]

    def test_invalid_letters(self):
        with pytest.raises(WordError):
            w((0,))
        with pytest.raises(WordError):
            w((3,), A2)


class TestFormulaSeed:
    def test_figure_word_entries(self):
        s = seed_from_formula(w((1, 2, 1, -1, -2, -1)))
        assert s.b(1, 3) == 1
        assert s.b(3, 1) == -1
        assert s.b(2, 3) == -1

    def test_distinct_letters_diagonal_cartan(self):
        c = cartan_preset('{"C": [[2, 0, 0], [0, 2, 0], [0, 0, 2]]}')
        s = seed_from_formula(SignedWord((1, -2, 3), c))
        # no interactions: every entry comes from adjacent occurrences
        assert all(v == 0 for row in s.B for v in row)

    def test_vertex_sets(self):
        s = seed_from_formula(w((1, 2, 1, -1, -2, -1)))
        assert s.I == (-2, -1, 1, 2, 3, 4, 5, 6)
        assert s.I_uf == (1, 2, 3, 4)


def random_word(rng):
    cartan = rng.choice((A1, A2, cartan_preset("A3"), B2, G2, K2))
    length = rng.randint(0, 8)
    letters = tuple(rng.choice(cartan.J) * rng.choice((1, -1))
                    for _ in range(length))
    return SignedWord(letters, cartan)


class TestTrapezoidSeed:
    def test_oracle_pair(self):
        rng = random.Random(31)
        for _ in range(200):
            word = random_word(rng)
            assert seed_from_formula(word) == seed_from_trapezoid(word).dsd

    def test_rank_one_matches_opposite_convention(self):
        t = seed_from_trapezoid(SignedWord((1, -1), A1))
        expect = opposite(sl2_opposite_seed())
        assert t.dsd == Seed(expect.I, expect.I_uf, expect.d, expect.B)

    def test_empty_word(self):
        t = seed_from_trapezoid(SignedWord((), A1))
        assert t.rsd.I == ()
        assert t.dsd.I == (-1,) and t.dsd.I_uf == ()

    def test_figure_arrow_set(self):
        t = seed_from_trapezoid(w((1, 2, 1, -1, -2, -1)))
        half = Fraction(1, 2)
        expect = {
            (-1, 1): 1, (1, -2): 1, (-2, 2): 1, (2, 1): 1, (1, 3): 1,
            (4, 3): 1, (2, 4): 1, (5, 2): 1, (3, 2): 1, (4, 5): 1,
            (6, 4): 1, (-2, -1): half, (5, 6): half,
        }
        assert t.arrows() == expect

    def test_rsd_drops_left_frozen(self):
        t = seed_from_trapezoid(w((1, 2, 1, -1, -2, -1)))
        assert t.rsd.I == (1, 2, 3, 4, 5, 6)
        assert t.rsd.I_uf == t.dsd.I_uf
        for k in t.rsd.I:
            assert t.rsd.B[t.rsd.idx(k)] == t.dsd.B[t.dsd.idx(k)]

    def test_rsd_quantizable(self):
        q = quantize(seed_from_trapezoid(w((1, 2, 1, -1, -2, -1))).rsd)
        assert all(v > 0 for v in check_compatible(q).values())

    def test_symmetrizers_follow_layers(self):
        t = seed_from_trapezoid(SignedWord((1, 2, 1, 2), B2))
        idx = word_indices(t.word)
        for k in range(1, 5):
            assert t.dsd.d_of(k) == B2.sym(idx.layer[k])


class TestFlips:
    def test_same_letter_is_mutation(self):
        word2, witness = flip(SignedWord((1, -1), A1), 1)
        assert word2.letters == (-1, 1)
        assert witness == ((1, 0),)

    def test_distinct_letters_identity(self):
        word2, witness = flip(w((1, -2)), 1)
        assert word2.letters == (-2, 1)
        assert witness == ()

    def test_invalid_position(self):
        with pytest.raises(WordError):
            flip(w((1, 2)), 1)

    def test_sort_signs_composite_witness(self):
        start = w((1, 2, -1, -2))
        end, witness = sort_signs(start)
        assert end.letters == (-1, -2, 1, 2)
        assert mutate_word(stable_dsd(start), witness) == stable_dsd(end)

    def test_random_flip_chains(self):
        rng = random.Random(32)
        for _ in range(30):
            word = random_word(rng)
            end, witness = sort_signs(word)
            assert sorted(end.letters, key=lambda x: x > 0) == list(end.letters)
            assert mutate_word(stable_dsd(word), witness) == stable_dsd(end)


class TestBraidMoves:
    def test_a2_move_one_mutation(self):
        word2, (sigma, mu) = braid_move(w((1, 2, 1)), (1, 3), (2, 1, 2))
        assert word2.letters == (2, 1, 2)
        assert len(mu) == 1

    def test_commuting_move(self):
        c = cartan_preset('{"C": [[2, 0], [0, 2]]}')
        word2, (sigma, mu) = braid_move(SignedWord((1, 2), c), (1, 2), (2, 1))
        assert word2.letters == (2, 1)
        assert mu == ()

    def test_b2_move(self):
        word2, (sigma, mu) = braid_move(SignedWord((1, 2, 1, 2), B2),
                                        (1, 4), (2, 1, 2, 1))
        assert word2.letters == (2, 1, 2, 1)
        assert len(mu) <= 3

    def test_negative_span(self):
        word2, (sigma, mu) = braid_move(w((-1, -2, -1)), (1, 3), (2, 1, 2))
        assert word2.letters == (-2, -1, -2)

    def test_inside_longer_word(self):
        word2, (sigma, mu) = braid_move(w((2, 1, 2, 1, -1)), (2, 4), (2, 1, 2))
        assert word2.letters == (2, 2, 1, 2, -1)

    def test_not_applicable(self):
        with pytest.raises(WordError):
            braid_move(w((1, 2)), (1, 2), (2, 1))
        with pytest.raises(WordError):
            braid_move(w((1, -2, 1)), (1, 3), (2, 1, 2))


class TestReflections:
    def test_left_reflection_fixes_rsd(self):
        rng = random.Random(33)
        for _ in range(25):
            word = random_word(rng)
            if not word.letters:
                continue
            refl = left_reflection(word)
            assert seed_from_trapezoid(refl).rsd == seed_from_trapezoid(word).rsd

    def test_double_reflection(self):
        word = w((1, -2, 1))
        assert left_reflection(left_reflection(word)) == word
        assert right_reflection(right_reflection(word)) == word

    def test_dsd_changes(self):
        word = w((1, 2, 1))
        assert seed_from_formula(left_reflection(word)) != seed_from_formula(word)

    def test_empty_rejected(self):
        with pytest.raises(WordError):
            left_reflection(w(()))


class TestSubwords:
    def test_identity_range(self):
        word = w((1, 2, 1, -1, -2, -1))
        emb = subword_embedding(word, 1, 6)
        assert all(emb.iota[i] == i for i in emb.source.I)
        assert subseed_check(emb) == "good"

    def test_figure_subword(self):
        word = w((1, 2, 1, -1, -2, -1))
        emb = subword_embedding(word, 2, 6)
        for s in range(1, 6):
            assert emb.iota[s] == s + 1
        assert emb.iota[-2] == -2
        # layer 1 already occurred, so its left interval lands at position 1
        assert emb.iota[-1] == 1
        assert subseed_check(emb) == "good"

    def test_random_subwords_embed(self):
        rng = random.Random(34)
        for _ in range(40):
            word = random_word(rng)
            if not word.letters:
                continue
            j = rng.randint(1, len(word.letters))
            k = rng.randint(j, len(word.letters))
            emb = subword_embedding(word, j, k)
            assert subseed_check(emb) in ("good", "cluster-embedding")

    def test_prefix_reduced_good(self):
        word = w((1, 2, 1, -1, -2, -1))
        for k in range(1, 7):
            emb = subword_embedding(word, 1, k, reduced=True)
            assert subseed_check(emb) == "good"


class TestExtensions:
    def test_interleaved_extension(self):
        base = SignedWord((1, 1, 1, 1), A1)
        ext = letter_extension(base, K2, (1, 2, 1, 2, 1, 2, 1, 2))
        s_base = stable_dsd(base)
        s_ext = stable_dsd(ext)
        # removing the layer-2 vertices recovers the original entries
        for i in s_base.I:
            for k in s_base.I_uf:
                assert s_base.b(i, k) == s_ext.b(i, k)

    def test_bad_restriction(self):
        base = SignedWord((1, 1), A1)
        with pytest.raises(WordError):
            letter_extension(base, K2, (1, 2, 2))

    def test_bad_cartan(self):
        base = w((1, 2))
        with pytest.raises(WordError):
            letter_extension(base, K2, (1, 2))
