"""Signed words and the seeds built from triangulated trapezoids.

A signed word is a sequence of nonzero integers whose absolute values
are letters of a generalized Cartan matrix.  Each word determines a
string diagram whose layer intervals form the vertex set of a seed;
the exchange matrix can be computed either by summing local triangle
contributions or by a closed seven-case formula.  Both constructions
are provided and cross-checked.  The module also implements the word
operations (flips, braid moves, reflections, subwords, extensions)
together with their verified seed-level witnesses.
"""

from __future__ import annotations

import itertools
import json
import math
import re
from fractions import Fraction
from math import lcm

from .seed import Seed, SeedError, ClusterEmbedding, mutate_seed

INF = math.inf


class WordError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Cartan data

class CartanData:
    """A generalized Cartan matrix over a letter set J with symmetrizers D.

    Invariants: C[a][a] = 2, C[a][b] <= 0 for a != b, and
    D[b]*C[a][b] = D[a]*C[b][a].
    """

    __slots__ = ("J", "C", "D")

    def __init__(self, J, C, D):
        self.J = tuple(J)
        self.C = {a: dict(C[a]) for a in self.J}
        self.D = {a: int(D[a]) for a in self.J}
        for a in self.J:
            if self.C[a][a] != 2:
                raise WordError(f"C[{a}][{a}] must be 2")
            if self.D[a] <= 0:
                raise WordError("symmetrizers must be positive")
            for b in self.J:
                if a != b and self.C[a][b] > 0:
                    raise WordError(f"C[{a}][{b}] must be <= 0")
                if self.D[b] * self.C[a][b] != self.D[a] * self.C[b][a]:
                    raise WordError(f"symmetrizability fails at ({a},{b})")

    def c(self, a, b):
        return self.C[a][b]

    def sym(self, a):
        return self.D[a]

    def __eq__(self, other):
        return (isinstance(other, CartanData) and self.J == other.J
                and self.C == other.C and self.D == other.D)

    def is_extension_of(self, other):
        """Does self restrict to `other` on the smaller letter set?"""
        if not set(other.J) <= set(self.J):
            return False
        return all(self.C[a][b] == other.C[a][b]
                   for a in other.J for b in other.J)

    @classmethod
    def from_matrix(cls, rows, D=None, letters=None):
        n = len(rows)
        J = tuple(letters) if letters else tuple(range(1, n + 1))
        C = {a: {b: int(rows[i][j]) for j, b in enumerate(J)}
             for i, a in enumerate(J)}
        if D is None:
            D = _solve_symmetrizers(J, C)
        else:
            D = {a: D[i] for i, a in enumerate(J)} if not isinstance(D, dict) else D
        return cls(J, C, D)


def _solve_symmetrizers(J, C):
    """Minimal positive integer symmetrizers for a symmetrizable C."""
    vals = {}
    for root in J:
        if root in vals:
            continue
        vals[root] = Fraction(1)
        queue = [root]
        while queue:
            a = queue.pop()
            for b in J:
                if b in vals or C[a][b] == 0:
                    continue
                # D_b C_ab = D_a C_ba
                vals[b] = vals[a] * C[b][a] / C[a][b]
                if vals[b] <= 0:
                    raise WordError("matrix is not symmetrizable with positive D")
                queue.append(b)
    scale = lcm(*(v.denominator for v in vals.values()))
    out = {a: int(v * scale) for a, v in vals.items()}
    g = math.gcd(*out.values())
    return {a: v // g for a, v in out.items()}


def cartan_preset(name):
    """Named Cartan presets: A<n>, B2, G2, K<m> (Kronecker), or inline JSON."""
    name = name.strip()
    if name.startswith("{") or name.startswith("["):
        data = json.loads(name)
        if isinstance(data, list):
            return CartanData.from_matrix(data)
        return CartanData.from_matrix(data["C"], data.get("D"), data.get("J"))
    m = re.fullmatch(r"A(\d+)", name)
    if m:
        n = int(m.group(1))
        rows = [[2 if i == j else (-1 if abs(i - j) == 1 else 0)
                 for j in range(n)] for i in range(n)]
        return CartanData.from_matrix(rows, [1] * n)
    if name == "B2":
        return CartanData.from_matrix([[2, -1], [-2, 2]], [1, 2])
    if name == "G2":
        return CartanData.from_matrix([[2, -1], [-3, 2]], [1, 3])
    m = re.fullmatch(r"K(\d+)", name)
    if m:
        k = int(m.group(1))
        return CartanData.from_matrix([[2, -k], [-k, 2]], [1, 1])
    raise WordError(f"unknown Cartan preset: {name!r}")


# ---------------------------------------------------------------------------
# signed words and their indices

class SignedWord:
    """A sequence of nonzero letters +-a, a in cartan.J."""

    __slots__ = ("letters", "cartan")

    def __init__(self, letters, cartan):
        self.letters = tuple(int(x) for x in letters)
        self.cartan = cartan
        for x in self.letters:
            if x == 0 or abs(x) not in cartan.J:
                raise WordError(f"invalid letter {x}")

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return (isinstance(other, SignedWord) and self.letters == other.letters
                and self.cartan == other.cartan)

    def __repr__(self):
        return f"SignedWord{self.letters}"

    def replace(self, letters):
        return SignedWord(letters, self.cartan)


class WordIndices:
    """Successor/predecessor structure of a signed word.

    Positions are 1-based.  k[1] (succ) and k[-1] (pred) use +-inf
    sentinels.  Positions are identified with labels (letter, occurrence)
    via k <-> (|i_k|, o_minus(k)).
    """

    __slots__ = ("word", "l", "eps", "layer", "occ", "succ", "pred",
                 "o_minus", "o_plus", "kmin", "kmax")

    def __init__(self, word):
        letters = word.letters
        self.word = word
        self.l = len(letters)
        self.eps = {k: (1 if letters[k - 1] > 0 else -1)
                    for k in range(1, self.l + 1)}
        self.layer = {k: abs(letters[k - 1]) for k in range(1, self.l + 1)}
        self.occ = {a: [] for a in word.cartan.J}
        for k in range(1, self.l + 1):
            self.occ[self.layer[k]].append(k)
        self.succ, self.pred, self.o_minus, self.o_plus = {}, {}, {}, {}
        self.kmin, self.kmax = {}, {}
        for a, ks in self.occ.items():
            for t, k in enumerate(ks):
                self.succ[k] = ks[t + 1] if t + 1 < len(ks) else INF
                self.pred[k] = ks[t - 1] if t > 0 else -INF
                self.o_minus[k] = t
                self.o_plus[k] = len(ks) - 1 - t
                self.kmin[k] = ks[0]
                self.kmax[k] = ks[-1]

    def O(self, a):
        return len(self.occ[a])

    def O_range(self, j, k, a):
        """Number of occurrences of letter a within positions [j, k]."""
        return sum(1 for p in self.occ[a] if j <= p <= k)

    def shift(self, k, s):
        """k[s]: the s-th next occurrence on the layer of k (+-inf sentinels)."""
        ks = self.occ[self.layer[k]]
        t = self.o_minus[k] + s
        if t < 0:
            return -INF
        if t >= len(ks):
            return INF
        return ks[t]

    def label(self, k):
        return (self.layer[k], self.o_minus[k])

    def position(self, a, d):
        """Position of the label (a, d); d = -1 maps to the id -a."""
        if d == -1:
            return -a
        return self.occ[a][d]

    def ordered_labels(self):
        return [self.label(k) for k in range(1, self.l + 1)]

    def unfrozen(self):
        return tuple(k for k in range(1, self.l + 1) if self.succ[k] != INF)

    def dd_ids(self):
        """ddI as ids: -a for left-unbounded intervals, then positions 1..l."""
        return tuple(sorted(-a for a in self.word.cartan.J)) + tuple(range(1, self.l + 1))


def word_indices(ubi):
    if not isinstance(ubi, SignedWord):
        raise WordError("word_indices expects a SignedWord")
    return WordIndices(ubi)


# ---------------------------------------------------------------------------
# seed from the closed formula

def _dd_symmetrizers(cartan, layers):
    """Seed symmetrizers per layer: d_l = D_a, so that the dual values
    lcm(D)/D_a make the rectangle skew-symmetrizable row-wise."""
    return [cartan.sym(a) for a in layers]


def _dd_labels(idxs):
    cartan = idxs.word.cartan
    labels = {-a: f"{a}:-1" for a in cartan.J}
    for k in range(1, idxs.l + 1):
        a, d = idxs.label(k)
        labels[k] = f"{a}:{d}"
    return labels


def seed_from_formula(ubi):
    """The seed on ddI x I_uf computed by the closed per-entry formula."""
    idxs = word_indices(ubi)
    cartan = ubi.cartan
    ids = idxs.dd_ids()
    uf = idxs.unfrozen()
    layers = [abs(i) if i < 0 else idxs.layer[i] for i in ids]
    B = [[_formula_entry(idxs, j, k) for k in uf] for j in ids]
    return Seed(ids, uf, _dd_symmetrizers(cartan, layers), B,
                labels=_dd_labels(idxs))


def _formula_entry(idxs, j, k):
    """b_{jk} for j in ddI (id -a or position) and unfrozen position k."""
    eps, succ = idxs.eps, idxs.succ
    if j < 0:
        a = -j
        j1 = idxs.occ[a][0] if idxs.occ[a] else INF
        jpos = 0  # left of every position
        ej = None
    else:
        a = idxs.layer[j]
        j1 = succ[j]
        jpos = j
        ej = eps[j]
    b = idxs.layer[k]
    k1 = succ[k]
    if k == j1:
        return eps[k]
    if j > 0 and j == k1:
        return -ej
    if a == b:
        return 0
    C = idxs.word.cartan.c(a, b)
    if jpos < k:
        if j1 != INF and k < j1 < k1 and eps[j1] == eps[k]:
            return eps[k] * C
        if k1 < j1 and eps[k] == -eps[k1]:
            return eps[k] * C
    else:
        if j < k1 < j1 and eps[k1] == ej:
            return -ej * C
        if j1 != INF and j1 < k1 and ej == -eps[j1]:
            return -ej * C
    return 0


# ---------------------------------------------------------------------------
# seed from the triangulated trapezoid

class TrapezoidSeed:
    """Full trapezoid data: the rational ddB matrix plus dsd and rsd seeds.

    ddB may have half-integer entries between frozen vertices; the
    columns over unfrozen vertices are integral and form the dsd seed.
    rsd drops the left-unbounded frozen rows.
    """

    __slots__ = ("word", "dd_ids", "ddB", "dsd", "rsd")

    def __init__(self, word, dd_ids, ddB, dsd, rsd):
        self.word = word
        self.dd_ids = tuple(dd_ids)
        self.ddB = tuple(tuple(row) for row in ddB)
        self.dsd = dsd
        self.rsd = rsd

    def dd_entry(self, i, j):
        return self.ddB[self.dd_ids.index(i)][self.dd_ids.index(j)]

    def arrows(self):
        """{(i, j): weight} for the positive entries of ddB."""
        out = {}
        for p, i in enumerate(self.dd_ids):
            for q, j in enumerate(self.dd_ids):
                if self.ddB[p][q] > 0:
                    out[(i, j)] = self.ddB[p][q]
        return out


def seed_from_trapezoid(ubi):
    """Build the seed by summing local triangle contributions.

    Each position k contributes entries between the adjacent intervals
    of its layer and the flanking intervals of the other layers; the
    resulting skew-symmetric matrix is rescaled by -C_{ab} between
    distinct layers.
    """
    idxs = word_indices(ubi)
    cartan = ubi.cartan
    half = Fraction(1, 2)
    bg = {}

    def add(l1, l2, v):
        bg[(l1, l2)] = bg.get((l1, l2), Fraction(0)) + v

    for k in range(1, idxs.l + 1):
        a = idxs.layer[k]
        s = idxs.eps[k]
        lam = (a, idxs.o_minus[k] - 1)
        lap = (a, idxs.o_minus[k])
        add(lam, lap, s)
        add(lap, lam, -s)
        for b in cartan.J:
            if b == a:
                continue
            lb = (b, idxs.O_range(1, k - 1, b) - 1)
            add(lb, lam, s * half)
            add(lb, lap, -s * half)
            add(lap, lb, s * half)
            add(lam, lb, -s * half)

    ids = idxs.dd_ids()
    labels_of = {i: ((-i, -1) if i < 0 else idxs.label(i)) for i in ids}
    n = len(ids)
    ddB = [[Fraction(0)] * n for _ in range(n)]
    for p, i in enumerate(ids):
        la, da = labels_of[i]
        for q, j in enumerate(ids):
            lb, db = labels_of[j]
            v = bg.get((labels_of[i], labels_of[j]), Fraction(0))
            if la != lb:
                v *= -cartan.c(la, lb)
            ddB[p][q] = v

    uf = idxs.unfrozen()
    cols = [ids.index(k) for k in uf]
    rect = [[ddB[p][c] for c in cols] for p in range(n)]
    for row in rect:
        for v in row:
            if v.denominator != 1:
                raise WordError("non-integral entry in the unfrozen columns")
    layers = [labels_of[i][0] for i in ids]
    d = _dd_symmetrizers(cartan, layers)
    labels = _dd_labels(idxs)
    dsd = Seed(ids, uf, d, [[int(v) for v in row] for row in rect], labels=labels)
    pos = tuple(range(1, idxs.l + 1))
    rows = [ids.index(k) for k in pos]
    rsd = Seed(pos, uf, [d[r] for r in rows],
               [[int(v) for v in rect[r]] for r in rows],
               labels={k: labels[k] for k in pos})
    if not rsd.is_full_rank():
        raise WordError("reduced seed is unexpectedly rank-deficient")
    return TrapezoidSeed(ubi, ids, ddB, dsd, rsd)


def stable_dsd(ubi):
    """dsd with vertices renamed to their (letter, occurrence) labels.

    Under these names, word operations that preserve the label structure
    (flips with distinct letters) act as the identity on the seed.
    """
    s = seed_from_formula(ubi)
    idxs = word_indices(ubi)
    ren = {i: ((-i, -1) if i < 0 else idxs.label(i)) for i in s.I}
    return _reorder(_relabel(s, ren), sorted(ren.values()))


def _relabel(seed, ren):
    return Seed([ren[i] for i in seed.I], [ren[k] for k in seed.I_uf],
                seed.d, seed.B, seed.Lam,
                {ren[i]: v for i, v in seed.labels.items()})


def _reorder(seed, order, uf_order=None):
    """The same seed with vertices listed in the given order."""
    if uf_order is None:
        uf_order = [k for k in order if k in set(seed.I_uf)]
    if set(order) != set(seed.I) or set(uf_order) != set(seed.I_uf):
        raise SeedError("reorder must preserve the vertex sets")
    B = [[seed.b(i, k) for k in uf_order] for i in order]
    Lam = None
    if seed.Lam is not None:
        Lam = [[seed.Lam[seed.idx(i)][seed.idx(j)] for j in order] for i in order]
    return Seed(order, uf_order, [seed.d_of(i) for i in order], B, Lam, seed.labels)


# ---------------------------------------------------------------------------
# flips

def flip(ubi, k):
    """Swap the sign pattern (eps*a, -eps*b) at positions k, k+1.

    Returns (new word, mu-word witness): mutation at the label of k when
    the letters agree, the empty word otherwise.  The witness is verified
    on the label-named seeds before returning.
    """
    letters = ubi.letters
    if not 1 <= k < len(letters):
        raise WordError(f"position {k} out of range")
    x, y = letters[k - 1], letters[k]
    if (x > 0) == (y > 0):
        raise WordError(f"no sign change at position {k}")
    out = letters[:k - 1] + (y, x) + letters[k + 1:]
    ubi2 = ubi.replace(out)
    s1 = stable_dsd(ubi)
    s2 = stable_dsd(ubi2)
    if abs(x) == abs(y):
        label = word_indices(ubi).label(k)
        if mutate_seed(s1, label) != s2:
            raise WordError(f"flip witness failed verification at {k}")
        return ubi2, (label,)
    if s1 != s2:
        raise WordError(f"identity flip witness failed verification at {k}")
    return ubi2, ()


def sort_signs(ubi):
    """Flip until all negative letters precede all positive ones.

    Returns (sorted word, composite mu-word on label-named vertices).
    """
    word = ubi
    witness = []
    changed = True
    while changed:
        changed = False
        for k in range(1, len(word)):
            if word.letters[k - 1] > 0 and word.letters[k] < 0:
                word, w = flip(word, k)
                witness.extend(w)
                changed = True
                break
    return word, tuple(witness)


# ---------------------------------------------------------------------------
# braid moves

def _alternating(a, b, n):
    return tuple(a if t % 2 == 0 else b for t in range(n))


_BRAID_LENGTH = {0: 2, 1: 3, 2: 4, 3: 6}


def braid_move(ubi, span, eta2):
    """Replace the span by the other side of a rank-2 braid relation.

    span = (j, k), 1-based inclusive; the letters there must form
    eps * eta with eta one alternating side of the braid relation for
    its two letters, and eta2 the other side.  Returns
    (new word, (sigma, mu-word)) where the witness is found by bounded
    search and verified by exact seed equality after applying sigma.
    """
    j, k = span
    letters = ubi.letters
    if not (1 <= j <= k <= len(letters)):
        raise WordError("span out of range")
    seg = letters[j - 1:k]
    signs = {1 if x > 0 else -1 for x in seg}
    if len(signs) != 1:
        raise WordError("span must carry letters of one sign")
    eps = signs.pop()
    eta = tuple(abs(x) for x in seg)
    eta2 = tuple(eta2)
    supp = sorted(set(eta) | set(eta2))
    if len(supp) != 2:
        raise WordError("braid moves need exactly two letters")
    a, b = supp
    m = ubi.cartan.c(a, b) * ubi.cartan.c(b, a)
    if m not in _BRAID_LENGTH or len(eta) != _BRAID_LENGTH[m]:
        raise WordError("braid relation not applicable to this span")
    if {eta, eta2} != {_alternating(a, b, len(eta)), _alternating(b, a, len(eta))}:
        raise WordError("the two sides do not form a braid relation")
    out = letters[:j - 1] + tuple(eps * x for x in eta2) + letters[k:]
    ubi2 = ubi.replace(out)
    witness = _braid_witness(ubi, ubi2, j, k, m + 2)
    if witness is None:
        raise WordError("braid witness search failed (unsupported rank)")
    return ubi2, witness


def _braid_witness(ubi, ubi2, j, k, maxlen):
    """Search mu-words at vertices r in [j,k] with r[1] <= k, plus a
    permutation of the span, carrying dsd(ubi) to dsd(ubi2)."""
    idxs = word_indices(ubi)
    source = seed_from_formula(ubi)
    target = seed_from_formula(ubi2)
    allowed = [r for r in range(j, k + 1)
               if idxs.succ[r] != INF and idxs.succ[r] <= k]
    span = list(range(j, k + 1))
    uf = set(source.I_uf)
    tgt_uf = set(target.I_uf)

    def try_perms(seed):
        for perm in itertools.permutations(span):
            sigma = dict(zip(span, perm))
            if any((p in uf) != (sigma[p] in tgt_uf) for p in span):
                continue
            ren = {i: sigma.get(i, i) for i in seed.I}
            cand = _reorder(_relabel(seed, ren), list(target.I),
                            list(target.I_uf))
            if cand == target:
                return {p: q for p, q in sigma.items() if p != q}
        return None

    frontier = [((), source)]
    for _ in range(maxlen + 1):
        nxt = []
        for word, seed in frontier:
            sigma = try_perms(seed)
            if sigma is not None:
                return sigma, word
            for r in allowed:
                if word and word[-1] == r:
                    continue
                nxt.append((word + (r,), mutate_seed(seed, r)))
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# reflections

def left_reflection(ubi):
    """Flip the sign of the first letter; the reduced seed is unchanged."""
    if not ubi.letters:
        raise WordError("cannot reflect the empty word")
    return ubi.replace((-ubi.letters[0],) + ubi.letters[1:])


def right_reflection(ubi):
    """Flip the sign of the last letter."""
    if not ubi.letters:
        raise WordError("cannot reflect the empty word")
    return ubi.replace(ubi.letters[:-1] + (-ubi.letters[-1],))


# ---------------------------------------------------------------------------
# subwords and extensions

def subword_embedding(ubi, j, k, reduced=False):
    """Embedding of the seed of the subword on positions [j, k].

    Positions map by s -> s + j - 1; the left-unbounded interval of
    layer a maps to the interval just left of position j on that layer.
    With reduced=True, the embedding is between the reduced seeds
    (positions only).
    """
    if not (1 <= j <= k <= len(ubi.letters) or (j == 1 and k == 0)):
        raise WordError("invalid subword range")
    sub = ubi.replace(ubi.letters[j - 1:k])
    idxs = word_indices(ubi)
    iota = {s: s + j - 1 for s in range(1, k - j + 2)}
    if reduced:
        return ClusterEmbedding(seed_from_trapezoid(sub).rsd,
                                seed_from_trapezoid(ubi).rsd, iota)
    for a in ubi.cartan.J:
        before = idxs.O_range(1, j - 1, a)
        iota[-a] = -a if before == 0 else idxs.occ[a][before - 1]
    return ClusterEmbedding(seed_from_formula(sub), seed_from_formula(ubi), iota)


def letter_extension(ubi, cartan_ext, extended_letters):
    """A word over an extended Cartan matrix that restricts to ubi.

    The extended letters must recover ubi.letters once every letter
    outside the original alphabet is removed.
    """
    if not cartan_ext.is_extension_of(ubi.cartan):
        raise WordError("the Cartan matrix does not extend the original one")
    ext = SignedWord(extended_letters, cartan_ext)
    old = set(ubi.cartan.J)
    restricted = tuple(x for x in ext.letters if abs(x) in old)
    if restricted != ubi.letters:
        raise WordError("removing the new letters does not recover the word")
    return ext
