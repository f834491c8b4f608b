"""Seed data model and seed-level operations.

A seed is an ordered vertex list I with an unfrozen subset I_uf,
positive symmetrizers d, the extended exchange matrix B (an I x I_uf
integer rectangle) and optionally a skew quantization matrix Lambda
(I x I).  Compatibility is the condition B^T Lambda = diag(delta_k)
with delta_k > 0 on the unfrozen rows.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import lcm

from .qtorus import solve_exact


class SeedError(ValueError):
    pass


class Seed:
    __slots__ = ("I", "I_uf", "d", "B", "Lam", "labels")

    def __init__(self, I, I_uf, d, B, Lam=None, labels=None):
        self.I = tuple(I)
        self.I_uf = tuple(I_uf)
        if len(set(self.I)) != len(self.I):
            raise SeedError("duplicate vertex ids")
        if not set(self.I_uf) <= set(self.I):
            raise SeedError("I_uf must be a subset of I")
        self.d = tuple(int(x) for x in d)
        if len(self.d) != len(self.I) or any(x <= 0 for x in self.d):
            raise SeedError("symmetrizers must be positive, one per vertex")
        self.B = tuple(tuple(int(v) for v in row) for row in B)
        if len(self.B) != len(self.I) or any(len(r) != len(self.I_uf) for r in self.B):
            raise SeedError("B must be an I x I_uf rectangle")
        self.Lam = None
        if Lam is not None:
            self.Lam = tuple(tuple(int(v) for v in row) for row in Lam)
            n = len(self.I)
            if len(self.Lam) != n or any(len(r) != n for r in self.Lam):
                raise SeedError("Lambda must be I x I")
            for i in range(n):
                for j in range(n):
                    if self.Lam[i][j] != -self.Lam[j][i]:
                        raise SeedError("Lambda must be skew-symmetric")
        self.labels = dict(labels) if labels else {}
        self._check_skew_symmetrizable()

    # -- basic helpers ----------------------------------------------------

    @property
    def n(self):
        return len(self.I)

    @property
    def I_f(self):
        uf = set(self.I_uf)
        return tuple(i for i in self.I if i not in uf)

    def idx(self, i):
        return self.I.index(i)

    def uf_idx(self, k):
        return self.I_uf.index(k)

    def b(self, i, k):
        return self.B[self.idx(i)][self.uf_idx(k)]

    def d_of(self, i):
        return self.d[self.idx(i)]

    def dee_star(self):
        """Langlands-dual symmetrizers d_i^v = lcm(d)/d_i, aligned with I."""
        m = lcm(*self.d)
        return tuple(m // x for x in self.d)

    def _check_skew_symmetrizable(self):
        ds = self.dee_star()
        for i in self.I_uf:
            for k in self.I_uf:
                if ds[self.idx(i)] * self.b(i, k) != -ds[self.idx(k)] * self.b(k, i):
                    raise SeedError(
                        f"not skew-symmetrizable at ({i},{k}): "
                        f"{ds[self.idx(i)]}*{self.b(i, k)} != -{ds[self.idx(k)]}*{self.b(k, i)}")

    def is_full_rank(self):
        cols = list(zip(*self.B)) if self.B else []
        return _rank([list(c) for c in cols]) == len(self.I_uf)

    def __eq__(self, other):
        return (isinstance(other, Seed) and self.I == other.I
                and self.I_uf == other.I_uf and self.d == other.d
                and self.B == other.B and self.Lam == other.Lam)

    def __hash__(self):
        return hash((self.I, self.I_uf, self.d, self.B, self.Lam))

    def same_matrices(self, other):
        """Equality ignoring labels (alias of ==; labels never compared)."""
        return self == other

    def __repr__(self):
        return f"Seed(I={self.I}, I_uf={self.I_uf})"

    # -- serialization ----------------------------------------------------

    def to_json(self):
        return {
            "I": list(self.I),
            "I_uf": list(self.I_uf),
            "d": list(self.d),
            "B": [list(r) for r in self.B],
            "Lambda": [list(r) for r in self.Lam] if self.Lam is not None else None,
            "labels": {str(k): v for k, v in self.labels.items()},
        }

    @classmethod
    def from_json(cls, data):
        ids = [_id_from_json(i) for i in data["I"]]
        uf = [_id_from_json(i) for i in data["I_uf"]]
        labels = {_id_from_json(k): v for k, v in (data.get("labels") or {}).items()}
        return cls(ids, uf, data["d"], data["B"], data.get("Lambda"), labels)

    def dumps(self):
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def _id_from_json(v):
    if isinstance(v, str):
        try:
            return int(v)
        except ValueError:
            return v
    return v


def _rank(rows):
    rows = [[Fraction(v) for v in r] for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [v / pv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [v - f * w for v, w in zip(rows[i], rows[r])]
        r += 1
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# compatibility

def check_compatible(seed):
    """Return {k: delta_k} with delta_k > 0, or raise SeedError.

    The condition is (B^T Lambda)_{k,j} = delta_k when j = k and 0
    otherwise, for unfrozen k.
    """
    if seed.Lam is None:
        raise SeedError("seed carries no quantization matrix")
    deltas = {}
    for k in seed.I_uf:
        kk = seed.uf_idx(k)
        for j in seed.I:
            jj = seed.idx(j)
            val = sum(seed.B[i][kk] * seed.Lam[i][jj] for i in range(seed.n))
            if j == k:
                if val <= 0:
                    raise SeedError(f"compatibility fails at ({k},{k}): delta = {val}")
                deltas[k] = val
            elif val != 0:
                raise SeedError(f"compatibility fails at ({k},{j}): {val} != 0")
    return deltas


# ---------------------------------------------------------------------------
# mutation

def _e_matrix(seed, k, eps):
    n = seed.n
    kk = seed.idx(k)
    kuf = seed.uf_idx(k)
    E = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    E[kk][kk] = -1
    for i in range(n):
        if i != kk:
            E[i][kk] = max(0, -eps * seed.B[i][kuf])
    return E

def _f_matrix(seed, k, eps):
    m = len(seed.I_uf)
    kuf = seed.uf_idx(k)
    kk = seed.idx(k)
    F = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    F[kuf][kuf] = -1
    for j in range(m):
        if j != kuf:
            F[kuf][j] = max(0, eps * seed.B[kk][j])
    return F


def _matmul(A, B):
    return [[sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def _transpose(A):
    return [list(r) for r in zip(*A)]


def mutate_seed(seed, k, eps=1):
    """Mutation at the unfrozen vertex k: B' = E B F, Lambda' = E^T Lambda E."""
    if k not in seed.I_uf:
        raise SeedError(f"cannot mutate at non-unfrozen vertex {k}")
    if eps not in (1, -1):
        raise SeedError("eps must be +1 or -1")
    E = _e_matrix(seed, k, eps)
    F = _f_matrix(seed, k, eps)
    B2 = _matmul(_matmul(E, [list(r) for r in seed.B]), F)
    Lam2 = None
    if seed.Lam is not None:
        Lam2 = _matmul(_matmul(_transpose(E), [list(r) for r in seed.Lam]), E)
    return Seed(seed.I, seed.I_uf, seed.d, B2, Lam2, seed.labels)


def mutate_word(seed, word, eps=1):
    for k in word:
        seed = mutate_seed(seed, k, eps)
    return seed


# ---------------------------------------------------------------------------
# opposite / permute / freeze / sub-seeds

def opposite(seed):
    B2 = [[-v for v in r] for r in seed.B]
    Lam2 = [[-v for v in r] for r in seed.Lam] if seed.Lam is not None else None
    return Seed(seed.I, seed.I_uf, seed.d, B2, Lam2, seed.labels)


def permute(seed, sigma):
    """Relabel vertices by the map sigma (dict id -> id, defaults identity).

    sigma must send unfrozen to unfrozen and frozen to frozen.
    """
    smap = {i: sigma.get(i, i) for i in seed.I}
    if set(smap.values()) != set(seed.I):
        raise SeedError("sigma is not a permutation of I")
    uf = set(seed.I_uf)
    for i in seed.I:
        if (i in uf) != (smap[i] in uf):
            raise SeedError("sigma mixes frozen and unfrozen vertices")
    n = seed.n
    B2 = [[0] * len(seed.I_uf) for _ in range(n)]
    d2 = [0] * n
    for i in seed.I:
        d2[seed.idx(smap[i])] = seed.d_of(i)
        for k in seed.I_uf:
            B2[seed.idx(smap[i])][seed.uf_idx(smap[k])] = seed.b(i, k)
    Lam2 = None
    if seed.Lam is not None:
        Lam2 = [[0] * n for _ in range(n)]
        for i in seed.I:
            for j in seed.I:
                Lam2[seed.idx(smap[i])][seed.idx(smap[j])] = seed.Lam[seed.idx(i)][seed.idx(j)]
    labels2 = {smap[i]: v for i, v in seed.labels.items()}
    return Seed(seed.I, seed.I_uf, d2, B2, Lam2, labels2)


def freeze_seed(seed, F):
    """Freeze the unfrozen vertices F: drop their columns from B."""
    F = set(F)
    if not F <= set(seed.I_uf):
        raise SeedError("can only freeze unfrozen vertices")
    keep = [k for k in seed.I_uf if k not in F]
    cols = [seed.uf_idx(k) for k in keep]
    B2 = [[row[c] for c in cols] for row in seed.B]
    return Seed(seed.I, keep, seed.d, B2, seed.Lam, seed.labels)


def remove_frozen(seed, S):
    """Remove frozen vertices S entirely (rows of B, rows/cols of Lambda)."""
    S = set(S)
    if S & set(seed.I_uf):
        raise SeedError("can only remove frozen vertices")
    keep = [i for i in seed.I if i not in S]
    rows = [seed.idx(i) for i in keep]
    B2 = [seed.B[r] for r in rows]
    d2 = [seed.d[r] for r in rows]
    Lam2 = None
    if seed.Lam is not None:
        Lam2 = [[seed.Lam[r][c] for c in rows] for r in rows]
    labels2 = {i: v for i, v in seed.labels.items() if i in keep}
    return Seed(keep, seed.I_uf, d2, B2, Lam2, labels2)


def is_non_essential(seed, j):
    """A frozen vertex is non-essential if its B-row vanishes."""
    if j in seed.I_uf:
        raise SeedError(f"{j} is not frozen")
    return all(v == 0 for v in seed.B[seed.idx(j)])


class ClusterEmbedding:
    """An injective vertex map iota from a smaller seed into a bigger one."""

    def __init__(self, source, target, iota):
        self.source = source
        self.target = target
        self.iota = dict(iota)
        if len(set(self.iota.values())) != len(self.iota):
            raise SeedError("iota must be injective")
        if set(self.iota) != set(source.I):
            raise SeedError("iota must be defined on all source vertices")
        if not set(self.iota.values()) <= set(target.I):
            raise SeedError("iota must land in the target vertex set")


def subseed_check(emb):
    """Classify an embedding: 'cluster-embedding', 'good', or 'neither'."""
    s, t, iota = emb.source, emb.target, emb.iota
    for i in s.I_uf:
        if iota[i] not in t.I_uf:
            return "neither"
    for i in s.I:
        if s.d_of(i) != t.d_of(iota[i]):
            return "neither"
        for k in s.I_uf:
            if s.b(i, k) != t.b(iota[i], iota[k]):
                return "neither"
    if s.Lam is not None and t.Lam is not None:
        for i in s.I:
            for j in s.I:
                if s.Lam[s.idx(i)][s.idx(j)] != t.Lam[t.idx(iota[i])][t.idx(iota[j])]:
                    return "neither"
    image = set(iota.values())
    for i in t.I:
        if i in image:
            continue
        for k in s.I_uf:
            if t.b(i, iota[k]) != 0:
                return "cluster-embedding"
    return "good"


# ---------------------------------------------------------------------------
# principal coefficients

def principal_vertex(k):
    return f"{k}'"


def principal_seed(seed):
    """The principal-coefficient companion t^prin and its variation map.

    Vertices are I_uf plus one new frozen copy k' per unfrozen k; the
    unfrozen block of B is copied and the frozen row k' is the unit row
    delta_{kj}.  Returns (Seed, var) where var maps exponent vectors of
    t^prin into t: var(f_k) = f_k, var(f_{k'}) = sum_j b_{jk} f_j over
    frozen j, and Lambda^prin(m, m') = Lambda(var m, var m').
    """
    if seed.Lam is None:
        raise SeedError("principal seed needs a quantized input seed")
    uf = list(seed.I_uf)
    ids = uf + [principal_vertex(k) for k in uf]
    nuf = len(uf)
    B2 = [[seed.b(i, k) for k in uf] for i in uf]
    for r, _ in enumerate(uf):
        B2.append([1 if c == r else 0 for c in range(nuf)])
    d2 = [seed.d_of(i) for i in uf] * 2

    def var(m):
        """Exponent vector over I^prin -> exponent vector over I."""
        out = [0] * seed.n
        for p, k in enumerate(uf):
            out[seed.idx(k)] += m[p]
        for p, k in enumerate(uf):
            coef = m[nuf + p]
            if coef:
                kk = seed.uf_idx(k)
                for j in seed.I_f:
                    out[seed.idx(j)] += coef * seed.B[seed.idx(j)][kk]
        return tuple(out)

    n2 = len(ids)
    Lam2 = [[0] * n2 for _ in range(n2)]
    units = [tuple(1 if t == s else 0 for t in range(n2)) for s in range(n2)]
    for a in range(n2):
        va = var(units[a])
        for b in range(n2):
            vb = var(units[b])
            val = 0
            for i in range(seed.n):
                if va[i]:
                    val += va[i] * sum(seed.Lam[i][j] * vb[j]
                                       for j in range(seed.n) if vb[j])
            Lam2[a][b] = val
    out = Seed(ids, uf, d2, B2, Lam2)
    return out, var


# ---------------------------------------------------------------------------
# quantization solver

def quantize(seed, scale=None):
    """Attach a compatible Lambda to a full-rank classical seed.

    Solves B^T Lambda = diag(delta) with delta_k = c * d_k^v, where c is
    the least positive integer making Lambda integral (or `scale` if given).
    """
    n = seed.n
    m = len(seed.I_uf)
    ds = seed.dee_star()
    nunk = n * (n - 1) // 2
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pidx = {p: t for t, p in enumerate(pairs)}

    def lam_coeff(i, j):
        # returns (unknown index, sign) for Lambda_{ij}
        if i == j:
            return None, 0
        if i < j:
            return pidx[(i, j)], 1
        return pidx[(j, i)], -1

    rows, rhs = [], []
    for k in seed.I_uf:
        kk = seed.uf_idx(k)
        kabs = seed.idx(k)
        for j in range(n):
            row = [Fraction(0)] * nunk
            for i in range(n):
                b = seed.B[i][kk]
                if b == 0:
                    continue
                t, sgn = lam_coeff(i, j)
                if t is not None:
                    row[t] += b * sgn
            rows.append(row)
            rhs.append(Fraction(ds[kabs]) if j == kabs else Fraction(0))
    sol = solve_exact(rows, rhs)
    if sol is None:
        raise SeedError("no compatible quantization exists (is B of full rank?)")
    if scale is None:
        scale = lcm(*(v.denominator for v in sol)) if sol else 1
    Lam = [[0] * n for _ in range(n)]
    for (i, j), t in pidx.items():
        v = sol[t] * scale
        if v.denominator != 1:
            raise SeedError("requested scale does not make Lambda integral")
        Lam[i][j] = int(v)
        Lam[j][i] = -int(v)
    out = Seed(seed.I, seed.I_uf, seed.d, seed.B, Lam, seed.labels)
    check_compatible(out)
    return out


# ---------------------------------------------------------------------------
# DOT export

def to_dot(seed, extra_entries=None, name="seed"):
    """Graphviz export: unfrozen ellipse, frozen box, arrows i->j for
    b_{ij} > 0.  extra_entries: optional {(i,j): Fraction} display-only
    entries between frozen vertices (dashed when half-integral).
    """
    ds = seed.dee_star()
    uf = set(seed.I_uf)
    lines = [f"digraph {name} {{"]
    for i in seed.I:
        shape = "ellipse" if i in uf else "box"
        label = seed.labels.get(i, str(i))
        lines.append(f'  "{i}" [shape={shape}, label="{label}"];')
    def arrow(src, dst, w):
        style = ", style=dashed" if w.denominator != 1 else ""
        wl = f"{w.numerator}/{w.denominator}" if w.denominator != 1 else str(w.numerator)
        lines.append(f'  "{src}" -> "{dst}" [label="{wl}"{style}];')

    for k in seed.I_uf:
        for i in seed.I:
            if i == k:
                continue
            bik = seed.b(i, k)
            if bik > 0:
                arrow(i, k, Fraction(bik))
            elif bik < 0 and i not in uf:
                # b_{ki} is not stored; recover it by skew-symmetrizability
                arrow(k, i, Fraction(ds[seed.idx(i)] * (-bik), ds[seed.idx(k)]))
    for (i, j), w in (extra_entries or {}).items():
        w = Fraction(w)
        if w > 0:
            style = ', style=dashed' if w.denominator != 1 else ""
            wl = f"{w.numerator}/{w.denominator}" if w.denominator != 1 else str(w.numerator)
            lines.append(f'  "{i}" -> "{j}" [label="{wl}"{style}];')
    lines.append("}")
    return "\n".join(lines)
