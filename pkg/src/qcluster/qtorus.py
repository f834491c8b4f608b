"""Exact arithmetic in the quantum torus.

Elements are sparse Laurent polynomials in variables x_1..x_n whose
coefficients live in Z[q^(±1/2s)].  Coefficient exponents are stored as
exact `Fraction`s, exponent vectors as integer tuples.  The twisted
product is x^g * x^h = q^(lambda(g,h)/2) x^(g+h) for a skew form lambda.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
import re


class DimensionError(ValueError):
    pass


class ExactDivisionError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# coefficients: Laurent polynomials in q^(1/2s)

class QCoeff:
    """A coefficient: finite map {exponent of q (Fraction) -> nonzero int}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {Fraction(a): int(c) for a, c in terms.items() if c != 0}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def integer(cls, c):
        return cls({Fraction(0): c})

    @classmethod
    def qpow(cls, alpha, c=1):
        return cls({Fraction(alpha): c})

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {Fraction(0): 1}

    def is_unit_qpow(self):
        """Return the exponent alpha if self = q^alpha, else None."""
        if len(self.terms) == 1:
            (a, c), = self.terms.items()
            if c == 1:
                return a
        return None

    def __add__(self, other):
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return QCoeff(out)

    def __neg__(self):
        return QCoeff({a: -c for a, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                key = a + b
                out[key] = out.get(key, 0) + c * d
        return QCoeff(out)

    def __eq__(self, other):
        return isinstance(other, QCoeff) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def bar(self):
        """q -> q^(-1)."""
        return QCoeff({-a: c for a, c in self.terms.items()})

    def subs_q_scale(self, rho):
        """q^(1/2) -> q^(rho/2), i.e. every exponent scaled by rho."""
        rho = Fraction(rho)
        return QCoeff({a * rho: c for a, c in self.terms.items()})

    def divide(self, other):
        """Exact division self / other in Z[q^(±1/m)], or None."""
        if other.is_zero():
            raise ZeroDivisionError("division of QCoeff by zero")
        if self.is_zero():
            return QCoeff.zero()
        den = lcm(*(a.denominator for a in list(self.terms) + list(other.terms)))
        num = {a * den: c for a, c in self.terms.items()}
        div = {a * den: c for a, c in other.terms.items()}
        # now integer exponents; do descending long division
        quot = {}
        dmax = max(div)
        dc = div[dmax]
        while num:
            nmax = max(num)
            c, r = divmod(num[nmax], dc)
            if r != 0:
                return None
            e = nmax - dmax
            quot[e] = quot.get(e, 0) + c
            for a, d in div.items():
                key = a + e
                num[key] = num.get(key, 0) - d * c
                if num[key] == 0:
                    del num[key]
        return QCoeff({Fraction(a, den): c for a, c in quot.items()})

    def q_exponents_in(self, allowed):
        """True if every exponent alpha satisfies allowed(alpha)."""
        return all(allowed(a) for a in self.terms)

    def at_q1(self):
        """Classical specialization q = 1."""
        return sum(self.terms.values())

    def __repr__(self):
        return f"QCoeff({dict(sorted(self.terms.items()))})"


QONE = QCoeff.integer(1)


# ---------------------------------------------------------------------------
# exponent-vector helpers (plain int tuples)

def vec_add(g, h):
    return tuple(a + b for a, b in zip(g, h))


def vec_sub(g, h):
    return tuple(a - b for a, b in zip(g, h))


def vec_neg(g):
    return tuple(-a for a in g)


def vec_scale(c, g):
    return tuple(c * a for a in g)


def unit_vec(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def skew_eval(lam, g, h):
    """lambda(g, h) = g^T lam h for a skew integer matrix lam."""
    total = 0
    for i, gi in enumerate(g):
        if gi:
            row = lam[i]
            total += gi * sum(row[j] * hj for j, hj in enumerate(h) if hj)
    return total


# ---------------------------------------------------------------------------
# exact rational linear solves (small dense systems)

def solve_exact(A, b):
    """One exact rational solution x of A x = b, or None if inconsistent.

    A: list of rows (any rationals), b: list.  Returns a list of Fractions
    (free variables set to 0).
    """
    m = len(A)
    n = len(A[0]) if m else 0
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((r for r in range(row, m) if M[r][col] != 0), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        pv = M[row][col]
        M[row] = [v / pv for v in M[row]]
        for r in range(m):
            if r != row and M[r][col] != 0:
                f = M[r][col]
                M[r] = [v - f * w for v, w in zip(M[r], M[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if M[r][n] != 0:
            return None
    x = [Fraction(0)] * n
    for r, col in enumerate(pivots):
        x[col] = M[r][n]
    return x


def solve_integer_nonneg(A, b):
    """Unique solution of A x = b checked integral and >= 0, or None.

    Requires A to have full column rank (the solution, if any, is unique).
    """
    x = solve_exact(A, b)
    if x is None:
        return None
    # verify (solve_exact zero-fills free columns; with full column rank
    # there are none, but re-check the product to be safe)
    for i, row in enumerate(A):
        if sum(Fraction(row[j]) * x[j] for j in range(len(x))) != Fraction(b[i]):
            return None
    out = []
    for v in x:
        if v.denominator != 1 or v < 0:
            return None
        out.append(int(v))
    return out


# ---------------------------------------------------------------------------
# Laurent elements

class QLaurent:
    """Sparse quantum-torus element: {exponent tuple -> QCoeff}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for g, c in terms.items():
                if len(g) != nvars:
                    raise DimensionError("exponent length mismatch")
                if not c.is_zero():
                    self.terms[tuple(g)] = c

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def monomial(cls, nvars, g, coeff=None):
        return cls(nvars, {tuple(g): coeff if coeff is not None else QONE})

    @classmethod
    def one(cls, nvars):
        return cls.monomial(nvars, (0,) * nvars)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, QCoeff.zero()) + c
        return QLaurent(self.nvars, out)

    def __neg__(self):
        return QLaurent(self.nvars, {g: -c for g, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, QLaurent) and self.nvars == other.nvars
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def scale(self, c):
        return QLaurent(self.nvars, {g: c * d for g, d in self.terms.items()})

    def _check(self, other):
        if self.nvars != other.nvars:
            raise DimensionError("mixing quantum tori of different rank")

    def lex_lead(self):
        """(g, coeff) of the lexicographically largest exponent."""
        g = max(self.terms)
        return g, self.terms[g]

    def num_terms(self):
        return len(self.terms)

    def num_atoms(self):
        """Total number of q-monomials across all coefficients; the honest
        size measure for estimating multiplication work."""
        return sum(len(c.terms) for c in self.terms.values())

    def __repr__(self):
        return f"QLaurent({to_text(self)})"


def qmul(a, b, lam):
    """Twisted product: bilinear extension of x^g*x^h = q^(lam(g,h)/2) x^(g+h)."""
    a._check(b)
    if lam is not None and lam and len(lam) != a.nvars:
        raise DimensionError("skew form size mismatch")
    out = {}
    for g, c in a.terms.items():
        for h, d in b.terms.items():
            key = vec_add(g, h)
            cd = c * d
            if lam is not None:
                val = skew_eval(lam, g, h)
                if val:
                    cd = cd * QCoeff.qpow(Fraction(val, 2))
            prev = out.get(key)
            out[key] = cd if prev is None else prev + cd
    return QLaurent(a.nvars, out)


def qmul_many(factors, lam):
    n = factors[0].nvars
    out = QLaurent.one(n)
    for f in factors:
        out = qmul(out, f, lam)
    return out


def cmul(a, b):
    """Commutative product (lambda = 0)."""
    return qmul(a, b, None)


def bar(z):
    """Bar involution: q -> q^(-1) fixing the monomials x^g."""
    return QLaurent(z.nvars, {g: c.bar() for g, c in z.terms.items()})


def qpow_times(z, alpha):
    return z.scale(QCoeff.qpow(alpha))


def left_divide(d, z, lam):
    """The unique u with qmul(d, u, lam) = z, exact or ExactDivisionError."""
    d._check(z)
    if d.is_zero():
        raise ZeroDivisionError("left division by zero")
    if z.is_zero():
        return z
    # Newton polytopes add under the twisted product, so any quotient
    # exponent lies in the coordinatewise box min(z)-max(d) .. max(z)-min(d);
    # a candidate outside it certifies inexact division (and bounds the loop).
    n = z.nvars
    lo = [min(g[i] for g in z.terms) - max(g[i] for g in d.terms) for i in range(n)]
    hi = [max(g[i] for g in z.terms) - min(g[i] for g in d.terms) for i in range(n)]
    glead, clead = d.lex_lead()
    u = {}
    r = z
    while not r.is_zero():
        t_exp, t_coeff = r.lex_lead()
        ue = vec_sub(t_exp, glead)
        if any(e < l or e > h for e, l, h in zip(ue, lo, hi)):
            raise ExactDivisionError("inexact division in quantum torus")
        factor = clead
        if lam is not None:
            val = skew_eval(lam, glead, ue)
            if val:
                factor = factor * QCoeff.qpow(Fraction(val, 2))
        uc = t_coeff.divide(factor)
        if uc is None:
            raise ExactDivisionError("inexact division in quantum torus")
        u[ue] = uc
        r = r - qmul(d, QLaurent.monomial(z.nvars, ue, uc), lam)
    return QLaurent(z.nvars, u)


# ---------------------------------------------------------------------------
# dominance order, degrees, pointedness

def dominance_leq(h, g, Bt):
    """Is h = g + Bt n for some n in N^(I_uf)?  Returns (bool, n or None).

    Bt is the |I| x |I_uf| extended exchange matrix (full column rank).
    """
    if len(h) != len(g) or len(h) != len(Bt):
        raise DimensionError("exponent/matrix size mismatch")
    diff = vec_sub(h, g)
    n = solve_integer_nonneg(Bt, list(diff))
    return (n is not None), (tuple(n) if n is not None else None)


def _drop_functional(Bt):
    """A rational functional c with c^T Bt = (-1,...,-1).

    Strictly decreasing along every nonzero dominance step; exists because
    Bt has full column rank.
    """
    ncols = len(Bt[0]) if Bt else 0
    # solve Bt^T c = -1
    At = [[Bt[i][k] for i in range(len(Bt))] for k in range(ncols)]
    c = solve_exact(At, [-1] * ncols)
    if c is None:
        raise ValueError("exchange matrix is not of full column rank")
    return c


def _phi_values(z, c):
    return {g: sum(ci * gi for ci, gi in zip(c, g)) for g in z.terms}


def degree(z, Bt):
    """The unique dominance-maximal exponent of z, or None if not unique.

    Returns (g, normalized) where normalized means the coefficient at g
    is exactly 1.
    """
    if z.is_zero():
        raise ValueError("degree of zero element")
    if len(Bt) != z.nvars:
        raise DimensionError("matrix size mismatch")
    c = _drop_functional(Bt)
    phi = _phi_values(z, c)
    top = max(phi.values())
    cands = [g for g, v in phi.items() if v == top]
    if len(cands) != 1:
        return None
    g = cands[0]
    for h in z.terms:
        if h != g and not dominance_leq(h, g, Bt)[0]:
            return None
    return g, z.terms[g].is_one()


def codegree(z, Bt):
    """The unique dominance-minimal exponent of z, or None."""
    if z.is_zero():
        raise ValueError("codegree of zero element")
    c = _drop_functional(Bt)
    phi = _phi_values(z, c)
    bot = min(phi.values())
    cands = [g for g, v in phi.items() if v == bot]
    if len(cands) != 1:
        return None
    h = cands[0]
    for g in z.terms:
        if g != h and not dominance_leq(h, g, Bt)[0]:
            return None
    return h


def normalize(z, Bt):
    """Divide by the leading q-power so the coefficient at the degree is 1.

    Accepts a leading coefficient q^gamma only; returns (z', g).
    """
    d = degree(z, Bt)
    if d is None:
        raise ValueError("element is not pointed: no unique maximal degree")
    g, _ = d
    alpha = z.terms[g].is_unit_qpow()
    if alpha is None:
        raise ValueError("leading coefficient is not a unit q-power")
    return qpow_times(z, -alpha), g


def y_decomposition(z, Bt, g=None):
    """Write z = sum_n c_n x^g y^n (y^n = x^(Bt n)): {n tuple -> QCoeff}.

    g defaults to the degree of z; every term must be dominated by g.
    """
    if g is None:
        d = degree(z, Bt)
        if d is None:
            raise ValueError("element is not pointed")
        g = d[0]
    out = {}
    for h, c in z.terms.items():
        ok, n = dominance_leq(h, tuple(g), Bt)
        if not ok:
            raise ValueError(f"term exponent {h} not dominated by {tuple(g)}")
        out[n] = c
    return out

def support(z, Bt, g=None):
    """Unfrozen indices k with n_k != 0 in the decomposition of z."""
    dec = y_decomposition(z, Bt, g)
    ncols = len(Bt[0]) if Bt else 0
    return {k for n in dec for k in range(ncols) if n[k] != 0}


def supp_dim(z, Bt, g=None):
    """Componentwise max of the y-exponents n."""
    dec = y_decomposition(z, Bt, g)
    ncols = len(Bt[0]) if Bt else 0
    out = [0] * ncols
    for n in dec:
        for k in range(ncols):
            out[k] = max(out[k], n[k])
    return tuple(out)


# ---------------------------------------------------------------------------
# canonical text form

def _qpow_text(alpha):
    if alpha == 0:
        return ""
    return f"q^({alpha.numerator}/{alpha.denominator})" if alpha.denominator != 1 \
        else f"q^({alpha.numerator})"


def to_text(z):
    """Canonical text: integer-coefficient q^(a/b)*x1^e1*... terms, sorted."""
    if z.is_zero():
        return "0"
    pieces = []
    for g in sorted(z.terms, reverse=True):
        coeff = z.terms[g]
        xs = "*".join(f"x{i+1}^{e}" for i, e in enumerate(g) if e != 0)
        for alpha in sorted(coeff.terms):
            c = coeff.terms[alpha]
            parts = [p for p in (_qpow_text(alpha), xs) if p]
            body = "*".join(parts) if parts else "1"
            if c == 1:
                term = body
            elif c == -1:
                term = "-" + body
            else:
                term = f"{c}*{body}" if body != "1" else str(c)
            pieces.append(term)
    text = pieces[0]
    for t in pieces[1:]:
        text += (" - " + t[1:]) if t.startswith("-") else (" + " + t)
    return text


_TERM_RE = re.compile(r"^(?P<int>-?\d+)?(?:\*?q\^\((?P<qn>-?\d+)(?:/(?P<qd>\d+))?\))?"
                      r"(?P<xs>(?:\*?x\d+\^-?\d+)*)$")


def from_text(text, nvars):
    """Parse the canonical text form back into a QLaurent."""
    text = text.strip()
    if text in ("0", ""):
        return QLaurent.zero(nvars)
    # terms are separated by ' + ' / ' - '; a leading '-' may be unspaced
    chunks = []
    sign = 1
    if text.startswith("-"):
        sign = -1
        text = text[1:].lstrip()
    for piece in re.split(r"\s+([+-])\s+", text):
        if piece == "+":
            sign = 1
        elif piece == "-":
            sign = -1
        else:
            chunks.append((sign, piece.replace(" ", "")))
    out = QLaurent.zero(nvars)
    for sgn, chunk in chunks:
        m = _TERM_RE.match(chunk)
        if not m:
            raise ValueError(f"cannot parse term {chunk!r}")
        c = sgn * (int(m.group("int")) if m.group("int") else 1)
        alpha = Fraction(0)
        if m.group("qn") is not None:
            alpha = Fraction(int(m.group("qn")), int(m.group("qd") or 1))
        g = [0] * nvars
        for xm in re.finditer(r"x(\d+)\^(-?\d+)", m.group("xs") or ""):
            idx = int(xm.group(1)) - 1
            if idx >= nvars:
                raise ValueError(f"variable x{idx+1} out of range")
            g[idx] += int(xm.group(2))
        out = out + QLaurent.monomial(nvars, tuple(g), QCoeff.qpow(alpha, c))
    return out
