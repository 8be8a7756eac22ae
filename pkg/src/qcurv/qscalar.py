"""Exact arithmetic in the rational function field Q(s).

The deformation parameter is q = s^(n+1), so every exponent that shows up in
the calculus (including the fractional powers q^(2/(n+1))) is an integer power
of s. Values are reduced fractions of sparse polynomials with a monic
denominator, which makes equality a structural comparison.
"""

from fractions import Fraction


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class SPoly:
    """Sparse polynomial in s with rational coefficients and exponents >= 0."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in terms.items():
                if e < 0:
                    raise ValueError("SPoly exponents must be non-negative")
                if c:
                    clean[e] = _norm_coeff(c)
        self.terms = clean

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c):
        return cls._raw({0: _norm_coeff(c)} if c else {})

    @classmethod
    def monomial(cls, e, c=1):
        return cls._raw({e: _norm_coeff(c)} if c else {})

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def deg(self):
        return max(self.terms) if self.terms else -1

    def val(self):
        return min(self.terms) if self.terms else 0

    def lc(self):
        return self.terms[max(self.terms)]

    def __eq__(self, other):
        return isinstance(other, SPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "SPoly(%r)" % dict(sorted(self.terms.items()))

    def __neg__(self):
        return SPoly._raw({e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = _norm_coeff(v)
            else:
                out.pop(e, None)
        return SPoly._raw(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return SPoly._raw({})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return SPoly._raw({e: _norm_coeff(c) for e, c in out.items() if c})

    def scale(self, c):
        if not c:
            return SPoly._raw({})
        return SPoly._raw({e: _norm_coeff(v * c) for e, v in self.terms.items()})

    def shift(self, k):
        """Multiply by s^k; k may be negative if it keeps exponents >= 0."""
        if k == 0:
            return self
        return SPoly._raw({e + k: c for e, c in self.terms.items()})

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = dict(self.terms)
        quo = {}
        db = other.deg()
        lcb = other.lc()
        while rem:
            dr = max(rem)
            if dr < db:
                break
            c = Fraction(rem[dr]) / lcb
            shift = dr - db
            quo[shift] = _norm_coeff(c)
            for e, v in other.terms.items():
                k = e + shift
                nv = rem.get(k, 0) - c * v
                if nv:
                    rem[k] = _norm_coeff(nv)
                else:
                    rem.pop(k, None)
        return SPoly._raw(quo), SPoly._raw(rem)

    def monic(self):
        lc = self.lc()
        if lc == 1:
            return self
        return self.scale(Fraction(1) / lc)

    def evaluate(self, x):
        x = Fraction(x)
        return sum((Fraction(c) * x ** e for e, c in self.terms.items()), Fraction(0))


def poly_gcd(a, b):
    """Monic gcd of two polynomials over Q (Euclid)."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    if a.is_zero():
        return a
    return a.monic()


_ONE = SPoly._raw({0: 1})


class ScalarRat:
    """Reduced fraction num/den of SPolys; den is monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=1):
        if not isinstance(num, SPoly):
            num = SPoly.const(Fraction(num))
        if not isinstance(den, SPoly):
            den = SPoly.const(Fraction(den))
        num, den = _reduce(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den):
        x = cls.__new__(cls)
        x.num = num
        x.den = den
        x._hash = None
        return x

    @classmethod
    def from_laurent(cls, terms):
        """Build from a map exponent -> coefficient where exponents may be negative."""
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return ZERO
        low = min(terms)
        if low >= 0:
            return cls._raw(SPoly._raw({e: _norm_coeff(c) for e, c in terms.items()}), _ONE)
        num = SPoly._raw({e - low: _norm_coeff(c) for e, c in terms.items()})
        return cls._raw(num, SPoly._raw({-low: 1}))

    def is_zero(self):
        return not self.num.terms

    def is_laurent(self):
        return self.den.is_monomial()

    def laurent_terms(self):
        """Exponent -> coefficient map when the denominator is a power of s."""
        if not self.den.is_monomial():
            raise ValueError("not a Laurent polynomial: %s" % self.to_text())
        k = self.den.deg()
        return {e - k: c for e, c in self.num.terms.items()}

    def __eq__(self, other):
        if not isinstance(other, ScalarRat):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self.num.terms == other.num.terms and self.den.terms == other.den.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __bool__(self):
        return bool(self.num.terms)

    def __repr__(self):
        return "ScalarRat(%s)" % self.to_text()

    def __str__(self):
        return self.to_text()

    def __neg__(self):
        return ScalarRat._raw(-self.num, self.den)

    def __add__(self, other):
        other = _coerce(other)
        if not other.num.terms:
            return self
        if not self.num.terms:
            return other
        if self.den.terms == other.den.terms:
            num, den = self.num + other.num, self.den
            if self.den.is_monomial() or not num.terms:
                return ScalarRat._raw(*_reduce_laurent(num, den))
            return ScalarRat._raw(*_reduce(num, den))
        if self.den.is_monomial() and other.den.is_monomial():
            a, b = self.den.deg(), other.den.deg()
            k = max(a, b)
            num = self.num.shift(k - a) + other.num.shift(k - b)
            return ScalarRat._raw(*_reduce_laurent(num, SPoly._raw({k: 1})))
        num = self.num * other.den + other.num * self.den
        return ScalarRat._raw(*_reduce(num, self.den * other.den))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if not self.num.terms or not other.num.terms:
            return ZERO
        if self.den.is_monomial() and other.den.is_monomial():
            num = self.num * other.num
            den = SPoly._raw({self.den.deg() + other.den.deg(): 1})
            return ScalarRat._raw(*_reduce_laurent(num, den))
        return ScalarRat._raw(*_reduce(self.num * other.num, self.den * other.den))

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise ZeroDivisionError("inverse of zero")
        return ScalarRat._raw(*_reduce(self.den, self.num))

    def __truediv__(self, other):
        return self * _coerce(other).inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def evaluate(self, x):
        """Value at s = x (a rational number)."""
        d = self.den.evaluate(x)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at s = %s" % x)
        return self.num.evaluate(x) / d

    def to_text(self, var="s", n=None):
        """Canonical text. With var='q' and n given, exponents are divided by n+1 when possible."""
        if self.den.is_monomial():
            terms = self.laurent_terms()
            var, terms = _choose_var(var, n, terms)
            return _render_laurent(terms, var)
        num_v, num_t = _choose_var(var, n, dict(self.num.terms))
        den_v, den_t = _choose_var(var, n, dict(self.den.terms))
        if num_v != den_v:
            num_v, num_t = "s", dict(self.num.terms)
            den_v, den_t = "s", dict(self.den.terms)
        return "(%s) / (%s)" % (
            _render_terms(sorted(num_t.items()), num_v),
            _render_terms(sorted(den_t.items()), den_v),
        )

    def to_json(self):
        def enc(p):
            return [[e, "%d/%d" % (Fraction(c).numerator, Fraction(c).denominator)]
                    for e, c in sorted(p.terms.items())]
        return {"num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json(cls, obj):
        def dec(items):
            return SPoly({int(e): Fraction(c) for e, c in items})
        return cls(dec(obj["num"]), dec(obj["den"]))


def _reduce_laurent(num, den):
    # den is c*s^k; only a power of s can be shared
    if not num.terms:
        return SPoly._raw({}), _ONE
    k = den.deg()
    v = min(num.val(), k)
    if v:
        num = num.shift(-v)
        k -= v
    c = den.terms[den.deg()]
    if c != 1:
        num = num.scale(Fraction(1) / c)
    return num, SPoly._raw({k: 1})


def _reduce(num, den):
    if not den.terms:
        raise ZeroDivisionError("zero denominator")
    if not num.terms:
        return SPoly._raw({}), _ONE
    if den.is_monomial():
        return _reduce_laurent(num, den)
    v = min(num.val(), den.val())
    if v:
        num, den = num.shift(-v), den.shift(-v)
    if not num.is_monomial() and den.deg() > 0:
        g = poly_gcd(num, den)
        if g.deg() > 0:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
    lc = den.lc()
    if lc != 1:
        inv = Fraction(1) / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def _coerce(x):
    if isinstance(x, ScalarRat):
        return x
    if isinstance(x, (int, Fraction)):
        if not x:
            return ZERO
        return ScalarRat._raw(SPoly._raw({0: _norm_coeff(x)}), _ONE)
    raise TypeError("cannot coerce %r to ScalarRat" % (x,))


def _choose_var(var, n, terms):
    if var == "q" and n is not None:
        m = n + 1
        if all(e % m == 0 for e in terms):
            return "q", {e // m: c for e, c in terms.items()}
    return "s", terms


def _render_terms(items, var):
    if not items:
        return "0"
    parts = []
    for e, c in items:
        c = Fraction(c)
        if e == 0:
            body = str(c)
        else:
            mono = var if e == 1 else "%s^%d" % (var, e)
            if c == 1:
                body = mono
            elif c == -1:
                body = "-" + mono
            else:
                body = "%s*%s" % (c, mono)
        parts.append(body)
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out


def _render_laurent(terms, var):
    # ordered by |exponent|, negative first on ties: "1 + s^-2", "q^-1 + q"
    return _render_terms(sorted(terms.items(), key=lambda t: (abs(t[0]), t[0])), var)


ZERO = ScalarRat._raw(SPoly._raw({}), _ONE)
ONE = ScalarRat._raw(SPoly._raw({0: 1}), _ONE)


def as_scalar(x):
    return _coerce(x)


def spow(e):
    """s^e as a reduced fraction."""
    return ScalarRat.from_laurent({e: 1})


def qint_round(m, t):
    """(m)_{s^t} = 1 + s^t + ... + s^(t(m-1))."""
    if t == 0:
        raise ValueError("base exponent t must be nonzero")
    if m < 0:
        raise ValueError("m must be non-negative")
    return ScalarRat.from_laurent({t * j: 1 for j in range(m)})


def qint_bracket(m, t):
    """[m]_{s^t} = s^(t(1-m)) + s^(t(3-m)) + ... + s^(t(m-1))."""
    if t == 0:
        raise ValueError("base exponent t must be nonzero")
    if m < 0:
        raise ValueError("m must be non-negative")
    return ScalarRat.from_laurent({t * (1 - m + 2 * j): 1 for j in range(m)})


def qfactorial(m, t):
    if m < 0:
        raise ValueError("m must be non-negative")
    out = ONE
    for j in range(1, m + 1):
        out = out * qint_bracket(j, t)
    return out


def qbinomial(n, r, t):
    if n < 0 or r < 0 or r > n:
        raise ValueError("need 0 <= r <= n")
    return qfactorial(n, t) / (qfactorial(r, t) * qfactorial(n - r, t))


def scalar_identity_failures(t=1, m_max=20, binom_max=8):
    """Names of the quantum-integer identities that fail for base s^t (empty when all hold).

    Checked: [m] = b^(1-m) (m)_{b^2}, (m)_b (1 - b) = 1 - b^m for m <= m_max, and the
    symmetric Pascal rule [n, r] = b^r [n-1, r] + b^(r-n) [n-1, r-1] for n <= binom_max.
    """
    failures = []
    b = spow(t)
    for m in range(m_max + 1):
        if qint_bracket(m, t) != spow(t * (1 - m)) * qint_round(m, 2 * t):
            failures.append("conversion m=%d" % m)
        if qint_round(m, t) * (1 - b) != 1 - spow(t * m):
            failures.append("geometric sum m=%d" % m)
    for n in range(1, binom_max + 1):
        if qbinomial(n, 0, t) != ONE or qbinomial(n, n, t) != ONE:
            failures.append("pascal boundary n=%d" % n)
        for r in range(1, n):
            rhs = spow(t * r) * qbinomial(n - 1, r, t) + spow(t * (r - n)) * qbinomial(n - 1, r - 1, t)
            if qbinomial(n, r, t) != rhs:
                failures.append("pascal (%d,%d)" % (n, r))
    return failures

