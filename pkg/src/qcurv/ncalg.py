"""The FRT-presented algebra O_q(SU_{n+1}).

Generators u^i_j are indexed row-major from 0: u^i_j <-> (i-1)*N + (j-1) with
N = n+1. Words are tuples of such indices and an NCPoly maps words to
ScalarRat coefficients.
"""

import hashlib
from itertools import permutations

from .kernel import Rewriter, ResourceLimitError
from .qscalar import ONE, ZERO, ScalarRat, as_scalar, spow

DEFAULT_TERM_LIMIT = 2_000_000


def gidx(i, j, N):
    if not (1 <= i <= N and 1 <= j <= N):
        raise IndexError("generator u[%d,%d] out of range for N=%d" % (i, j, N))
    return (i - 1) * N + (j - 1)


def gpair(g, N):
    return g // N + 1, g % N + 1


def word_text(word, N):
    return "".join("u[%d,%d]" % gpair(g, N) for g in word)


def inversions(perm):
    return sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])


def qpow(e, N):
    """q^e as a ScalarRat (q = s^N)."""
    return spow(e * N)


class NCPoly:
    """Finite sum of words with ScalarRat coefficients."""

    __slots__ = ("terms", "N")

    def __init__(self, terms, N):
        self.terms = {w: c for w, c in terms.items() if c}
        self.N = N

    @classmethod
    def zero(cls, N):
        return cls({}, N)

    @classmethod
    def const(cls, c, N):
        return cls({(): as_scalar(c)}, N)

    @classmethod
    def gen(cls, i, j, N):
        return cls({(gidx(i, j, N),): ONE}, N)

    @classmethod
    def word(cls, word, N, coeff=ONE):
        return cls({tuple(word): as_scalar(coeff)}, N)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.N == other.N and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.terms.items()}, self.N)

    def __add__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly.const(other, self.N)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, ZERO) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NCPoly(out, self.N)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, NCPoly):
            other = NCPoly.const(other, self.N)
        return self + (-other)

    def __rsub__(self, other):
        return NCPoly.const(other, self.N) - self

    def scale(self, c):
        c = as_scalar(c)
        if not c:
            return NCPoly.zero(self.N)
        return NCPoly({w: v * c for w, v in self.terms.items()}, self.N)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        out = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                v = out.get(w, ZERO) + c1 * c2
                if v:
                    out[w] = v
                else:
                    out.pop(w, None)
        return NCPoly(out, self.N)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k):
        out = NCPoly.const(1, self.N)
        for _ in range(k):
            out = out * self
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))

    def to_text(self):
        if not self.terms:
            return "0"
        n = self.N - 1
        parts = []
        for w, c in self.sorted_terms():
            ct = c.to_text("q", n)
            if not w:
                parts.append(ct)
            elif ct == "1":
                parts.append(word_text(w, self.N))
            elif ct == "-1":
                parts.append("-" + word_text(w, self.N))
            elif " " in ct:
                parts.append("(%s) * %s" % (ct, word_text(w, self.N)))
            else:
                parts.append("%s * %s" % (ct, word_text(w, self.N)))
        out = parts[0]
        for p in parts[1:]:
            out += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return out

    def __repr__(self):
        return "NCPoly(%s)" % self.to_text()

    def to_json(self):
        return [{"word": [list(gpair(g, self.N)) for g in w], "coeff": c.to_json()}
                for w, c in self.sorted_terms()]


def _laurent_key(l):
    return tuple(sorted(l.items()))


class Presentation:
    """Oriented FRT relations plus det_q = 1, with a memoized rewriting kernel.

    Monomial order: degree-lexicographic with generators in row-major order.
    The quadratic rules rewrite every descending adjacent pair; the determinant
    relation is applied to sorted words containing all diagonal letters.
    """

    order = "deglex/row-major; det_q=1 eliminates sorted words containing u[1,1]...u[N,N]"

    def __init__(self, n, term_limit=DEFAULT_TERM_LIMIT):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.N = N = n + 1
        self.quad = _quadratic_rules(N)
        self.det_terms = _det_terms(N)
        self.term_limit = term_limit
        self.rewriter = Rewriter(N, self.quad, self.det_terms, term_limit)
        self._scal = {}

    def convention_text(self):
        lines = ["N=%d" % self.N, "order=" + self.order]
        for (x, y), rhs in sorted(self.quad.items()):
            lines.append("%s -> %s" % ((x, y), [(w, sorted(c.items())) for w, c in rhs]))
        lines.append("det %s" % [(w, sorted(c.items())) for w, c in self.det_terms])
        return "\n".join(lines)

    def convention_hash(self):
        return hashlib.sha256(self.convention_text().encode()).hexdigest()[:16]

    def scalar(self, laurent):
        key = _laurent_key(laurent)
        hit = self._scal.get(key)
        if hit is None:
            hit = ScalarRat.from_laurent({e * self.N: c for e, c in laurent.items()})
            self._scal[key] = hit
        return hit

    def nf_word(self, word):
        """Normal form of a single word as {word: ScalarRat}."""
        return {w: self.scalar(c) for w, c in self.rewriter.nf(tuple(word)).items()}

    def normal_form(self, p):
        out = {}
        for w, c in p.terms.items():
            for w2, l in self.rewriter.nf(w).items():
                v = out.get(w2, ZERO) + c * self.scalar(l)
                if v:
                    out[w2] = v
                else:
                    out.pop(w2, None)
            if len(out) > self.term_limit:
                raise ResourceLimitError("term count exceeds limit %d" % self.term_limit)
        return NCPoly(out, self.N)

    def equal(self, a, b):
        return self.normal_form(a - b).is_zero()

    def gen(self, i, j):
        return NCPoly.gen(i, j, self.N)

    def const(self, c):
        return NCPoly.const(c, self.N)

    def relations(self):
        """Defining relations as (name, element that must vanish)."""
        out = []
        N = self.N
        for (x, y), rhs in sorted(self.quad.items()):
            lhs = NCPoly.word((x, y), N)
            r = NCPoly({}, N)
            for w, c in rhs:
                r = r + NCPoly.word(w, N, self.scalar(c))
            out.append(("%s = %s" % (word_text((x, y), N), r.to_text()), lhs - r))
        out.append(("det_q = 1", qdet(self.n) - NCPoly.const(1, N)))
        return out

    def is_normal(self, word):
        word = tuple(word)
        if any(word[i] > word[i + 1] for i in range(len(word) - 1)):
            return False
        return not self.rewriter.has_diag(word)


def _quadratic_rules(N):
    quad = {}
    qinv = {-1: 1}
    one = {0: 1}
    for x in range(N * N):
        for y in range(x):
            j, b = gpair(x, N)
            i, a = gpair(y, N)
            if j == i or b == a:
                # same row or same column: x y = q^{-1} y x
                quad[(x, y)] = (((y, x), qinv),)
            elif b < a:
                # u^j_k u^i_l with i<j, k<l commute
                quad[(x, y)] = (((y, x), one),)
            else:
                # u^j_l u^i_k = u^i_k u^j_l - (q - q^{-1}) u^i_l u^j_k
                k, l = a, b
                quad[(x, y)] = (((y, x), one),
                                ((gidx(i, l, N), gidx(j, k, N)), {1: -1, -1: 1}))
    return quad


def _det_terms(N):
    out = []
    for perm in permutations(range(1, N + 1)):
        ell = inversions(perm)
        word = tuple(gidx(r + 1, perm[r], N) for r in range(N))
        out.append((word, {ell: (-1) ** ell}))
    return out


_PRESENTATIONS = {}


def build_presentation(n, term_limit=DEFAULT_TERM_LIMIT):
    key = (n, term_limit)
    if key not in _PRESENTATIONS:
        _PRESENTATIONS[key] = Presentation(n, term_limit)
    return _PRESENTATIONS[key]


def quantum_minor(rows, cols, N):
    """det_q of the submatrix on the given rows and columns (increasing lists)."""
    rows, cols = list(rows), list(cols)
    if len(rows) != len(cols):
        raise ValueError("minor must be square")
    if not rows:
        return NCPoly.const(1, N)
    terms = {}
    for perm in permutations(range(len(cols))):
        ell = inversions(perm)
        word = tuple(gidx(rows[r], cols[perm[r]], N) for r in range(len(rows)))
        terms[word] = qpow(ell, N) * (-1) ** ell
    return NCPoly(terms, N)


def qdet(n):
    N = n + 1
    return quantum_minor(range(1, N + 1), range(1, N + 1), N)


def antipode_gen(i, j, N):
    """S(u^i_j) = (-q)^(i-j) times the quantum minor deleting row j and column i."""
    rows = [r for r in range(1, N + 1) if r != j]
    cols = [c for c in range(1, N + 1) if c != i]
    sign = (-1) ** ((i - j) % 2)
    return quantum_minor(rows, cols, N).scale(qpow(i - j, N) * sign)


def z(i, N):
    return NCPoly.gen(i, 1, N)


def zbar(i, N):
    return antipode_gen(1, i, N)


def star(p):
    """Conjugate-linear anti-homomorphism with (u^i_j)* = S(u^j_i).

    Coefficients are rational functions of the real parameter s, so complex
    conjugation acts trivially on them.
    """
    N = p.N
    out = NCPoly.zero(N)
    for w, c in p.terms.items():
        term = NCPoly.const(c, N)
        for g in reversed(w):
            i, j = gpair(g, N)
            term = term * antipode_gen(j, i, N)
        out = out + term
    return out


def word_degree(word, N):
    n = N - 1
    first = sum(1 for g in word if g % N == 0)
    weight = n * first - (len(word) - first)
    if weight % n:
        raise ValueError("word %s is not in the sphere subalgebra" % word_text(word, N))
    return weight // n


def degree(p):
    """Z-degree: z_i = u^i_1 has degree 1 and zbar_i = S(u^1_i) has degree -1.

    Computed from column counts: a letter in column 1 has Z-weight n and any
    other letter weight -1, so the degree is (n*#col1 - #rest)/n.
    """
    degs = {word_degree(w, p.N) for w in p.terms}
    if not degs:
        return 0
    if len(degs) > 1:
        return "inhomogeneous"
    return degs.pop()


def random_word(rng, N, max_len):
    """Uniform random word of length 1..max_len."""
    return tuple(rng.randrange(N * N) for _ in range(rng.randint(1, max_len)))


def random_poly(rng, N, max_terms=3, max_len=2):
    """Small random element: integer multiples of q^e times random words, plus a constant."""
    p = NCPoly.const(rng.randint(-2, 2), N)
    for _ in range(rng.randint(1, max_terms)):
        c = qpow(rng.randint(-1, 1), N) * rng.choice([-2, -1, 1, 2, 3])
        p = p + NCPoly.word(random_word(rng, N, max_len), N, c)
    return p


__all__ = [
    "random_word", "random_poly", "NCPoly", "Presentation", "build_presentation", "qdet", "quantum_minor",
    "antipode_gen", "star", "degree", "z", "zbar", "gidx", "gpair", "word_text",
    "ResourceLimitError", "qpow",
]
