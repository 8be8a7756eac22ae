"""Rewriting kernel for the FRT algebra, pure-Python implementation.

Words are tuples of generator indices (row-major, 0-based). Coefficients
inside the kernel are Laurent polynomials in q with integer coefficients,
stored as {exponent: int}; every rewrite rule has coefficients of that form,
so no rational-function arithmetic happens here.

Normal forms are computed in two stages:

* the quadratic exchange rules reduce any word to a sorted word (an ordered
  monomial of the quantum matrix algebra);
* a sorted word containing every diagonal letter u^1_1 ... u^N_N is rewritten
  with det_q = 1, using that det_q * m has leading monomial diag + m.
"""


class ResourceLimitError(RuntimeError):
    pass


def lmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def ladd_into(target, word, coef):
    cur = target.get(word)
    if cur is None:
        target[word] = dict(coef)
        return
    for e, c in coef.items():
        v = cur.get(e, 0) + c
        if v:
            cur[e] = v
        else:
            del cur[e]
    if not cur:
        del target[word]


_ONE = {0: 1}


class Rewriter:
    """Memoized normal forms for one presentation."""

    def __init__(self, N, quad, det_terms, term_limit=2_000_000):
        self.N = N
        self.quad = quad
        self.det_terms = det_terms
        self.diag = tuple(i * N + i for i in range(N))
        self.diag_set = frozenset(self.diag)
        self.term_limit = term_limit
        self._ins = {}
        self._nfm = {}
        self._det = {}
        self._dm = {}
        self._nf = {}

    def _check(self, d):
        if len(d) > self.term_limit:
            raise ResourceLimitError(
                "term count %d exceeds limit %d" % (len(d), self.term_limit))

    def insert(self, x, m):
        """Quadratic normal form of the word x*m where m is sorted."""
        key = (x, m)
        hit = self._ins.get(key)
        if hit is not None:
            return hit
        if not m or x <= m[0]:
            res = {(x,) + m: _ONE}
        else:
            res = {}
            rest = m[1:]
            for w, c in self.quad[(x, m[0])]:
                for w2, d in self.concat(w, rest).items():
                    ladd_into(res, w2, lmul(c, d))
            self._check(res)
        self._ins[key] = res
        return res

    def concat(self, w, m):
        """Quadratic normal form of w*m, with m sorted."""
        acc = {m: _ONE}
        for x in reversed(w):
            nxt = {}
            for m2, c in acc.items():
                for w2, d in self.insert(x, m2).items():
                    ladd_into(nxt, w2, lmul(c, d))
            self._check(nxt)
            acc = nxt
        return acc

    def nf_matrix(self, word):
        """Normal form in the quantum matrix algebra (no determinant relation)."""
        hit = self._nfm.get(word)
        if hit is not None:
            return hit
        if len(word) <= 1:
            res = {word: _ONE}
        else:
            res = {}
            for m, c in self.nf_matrix(word[1:]).items():
                for w2, d in self.insert(word[0], m).items():
                    ladd_into(res, w2, lmul(c, d))
            self._check(res)
        self._nfm[word] = res
        return res

    def has_diag(self, w):
        return self.diag_set.issubset(w)

    def strip_diag(self, w):
        out = list(w)
        for g in self.diag:
            out.remove(g)
        return tuple(out)

    def det_times(self, m):
        """Quadratic normal form of det_q * m for sorted m."""
        hit = self._dm.get(m)
        if hit is not None:
            return hit
        res = {}
        for w, c in self.det_terms:
            for w2, d in self.concat(w, m).items():
                ladd_into(res, w2, lmul(c, d))
        self._dm[m] = res
        return res

    def det_reduce(self, w):
        """Rewrite a sorted word using det_q = 1 until no word contains the diagonal."""
        hit = self._det.get(w)
        if hit is not None:
            return hit
        if not self.has_diag(w):
            res = {w: _ONE}
        else:
            m = self.strip_diag(w)
            dm = self.det_times(m)
            lead = dm[w]
            if len(lead) != 1:
                raise ArithmeticError("leading coefficient of det*m is not a monomial")
            (e, c), = lead.items()
            if c not in (1, -1):
                raise ArithmeticError("leading coefficient of det*m is not a unit")
            inv = {-e: c}
            res = {}
            for w2, d in self.det_reduce(m).items():
                ladd_into(res, w2, lmul(inv, d))
            neg_inv = {-e: -c}
            for r, cr in dm.items():
                if r == w:
                    continue
                for w2, d in self.det_reduce(r).items():
                    ladd_into(res, w2, lmul(lmul(neg_inv, cr), d))
            self._check(res)
        self._det[w] = res
        return res

    def nf(self, word):
        """Normal form of a word in O_q(SL_N)."""
        hit = self._nf.get(word)
        if hit is not None:
            return hit
        res = {}
        for m, c in self.nf_matrix(word).items():
            for w2, d in self.det_reduce(m).items():
                ladd_into(res, w2, lmul(c, d))
        self._check(res)
        self._nf[word] = res
        return res

    def cache_size(self):
        return len(self._ins) + len(self._nfm) + len(self._det) + len(self._nf)
