"""Single-step rewriting, independent of the memoized kernel.

Each step rewrites one redex of one word. A redex is either a descending
adjacent pair (quadratic rule) or a whole sorted word containing every
diagonal letter (determinant rule). The strategy picks which redex fires.
Every step is checked to replace a word by words that are smaller in the
termination order (length, -phi, lex), where phi(w) is the sum of
(row - col)^2 over the letters: swaps keep phi and lower lex order,
quadratic correction terms raise phi by 2(j-i)(l-k) > 0, and a determinant
step either shortens the word or yields words of larger phi. phi is bounded
for a fixed length, so the order is well founded.
"""



def deglex_key(word):
    return (len(word), word)


def termination_key(word, N):
    phi = sum((g // N - g % N) ** 2 for g in word)
    return (len(word), -phi, word)


def _ladd(target, word, coef):
    for e, c in coef.items():
        cur = target.setdefault(word, {})
        v = cur.get(e, 0) + c
        if v:
            cur[e] = v
        else:
            cur.pop(e, None)
        if not cur:
            target.pop(word, None)


def _lmul(a, b):
    out = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


class StepRewriter:
    def __init__(self, pres, strategy="leftmost", rng=None):
        self.pres = pres
        self.N = pres.N
        self.quad = pres.quad
        self.det_terms = pres.det_terms
        self.diag = [i * self.N + i for i in range(self.N)]
        self.strategy = strategy
        self.rng = rng
        self.steps = 0

    def redexes(self, word):
        out = [("quad", i) for i in range(len(word) - 1) if word[i] > word[i + 1]]
        if not out and all(word.count(d) >= 1 for d in self.diag):
            out.append(("det", 0))
        return out

    def choose(self, options):
        if self.strategy == "leftmost":
            return options[0]
        if self.strategy == "rightmost":
            return options[-1]
        return self.rng.choice(options)

    def quadratic_nf(self, poly):
        """Apply only quadratic rules (used inside the determinant step)."""
        poly = {w: dict(c) for w, c in poly.items()}
        while True:
            target = next((w for w in sorted(poly, key=deglex_key, reverse=True)
                           if any(w[i] > w[i + 1] for i in range(len(w) - 1))), None)
            if target is None:
                return poly
            i = next(i for i in range(len(target) - 1) if target[i] > target[i + 1])
            coef = poly.pop(target)
            for rhs, c in self.quad[(target[i], target[i + 1])]:
                _ladd(poly, target[:i] + rhs + target[i + 2:], _lmul(coef, c))

    def step_word(self, word, redex):
        kind, i = redex
        if kind == "quad":
            return [(word[:i] + rhs + word[i + 2:], c)
                    for rhs, c in self.quad[(word[i], word[i + 1])]]
        rest = list(word)
        for d in self.diag:
            rest.remove(d)
        m = tuple(rest)
        prod = {}
        for w, c in self.det_terms:
            _ladd(prod, w + m, c)
        prod = self.quadratic_nf(prod)
        lead = prod.pop(word)
        (e, c), = lead.items()
        inv = {-e: c}  # c is +-1 so 1/c == c
        out = [(m, inv)]
        for w, cw in prod.items():
            out.append((w, _lmul(_lmul(inv, cw), {0: -1})))
        return out

    def normal_form(self, poly, witness=None):
        """poly: {word: {q-exponent: int}}. Returns the irreducible form."""
        poly = {w: dict(c) for w, c in poly.items()}
        while True:
            reducible = [w for w in poly if self.redexes(w)]
            if not reducible:
                return poly
            reducible.sort(key=deglex_key)
            word = self.choose(reducible)
            redex = self.choose(self.redexes(word))
            coef = poly.pop(word)
            for w2, c in self.step_word(word, redex):
                if witness is not None:
                    witness.append(termination_key(w2, self.N) < termination_key(word, self.N))
                _ladd(poly, w2, _lmul(coef, c))
            self.steps += 1
