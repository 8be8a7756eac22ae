"""Hopf structure maps on O_q(SU_{n+1}) and the U_q(sl_{n+1}) pairing oracle.

An element of A is evaluated on a word X in E_i, F_i, K_i^{+-1} by letting X
act on V^{(x)m} through the iterated coproduct and reading off the matrix
entry indexed by the word's row and column indices.

The oracle carries a convention sign c: the U_q generators act with K_i having
eigenvalues q^c on v_i and q^-c on v_(i+1), and all U_q relations are those of
the Drinfeld-Jimbo algebra at parameter q^c. With c = +1 the pairing produces
u^1_2 u^1_1 = q u^1_1 u^1_2, which is opposite to the anchor relation of the
presentation; the certified convention is c = -1 (see certify_presentation).
"""

from itertools import combinations_with_replacement, product

from .kernel import _kernel_py
from .ncalg import NCPoly, antipode_gen, gpair, gidx, qpow, random_poly, random_word, word_text
from .qscalar import ONE, ZERO, ScalarRat

lmul = _kernel_py.lmul
ladd_into = _kernel_py.ladd_into

CERTIFIED_CONVENTION = -1
TYPO_NOTE = ("relations K_iK_j = K_jK_i and counit(K_i) = 1 used in place of the printed "
             "K_iK_j = 1 and counit(K_i) = 0")


class UqWord:
    """Word over E_i, F_i, K_i, Kinv_i; letters are (kind, i) with kind in 'EFKk'."""

    __slots__ = ("letters",)

    def __init__(self, letters=()):
        self.letters = tuple(letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __eq__(self, other):
        return isinstance(other, UqWord) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return "UqWord(%s)" % self.text()

    def text(self):
        names = {"E": "E%d", "F": "F%d", "K": "K%d", "k": "K%d^-1"}
        return "*".join(names[k] % i for k, i in self.letters) or "1"


# ---------------------------------------------------------------- matrices

def _k_exp(kind, i, j, conv):
    """Exponent of q for K_i (kind 'K') or K_i^-1 (kind 'k') on basis vector v_j."""
    e = conv if j == i else (-conv if j == i + 1 else 0)
    return e if kind == "K" else -e


def fundamental_rep(letter, n, conv=CERTIFIED_CONVENTION):
    """(n+1)x(n+1) matrix (list of rows of ScalarRat) of a U_q generator."""
    kind, i = letter
    N = n + 1
    if not 1 <= i <= n:
        raise IndexError("generator index %d out of range for n=%d" % (i, n))
    mat = [[ZERO] * N for _ in range(N)]
    if kind == "E":
        mat[i - 1][i] = ONE
    elif kind == "F":
        mat[i][i - 1] = ONE
    elif kind in "Kk":
        for j in range(1, N + 1):
            mat[j - 1][j - 1] = qpow(_k_exp(kind, i, j, conv), N)
    else:
        raise ValueError("unknown generator kind %r" % kind)
    return mat


def _apply_letter(letter, vec, conv):
    """Act by one U_q letter on a sparse vector over V^{(x)m} (Laurent coefficients in q)."""
    kind, i = letter
    out = {}
    for basis, coef in vec.items():
        if kind in "Kk":
            e = sum(_k_exp(kind, i, j, conv) for j in basis)
            ladd_into(out, basis, {x + e: c for x, c in coef.items()})
        elif kind == "E":
            # Delta^(m) E = sum_p 1..1 (x) E (x) K..K
            for p, j in enumerate(basis):
                if j == i + 1:
                    e = sum(_k_exp("K", i, jj, conv) for jj in basis[p + 1:])
                    nb = basis[:p] + (i,) + basis[p + 1:]
                    ladd_into(out, nb, {x + e: c for x, c in coef.items()})
        elif kind == "F":
            # Delta^(m) F = sum_p Kinv..Kinv (x) F (x) 1..1
            for p, j in enumerate(basis):
                if j == i:
                    e = sum(_k_exp("k", i, jj, conv) for jj in basis[:p])
                    nb = basis[:p] + (i + 1,) + basis[p + 1:]
                    ladd_into(out, nb, {x + e: c for x, c in coef.items()})
        else:
            raise ValueError("unknown generator kind %r" % kind)
    return out


def act_word(X, basis, conv=CERTIFIED_CONVENTION):
    """X . e_basis as a sparse vector {basis tuple: Laurent in q}."""
    vec = {tuple(basis): {0: 1}}
    for letter in reversed(X.letters):
        vec = _apply_letter(letter, vec, conv)
        if not vec:
            break
    return vec


def tensor_matrix(X, n, m, conv=CERTIFIED_CONVENTION):
    """Sparse matrix {(row basis, col basis): Laurent} of X on V^{(x)m}."""
    N = n + 1
    out = {}
    for col in product(range(1, N + 1), repeat=m):
        for row, coef in act_word(X, col, conv).items():
            out[(row, col)] = coef
    return out


# ---------------------------------------------------------------- relations of U_q

def _uq_relations(n, conv):
    """Defining relations as (name, list of (Laurent coeff, UqWord)) that must vanish."""
    rels = []
    W = lambda *ls: UqWord(ls)
    one = {0: 1}
    for i in range(1, n + 1):
        rels.append(("K%d K%d^-1 = 1" % (i, i), [(one, W(("K", i), ("k", i))), ({0: -1}, W())]))
        rels.append(("K%d^-1 K%d = 1" % (i, i), [(one, W(("k", i), ("K", i))), ({0: -1}, W())]))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a = 2 if i == j else (-1 if abs(i - j) == 1 else 0)
            if i < j:
                rels.append(("K%d K%d = K%d K%d" % (i, j, j, i),
                             [(one, W(("K", i), ("K", j))), ({0: -1}, W(("K", j), ("K", i)))]))
            rels.append(("K%d E%d K%d^-1 = q^%d E%d" % (i, j, i, a, j),
                         [(one, W(("K", i), ("E", j), ("k", i))), ({a * conv: -1}, W(("E", j)))]))
            rels.append(("K%d F%d K%d^-1 = q^%d F%d" % (i, j, i, -a, j),
                         [(one, W(("K", i), ("F", j), ("k", i))), ({-a * conv: -1}, W(("F", j)))]))
    return rels


def _cross_relation_matrices(i, j, n, m, conv):
    """E_iF_j - F_jE_i - delta_ij (K_i - K_i^-1)/(q - q^-1), multiplied by (q - q^-1)."""
    qq = {conv: 1, -conv: -1}
    terms = [(qq, UqWord([("E", i), ("F", j)])), ({x: -c for x, c in qq.items()}, UqWord([("F", j), ("E", i)]))]
    if i == j:
        terms += [({0: -1}, UqWord([("K", i)])), ({0: 1}, UqWord([("k", i)]))]
    return terms


def _serre_terms(kind, i, j, conv):
    qsum = {conv: -1, -conv: -1}
    return [({0: 1}, UqWord([(kind, i), (kind, i), (kind, j)])),
            (qsum, UqWord([(kind, i), (kind, j), (kind, i)])),
            ({0: 1}, UqWord([(kind, j), (kind, i), (kind, i)]))]


def _combo_matrix(terms, n, m, conv):
    total = {}
    for coef, X in terms:
        for key, val in tensor_matrix(X, n, m, conv).items():
            ladd_into(total, key, lmul(coef, val))
    return total


def verify_uq_relations(n, m, conv=CERTIFIED_CONVENTION):
    """Check every defining relation of U_q(sl_{n+1}) on V^{(x)m}; returns a report dict."""
    rows = []

    def record(name, terms):
        mat = _combo_matrix(terms, n, m, conv)
        rows.append({"relation": name, "status": "pass" if not mat else "fail"})

    for name, terms in _uq_relations(n, conv):
        record(name, terms)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            record("E%d F%d - F%d E%d = delta (K - K^-1)/(q - q^-1)" % (i, j, j, i),
                   _cross_relation_matrices(i, j, n, m, conv))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if abs(i - j) == 1:
                record("Serre E%d^2 E%d" % (i, j), _serre_terms("E", i, j, conv))
                record("Serre F%d^2 F%d" % (i, j), _serre_terms("F", i, j, conv))
            elif i < j:
                for kind in "EF":
                    record("%s%d %s%d = %s%d %s%d" % (kind, i, kind, j, kind, j, kind, i),
                           [({0: 1}, UqWord([(kind, i), (kind, j)])),
                            ({0: -1}, UqWord([(kind, j), (kind, i)]))])
    status = "pass" if all(r["status"] == "pass" for r in rows) else "fail"
    return {"check": "uq_relations", "n": n, "m": m, "convention": conv, "status": status,
            "relations": rows, "note": TYPO_NOTE}


# ---------------------------------------------------------------- Hopf maps on A

class TensorPair:
    """Element of A (x) A stored as {(word, word): ScalarRat}."""

    __slots__ = ("terms", "N")

    def __init__(self, terms, N):
        self.terms = {k: c for k, c in terms.items() if c}
        self.N = N

    def pairs(self):
        for (w1, w2), c in sorted(self.terms.items()):
            yield NCPoly.word(w1, self.N, c), NCPoly.word(w2, self.N)

    def __eq__(self, other):
        return isinstance(other, TensorPair) and self.terms == other.terms


def coproduct_word(word, N):
    """Delta(u^{i1}_{j1}...u^{im}_{jm}) = sum_K u^I_K (x) u^K_J as a list of word pairs."""
    rows_cols = [gpair(g, N) for g in word]
    out = []
    for ks in product(range(1, N + 1), repeat=len(word)):
        left = tuple(gidx(i, k, N) for (i, _), k in zip(rows_cols, ks))
        right = tuple(gidx(k, j, N) for (_, j), k in zip(rows_cols, ks))
        out.append((left, right))
    return out


def coproduct(a):
    out = {}
    for w, c in a.terms.items():
        for pair in coproduct_word(w, a.N):
            v = out.get(pair, ZERO) + c
            if v:
                out[pair] = v
            else:
                out.pop(pair, None)
    return TensorPair(out, a.N)


def counit_word(word, N):
    return ONE if all(gpair(g, N)[0] == gpair(g, N)[1] for g in word) else ZERO


def counit(a):
    total = ZERO
    for w, c in a.terms.items():
        if counit_word(w, a.N):
            total = total + c
    return total


def antipode(a):
    """Anti-homomorphic extension of S(u^i_j) = (-q)^(i-j) * cofactor."""
    N = a.N
    out = NCPoly.zero(N)
    for w, c in a.terms.items():
        term = NCPoly.const(c, N)
        for g in reversed(w):
            term = term * antipode_gen(*gpair(g, N), N)
        out = out + term
    return out


def tensor_normal_form(t, pres):
    out = {}
    for (w1, w2), c in t.terms.items():
        for v1, c1 in pres.nf_word(w1).items():
            for v2, c2 in pres.nf_word(w2).items():
                key = (v1, v2)
                v = out.get(key, ZERO) + c * c1 * c2
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return TensorPair(out, t.N)


def tensor_mul(t1, t2):
    out = {}
    for (a1, b1), c1 in t1.terms.items():
        for (a2, b2), c2 in t2.terms.items():
            key = (a1 + a2, b1 + b2)
            v = out.get(key, ZERO) + c1 * c2
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    return TensorPair(out, t1.N)


def counit_left(t):
    """(counit (x) id)(t)."""
    out = NCPoly.zero(t.N)
    for (w1, w2), c in t.terms.items():
        e = counit_word(w1, t.N)
        if e:
            out = out + NCPoly.word(w2, t.N, c * e)
    return out


def counit_right(t):
    out = NCPoly.zero(t.N)
    for (w1, w2), c in t.terms.items():
        e = counit_word(w2, t.N)
        if e:
            out = out + NCPoly.word(w1, t.N, c * e)
    return out


def antipode_left_mult(t):
    """m(S (x) id)(t) as an unnormalized NCPoly."""
    N = t.N
    out = NCPoly.zero(N)
    for (w1, w2), c in t.terms.items():
        out = out + antipode(NCPoly.word(w1, N, c)) * NCPoly.word(w2, N)
    return out


def antipode_right_mult(t):
    N = t.N
    out = NCPoly.zero(N)
    for (w1, w2), c in t.terms.items():
        out = out + NCPoly.word(w1, N, c) * antipode(NCPoly.word(w2, N))
    return out


# ---------------------------------------------------------------- pairing oracle

def pairing_eval(a, X, conv=CERTIFIED_CONVENTION, _cache=None):
    """<a, X> for an NCPoly a and a UqWord X."""
    N = a.N
    out = ZERO
    cache = {} if _cache is None else _cache
    for w, c in a.terms.items():
        rc = [gpair(g, N) for g in w]
        rows = tuple(i for i, _ in rc)
        cols = tuple(j for _, j in rc)
        key = (X.letters, cols, conv)
        vec = cache.get(key)
        if vec is None:
            vec = act_word(X, cols, conv)
            cache[key] = vec
        coef = vec.get(rows)
        if coef:
            out = out + c * ScalarRat.from_laurent({e * N: v for e, v in coef.items()})
    return out


def pbw_words(n, degree_bound):
    """Triangular-ordered U_q words F-word . K-monomial . E-word up to the degree bound.

    By the triangular decomposition U = U^- U^0 U^+ these span the part of U_q of
    that degree. F- and E-words are all ordered words (sorted products alone miss,
    e.g., F_3 F_2 F_1, which is needed to separate u^4_1 from 0).
    """
    fs = [("F", i) for i in range(1, n + 1)]
    es = [("E", i) for i in range(1, n + 1)]
    ks = [(kind, i) for i in range(1, n + 1) for kind in "Kk"]
    out = []
    for total in range(degree_bound + 1):
        for nf in range(total + 1):
            for nk in range(total - nf + 1):
                ne = total - nf - nk
                for fpart in product(fs, repeat=nf):
                    for kpart in combinations_with_replacement(ks, nk):
                        idx = [i for _, i in kpart]
                        kinds = {(kind, i) for kind, i in kpart}
                        if any(("K", i) in kinds and ("k", i) in kinds for i in idx):
                            continue
                        for epart in product(es, repeat=ne):
                            out.append(UqWord(fpart + kpart + epart))
    return out


def _weight_of_word(X, N):
    """Net shift of the row index multiset produced by X (E lowers the index)."""
    shift = [0] * (N + 1)
    for kind, i in X.letters:
        if kind == "E":
            shift[i] += 1
            shift[i + 1] -= 1
        elif kind == "F":
            shift[i] -= 1
            shift[i + 1] += 1
    return tuple(shift[1:])


def _weight_of_a_word(w, N):
    shift = [0] * (N + 1)
    for g in w:
        i, j = gpair(g, N)
        shift[i] += 1
        shift[j] -= 1
    return tuple(shift[1:])


def oracle_witness(a, b, degree_bound, conv=CERTIFIED_CONVENTION, words=None):
    """First PBW word on which a and b pair differently, or None."""
    d = a - b
    if d.is_zero():
        return None
    n = a.N - 1
    if words is None:
        words = pbw_words(n, degree_bound)
    weights = {_weight_of_a_word(w, a.N) for w in d.terms}
    cache = {}
    for X in words:
        if _weight_of_word(X, a.N) not in weights:
            continue
        v = pairing_eval(d, X, conv, cache)
        if v:
            return X, v
    return None


def oracle_equal(a, b, degree_bound, conv=CERTIFIED_CONVENTION, words=None):
    return oracle_witness(a, b, degree_bound, conv, words) is None


def certify_presentation(pres, degree_bound=3):
    """Check every defining relation against the pairing oracle.

    The stated convention (c = +1) is tried first and the alternate
    (q <-> q^-1, c = -1) second; both outcomes are reported.
    """
    words = pbw_words(pres.n, degree_bound)
    attempts = []
    chosen = None
    for conv in (1, -1):
        failures = []
        for name, r in pres.relations():
            wit = oracle_witness(r, NCPoly.zero(pres.N), degree_bound, conv, words)
            if wit is not None:
                failures.append({"relation": name, "word": wit[0].text(),
                                 "value": wit[1].to_text("q", pres.n)})
        attempts.append({"convention": conv, "status": "pass" if not failures else "fail",
                         "failures": failures[:5], "failure_count": len(failures)})
        if not failures and chosen is None:
            chosen = conv
    return {"check": "presentation_oracle", "n": pres.n,
            "status": "pass" if chosen is not None else "fail",
            "convention": chosen, "attempts": attempts}


def _height(word, N):
    """Number of E/F letters needed before the pairing can see the word."""
    return sum(abs(g // N - g % N) for g in word)


def _reachable_word(rng, N, degree_bound):
    while True:
        w = random_word(rng, N, 2)
        if _height(w, N) <= degree_bound:
            return w


def oracle_agreement(pres, samples, degree_bound, rng):
    """Compare normal-form equality with the pairing oracle on seeded random pairs.

    Half the pairs differ by a multiple of a defining relation (equal), half by a
    word whose height is within the oracle's degree bound (unequal).
    """
    N = pres.N
    words = pbw_words(pres.n, degree_bound)
    rels = [r for _, r in pres.relations()]
    disagreements = []
    unequal = 0
    for i in range(samples):
        a = random_poly(rng, N)
        if i % 2 == 0:
            b = a + random_poly(rng, N, 1, 1) * rng.choice(rels) * random_poly(rng, N, 1, 1)
        else:
            b = a + NCPoly.word(_reachable_word(rng, N, degree_bound), N)
        by_nf = pres.equal(a, b)
        by_oracle = oracle_equal(pres.normal_form(a), pres.normal_form(b), degree_bound, words=words)
        unequal += not by_nf
        if by_nf != by_oracle:
            disagreements.append("%s vs %s" % (a.to_text(), b.to_text()))
    rec = {"check": "oracle_agreement", "n": pres.n, "samples": samples, "unequal_pairs": unequal,
           "status": "pass" if not disagreements else "fail"}
    if disagreements:
        rec["witness"] = disagreements[:3]
    return rec


def verify_hopf_axioms(pres, words):
    """Counit and antipode axioms on the given words, each compared in normal form."""
    N = pres.N
    failures = []
    for w in words:
        a = NCPoly.word(w, N)
        delta = coproduct(a)
        eps = NCPoly.const(counit(a), N)
        checks = (("(counit x id)Delta", counit_left(delta), a),
                  ("(id x counit)Delta", counit_right(delta), a),
                  ("m(S x id)Delta", antipode_left_mult(delta), eps),
                  ("m(id x S)Delta", antipode_right_mult(delta), eps))
        for name, lhs, rhs in checks:
            d = pres.normal_form(lhs - rhs)
            if d:
                failures.append({"axiom": name, "word": word_text(w, N), "difference": d.to_text()})
    return {"check": "hopf_axioms", "n": pres.n, "words": len(words),
            "status": "pass" if not failures else "fail", "failures": failures[:5]}


def z_eigenvalue(word, N, conv=CERTIFIED_CONVENTION):
    """Eigenvalue of the right action of Z = K_1^n K_2^(n-1)...K_n on a word."""
    n = N - 1
    Z = UqWord([("K", i) for i in range(1, n + 1) for _ in range(n + 1 - i)])
    cols = [gpair(g, N)[1] for g in word]
    diag = NCPoly.word(tuple(gidx(j, j, N) for j in cols), N)
    return pairing_eval(diag, Z, conv)


__all__ = [
    "UqWord", "fundamental_rep", "verify_uq_relations", "coproduct", "counit", "antipode",
    "pairing_eval", "oracle_equal", "oracle_witness", "pbw_words", "certify_presentation",
    "TensorPair", "tensor_normal_form", "tensor_mul", "counit_left", "counit_right",
    "antipode_left_mult", "antipode_right_mult", "coproduct_word", "counit_word",
    "tensor_matrix", "z_eigenvalue", "verify_hopf_axioms", "oracle_agreement", "CERTIFIED_CONVENTION", "TYPO_NOTE",
]
