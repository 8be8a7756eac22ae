"""First-order calculus data: the space Lambda, its right A-action, and one-forms.

Lambda has the ordered basis (e+_1..e+_n, e0, e-_1..e-_n) with
e+_i = [d u^(i+1)_1], e0 = [d u^1_1], e-_i = [d u^1_(i+1)]. The class map
delbar(a) = [da] obeys delbar(xy) = delbar(x) < y + counit(x) delbar(y).

The pair (counit, delbar) together with the right action on Lambda is an
algebra representation of A on C + Lambda by block upper-triangular matrices
(row-vector convention), so a candidate table is consistent exactly when every
defining relation maps to the zero matrix. solve_e0_action builds this system
with the unknown entries as variables and eliminates linear equations until
the table is determined.
"""

import json
import os
from pathlib import Path

from .hopf import coproduct_word, counit_word
from .ncalg import NCPoly, gidx, gpair, word_text
from .qscalar import ONE, ZERO, ScalarRat, as_scalar, spow

SCHEMA = "qcurv.actiontable/1"
SOLVER_VERSION = "2"


# ---------------------------------------------------------------- Lambda

def plus_index(i, n):
    return i - 1


def zero_index(n):
    return n


def minus_index(i, n):
    return n + i


def basis_labels(n):
    return (["e+%d" % i for i in range(1, n + 1)] + ["e0"]
            + ["e-%d" % i for i in range(1, n + 1)])


class LambdaVec:
    """Coordinates in the basis (e+_1..e+_n, e0, e-_1..e-_n)."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = tuple(as_scalar(c) for c in coords)
        if len(coords) % 2 != 1:
            raise ValueError("LambdaVec must have odd length 2n+1")
        self.coords = coords

    @classmethod
    def _raw(cls, coords):
        v = cls.__new__(cls)
        v.coords = coords
        return v

    @classmethod
    def zero(cls, n):
        return cls._raw((ZERO,) * (2 * n + 1))

    @classmethod
    def basis(cls, n, idx, coeff=ONE):
        c = [ZERO] * (2 * n + 1)
        c[idx] = as_scalar(coeff)
        return cls._raw(tuple(c))

    @property
    def n(self):
        return (len(self.coords) - 1) // 2

    def is_zero(self):
        return not any(self.coords)

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        return isinstance(other, LambdaVec) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __add__(self, other):
        return LambdaVec._raw(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return LambdaVec._raw(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return LambdaVec._raw(tuple(-a for a in self.coords))

    def scale(self, c):
        c = as_scalar(c)
        return LambdaVec._raw(tuple(a * c for a in self.coords))

    def masked(self, keep):
        return LambdaVec._raw(tuple(c if i in keep else ZERO for i, c in enumerate(self.coords)))

    def support(self):
        return [i for i, c in enumerate(self.coords) if c]

    def to_text(self):
        labels = basis_labels(self.n)
        parts = []
        for lab, c in zip(labels, self.coords):
            if c:
                ct = c.to_text()
                parts.append(lab if ct == "1" else "(%s)*%s" % (ct, lab))
        return " + ".join(parts) or "0"

    def __repr__(self):
        return "LambdaVec(%s)" % self.to_text()

    def to_json(self):
        return [c.to_json() for c in self.coords]

    @classmethod
    def from_json(cls, obj):
        return cls([ScalarRat.from_json(c) for c in obj])


def _diag_exponent_s(i, k, n):
    """Exponent of s in e+-_i < u^k_k = q^(delta_{i+1,k} + delta_{1,k} - 2/(n+1))."""
    N = n + 1
    return N * ((1 if i + 1 == k else 0) + (1 if k == 1 else 0)) - 2


def known_action(n):
    """The known e+- rows: diagonal scalars, zero off the diagonal."""
    N = n + 1
    table = {}
    for i in range(1, n + 1):
        for b in (plus_index(i, n), minus_index(i, n)):
            for k in range(1, N + 1):
                for l in range(1, N + 1):
                    g = gidx(k, l, N)
                    if k == l:
                        table[(b, g)] = LambdaVec.basis(n, b, spow(_diag_exponent_s(i, k, n)))
                    else:
                        table[(b, g)] = LambdaVec.zero(n)
    return table


def base_delbar(n):
    """delbar on the generators whose classes define the basis."""
    N = n + 1
    out = {gidx(1, 1, N): LambdaVec.basis(n, zero_index(n))}
    for i in range(1, n + 1):
        out[gidx(i + 1, 1, N)] = LambdaVec.basis(n, plus_index(i, n))
        out[gidx(1, i + 1, N)] = LambdaVec.basis(n, minus_index(i, n))
    return out


class ActionTable:
    """Right action of the generators on Lambda plus delbar of every generator."""

    def __init__(self, n, entries, delbar_gens, meta=None):
        self.n = n
        self.entries = dict(entries)
        self.delbar_gens = dict(delbar_gens)
        self.meta = dict(meta or {})

    def get(self, b, g):
        return self.entries[(b, g)]

    def __eq__(self, other):
        return (isinstance(other, ActionTable) and self.n == other.n
                and self.entries == other.entries and self.delbar_gens == other.delbar_gens)

    def perturbed(self, b, g, coord, delta):
        """Copy with one coordinate of one entry shifted by delta (negative controls)."""
        entries = dict(self.entries)
        v = list(entries[(b, g)].coords)
        v[coord] = v[coord] + as_scalar(delta)
        entries[(b, g)] = LambdaVec(v)
        meta = dict(self.meta, perturbed=[b, g, coord])
        return ActionTable(self.n, entries, self.delbar_gens, meta)

    def to_json(self, convention_hash=""):
        N = self.n + 1
        return {
            "schema": SCHEMA,
            "n": self.n,
            "convention_hash": convention_hash,
            "meta": self.meta,
            "entries": [{"basis": b, "gen": list(gpair(g, N)), "value": v.to_json()}
                        for (b, g), v in sorted(self.entries.items())],
            "delbar": [{"gen": list(gpair(g, N)), "value": v.to_json()}
                       for g, v in sorted(self.delbar_gens.items())],
        }

    @classmethod
    def from_json(cls, obj):
        n = obj["n"]
        N = n + 1
        entries = {(e["basis"], gidx(*e["gen"], N)): LambdaVec.from_json(e["value"])
                   for e in obj["entries"]}
        delbar = {gidx(*e["gen"], N): LambdaVec.from_json(e["value"]) for e in obj["delbar"]}
        return cls(n, entries, delbar, obj.get("meta"))


# ---------------------------------------------------------------- sparse multivariate polys
# A polynomial in the unknowns is {monomial: ScalarRat} with monomials sorted
# tuples of variable ids; () is the constant monomial.

def _mp_add_into(target, poly, scale=None):
    for m, c in poly.items():
        if scale is not None:
            c = c * scale
        v = target.get(m)
        v = c if v is None else v + c
        if v:
            target[m] = v
        else:
            target.pop(m, None)


def _mp_mul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
            v = out.get(m)
            p = c1 * c2
            v = p if v is None else v + p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _mp_degree(p):
    return max((len(m) for m in p), default=0)


def _mp_subst(p, sub):
    """Substitute affine expressions for variables."""
    out = {}
    for m, c in p.items():
        if not any(v in sub for v in m):
            _mp_add_into(out, {m: c})
            continue
        term = {(): c}
        for v in m:
            term = _mp_mul(term, sub.get(v, {(v,): ONE}))
        _mp_add_into(out, term)
    return out


def _mat_mul(A, B):
    """Sparse matrices {(i, j): poly}."""
    rows_b = {}
    for (k, j), v in B.items():
        rows_b.setdefault(k, []).append((j, v))
    out = {}
    for (i, k), a in A.items():
        for j, b in rows_b.get(k, ()):
            cell = out.setdefault((i, j), {})
            _mp_add_into(cell, _mp_mul(a, b))
    return {key: v for key, v in out.items() if v}


class InconsistentSystem(ArithmeticError):
    def __init__(self, relation, detail):
        super().__init__("action table inconsistent at relation %s: %s" % (relation, detail))
        self.relation = relation
        self.detail = detail


class Underdetermined(ArithmeticError):
    def __init__(self, free, residual):
        super().__init__("action table underdetermined; free unknowns: %s" % ", ".join(free))
        self.free = free
        self.residual = residual


class _Elim:
    """Online Gaussian elimination over Q(s) for affine equations."""

    def __init__(self):
        self.pivots = {}

    def reduce(self, eq):
        out = {}
        for m, c in eq.items():
            if len(m) == 1 and m[0] in self.pivots:
                _mp_add_into(out, self.pivots[m[0]], c)
            else:
                _mp_add_into(out, {m: c})
        return out

    def add(self, eq, name):
        eq = self.reduce(eq)
        if not eq:
            return False
        lin = [m[0] for m in eq if len(m) == 1]
        if not lin:
            raise InconsistentSystem(name, "nonzero constant %s" % eq[()].to_text())
        v = min(lin)
        c = eq[(v,)]
        expr = {}
        inv = -c.inverse()
        for m, val in eq.items():
            if m != (v,):
                expr[m] = val * inv
        for p, pexpr in self.pivots.items():
            if (v,) in pexpr:
                k = pexpr.pop((v,))
                _mp_add_into(pexpr, expr, k)
        self.pivots[v] = expr
        return True


class _System:
    def __init__(self, pres, mode, pin_submodule):
        self.pres = pres
        self.n = n = pres.n
        self.N = N = n + 1
        self.dim = 2 * n + 1
        self.names = []
        self.mode = mode
        self.pin_submodule = pin_submodule
        known = known_action(n)
        base = base_delbar(n)
        self.mats = {}
        for k in range(1, N + 1):
            for l in range(1, N + 1):
                g = gidx(k, l, N)
                M = {}
                if k == l:
                    M[(0, 0)] = {(): ONE}
                if g in base:
                    for c in base[g].support():
                        M[(0, c + 1)] = {(): base[g].coords[c]}
                elif mode == "extended":
                    for c in range(self.dim):
                        M[(0, c + 1)] = self._var("delbar(u[%d,%d])_%s" % (k, l, basis_labels(n)[c]))
                for i in range(1, n + 1):
                    for b in (plus_index(i, n), minus_index(i, n)):
                        levi_off = k != l and k >= 2 and l >= 2
                        if mode == "extended" and levi_off:
                            for c in range(self.dim):
                                M[(b + 1, c + 1)] = self._var("%s<u[%d,%d]_%s" % (
                                    basis_labels(n)[b], k, l, basis_labels(n)[c]))
                        else:
                            for c in known[(b, g)].support():
                                M[(b + 1, c + 1)] = {(): known[(b, g)].coords[c]}
                z0 = zero_index(n)
                for c in range(self.dim):
                    if pin_submodule and (k, l) == (1, 1) and c != z0:
                        continue
                    M[(z0 + 1, c + 1)] = self._var("e0<u[%d,%d]_%s" % (k, l, basis_labels(n)[c]))
                self.mats[g] = M
        self.elim = _Elim()

    def _var(self, name):
        self.names.append(name)
        return {(len(self.names) - 1,): ONE}

    def substitution(self):
        return self.elim.pivots

    def current(self, g):
        sub = self.substitution()
        return {key: p2 for key, p in self.mats[g].items() if (p2 := _mp_subst(p, sub))}

    def relation_matrix(self, r, cur):
        total = {}
        for w, c in r.terms.items():
            if not w:
                M = {(i, i): {(): ONE} for i in range(self.dim + 1)}
            else:
                M = cur[w[0]]
                for g in w[1:]:
                    M = _mat_mul(M, cur[g])
            for key, p in M.items():
                cell = total.setdefault(key, {})
                _mp_add_into(cell, p, c)
        return {k: v for k, v in total.items() if v}

    def solve(self, relations, max_rounds=50):
        residual = []
        for _ in range(max_rounds):
            cur = {g: self.current(g) for g in self.mats}
            progress = False
            residual = []
            for name, r in relations:
                for key, p in sorted(self.relation_matrix(r, cur).items()):
                    p = self.elim.reduce(p)
                    if not p:
                        continue
                    if _mp_degree(p) <= 1:
                        if self.elim.add(p, name):
                            progress = True
                    else:
                        residual.append((name, key, p))
            if not progress:
                break
        return residual

    def free_variables(self):
        used = set()
        for g, M in self.mats.items():
            for p in M.values():
                for m in p:
                    used.update(m)
        return sorted(v for v in used if v not in self.elim.pivots)

    def value(self, p):
        p = _mp_subst(p, self.substitution())
        if any(m for m in p):
            return None
        return p.get((), ZERO)


def solve_e0_action(pres, mode="extended", pin_submodule=True):
    """Derive the unknown rows of the action table from the defining relations.

    mode="literal": only the e0 rows are unknown; delbar(u^k_l) = 0 for k, l >= 2
    and the e+- rows are exactly known_action.
    mode="extended": additionally delbar(u^k_l) for k, l >= 2 and the off-diagonal
    Levi entries e+-_i < u^k_l (k != l, k, l >= 2) are unknowns; the diagonal
    entries and every entry involving row or column 1 stay as printed.
    pin_submodule imposes e0 < u^1_1 in C e0 (the C<z_1>-submodule claim).
    """
    n = pres.n
    system = _System(pres, mode, pin_submodule)
    rels = pres.relations()
    quad = [r for r in rels if r[0] != "det_q = 1"]
    system.solve(quad)
    residual = system.solve(rels)
    free = system.free_variables()
    if free or residual:
        raise Underdetermined([system.names[v] for v in free],
                              [(name, key) for name, key, _ in residual])
    entries = {}
    delbar = {}
    for g, M in system.mats.items():
        d = [system.value(M.get((0, c + 1), {})) for c in range(system.dim)]
        delbar[g] = LambdaVec(d)
        for b in range(system.dim):
            entries[(b, g)] = LambdaVec([system.value(M.get((b + 1, c + 1), {}))
                                         for c in range(system.dim)])
    meta = {"mode": mode, "pin_submodule": pin_submodule, "unknowns": len(system.names),
            "solver_version": SOLVER_VERSION}
    return ActionTable(n, entries, delbar, meta)


def free_directions(pres, mode="extended", pin_submodule=False):
    """Names of unknowns left undetermined (empty list if the table is determined)."""
    try:
        solve_e0_action(pres, mode, pin_submodule)
    except Underdetermined as exc:
        return exc.free
    return []


# ---------------------------------------------------------------- cache

def _cache_path(cache_dir, n, conv_hash, mode):
    return Path(cache_dir) / ("actiontable_n%d_%s_%s.json" % (n, mode, conv_hash))


def load_or_solve(pres, cache_dir=None, mode="extended"):
    conv_hash = pres.convention_hash() + "-" + SOLVER_VERSION
    if cache_dir:
        path = _cache_path(cache_dir, pres.n, conv_hash, mode)
        if path.exists():
            obj = json.loads(path.read_text())
            if obj.get("schema") == SCHEMA and obj.get("convention_hash") == conv_hash:
                return ActionTable.from_json(obj)
    table = solve_e0_action(pres, mode)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = _cache_path(cache_dir, pres.n, conv_hash, mode)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(table.to_json(conv_hash), sort_keys=True))
        os.replace(tmp, path)
    return table


# ---------------------------------------------------------------- one-forms

class OneFormRep:
    """Element of A (x) Lambda stored as {normal word: LambdaVec}."""

    __slots__ = ("terms", "N", "n")

    def __init__(self, terms, N):
        self.N = N
        self.n = N - 1
        self.terms = {w: v for w, v in terms.items() if v}

    @classmethod
    def zero(cls, N):
        return cls({}, N)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, OneFormRep) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, v in other.terms.items():
            cur = out.get(w)
            out[w] = v if cur is None else cur + v
        return OneFormRep(out, self.N)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_scalar(c)
        return OneFormRep({w: v.scale(c) for w, v in self.terms.items()}, self.N)

    def pairs(self):
        """The (NCPoly, LambdaVec) pairs in monomial order."""
        for w, v in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            yield NCPoly.word(w, self.N), v

    def project(self, keep):
        return OneFormRep({w: v.masked(keep) for w, v in self.terms.items()}, self.N)

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for w, v in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0])):
            parts.append("%s (x) [%s]" % (word_text(w, self.N) or "1", v.to_text()))
        return " + ".join(parts)

    def __repr__(self):
        return "OneFormRep(%s)" % self.to_text()

    def to_json(self):
        return [{"word": [list(gpair(g, self.N)) for g in w], "vec": v.to_json()}
                for w, v in sorted(self.terms.items(), key=lambda t: (len(t[0]), t[0]))]


def _add_term(out, word, vec):
    cur = out.get(word)
    out[word] = vec if cur is None else cur + vec


class Calculus:
    """delbar, the unit map and A (x) Lambda arithmetic for a fixed presentation and table."""

    def __init__(self, pres, table):
        self.pres = pres
        self.table = table
        self.n = pres.n
        self.N = pres.N
        self.dim = 2 * self.n + 1
        self.zero_vec = LambdaVec.zero(self.n)
        self._rows = {}
        for (b, g), v in table.entries.items():
            self._rows[(b, g)] = v
        self._act = {}
        self._delbar = {}
        self.holo = set(range(0, self.n))
        self.vert = {self.n}
        self.antiholo = set(range(self.n + 1, self.dim))

    # -- action
    def act_gen(self, v, g):
        out = self.zero_vec
        for b, c in enumerate(v.coords):
            if c:
                out = out + self._rows[(b, g)].scale(c)
        return out

    def act_word(self, v, word):
        key = (v, word)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        out = v
        for g in word:
            if not out:
                break
            out = self.act_gen(out, g)
        self._act[key] = out
        return out

    def act(self, v, a):
        out = self.zero_vec
        for w, c in a.terms.items():
            out = out + self.act_word(v, w).scale(c)
        return out

    # -- delbar
    def delbar_word(self, word):
        word = tuple(word)
        hit = self._delbar.get(word)
        if hit is not None:
            return hit
        if not word:
            out = self.zero_vec
        else:
            out = self.act_word(self.table.delbar_gens[word[0]], word[1:])
            if counit_word(word[:1], self.N):
                out = out + self.delbar_word(word[1:])
        self._delbar[word] = out
        return out

    def delbar(self, a):
        out = self.zero_vec
        for w, c in a.terms.items():
            out = out + self.delbar_word(w).scale(c)
        return out

    delbar_class = delbar

    def relation_witnesses(self):
        """(relation, location, nonzero vector) for every relation not killed by (counit, delbar, action)."""
        bad = []
        for name, r in self.pres.relations():
            d = self.delbar(r)
            if d:
                bad.append((name, "delbar", d))
            for b in range(self.dim):
                v = self.act(LambdaVec.basis(self.n, b), r)
                if v:
                    bad.append((name, basis_labels(self.n)[b] + "<", v))
        return bad

    def factoring_defect(self, v, a, b):
        """(v < a) < b - v < NF(ab); zero when the action factors through the algebra."""
        lhs = self.act(self.act(v, a), b)
        rhs = self.act(v, self.pres.normal_form(a * b))
        return lhs - rhs

    # -- one-forms
    def _left_nf(self, word):
        return self.pres.nf_word(word)

    def unit_d(self, a):
        """sum a_(1) (x) delbar(a_(2))."""
        out = {}
        for w, c in a.terms.items():
            for left, right in coproduct_word(w, self.N):
                vec = self.delbar_word(right)
                if not vec:
                    continue
                vec = vec.scale(c)
                for lw, lc in self._left_nf(left).items():
                    _add_term(out, lw, vec.scale(lc))
        return OneFormRep(out, self.N)

    def right_mult(self, form, b):
        """(a (x) v) b = sum a b_(1) (x) v < b_(2)."""
        out = {}
        for u, v in form.terms.items():
            for w, c in b.terms.items():
                for left, right in coproduct_word(w, self.N):
                    vec = self.act_word(v, right)
                    if not vec:
                        continue
                    vec = vec.scale(c)
                    for lw, lc in self._left_nf(u + left).items():
                        _add_term(out, lw, vec.scale(lc))
        return OneFormRep(out, self.N)

    def left_mult(self, a, form):
        out = {}
        for w, c in a.terms.items():
            for u, v in form.terms.items():
                for lw, lc in self._left_nf(w + u).items():
                    _add_term(out, lw, v.scale(c * lc))
        return OneFormRep(out, self.N)

    def proj10(self, form):
        return form.project(self.holo)

    def proj01(self, form):
        return form.project(self.antiholo)

    def proj_vert(self, form):
        return form.project(self.vert)

    # -- unit inverse
    def lift_generator(self, idx):
        """Generator g whose differential represents basis vector idx."""
        n, N = self.n, self.N
        if idx < n:
            return gidx(idx + 2, 1, N)
        if idx == n:
            return gidx(1, 1, N)
        return gidx(1, idx - n + 1, N)

    def unit_inverse(self, form):
        """Formal one-form sum_g A_g d(g), from sum f S(g_(-1)) g_(0) with the basis lifts.

        Returned as {generator index: NCPoly coefficient}, coefficients normalized.
        """
        from .hopf import antipode
        N = self.N
        out = {}
        for u, v in form.terms.items():
            for idx, c in enumerate(v.coords):
                if not c:
                    continue
                i, j = gpair(self.lift_generator(idx), N)
                # Delta_L(d u^i_j) = sum_k u^i_k (x) d u^k_j
                for k in range(1, N + 1):
                    coeff = NCPoly.word(u, N, c) * antipode(NCPoly.gen(i, k, N))
                    g = gidx(k, j, N)
                    out[g] = out.get(g, NCPoly.zero(N)) + coeff
        result = {}
        for g, p in out.items():
            p = self.pres.normal_form(p)
            if p:
                result[g] = p
        return result

    def apply_unit(self, formal):
        """unit(sum_g A_g d(g)) = sum_g A_g . unit_d(g)."""
        total = OneFormRep.zero(self.N)
        for g, coeff in formal.items():
            total = total + self.left_mult(coeff, self.unit_d(NCPoly.word((g,), self.N)))
        return total


def build_calculus(pres, cache_dir=None):
    return Calculus(pres, load_or_solve(pres, cache_dir))


__all__ = [
    "LambdaVec", "ActionTable", "OneFormRep", "Calculus", "known_action", "base_delbar",
    "solve_e0_action", "free_directions", "load_or_solve", "build_calculus", "basis_labels",
    "plus_index", "zero_index", "minus_index", "InconsistentSystem", "Underdetermined",
]
