"""Verification pipelines for the holomorphic derivative of z_1^k and its curvature coefficient.

P(f) = proj10(unit_d(f)) is the (1,0)-part of df presented in A (x) Lambda.
Every check returns a VerificationReport; a failing report carries the
nonzero difference as its witness.
"""

import time

from .hkcalc import Calculus, LambdaVec, OneFormRep, load_or_solve
from .ncalg import NCPoly, antipode_gen, build_presentation, degree, gidx, z, zbar
from .qscalar import ONE, ScalarRat, qint_round, spow

_CALCULI = {}


def get_calculus(n, cache_dir=None):
    key = (n, str(cache_dir) if cache_dir else None)
    calc = _CALCULI.get(key)
    if calc is None:
        pres = build_presentation(n)
        calc = Calculus(pres, load_or_solve(pres, cache_dir))
        _CALCULI[key] = calc
    return calc


class VerificationReport:
    """Outcome of one check. A pass never carries a witness; a fail always does."""

    def __init__(self, check, n, k, status, coefficient=None, witness=None,
                 expected=None, notes=None, wall_time=0.0):
        if status not in ("pass", "fail"):
            raise ValueError("status must be pass or fail")
        if status == "pass" and witness is not None:
            raise ValueError("a passing report has no witness")
        if status == "fail" and witness is None:
            raise ValueError("a failing report needs a witness")
        self.check = check
        self.n = n
        self.k = k
        self.status = status
        self.coefficient = coefficient
        self.expected = expected
        self.witness = witness
        self.notes = dict(notes or {})
        self.wall_time = wall_time

    @property
    def passed(self):
        return self.status == "pass"

    def key(self):
        return (self.check, self.n if self.n is not None else -1, self.k if self.k is not None else -1)

    def to_json(self, include_time=False):
        out = {"check": self.check, "n": self.n, "k": self.k, "status": self.status}
        if self.coefficient is not None:
            out["coefficient"] = self.coefficient.to_text()
        if self.expected is not None:
            out["expected"] = self.expected.to_text()
        if self.witness is not None:
            out["witness"] = self.witness
        if self.notes:
            out["notes"] = self.notes
        if include_time:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def summary_line(self):
        parts = ["%-4s" % self.status.upper(), self.check]
        if self.n is not None:
            parts.append("n=%d" % self.n)
        if self.k is not None:
            parts.append("k=%d" % self.k)
        if self.coefficient is not None:
            parts.append("coefficient=%s" % self.coefficient.to_text())
        if self.expected is not None and self.status == "fail":
            parts.append("expected=%s" % self.expected.to_text())
        return " ".join(parts)

    def __repr__(self):
        return "VerificationReport(%s)" % self.summary_line()


def _report(check, n, k, diff, start, **kw):
    ok = diff is None or (hasattr(diff, "is_zero") and diff.is_zero())
    witness = None
    if not ok:
        witness = diff if isinstance(diff, str) else diff.to_text()
    return VerificationReport(check, n, k, "pass" if ok else "fail", witness=witness,
                              wall_time=time.perf_counter() - start, **kw)


class HoloDeriv:
    """P(f) = (id (x) Pi^(1,0))(unit_d(f)); only e+ coordinates are ever nonzero."""

    def __init__(self, value, calc):
        if not calc.proj10(value) == value:
            raise ValueError("HoloDeriv must have no vertical or (0,1) components")
        self.value = value

    def is_zero(self):
        return self.value.is_zero()

    def __eq__(self, other):
        return isinstance(other, HoloDeriv) and self.value == other.value

    def to_text(self):
        return self.value.to_text()

    def __repr__(self):
        return "HoloDeriv(%s)" % self.to_text()


def holo_derivative(f, calc=None):
    calc = calc or get_calculus(f.N - 1)
    return HoloDeriv(calc.proj10(calc.unit_d(calc.pres.normal_form(f))), calc)


def _P(calc, f):
    return calc.proj10(calc.unit_d(calc.pres.normal_form(f)))


def _z1_power(calc, k):
    return calc.pres.normal_form(z(1, calc.N) ** k)


def proportionality(target, base):
    """The scalar c with target = c * base, or None if there is none."""
    if base.is_zero():
        return None if not target.is_zero() else ONE
    w, v = min(base.terms.items(), key=lambda t: (len(t[0]), t[0]))
    idx = v.support()[0]
    tv = target.terms.get(w)
    c = tv.coords[idx] / v.coords[idx] if tv is not None else ScalarRat(0)
    if (target - base.scale(c)).is_zero():
        return c
    return None


def verify_commutation(n, base_exp=2, calc=None):
    """z_1 . P(z_1) = s^base_exp * P(z_1) . z_1, with z_1 acting on the A-factor on the left."""
    start = time.perf_counter()
    calc = calc or get_calculus(n)
    z1 = z(1, calc.N)
    pz = _P(calc, z1)
    lhs = calc.left_mult(z1, pz)
    rhs = calc.right_mult(pz, z1)
    diff = lhs - rhs.scale(spow(base_exp))
    return _report("commutation", n, None, diff, start, expected=spow(base_exp),
                   coefficient=proportionality(lhs, rhs))


def verify_lemma(n, k, base_exp=2, calc=None):
    """P(z_1^k) = (k)_{s^base_exp} * P(z_1) . z_1^(k-1).

    The reported coefficient is the observed ratio (None if P(z_1^k) is not a
    multiple of P(z_1) . z_1^(k-1)).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    start = time.perf_counter()
    calc = calc or get_calculus(n)
    z1 = z(1, calc.N)
    expected = qint_round(k, base_exp)
    pk = _P(calc, _z1_power(calc, k))
    base = calc.right_mult(_P(calc, z1), _z1_power(calc, k - 1))
    diff = pk - base.scale(expected)
    return _report("lemma", n, k, diff, start, expected=expected,
                   coefficient=proportionality(pk, base))


def verify_leibniz_recursion(n, k, calc=None):
    """P(z_1^(k+1)) = P(z_1^k) . z_1 + z_1^k . P(z_1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    start = time.perf_counter()
    calc = calc or get_calculus(n)
    z1 = z(1, calc.N)
    zk = _z1_power(calc, k)
    lhs = _P(calc, _z1_power(calc, k + 1))
    rhs = calc.right_mult(_P(calc, zk), z1) + calc.left_mult(zk, _P(calc, z1))
    return _report("leibniz_recursion", n, k, lhs - rhs, start)


def verify_holomorphic(n, k, calc=None):
    """proj01(unit_d(z_1^k)) = 0 and proj01(unit_d(z_i)) = 0 for every i."""
    start = time.perf_counter()
    calc = calc or get_calculus(n)
    total = calc.proj01(calc.unit_d(_z1_power(calc, k)))
    for i in range(1, calc.N + 1):
        part = calc.proj01(calc.unit_d(z(i, calc.N)))
        if part:
            return _report("holomorphic", n, k, "proj01(unit_d(z_%d)) = %s" % (i, part.to_text()), start)
    return _report("holomorphic", n, k, total, start)


def antiholomorphic_witness(n, calc=None):
    """proj01(unit_d(zbar_1)); expected nonzero (negative control for verify_holomorphic)."""
    calc = calc or get_calculus(n)
    return calc.proj01(calc.unit_d(calc.pres.normal_form(zbar(1, calc.N))))


def verify_decomposition(n, k, calc=None):
    """sum_i P(u^1_1 S(u^1_i)) . u^i_1 z_1^(k-1) = P(z_1) . z_1^(k-1), with each u^1_1 S(u^1_i) of degree 0."""
    start = time.perf_counter()
    calc = calc or get_calculus(n)
    N = calc.N
    pres = calc.pres
    zk1 = _z1_power(calc, k - 1)
    lhs = OneFormRep.zero(N)
    for i in range(1, N + 1):
        b = pres.normal_form(NCPoly.gen(1, 1, N) * antipode_gen(1, i, N))
        deg = degree(b)
        if deg not in (0,) and b:
            return _report("decomposition", n, k, "degree(u[1,1] S(u[1,%d])) = %s" % (i, deg), start)
        lhs = lhs + calc.right_mult(_P(calc, b), pres.normal_form(NCPoly.gen(i, 1, N) * zk1))
    rhs = calc.right_mult(_P(calc, z(1, N)), zk1)
    return _report("decomposition", n, k, lhs - rhs, start)


def curvature_coefficient(n, k, base_exp=-2, calc=None):
    """The scalar c with P(z_1^k) = c * z_1^(k-1) . P(z_1), checked against (k)_{s^base_exp}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    start = time.perf_counter()
    calc = calc or get_calculus(n)
    expected = qint_round(k, base_exp)
    pk = _P(calc, _z1_power(calc, k))
    base = calc.left_mult(_z1_power(calc, k - 1), _P(calc, z(1, calc.N)))
    c = proportionality(pk, base)
    if c is None:
        return _report("curvature_coefficient", n, k,
                       "no scalar: P(z_1^k) = %s" % pk.to_text(), start, expected=expected)
    diff = None if c == expected else "coefficient %s != expected %s" % (c.to_text(), expected.to_text())
    notes = {"classical_limit": str(c.evaluate(1))}
    return _report("curvature_coefficient", n, k, diff, start, coefficient=c,
                   expected=expected, notes=notes)


def verify_qint_conversion(k, t):
    """(k)_beta * beta^(1-k) = (k)_{beta^-1} with beta = s^t."""
    if t == 0 or k < 1:
        raise ValueError("need t != 0 and k >= 1")
    start = time.perf_counter()
    lhs = qint_round(k, t) * spow(t * (1 - k))
    rhs = qint_round(k, -t)
    diff = None if lhs == rhs else "%s != %s" % (lhs.to_text(), rhs.to_text())
    return _report("qint_conversion", None, k, diff, start, coefficient=lhs,
                   notes={"t": t})


def verify_action_table(n, table=None, calc=None):
    """The class map and the action kill every defining relation, and e0 < z_1 lies in C e0."""
    start = time.perf_counter()
    pres = build_presentation(n)
    if table is not None:
        calc = Calculus(pres, table)
    calc = calc or get_calculus(n)
    bad = calc.relation_witnesses()
    if bad:
        name, where, vec = bad[0]
        return _report("action_table", n, None, "%s: %s = %s (%d failing)" % (
            name, where, vec.to_text(), len(bad)), start)
    e0 = LambdaVec.basis(n, n)
    img = calc.act_word(e0, (gidx(1, 1, calc.N),))
    if img.support() not in ([], [n]):
        return _report("action_table", n, None, "e0 < z_1 = %s" % img.to_text(), start)
    return _report("action_table", n, None, None, start,
                   notes={"e0<z1": img.to_text()})


__all__ = [
    "VerificationReport", "HoloDeriv", "holo_derivative", "verify_commutation", "verify_lemma",
    "verify_leibniz_recursion", "verify_holomorphic", "verify_decomposition",
    "curvature_coefficient", "verify_qint_conversion", "verify_action_table",
    "antiholomorphic_witness", "get_calculus", "proportionality",
]
