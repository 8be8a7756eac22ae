"""The nine acceptance criteria, one test each, each printing a single PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v` or directly as a script.
"""

import random
import sys

import pytest

from qcurv.curvature import (
    curvature_coefficient, get_calculus, verify_action_table, verify_commutation,
    verify_holomorphic, verify_lemma,
)
from qcurv.hkcalc import Calculus, LambdaVec, solve_e0_action
from qcurv.hopf import certify_presentation, oracle_agreement, verify_hopf_axioms, verify_uq_relations
from qcurv.ncalg import build_presentation, random_poly, random_word
from qcurv.qscalar import qint_round, scalar_identity_failures, spow

NS = (1, 2, 3)
KS = (1, 2, 3, 4)
GRID = [(n, k) for n in NS for k in KS]


def announce(number, title, failures, capsys=None):
    line = "%s criterion %d: %s" % ("FAIL" if failures else "PASS", number, title)
    if failures:
        line += " | " + "; ".join(failures[:4])
        if len(failures) > 4:
            line += "; ... (%d total)" % len(failures)
    if capsys is not None:
        with capsys.disabled():
            sys.stdout.write("\n" + line + "\n")
    else:
        print(line)
    return line


def criterion_1():
    bad = []
    for n, k in GRID:
        rep = verify_lemma(n, k)
        if not rep.passed or rep.coefficient != qint_round(k, 2):
            got = rep.coefficient.to_text() if rep.coefficient is not None else "none"
            bad.append("n=%d k=%d ratio %s != %s" % (n, k, got, qint_round(k, 2).to_text()))
    return "Lemma P(z1^k) = (k)_{s^2} P(z1) z1^(k-1)", bad


def criterion_2():
    bad = []
    for n in NS:
        rep = verify_commutation(n)
        if not rep.passed:
            bad.append("n=%d %s" % (n, rep.witness))
    return "z1 P(z1) = s^2 P(z1) z1", bad


def criterion_3():
    bad = []
    for n, k in GRID:
        rep = curvature_coefficient(n, k)
        if not rep.passed:
            got = rep.coefficient.to_text() if rep.coefficient is not None else "none"
            bad.append("n=%d k=%d coefficient %s != %s" % (n, k, got, rep.expected.to_text()))
        elif rep.coefficient.evaluate(1) != k:
            bad.append("n=%d k=%d classical limit %s" % (n, k, rep.coefficient.evaluate(1)))
    return "curvature coefficient (k)_{s^-2}, classical limit k", bad


def criterion_4():
    bad = ["n=%d k=%d" % (n, k) for n, k in GRID if not verify_holomorphic(n, k).passed]
    return "proj01(unit_d(z1^k)) = 0 and proj01(unit_d(z_i)) = 0", bad


def criterion_5():
    bad = []
    for n in NS:
        pres = build_presentation(n)
        table = solve_e0_action(pres)
        calc = Calculus(pres, table)
        rep = verify_action_table(n, table=table)
        if not rep.passed:
            bad.append("n=%d %s" % (n, rep.witness))
        rng = random.Random(500 + n)
        for _ in range(200):
            v = LambdaVec.basis(n, rng.randrange(2 * n + 1))
            a = random_poly(rng, n + 1, 2, 2)
            b = random_poly(rng, n + 1, 2, 2)
            if calc.factoring_defect(v, a, b):
                bad.append("n=%d factoring fails for %s, %s" % (n, a.to_text(), b.to_text()))
                break
    return "action table solved, relations killed, factoring, e0 < z1 in C e0", bad


def criterion_6():
    bad = []
    for n in NS:
        pres = build_presentation(n)
        cert = certify_presentation(pres, 3)
        if cert["status"] != "pass":
            bad.append("n=%d presentation not certified" % n)
        rep = oracle_agreement(pres, 100, 3, random.Random(600 + n))
        if rep["status"] != "pass":
            bad.append("n=%d %s" % (n, rep["witness"]))
    return "normal form equality agrees with the pairing oracle", bad


def criterion_7():
    bad = []
    for n in NS:
        pres = build_presentation(n)
        rng = random.Random(700 + n)
        words = [(g,) for g in range(pres.N ** 2)]
        words += [random_word(rng, pres.N, 3 if n <= 2 else 2) for _ in range(50)]
        rep = verify_hopf_axioms(pres, words)
        if rep["status"] != "pass":
            bad.append("n=%d %s" % (n, rep["failures"][:1]))
        for m in (1, 2):
            uq = verify_uq_relations(n, m)
            if uq["status"] != "pass":
                bad.append("n=%d V^%d %s" % (n, m, uq["note"]))
    return "counit and antipode axioms, U_q relations including Serre on V and V (x) V", bad


def criterion_8():
    bad = []
    for t in (1, 2, 3, 4, -1):
        bad += ["base s^%d: %s" % (t, f) for f in scalar_identity_failures(t, 20, 8)]
    return "conversion identity, q-Pascal, geometric sum", bad


def criterion_9():
    bad = []
    for n in (1, 2):
        rep = verify_lemma(n, 2, base_exp=3)
        if rep.passed or not rep.witness:
            bad.append("lemma with base s^3 passed at n=%d" % n)
    rep = verify_commutation(1, base_exp=3)
    if rep.passed or not rep.witness:
        bad.append("commutation with base s^3 passed")
    table = get_calculus(1).table
    for b in range(3):
        for g in range(4):
            for coord in range(3):
                perturbed = table.perturbed(b, g, coord, spow(1))
                rep = verify_action_table(1, table=perturbed)
                if rep.passed or not rep.witness:
                    bad.append("perturbing (%d, %d, %d) went unnoticed" % (b, g, coord))
    return "perturbed base or action-table entry is detected", bad


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    title, failures = CRITERIA[number - 1]()
    line = announce(number, title, failures, capsys)
    assert not failures, line


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        title, failures = fn()
        announce(i, title, failures)
        results.append(not failures)
    sys.exit(0 if all(results) else 1)
