"""Command-line frontend: verify-all, nf, curvature, qint.

Exit codes: 0 when every check passes, 1 on a verification failure,
2 on usage errors, parse errors, resource limits or an inconsistent action solve.
"""

import argparse
import json
import random
import re
import sys
import time

from .curvature import (
    curvature_coefficient, get_calculus, verify_action_table, verify_commutation,
    verify_decomposition, verify_holomorphic, verify_lemma, verify_leibniz_recursion,
    verify_qint_conversion,
)
from .hkcalc import InconsistentSystem, LambdaVec, Underdetermined
from .hopf import (
    certify_presentation, oracle_agreement, oracle_equal, verify_hopf_axioms, verify_uq_relations,
)
from .ncalg import (
    DEFAULT_TERM_LIMIT, NCPoly, ResourceLimitError, build_presentation, degree,
    random_poly, random_word, z, zbar,
)
from .qscalar import qbinomial, qint_bracket, qint_round, scalar_identity_failures, spow

MAX_N = 4


class UsageError(ValueError):
    pass


class SessionConfig:
    def __init__(self, n=1, k_min=1, k_max=4, oracle_degree=3, term_limit=DEFAULT_TERM_LIMIT,
                 seed=0, cache_dir=None, samples=100):
        if n < 1:
            raise UsageError("--n must be >= 1")
        if n > MAX_N:
            raise UsageError("--n must be <= %d (antipode-dependent checks)" % MAX_N)
        if k_min < 1 or k_max < k_min:
            raise UsageError("need 1 <= k <= k-max")
        if oracle_degree < 1 or term_limit < 1 or samples < 0:
            raise UsageError("bounds must be positive")
        self.n = n
        self.k_min = k_min
        self.k_max = k_max
        self.oracle_degree = oracle_degree
        self.term_limit = term_limit
        self.seed = seed
        self.cache_dir = cache_dir
        self.samples = samples

    def k_range(self):
        return range(self.k_min, self.k_max + 1)


# ---------------------------------------------------------------- expressions

_TOKEN = re.compile(r"\s*(?:(zbar|z|u)\s*\[\s*(\d+)\s*(?:,\s*(\d+)\s*)?\]|(\d+)|([sq])|([-+*^()]))")


class ExprAST:
    """Parse tree node: kind in {num, sym, gen, z, zbar, add, sub, mul, pow, neg}."""

    def __init__(self, kind, value=None, children=()):
        self.kind = kind
        self.value = value
        self.children = tuple(children)

    def __eq__(self, other):
        return (isinstance(other, ExprAST) and self.kind == other.kind
                and self.value == other.value and self.children == other.children)

    def __repr__(self):
        if self.children:
            return "%s(%s)" % (self.kind, ", ".join(map(repr, self.children)))
        return "%s:%s" % (self.kind, self.value)


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise UsageError("cannot parse expression at %r" % text[pos:])
        gen, i, j, num, sym, op = m.groups()
        if gen:
            if gen == "u" and j is None:
                raise UsageError("u needs two indices")
            if gen != "u" and j is not None:
                raise UsageError("%s takes one index" % gen)
            out.append(("gen", (gen, int(i), int(j) if j else None)))
        elif num:
            out.append(("num", int(num)))
        elif sym:
            out.append(("sym", sym))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if op is not None and tok != ("op", op):
            raise UsageError("expected %r" % op)
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = ExprAST("add" if op == "+" else "sub", children=(node, self.term()))
        return node

    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                node = ExprAST("mul", children=(node, self.factor()))
            elif tok[0] in ("gen", "num", "sym") or tok == ("op", "("):
                node = ExprAST("mul", children=(node, self.factor()))
            else:
                return node

    def factor(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ExprAST("neg", children=(self.factor(),))
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            kind, val = self.take()
            if kind != "num":
                raise UsageError("exponent must be an integer")
            return ExprAST("pow", -val if neg else val, (base,))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ExprAST("num", val)
        if kind == "sym":
            return ExprAST("sym", val)
        if kind == "gen":
            name, i, j = val
            return ExprAST("gen" if name == "u" else name, (i, j) if j else i)
        if (kind, val) == ("op", "("):
            node = self.expr()
            self.take(")")
            return node
        raise UsageError("unexpected token %r" % (val,))


def parse_expr(text):
    tokens = _tokenize(text)
    if not tokens:
        raise UsageError("empty expression")
    p = _Parser(tokens)
    node = p.expr()
    if p.i != len(tokens):
        raise UsageError("trailing input in expression")
    return node


def evaluate(node, n):
    N = n + 1
    kind = node.kind
    if kind == "num":
        return NCPoly.const(node.value, N)
    if kind == "sym":
        return NCPoly.const(spow(1 if node.value == "s" else N), N)
    if kind == "gen":
        i, j = node.value
        if not (1 <= i <= N and 1 <= j <= N):
            raise UsageError("u[%d,%d] out of range for n=%d" % (i, j, n))
        return NCPoly.gen(i, j, N)
    if kind in ("z", "zbar"):
        if not 1 <= node.value <= N:
            raise UsageError("%s[%d] out of range for n=%d" % (kind, node.value, n))
        return z(node.value, N) if kind == "z" else zbar(node.value, N)
    args = [evaluate(c, n) for c in node.children]
    if kind == "add":
        return args[0] + args[1]
    if kind == "sub":
        return args[0] - args[1]
    if kind == "mul":
        return args[0] * args[1]
    if kind == "neg":
        return -args[0]
    if kind == "pow":
        if node.value >= 0:
            return args[0] ** node.value
        terms = args[0].terms
        if list(terms) != [()]:
            raise UsageError("negative powers only for scalars")
        return NCPoly.const(terms[()].pow(node.value), N)
    raise UsageError("unknown node %s" % kind)


# ---------------------------------------------------------------- commands

class _Emitter:
    def __init__(self, as_json, out):
        self.as_json = as_json
        self.out = out
        self.failed = False

    def emit(self, record, line=None):
        if record.get("status") == "fail":
            self.failed = True
        if self.as_json:
            self.out.write(json.dumps(record, sort_keys=True) + "\n")
        else:
            self.out.write((line or "%-4s %s" % (record.get("status", "").upper(), record.get("check"))) + "\n")

    def report(self, rep):
        self.emit(rep.to_json(), rep.summary_line())


def _scalar_suite():
    failures = scalar_identity_failures(1) + scalar_identity_failures(-3)
    rec = {"check": "qscalar_identities", "status": "pass" if not failures else "fail"}
    if failures:
        rec["witness"] = failures[:5]
    return rec


def factoring_check(calc, samples, rng):
    N = calc.N
    bad = []
    for _ in range(samples):
        v = LambdaVec.basis(calc.n, rng.randrange(calc.dim))
        a = random_poly(rng, N, 2, 2)
        b = random_poly(rng, N, 2, 2)
        d = calc.factoring_defect(v, a, b)
        if d:
            bad.append(d.to_text())
    rec = {"check": "action_factoring", "n": calc.n, "samples": samples,
           "status": "pass" if not bad else "fail"}
    if bad:
        rec["witness"] = bad[:3]
    return rec


def cmd_verify_all(cfg, emitter):
    rng = random.Random(cfg.seed)
    n = cfg.n
    pres = build_presentation(n, cfg.term_limit)
    emitter.emit(_scalar_suite())
    for k in cfg.k_range():
        emitter.report(verify_qint_conversion(k, 2))
    cert = certify_presentation(pres, cfg.oracle_degree)
    emitter.emit(cert, "%-4s presentation_oracle n=%d convention=%s" % (
        cert["status"].upper(), n, cert["convention"]))
    emitter.emit(oracle_agreement(pres, cfg.samples, cfg.oracle_degree, rng))
    words = [(g,) for g in range(pres.N ** 2)]
    words += [random_word(rng, pres.N, 3 if n <= 2 else 2) for _ in range(50)]
    hopf = verify_hopf_axioms(pres, words)
    emitter.emit(hopf, "%-4s hopf_axioms n=%d words=%d" % (hopf["status"].upper(), n, len(words)))
    for m in (1, 2):
        uq = verify_uq_relations(n, m)
        uq = {key: uq[key] for key in ("check", "n", "m", "convention", "status", "note")}
        emitter.emit(uq, "%-4s uq_relations n=%d V^%d" % (uq["status"].upper(), n, m))
    calc = get_calculus(n, cfg.cache_dir)
    emitter.report(verify_action_table(n, calc=calc))
    emitter.emit(factoring_check(calc, 200, rng))
    emitter.report(verify_commutation(n, calc=calc))
    for k in cfg.k_range():
        emitter.report(verify_lemma(n, k, calc=calc))
        emitter.report(verify_leibniz_recursion(n, k, calc=calc))
        emitter.report(verify_holomorphic(n, k, calc=calc))
        emitter.report(verify_decomposition(n, k, calc=calc))
        emitter.report(curvature_coefficient(n, k, calc=calc))
    return 1 if emitter.failed else 0


def cmd_nf(text, n, term_limit, as_json, out, oracle_degree=3):
    pres = build_presentation(n, term_limit)
    raw = evaluate(parse_expr(text), n)
    p = pres.normal_form(raw)
    if as_json:
        deg = degree(p) if all(_in_sphere(w, pres.N) for w in p.terms) else None
        # the rewrite must not change the value seen by the pairing oracle
        agrees = oracle_equal(raw, p, oracle_degree)
        out.write(json.dumps({"command": "nf", "n": n, "input": text, "normal_form": p.to_text(),
                              "terms": p.to_json(), "degree": deg, "oracle_agrees": agrees},
                             sort_keys=True) + "\n")
        if not agrees:
            return 1
    else:
        out.write(p.to_text() + "\n")
    return 0


def _in_sphere(word, N):
    n = N - 1
    first = sum(1 for g in word if g % N == 0)
    return (n * first - (len(word) - first)) % n == 0


def cmd_curvature(n, k, cache_dir, as_json, out):
    calc = get_calculus(n, cache_dir)
    rep = curvature_coefficient(n, k, calc=calc)
    if as_json:
        out.write(json.dumps(rep.to_json(), sort_keys=True) + "\n")
    else:
        out.write((rep.coefficient.to_text() if rep.coefficient is not None else "none") + "\n")
        out.write(rep.summary_line() + "\n")
    return 0 if rep.passed else 1


def cmd_qint(args, out):
    n = args.n
    N = n + 1
    t = args.t if args.t is not None else N
    if t == 0:
        raise UsageError("base exponent must be nonzero")
    if args.round is not None:
        val, what = qint_round(args.round, t), "round"
    elif args.bracket is not None:
        val, what = qint_bracket(args.bracket, t), "bracket"
    else:
        nn, r = args.binomial
        val, what = qbinomial(nn, r, t), "binomial"
    text = val.to_text("q", n)
    if args.json:
        out.write(json.dumps({"command": "qint", "kind": what, "t": t, "n": n, "value": text,
                              "value_s": val.to_text()}, sort_keys=True) + "\n")
    else:
        out.write(text + "\n")
    return 0


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="rank: the algebra is O_q(SU_{n+1})")
    common.add_argument("--term-limit", type=int, default=DEFAULT_TERM_LIMIT)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None)
    common.add_argument("--json", action="store_true", help="emit JSON lines")
    common.add_argument("--oracle-degree", type=int, default=3, help="degree bound for PBW oracle words")

    parser = argparse.ArgumentParser(prog="qcurv", description="Exact checks for q-deformed line-bundle curvature.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-all", parents=[common], help="run every verification suite")
    p.add_argument("--k", type=int, default=1, help="smallest k in the grid")
    p.add_argument("--k-max", type=int, default=4)
    p.add_argument("--samples", type=int, default=100, help="random pairs for the oracle agreement check")

    p = sub.add_parser("nf", parents=[common], help="normal form of an expression")
    p.add_argument("expr")

    p = sub.add_parser("curvature", parents=[common], help="curvature coefficient for E_k")
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("qint", parents=[common], help="quantum integers and binomials")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--round", type=_nonneg, metavar="M", help="(M)_base")
    g.add_argument("--bracket", type=_nonneg, metavar="M", help="[M]_base")
    g.add_argument("--binomial", type=_nonneg, nargs=2, metavar=("M", "R"))
    p.add_argument("--t", type=int, default=None, help="base is s^t; default t = n+1 (base q)")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    start = time.perf_counter()
    try:
        if args.n < 1 or args.n > MAX_N:
            raise UsageError("--n must be between 1 and %d" % MAX_N)
        if args.term_limit < 1:
            raise UsageError("--term-limit must be positive")
        if args.oracle_degree < 1:
            raise UsageError("--oracle-degree must be positive")
        if args.command == "verify-all":
            cfg = SessionConfig(args.n, args.k, args.k_max, args.oracle_degree, args.term_limit,
                                args.seed, args.cache_dir, args.samples)
            status = cmd_verify_all(cfg, _Emitter(args.json, out))
            if not args.json:
                out.write("verify-all n=%d: %s (%.1fs)\n" % (
                    args.n, "PASS" if status == 0 else "FAIL", time.perf_counter() - start))
            return status
        if args.command == "nf":
            return cmd_nf(args.expr, args.n, args.term_limit, args.json, out, args.oracle_degree)
        if args.command == "curvature":
            if args.k < 1:
                raise UsageError("--k must be >= 1")
            return cmd_curvature(args.n, args.k, args.cache_dir, args.json, out)
        return cmd_qint(args, out)
    except UsageError as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return 2
    except ResourceLimitError as exc:
        sys.stderr.write("resource limit: %s\n" % exc)
        return 2
    except (InconsistentSystem, Underdetermined) as exc:
        sys.stderr.write("action solve failed: %s\n" % exc)
        return 2


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
