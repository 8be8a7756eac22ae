import io
import json

import pytest

from qcurv.cli import ExprAST, SessionConfig, UsageError, evaluate, main, parse_expr
from qcurv.ncalg import NCPoly, build_presentation, z, zbar


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_nf_anchor_relation():
    assert run("nf", "u[1,2]*u[1,1]", "--n", "1") == (0, "q^-1 * u[1,1]u[1,2]\n")


def test_nf_implicit_product_and_constant():
    assert run("nf", "u[1,2]u[1,1]") == (0, "q^-1 * u[1,1]u[1,2]\n")
    assert run("nf", "1") == (0, "1\n")
    assert run("nf", "u[1,1] - u[1,1]") == (0, "0\n")


def test_nf_det_relation():
    assert run("nf", "u[2,2]u[1,1]", "--n", "1") == (0, "1 + q^-1 * u[1,2]u[2,1]\n")


def test_nf_sphere_element_json():
    code, text = run("nf", "z[1]*zbar[1]", "--n", "1", "--json")
    obj = json.loads(text)
    assert code == 0
    assert obj["degree"] == 0 and obj["oracle_agrees"] is True
    assert obj["normal_form"] == "1 + q * u[1,2]u[2,1]"


def test_parser():
    ast = parse_expr("2 * s^-1 u[1,2] + z[1]")
    assert isinstance(ast, ExprAST) and ast.kind == "add"
    pres = build_presentation(1)
    assert pres.equal(evaluate(parse_expr("z[1] zbar[1]"), 1), z(1, 2) * zbar(1, 2))
    assert evaluate(parse_expr("q^2"), 1) == evaluate(parse_expr("s^4"), 1)
    assert evaluate(parse_expr("(u[1,1] + 1)^2"), 1) == (NCPoly.gen(1, 1, 2) + 1) ** 2


@pytest.mark.parametrize("text", ["u[1,", "u[3,1]", "z[0]", "u[1,1]^-1", "1 +", "x"])
def test_parse_errors_exit_2(text):
    assert run("nf", text, "--n", "1")[0] == 2


def test_qint_examples():
    assert run("qint", "--round", "3") == (0, "1 + q + q^2\n")
    assert run("qint", "--bracket", "2") == (0, "q^-1 + q\n")
    assert run("qint", "--round", "0") == (0, "0\n")
    assert run("qint", "--round", "2", "--t", "1") == (0, "1 + s\n")


def test_qint_invalid():
    assert run("qint", "--round", "-1")[0] == 2
    assert run("qint", "--round", "2", "--t", "0")[0] == 2
    assert run("qint")[0] == 2


def test_curvature_k1():
    code, text = run("curvature", "--n", "2", "--k", "1")
    assert code == 0 and text.splitlines()[0] == "1"


def test_curvature_k2_reports_failure():
    code, text = run("curvature", "--n", "1", "--k", "2")
    assert code == 1
    assert text.splitlines()[0] == "s^-2 + s^2"
    assert "expected=1 + s^-2" in text


def test_usage_errors():
    assert run("nf", "1", "--n", "0")[0] == 2
    assert run("nf", "1", "--n", "9")[0] == 2
    assert run("curvature", "--n", "1", "--k", "0")[0] == 2
    assert run("verify-all", "--n", "1", "--k-max", "0")[0] == 2
    assert run("bogus")[0] == 2


def test_resource_limit_exit_2():
    assert run("nf", "(u[2,2] u[1,1])^4", "--n", "1", "--term-limit", "3")[0] == 2


def test_session_config_bounds():
    with pytest.raises(UsageError):
        SessionConfig(n=0)
    with pytest.raises(UsageError):
        SessionConfig(n=5)
    with pytest.raises(UsageError):
        SessionConfig(n=1, k_min=3, k_max=2)


def test_verify_all_json_deterministic(tmp_path):
    args = ("verify-all", "--n", "1", "--k-max", "2", "--json", "--samples", "20", "--seed", "7")
    code1, first = run(*args, "--cache-dir", str(tmp_path))
    code2, second = run(*args, "--cache-dir", str(tmp_path))
    assert first == second
    assert code1 == code2
    lines = [json.loads(line) for line in first.splitlines()]
    assert all(set(obj) >= {"check", "status"} for obj in lines)


def test_verify_all_n1_reports_lemma_failure():
    code, text = run("verify-all", "--n", "1", "--k-max", "2", "--samples", "20")
    assert code == 1
    lines = text.splitlines()
    assert any(line.startswith("FAIL lemma n=1 k=2") for line in lines)
    assert any(line.startswith("PASS commutation n=1") for line in lines)
    assert any(line.startswith("PASS action_table n=1") for line in lines)
    assert lines[-1].startswith("verify-all n=1: FAIL")
