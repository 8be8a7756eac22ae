import json
import random

import pytest
from hypothesis import given, strategies as st

from qcurv.hkcalc import (
    ActionTable, Calculus, InconsistentSystem, LambdaVec, OneFormRep, basis_labels,
    free_directions, known_action, load_or_solve, minus_index, plus_index, solve_e0_action,
    zero_index,
)
from qcurv.ncalg import NCPoly, build_presentation, gidx, qpow, random_poly, z
from qcurv.qscalar import ONE, ZERO, spow

TABLES = {}


def calc_for(n):
    if n not in TABLES:
        pres = build_presentation(n)
        TABLES[n] = Calculus(pres, solve_e0_action(pres))
    return TABLES[n]


def e(n, label):
    return LambdaVec.basis(n, basis_labels(n).index(label))


def u(i, j, N):
    return NCPoly.gen(i, j, N)


def test_basis_dimension():
    for n in (1, 2, 3):
        labels = basis_labels(n)
        assert len(labels) == 2 * n + 1
        assert sum(lab.startswith("e+") for lab in labels) == n
        assert sum(lab.startswith("e-") for lab in labels) == n
        assert labels[zero_index(n)] == "e0"
        assert labels[plus_index(1, n)] == "e+1" and labels[minus_index(n, n)] == "e-%d" % n


def test_lambdavec_length_invariant():
    with pytest.raises(ValueError):
        LambdaVec([1, 0])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_known_action_examples(n):
    N = n + 1
    table = known_action(n)
    # e+_1 < u^1_1 = q^(1 - 2/(n+1)) e+_1 = s^(n-1) e+_1
    assert table[(plus_index(1, n), gidx(1, 1, N))] == e(n, "e+1").scale(spow(n - 1))
    assert table[(plus_index(1, n), gidx(2, 1, N))] == LambdaVec.zero(n)
    if n >= 2:
        assert table[(minus_index(2, n), gidx(3, 3, N))] == e(n, "e-2").scale(spow(n - 1))


@pytest.mark.parametrize("n", [1, 2])
def test_literal_table_is_inconsistent(n):
    with pytest.raises(InconsistentSystem) as info:
        solve_e0_action(build_presentation(n), mode="literal")
    assert "u[" in info.value.relation


@pytest.mark.parametrize("n", [1, 2, 3])
def test_e0_row_from_anchor_relation(n):
    # hand computation: apply delbar to u^1_2 u^1_1 = q^-1 u^1_1 u^1_2
    N = n + 1
    calc = calc_for(n)
    coeff = spow(2 * N - 2) - 1
    for i in range(1, n + 1):
        assert calc.table.get(zero_index(n), gidx(1, i + 1, N)) == e(n, "e-%d" % i).scale(coeff)
        # same computation on the column relation u^(i+1)_1 u^1_1 = q^-1 u^1_1 u^(i+1)_1
        assert calc.table.get(zero_index(n), gidx(i + 1, 1, N)) == e(n, "e+%d" % i).scale(coeff)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_e0_is_z1_eigenvector(n):
    calc = calc_for(n)
    N = n + 1
    img = calc.act(e(n, "e0"), z(1, N))
    assert img == e(n, "e0").scale(spow(2 * N - 2))
    for k in range(1, 6):
        v = calc.act(e(n, "e0"), calc.pres.normal_form(z(1, N) ** k))
        assert v.support() == [zero_index(n)]


def test_without_submodule_pin_freedom_remains():
    assert free_directions(build_presentation(1)) == ["e0<u[2,2]_e+1", "e0<u[2,2]_e-1"]


def test_delbar_examples():
    n, N = 1, 2
    calc = calc_for(n)
    assert calc.delbar_class(u(2, 1, N)) == e(n, "e+1")
    assert calc.delbar_class(NCPoly.const(1, N)) == LambdaVec.zero(n)
    lam = spow(2)
    assert calc.delbar(z(1, N) * z(1, N)) == e(n, "e0").scale(1 + lam)
    # det relation: delbar(u22) = -(e0 < u22) since e-_1 < u^2_1 = 0
    assert calc.delbar(u(2, 2, N)) == -calc.act(e(n, "e0"), u(2, 2, N))
    assert calc.delbar(u(2, 2, N)) != LambdaVec.zero(n)


def test_levi_offdiagonal_zero_is_inconsistent():
    calc = calc_for(2)
    N = 3
    entry = calc.table.get(plus_index(1, 2), gidx(3, 2, N))
    assert entry == e(2, "e+2").scale(spow(1) - spow(-5))
    zeroed = calc.table.perturbed(plus_index(1, 2), gidx(3, 2, N), plus_index(2, 2), -entry.coords[1])
    assert Calculus(calc.pres, zeroed).relation_witnesses()


@pytest.mark.parametrize("n", [1, 2, 3])
def test_relations_killed(n):
    assert calc_for(n).relation_witnesses() == []


@pytest.mark.parametrize("n", [1, 2, 3])
def test_factoring_property(n):
    calc = calc_for(n)
    rng = random.Random(100 + n)
    for _ in range(200):
        v = LambdaVec.basis(n, rng.randrange(2 * n + 1))
        a = random_poly(rng, n + 1, 2, 2)
        b = random_poly(rng, n + 1, 2, 2)
        assert calc.factoring_defect(v, a, b).is_zero()


def test_factoring_example():
    calc = calc_for(1)
    lhs = calc.act(calc.act(e(1, "e0"), u(1, 1, 2)), u(1, 2, 2))
    rhs = calc.act(e(1, "e0"), calc.pres.normal_form(u(1, 1, 2) * u(1, 2, 2)))
    assert lhs == rhs


@given(st.integers(1, 2), st.integers(0, 10**6))
def test_derivation_law(n, seed):
    calc = calc_for(n)
    rng = random.Random(seed)
    a = random_poly(rng, n + 1, 2, 2)
    b = random_poly(rng, n + 1, 2, 2)
    from qcurv.hopf import counit
    lhs = calc.delbar(a * b)
    rhs = calc.act(calc.delbar(a), b) + calc.delbar(b).scale(counit(a))
    assert lhs == rhs
    assert calc.delbar(a) == calc.delbar(calc.pres.normal_form(a))


@given(st.integers(1, 2), st.integers(0, 10**6))
def test_unit_d_leibniz(n, seed):
    calc = calc_for(n)
    rng = random.Random(seed)
    a = calc.pres.normal_form(random_poly(rng, n + 1, 2, 2))
    b = calc.pres.normal_form(random_poly(rng, n + 1, 2, 2))
    lhs = calc.unit_d(calc.pres.normal_form(a * b))
    rhs = calc.right_mult(calc.unit_d(a), b) + calc.left_mult(a, calc.unit_d(b))
    assert lhs == rhs


@pytest.mark.parametrize("n", [1, 2, 3])
def test_unit_d_z1(n):
    N = n + 1
    calc = calc_for(n)
    w = calc.unit_d(z(1, N))
    expected = {(gidx(1, 1, N),): e(n, "e0")}
    for a in range(2, N + 1):
        expected[(gidx(1, a, N),)] = e(n, "e+%d" % (a - 1))
    assert w.terms == expected
    assert calc.proj_vert(w).terms == {(gidx(1, 1, N),): e(n, "e0")}
    assert calc.proj01(w).is_zero()
    assert calc.unit_d(NCPoly.const(1, N)).is_zero()


@given(st.integers(1, 2), st.integers(0, 10**6))
def test_projections(n, seed):
    calc = calc_for(n)
    w = calc.unit_d(calc.pres.normal_form(random_poly(random.Random(seed), n + 1, 2, 2)))
    assert calc.proj10(w) + calc.proj01(w) + calc.proj_vert(w) == w
    for proj in (calc.proj10, calc.proj01, calc.proj_vert):
        assert proj(proj(w)) == proj(w)


def test_right_mult_examples():
    calc = calc_for(1)
    N = 2
    one_e = OneFormRep({(): e(1, "e+1")}, N)
    assert calc.right_mult(one_e, NCPoly.const(1, N)) == one_e
    got = calc.right_mult(one_e, u(1, 1, N))
    assert got.terms == {(gidx(1, 1, N),): e(1, "e+1")}


@given(st.integers(1, 2), st.integers(0, 10**6))
def test_right_mult_associative(n, seed):
    calc = calc_for(n)
    rng = random.Random(seed)
    w = calc.unit_d(calc.pres.normal_form(random_poly(rng, n + 1, 2, 2)))
    a = random_poly(rng, n + 1, 2, 1)
    b = random_poly(rng, n + 1, 2, 1)
    assert calc.right_mult(calc.right_mult(w, a), b) == calc.right_mult(w, calc.pres.normal_form(a * b))


def test_unit_inverse_examples():
    calc = calc_for(1)
    N = 2
    assert calc.unit_inverse(OneFormRep.zero(N)) == {}
    formal = calc.unit_inverse(calc.unit_d(z(1, N)))
    assert formal == {gidx(1, 1, N): NCPoly.const(1, N)}


@pytest.mark.parametrize("expr", ["z1^2", "z1z2"])
def test_unit_inverse_round_trip(expr):
    calc = calc_for(2)
    N = 3
    a = z(1, N) * z(1, N) if expr == "z1^2" else z(1, N) * z(2, N)
    w = calc.unit_d(calc.pres.normal_form(a))
    assert calc.apply_unit(calc.unit_inverse(w)) == w


def test_cache_round_trip(tmp_path):
    pres = build_presentation(1)
    first = load_or_solve(pres, tmp_path)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    second = load_or_solve(pres, tmp_path)
    assert first == second
    assert ActionTable.from_json(first.to_json()) == first


def test_cache_invalidated_on_hash_change(tmp_path):
    pres = build_presentation(1)
    table = load_or_solve(pres, tmp_path)
    path = next(tmp_path.iterdir())
    obj = json.loads(path.read_text())
    obj["convention_hash"] = "stale"
    obj["entries"][0]["value"][0] = {"num": [[0, "7/1"]], "den": [[0, "1/1"]]}
    path.write_text(json.dumps(obj))
    assert load_or_solve(pres, tmp_path) == table


def test_lambdavec_json():
    v = LambdaVec([spow(2), 0, qpow(-1, 2) + 1])
    assert LambdaVec.from_json(v.to_json()) == v
    assert v.coords[1] == ZERO and v.scale(0).is_zero() and v.scale(ONE) == v
