import random

import pytest
from hypothesis import given, settings, strategies as st

from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit.algebra import left_multiplications, sub_adjacent, validate
from lsrkit.operators import (MAX_GRID, check_nijenhuis, check_o_operator, check_rota_baxter, composition_condition,
                              deformed_structures, induced_algebra_from_o_operator, invertible_pair_equivalence,
                              lift_to_semidirect, o_operator_compatibility, operator_grid, polynomial_nijenhuis,
                              power_identity_residual, quotient_nijenhuis, search_operators)
from lsrkit.report import PreconditionError, StructureError
from lsrkit.representations import RepresentationBundle, adjoint_rep, trivial_rep

from instances import base_pool, left_regular, n2
from oracles import nijenhuis_holds, o_operator_holds, rota_baxter_holds

N = fx.projection_e1()
R = fx.rb_f3()
SMALL_BASES = [b for b in base_pool() if b.dim <= 3]


def adj(l):
    return adjoint_rep(l)[0]


def lie_adjoint(g):
    return RepresentationBundle("lie-module", g.action, left_multiplications(g.bracket))


def test_nijenhuis_examples():
    assert check_nijenhuis(fx.F1(), N).ok
    swap = check_nijenhuis(fx.F1(), fx.swap())
    assert swap.ok == nijenhuis_holds(fx.F1().product, fx.swap())
    assert not swap.ok
    assert "literal displayed form holds" in check_nijenhuis(fx.F1(), N).data
    with pytest.raises(StructureError):
        check_nijenhuis(fx.F1(), la.eye(3))


@pytest.mark.parametrize("name", ["F1", "F3"])
def test_nijenhuis_search_matches_oracle(name):
    l = fx.FIXTURES[name]()
    found = search_operators(l, "nijenhuis", bound=1)
    expected = [m for m in operator_grid(2, 2, 1) if nijenhuis_holds(l.product, m)]
    assert [m.tolist() for m in found] == [m.tolist() for m in expected]


def test_f1_search_contains_basic_operators():
    found = [m.tolist() for m in search_operators(fx.F1(), "nijenhuis", bound=1)]
    for m in (la.zeros((2, 2)), la.eye(2), N):
        assert m.tolist() in found


def test_power_identities():
    for j in range(1, 4):
        for k in range(1, 4):
            assert la.is_zero(power_identity_residual(n2(), la.qarray([[1, 0], [0, 0]]), j, k)) \
                == check_nijenhuis(n2(), la.qarray([[1, 0], [0, 0]])).ok


def test_deformed_structures():
    structures, report = deformed_structures(fx.F1(), N, 2)
    assert report.ok and len(structures) == 3
    assert la.is_zero(structures[0].product - fx.F1().product)
    with pytest.raises(PreconditionError):
        deformed_structures(fx.F1(), fx.swap(), 1)


def test_polynomial_nijenhuis():
    out, report = polynomial_nijenhuis(fx.F1(), N, (1, 1))
    assert out.tolist() == la.qarray([[2, 0], [0, 1]]).tolist() and report.ok
    with pytest.raises(ValueError):
        polynomial_nijenhuis(fx.F1(), la.eye(2), (1,), min_power=-1)
    inv, _ = polynomial_nijenhuis(fx.F1(), la.eye(2) * 2, (1,), allow_negative_powers=True, min_power=-1)
    assert la.is_zero(inv - la.eye(2) / 2)
    with pytest.raises(PreconditionError):
        polynomial_nijenhuis(fx.F1(), N, (1,), allow_negative_powers=True, min_power=-1)


def test_rota_baxter_examples():
    assert check_rota_baxter(fx.F3(), R, 0).ok
    assert rota_baxter_holds(fx.F3().product, R, 0)
    report = check_rota_baxter(fx.F1(), N, -1)
    assert report["bridge r^2 = r"].passed
    assert report.data["bridges"]["r^2 = r"]["nijenhuis"]


@pytest.mark.parametrize("name", ["F1", "F3"])
def test_rota_baxter_verdicts_match_oracle(name):
    l = fx.FIXTURES[name]()
    for w in (0, -1, 2):
        found = [m.tolist() for m in search_operators(l, "rota-baxter", 1, weight=w)]
        expected = [m.tolist() for m in operator_grid(2, 2, 1) if rota_baxter_holds(l.product, m, w)]
        assert found == expected


def test_o_operator_examples():
    assert check_o_operator(fx.F3(), adj(fx.F3()), R).ok
    g = sub_adjacent(fx.F3())
    assert check_o_operator(g, lie_adjoint(g), R).ok
    with pytest.raises(StructureError):
        check_o_operator(g, adj(fx.F3()), R)


def test_o_operator_search_matches_oracle():
    l, rep = fx.F3(), adj(fx.F3())
    found = [m.tolist() for m in search_operators(l, "o-operator", 1, rep=rep)]
    expected = [m.tolist() for m in operator_grid(2, 2, 1) if o_operator_holds(l.product, rep.rho, rep.mu, m)]
    assert found == expected
    # weight-zero Rota-Baxter operators are the O-operators of the adjoint pair
    assert found == [m.tolist() for m in search_operators(l, "rota-baxter", 1, weight=0)]


def test_induced_algebra():
    g = sub_adjacent(fx.F3())
    out, report = induced_algebra_from_o_operator(g, lie_adjoint(g), R)
    assert report.ok and out.dim == 2 and validate(out).ok
    with pytest.raises(StructureError):
        induced_algebra_from_o_operator(fx.F3(), adj(fx.F3()), R)
    g2 = sub_adjacent(n2())
    for t in search_operators(g2, "o-operator", 1, rep=lie_adjoint(g2)):
        out, report = induced_algebra_from_o_operator(g2, lie_adjoint(g2), t)
        assert report.ok


def test_lifts():
    report = lift_to_semidirect(fx.F3(), adj(fx.F3()), R)
    assert report.ok and report.data["agree"]
    bad = R.copy()
    bad[1, 1] = 1
    assert not o_operator_holds(fx.F3().product, adj(fx.F3()).rho, adj(fx.F3()).mu, bad)
    report = lift_to_semidirect(fx.F3(), adj(fx.F3()), bad)
    assert report.data["agree"] and not any(report.data["verdicts"].values())


def test_lie_lift():
    g = sub_adjacent(n2())
    for t in operator_grid(2, 2, 1):
        assert lift_to_semidirect(g, lie_adjoint(g), t).data["agree"]


def test_compatibility():
    l, rep = fx.F3(), adj(fx.F3())
    assert o_operator_compatibility(l, rep, R, la.zeros((2, 2))).ok
    ops = search_operators(l, "o-operator", 1, rep=rep)
    for t2 in ops:
        report = o_operator_compatibility(l, rep, R, t2)
        assert report["compatibility identity"].passed == o_operator_holds(l.product, rep.rho, rep.mu, R + t2)
    with pytest.raises(PreconditionError):
        o_operator_compatibility(l, rep, R, la.eye(2))


def test_quotient_and_invertible_pairs():
    l = fx.F1()
    rep = left_regular(l)
    ops = [t for t in search_operators(l, "o-operator", 1, rep=rep) if la.inverse(t) is not None]
    assert len(ops) == 6
    for t1 in ops:
        for t2 in ops:
            report = invertible_pair_equivalence(l, rep, t1, t2)
            assert report.ok
            assert report.data["compatible"] == o_operator_holds(l.product, rep.rho, rep.mu, t1 + t2)
            assert report.data["nijenhuis"] == nijenhuis_holds(l.product, t1 @ la.inverse(t2))
            if report.data["compatible"]:
                n, nrep = quotient_nijenhuis(l, rep, t1, t2)
                assert nrep.ok
    with pytest.raises(PreconditionError):
        quotient_nijenhuis(fx.F3(), adj(fx.F3()), R, R)


def test_composition_condition():
    l, rep = fx.F3(), adj(fx.F3())
    for n in search_operators(l, "nijenhuis", 1):
        report = composition_condition(l, rep, n, R)
        assert report["N o T is an O-operator"].passed == o_operator_holds(l.product, rep.rho, rep.mu, n @ R)


def test_grid_limits():
    assert sum(1 for _ in operator_grid(1, 2, 1)) == 9
    with pytest.raises(ValueError):
        next(operator_grid(4, 4, 1))
    assert MAX_GRID >= 3 ** 9
    with pytest.raises(ValueError):
        search_operators(fx.F1(), "derivation")
    with pytest.raises(ValueError):
        search_operators(fx.F3(), "o-operator")


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_BASES), st.integers(0, 10**6))
def test_nijenhuis_verdict_matches_oracle(l, seed):
    rng = random.Random(seed)
    n = la.qarray([[rng.randint(-1, 1) for _ in range(l.dim)] for _ in range(l.dim)])
    assert check_nijenhuis(l, n).ok == nijenhuis_holds(l.product, n)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([b for b in SMALL_BASES if b.dim <= 2]), st.integers(0, 10**6))
def test_rota_baxter_bridges(l, seed):
    rng = random.Random(seed)
    # idempotents, involutions and square-zero maps built by conjugation
    while True:
        p = la.qarray([[rng.randint(-1, 1) for _ in range(l.dim)] for _ in range(l.dim)])
        pinv = la.inverse(p)
        if pinv is not None:
            break
    kind = rng.choice(["idempotent", "involution", "square-zero"])
    d = la.zeros((l.dim, l.dim))
    for i in range(l.dim):
        d[i, i] = rng.choice([0, 1]) if kind == "idempotent" else rng.choice([1, -1])
    if kind == "square-zero":
        d = la.zeros((l.dim, l.dim))
        if l.dim > 1:
            d[0, l.dim - 1] = 1
    r = p @ d @ pinv
    report = check_rota_baxter(l, r, 0)
    assert report.data["bridges"]
    assert all(c.passed for c in report.checks if c.name.startswith("bridge"))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([b for b in SMALL_BASES if b.dim <= 2]), st.integers(0, 10**6))
def test_lift_verdicts_agree(l, seed):
    rng = random.Random(seed)
    rep = adj(l) if rng.random() < 0.5 else trivial_rep(l, 1)
    t = la.qarray([[rng.randint(-1, 1) for _ in range(rep.dim)] for _ in range(l.dim)])
    report = lift_to_semidirect(l, rep, t)
    assert report.data["agree"]
    assert report.data["verdicts"]["O-operator"] == o_operator_holds(l.product, rep.rho, rep.mu, t)
