import random

import pytest
from hypothesis import given, settings, strategies as st

from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit.algebra import StructureAlgebra, sub_adjacent, validate
from lsrkit.report import PreconditionError, StructureError
from lsrkit.representations import (RepresentationBundle, adjoint_rep, derived_reps, semidirect_product,
                                    trivial_rep, validate_representation)

from instances import base_pool, rep_pool
from oracles import first_broken_lsa_axiom, to_lists

PAIRS = [(l, r) for l in base_pool() if l.dim <= 3 for r in rep_pool(l)]


@pytest.mark.parametrize("name", ["F0", "F1", "F2", "F3"])
def test_adjoint_pair_valid(name):
    rep, report = adjoint_rep(fx.FIXTURES[name]())
    assert report.ok
    assert rep.dim == fx.FIXTURES[name]().dim


def test_semidirect_examples():
    s = semidirect_product(fx.F1(), adjoint_rep(fx.F1())[0])
    assert s.dim == 4 and validate(s).ok
    z = semidirect_product(fx.F0(), trivial_rep(fx.F0(), 1))
    assert z.dim == 3 and la.is_zero(z.product)
    g = sub_adjacent(fx.F3())
    lie = semidirect_product(g, trivial_rep(g, 1))
    assert lie.dim == 3 and la.is_zero(lie.bracket) and validate(lie).ok


def test_semidirect_kind_mismatch():
    g = sub_adjacent(fx.F3())
    with pytest.raises(StructureError):
        semidirect_product(g, trivial_rep(fx.F3(), 1))


def test_semidirect_rejects_invalid_rep():
    rep = trivial_rep(fx.F1(), 1)
    # mu(e1) = 2: mu(e1.e1) - mu(e1)^2 = -2 while rho = 0
    bad = RepresentationBundle("lsr-pair", rep.action, rep.rho, la.qarray([[[2]], [[0]]]))
    report = validate_representation(fx.F1(), bad)
    assert report.first_failure().name == "rho-mu compatibility"
    assert first_broken_lsa_axiom(to_lists(semidirect_product(fx.F1(), bad, check=False).product)) is not None
    with pytest.raises(PreconditionError):
        semidirect_product(fx.F1(), bad)


def test_trivial_rep_on_f2_needs_action():
    with pytest.raises(StructureError):
        trivial_rep(fx.F2(), 2)
    rep = trivial_rep(fx.F2(), action=StructureAlgebra.dual_numbers().multiplication_matrices())
    assert rep.dim == 2 and validate_representation(fx.F2(), rep).ok


def test_bundle_shape_errors():
    with pytest.raises(StructureError):
        RepresentationBundle("lsr-pair", la.eye(2).reshape(1, 2, 2), la.zeros((2, 2, 2)))
    with pytest.raises(StructureError):
        RepresentationBundle("lie-module", la.eye(2).reshape(1, 2, 2), la.zeros((2, 2, 2)), la.zeros((2, 2, 2)))
    with pytest.raises(StructureError):
        RepresentationBundle("pair", la.eye(2).reshape(1, 2, 2), la.zeros((2, 2, 2)))


def test_derived_reps_f1():
    out = derived_reps(fx.F1(), adjoint_rep(fx.F1())[0])
    report = out["equivalence_report"]
    assert report.ok
    # right multiplications of a commutative associative algebra commute but do
    # not anticommute, so the dual conditions both fail here
    assert report.data["mu operators commute"]
    assert not report.data["mu operators anticommute"]
    assert not report.data["(M; rho-mu, -mu) valid"]
    assert not report.data["(M*; rho*, mu*) valid"]


def test_derived_reps_f3():
    report = derived_reps(fx.F3(), adjoint_rep(fx.F3())[0])["equivalence_report"]
    assert report.ok
    # only mu(e2) = (e2 -> e1) is nonzero and it squares to zero
    assert report.data["mu operators anticommute"]
    assert report.data["mu operators commute"]
    assert report.data["(M; rho-mu, -mu) valid"]


def test_derived_reps_zero_mu():
    out = derived_reps(fx.F1(), trivial_rep(fx.F1(), 2))
    assert out["equivalence_report"].ok
    assert out["equivalence_report"].data["(M; rho-mu, -mu) valid"]


def test_derived_reps_needs_pair():
    g = sub_adjacent(fx.F3())
    with pytest.raises(StructureError):
        derived_reps(fx.F3(), trivial_rep(g, 1))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PAIRS))
def test_semidirect_of_valid_rep_validates(pair):
    l, rep = pair
    s = semidirect_product(l, rep)
    assert validate(s).ok
    assert first_broken_lsa_axiom(to_lists(s.product)) is None


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PAIRS), st.integers(0, 10**6))
def test_semidirect_detects_perturbed_rep(pair, seed):
    # over A = K a pair is a representation exactly when L + M is left-symmetric
    l, rep = pair
    rng = random.Random(seed)
    rho, mu = rep.rho.copy(), rep.mu.copy()
    target = rho if rng.random() < 0.5 else mu
    idx = tuple(rng.randrange(s) for s in target.shape)
    target[idx] += rng.choice([-1, 1])
    bad = RepresentationBundle("lsr-pair", rep.action, rho, mu)
    s = semidirect_product(l, bad, check=False)
    assert validate_representation(l, bad).ok == (first_broken_lsa_axiom(to_lists(s.product)) is None)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PAIRS))
def test_derived_reps_always_consistent(pair):
    l, rep = pair
    out = derived_reps(l, rep)
    assert out["equivalence_report"].ok
    assert validate_representation(sub_adjacent(l), out["sub_adjacent_module"]).ok
    assert validate_representation(l, out["dual_rep"]).ok
    assert validate(semidirect_product(l, out["dual_rep"])).ok
