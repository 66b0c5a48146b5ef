import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit.algebra import (LsrAlgebra, MorphismPair, StructureAlgebra, Subspace, check_morphism,
                            check_substructure, classify_anchor, derivation_basis, sub_adjacent,
                            trivial_extension, validate)
from lsrkit.report import PreconditionError, StructureError

from instances import base_pool, n2, random_invertible, transport
from lsrkit.representations import trivial_rep
from oracles import first_broken_lsa_axiom, to_lists

POOL = base_pool()


@pytest.mark.parametrize("name", ["F0", "F1", "F2", "F3"])
def test_fixtures_validate(name):
    assert validate(fx.FIXTURES[name]()).ok


def test_f2_anchor_in_derivations():
    rep = validate(fx.F2())
    assert rep["anchor in Der(A)"].passed
    assert len(derivation_basis(fx.F2().a)) == 1


@pytest.mark.parametrize("name,i,j,k", [(n, i, j, k) for n in ("F1", "F3") for i, j, k in product(range(2), repeat=3)])
def test_single_entry_corruption_matches_oracle(name, i, j, k):
    T = fx.FIXTURES[name]().product.copy()
    T[i, j, k] += 1
    report = validate(LsrAlgebra.over_ground_field(T))
    broken = first_broken_lsa_axiom(to_lists(T))
    assert report.ok == (broken is None)
    if broken is not None:
        check = report.first_failure()
        assert check.name == broken[0]
        assert check.witness == broken[1]


def test_corruption_that_stays_valid():
    # e1.e2 = 2 e2 stays left-symmetric
    T = fx.F1().product.copy()
    T[0, 1, 1] += 1
    assert validate(LsrAlgebra.over_ground_field(T)).ok
    assert first_broken_lsa_axiom(to_lists(T)) is None


def test_shape_mismatch_raises():
    with pytest.raises(StructureError):
        LsrAlgebra.over_ground_field(la.zeros((2, 2, 3)))


def test_derivation_bases():
    assert derivation_basis(StructureAlgebra.ground_field()) == []
    (d,) = derivation_basis(StructureAlgebra.dual_numbers())
    assert list(d[:, 0]) == [0, 0]
    assert d[1, 1] != 0
    prod = la.zeros((2, 2, 2))
    prod[0, 0, 0] = prod[1, 1, 1] = Fraction(1)
    # K x K: idempotents are rigid, no derivations
    assert derivation_basis(StructureAlgebra(prod)) == []


def test_classify_anchor():
    assert classify_anchor(fx.F2()) == "general"
    assert classify_anchor(fx.F1()) == "transitive"
    assert classify_anchor(fx.dual_numbers_regular()) == "regular"
    assert validate(fx.dual_numbers_regular()).ok


def test_sub_adjacent_brackets():
    assert la.is_zero(sub_adjacent(fx.F0()).bracket)
    assert la.is_zero(sub_adjacent(fx.F1()).bracket)
    assert la.is_zero(sub_adjacent(fx.F3()).bracket)
    g = sub_adjacent(n2())
    assert g.br(la.eye(2)[0], la.eye(2)[1])[1] == 1
    assert validate(g).ok


def test_sub_adjacent_rejects_invalid():
    T = la.zeros((2, 2, 2))
    T[0, 1, 0] = 1  # e1.e2 = e1 alone breaks left-symmetry
    assert first_broken_lsa_axiom(to_lists(T)) is not None
    with pytest.raises(PreconditionError):
        sub_adjacent(LsrAlgebra.over_ground_field(T))


def test_substructures():
    e2 = Subspace((la.qarray([0, 1]),))
    assert check_substructure(fx.F1(), e2, "subalgebra").ok
    assert check_substructure(fx.F1(), e2, "ideal").ok
    rep = check_substructure(fx.F3(), e2, "subalgebra")
    assert not rep.ok
    assert rep.first_failure().witness == (0, 0)
    e1 = Subspace((la.qarray([1, 0]),))
    assert check_substructure(fx.F1(), e1, "subalgebra").ok
    assert not check_substructure(fx.F1(), e1, "ideal").ok
    with pytest.raises(ValueError):
        check_substructure(fx.F1(), e1, "left ideal")


def test_morphisms():
    l = fx.F1()
    assert check_morphism(l, l, MorphismPair(la.eye(2), la.eye(1))).ok
    assert check_morphism(l, l, MorphismPair(la.zeros((2, 2)), la.eye(1))).ok
    rep = check_morphism(l, l, MorphismPair(fx.swap(), la.eye(1)))
    assert rep.first_failure().name == "f preserves product"
    assert rep.first_failure().witness == (0, 0)
    with pytest.raises(StructureError):
        check_morphism(l, l, MorphismPair(la.eye(3), la.eye(1)))


def test_trivial_extension():
    assert trivial_extension(fx.F0()).dim == 3
    ext = trivial_extension(fx.F2())
    assert ext.dim == fx.F2().dim + 2
    assert validate(ext).ok
    f1 = trivial_extension(fx.F1())
    assert la.is_zero(f1.product[:2, :2, :2] - fx.F1().product)
    assert la.is_zero(f1.product[2:, 2:, :])
    assert validate(trivial_extension(fx.dual_numbers_regular())).ok


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POOL), st.integers(0, 10**6))
def test_change_of_basis_preserves_validity(l, seed):
    p = random_invertible(random.Random(seed), l.dim)
    moved, _ = transport(l, trivial_rep(l, 1), p, la.eye(1))
    assert validate(moved).ok
    assert first_broken_lsa_axiom(to_lists(moved.product)) is None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POOL))
def test_constructions_preserve_validity(l):
    assert validate(sub_adjacent(l)).ok
    if l.dim <= 3:
        assert validate(trivial_extension(l)).ok


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(POOL), st.integers(0, 10**6))
def test_change_of_basis_is_a_morphism(l, seed):
    p = random_invertible(random.Random(seed), l.dim)
    moved, _ = transport(l, trivial_rep(l, 1), p, la.eye(1))
    # transport sends e_i to P e_i, so P^-1 maps the old coordinates to the new ones
    assert check_morphism(l, moved, MorphismPair(la.inverse(p), la.eye(1))).ok
    assert check_morphism(moved, l, MorphismPair(p, la.eye(1))).ok
