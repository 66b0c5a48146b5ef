import random

import pytest
from hypothesis import given, settings, strategies as st

from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit.algebra import left_multiplications, right_multiplications, validate
from lsrkit.deformation import (FormalAutomorphism, TruncatedDeformation, apply_equivalence, check_deformation,
                                infinitesimal, nijenhuis_differential, nijenhuis_trivial_deformation,
                                obstruction, one_param_from_cocycle, rigidity_certificate, try_extend)
from lsrkit.report import PreconditionError, StructureError

from instances import base_pool
from oracles import HomSpace, deformation_orders_failing, first_broken_lsa_axiom, oracle_coboundary, to_lists

N = fx.projection_e1()
SMALL_BASES = [b for b in base_pool() if b.dim <= 3]


def e1e2_is_e1():
    """``m(e1, e2) = e1``: fails the order-one equation over F1."""
    m = la.zeros((2, 2, 2))
    m[0, 1, 0] = 1
    return m


def oracle_delta1(l, phi):
    """Coboundary of a 1-cochain in the adjoint pair, from the loop oracle."""
    n = l.dim
    T = to_lists(l.product)
    rho, mu = to_lists(left_multiplications(l.product)), to_lists(right_multiplications(l.product))
    src = HomSpace(1, n, n)
    p = to_lists(phi)
    vec = [p[r][last] for (_, last, r) in src.keys]
    delta = oracle_coboundary(T, rho, mu, src, vec)
    return [[delta((x, y)) for y in range(n)] for x in range(n)]


def test_structure_errors():
    with pytest.raises(StructureError):
        TruncatedDeformation(fx.F1(), [])
    with pytest.raises(StructureError):
        TruncatedDeformation(fx.F1(), [la.zeros((3, 3, 3))])
    with pytest.raises(StructureError):
        FormalAutomorphism([la.eye(2), la.eye(3)])


def test_nijenhuis_exact_term_passes():
    d, report = nijenhuis_trivial_deformation(fx.F1(), N)
    assert report.ok
    assert "(Id + tN) is a homomorphism at t = 1/2" in report
    assert check_deformation(d).ok
    assert to_lists(d.terms[0]) == oracle_delta1(fx.F1(), N)


def test_nijenhuis_trivial_deformation_needs_nijenhuis():
    with pytest.raises(PreconditionError):
        nijenhuis_trivial_deformation(fx.F1(), fx.swap())


def test_f0_with_f3_product():
    m = fx.F3().product
    d = TruncatedDeformation(fx.F0(), [m, la.zeros((2, 2, 2))])
    assert check_deformation(d).ok
    obs, report = obstruction(TruncatedDeformation(fx.F0(), [m]))
    assert report.ok and report.data["zero"] and obs.is_zero()


def test_failing_first_order_term():
    d = TruncatedDeformation(fx.F1(), [e1e2_is_e1()])
    report = check_deformation(d)
    assert deformation_orders_failing(fx.F1().product, d.terms) >= {1}
    failure = report.first_failure()
    assert failure.name == "order 1: deformation equation"
    assert failure.witness == (0, 1, 1)


def test_commuting_perturbation_of_f1_is_a_deformation():
    # F1 + t F3-product is K[x]/(x^2 - t): commutative and associative
    d = TruncatedDeformation(fx.F1(), [fx.F3().product])
    assert check_deformation(d).ok
    assert not deformation_orders_failing(fx.F1().product, d.terms)


def test_infinitesimal():
    m1 = nijenhuis_differential(fx.F1(), N)
    cochain, report = infinitesimal(TruncatedDeformation(fx.F1(), [la.zeros((2, 2, 2)), m1]))
    assert report.ok and report.data["index"] == 2
    assert la.is_zero(cochain.full - m1)
    none, report = infinitesimal(TruncatedDeformation(fx.F1(), [la.zeros((2, 2, 2))]))
    assert none is None and report.data["index"] is None
    with pytest.raises(PreconditionError):
        infinitesimal(TruncatedDeformation(fx.F1(), [e1e2_is_e1()]))


def test_trivial_deformation_moved_by_n():
    d = TruncatedDeformation(fx.F1(), [la.zeros((2, 2, 2))])
    moved = apply_equivalence(d, FormalAutomorphism([N]))
    assert la.is_zero(d.terms[0] - moved.terms[0] - nijenhuis_differential(fx.F1(), N))
    assert to_lists(d.terms[0] - moved.terms[0]) == oracle_delta1(fx.F1(), N)


def test_equivalence_needs_a_linear_maps():
    l = fx.F2()
    d = TruncatedDeformation(l, [la.zeros((2, 2, 2))])
    phi = la.zeros((2, 2))
    phi[0, 1] = 1  # eps e -> e is not eps-linear
    with pytest.raises(PreconditionError):
        apply_equivalence(d, FormalAutomorphism([phi]))


def test_inverse_series():
    phi = FormalAutomorphism([la.qarray([[1, 2], [0, 1]]), la.qarray([[0, 1], [1, 0]])])
    inv = phi.inverse()
    a, b = phi.series(2, 2), inv.series(2, 2)
    for k in range(1, 3):
        assert la.is_zero(sum((a[i] @ b[k - i] for i in range(k + 1)), la.zeros((2, 2))))


def test_extension_of_nijenhuis_deformation():
    d, _ = nijenhuis_trivial_deformation(fx.F1(), N)
    obs, report = obstruction(d)
    assert report.ok
    m2 = try_extend(d)
    assert m2 is not None
    d2 = d.extended(m2)
    assert check_deformation(d2).ok
    assert not deformation_orders_failing(fx.F1().product, d2.terms)


def test_obstructed_deformation_of_f0():
    # the zero product has delta = 0, so a non left-symmetric m_1 is a
    # first-order deformation whose obstruction class cannot vanish
    m = la.zeros((2, 2, 2))
    m[0, 1, 0] = 1
    assert first_broken_lsa_axiom(to_lists(m)) is not None
    d = TruncatedDeformation(fx.F0(), [m])
    assert check_deformation(d).ok
    obs, report = obstruction(d)
    assert report.ok and not report.data["zero"]
    assert try_extend(d) is None


def test_one_parameter_families():
    rep = one_param_from_cocycle(fx.F1(), nijenhuis_differential(fx.F1(), N))
    assert rep.ok and all(rep.data["specializations"].values())
    assert validate(TruncatedDeformation(fx.F1(), [nijenhuis_differential(fx.F1(), N)]).specialize(1)).ok
    assert one_param_from_cocycle(fx.F0(), fx.F3().product).ok
    bad = one_param_from_cocycle(fx.F1(), e1e2_is_e1())
    assert not bad.ok and not bad.data["deformation for all t"]
    assert not bad["2-closed (cocycle condition)"].passed


def test_rigidity():
    assert rigidity_certificate(fx.F0())["h2"] == 8
    assert rigidity_certificate(fx.F1())["h2"] == 2
    cert = rigidity_certificate(fx.unit_line())
    assert cert["h2"] == 0 and cert["rigid_hint"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL_BASES), st.integers(0, 10**6))
def test_first_order_verdict_matches_oracle(l, seed):
    rng = random.Random(seed)
    n = l.dim
    if rng.random() < 0.5:
        # coboundaries are always first-order deformations
        m = nijenhuis_differential(l, la.qarray([[rng.randint(-1, 1) for _ in range(n)] for _ in range(n)]))
    else:
        m = la.qarray([[[rng.choice([0, 0, 1, -1]) for _ in range(n)] for _ in range(n)] for _ in range(n)])
    report = check_deformation(TruncatedDeformation(l, [m]))
    assert report.ok == (1 not in deformation_orders_failing(l.product, [m]))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([b for b in SMALL_BASES if b.dim <= 2]), st.integers(0, 10**6))
def test_equivalence_round_trip(l, seed):
    rng = random.Random(seed)
    n = l.dim

    def rand_matrix():
        return la.qarray([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])

    d = TruncatedDeformation(l, [nijenhuis_differential(l, rand_matrix())])
    m2 = try_extend(d)
    if m2 is not None:
        d = d.extended(m2)
    phi = FormalAutomorphism([rand_matrix() for _ in range(d.order)])
    moved = apply_equivalence(d, phi)
    assert check_deformation(moved).ok
    assert la.is_zero(d.terms[0] - moved.terms[0] - nijenhuis_differential(l, phi.maps[0]))
    back = apply_equivalence(moved, phi.inverse())
    for a, b in zip(back.terms, d.terms):
        assert la.is_zero(a - b)
