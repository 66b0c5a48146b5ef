"""Nijenhuis, Rota-Baxter and O-operators on LSR and Lie-Rinehart algebras.

Operators on ``L`` are ``dim_l x dim_l`` matrices acting on coordinate
columns; module maps ``T: M -> L`` are ``dim_l x dim_m`` matrices.  Every check
returns a :class:`Report` whose truth value is the verdict.
"""
from __future__ import annotations

from itertools import product as iproduct
from typing import Iterator, Optional

import numpy as np

from . import linalg as la
from .algebra import LieRinehartAlgebra, LsrAlgebra, sub_adjacent, validate
from .report import Check, InvariantViolation, PreconditionError, Report, StructureError, tensor_check
from .representations import RepresentationBundle, semidirect_product

__all__ = [
    "nijenhuis_residual",
    "literal_nijenhuis_residual",
    "power_identity_residual",
    "check_nijenhuis",
    "deformed_product",
    "deformed_anchor",
    "deformed_structure",
    "deformed_structures",
    "polynomial_nijenhuis",
    "rota_baxter_residual",
    "check_rota_baxter",
    "check_o_operator",
    "cross_residual",
    "induced_algebra_from_o_operator",
    "lift_operators",
    "lift_to_semidirect",
    "o_operator_compatibility",
    "quotient_nijenhuis",
    "invertible_pair_equivalence",
    "composition_condition",
    "operator_grid",
    "search_operators",
    "MAX_GRID",
]

MAX_GRID = 200_000


def _apply(op, t):
    """Apply a matrix to the output slot of a bilinear tensor ``[x, y, r]``."""
    return np.einsum("rs,xys->xyr", op, t)


def _bil(T, u, v):
    """``T(u e_x, v e_y)`` for matrices ``u, v`` precomposed on the two slots."""
    return np.einsum("qy,xqr->xyr", v, np.einsum("px,pqr->xqr", u, T))


def _tensor_of(structure) -> np.ndarray:
    if isinstance(structure, LieRinehartAlgebra):
        return structure.bracket
    if isinstance(structure, LsrAlgebra):
        return structure.product
    raise StructureError(f"expected an LSR or Lie-Rinehart algebra, got {type(structure).__name__}")


def _operator(structure, n) -> np.ndarray:
    n = la.qarray(n)
    if n.shape != (structure.dim, structure.dim):
        raise StructureError(f"operator has shape {n.shape}, expected {(structure.dim, structure.dim)}")
    return n


def _module_map(base, rep: RepresentationBundle, t) -> np.ndarray:
    t = la.qarray(t)
    if t.shape != (base.dim, rep.dim):
        raise StructureError(f"module map has shape {t.shape}, expected {(base.dim, rep.dim)}")
    return t


def _op_a_linear(structure, n) -> Check:
    act = structure.action
    res = np.einsum("rs,kst->krt", n, act) - np.einsum("krs,st->krt", act, n)
    return tensor_check("A-linearity", res.reshape(-1, structure.dim), "indexed (a, x)")


def _map_a_linear(base, rep, t) -> Check:
    res = np.einsum("rs,kst->ktr", t, rep.action) - np.einsum("krs,st->ktr", base.action, t)
    return tensor_check("A-linearity", res, "indexed (a, u)")


def _identity(n):
    return la.eye(n.shape[0])


# Nijenhuis operators


def nijenhuis_residual(structure, n) -> np.ndarray:
    T, eye = _tensor_of(structure), _identity(n)
    if isinstance(structure, LieRinehartAlgebra):
        inner = _bil(T, n, eye) + _bil(T, eye, n) - _apply(n, T)
        return _bil(T, n, n) - _apply(n, inner)
    return _bil(T, n, n) - _apply(n, _bil(T, n, eye)) - _apply(n, _bil(T, eye, n)) + _apply(n @ n, T)


def literal_nijenhuis_residual(structure, n) -> np.ndarray:
    """``N(x).N(y) - x.N(y) - N(x).y + N^2(x.y)`` exactly as first displayed."""
    T, eye = _tensor_of(structure), _identity(n)
    return _bil(T, n, n) - _bil(T, eye, n) - _bil(T, n, eye) + _apply(n @ n, T)


def power_identity_residual(l: LsrAlgebra, n, j: int, k: int) -> np.ndarray:
    """``N^j x . N^k y - N^k(N^j x . y) - N^j(x . N^k y) + N^{j+k}(x . y)``."""
    nj, nk = la.matrix_power(n, j), la.matrix_power(n, k)
    T, eye = l.product, _identity(n)
    return (_bil(T, nj, nk) - _apply(nk, _bil(T, nj, eye)) - _apply(nj, _bil(T, eye, nk))
            + _apply(nj @ nk, T))


def check_nijenhuis(structure, n) -> Report:
    n = _operator(structure, n)
    report = Report("Nijenhuis operator")
    report.add(_op_a_linear(structure, n))
    report.add(tensor_check("Nijenhuis identity", nijenhuis_residual(structure, n), "indexed (x, y)"))
    if isinstance(structure, LsrAlgebra):
        report.data["literal displayed form holds"] = la.is_zero(literal_nijenhuis_residual(structure, n))
    return report


def deformed_product(l: LsrAlgebra, n) -> np.ndarray:
    """``x ._N y = x.N(y) + N(x).y - N(x.y)``."""
    T, eye = l.product, _identity(n)
    return _bil(T, eye, n) + _bil(T, n, eye) - _apply(n, T)


def deformed_anchor(l: LsrAlgebra, n) -> np.ndarray:
    """Anchor ``l o N`` as a tensor ``[x, p, q]``."""
    return np.einsum("px,pab->xab", n, l.anchor)


def deformed_structure(l: LsrAlgebra, n) -> LsrAlgebra:
    return l.with_product(deformed_product(l, n), deformed_anchor(l, n))


def _require_nijenhuis(structure, n, label="operator"):
    rep = check_nijenhuis(structure, n)
    if not rep.ok:
        bad = rep.first_failure()
        raise PreconditionError(f"{label} is not Nijenhuis: {bad.name} fails at {bad.witness}", rep)


def deformed_structures(l: LsrAlgebra, n, k_max: int) -> tuple[list, Report]:
    """``(L, ._{N^k}, l o N^k)`` for ``k = 0..k_max`` and the compatibility checks between them."""
    n = _operator(l, n)
    _require_nijenhuis(l, n)
    powers = [la.matrix_power(n, k) for k in range(2 * k_max + 1)]
    structures = [deformed_structure(l, powers[k]) for k in range(k_max + 1)]
    report = Report(f"deformed structures up to k = {k_max}")
    for k, s in enumerate(structures):
        report.add(Check(f"k={k}: validates", validate(s).ok))
    for k in range(k_max + 1):
        for j in range(1, k_max - k + 1):
            s_k, s_kj, nj = structures[k], structures[k + j], powers[j]
            tag = f"k={k}, l={j}"
            report.add(Check(f"{tag}: N^l Nijenhuis on k-structure", check_nijenhuis(s_k, nj).ok))
            twice = deformed_structure(s_k, nj)
            same = la.is_zero(twice.product - s_kj.product) and la.is_zero(twice.anchor - s_kj.anchor)
            report.add(Check(f"{tag}: (._N^k)_N^l = ._N^(k+l)", same))
            hom = _apply(nj, s_kj.product) - _bil(s_k.product, nj, nj)
            anchor = deformed_anchor(s_k, nj) - s_kj.anchor
            report.add(Check(f"{tag}: N^l homomorphism (k+l) -> k",
                             la.is_zero(hom) and la.is_zero(anchor)))
    return structures, report


def polynomial_nijenhuis(structure, n, coeffs, allow_negative_powers: bool = False,
                         min_power: int = 0) -> tuple[np.ndarray, Report]:
    """``sum_i c_i N^i`` with ``coeffs[0]`` multiplying ``N^min_power``."""
    n = _operator(structure, n)
    if min_power < 0 and not allow_negative_powers:
        raise ValueError("negative powers requested without allow_negative_powers")
    _require_nijenhuis(structure, n)
    if min_power < 0 and la.inverse(n) is None:
        raise PreconditionError("negative powers need an invertible operator")
    out = la.zeros(n.shape)
    for i, c in enumerate(coeffs):
        out = out + la.matrix_power(n, min_power + i) * la.as_fraction(c)
    report = check_nijenhuis(structure, out)
    if not report.ok:
        raise InvariantViolation("a polynomial in a Nijenhuis operator failed the Nijenhuis check")
    return out, report


# Rota-Baxter operators


def rota_baxter_residual(l: LsrAlgebra, r, weight) -> np.ndarray:
    T, eye = l.product, _identity(r)
    w = la.as_fraction(weight)
    return _bil(T, r, r) - _apply(r, _bil(T, r, eye) + _bil(T, eye, r)) - _apply(r, T) * w


def _rb_verdict(l, r, weight) -> bool:
    return _op_a_linear(l, r).passed and la.is_zero(rota_baxter_residual(l, r, weight))


def check_rota_baxter(l: LsrAlgebra, r, weight=0) -> Report:
    """Rota-Baxter identity of the given weight, plus the Nijenhuis bridges when ``r^2`` allows."""
    r = _operator(l, r)
    w = la.as_fraction(weight)
    report = Report(f"Rota-Baxter operator of weight {la.format_rational(w)}")
    report.add(_op_a_linear(l, r))
    report.add(tensor_check("Rota-Baxter identity", rota_baxter_residual(l, r, w), "indexed (x, y)"))
    sq, eye = r @ r, _identity(r)
    nij = check_nijenhuis(l, r).ok
    bridges = {}
    if la.is_zero(sq - eye):
        v = {"nijenhuis": nij, "r - Id is RB(2)": _rb_verdict(l, r - eye, 2),
             "r + Id is RB(-2)": _rb_verdict(l, r + eye, -2)}
        bridges["r^2 = Id"] = v
    if la.is_zero(sq):
        bridges["r^2 = 0"] = {"nijenhuis": nij, "RB(0)": _rb_verdict(l, r, 0)}
    if la.is_zero(sq - r):
        bridges["r^2 = r"] = {"nijenhuis": nij, "RB(-1)": _rb_verdict(l, r, -1)}
    for name, verdicts in bridges.items():
        report.add(Check(f"bridge {name}", len(set(verdicts.values())) == 1, note=str(verdicts)))
    report.data["bridges"] = bridges
    return report


# O-operators


def _require_kind(base, rep: RepresentationBundle):
    want = "lie-module" if isinstance(base, LieRinehartAlgebra) else "lsr-pair"
    if rep.kind != want:
        raise StructureError(f"{type(base).__name__} needs a {want} representation, got {rep.kind}")


def cross_residual(base, rep: RepresentationBundle, t1, t2) -> np.ndarray:
    """``B(T1, T2)``; ``B(T, T)`` is the O-operator defect and ``B(T1,T2) + B(T2,T1)`` the compatibility defect.

    LSR: ``T1u . T2v - T1(rho(T2u)v + mu(T2v)u)``.
    Lie: ``[T1u, T2v] - T1(theta(T2u)v - theta(T2v)u)``.
    """
    _require_kind(base, rep)
    T = _tensor_of(base)
    lhs = _bil(T, t1, t2)
    if isinstance(base, LieRinehartAlgebra):
        inner = np.einsum("pu,psv->uvs", t2, rep.theta) - np.einsum("pv,psu->uvs", t2, rep.theta)
    else:
        inner = np.einsum("pu,psv->uvs", t2, rep.rho) + np.einsum("pv,psu->uvs", t2, rep.mu)
    return lhs - _apply(t1, inner)


def _o_verdict(base, rep, t) -> bool:
    return _map_a_linear(base, rep, t).passed and la.is_zero(cross_residual(base, rep, t, t))


def check_o_operator(base, rep: RepresentationBundle, t) -> Report:
    _require_kind(base, rep)
    t = _module_map(base, rep, t)
    report = Report("O-operator")
    report.add(_map_a_linear(base, rep, t))
    report.add(tensor_check("O-operator identity", cross_residual(base, rep, t, t), "indexed (u, v)"))
    return report


def _require_o(base, rep, t, label):
    rep_ = check_o_operator(base, rep, t)
    if not rep_.ok:
        bad = rep_.first_failure()
        raise PreconditionError(f"{label} is not an O-operator: {bad.name} fails at {bad.witness}", rep_)


def induced_algebra_from_o_operator(base: LieRinehartAlgebra, rep: RepresentationBundle, t
                                    ) -> tuple[LsrAlgebra, Report]:
    """``u ._T v = theta(T(u))(v)`` with anchor ``l o T`` on ``M``."""
    if not isinstance(base, LieRinehartAlgebra):
        raise StructureError("induced_algebra_from_o_operator needs a Lie-Rinehart base")
    t = _module_map(base, rep, t)
    _require_o(base, rep, t, "T")
    prod = np.einsum("pu,psv->uvs", t, rep.theta)
    anchor = np.einsum("pu,pab->uab", t, base.anchor)
    out = LsrAlgebra(base.a, rep.action, prod, anchor)
    report = Report("algebra induced by an O-operator")
    report.extend(validate(out), prefix="M: ")
    sub = sub_adjacent(out, check=False)
    report.add(tensor_check("T[u,v] = [T(u),T(v)]", _apply(t, sub.bracket) - _bil(base.bracket, t, t),
                            "indexed (u, v)"))
    report.add(tensor_check("anchor = l o T", out.anchor - np.einsum("pu,pab->uab", t, base.anchor)))
    return out, report


def lift_operators(dim_l: int, dim_m: int, t, weight=0) -> dict:
    """Block operators ``R_{T,w}``, ``N_T`` and ``[[0,T],[0,Id]]`` on ``L + M``."""
    t, w = la.qarray(t), la.as_fraction(weight)
    size = dim_l + dim_m
    r = la.zeros((size, size))
    r[:dim_l, dim_l:] = t
    r[dim_l:, dim_l:] = la.eye(dim_m) * (-w)
    big = la.zeros((size, size))
    big[:dim_l, dim_l:] = t
    big[dim_l:, dim_l:] = la.eye(dim_m)
    small = la.zeros((size, size))
    small[:dim_l, dim_l:] = t
    return {"R": r, "N_big": big, "N_small": small}


def lift_to_semidirect(base, rep: RepresentationBundle, t, weight=0, check: bool = True) -> Report:
    """Compare the O-operator verdict for ``T`` with the verdicts of its lifts to ``L x| M``."""
    _require_kind(base, rep)
    t = _module_map(base, rep, t)
    semi = semidirect_product(base, rep, check=check)
    ops = lift_operators(base.dim, rep.dim, t, weight)
    w = la.format_rational(la.as_fraction(weight))
    verdicts = {"O-operator": _o_verdict(base, rep, t)}
    if isinstance(base, LieRinehartAlgebra):
        verdicts["T~ Nijenhuis"] = check_nijenhuis(semi, ops["N_small"]).ok
    else:
        verdicts[f"R_T,{w} Rota-Baxter weight {w}"] = _rb_verdict(semi, ops["R"], weight)
        verdicts["[[0,T],[0,Id]] Nijenhuis"] = check_nijenhuis(semi, ops["N_big"]).ok
        verdicts["N_T Nijenhuis"] = check_nijenhuis(semi, ops["N_small"]).ok
    report = Report("lifts to the semidirect product")
    for name, v in verdicts.items():
        report.add(Check(name, v))
    report.data["verdicts"] = verdicts
    report.data["agree"] = len(set(verdicts.values())) == 1
    if not report.data["agree"]:
        raise InvariantViolation(f"lift verdicts disagree: {verdicts}")
    return report


def o_operator_compatibility(base, rep: RepresentationBundle, t1, t2) -> Report:
    t1, t2 = _module_map(base, rep, t1), _module_map(base, rep, t2)
    _require_o(base, rep, t1, "T1")
    _require_o(base, rep, t2, "T2")
    cn = cross_residual(base, rep, t1, t2) + cross_residual(base, rep, t2, t1)
    report = Report("compatible O-operators")
    report.add(tensor_check("compatibility identity", cn, "indexed (u, v)"))
    if report.ok != _o_verdict(base, rep, t1 + t2):
        raise InvariantViolation("compatibility identity disagrees with T1 + T2 being an O-operator")
    if report.ok:
        for k1, k2 in ((1, 1), (2, 3), (-1, 1)):
            report.add(Check(f"{k1} T1 + {k2} T2 is an O-operator", _o_verdict(base, rep, t1 * k1 + t2 * k2)))
    return report


def quotient_nijenhuis(base, rep: RepresentationBundle, t1, t2) -> tuple[np.ndarray, Report]:
    """``N = T1 T2^{-1}`` for compatible O-operators with ``T2`` invertible."""
    t1, t2 = _module_map(base, rep, t1), _module_map(base, rep, t2)
    inv2 = la.inverse(t2)
    if inv2 is None:
        raise PreconditionError("T2 is not invertible")
    compat = o_operator_compatibility(base, rep, t1, t2)
    if not compat.ok:
        raise PreconditionError("T1 and T2 are not compatible", compat)
    n = t1 @ inv2
    report = check_nijenhuis(base, n)
    if not report.ok:
        raise InvariantViolation("quotient of compatible O-operators is not Nijenhuis")
    if la.inverse(t1) is not None:
        report.add(Check("both invertible: compatible <=> N Nijenhuis", True))
    return n, report


def invertible_pair_equivalence(base, rep: RepresentationBundle, t1, t2) -> Report:
    """For invertible O-operators: compatible iff ``T1 T2^{-1}`` is Nijenhuis."""
    t1, t2 = _module_map(base, rep, t1), _module_map(base, rep, t2)
    if la.inverse(t1) is None or la.inverse(t2) is None:
        raise PreconditionError("both module maps must be invertible")
    compatible = o_operator_compatibility(base, rep, t1, t2)
    nij = check_nijenhuis(base, t1 @ la.inverse(t2))
    report = Report("invertible pair")
    report.add(Check("compatible <=> N Nijenhuis", compatible.ok == nij.ok,
                     note=f"compatible={compatible.ok}, nijenhuis={nij.ok}"))
    report.data.update(compatible=compatible.ok, nijenhuis=nij.ok)
    return report


def composition_condition(base, rep: RepresentationBundle, n, t) -> Report:
    """Whether ``N T`` is an O-operator, via the N-wrapped identity and directly."""
    t, n = _module_map(base, rep, t), _operator(base, n)
    _require_o(base, rep, t, "T")
    _require_nijenhuis(base, n, "N")
    nt = n @ t
    wrapped = _apply(n, cross_residual(base, rep, nt, t) + cross_residual(base, rep, t, nt))
    report = Report("composition N o T")
    a = report.add(tensor_check("N-wrapped identity", wrapped, "indexed (u, v)"))
    b = report.add(Check("N o T is an O-operator", _o_verdict(base, rep, nt)))
    if a.passed != b.passed:
        raise InvariantViolation("N-wrapped identity and the O-operator check disagree")
    if b.passed and la.inverse(n) is not None:
        report.add(Check("T and N o T compatible", o_operator_compatibility(base, rep, t, nt).ok))
    return report


# Bounded searches


def operator_grid(rows: int, cols: int, bound: int = 1) -> Iterator[np.ndarray]:
    """All matrices with integer entries in ``[-bound, bound]``, lexicographic in row-major entries."""
    size = (2 * bound + 1) ** (rows * cols)
    if size > MAX_GRID:
        raise ValueError(f"grid of {size} matrices exceeds the search limit {MAX_GRID}")
    for entries in iproduct(range(-bound, bound + 1), repeat=rows * cols):
        yield la.qarray(np.array(entries, dtype=object).reshape(rows, cols))


def search_operators(structure, identity: str, bound: int = 1, weight=0,
                     rep: Optional[RepresentationBundle] = None) -> list:
    """Grid points satisfying ``nijenhuis``, ``rota-baxter`` or ``o-operator``."""
    if identity == "nijenhuis":
        test = lambda m: check_nijenhuis(structure, m).ok  # noqa: E731
        shape = (structure.dim, structure.dim)
    elif identity == "rota-baxter":
        test = lambda m: _rb_verdict(structure, m, weight)  # noqa: E731
        shape = (structure.dim, structure.dim)
    elif identity == "o-operator":
        if rep is None:
            raise ValueError("o-operator search needs a representation")
        test = lambda m: _o_verdict(structure, rep, m)  # noqa: E731
        shape = (structure.dim, rep.dim)
    else:
        raise ValueError(f"unknown identity {identity!r}")
    return [m for m in operator_grid(*shape, bound) if test(m)]
