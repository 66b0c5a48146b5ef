"""Formal deformations of the product of an LSR algebra, truncated at ``t^n``.

Only the product is deformed; the A-action and the anchor stay fixed.  A
truncated deformation is ``m_t = m_0 + t m_1 + ... + t^n m_n`` with ``m_0`` the
base product.  Equivalences act by ``m~_t = Phi_t m_t(Phi_t^{-1}., Phi_t^{-1}.)``,
so that ``Phi_t`` is a morphism from ``m_t`` to ``m~_t`` and the first-order
terms differ by ``delta(phi_1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import LsrAlgebra, validate
from .cohomology import Cochain, CochainComplex, coboundary_full
from .report import Check, InvariantViolation, PreconditionError, Report, StructureError, tensor_check
from .representations import adjoint_rep

__all__ = [
    "TruncatedDeformation",
    "FormalAutomorphism",
    "pair_residual",
    "a_bilinearity_residual",
    "check_deformation",
    "infinitesimal",
    "apply_equivalence",
    "obstruction",
    "try_extend",
    "one_param_from_cocycle",
    "nijenhuis_differential",
    "nijenhuis_trivial_deformation",
    "rigidity_certificate",
]

SPOT_VALUES = (Fraction(1), Fraction(2), Fraction(1, 2))


def pair_residual(mi, mj) -> np.ndarray:
    """``mi(mj(x,y),z) - mi(x,mj(y,z)) - (x <-> y)`` indexed ``[x, y, z, r]``."""
    assoc = np.einsum("xyc,czr->xyzr", mj, mi) - np.einsum("yzc,xcr->xyzr", mj, mi)
    return assoc - np.einsum("xyzr->yxzr", assoc)


def a_bilinearity_residual(action, m) -> np.ndarray:
    """Stacked defects of ``m(ax,y) = m(x,ay) = a m(x,y)``, indexed ``[slot, a, x, y, r]``."""
    scaled = np.einsum("krs,xys->kxyr", action, m)
    first = np.einsum("kpx,pyr->kxyr", action, m) - scaled
    second = np.einsum("kqy,xqr->kxyr", action, m) - scaled
    return np.stack([first, second])


@dataclass(eq=False)
class TruncatedDeformation:
    base: LsrAlgebra
    terms: list

    def __post_init__(self):
        n = self.base.dim
        self.terms = [la.qarray(m) for m in self.terms]
        if not self.terms:
            raise StructureError("a truncated deformation needs at least one term")
        for i, m in enumerate(self.terms, 1):
            if m.shape != (n, n, n):
                raise StructureError(f"term m_{i} has shape {m.shape}, expected {(n, n, n)}")

    @property
    def order(self) -> int:
        return len(self.terms)

    def term(self, i: int) -> np.ndarray:
        """``m_i`` with ``m_0`` the base product and zero beyond the order."""
        if i == 0:
            return self.base.product
        if i <= self.order:
            return self.terms[i - 1]
        return la.zeros(self.base.product.shape)

    def extended(self, m_next) -> "TruncatedDeformation":
        return TruncatedDeformation(self.base, self.terms + [la.qarray(m_next)])

    def specialize(self, t) -> LsrAlgebra:
        t = la.as_fraction(t)
        product = self.base.product.copy()
        for i, m in enumerate(self.terms, 1):
            product = product + m * t ** i
        return self.base.with_product(product)


@dataclass(eq=False)
class FormalAutomorphism:
    """``Phi_t = Id + sum_i t^i phi_i``; ``maps`` holds ``phi_1 .. phi_n``."""

    maps: list

    def __post_init__(self):
        self.maps = [la.qarray(p) for p in self.maps]
        shapes = {p.shape for p in self.maps}
        if len(shapes) > 1 or any(len(s) != 2 or s[0] != s[1] for s in shapes):
            raise StructureError("formal automorphism maps must be square matrices of one size")

    @property
    def order(self) -> int:
        return len(self.maps)

    def series(self, dim: int, order: int) -> list:
        out = [la.eye(dim)]
        for i in range(1, order + 1):
            out.append(self.maps[i - 1] if i <= self.order else la.zeros((dim, dim)))
        return out

    def inverse(self) -> "FormalAutomorphism":
        if not self.maps:
            return FormalAutomorphism([])
        dim = self.maps[0].shape[0]
        phi = self.series(dim, self.order)
        psi = [la.eye(dim)]
        for k in range(1, self.order + 1):
            acc = la.zeros((dim, dim))
            for p in range(1, k + 1):
                acc = acc - phi[p] @ psi[k - p]
            psi.append(acc)
        return FormalAutomorphism(psi[1:])

    def a_linearity_check(self, l: LsrAlgebra) -> Check:
        res = la.zeros((max(self.order, 1), l.a.dim, l.dim, l.dim))
        for i, p in enumerate(self.maps):
            res[i] = np.einsum("rs,kst->krt", p, l.action) - np.einsum("krs,st->krt", l.action, p)
        check = tensor_check("phi_i A-linear", res.reshape(-1, l.dim))
        return check


def _bilinearity_check(l, i, m) -> Check:
    res = a_bilinearity_residual(l.action, m)
    return tensor_check(f"m_{i}: A-bilinear", res, "indexed (slot, a, x, y)")


def check_deformation(d: TruncatedDeformation) -> Report:
    """Order-by-order deformation equations and A-bilinearity of every term."""
    report = Report(f"deformation of order {d.order}")
    for i, m in enumerate(d.terms, 1):
        report.add(_bilinearity_check(d.base, i, m))
    for k in range(1, d.order + 1):
        res = sum((pair_residual(d.term(i), d.term(k - i)) for i in range(k + 1)),
                  la.zeros((d.base.dim,) * 4))
        report.add(tensor_check(f"order {k}: deformation equation", res, "indexed (x, y, z)"))
    return report


def _adjoint_complex(l: LsrAlgebra) -> CochainComplex:
    rep, rep_report = adjoint_rep(l)
    if not rep_report.ok:
        raise PreconditionError(
            f"adjoint pair fails {rep_report.first_failure().name}; the deformation complex needs it",
            rep_report)
    return CochainComplex(l, rep, check_rep=False)


def _cocycle_check(cx: CochainComplex, cochain: Cochain, name: str) -> Check:
    image = coboundary_full(cx.l, cx.rep, cochain.full, cochain.degree)
    return tensor_check(name, image.reshape(-1, cx.l.dim))


def infinitesimal(d: TruncatedDeformation) -> tuple[Optional[Cochain], Report]:
    """First nonzero term as a 2-cochain of the adjoint pair, with its cocycle check."""
    report = Report("infinitesimal")
    pre = check_deformation(d)
    if not pre.ok:
        raise PreconditionError(f"not a deformation: {pre.first_failure().name}", pre)
    nonzero = [(i, m) for i, m in enumerate(d.terms, 1) if not la.is_zero(m)]
    if not nonzero:
        report.data["index"] = None
        return None, report
    i, m = nonzero[0]
    cx = _adjoint_complex(d.base)
    cochain = cx.space(2).from_tensor(m)
    report.data["index"] = i
    report.add(_cocycle_check(cx, cochain, f"delta(m_{i}) = 0"))
    if not report.ok:
        raise InvariantViolation(f"the {i}-infinitesimal of a deformation is not a cocycle")
    return cochain, report


def _transform(d: TruncatedDeformation, phi: list, psi: list) -> list:
    """Terms of ``Phi m_t(Psi ., Psi .)`` up to order ``d.order`` (index 0 included)."""
    n = d.order
    inner = []
    for k in range(n + 1):
        acc = la.zeros(d.base.product.shape)
        for b in range(k + 1):
            for c in range(k - b + 1):
                e = k - b - c
                acc = acc + np.einsum("qy,xqr->xyr", psi[e], np.einsum("px,pqr->xqr", psi[c], d.term(b)))
        inner.append(acc)
    out = []
    for k in range(n + 1):
        acc = la.zeros(d.base.product.shape)
        for a in range(k + 1):
            acc = acc + np.einsum("sr,xyr->xys", phi[a], inner[k - a])
        out.append(acc)
    return out


def apply_equivalence(d: TruncatedDeformation, phi: FormalAutomorphism) -> TruncatedDeformation:
    """Transport ``d`` along ``Phi_t``; missing ``phi_i`` beyond its order count as zero."""
    check = phi.a_linearity_check(d.base) if phi.maps else Check("phi_i A-linear", True)
    if not check.passed:
        raise PreconditionError(f"formal automorphism is not A-linear (witness {check.witness})",
                                Report("equivalence", [check]))
    dim = d.base.dim
    series = phi.series(dim, d.order)
    inv = FormalAutomorphism(series[1:]).inverse().series(dim, d.order)
    terms = _transform(d, series, inv)
    if not la.is_zero(terms[0] - d.base.product):
        raise InvariantViolation("equivalence changed the undeformed product")
    return TruncatedDeformation(d.base, terms[1:])


def obstruction(d: TruncatedDeformation) -> tuple[Cochain, Report]:
    """Obstruction 3-cochain for extending ``d`` to order ``n + 1``, with its cocycle check."""
    pre = check_deformation(d)
    if not pre.ok:
        raise PreconditionError(f"not a deformation: {pre.first_failure().name}", pre)
    n = d.order
    obs = sum((pair_residual(d.term(i), d.term(n + 1 - i)) for i in range(1, n + 1)),
              la.zeros((d.base.dim,) * 4))
    cx = _adjoint_complex(d.base)
    cochain = cx.space(3).from_tensor(obs)
    report = Report(f"obstruction at order {n + 1}")
    report.add(_cocycle_check(cx, cochain, "delta(Obs) = 0"))
    report.data["zero"] = cochain.is_zero()
    if not report.ok:
        raise InvariantViolation("obstruction cochain is not a cocycle")
    return cochain, report


def try_extend(d: TruncatedDeformation) -> Optional[np.ndarray]:
    """A term ``m_{n+1}`` with ``delta(m_{n+1}) = Obs``, or ``None`` when the class is nonzero.

    When solutions exist the one with zero free coordinates is returned, so a
    vanishing obstruction gives ``m_{n+1} = 0``.
    """
    obs, _ = obstruction(d)
    cx = _adjoint_complex(d.base)
    D = cx.matrix(2)
    solution = la.solve_affine(D, obs.coeffs)
    aug = np.concatenate([D, obs.coeffs.reshape(-1, 1)], axis=1)
    consistent = la.rank(aug) == la.rank(D)
    if consistent != (solution is not None):
        raise InvariantViolation("solver and rank test disagree on the obstruction class")
    if solution is None:
        return None
    m_next = cx.space(2).element(solution[0]).full
    if not check_deformation(d.extended(m_next)).ok:
        raise InvariantViolation("extension solves the obstruction equation but is not a deformation")
    return m_next


def one_param_from_cocycle(l: LsrAlgebra, m) -> Report:
    """Whether ``m_t = . + t m`` is a deformation for every ``t``."""
    m = la.qarray(m)
    bil = _bilinearity_check(l, 1, m)
    if not bil.passed:
        raise PreconditionError(f"m is not A-bilinear (witness {bil.witness})", Report("one-parameter", [bil]))
    report = Report("one-parameter deformation")
    closed = pair_residual(l.product, m) + pair_residual(m, l.product)
    report.add(tensor_check("2-closed (cocycle condition)", closed, "indexed (x, y, z)"))
    report.add(tensor_check("m is left-symmetric", pair_residual(m, m), "indexed (x, y, z)"))
    expected = report.ok
    spots = {}
    for t in SPOT_VALUES:
        spots[la.format_rational(t)] = validate(TruncatedDeformation(l, [m]).specialize(t)).ok
    report.data["specializations"] = spots
    report.data["deformation for all t"] = expected
    if expected and not all(spots.values()):
        raise InvariantViolation("both conditions hold but a specialization fails validation")
    if not expected and all(spots.values()):
        raise InvariantViolation("specializations validate although a condition fails")
    return report


def nijenhuis_differential(l: LsrAlgebra, n) -> np.ndarray:
    """``x.N(y) + N(x).y - N(x.y)``: the coboundary of ``N`` in the adjoint pair."""
    n = la.qarray(n)
    T = l.product
    return (np.einsum("qy,xqr->xyr", n, T) + np.einsum("px,pyr->xyr", n, T)
            - np.einsum("rs,xys->xyr", n, T))


def nijenhuis_trivial_deformation(l: LsrAlgebra, n) -> tuple[TruncatedDeformation, Report]:
    """Order-one deformation ``m_1 = delta N`` and the witness that ``Id + tN`` trivialises it."""
    from .operators import check_nijenhuis

    n = la.qarray(n)
    nij = check_nijenhuis(l, n)
    if not nij.ok:
        raise PreconditionError(f"operator is not Nijenhuis: {nij.first_failure().name} "
                                f"fails at {nij.first_failure().witness}", nij)
    d = TruncatedDeformation(l, [nijenhuis_differential(l, n)])
    report = Report("Nijenhuis trivial deformation")
    report.extend(check_deformation(d))
    T = l.product
    eye = la.eye(l.dim)
    for t in SPOT_VALUES:
        phi = eye + n * t
        deformed = T + d.terms[0] * t
        lhs = np.einsum("rs,xys->xyr", phi, deformed)
        rhs = np.einsum("qy,xqr->xyr", phi, np.einsum("px,pqr->xqr", phi, T))
        report.add(tensor_check(f"(Id + tN) is a homomorphism at t = {la.format_rational(t)}", lhs - rhs))
    return d, report


def rigidity_certificate(l: LsrAlgebra) -> dict:
    """``H^2`` of the adjoint pair; zero is sufficient for rigidity, not necessary."""
    cx = _adjoint_complex(l)
    h2 = cx.dims(2).h
    return {
        "h2": h2,
        "rigid_hint": h2 == 0,
        "note": "h2 = 0 implies every deformation is trivial; h2 > 0 does not imply non-rigidity",
    }
