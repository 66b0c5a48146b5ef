"""Representations of LSR and Lie-Rinehart algebras, semidirect products,
adjoint and dual representations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from . import linalg as la
from .algebra import (
    LieRinehartAlgebra,
    LsrAlgebra,
    anchor_checks,
    left_multiplications,
    module_checks,
    right_multiplications,
    sub_adjacent,
)
from .report import Check, InvariantViolation, PreconditionError, Report, StructureError, tensor_check

__all__ = [
    "RepresentationBundle",
    "validate_representation",
    "semidirect_product",
    "adjoint_rep",
    "derived_reps",
    "trivial_rep",
]

Kind = Literal["lsr-pair", "lie-module"]


@dataclass(frozen=True, eq=False)
class RepresentationBundle:
    """Module ``M`` with ``A``-action and the operators ``rho(e_i)``, ``mu(e_i)``.

    For ``kind == "lie-module"`` the map ``rho`` is the action ``theta`` and
    ``mu`` is ``None``.
    """

    kind: Kind
    action: np.ndarray
    rho: np.ndarray
    mu: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in ("lsr-pair", "lie-module"):
            raise StructureError(f"kind: unknown representation kind {self.kind!r}")
        action, rho = la.qarray(self.action), la.qarray(self.rho)
        if action.ndim != 3 or action.shape[1] != action.shape[2]:
            raise StructureError(f"action: expected shape (dim_a, dim_m, dim_m), got {action.shape}")
        m = action.shape[1]
        if rho.ndim != 3 or rho.shape[1:] != (m, m):
            raise StructureError(f"rho: expected shape (dim_l, {m}, {m}), got {rho.shape}")
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "rho", rho)
        if self.kind == "lsr-pair":
            if self.mu is None:
                raise StructureError("mu: required for an lsr-pair representation")
            mu = la.qarray(self.mu)
            if mu.shape != rho.shape:
                raise StructureError(f"mu: expected shape {rho.shape}, got {mu.shape}")
            object.__setattr__(self, "mu", mu)
        elif self.mu is not None:
            raise StructureError("mu: must be absent for a lie-module")

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def theta(self) -> np.ndarray:
        return self.rho

    def act(self, a) -> np.ndarray:
        return np.einsum("k,krs->rs", a, self.action)


def trivial_rep(base, dim_m: int | None = None, action=None) -> RepresentationBundle:
    """Zero operators on ``M``.

    Without ``action`` this is ``K^dim_m`` with ``A = K``.  Otherwise ``action``
    is the ``A``-module structure of ``M`` (shape ``(dim_a, dim_m, dim_m)``).
    The zero operators satisfy the Leibniz rule only when the anchor vanishes.
    """
    if action is None:
        if base.a.dim != 1:
            raise StructureError("trivial_rep needs A = K; supply the A-action explicitly otherwise")
        action = la.eye(dim_m).reshape(1, dim_m, dim_m)
    action = la.qarray(action)
    dim_m = action.shape[1]
    n = base.dim
    z = la.zeros((n, dim_m, dim_m))
    if isinstance(base, LieRinehartAlgebra):
        return RepresentationBundle("lie-module", action, z)
    return RepresentationBundle("lsr-pair", action, z, z.copy())


def _lie_rep_check(name, B, ops) -> Check:
    """``ops([x, y]) = [ops(x), ops(y)]`` where ``B`` is the bracket tensor."""
    n, m = ops.shape[0], ops.shape[1]
    lhs = np.einsum("ijc,crs->ijrs", B, ops)
    prod = np.einsum("irs,jst->ijrt", ops, ops)
    rhs = prod - np.einsum("ijrt->jirt", prod)
    return tensor_check(name, (lhs - rhs).reshape(n, n, m * m))


def _a_linear_check(name, base, rep_action, ops) -> Check:
    """``ops(a x) = a ops(x)``, witness ``(a, x)``."""
    n, m = ops.shape[0], ops.shape[1]
    lhs = np.einsum("kpi,prs->kirs", base.action, ops)
    rhs = np.einsum("krt,its->kirs", rep_action, ops)
    return tensor_check(name, (lhs - rhs).reshape(base.a.dim, n, m * m), note="witness (a, x)")


def _leibniz_check(name, base, rep_action, ops) -> Check:
    """``ops(x)(a m) = a ops(x) m + l(x)(a) m``, witness ``(x, a)``."""
    n, m, da = ops.shape[0], ops.shape[1], base.a.dim
    lhs = np.einsum("irs,kst->ikrt", ops, rep_action)
    rhs = np.einsum("krs,ist->ikrt", rep_action, ops) + np.einsum("iuk,urt->ikrt", base.anchor, rep_action)
    return tensor_check(name, (lhs - rhs).reshape(n, da, m * m), note="witness (x, a)")


def validate_representation(base, rep: RepresentationBundle) -> Report:
    """Validate ``rep`` against an LSR algebra (lsr-pair) or a Lie-Rinehart
    algebra (lie-module)."""
    if rep.rho.shape[0] != base.dim:
        raise StructureError(f"rho: has {rep.rho.shape[0]} operators, base has dim {base.dim}")
    if rep.action.shape[0] != base.a.dim:
        raise StructureError(f"action: has {rep.action.shape[0]} matrices, A has dim {base.a.dim}")
    n, m = base.dim, rep.dim
    if isinstance(base, LsrAlgebra):
        if rep.kind != "lsr-pair":
            raise StructureError("an LSR algebra needs an lsr-pair representation")
        out = Report("representation (rho, mu)")
        out.checks += module_checks(base.a, rep.action, "M")
        B = base.product - np.einsum("ijk->jik", base.product)
        out.add(_lie_rep_check("rho is a representation of the commutator", B, rep.rho))
        out.add(_a_linear_check("rho A-linearity", base, rep.action, rep.rho))
        out.add(_leibniz_check("rho Leibniz rule", base, rep.action, rep.rho))
        out.add(_a_linear_check("mu(ax) = a mu(x)", base, rep.action, rep.mu))
        lhs = np.einsum("irs,kst->kirt", rep.mu, rep.action)
        rhs = np.einsum("krs,ist->kirt", rep.action, rep.mu)
        out.add(tensor_check("mu(x)(am) = a mu(x)m", (lhs - rhs).reshape(base.a.dim, n, m * m),
                             note="witness (a, x)"))
        rho, mu = rep.rho, rep.mu
        comm = np.einsum("irs,jst->ijrt", rho, mu) - np.einsum("jrs,ist->ijrt", mu, rho)
        rhs = np.einsum("ijc,crt->ijrt", base.product, mu) - np.einsum("jrs,ist->ijrt", mu, mu)
        out.add(tensor_check("rho-mu compatibility", (comm - rhs).reshape(n, n, m * m),
                             note="rho(x)mu(y) - mu(y)rho(x) = mu(x.y) - mu(y)mu(x), witness (x, y)"))
        return out
    if isinstance(base, LieRinehartAlgebra):
        if rep.kind != "lie-module":
            raise StructureError("a Lie-Rinehart algebra needs a lie-module representation")
        out = Report("Lie-Rinehart module theta")
        out.checks += module_checks(base.a, rep.action, "M")
        out.add(_lie_rep_check("theta is a Lie representation", base.bracket, rep.rho))
        out.add(_a_linear_check("theta(ax, m) = a theta(x, m)", base, rep.action, rep.rho))
        out.add(_leibniz_check("theta(x, am) Leibniz rule", base, rep.action, rep.rho))
        return out
    raise TypeError(f"unsupported base {type(base).__name__}")


def _require_valid(base, rep):
    report = validate_representation(base, rep)
    if not report.ok:
        raise PreconditionError(f"representation fails {report.first_failure().name}", report)


def semidirect_product(base, rep: RepresentationBundle, check: bool = True):
    """Structure on ``L + M``; ``M`` is an abelian ideal killed by the anchor."""
    if isinstance(base, LsrAlgebra) != (rep.kind == "lsr-pair"):
        raise StructureError("representation kind does not match the base structure")
    if check:
        _require_valid(base, rep)
    n, m, da = base.dim, rep.dim, base.a.dim
    N = n + m
    P = la.zeros((N, N, N))
    action = la.zeros((da, N, N))
    action[:, :n, :n] = base.action
    action[:, n:, n:] = rep.action
    anchor = la.zeros((N, da, da))
    anchor[:n] = base.anchor
    if isinstance(base, LsrAlgebra):
        P[:n, :n, :n] = base.product
        # e_i . f_j = rho(e_i) f_j ;  f_j . e_i = mu(e_i) f_j
        P[:n, n:, n:] = np.einsum("irj->ijr", rep.rho)
        P[n:, :n, n:] = np.einsum("irj->jir", rep.mu)
        return LsrAlgebra(base.a, action, P, anchor)
    P[:n, :n, :n] = base.bracket
    P[:n, n:, n:] = np.einsum("irj->ijr", rep.rho)
    P[n:, :n, n:] = -np.einsum("irj->jir", rep.rho)
    return LieRinehartAlgebra(base.a, action, P, anchor)


def adjoint_rep(l: LsrAlgebra) -> tuple[RepresentationBundle, Report]:
    """``(L; ad^L, ad^R)`` with its validation report.

    With a nonzero anchor ``ad^R`` is generally not A-linear, so the report
    can fail; callers decide what to do with that.
    """
    rep = RepresentationBundle("lsr-pair", l.action, left_multiplications(l.product),
                               right_multiplications(l.product))
    return rep, validate_representation(l, rep)


def _dual(rep: RepresentationBundle, rho, mu) -> RepresentationBundle:
    action = np.ascontiguousarray(np.einsum("krs->ksr", rep.action))
    return RepresentationBundle("lsr-pair", action, rho, mu)


def _transpose_neg(ops):
    return -np.ascontiguousarray(np.einsum("irs->isr", ops))


def derived_reps(base: LsrAlgebra, rep: RepresentationBundle) -> dict:
    """Sub-adjacent module ``rho - mu``, dual pair ``(rho* - mu*, -mu*)``, and
    the report comparing the three equivalent dual-representation conditions."""
    if rep.kind != "lsr-pair":
        raise StructureError("derived_reps needs an lsr-pair representation")
    _require_valid(base, rep)
    lie = sub_adjacent(base)
    theta = RepresentationBundle("lie-module", rep.action, rep.rho - rep.mu)
    rho_s, mu_s = _transpose_neg(rep.rho), _transpose_neg(rep.mu)
    dual = _dual(rep, rho_s - mu_s, -mu_s)

    report = Report("derived representations")
    report.add(Check("(M, rho - mu) is a sub-adjacent module", validate_representation(lie, theta).ok))
    report.add(Check("(M*, rho* - mu*, -mu*) is a representation", validate_representation(base, dual).ok))

    cond1 = validate_representation(base, RepresentationBundle("lsr-pair", rep.action, rep.rho - rep.mu, -rep.mu)).ok
    cond2 = validate_representation(base, _dual(rep, rho_s, mu_s)).ok
    mm = np.einsum("irs,jst->ijrt", rep.mu, rep.mu)
    swapped = np.einsum("ijrt->jirt", mm)
    commute = la.is_zero(mm - swapped)
    anticommute = la.is_zero(mm + swapped)
    report.data.update({"(M; rho-mu, -mu) valid": cond1, "(M*; rho*, mu*) valid": cond2,
                        "mu operators commute": commute, "mu operators anticommute": anticommute})
    report.add(Check("(M; rho-mu, -mu) valid iff (M*; rho*, mu*) valid", cond1 == cond2,
                     note=f"(1)={cond1} (2)={cond2}"))
    # expanding either condition with the rho-mu identity leaves
    # mu(x)mu(y) + mu(y)mu(x) = 0, so anticommutation is the third equivalent
    report.add(Check("(1) iff mu(x)mu(y) = -mu(y)mu(x)", cond1 == anticommute,
                     note=f"anticommute={anticommute}"))
    report.data["commutation agrees with (1)"] = commute == cond1

    left = sub_adjacent(semidirect_product(base, rep, check=False), check=False)
    right = semidirect_product(lie, theta, check=False)
    same_i = _same_structure(left, right)
    zero_mu = la.zeros(rep.mu.shape)
    a = sub_adjacent(semidirect_product(base, _dual(rep, rho_s, zero_mu), check=False), check=False)
    b = sub_adjacent(semidirect_product(base, dual, check=False), check=False)
    same_ii = _same_structure(a, b)
    report.add(Check("L x (rho,mu) M and L x_theta M share the sub-adjacent algebra", same_i))
    report.add(Check("L x (rho*,0) M* and L x (rho*-mu*,-mu*) M* share the sub-adjacent algebra", same_ii))
    return {"sub_adjacent_module": theta, "dual_rep": dual, "equivalence_report": report}


def _same_structure(x: LieRinehartAlgebra, y: LieRinehartAlgebra) -> bool:
    return (x.bracket.shape == y.bracket.shape
            and la.is_zero(x.bracket - y.bracket)
            and la.is_zero(x.action - y.action)
            and la.is_zero(x.anchor - y.anchor))
