"""Structure-constant models of commutative algebras, left-symmetric Rinehart
algebras and Lie-Rinehart algebras, with axiom validators and the basic
constructions (sub-adjacent algebra, trivial extension, substructures,
morphisms).

Conventions: vectors are columns, matrices act on the left.  A product
tensor ``T`` has ``e_i . e_j = sum_k T[i, j, k] e_k``.  ``action[k]`` is the
matrix of multiplication by the ``k``-th basis element of ``A`` on ``L``, and
``anchor[i]`` is the matrix of the derivation ``l(e_i)`` acting on ``A``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Union

import numpy as np

from . import linalg as la
from .report import Check, InvariantViolation, PreconditionError, Report, StructureError, tensor_check

__all__ = [
    "StructureAlgebra",
    "LsrAlgebra",
    "LieRinehartAlgebra",
    "Subspace",
    "MorphismPair",
    "validate",
    "validate_structure_algebra",
    "validate_lsr",
    "validate_lie_rinehart",
    "derivation_basis",
    "sub_adjacent",
    "classify_anchor",
    "check_substructure",
    "check_morphism",
    "trivial_extension",
    "left_multiplications",
    "right_multiplications",
    "bilinear",
]


def _shape_check(arr, shape, field):
    arr = la.qarray(arr)
    if arr.shape != tuple(shape):
        raise StructureError(f"{field}: expected shape {tuple(shape)}, got {arr.shape}")
    return arr


def bilinear(T, x, y):
    """Evaluate the bilinear map with structure tensor ``T`` on vectors."""
    return np.einsum("i,j,ijk->k", x, y, T)


def left_multiplications(T) -> np.ndarray:
    """``out[i]`` is the matrix of ``y -> e_i . y``."""
    return np.ascontiguousarray(np.einsum("ijk->ikj", T))


def right_multiplications(T) -> np.ndarray:
    """``out[j]`` is the matrix of ``x -> x . e_j``."""
    return np.ascontiguousarray(np.einsum("ijk->jki", T))


@dataclass(frozen=True, eq=False)
class StructureAlgebra:
    """Finite-dimensional commutative associative algebra ``A``."""

    product: np.ndarray
    unit: Optional[int] = None

    def __post_init__(self):
        p = la.qarray(self.product)
        if p.ndim != 3 or len(set(p.shape)) != 1:
            raise StructureError(f"product: expected a cubic rank-3 tensor, got shape {p.shape}")
        object.__setattr__(self, "product", p)
        if self.unit is not None and not 0 <= self.unit < p.shape[0]:
            raise StructureError(f"unit: index {self.unit} out of range for dim {p.shape[0]}")

    @property
    def dim(self) -> int:
        return self.product.shape[0]

    def multiplication_matrices(self) -> np.ndarray:
        """``out[k]`` is the matrix of ``b -> a_k b`` on ``A``."""
        return left_multiplications(self.product)

    def mult(self, a) -> np.ndarray:
        """Matrix of multiplication by the element ``a`` (a coordinate vector)."""
        return np.einsum("i,irs->rs", a, self.multiplication_matrices())

    @classmethod
    def ground_field(cls) -> "StructureAlgebra":
        return cls(la.qarray([[[1]]]), unit=0)

    @classmethod
    def dual_numbers(cls) -> "StructureAlgebra":
        """``K[eps]/(eps^2)`` on the basis ``(1, eps)``."""
        c = la.zeros((2, 2, 2))
        c[0, 0, 0] = c[0, 1, 1] = c[1, 0, 1] = Fraction(1)
        return cls(c, unit=0)


class _Rinehart:
    """Shared storage for the two anchored structures."""

    a: StructureAlgebra
    action: np.ndarray
    anchor: np.ndarray

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    def act(self, a) -> np.ndarray:
        """Matrix of the element ``a`` of ``A`` acting on ``L``."""
        return np.einsum("k,krs->rs", a, self.action)

    def anchor_of(self, x) -> np.ndarray:
        return np.einsum("i,irs->rs", x, self.anchor)

    def _normalise(self, tensor_field: str):
        n = la.qarray(self.action).shape[1] if np.asarray(self.action).ndim == 3 else None
        da = self.a.dim
        if n is None:
            raise StructureError("action: expected a rank-3 array (dim_a, dim_l, dim_l)")
        object.__setattr__(self, "action", _shape_check(self.action, (da, n, n), "action"))
        object.__setattr__(self, tensor_field, _shape_check(getattr(self, tensor_field), (n, n, n), tensor_field))
        object.__setattr__(self, "anchor", _shape_check(self.anchor, (n, da, da), "anchor"))


@dataclass(frozen=True, eq=False)
class LsrAlgebra(_Rinehart):
    """Left-symmetric Rinehart algebra ``(L, A, ., l)`` as structure constants."""

    a: StructureAlgebra
    action: np.ndarray
    product: np.ndarray
    anchor: np.ndarray

    def __post_init__(self):
        self._normalise("product")

    def mul(self, x, y):
        return bilinear(self.product, x, y)

    def with_product(self, product, anchor=None) -> "LsrAlgebra":
        return LsrAlgebra(self.a, self.action, product, self.anchor if anchor is None else anchor)

    @classmethod
    def over_ground_field(cls, product) -> "LsrAlgebra":
        """A plain left-symmetric algebra viewed over ``A = K`` with zero anchor."""
        product = la.qarray(product)
        n = product.shape[0]
        return cls(StructureAlgebra.ground_field(), la.eye(n).reshape(1, n, n), product, la.zeros((n, 1, 1)))


@dataclass(frozen=True, eq=False)
class LieRinehartAlgebra(_Rinehart):
    """Lie-Rinehart algebra ``(L, A, [,], rho)``; ``anchor`` is the map rho."""

    a: StructureAlgebra
    action: np.ndarray
    bracket: np.ndarray
    anchor: np.ndarray

    def __post_init__(self):
        self._normalise("bracket")

    @property
    def rho(self) -> np.ndarray:
        return self.anchor

    def br(self, x, y):
        return bilinear(self.bracket, x, y)


@dataclass(frozen=True, eq=False)
class Subspace:
    """Subspace of ``L`` given by spanning vectors in ``L``-coordinates."""

    basis: tuple

    def __post_init__(self):
        vecs = tuple(la.qarray(v).reshape(-1) for v in self.basis)
        object.__setattr__(self, "basis", vecs)
        if vecs and la.rank(np.array(vecs, dtype=object)) != len(vecs):
            raise StructureError("subspace basis is linearly dependent")

    def contains(self, v) -> bool:
        return la.in_span(self.basis, v)


@dataclass(frozen=True, eq=False)
class MorphismPair:
    """Candidate homomorphism: ``f: L1 -> L2`` and ``g: A1 -> A2``."""

    f: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "f", la.qarray(self.f))
        object.__setattr__(self, "g", la.qarray(self.g))


# --------------------------------------------------------------------------
# validators

def _algebra_checks(a: StructureAlgebra) -> list[Check]:
    c = a.product
    checks = [tensor_check("A: commutativity", c - np.einsum("ijk->jik", c))]
    left = np.einsum("ijp,pkr->ijkr", c, c)
    right = np.einsum("jkp,ipr->ijkr", c, c)
    checks.append(tensor_check("A: associativity", left - right))
    if a.unit is not None:
        u = a.multiplication_matrices()[a.unit]
        checks.append(tensor_check("A: unit", (u - la.eye(a.dim)).reshape(a.dim, a.dim)))
    return checks


def validate_structure_algebra(a: StructureAlgebra) -> Report:
    return Report("commutative associative algebra", _algebra_checks(a))


def module_checks(a: StructureAlgebra, action: np.ndarray, label: str) -> list[Check]:
    """``action`` makes the space an ``A``-module (unit acts trivially if declared)."""
    da, m = action.shape[0], action.shape[1]
    composed = np.einsum("irs,jst->ijrt", action, action)
    expected = np.einsum("ijk,krt->ijrt", a.product, action)
    checks = [tensor_check(f"{label}: A-module action", (composed - expected).reshape(da, da, m * m),
                           note="witness (i, j): a_i(a_j v) != (a_i a_j) v")]
    if a.unit is not None:
        checks.append(tensor_check(f"{label}: unit acts as identity",
                                   (action[a.unit] - la.eye(m)).reshape(1, m * m)))
    return checks


def leibniz_defect(a: StructureAlgebra, d: np.ndarray) -> np.ndarray:
    """``D(a_p a_q) - D(a_p) a_q - a_p D(a_q)`` indexed by ``(p, q)``."""
    c = a.product
    return (np.einsum("pqr,kr->pqk", c, d)
            - np.einsum("rp,rqk->pqk", d, c)
            - np.einsum("rq,prk->pqk", d, c))


def anchor_checks(a: StructureAlgebra, action, tensor, anchor, der_basis) -> list[Check]:
    """Anchor lies in Der(A), is a Lie representation of the commutator of
    ``tensor``, and is A-linear."""
    n, da = anchor.shape[0], a.dim
    checks = []
    bad = None
    for i in range(n):
        if not la.in_span([d.reshape(-1) for d in der_basis], anchor[i].reshape(-1)):
            bad = i
            break
    if bad is None:
        checks.append(Check("anchor in Der(A)", True))
    else:
        defect = leibniz_defect(a, anchor[bad])
        first = tensor_check("", defect)
        checks.append(Check("anchor in Der(A)", False, (bad,) + tuple(first.witness or ()), first.residual,
                            "witness (i, p, q): l(e_i) breaks Leibniz on a_p a_q"))
    br = tensor - np.einsum("ijk->jik", tensor)
    lhs = np.einsum("ijc,crs->ijrs", br, anchor)
    prod = np.einsum("irs,jst->ijrt", anchor, anchor)
    rhs = prod - np.einsum("ijrt->jirt", prod)
    checks.append(tensor_check("anchor is a Lie representation", (lhs - rhs).reshape(n, n, da * da),
                               note="l(x.y - y.x) = [l(x), l(y)]"))
    mult = a.multiplication_matrices()
    lhs = np.einsum("kpi,prs->kirs", action, anchor)
    rhs = np.einsum("krt,its->kirs", mult, anchor)
    checks.append(tensor_check("anchor A-linearity", (lhs - rhs).reshape(da, n, da * da),
                               note="witness (k, i): l(a_k e_i) != a_k l(e_i)"))
    return checks


def leibniz_compatibility(action, tensor, anchor) -> np.ndarray:
    """Residual of ``x * (a y) - l(x)(a) y - a (x * y)`` indexed by ``(x, a, y)``."""
    lhs = np.einsum("kpj,ipl->ikjl", action, tensor)
    anchor_term = np.einsum("irk,rlj->ikjl", anchor, action)
    scalar_term = np.einsum("ijp,klp->ikjl", tensor, action)
    return lhs - anchor_term - scalar_term


def left_symmetry_residual(T) -> np.ndarray:
    """``(x,y,z) - (y,x,z)`` with ``(x,y,z) = (xy)z - x(yz)``, indexed ``[x,y,z,:]``."""
    assoc = np.einsum("ijc,ckl->ijkl", T, T) - np.einsum("jkc,icl->ijkl", T, T)
    return assoc - np.einsum("ijkl->jikl", assoc)


def jacobi_residual(B) -> np.ndarray:
    j1 = np.einsum("ijc,ckl->ijkl", B, B)
    return j1 + np.einsum("jkil->ijkl", j1) + np.einsum("kijl->ijkl", j1)


def validate_lsr(l: LsrAlgebra) -> Report:
    """Check every axiom of a left-symmetric Rinehart algebra."""
    rep = Report("left-symmetric Rinehart algebra", _algebra_checks(l.a))
    rep.checks += module_checks(l.a, l.action, "L")
    rep.add(tensor_check("left-symmetry", left_symmetry_residual(l.product),
                         note="(x.y).z - x.(y.z) = (y.x).z - y.(x.z)"))
    rep.checks += anchor_checks(l.a, l.action, l.product, l.anchor, derivation_basis(l.a))
    rep.add(tensor_check("compatibility x.(ay)", leibniz_compatibility(l.action, l.product, l.anchor),
                         note="witness (x, a, y)"))
    lhs = np.einsum("kpi,pjl->kijl", l.action, l.product)
    rhs = np.einsum("ijp,klp->kijl", l.product, l.action)
    rep.add(tensor_check("compatibility (ax).y", lhs - rhs, note="witness (a, x, y)"))
    return rep


def validate_lie_rinehart(g: LieRinehartAlgebra) -> Report:
    rep = Report("Lie-Rinehart algebra", _algebra_checks(g.a))
    rep.checks += module_checks(g.a, g.action, "L")
    B = g.bracket
    rep.add(tensor_check("antisymmetry", B + np.einsum("ijk->jik", B)))
    rep.add(tensor_check("Jacobi identity", jacobi_residual(B)))
    # the anchor-rep check uses the commutator of its tensor argument; for a
    # bracket that is 2B, so pass B/2 to get [x, y] itself
    rep.checks += anchor_checks(g.a, g.action, B * Fraction(1, 2), g.anchor, derivation_basis(g.a))
    rep.add(tensor_check("compatibility [x,ay]", leibniz_compatibility(g.action, B, g.anchor),
                         note="witness (x, a, y)"))
    return rep


def validate(structure, base=None) -> Report:
    """Validate any supported structure; representations need their ``base``."""
    from .representations import RepresentationBundle, validate_representation

    if isinstance(structure, StructureAlgebra):
        return validate_structure_algebra(structure)
    if isinstance(structure, LsrAlgebra):
        return validate_lsr(structure)
    if isinstance(structure, LieRinehartAlgebra):
        return validate_lie_rinehart(structure)
    if isinstance(structure, RepresentationBundle):
        if base is None:
            raise StructureError("validating a representation requires its base algebra")
        return validate_representation(base, structure)
    raise TypeError(f"cannot validate {type(structure).__name__}")


# --------------------------------------------------------------------------
# constructions

def derivation_basis(a: StructureAlgebra) -> list[np.ndarray]:
    """Canonical basis of Der(A) as ``dim_a x dim_a`` matrices."""
    d = a.dim
    c = a.product
    rows = []
    # unknown D[r, s] sits at column r*d + s
    for p in range(d):
        for q in range(d):
            for k in range(d):
                row = la.zeros(d * d)
                for r in range(d):
                    row[k * d + r] += c[p, q, r]
                    row[r * d + p] -= c[r, q, k]
                    row[r * d + q] -= c[p, r, k]
                rows.append(row)
    system = np.array(rows, dtype=object).reshape(len(rows), d * d) if rows else la.zeros((0, d * d))
    return [v.reshape(d, d) for v in la.nullspace(system)]


def sub_adjacent(l: LsrAlgebra, check: bool = True) -> LieRinehartAlgebra:
    """Commutator Lie-Rinehart algebra with the same A-module and anchor."""
    if check:
        rep = validate_lsr(l)
        if not rep.ok:
            raise PreconditionError(f"input fails {rep.first_failure().name}", rep)
    bracket = l.product - np.einsum("ijk->jik", l.product)
    return LieRinehartAlgebra(l.a, l.action, bracket, l.anchor)


def classify_anchor(l: LsrAlgebra) -> Literal["general", "transitive", "regular"]:
    der = derivation_basis(l.a)
    image = la.rank(np.array([m.reshape(-1) for m in l.anchor], dtype=object).reshape(l.dim, -1)) if l.dim else 0
    if image != len(der):
        return "general"
    return "regular" if image == l.dim else "transitive"


def check_substructure(l: LsrAlgebra, s: Subspace, kind: Literal["subalgebra", "ideal"] = "subalgebra") -> Report:
    """Closure of ``s`` under the product and the A-action (and, for ideals,
    under multiplication by ``L`` and the anchor term ``l(i)(a) x``)."""
    if kind not in ("subalgebra", "ideal"):
        raise ValueError(f"unknown kind {kind!r}")
    n = l.dim
    basis = s.basis
    if any(v.shape != (n,) for v in basis):
        raise StructureError(f"subspace vectors must have length {n}")
    rep = Report(f"{kind} check")
    e = la.eye(n)

    def closure(name, pairs, note=""):
        for wit, v in pairs:
            if not s.contains(v):
                return rep.add(Check(name, False, wit, list(v), note))
        return rep.add(Check(name, True, note=note))

    closure("S.S in S", (((i, j), l.mul(u, v)) for i, u in enumerate(basis) for j, v in enumerate(basis)))
    closure("AS in S", (((k, i), l.action[k] @ u) for k in range(l.a.dim) for i, u in enumerate(basis)))
    if kind == "ideal":
        closure("L.I in I", (((p, i), l.mul(e[p], u)) for p in range(n) for i, u in enumerate(basis)))
        closure("I.L in I", (((i, p), l.mul(u, e[p])) for i, u in enumerate(basis) for p in range(n)))
        closure("l(I)(A)L in I",
                (((i, k, p), l.act(l.anchor_of(u)[:, k]) @ e[p])
                 for i, u in enumerate(basis) for k in range(l.a.dim) for p in range(n)),
                note="read as l(i)(a) x in I for i in I, a in A, x in L")
    return rep


def _morphism_checks(src, dst, fg: MorphismPair, tensor_name: str, label: str) -> list[Check]:
    f, g = fg.f, fg.g
    T1, T2 = getattr(src, tensor_name), getattr(dst, tensor_name)
    c1, c2 = src.a.product, dst.a.product
    checks = [
        tensor_check("g multiplicative", np.einsum("ijk,rk->ijr", c1, g) - np.einsum("pi,qj,pqr->ijr", g, g, c2)),
        tensor_check(f"f preserves {label}", np.einsum("ijk,rk->ijr", T1, f) - np.einsum("pi,qj,pqr->ijr", f, f, T2)),
        tensor_check("f(ax) = g(a)f(x)",
                     np.einsum("rp,kpi->kir", f, src.action) - np.einsum("sk,srp,pi->kir", g, dst.action, f),
                     note="witness (a, x)"),
        tensor_check("anchor intertwining",
                     np.einsum("rs,isk->ikr", g, src.anchor) - np.einsum("pi,prs,sk->ikr", f, dst.anchor, g),
                     note="g(l1(x)a) = l2(f(x))g(a), witness (x, a)"),
    ]
    return checks


def check_morphism(src, dst, fg: MorphismPair) -> Report:
    """Homomorphism check for LSR algebras (or Lie-Rinehart algebras).

    For LSR inputs the induced map of sub-adjacent Lie-Rinehart algebras is
    checked too; it must pass whenever the LSR conditions pass.
    """
    if fg.f.shape != (dst.dim, src.dim) or fg.g.shape != (dst.a.dim, src.a.dim):
        raise StructureError(f"morphism shapes f{fg.f.shape}, g{fg.g.shape} do not match "
                             f"({dst.dim}x{src.dim}, {dst.a.dim}x{src.a.dim})")
    if isinstance(src, LieRinehartAlgebra):
        return Report("Lie-Rinehart morphism", _morphism_checks(src, dst, fg, "bracket", "bracket"))
    rep = Report("LSR morphism", _morphism_checks(src, dst, fg, "product", "product"))
    lie = Report("", _morphism_checks(sub_adjacent(src, check=False), sub_adjacent(dst, check=False),
                                      fg, "bracket", "bracket"))
    induced = Check("induced sub-adjacent morphism", lie.ok,
                    note="" if lie.ok else f"fails {lie.first_failure().name}")
    if rep.ok and not lie.ok:
        raise InvariantViolation("LSR morphism does not induce a Lie-Rinehart morphism")
    rep.data["lie_rinehart_morphism"] = lie.ok
    rep.add(induced)
    return rep


def trivial_extension(l: LsrAlgebra) -> LsrAlgebra:
    """LSR algebra on ``L + A`` with ``(x1+a1).(x2+a2) = x1.x2 + l(x1)(a2)``."""
    n, da = l.dim, l.a.dim
    N = n + da
    P = la.zeros((N, N, N))
    P[:n, :n, :n] = l.product
    # e_i . a_s = l(e_i)(a_s), landing in the A summand
    P[:n, n:, n:] = np.einsum("irs->isr", l.anchor)
    action = la.zeros((da, N, N))
    action[:, :n, :n] = l.action
    action[:, n:, n:] = l.a.multiplication_matrices()
    anchor = la.zeros((N, da, da))
    anchor[:n] = l.anchor
    return LsrAlgebra(l.a, action, P, anchor)
