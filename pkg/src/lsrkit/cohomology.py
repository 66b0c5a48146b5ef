"""Cochain complex of an LSR algebra with coefficients in a representation.

A degree-``n`` cochain (``n >= 1``) is a map ``L^{n-1} x L -> M`` that is
alternating in the first ``n - 1`` slots and A-linear in every slot.  Raw
coordinates index values on ``(S, last, r)`` with ``S`` a strictly
increasing ``(n-1)``-tuple of basis indices, ``last`` a basis index and
``r`` an ``M``-coordinate, ordered lexicographically.  The constrained space
is the kernel of the A-linearity equations inside that raw space.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import comb
from typing import Optional

import numpy as np

from . import linalg as la
from .algebra import Subspace
from .report import InvariantViolation, PreconditionError, StructureError
from .representations import RepresentationBundle, validate_representation

__all__ = [
    "CochainSpace",
    "Cochain",
    "CochainComplex",
    "CohomologyDims",
    "cochain_basis",
    "coboundary",
    "coboundary_full",
    "cohomology_dim",
    "zero_cochain_space",
]

_LETTERS = "abcdefghijklmnopq"


def _perm_sign(p) -> int:
    sign, p = 1, list(p)
    for i in range(len(p)):
        while p[i] != i:
            j = p[i]
            p[i], p[j] = p[j], p[i]
            sign = -sign
    return sign


@dataclass(eq=False)
class CochainSpace:
    """Constrained cochain space of one degree.

    ``basis`` holds raw coordinate vectors.  ``free`` lists the raw positions
    where the canonical basis has its identity pattern, so coordinates are
    read off directly.
    """

    degree: int
    dim_l: int
    dim_m: int
    basis: list
    free: list
    subsets: list = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def raw_dim(self) -> int:
        if self.degree == 0:
            return self.dim_m
        return len(self.subsets) * self.dim_l * self.dim_m

    @property
    def full_shape(self) -> tuple:
        return (self.dim_l,) * self.degree + (self.dim_m,)

    def basis_matrix(self) -> np.ndarray:
        return la.stack_columns(self.basis, self.raw_dim)

    def raw_index(self, subset, last, r) -> int:
        s = self._subset_pos[tuple(subset)]
        return (s * self.dim_l + last) * self.dim_m + r

    def __post_init__(self):
        self._subset_pos = {s: i for i, s in enumerate(self.subsets)}
        self._expansion = None

    def _expansion_map(self):
        """(full flat index, raw index, sign) for every nonzero full entry."""
        if self._expansion is None:
            full_idx, raw_idx, signs = [], [], []
            dl, dm = self.dim_l, self.dim_m
            strides = [dl ** (self.degree - 1 - k) * dm for k in range(self.degree)]
            for s_pos, subset in enumerate(self.subsets):
                for perm in permutations(range(len(subset))):
                    sign = _perm_sign(perm)
                    args = [subset[p] for p in perm]
                    for last in range(dl):
                        base = sum(a * st for a, st in zip(args + [last], strides))
                        for r in range(dm):
                            full_idx.append(base + r)
                            raw_idx.append((s_pos * dl + last) * dm + r)
                            signs.append(sign)
            self._expansion = (np.array(full_idx, dtype=np.int64), np.array(raw_idx, dtype=np.int64),
                               np.array(signs, dtype=object))
        return self._expansion

    def to_full(self, raw) -> np.ndarray:
        """Expand raw coordinates (optionally batched on a leading axis) to a full tensor."""
        raw = np.asarray(raw, dtype=object)
        if self.degree == 0:
            return raw.copy()
        batch = raw.shape[:-1]
        fidx, ridx, signs = self._expansion_map()
        out = la.zeros(batch + (int(np.prod(self.full_shape)),))
        out[..., fidx] = raw[..., ridx] * signs
        return out.reshape(batch + self.full_shape)

    def from_full(self, full, check: bool = True) -> np.ndarray:
        """Raw coordinates of an alternating full tensor (batched on leading axes)."""
        full = np.asarray(full, dtype=object)
        if self.degree == 0:
            return full.copy()
        nb = full.ndim - self.degree - 1
        batch = full.shape[:nb]
        flat = full.reshape(batch + (-1,))
        dl, dm = self.dim_l, self.dim_m
        strides = [dl ** (self.degree - 1 - k) * dm for k in range(self.degree)]
        sel = []
        for subset in self.subsets:
            for last in range(dl):
                base = sum(a * st for a, st in zip(list(subset) + [last], strides))
                sel.extend(base + r for r in range(dm))
        raw = flat[..., np.array(sel, dtype=np.int64)]
        if check and not la.is_zero(self.to_full(raw) - full):
            raise InvariantViolation(f"degree-{self.degree} tensor is not alternating in its first slots")
        return raw

    def coords(self, raw) -> np.ndarray:
        """Coefficients of raw vector(s) over the basis; raises if outside the space."""
        raw = np.asarray(raw, dtype=object)
        single = raw.ndim == 1
        raw2 = raw.reshape(1, -1) if single else raw
        if self.free is not None and len(self.free) == self.raw_dim:  # unconstrained space
            return raw2[0].copy() if single else raw2.copy()
        if self.free is not None:
            coeffs = raw2[:, self.free]
        else:  # basis without identity pattern (degree 0)
            coeffs = la.zeros((raw2.shape[0], self.dim))
            B = self.basis_matrix()
            for q in range(raw2.shape[0]):
                sol = la.solve_affine(B, raw2[q])
                if sol is None:
                    raise InvariantViolation(f"vector outside the degree-{self.degree} cochain space")
                coeffs[q] = sol[0]
        back = coeffs @ self.basis_matrix().T if self.dim else la.zeros(raw2.shape)
        if not la.is_zero(back - raw2):
            raise InvariantViolation(
                f"cochain does not satisfy the degree-{self.degree} A-linearity constraints")
        return coeffs[0] if single else coeffs

    def element(self, coeffs) -> "Cochain":
        return Cochain(self, la.qarray(coeffs).reshape(-1))

    def from_tensor(self, full) -> "Cochain":
        return Cochain(self, self.coords(self.from_full(la.qarray(full))))

    def zero(self) -> "Cochain":
        return Cochain(self, la.zeros(self.dim))


@dataclass(eq=False)
class Cochain:
    space: CochainSpace
    coeffs: np.ndarray

    def __post_init__(self):
        if len(self.coeffs) != self.space.dim:
            raise StructureError(f"cochain has {len(self.coeffs)} coefficients, space has dim {self.space.dim}")

    @property
    def degree(self) -> int:
        return self.space.degree

    @property
    def raw(self) -> np.ndarray:
        if self.space.dim == 0:
            return la.zeros(self.space.raw_dim)
        return self.space.basis_matrix() @ self.coeffs

    @property
    def full(self) -> np.ndarray:
        return self.space.to_full(self.raw)

    def is_zero(self) -> bool:
        return la.is_zero(self.coeffs)


def _locator(subsets, dl, dm):
    """Map a basis tuple to ``(sign, raw base index)`` of its value, or ``None`` when it vanishes."""
    pos = {s: i for i, s in enumerate(subsets)}

    def locate(args):
        first, last = list(args[:-1]), args[-1]
        if len(set(first)) != len(first):
            return None
        order = sorted(range(len(first)), key=lambda k: first[k])
        key = tuple(first[k] for k in order)
        return _perm_sign(order), (pos[key] * dl + last) * dm

    return locate


def _constraint_rows(degree, dim_l, dim_m, subsets, l_action, m_action):
    """A-linearity equations on raw coordinates, one row per (slot, a, tuple, r)."""
    da = l_action.shape[0]
    dl, dm = dim_l, dim_m
    if da == 1 and la.is_zero(l_action[0] - la.eye(dl)) and la.is_zero(m_action[0] - la.eye(dm)):
        return []
    terms = _locator(subsets, dl, dm)

    raw_dim = len(subsets) * dl * dm
    rows = []

    def add(args_list_for_slot, slot):
        for args in args_list_for_slot:
            for k in range(da):
                block = la.zeros((dm, raw_dim))
                for p in range(dl):
                    coef = l_action[k][p, args[slot]]
                    if coef == 0:
                        continue
                    moved = list(args)
                    moved[slot] = p
                    t = terms(moved)
                    if t is None:
                        continue
                    sign, base = t
                    for r in range(dm):
                        block[r, base + r] += sign * coef
                t = terms(list(args))
                if t is not None:
                    sign, base = t
                    for r in range(dm):
                        for q in range(dm):
                            if m_action[k][r, q] != 0:
                                block[r, base + q] -= sign * m_action[k][r, q]
                rows.extend(block)

    n = degree
    if n >= 2:
        slot1 = [(x1,) + rest + (xl,) for x1 in range(dl) for rest in combinations(range(dl), n - 2)
                 for xl in range(dl)]
        add(slot1, 0)
    last = [s + (xl,) for s in combinations(range(dl), n - 1) for xl in range(dl)]
    add(last, n - 1)
    return rows


def _space(degree, dim_l, dim_m, l_action, m_action) -> CochainSpace:
    subsets = list(combinations(range(dim_l), degree - 1))
    raw_dim = len(subsets) * dim_l * dim_m
    rows = _constraint_rows(degree, dim_l, dim_m, subsets, l_action, m_action)
    if rows:
        system = np.array(rows, dtype=object).reshape(len(rows), raw_dim)
        rref, pivots = la.rref(system)
        pivset = set(pivots)
        free = [c for c in range(raw_dim) if c not in pivset]
        basis = la.nullspace(rref)
    else:
        free = list(range(raw_dim))
        basis = [la.eye(raw_dim)[i] for i in range(raw_dim)]
    return CochainSpace(degree, dim_l, dim_m, basis, free, subsets)


def cochain_basis(l, rep: RepresentationBundle, n: int) -> CochainSpace:
    """Basis of the A-linear alternating cochains of degree ``n >= 1``."""
    if n < 1:
        raise ValueError("degree 0 cochains are the subspace given by zero_cochain_space")
    return _space(n, l.dim, rep.dim, l.action, rep.action)


def zero_cochain_space(l, rep: RepresentationBundle) -> Subspace:
    """``{m : rho(x)rho(y)m = rho(x.y)m for all x, y}``."""
    n, m = l.dim, rep.dim
    ops = np.einsum("irs,jst->ijrt", rep.rho, rep.rho) - np.einsum("ijc,crt->ijrt", l.product, rep.rho)
    system = ops.reshape(n * n * m, m)
    return Subspace(tuple(la.nullspace(system)))


def _degree0_space(l, rep) -> CochainSpace:
    basis = list(zero_cochain_space(l, rep).basis)
    return CochainSpace(0, l.dim, rep.dim, basis, None, [])


def coboundary_full(l, rep: RepresentationBundle, W: np.ndarray, degree: int) -> np.ndarray:
    """Apply the coboundary to full tensors ``W`` of the given degree.

    ``W`` may carry leading batch axes.  Degree 0 means ``W`` lists elements
    of ``M`` and ``delta(m)(x) = mu(x)m - rho(x)m``.
    """
    W = np.asarray(W, dtype=object)
    nb = W.ndim - degree - 1
    bl = "".join("BCDEFGH"[k] for k in range(nb))
    rho, mu, T = rep.rho, rep.mu, l.product
    if degree == 0:
        return np.einsum(f"ars,{bl}s->{bl}ar", mu - rho, W)
    n = degree
    B = T - np.einsum("ijk->jik", T)
    args = list(_LETTERS[: n + 1])
    out_sub = bl + "".join(args) + "r"
    total = None

    def acc(term, sign):
        nonlocal total
        term = term if sign > 0 else -term
        total = term if total is None else total + term

    for i in range(n):
        sign = 1 if i % 2 == 0 else -1  # (-1)^{i+1} with 1-based i
        rest = args[:i] + args[i + 1:]
        acc(np.einsum(f"{args[i]}rs,{bl}{''.join(rest)}s->{out_sub}", rho, W), sign)
        moved = args[:i] + args[i + 1:n] + [args[i]]
        acc(np.einsum(f"{args[n]}rs,{bl}{''.join(moved)}s->{out_sub}", mu, W), sign)
        head = args[:i] + args[i + 1:n]
        acc(np.einsum(f"{args[i]}{args[n]}z,{bl}{''.join(head)}zr->{out_sub}", T, W), -sign)
    for i in range(n):
        for j in range(i + 1, n):
            sign = 1 if (i + j) % 2 == 0 else -1  # (-1)^{i+j}, shift cancels
            rest = [a for k, a in enumerate(args) if k not in (i, j)]
            acc(np.einsum(f"{args[i]}{args[j]}z,{bl}z{''.join(rest)}r->{out_sub}", B, W), sign)
    return total


def _raw_coboundary_rows(l, rep: RepresentationBundle, n: int, src: CochainSpace, dst: CochainSpace) -> list:
    """Sparse rows ``{raw column: coefficient}`` of delta from raw ``C^n`` to raw ``C^{n+1}``.

    Only the sorted output tuples are evaluated; the result agrees with
    :func:`coboundary_full` read at those tuples.
    """
    dl, dm = l.dim, rep.dim
    rho, mu, T = rep.rho, rep.mu, l.product
    B = T - np.einsum("ijk->jik", T)
    rows = []
    if n == 0:
        for x in range(dl):
            for r in range(dm):
                rows.append({s: mu[x][r, s] - rho[x][r, s] for s in range(dm) if mu[x][r, s] != rho[x][r, s]})
        return rows
    locate = _locator(src.subsets, dl, dm)

    def put(row, args, r_or_none, coef, op=None):
        """Add ``coef * op . omega(args)`` (component r) or ``coef * omega(args)_r``."""
        hit = locate(args)
        if hit is None:
            return
        sign, base = hit
        if op is None:
            row[base + r_or_none] = row.get(base + r_or_none, 0) + sign * coef
        else:
            for s_ in range(dm):
                if op[s_] != 0:
                    row[base + s_] = row.get(base + s_, 0) + sign * coef * op[s_]

    for subset in dst.subsets:
        for last in range(dl):
            x = list(subset) + [last]
            for r in range(dm):
                row = {}
                for i in range(n):
                    sgn = 1 if i % 2 == 0 else -1
                    put(row, x[:i] + x[i + 1:], None, sgn, rho[x[i]][r])
                    put(row, x[:i] + x[i + 1:n] + [x[i]], None, sgn, mu[x[n]][r])
                    head = x[:i] + x[i + 1:n]
                    for k in range(dl):
                        if T[x[i], x[n], k] != 0:
                            put(row, head + [k], r, -sgn * T[x[i], x[n], k])
                for i in range(n):
                    for j in range(i + 1, n):
                        sgn = 1 if (i + j) % 2 == 0 else -1
                        rest = [x[k] for k in range(n + 1) if k not in (i, j)]
                        for k in range(dl):
                            if B[x[i], x[j], k] != 0:
                                put(row, [k] + rest, r, sgn * B[x[i], x[j], k])
                rows.append({c: v for c, v in row.items() if v != 0})
    return rows


@dataclass
class CohomologyDims:
    degree: int
    dim_cochains: int
    dim_kernel: int
    dim_image_prev: int

    @property
    def h(self) -> int:
        return self.dim_kernel - self.dim_image_prev


class CochainComplex:
    """Cached cochain spaces and coboundary matrices for one ``(l, rep)``."""

    def __init__(self, l, rep: RepresentationBundle, check_rep: bool = True):
        if rep.kind != "lsr-pair":
            raise StructureError("the cochain complex needs an lsr-pair representation")
        if check_rep:
            report = validate_representation(l, rep)
            if not report.ok:
                raise PreconditionError(f"representation fails {report.first_failure().name}", report)
        self.l, self.rep = l, rep
        self._spaces: dict[int, CochainSpace] = {}
        self._matrices: dict[int, np.ndarray] = {}

    def space(self, n: int) -> CochainSpace:
        if n not in self._spaces:
            self._spaces[n] = _degree0_space(self.l, self.rep) if n == 0 else cochain_basis(self.l, self.rep, n)
        return self._spaces[n]

    def delta(self, omega: Cochain) -> Cochain:
        src = omega.space
        dst = self.space(src.degree + 1)
        image = coboundary_full(self.l, self.rep, omega.full, src.degree)
        return Cochain(dst, dst.coords(dst.from_full(image)))

    def matrix(self, n: int) -> np.ndarray:
        """Matrix of ``delta: C^n -> C^{n+1}`` in the constrained bases."""
        if n not in self._matrices:
            src, dst = self.space(n), self.space(n + 1)
            if src.dim == 0 or dst.dim == 0:
                self._matrices[n] = la.zeros((dst.dim, src.dim))
            else:
                basis = src.basis_matrix()
                images = la.zeros((dst.raw_dim, src.dim))
                for i, row in enumerate(_raw_coboundary_rows(self.l, self.rep, n, src, dst)):
                    for c, v in row.items():
                        images[i] = images[i] + basis[c] * v
                coords = dst.coords(np.ascontiguousarray(images.T))
                self._matrices[n] = np.ascontiguousarray(coords.T)
        return self._matrices[n]

    def rank(self, n: int) -> int:
        return la.rank(self.matrix(n)) if n >= 0 else 0

    def dims(self, n: int) -> CohomologyDims:
        if n < 0:
            raise ValueError("degree must be non-negative")
        dim_c = self.space(n).dim
        return CohomologyDims(n, dim_c, dim_c - self.rank(n), self.rank(n - 1) if n >= 1 else 0)


def coboundary(l, rep: RepresentationBundle, omega: Cochain) -> Cochain:
    return CochainComplex(l, rep, check_rep=False).delta(omega)


def cohomology_dim(l, rep: RepresentationBundle, n: int) -> CohomologyDims:
    return CochainComplex(l, rep).dims(n)
