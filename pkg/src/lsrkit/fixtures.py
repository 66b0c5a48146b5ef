"""Small canonical algebras used throughout the tests, demos and CLI.

``F0``  zero product on ``K^2`` over ``A = K``.
``F1``  ``e1.e1 = e1``, ``e1.e2 = e2.e1 = e2`` over ``A = K`` (that is ``K[x]/(x^2)``).
``F2``  zero product on the free rank-one module over ``A = K[eps]/(eps^2)``.
``F3``  only ``e2.e2 = e1`` over ``A = K``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import linalg as la
from .algebra import LsrAlgebra, StructureAlgebra


def _lsa(entries, n=2) -> LsrAlgebra:
    T = la.zeros((n, n, n))
    for i, j, k, v in entries:
        T[i, j, k] = Fraction(v)
    return LsrAlgebra.over_ground_field(T)


def F0() -> LsrAlgebra:
    return _lsa([])


def F1() -> LsrAlgebra:
    return _lsa([(0, 0, 0, 1), (0, 1, 1, 1), (1, 0, 1, 1)])


def F2() -> LsrAlgebra:
    a = StructureAlgebra.dual_numbers()
    action = la.zeros((2, 2, 2))
    action[0] = la.eye(2)
    action[1, 1, 0] = Fraction(1)  # eps . e = eps e
    return LsrAlgebra(a, action, la.zeros((2, 2, 2)), la.zeros((2, 2, 2)))


def F3() -> LsrAlgebra:
    return _lsa([(1, 1, 0, 1)])


def unit_line() -> LsrAlgebra:
    """One-dimensional algebra ``e.e = e`` over ``K``."""
    return _lsa([(0, 0, 0, 1)], n=1)


def dual_numbers_regular() -> LsrAlgebra:
    """``L = span{e}`` over ``K[eps]/(eps^2)`` with ``l(e) = (eps -> eps)``; transitive and regular."""
    a = StructureAlgebra.dual_numbers()
    action = la.zeros((2, 1, 1))
    action[0, 0, 0] = Fraction(1)
    anchor = la.zeros((1, 2, 2))
    anchor[0, 1, 1] = Fraction(1)
    return LsrAlgebra(a, action, la.zeros((1, 1, 1)), anchor)


FIXTURES = {"F0": F0, "F1": F1, "F2": F2, "F3": F3}


def projection_e1() -> np.ndarray:
    """``diag(1, 0)``: Nijenhuis on F1 (and idempotent)."""
    return la.qarray([[1, 0], [0, 0]])


def rb_f3() -> np.ndarray:
    """``R(e1) = 0``, ``R(e2) = e1``: weight-zero Rota-Baxter operator on F3."""
    return la.qarray([[0, 1], [0, 0]])


def swap() -> np.ndarray:
    return la.qarray([[0, 1], [1, 0]])


def fixture_document(name: str) -> dict:
    """Embedded input document for a fixture, with its derived operators."""
    from .deformation import nijenhuis_differential
    from .io import algebra_document, sparse_entries

    l = FIXTURES[name]()
    doc = algebra_document(l)
    if name == "F1":
        doc["operators"] = {"N": sparse_entries(projection_e1()), "swap": sparse_entries(swap())}
        doc["deformations"] = {"deltaN": {"terms": [sparse_entries(nijenhuis_differential(l, projection_e1()))]}}
        doc["automorphisms"] = {"phi": {"maps": [sparse_entries(la.qarray([[1, 2], [0, 1]]))]}}
    elif name == "F3":
        doc["operators"] = {"R": sparse_entries(rb_f3())}
        doc["module_maps"] = {"T": {"rep": "adjoint", "entries": sparse_entries(rb_f3())}}
    return doc
