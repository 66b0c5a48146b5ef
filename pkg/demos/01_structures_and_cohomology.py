# Structures, representations and the cochain complex on the small fixtures.
import numpy as np

from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit import (CochainComplex, LsrAlgebra, adjoint_rep, derived_reps, semidirect_product, sub_adjacent,
                    validate)

# F1 is K[x]/(x^2) seen as a left-symmetric algebra: e1 is the unit, e2 squares to zero
F1 = fx.F1()
print(validate(F1).summary())

# break one structure constant and let the validator point at the bad triple
T = F1.product.copy()
T[0, 1, 0] += 1
print()
print(validate(LsrAlgebra.over_ground_field(T)).summary())

# the commutator of a commutative product is zero, so the sub-adjacent algebra is abelian
print("\nsub-adjacent bracket of F1 vanishes:", la.is_zero(sub_adjacent(F1).bracket))

adj, _ = adjoint_rep(F1)
big = semidirect_product(F1, adj)
print("F1 x adjoint has dim", big.dim, "and validates:", validate(big).ok)

# dual representations: the report records which of the equivalent conditions hold
report = derived_reps(F1, adj)["equivalence_report"]
for key, value in report.data.items():
    print(f"  {key}: {value}")

# cohomology table of the adjoint pair
print("\n  k  dim C^k  rank d_k  H^k")
for name in ("F0", "F1", "F3"):
    l = fx.FIXTURES[name]()
    cx = CochainComplex(l, adjoint_rep(l)[0])
    print(name)
    for k in range(3):
        d = cx.dims(k)
        print(f"  {k}  {d.dim_cochains:7d}  {cx.rank(k):8d}  {d.h:3d}")

# delta(Id) on F1 is the product itself
cx = CochainComplex(F1, adj)
ident = cx.space(1).from_tensor(la.eye(2))
print("\ndelta(Id) == product:", la.is_zero(cx.delta(ident).full - F1.product))
print(np.vectorize(la.format_rational)(cx.delta(ident).full))
