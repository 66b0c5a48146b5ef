# A Nijenhuis operator generates a trivial deformation; push it to order two
# and move it around with a formal automorphism.
from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit.io import sparse_entries
from lsrkit import (FormalAutomorphism, TruncatedDeformation, apply_equivalence, check_deformation,
                    nijenhuis_trivial_deformation, obstruction, rigidity_certificate, try_extend)

F1 = fx.F1()
N = fx.projection_e1()

d, report = nijenhuis_trivial_deformation(F1, N)
print(report.summary())
print("m_1 entries (x, y, r, value):", sparse_entries(d.terms[0]))

obs, rep = obstruction(d)
print("\nobstruction at order 2 is zero:", rep.data["zero"])
m2 = try_extend(d)
d2 = d.extended(m2)
print("order-2 extension:", check_deformation(d2).ok)

# equivalence: m_1 - m~_1 = delta(phi_1)
phi = FormalAutomorphism([la.qarray([[1, 2], [0, 1]]), la.qarray([[0, 1], [1, 0]])])
moved = apply_equivalence(d2, phi)
print("\ntransported deformation:", check_deformation(moved).ok)
back = apply_equivalence(moved, phi.inverse())
print("round trip:", all(la.is_zero(a - b) for a, b in zip(back.terms, d2.terms)))

# over the zero product every m_1 is a first-order deformation,
# but only left-symmetric ones extend
F0 = fx.F0()
m = la.zeros((2, 2, 2))
m[0, 1, 0] = 1
d0 = TruncatedDeformation(F0, [m])
print("\nF0 + t m: order 1 ok:", check_deformation(d0).ok, " extends:", try_extend(d0) is not None)

for name in ("F0", "F1"):
    print(name, rigidity_certificate(fx.FIXTURES[name]()))
print("unit line", rigidity_certificate(fx.unit_line()))
