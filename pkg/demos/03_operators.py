# Nijenhuis, Rota-Baxter and O-operators by exhaustive search on 2x2 grids.
from lsrkit import fixtures as fx
from lsrkit import linalg as la
from lsrkit import (adjoint_rep, check_rota_baxter, deformed_structures, lift_to_semidirect,
                    search_operators)

F1, F3 = fx.F1(), fx.F3()

nij = search_operators(F1, "nijenhuis", bound=1)
print(len(nij), "Nijenhuis operators on F1 with entries in {-1, 0, 1}")

structures, report = deformed_structures(F1, fx.projection_e1(), 2)
print(report.summary())

# idempotent N: Nijenhuis iff Rota-Baxter of weight -1
rb = check_rota_baxter(F1, fx.projection_e1(), -1)
print("\n", rb.data["bridges"])

# weight-zero Rota-Baxter operators on F3 are the O-operators of the adjoint pair,
# and lifting them to F3 x F3 gives Rota-Baxter and Nijenhuis operators
adj, _ = adjoint_rep(F3)
ops = search_operators(F3, "o-operator", bound=1, rep=adj)
print(len(ops), "O-operators on F3, for example", [[la.format_rational(v) for v in row] for row in ops[1]])
print(lift_to_semidirect(F3, adj, fx.rb_f3()).summary())
