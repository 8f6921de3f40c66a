"""Why the anti-PT conjugate, and not the Hermitian adjoint, factorizes H.

With a complex superpotential, A^APT = -d/dx + W (W untouched) closes the
factorizations H1 = A^APT A and H2 = A A^APT exactly.  Substituting the
Hermitian adjoint A† = -d/dx + conj(W) leaves an O(1) defect: complex
conjugation is the wrong involution for this family.
"""

import math

from ptsusy.analytic import FamilyParams, Variant, build_superpotential, closed_form_potentials
from ptsusy.grids import Grid
from ptsusy.operators import (
    apt_partner_relation_check,
    factorization_residual,
    ladder_a_dagger,
    smooth_test_state,
)

p = FamilyParams(Variant.TANGENT, k=1.0, q=2.0, alpha=1.0, n=1)
grid = Grid(-math.pi / 2, math.pi / 2, 4001)
w = build_superpotential(p)
pair = closed_form_potentials(p)
psi = smooth_test_state(grid)

r1, r2 = factorization_residual(w, pair, psi)
print(f"A^APT A  vs  -psi'' + (V1 - e0) psi : residual {r1:.2e}")
print(f"A A^APT  vs  -psi'' + (V2 - e0) psi : residual {r2:.2e}")

d1, d2 = factorization_residual(w, pair, psi, lower=ladder_a_dagger(w))
print(f"Same check with A† in place of A^APT: residuals {d1:.2f} / {d2:.2f}")
print("The defect is exactly the 2 Im(W) = 2 q sec(kx) term that the "
      "Hermitian adjoint flips and the anti-PT conjugate preserves.")

rel = apt_partner_relation_check(w, psi)
print(f"\nAnti-PT invariance of H2 (conjugating the factorized pair): {rel:.2e}")
