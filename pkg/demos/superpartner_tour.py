"""A guided tour of the complexified square-well superpartners.

Builds the tangent-family superpotential W = k tan(kx) + i q sec(kx) for
q = 2, k = 1, forms the partner potentials, and checks their symmetry
classes: the potentials are PT-symmetric while W itself is anti-PT
symmetric, which is the whole point of the construction.
"""

import math

import numpy as np

from ptsusy.analytic import (
    FamilyParams,
    Variant,
    build_superpotential,
    closed_form_potentials,
    ground_state_wavefunction,
)
from ptsusy.grids import Grid, sample
from ptsusy.symmetry import classify_apt, classify_pt

p = FamilyParams(Variant.TANGENT, k=1.0, q=2.0, alpha=1.0, n=1)
grid = Grid(-math.pi / 2, math.pi / 2, 2001)

w = build_superpotential(p)
pair = closed_form_potentials(p)

print("At the well center x = 0:")
print(f"  W   = {complex(w(0.0)):+.3f}   (pure imaginary: i q)")
print(f"  V1  = {complex(pair.v1(0.0)):+.3f}   (-q^2 - k^2)")
print(f"  V2  = {complex(pair.v2(0.0)):+.3f}   (2k^2 - q^2 - k^2)")

print("\nSymmetry classification on the full grid:")
for name, f, classify in (("V1", pair.v1, classify_pt),
                          ("V2", pair.v2, classify_pt),
                          ("W", w, classify_apt)):
    rep = classify(sample(f, grid))
    kind = "PT" if classify is classify_pt else "anti-PT"
    verdict = rep.is_pt_symmetric if kind == "PT" else rep.is_apt_symmetric
    defect = rep.pt_defect if kind == "PT" else rep.apt_defect
    print(f"  {name}: {kind}-symmetric = {verdict}  (defect {defect:.1e})")

psi = ground_state_wavefunction(p)
vals = np.asarray(psi(grid.nodes))
print("\nGround state: cos(kx) envelope with a unimodular phase twist")
print(f"  psi(0)       = {complex(psi(0.0)):.6f}")
print(f"  max |psi|    = {np.max(np.abs(vals)):.6f}")
print(f"  | |psi| - cos | max = {np.max(np.abs(np.abs(vals) - np.cos(grid.nodes))):.1e}")
