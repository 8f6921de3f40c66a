"""PT and anti-PT conjugation as antilinear maps on grid functions.

Conventions, as maps on a function u sampled on a symmetric grid:

    Hermitian:  (Lu)(x) =  conj(u(x))
    PT:         (Lu)(x) =  conj(u(-x))
    APT:        (Lu)(x) = -conj(u(-x))

All three are antilinear involutions.  The APT sign is fixed by the rules
[i g_even]^APT = i g_even and [i g_odd]^APT = -i g_odd together with the
invariance of anti-PT-symmetric superpotentials (real part odd, imaginary
part even).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .analytic import ClosedFormFunction
from .errors import DivergentNorm, GridMismatch
from .grids import (
    ComplexGridFunction,
    Grid,
    ParityParts,
    parity_decompose,
    quadrature,
    reflect,
    sample,
)


class Conjugation(enum.Enum):
    HERMITIAN = "hermitian"
    PT = "pt"
    APT = "apt"


@dataclass(frozen=True)
class SymmetryReport:
    """Verdicts and sup-norm defects of the PT / anti-PT defining relations."""

    is_pt_symmetric: bool
    is_apt_symmetric: bool
    pt_defect: float
    apt_defect: float
    tolerance: float
    real_parity: ParityParts
    imag_parity: ParityParts


def apply_conjugation(s: Conjugation, u: ComplexGridFunction) -> ComplexGridFunction:
    if s is Conjugation.HERMITIAN:
        return ComplexGridFunction(u.grid, np.conj(u.values))
    r = reflect(u)
    if s is Conjugation.PT:
        return ComplexGridFunction(u.grid, np.conj(r.values))
    return ComplexGridFunction(u.grid, -np.conj(r.values))


def _classify(u: ComplexGridFunction, tol: float) -> SymmetryReport:
    pt = apply_conjugation(Conjugation.PT, u)
    apt = apply_conjugation(Conjugation.APT, u)
    pt_defect = float(np.max(np.abs(u.values - pt.values)))
    apt_defect = float(np.max(np.abs(u.values - apt.values)))
    re_parts = parity_decompose(ComplexGridFunction(u.grid, u.values.real + 0j))
    im_parts = parity_decompose(ComplexGridFunction(u.grid, u.values.imag + 0j))
    return SymmetryReport(
        is_pt_symmetric=pt_defect <= tol,
        is_apt_symmetric=apt_defect <= tol,
        pt_defect=pt_defect,
        apt_defect=apt_defect,
        tolerance=tol,
        real_parity=re_parts,
        imag_parity=im_parts,
    )


def classify_pt(u: ComplexGridFunction, tol: float = 1e-10) -> SymmetryReport:
    """PT symmetry holds iff the real part is even and the imaginary part odd."""
    return _classify(u, tol)


def classify_apt(u: ComplexGridFunction, tol: float = 1e-10) -> SymmetryReport:
    """Anti-PT symmetry holds iff the real part is odd and the imaginary part even."""
    return _classify(u, tol)


def inner_product(phi: ComplexGridFunction, psi: ComplexGridFunction,
                  s: Conjugation) -> complex:
    """(phi, psi) = integral of [phi]^S * psi under the chosen conjugation."""
    if phi.grid != psi.grid:
        raise GridMismatch("inner product requires a shared grid")
    conj_phi = apply_conjugation(s, phi)
    return quadrature(ComplexGridFunction(phi.grid, conj_phi.values * psi.values))


@dataclass(frozen=True)
class GramResult:
    strategy: Conjugation
    matrix: np.ndarray
    max_offdiag: float
    max_diag_deviation: float


def gram_matrix(states: list, s: Conjugation) -> GramResult:
    """Pairwise inner products G[m][n] = (states[m], states[n]) under strategy s."""
    m = len(states)
    for st in states[1:]:
        if st.grid != states[0].grid:
            raise GridMismatch("all states must share one grid")
    g = np.empty((m, m), dtype=np.complex128)
    for i in range(m):
        ci = apply_conjugation(s, states[i])
        for j in range(m):
            g[i, j] = quadrature(ComplexGridFunction(
                states[0].grid, ci.values * states[j].values))
    off = g - np.diag(np.diag(g))
    max_off = float(np.max(np.abs(off))) if m > 1 else 0.0
    max_diag_dev = float(np.max(np.abs(np.diag(g) - 1.0)))
    return GramResult(s, g, max_off, max_diag_dev)


def normalize_hermitian(u: ComplexGridFunction) -> ComplexGridFunction:
    """Scale to unit Hermitian norm and fix the phase.

    The phase convention makes the value at x = 0 real-positive, falling
    back to the first node of maximum modulus when the center value is
    negligible (eigenvectors arrive with arbitrary phase).
    """
    nrm = math.sqrt(inner_product(u, u, Conjugation.HERMITIAN).real)
    if nrm == 0.0:
        raise ValueError("cannot normalize the zero function")
    vals = u.values / nrm
    c = vals[u.grid.center_index]
    if abs(c) < 1e-12 * np.max(np.abs(vals)):
        c = vals[int(np.argmax(np.abs(vals)))]
    vals = vals * (abs(c) / c)
    return ComplexGridFunction(u.grid, vals)


def normalization_constant(f: ClosedFormFunction, g: Grid) -> float:
    """N = 1 / sqrt(integral of exp(-2 * even part of Re f)).

    Only the even real part of the exponent contributes: the imaginary
    part is a pure phase and the odd real part integrates out of |psi|^2.
    """
    re_f = sample(lambda x: np.asarray(f(x)).real + 0j, g)
    even = parity_decompose(re_f).even
    with np.errstate(over="raise"):
        try:
            integrand = np.exp(-2.0 * even.values.real)
        except FloatingPointError as exc:
            raise DivergentNorm("exp(-2 f_even) overflowed") from exc
    if not np.all(np.isfinite(integrand)):
        raise DivergentNorm("exp(-2 f_even) overflowed")
    integral = quadrature(ComplexGridFunction(g, integrand + 0j)).real
    if integral <= 0 or not math.isfinite(integral):
        raise DivergentNorm(f"norm integral {integral} is not positive and finite")
    return 1.0 / math.sqrt(integral)
