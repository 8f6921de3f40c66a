"""Closed-form construction of the complexified square-well superpartner families.

Everything here is exact analytics: superpotentials W = n*k*tan(kx) + i*q*sec(kx)
(tangent family) and W = -n*k*cot(kx) + i*q*csc(kx) (cotangent family), the
partner potentials W^2 -+ W', the constant shape-invariance remainder, the
hierarchy of levels, the spectrum n(n+2), and the ground-state wavefunctions.

Units are hbar = 2m = 1.  The tangent family lives on (-pi/2, pi/2); the
cotangent family lives on (0, pi) and is mapped onto the symmetric grid by the
coordinate shift x -> x + pi/2 (see ``on_symmetric_well``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    BranchViolation,
    EvaluationAtZero,
    PoleOnPath,
    UnsupportedParameters,
)

WELL_HALF_WIDTH = math.pi / 2.0


class Variant(enum.Enum):
    COTANGENT = "cotangent"
    TANGENT = "tangent"


class HierarchyMode(enum.Enum):
    """How the wave number is indexed across hierarchy levels.

    FIXED_K keeps k constant, which keeps every level's potential regular
    inside the well.  PAPER_K sets k_j = j + 1 literally, which drags
    sec/csc poles into the interior for j >= 1; levels built that way are
    flagged, not silently accepted.
    """

    FIXED_K = "fixed-k"
    PAPER_K = "paper-k"


@dataclass(frozen=True)
class FamilyParams:
    """Names one member of the superpartner family: (variant, k, q, alpha, n)."""

    variant: Variant
    k: float
    q: float
    alpha: float
    n: int = 1

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("wave number k must be positive")
        if self.alpha <= 0:
            raise ValueError("shape parameter alpha must be positive")
        if self.n < 1:
            raise ValueError("hierarchy level n must be >= 1")
        if not np.isfinite(self.q):
            raise ValueError("coupling q must be finite")

    @property
    def alpha_equals_k(self) -> bool:
        return self.alpha == self.k


@dataclass(frozen=True)
class ClosedFormFunction:
    """An evaluable analytic expression with its first two derivatives.

    ``poles`` lists singular points inside the function's natural domain
    (wall poles included).  ``antiderivative`` is optional and, when
    present, satisfies antiderivative' = value.
    """

    value_fn: Callable
    deriv1_fn: Callable
    deriv2_fn: Callable
    poles: tuple = ()
    antiderivative: Optional[Callable] = field(default=None, repr=False)

    def __call__(self, x):
        return self.value_fn(x)

    def deriv1(self, x):
        return self.deriv1_fn(x)

    def deriv2(self, x):
        return self.deriv2_fn(x)


@dataclass(frozen=True)
class PartnerPair:
    """Partner potentials v1 = W^2 - W' + e0 and v2 = W^2 + W' + e0."""

    v1: ClosedFormFunction
    v2: ClosedFormFunction
    e0: float = 0.0


def _numeric_deriv(fn, h=1e-6):
    def d(x):
        return (fn(np.asarray(x) + h) - fn(np.asarray(x) - h)) / (2.0 * h)

    return d


def from_callable(fn, poles=()) -> ClosedFormFunction:
    """Wrap a bare callable; derivatives fall back to central differences."""
    d1 = _numeric_deriv(fn)
    return ClosedFormFunction(fn, d1, _numeric_deriv(d1, h=5e-5), tuple(poles))


def constant(c) -> ClosedFormFunction:
    def val(x):
        return np.full_like(np.asarray(x, dtype=float), c, dtype=np.complex128)

    def zero(x):
        return np.zeros_like(np.asarray(x, dtype=float), dtype=np.complex128)

    return ClosedFormFunction(val, zero, zero)


def shifted(f: ClosedFormFunction, delta: float) -> ClosedFormFunction:
    """The function x -> f(x + delta), poles shifted accordingly."""
    return ClosedFormFunction(
        lambda x: f.value_fn(np.asarray(x) + delta),
        lambda x: f.deriv1_fn(np.asarray(x) + delta),
        lambda x: f.deriv2_fn(np.asarray(x) + delta),
        tuple(p - delta for p in f.poles),
        antiderivative=None if f.antiderivative is None
        else (lambda x: f.antiderivative(np.asarray(x) + delta)),
    )


def on_symmetric_well(f: ClosedFormFunction) -> ClosedFormFunction:
    """Map a cotangent-family function from (0, pi) onto (-pi/2, pi/2)."""
    return shifted(f, WELL_HALF_WIDTH)


def _tan_poles(k: float, half_width: float = WELL_HALF_WIDTH) -> tuple:
    """Zeros of cos(kx) inside [-half_width, half_width]."""
    poles = []
    m = 0
    while True:
        x = (2 * m + 1) * math.pi / (2.0 * k)
        if x > half_width + 1e-12:
            break
        poles.extend([x] if x == 0 else [-x, x])
        m += 1
    return tuple(sorted(poles))


def _cot_poles(k: float, width: float = math.pi) -> tuple:
    """Zeros of sin(kx) inside [0, width]."""
    poles = []
    m = 0
    while True:
        x = m * math.pi / k
        if x > width + 1e-12:
            break
        poles.append(x)
        m += 1
    return tuple(poles)


# ---------------------------------------------------------------------------
# Square-well seeds and the generic SUSY constructions


def square_well_ground_states(k: float):
    """Unnormalized sin(kx), cos(kx): the cotangent and tangent seeds."""
    if k <= 0:
        raise ValueError("k must be positive")

    sin_form = ClosedFormFunction(
        lambda x: np.sin(k * np.asarray(x)) + 0j,
        lambda x: k * np.cos(k * np.asarray(x)) + 0j,
        lambda x: -k * k * np.sin(k * np.asarray(x)) + 0j,
    )
    cos_form = ClosedFormFunction(
        lambda x: np.cos(k * np.asarray(x)) + 0j,
        lambda x: -k * np.sin(k * np.asarray(x)) + 0j,
        lambda x: -k * k * np.cos(k * np.asarray(x)) + 0j,
    )
    return sin_form, cos_form


def superpotential_from_wavefunction(psi: ClosedFormFunction) -> ClosedFormFunction:
    """W = -psi'/psi, the negative logarithmic derivative."""

    def guard(x):
        p = np.asarray(psi(x))
        if np.any(np.abs(p) == 0.0):
            raise EvaluationAtZero("wavefunction vanishes at a requested point")
        return p

    def w(x):
        return -np.asarray(psi.deriv1(x)) / guard(x)

    def w1(x):
        p = guard(x)
        lp = np.asarray(psi.deriv1(x)) / p
        return -np.asarray(psi.deriv2(x)) / p + lp * lp

    return ClosedFormFunction(w, w1, _numeric_deriv(w1, h=5e-5), psi.poles)


def constraint_function(variant: Variant, q: float, alpha: float) -> ClosedFormFunction:
    """The imaginary part forced by shape invariance: q*csc(ax) or q*sec(ax)."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a = alpha
    if variant is Variant.TANGENT:
        def val(x):
            return 1j * 0 + q / np.cos(a * np.asarray(x))

        def d1(x):
            x = np.asarray(x)
            return q * a * np.tan(a * x) / np.cos(a * x)

        def d2(x):
            x = np.asarray(x)
            sec = 1.0 / np.cos(a * x)
            tan = np.tan(a * x)
            return q * a * a * sec * (tan * tan + sec * sec)

        return ClosedFormFunction(val, d1, d2, _tan_poles(a))

    def val(x):
        return q / np.sin(a * np.asarray(x)) + 0j

    def d1(x):
        x = np.asarray(x)
        return -q * a * np.cos(a * x) / np.sin(a * x) ** 2

    def d2(x):
        x = np.asarray(x)
        csc = 1.0 / np.sin(a * x)
        cot = np.cos(a * x) * csc
        return q * a * a * csc * (cot * cot + csc * csc)

    return ClosedFormFunction(val, d1, d2, _cot_poles(a))


def superpotential_general(variant: Variant, k: float, alpha: float,
                           imag_part: Optional[ClosedFormFunction] = None) -> ClosedFormFunction:
    """Level-1 superpotential k*tan(alpha x) (or -k*cot) plus i times a free imaginary part.

    Used by the shape-invariance machinery, where alpha and k stay independent.
    """
    if imag_part is None:
        imag_part = constant(0.0)
    a = alpha
    if variant is Variant.TANGENT:
        real = ClosedFormFunction(
            lambda x: k * np.tan(a * np.asarray(x)) + 0j,
            lambda x: k * a / np.cos(a * np.asarray(x)) ** 2 + 0j,
            lambda x: 2 * k * a * a * np.tan(a * np.asarray(x)) / np.cos(a * np.asarray(x)) ** 2 + 0j,
            _tan_poles(a),
        )
    else:
        real = ClosedFormFunction(
            lambda x: -k / np.tan(a * np.asarray(x)) + 0j,
            lambda x: k * a / np.sin(a * np.asarray(x)) ** 2 + 0j,
            lambda x: -2 * k * a * a * np.cos(a * np.asarray(x)) / np.sin(a * np.asarray(x)) ** 3 + 0j,
            _cot_poles(a),
        )
    g = imag_part
    return ClosedFormFunction(
        lambda x: real(x) + 1j * g(x),
        lambda x: real.deriv1(x) + 1j * g.deriv1(x),
        lambda x: real.deriv2(x) + 1j * g.deriv2(x),
        tuple(sorted(set(real.poles) | set(g.poles))),
    )


def build_superpotential(p: FamilyParams) -> ClosedFormFunction:
    """W_n for the constrained families at the alpha = k specialization.

    Tangent:   W(x) =  n*k*tan(kx) + i*q*sec(kx)
    Cotangent: W(x) = -n*k*cot(kx) + i*q*csc(kx)
    """
    if not p.alpha_equals_k:
        raise UnsupportedParameters(
            f"closed forms hold only at alpha = k (got alpha={p.alpha}, k={p.k})")
    k, q, n = p.k, p.q, p.n

    if p.variant is Variant.TANGENT:
        def val(x):
            x = np.asarray(x)
            return n * k * np.tan(k * x) + 1j * q / np.cos(k * x)

        def d1(x):
            x = np.asarray(x)
            sec = 1.0 / np.cos(k * x)
            return n * k * k * sec * sec + 1j * q * k * np.tan(k * x) * sec

        def d2(x):
            x = np.asarray(x)
            sec = 1.0 / np.cos(k * x)
            tan = np.tan(k * x)
            return (2 * n * k ** 3 * sec * sec * tan
                    + 1j * q * k * k * sec * (tan * tan + sec * sec))

        def anti(x):
            # integral of W: -n*ln cos(kx) + i (q/k) ln(sec + tan)
            x = np.asarray(x)
            sec = 1.0 / np.cos(k * x)
            tan = np.tan(k * x)
            return -n * np.log(np.cos(k * x)) + 1j * (q / k) * np.log(sec + tan)

        return ClosedFormFunction(val, d1, d2, _tan_poles(k), antiderivative=anti)

    def val(x):
        x = np.asarray(x)
        return -n * k / np.tan(k * x) + 1j * q / np.sin(k * x)

    def d1(x):
        x = np.asarray(x)
        csc = 1.0 / np.sin(k * x)
        return n * k * k * csc * csc - 1j * q * k * np.cos(k * x) * csc * csc

    def d2(x):
        x = np.asarray(x)
        csc = 1.0 / np.sin(k * x)
        cot = np.cos(k * x) * csc
        return (-2 * n * k ** 3 * csc * csc * cot
                + 1j * q * k * k * csc * (cot * cot + csc * csc))

    def anti(x):
        x = np.asarray(x)
        csc = 1.0 / np.sin(k * x)
        cot = np.cos(k * x) * csc
        return -n * np.log(np.sin(k * x)) + 1j * (q / k) * np.log(csc - cot)

    return ClosedFormFunction(val, d1, d2, _cot_poles(k), antiderivative=anti)


def partner_pair_from_superpotential(w: ClosedFormFunction, e0: float = 0.0) -> PartnerPair:
    """Compose v1 = W^2 - W' + e0 and v2 = W^2 + W' + e0 from a superpotential."""

    def make(sign):
        def val(x):
            ww = np.asarray(w(x))
            return ww * ww + sign * np.asarray(w.deriv1(x)) + e0

        def d1(x):
            return (2.0 * np.asarray(w(x)) * np.asarray(w.deriv1(x))
                    + sign * np.asarray(w.deriv2(x)))

        return ClosedFormFunction(val, d1, _numeric_deriv(d1, h=5e-5), w.poles)

    return PartnerPair(v1=make(-1.0), v2=make(+1.0), e0=e0)


def closed_form_potentials(p: FamilyParams, e0: Optional[float] = None) -> PartnerPair:
    """Direct closed forms of the level-n partner potentials.

    With the default offset e0 = (n^2 - 1) k^2 the pair takes the hierarchy
    form [n(n-1)k^2 - q^2]sec^2(kx) - k^2 + i(2n-1)qk tan(kx)sec(kx) whose
    ground state sits at energy (n^2 - 1)k^2 above the level-1 zero; n = 1
    reduces to e0 = 0, unbroken SUSY.
    """
    if not p.alpha_equals_k:
        raise UnsupportedParameters("closed-form potentials require alpha = k")
    k, q, n = p.k, p.q, p.n
    if e0 is None:
        e0 = (n * n - 1.0) * k * k
    shift = e0 - n * n * k * k  # constant term relative to the sec^2/csc^2 part

    if p.variant is Variant.TANGENT:
        def make(coef_sq, coef_im):
            def val(x):
                x = np.asarray(x)
                sec = 1.0 / np.cos(k * x)
                return coef_sq * sec * sec + shift + 1j * coef_im * np.tan(k * x) * sec

            def d1(x):
                x = np.asarray(x)
                sec = 1.0 / np.cos(k * x)
                tan = np.tan(k * x)
                return (2 * coef_sq * k * sec * sec * tan
                        + 1j * coef_im * k * sec * (tan * tan + sec * sec))

            return ClosedFormFunction(val, d1, _numeric_deriv(d1, h=5e-5), _tan_poles(k))

        v1 = make(n * (n - 1) * k * k - q * q, (2 * n - 1) * q * k)
        v2 = make(n * (n + 1) * k * k - q * q, (2 * n + 1) * q * k)
        return PartnerPair(v1, v2, e0)

    def make(coef_sq, coef_im):
        def val(x):
            x = np.asarray(x)
            csc = 1.0 / np.sin(k * x)
            return coef_sq * csc * csc + shift - 1j * coef_im * np.cos(k * x) * csc * csc

        def d1(x):
            x = np.asarray(x)
            csc = 1.0 / np.sin(k * x)
            cot = np.cos(k * x) * csc
            return (-2 * coef_sq * k * csc * csc * cot
                    + 1j * coef_im * k * csc * (cot * cot + csc * csc))

        return ClosedFormFunction(val, d1, _numeric_deriv(d1, h=5e-5), _cot_poles(k))

    v1 = make(n * (n - 1) * k * k - q * q, (2 * n - 1) * q * k)
    v2 = make(n * (n + 1) * k * k - q * q, (2 * n + 1) * q * k)
    return PartnerPair(v1, v2, e0)


def shape_invariance_remainder(p: FamilyParams,
                               imag_part: Optional[ClosedFormFunction] = None) -> ClosedFormFunction:
    """R_1 = V_2(k, x) - V_1(k + alpha, x) as a pointwise function.

    With the constrained imaginary part (the default) the result is the
    constant alpha*(alpha + 2k); with a generic imaginary part it is not.
    """
    constrained = imag_part is None
    if constrained:
        imag_part = constraint_function(p.variant, p.q, p.alpha)
    g = imag_part
    a, k = p.alpha, p.k
    const = a * (a + 2.0 * k)

    # Grouped algebra of V2(k) - V1(k+a).  The tan^2/sec^2 (cot^2/csc^2)
    # parts combine into const*(sec^2 - tan^2), evaluated as the product of
    # the two well-conditioned factors (sec -+ tan) so the near-wall 1/h^2
    # blowups never meet in a subtraction.  The imaginary bracket
    # 2i(g' - a tan g) vanishes identically when g is the constraint
    # function, and is dropped analytically in that case.
    if p.variant is Variant.TANGENT:
        def trig(x):
            # sec - tan = tan(pi/4 - ax/2) and sec + tan is its reciprocal,
            # so each factor is well conditioned right up to the walls
            t = np.tan(np.pi / 4.0 - a * np.asarray(x) / 2.0)
            return t * (1.0 / t)

        def bracket(x):
            x = np.asarray(x)
            return np.asarray(g.deriv1(x)) - a * np.tan(a * x) * np.asarray(g(x))

        poles = _tan_poles(a)
    else:
        def trig(x):
            # csc - cot = tan(ax/2) and csc + cot is its reciprocal
            t = np.tan(a * np.asarray(x) / 2.0)
            return t * (1.0 / t)

        def bracket(x):
            x = np.asarray(x)
            cot = np.cos(a * x) / np.sin(a * x)
            return np.asarray(g.deriv1(x)) + a * cot * np.asarray(g(x))

        poles = _cot_poles(a)
    poles = tuple(sorted(set(poles) | set(g.poles)))

    def val(x):
        out = const * trig(x) + 0j
        if not constrained:
            out = out + 2j * bracket(x)
        return out

    d1 = _numeric_deriv(val)
    return ClosedFormFunction(val, d1, _numeric_deriv(d1, h=5e-5), poles)


def remainder_value(n: int, k_n: float) -> float:
    """The constant remainder (2n + 1) k_n^2."""
    return (2 * n + 1) * k_n * k_n


def wave_number(n: int) -> float:
    """k_n = n + 1 from the Dirichlet walls of the unit well."""
    if n < 0:
        raise ValueError("quantum number must be >= 0")
    return float(n + 1)


def energy_spectrum(n: int) -> float:
    """E_n = k_n^2 - 1 = n(n + 2) for the level-1 Hamiltonian."""
    if n < 0:
        raise ValueError("quantum number must be >= 0")
    return float(n * (n + 2))


def ground_state_wavefunction(p: FamilyParams) -> ClosedFormFunction:
    """Unnormalized level-n ground state.

    Tangent:   cos^n(kx) * exp{-i (q/k) ln[sec(kx) + tan(kx)]}
    Cotangent: sin^n(kx) * exp{-i (q/k) ln[csc(kx) - cot(kx)]}

    Raises BranchViolation when the logarithm argument is not positive, so
    the principal branch is never silently crossed.
    """
    if not p.alpha_equals_k:
        raise UnsupportedParameters("closed-form ground states require alpha = k")
    k, q, n = p.k, p.q, p.n
    w = build_superpotential(p)

    if p.variant is Variant.TANGENT:
        def log_arg(x):
            x = np.asarray(x)
            return 1.0 / np.cos(k * x) + np.tan(k * x)

        def envelope(x):
            return np.cos(k * np.asarray(x)) ** n
    else:
        def log_arg(x):
            x = np.asarray(x)
            s = np.sin(k * x)
            return (1.0 - np.cos(k * x)) / s

        def envelope(x):
            return np.sin(k * np.asarray(x)) ** n

    def val(x):
        arg = np.asarray(log_arg(x), dtype=float)
        if np.any(~(arg > 0.0)):
            raise BranchViolation("principal-branch logarithm argument <= 0 in domain")
        return envelope(x) * np.exp(-1j * (q / k) * np.log(arg))

    def d1(x):
        return -np.asarray(w(x)) * val(x)

    def d2(x):
        ww = np.asarray(w(x))
        return (ww * ww - np.asarray(w.deriv1(x))) * val(x)

    return ClosedFormFunction(val, d1, d2, w.poles)


def exponent_from_superpotential(w: ClosedFormFunction, anchor: float = 0.0,
                                 panels: int = 400) -> ClosedFormFunction:
    """f with f' = W and f(anchor) = 0, so that exp(-f) is the ground state.

    Uses the superpotential's closed-form antiderivative when it carries one;
    otherwise a composite-Simpson antiderivative from the anchor.
    """
    for pole in w.poles:
        if abs(anchor - pole) < 1e-12:
            raise PoleOnPath(f"anchor {anchor} sits on a pole of W")

    if w.antiderivative is not None:
        base = complex(np.asarray(w.antiderivative(anchor)))

        def val(x):
            return np.asarray(w.antiderivative(x)) - base

        return ClosedFormFunction(val, w.value_fn, w.deriv1_fn, w.poles)

    def integrate_to(xe: float) -> complex:
        a, b = (anchor, xe) if xe >= anchor else (xe, anchor)
        for pole in w.poles:
            if a - 1e-12 < pole < b + 1e-12:
                raise PoleOnPath(f"pole at {pole} between anchor and {xe}")
        if a == b:
            return 0.0 + 0.0j
        t = np.linspace(a, b, 2 * panels + 1)
        ws = np.ones(t.size)
        ws[1:-1:2] = 4.0
        ws[2:-1:2] = 2.0
        integral = (b - a) / (2 * panels) / 3.0 * np.dot(ws, np.asarray(w(t)))
        return integral if xe >= anchor else -integral

    def val(x):
        xs = np.asarray(x, dtype=float)
        if xs.shape == ():
            return integrate_to(float(xs))
        return np.array([integrate_to(float(xi)) for xi in xs])

    return ClosedFormFunction(val, w.value_fn, w.deriv1_fn, w.poles)


@dataclass(frozen=True)
class HierarchyLevel:
    """One rung of the Hamiltonian hierarchy."""

    level: int
    k: float
    superpotential: ClosedFormFunction
    potentials: PartnerPair
    e0: float
    poles_inside_domain: bool


def hierarchy(p: FamilyParams, depth: int,
              mode: HierarchyMode = HierarchyMode.FIXED_K) -> list:
    """Levels 1..depth of superpotentials, partner pairs, and energy offsets.

    FIXED_K level j uses W_j = j*k*tan(kx) + i*q*sec(kx) with e0 = (j^2-1)k^2;
    PAPER_K substitutes k_j = j + 1 and flags interior poles.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    levels = []
    for j in range(1, depth + 1):
        k_j = p.k if mode is HierarchyMode.FIXED_K else float(j + 1)
        pj = FamilyParams(p.variant, k_j, p.q, k_j, j)
        w = build_superpotential(pj)
        pair = closed_form_potentials(pj)
        if mode is HierarchyMode.FIXED_K:
            e0 = (j * j - 1.0) * p.k * p.k
        else:
            e0 = pair.e0
        if p.variant is Variant.TANGENT:
            inside = any(-WELL_HALF_WIDTH + 1e-9 < x < WELL_HALF_WIDTH - 1e-9 for x in w.poles)
        else:
            inside = any(1e-9 < x < math.pi - 1e-9 for x in w.poles)
        levels.append(HierarchyLevel(j, k_j, w, pair, e0, inside))
    return levels
