"""Ladder operators, Hamiltonian application, and factorization checks.

Grid derivatives are 4th-order finite differences throughout.  Interior
nodes use the centered 5-point stencils; the node adjacent to each wall
uses a one-sided 4th-order stencil whose only off-grid sample is the wall
itself, where the Dirichlet value 0 is exact.  (A 2nd-order boundary
stencil leaves residuals too large to discriminate the Hermitian-adjoint
from the anti-PT-conjugate ladder at q = 2.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .analytic import (
    ClosedFormFunction,
    FamilyParams,
    HierarchyMode,
    PartnerPair,
    Variant,
    energy_spectrum,
)
from .errors import PoleOnGrid, UnsupportedMode
from .grids import ComplexGridFunction, Grid, quadrature
from .symmetry import Conjugation, apply_conjugation, normalize_hermitian

# one-sided 4th-order weights at the first interior node; the leading
# sample sits on the wall (exact zero).  Mirror-reversed at the last node.
_D1_EDGE = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0
_D2_EDGE = np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]) / 12.0


def dirichlet_deriv1(values: np.ndarray, h: float) -> np.ndarray:
    n = values.size
    if n < 6:
        raise ValueError("need at least 6 interior nodes for 4th-order stencils")
    u = np.concatenate(([0.0 + 0.0j], values, [0.0 + 0.0j]))
    out = np.empty(n, dtype=np.complex128)
    uu = np.concatenate(([0.0 + 0.0j, 0.0 + 0.0j], values, [0.0 + 0.0j, 0.0 + 0.0j]))
    core = (-uu[4:] + 8.0 * uu[3:-1] - 8.0 * uu[1:-3] + uu[:-4]) / (12.0 * h)
    out[1:-1] = core[1:-1]
    out[0] = np.dot(_D1_EDGE, u[:5]) / h
    out[-1] = -np.dot(_D1_EDGE, u[::-1][:5]) / h
    return out


def dirichlet_deriv2(values: np.ndarray, h: float) -> np.ndarray:
    n = values.size
    if n < 6:
        raise ValueError("need at least 6 interior nodes for 4th-order stencils")
    u = np.concatenate(([0.0 + 0.0j], values, [0.0 + 0.0j]))
    out = np.empty(n, dtype=np.complex128)
    uu = np.concatenate(([0.0 + 0.0j, 0.0 + 0.0j], values, [0.0 + 0.0j, 0.0 + 0.0j]))
    core = (-uu[4:] + 16.0 * uu[3:-1] - 30.0 * uu[2:-2] + 16.0 * uu[1:-3] - uu[:-4]) / (12.0 * h * h)
    out[1:-1] = core[1:-1]
    out[0] = np.dot(_D2_EDGE, u[:6]) / (h * h)
    out[-1] = np.dot(_D2_EDGE, u[::-1][:6]) / (h * h)
    return out


def _coeff_on_grid(f: ClosedFormFunction, grid: Grid) -> np.ndarray:
    with np.errstate(all="ignore"):
        vals = np.asarray(f(grid.nodes), dtype=np.complex128)
    if not np.all(np.isfinite(vals.real) & np.isfinite(vals.imag)):
        j = int(np.argmax(~np.isfinite(vals.real) | ~np.isfinite(vals.imag)))
        raise PoleOnGrid(f"coefficient singular at node {j} (x = {grid.nodes[j]!r})")
    return vals


@dataclass(frozen=True)
class LadderOperator:
    """First-order operator  derivative_sign * d/dx + W  (W conjugated for the adjoint)."""

    w: ClosedFormFunction
    derivative_sign: int
    conjugate_w: bool


def ladder_a(w: ClosedFormFunction) -> LadderOperator:
    """A = d/dx + W."""
    return LadderOperator(w, +1, False)


def ladder_a_apt(w: ClosedFormFunction) -> LadderOperator:
    """A^APT = -d/dx + W: the anti-PT conjugate leaves W untouched."""
    return LadderOperator(w, -1, False)


def ladder_a_dagger(w: ClosedFormFunction) -> LadderOperator:
    """A† = -d/dx + conj(W): the Hermitian adjoint flips the imaginary part."""
    return LadderOperator(w, -1, True)


def apply_ladder(op: LadderOperator, psi: ComplexGridFunction) -> ComplexGridFunction:
    w_vals = _coeff_on_grid(op.w, psi.grid)
    if op.conjugate_w:
        w_vals = np.conj(w_vals)
    dpsi = dirichlet_deriv1(psi.values, psi.grid.spacing)
    return ComplexGridFunction(psi.grid, op.derivative_sign * dpsi + w_vals * psi.values)


def hamiltonian_apply(v: ClosedFormFunction, psi: ComplexGridFunction) -> ComplexGridFunction:
    """H psi = -psi'' + V psi in hbar = 2m = 1 units."""
    v_vals = _coeff_on_grid(v, psi.grid)
    d2 = dirichlet_deriv2(psi.values, psi.grid.spacing)
    return ComplexGridFunction(psi.grid, -d2 + v_vals * psi.values)


def factorization_residual(w: ClosedFormFunction, pair: PartnerPair,
                           psi: ComplexGridFunction,
                           lower: LadderOperator = None) -> tuple:
    """Sup-norms of [A^APT A psi - (-psi'' + (v1-e0) psi)] and the A A^APT partner.

    ``lower`` substitutes a different conjugate for A^APT (e.g. the Hermitian
    adjoint) to expose how the factorization breaks when complex conjugation
    replaces anti-PT conjugation.
    """
    a = ladder_a(w)
    a_conj = lower if lower is not None else ladder_a_apt(w)
    h1_psi = apply_ladder(a_conj, apply_ladder(a, psi))
    h2_psi = apply_ladder(a, apply_ladder(a_conj, psi))

    def shifted_potential(v):
        return ClosedFormFunction(
            lambda x: np.asarray(v(x)) - pair.e0,
            v.deriv1_fn, v.deriv2_fn, v.poles)

    ref1 = hamiltonian_apply(shifted_potential(pair.v1), psi)
    ref2 = hamiltonian_apply(shifted_potential(pair.v2), psi)
    r1 = float(np.max(np.abs(h1_psi.values - ref1.values)))
    r2 = float(np.max(np.abs(h2_psi.values - ref2.values)))
    return r1, r2


def apt_partner_relation_check(w: ClosedFormFunction, psi: ComplexGridFunction) -> float:
    """Anti-PT invariance of the upper partner Hamiltonian H2 = A A^APT.

    Returns sup | L(H2(L psi)) - H2 psi | with L the anti-PT map on grid
    functions.  For an anti-PT-symmetric superpotential the conjugated
    operator coincides with H2 (its potential is PT-symmetric), which is
    the concrete, checkable content of conjugating the factorized pair:
    swapping A and A^APT under anti-PT conjugation carries H2 into H1.
    """
    a = ladder_a(w)
    a_apt = ladder_a_apt(w)

    def h2(u):
        return apply_ladder(a, apply_ladder(a_apt, u))

    lam_psi = apply_conjugation(Conjugation.APT, psi)
    lhs = apply_conjugation(Conjugation.APT, h2(lam_psi))
    rhs = h2(psi)
    return float(np.max(np.abs(lhs.values - rhs.values)))


@dataclass(frozen=True)
class ExcitedState:
    """A ladder-built eigenstate candidate of the level-1 Hamiltonian."""

    index: int
    energy: float
    state: ComplexGridFunction
    residual_sup: float
    residual_interior: float


def _ladder_prefactor(variant: Variant, k: float, q: float, top_level: int):
    """The smooth prefactor C_j with the unimodular phase factored out.

    Writing psi = C * exp(-i (q/k) ln(sec+tan)) (tangent; csc-cot for the
    cotangent family), each anti-PT ladder rung acts on C alone as
    C -> -C' + l k tan(kx) C + 2 i q sec(kx) C.  Keeping C as a cancelled
    rational in sin/cos avoids the catastrophic near-wall cancellation
    that expanding the full state produces.
    """
    x = sp.symbols("x", real=True)
    kk = sp.nsimplify(k) if float(k).is_integer() else sp.Float(k)
    qq = sp.nsimplify(q) if float(q).is_integer() else sp.Float(q)
    s, c = sp.sin(kk * x), sp.cos(kk * x)
    if variant is Variant.TANGENT:
        cfac = c ** top_level

        def rung(expr, lvl):
            return -sp.diff(expr, x) + (lvl * kk * s / c + 2 * sp.I * qq / c) * expr
    else:
        cfac = s ** top_level

        def rung(expr, lvl):
            return -sp.diff(expr, x) + (-lvl * kk * c / s + 2 * sp.I * qq / s) * expr

    expr = cfac
    for lvl in range(top_level - 1, 0, -1):
        expr = sp.cancel(sp.together(rung(expr, lvl)))
    return x, expr


def build_excited_states(p: FamilyParams, count: int, grid: Grid,
                         mode: HierarchyMode = HierarchyMode.FIXED_K) -> list:
    """States 0..count-1 of the level-1 Hamiltonian via the anti-PT ladder chain.

    State j applies A^APT of levels j, j-1, ..., 1 to the (j+1)-th hierarchy
    ground state.  The chain is composed symbolically (repeated grid
    differentiation would amplify rounding noise by 1/h per rung) and only
    the final state is sampled; each state carries the finite-difference
    residual of H1 psi = E_j psi with E_j = j(j+2) * k^2.
    """
    if mode is not HierarchyMode.FIXED_K:
        raise UnsupportedMode("excited-state ladders are defined for the fixed-k hierarchy")
    if not 1 <= count <= 8:
        raise ValueError("count must be in 1..8 (deeper ladders amplify wall truncation error)")
    if not p.alpha_equals_k:
        raise UnsupportedMode("ladder chain requires the alpha = k closed forms")

    from .analytic import closed_form_potentials  # local import avoids cycle noise

    v1 = closed_form_potentials(FamilyParams(p.variant, p.k, p.q, p.k, 1)).v1
    if p.variant is Variant.COTANGENT:
        from .analytic import on_symmetric_well
        v1 = on_symmetric_well(v1)

    states = []
    margin = max(4, grid.n_interior // 100)
    for j in range(count):
        x, prefactor = _ladder_prefactor(p.variant, p.k, p.q, j + 1)
        fn = sp.lambdify(x, prefactor, modules="numpy")
        nodes = grid.nodes
        if p.variant is Variant.COTANGENT:
            nodes = nodes + np.pi / 2.0
        with np.errstate(all="ignore"):
            cvals = np.asarray(fn(nodes), dtype=np.complex128)
            if cvals.shape == ():
                cvals = np.full(nodes.size, complex(cvals))
            if p.variant is Variant.TANGENT:
                log_arg = 1.0 / np.cos(p.k * nodes) + np.tan(p.k * nodes)
            else:
                log_arg = (1.0 - np.cos(p.k * nodes)) / np.sin(p.k * nodes)
            vals = cvals * np.exp(-1j * (p.q / p.k) * np.log(log_arg))
        state = normalize_hermitian(ComplexGridFunction(grid, vals))
        energy = energy_spectrum(j) * p.k * p.k
        h_psi = hamiltonian_apply(v1, state)
        res = np.abs(h_psi.values - energy * state.values)
        states.append(ExcitedState(
            index=j,
            energy=energy,
            state=state,
            residual_sup=float(np.max(res)),
            residual_interior=float(np.max(res[margin:-margin])),
        ))
    return states


def smooth_test_state(grid: Grid, k: float = 1.0, wiggle: float = 5.0) -> ComplexGridFunction:
    """cos^2(kx) exp(i sin(wiggle x)): a smooth, wall-vanishing complex test state.

    Both the state and its image under A = d/dx + W vanish at the walls,
    so the Dirichlet stencils see no truncation penalty from the
    boundaries; this is the reference input for factorization checks.
    The phase wiggle keeps the truncation error above the 1/h^2 rounding
    floor so convergence order stays measurable.
    """
    x = grid.nodes
    vals = np.cos(k * x) ** 2 * np.exp(1j * np.sin(wiggle * x))
    return ComplexGridFunction(grid, vals)


def rayleigh_quotient(v: ClosedFormFunction, psi: ComplexGridFunction) -> complex:
    """Hermitian Rayleigh quotient <psi|H|psi>/<psi|psi> with H = -d2 + V."""
    h_psi = hamiltonian_apply(v, psi)
    num = quadrature(ComplexGridFunction(psi.grid, np.conj(psi.values) * h_psi.values))
    den = quadrature(ComplexGridFunction(psi.grid, np.abs(psi.values) ** 2 + 0j))
    return num / den
