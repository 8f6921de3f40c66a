"""Symmetric Dirichlet grids and complex grid functions.

The whole package works on one numerical substrate: an odd number of
interior nodes placed symmetrically about x = 0 inside an open interval
(lo, hi), with the wavefunction pinned to zero at both walls.  The walls
themselves are never nodes, so wall singularities of the potentials are
never evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AsymmetricGrid, GridMismatch, NonFiniteSample


@dataclass(frozen=True)
class Grid:
    """Uniform symmetric grid on (lo, hi) with Dirichlet walls excluded.

    Nodes are x_j = (j - (n+1)/2) * h for j = 1..n_interior, which makes
    the reflection x_j -> x_{n+1-j} an exact sign flip in floating point
    (no rounding), a property the symmetry classifiers rely on.
    """

    lo: float
    hi: float
    n_interior: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"need lo < hi, got [{self.lo}, {self.hi}]")
        if abs(self.lo + self.hi) > 1e-14 * (self.hi - self.lo):
            raise AsymmetricGrid(f"grid must be symmetric about 0: lo={self.lo}, hi={self.hi}")
        if self.n_interior < 3:
            raise ValueError("need at least 3 interior nodes")
        if self.n_interior % 2 == 0:
            raise ValueError("n_interior must be odd (keeps x=0 on-grid, Simpson-friendly)")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n_interior + 1)

    @property
    def nodes(self) -> np.ndarray:
        j = np.arange(1, self.n_interior + 1)
        return (j - (self.n_interior + 1) / 2.0) * self.spacing

    @property
    def center_index(self) -> int:
        return (self.n_interior - 1) // 2


@dataclass(frozen=True)
class ComplexGridFunction:
    """Complex samples on the interior nodes of a grid.

    Construction rejects non-finite samples outright: a NaN/Inf means a
    pole of the sampled expression sits on a node, and clamping it would
    silently corrupt every downstream eigenvalue.
    """

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n_interior,):
            raise ValueError(f"expected {self.grid.n_interior} values, got shape {vals.shape}")
        bad = ~np.isfinite(vals.real) | ~np.isfinite(vals.imag)
        if bad.any():
            j = int(np.argmax(bad))
            raise NonFiniteSample(j, float(self.grid.nodes[j]))
        object.__setattr__(self, "values", vals)

    def __add__(self, other):
        _check_same_grid(self, other)
        return ComplexGridFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return ComplexGridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return ComplexGridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class ParityParts:
    """Even/odd split of a grid function about x = 0."""

    even: ComplexGridFunction
    odd: ComplexGridFunction

    def reconstruct(self) -> ComplexGridFunction:
        return self.even + self.odd


def _check_same_grid(u: ComplexGridFunction, v: ComplexGridFunction):
    if u.grid != v.grid:
        raise GridMismatch("grid functions live on different grids")


def sample(f, grid: Grid) -> ComplexGridFunction:
    """Sample a callable (or ClosedFormFunction) on the interior nodes."""
    with np.errstate(all="ignore"):
        vals = np.asarray(f(grid.nodes), dtype=np.complex128)
    if vals.shape == ():
        vals = np.full(grid.n_interior, complex(vals))
    return ComplexGridFunction(grid, vals)


def reflect(u: ComplexGridFunction) -> ComplexGridFunction:
    """x -> -x, realized exactly by index reversal."""
    return ComplexGridFunction(u.grid, u.values[::-1].copy())


def parity_decompose(u: ComplexGridFunction) -> ParityParts:
    r = reflect(u)
    return ParityParts(
        even=ComplexGridFunction(u.grid, (u.values + r.values) / 2.0),
        odd=ComplexGridFunction(u.grid, (u.values - r.values) / 2.0),
    )


def quadrature(u: ComplexGridFunction) -> complex:
    """Composite Simpson integral over [lo, hi] with zero wall values.

    n_interior odd gives an even number of intervals, so plain Simpson
    weights apply; O(h^4) for smooth integrands vanishing at the walls.
    """
    h = u.grid.spacing
    full = np.concatenate(([0.0 + 0.0j], u.values, [0.0 + 0.0j]))
    w = np.ones(full.size)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return complex(h / 3.0 * np.dot(w, full))
