"""Grids, complex fields, quadrature norms and shared observables.

Every quantity in the package lives on a uniform symmetric grid and every
norm/inner product is the plain Riemann sum with weight dx.  That single
quadrature rule is used everywhere (it is spectrally accurate for the smooth,
decaying fields this package works with and is consistent with the periodic
split-step propagator).
"""

from __future__ import annotations

import dataclasses
from functools import cached_property

import numpy as np

from .errors import DomainError, GridMismatchError, UsageError


@dataclasses.dataclass(frozen=True)
class Grid1D:
    """Uniform grid on [-L, L) with nodes x_j = -L + j*dx, j = 0..n-1.

    The endpoints are identified periodically, so +L is not a separate node.
    Every node except x_0 = -L has its mirror image -x on the grid; under the
    periodic identification x_0 is its own mirror.  n_points must be a power
    of two because the split-step kinetic step uses the FFT.
    """

    half_width: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.half_width) and self.half_width > 0):
            raise DomainError("half_width must be positive and finite")
        n = self.n_points
        if n < 64 or n & (n - 1):
            raise DomainError("n_points must be a power of two >= 64")

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @cached_property
    def x(self) -> np.ndarray:
        arr = -self.half_width + self.dx * np.arange(self.n_points)
        arr.setflags(write=False)
        return arr

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """FFT angular wavenumbers matching numpy's transform layout."""
        arr = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)
        arr.setflags(write=False)
        return arr


def _reflection_indices(n: int) -> np.ndarray:
    return (-np.arange(n)) % n


@dataclasses.dataclass(frozen=True, eq=False)
class Wavefunction:
    """Complex field on a Grid1D; dimension length^(-1/2) so ||psi||_2 is
    dimensionless.  Samples are copied and frozen at construction; whether the
    field is normalized is never cached, always recomputed via lp_norm."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n_points,):
            raise UsageError(
                f"expected {self.grid.n_points} samples, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise DomainError("wavefunction samples must be finite")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: Grid1D, f) -> "Wavefunction":
        return cls(grid, np.asarray(f(grid.x), dtype=np.complex128))


@dataclasses.dataclass(frozen=True, eq=False)
class OddObservable:
    """Bounded real observable X with X(-x) = -X(x), certified at construction.

    Oddness is checked exactly on the node pairing j <-> n-j; the unpaired
    node x_0 = -L must carry X = 0 (the odd extension under the periodic
    endpoint identification).
    """

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_points,):
            raise UsageError(
                f"expected {self.grid.n_points} samples, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise DomainError("observable samples must be finite")
        scale = max(1.0, float(np.max(np.abs(v))))
        defect = float(np.max(np.abs(v + v[_reflection_indices(self.grid.n_points)])))
        if defect > 1e-12 * scale:
            raise DomainError(f"observable is not odd on the grid (defect {defect:g})")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def default_observable(grid: Grid1D) -> OddObservable:
    """sin(pi x / L): odd, bounded, vanishing at the identified endpoints."""
    return OddObservable(grid, np.sin(np.pi * grid.x / grid.half_width))


def lp_norm(f: Wavefunction, p: float) -> float:
    """||f||_p = (sum_j |f_j|^p dx)^(1/p); p = inf gives max_j |f_j|."""
    if not p >= 1.0:
        raise DomainError("p must satisfy p >= 1")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(np.max(a))
    return float(np.sum(a**p) * f.grid.dx) ** (1.0 / p)


def _require_same_grid(f, g):
    if f.grid != g.grid:
        raise GridMismatchError("operands live on different grids")


def inner_product(f: Wavefunction, g: Wavefunction) -> complex:
    """<f, g> = sum_j conj(f_j) g_j dx, conjugate-linear in the first slot."""
    _require_same_grid(f, g)
    return complex(np.sum(np.conj(f.values) * g.values) * f.grid.dx)


def center_of_mass(psi: Wavefunction, observable: OddObservable) -> float:
    """<X psi, psi> = integral X |psi|^2 dx.

    The result is real up to rounding; the imaginary part is asserted below
    1e-12 and discarded.
    """
    _require_same_grid(psi, observable)
    val = complex(
        np.sum(np.conj(observable.values * psi.values) * psi.values) * psi.grid.dx
    )
    if abs(val.imag) >= 1e-12:
        raise UsageError(f"center of mass not real: imag={val.imag:g}")
    return val.real


def reflect(psi: Wavefunction) -> Wavefunction:
    """Reflection R(psi)(x) = psi(-x) as a grid permutation (an exact isometry)."""
    return Wavefunction(psi.grid, psi.values[_reflection_indices(psi.grid.n_points)])
