"""Double-well validation, the discrete Hamiltonian, and the ground doublet.

The Hamiltonian H = -(hbar^2/2m) d^2/dx^2 + V is discretized with 3-point
central differences.  The eigenproblem is posed on the interior nodes
(x = -L+dx .. L-dx, Dirichlet beyond), a node set symmetric about 0, so the
discrete operator commutes with reflection exactly.  Eigenpairs are computed
per parity sector on the half domain: the even sector couples the x = 0 node
with weight -sqrt(2) t (a similarity transform that keeps the block symmetric
and its spectrum equal to the full even sector), the odd sector is a plain
Dirichlet block.  Parity-pure eigenvectors come out by construction, and the
tunneling splitting is a difference of two independently computed eigenvalues
rather than a catastrophic cancellation inside one degenerate solve.

For deep wells the splitting underflows the double-precision solver tolerance
(~eps*||H||).  The parity blocks are then re-bisected in extended precision
(mpmath Sturm counts on the same float64 matrix entries), which resolves
splittings down to ~1e-50 relative to the eigenvalue scale.
"""

from __future__ import annotations

import dataclasses
import math
from functools import cached_property

import numpy as np
from scipy.integrate import quad, simpson
from scipy.linalg import eigh_tridiagonal

from .core import Grid1D, Wavefunction, lp_norm, reflect
from .errors import (
    DomainError,
    ModelError,
    PotentialValidationError,
    SolverError,
    UsageError,
)
from .util import ordered_parallel_map


@dataclasses.dataclass(frozen=True, eq=False)
class PotentialSpec:
    """A symmetric double-well potential: the built-in quartic family
    V(x) = V0 ((x/a)^2 - 1)^2, or user-tabulated samples on a grid."""

    kind: str
    v0: float | None = None
    a: float | None = None
    table_grid: Grid1D | None = None
    table_values: np.ndarray | None = None

    @classmethod
    def quartic(cls, v0: float, a: float) -> "PotentialSpec":
        if not (v0 > 0 and a > 0):
            raise DomainError("quartic potential needs v0 > 0 and a > 0")
        return cls(kind="quartic", v0=float(v0), a=float(a))

    @classmethod
    def tabulated(cls, grid: Grid1D, values) -> "PotentialSpec":
        v = np.asarray(values, dtype=float)
        if v.shape != (grid.n_points,):
            raise UsageError("tabulated potential must match its grid")
        if not np.all(np.isfinite(v)):
            raise DomainError("tabulated potential must be finite")
        v = v.copy()
        v.setflags(write=False)
        return cls(kind="tabulated", table_grid=grid, table_values=v)

    def __call__(self, x):
        if self.kind == "quartic":
            u = np.square(np.asarray(x, dtype=float) / self.a) - 1.0
            return self.v0 * u * u
        # linear interpolation between table nodes (exact on the nodes)
        return np.interp(x, self.table_grid.x, self.table_values)

    @property
    def v_min(self) -> float:
        if self.kind == "quartic":
            return 0.0
        return float(np.min(self.table_values))

    @property
    def v_inf(self) -> float:
        """liminf proxy: +inf for the confining quartic, the smaller edge
        value for a tabulated potential."""
        if self.kind == "quartic":
            return math.inf
        return float(min(self.table_values[0], self.table_values[-1]))

    @property
    def barrier_height(self) -> float:
        """V(0) - V_min, the barrier top of a symmetric double well."""
        return float(self(0.0)) - self.v_min


@dataclasses.dataclass(frozen=True)
class ValidationCheck:
    name: str
    passed: bool
    measured: dict
    detail: str


@dataclasses.dataclass(frozen=True, eq=False)
class PotentialValidationReport:
    checks: tuple[ValidationCheck, ...]
    well_position: float | None  # inferred minima location (>0), if found

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[ValidationCheck]:
        return [c for c in self.checks if not c.passed]

    def raise_for_failure(self):
        bad = self.failures()
        if bad:
            names = ", ".join(c.name for c in bad)
            raise PotentialValidationError(
                f"potential failed validation check(s): {names}; "
                + "; ".join(f"{c.name}: {c.detail}" for c in bad)
            )


def validate_potential(spec: PotentialSpec, grid: Grid1D) -> PotentialValidationReport:
    """Check the double-well hypotheses on the grid: evenness, exactly two
    non-degenerate global minima at +-a, and confinement above the minima
    away from the wells.  Failures are reported, not raised."""
    v = np.asarray(spec(grid.x), dtype=float)
    n = grid.n_points
    dx = grid.dx
    checks = []

    finite = bool(np.all(np.isfinite(v)))
    checks.append(
        ValidationCheck("finite-samples", finite, {}, "all samples finite" if finite else "non-finite samples")
    )
    if not finite:
        return PotentialValidationReport(tuple(checks), None)

    scale = max(1.0, float(np.max(np.abs(v))))
    mirror = v[(-np.arange(n)) % n]
    sym_defect = float(np.max(np.abs(v - mirror)))
    checks.append(
        ValidationCheck(
            "symmetry",
            sym_defect <= 1e-12 * scale,
            {"defect": sym_defect, "tolerance": 1e-12 * scale},
            f"max |V(x)-V(-x)| = {sym_defect:g}",
        )
    )

    v_min = float(np.min(v))
    tol_min = 1e-9 * scale
    interior = np.arange(1, n - 1)
    is_local_min = (v[interior] <= v[interior - 1]) & (v[interior] <= v[interior + 1])
    is_global = v[interior] <= v_min + tol_min
    idx = interior[is_local_min & is_global]
    # collapse plateaus of adjacent indices into one minimum
    groups = []
    for i in idx:
        if groups and i == groups[-1][-1] + 1:
            groups[-1].append(i)
        else:
            groups.append([i])
    min_locs = [float(np.mean(grid.x[g])) for g in groups]
    two_minima = len(min_locs) == 2 and min_locs[0] < 0 < min_locs[1] and abs(
        min_locs[0] + min_locs[1]
    ) <= 2 * dx
    well = abs(min_locs[1]) if two_minima else None
    if spec.kind == "quartic" and two_minima:
        two_minima = abs(well - spec.a) <= 2 * dx
    checks.append(
        ValidationCheck(
            "two-minima",
            two_minima,
            {"minima": min_locs, "v_min": v_min},
            f"global minima at {min_locs}",
        )
    )

    if two_minima:
        curvs = []
        for g in groups:
            i = g[len(g) // 2]
            curvs.append(float((v[i - 1] - 2 * v[i] + v[i + 1]) / dx**2))
        nondeg = all(c > 0 for c in curvs)
        checks.append(
            ValidationCheck(
                "nondegeneracy",
                nondeg,
                {"second_derivatives": curvs},
                f"numerical V'' at minima: {curvs}",
            )
        )
        if 2 * well < grid.half_width:
            outside = np.abs(grid.x) >= 2 * well
            v_out = float(np.min(v[outside]))
            checks.append(
                ValidationCheck(
                    "confinement",
                    v_out > v_min,
                    {"min_outside": v_out, "v_min": v_min},
                    f"min V over |x| >= 2a is {v_out:g} vs V_min {v_min:g}",
                )
            )
        else:
            checks.append(
                ValidationCheck(
                    "confinement",
                    False,
                    {"well_position": well, "half_width": grid.half_width},
                    "grid too small to test V beyond |x| = 2a",
                )
            )
    return PotentialValidationReport(tuple(checks), well)


@dataclasses.dataclass(frozen=True, eq=False)
class DiscreteHamiltonian:
    """H = -(hbar^2/2m) d^2/dx^2 + V on a Grid1D.

    `apply` acts on full-grid sample arrays with the FD stencil and zero
    (Dirichlet) padding; the symmetric tridiagonal realization used for
    eigensolving is its restriction to the interior nodes, on which the two
    agree row by row.
    """

    grid: Grid1D
    potential: PotentialSpec
    hbar: float
    mass: float
    v: np.ndarray  # potential samples on the full grid

    @property
    def kinetic_scale(self) -> float:
        """FD hopping t = hbar^2 / (2 m dx^2)."""
        return self.hbar**2 / (2.0 * self.mass * self.grid.dx**2)

    @cached_property
    def interior_x(self) -> np.ndarray:
        return self.grid.x[1:]

    def tridiagonal(self):
        """(diagonal, off-diagonal) of the interior realization."""
        t = self.kinetic_scale
        d = 2.0 * t + self.v[1:]
        e = -t * np.ones(self.grid.n_points - 2)
        return d, e

    def parity_blocks(self):
        """Symmetric tridiagonal blocks for the even/odd sectors on x >= 0.

        The even block carries the x = 0 node scaled by 1/sqrt(2) so that the
        block stays symmetric; its spectrum equals the even sector of the
        interior matrix exactly.
        """
        t = self.kinetic_scale
        nz = self.grid.n_points // 2 - 1  # interior index of x = 0
        vp = self.v[1:][nz:]
        d_even = 2.0 * t + vp
        e_even = -t * np.ones(len(vp) - 1)
        e_even[0] = -t * math.sqrt(2.0)
        d_odd = 2.0 * t + vp[1:]
        e_odd = -t * np.ones(len(vp) - 2)
        return (d_even, e_even), (d_odd, e_odd)

    def apply(self, values: np.ndarray) -> np.ndarray:
        t = self.kinetic_scale
        out = (2.0 * t + self.v) * values
        out[:-1] -= t * values[1:]
        out[1:] -= t * values[:-1]
        return out

    def matvec_interior(self, vec: np.ndarray) -> np.ndarray:
        d, e = self.tridiagonal()
        out = d * vec
        out[:-1] += e * vec[1:]
        out[1:] += e * vec[:-1]
        return out

    def solver_tolerance(self) -> float:
        """Absolute eigenvalue accuracy floor of the float64 bisection."""
        d, e = self.tridiagonal()
        bound = float(np.max(np.abs(d))) + 2.0 * float(np.max(np.abs(e)))
        return np.finfo(float).eps * bound


def assemble_hamiltonian(
    grid: Grid1D,
    spec: PotentialSpec,
    hbar: float,
    m: float,
    *,
    skip_validation: bool = False,
) -> DiscreteHamiltonian:
    """Build the discrete Hamiltonian after validating the double-well
    hypotheses.  `skip_validation` exists for the eigensolver-validation path
    (e.g. a harmonic potential), where the double-well checks do not apply."""
    if not hbar > 0:
        raise DomainError("hbar must be positive")
    if not m > 0:
        raise DomainError("mass must be positive")
    if not skip_validation:
        validate_potential(spec, grid).raise_for_failure()
    v = np.asarray(spec(grid.x), dtype=float).copy()
    v.setflags(write=False)
    return DiscreteHamiltonian(grid=grid, potential=spec, hbar=hbar, mass=m, v=v)


# ---------------------------------------------------------------------------
# extended-precision Sturm bisection for the tiny-splitting regime


def _mp_sturm_count(d, e2, lam):
    """Number of eigenvalues of the symmetric tridiagonal (d, e) below lam,
    by the standard LDL^T sign count.  d, e2 (squared off-diagonals) and lam
    are mpmath floats."""
    import mpmath as mp

    count = 0
    q = d[0] - lam
    if q < 0:
        count += 1
    tiny = mp.mpf(10) ** (-2 * mp.mp.dps)
    for i in range(1, len(d)):
        if q == 0:
            q = tiny
        q = (d[i] - lam) - e2[i - 1] / q
        if q < 0:
            count += 1
    return count


def _mp_refine_ground(d, e2, lo, hi, width):
    """Bisect the lowest eigenvalue of (d, e) inside [lo, hi] down to the
    requested bracket width.  Inputs are mpmath floats."""
    if _mp_sturm_count(d, e2, lo) != 0 or _mp_sturm_count(d, e2, hi) < 1:
        raise SolverError("Sturm bracket does not isolate the lowest eigenvalue")
    while hi - lo > width:
        mid = (lo + hi) / 2
        if _mp_sturm_count(d, e2, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def _mp_parity_splitting(blocks, lam_even, lam_odd, dps=60, rel_target=1e-9):
    """Return (lam1, lam2, omega) with omega = (lam_odd - lam_even)/2 resolved
    in extended precision on the float64 parity blocks."""
    import mpmath as mp

    (de, ee), (do, eo) = blocks
    old_dps = mp.mp.dps
    mp.mp.dps = dps
    try:
        dme = [mp.mpf(float(x)) for x in de]
        e2e = [mp.mpf(float(x)) ** 2 for x in ee]
        dmo = [mp.mpf(float(x)) for x in do]
        e2o = [mp.mpf(float(x)) ** 2 for x in eo]
        center = mp.mpf(0.5 * (lam_even + lam_odd))
        delta = mp.mpf(max(1e-8, 1e-6 * abs(lam_even)))
        floor = mp.mpf(10) ** (-(dps - 8))
        # first stage: isolate both eigenvalues well below the float64 floor
        stage1 = max(mp.mpf(1e-18) * max(1, abs(center)), floor)
        lo_e, hi_e = _mp_refine_ground(dme, e2e, center - delta, center + delta, stage1)
        lo_o, hi_o = _mp_refine_ground(dmo, e2o, center - delta, center + delta, stage1)
        gap = (lo_o + hi_o) / 2 - (lo_e + hi_e) / 2
        if gap <= 0:
            gap = stage1
        # second stage: resolve the splitting to rel_target
        target = max(abs(gap) * mp.mpf(rel_target), floor)
        if target < stage1:
            lo_e, hi_e = _mp_refine_ground(dme, e2e, lo_e, hi_e, target)
            lo_o, hi_o = _mp_refine_ground(dmo, e2o, lo_o, hi_o, target)
        lam1 = (lo_e + hi_e) / 2
        lam2 = (lo_o + hi_o) / 2
        omega = (lam2 - lam1) / 2
        if omega <= 0:
            raise SolverError(
                "tunneling splitting unresolvable even at extended precision "
                f"(dps={dps}); increase dps or hbar"
            )
        return float(lam1), float(lam2), float(omega)
    finally:
        mp.mp.dps = old_dps


# ---------------------------------------------------------------------------
# ground doublet


@dataclasses.dataclass(frozen=True, eq=False)
class DoubletBasis:
    """The ground doublet and derived single-well data.

    omega is authoritative for the splitting: in the tiny-splitting regime it
    comes from the extended-precision parity bisection and can be far below
    the float64 resolution of lam2 - lam1.
    """

    hamiltonian: DiscreteHamiltonian
    lam1: float
    lam2: float
    lam_extra: tuple[float, ...]
    omega: float
    Omega: float
    gap3: float
    phi1: Wavefunction
    phi2: Wavefunction
    phiR: Wavefunction
    phiL: Wavefunction
    c: float        # ||phiR^2||^2 = integral phiR^4 dx (enters the two-mode system)
    c_alt: float    # ||phiR^2||   = sqrt(c), the other normalization in use
    tiny_splitting: bool

    @property
    def grid(self) -> Grid1D:
        return self.hamiltonian.grid

    def beating_period(self) -> float:
        return math.pi * self.hamiltonian.hbar / self.omega


def _solve_parity_block(d, e, k_lowest):
    try:
        w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, k_lowest - 1))
    except Exception as exc:  # pragma: no cover - LAPACK failure path
        raise SolverError(f"tridiagonal eigensolve failed: {exc}") from exc
    return w, v


def _unfold_parity_vector(block_vec, n_interior, even: bool):
    """Extend a half-domain parity eigenvector to the interior node set."""
    nz = (n_interior + 1) // 2 - 1  # interior index of x = 0
    out = np.empty(n_interior)
    if even:
        out[nz] = block_vec[0] * math.sqrt(2.0)
        out[nz + 1 :] = block_vec[1:]
        out[:nz] = block_vec[1:][::-1]
    else:
        out[nz] = 0.0
        out[nz + 1 :] = block_vec
        out[:nz] = -block_vec[::-1]
    return out


def lowest_doublet(
    H: DiscreteHamiltonian, k_extra: int = 1, *, tiny_dps: int = 60
) -> DoubletBasis:
    """Ground doublet of a validated double-well Hamiltonian.

    Eigenvalues per parity sector by bisection + inverse iteration on the
    symmetric tridiagonal blocks; when the splitting falls below 1e3 x the
    float64 solver tolerance the parity blocks are re-bisected with
    extended-precision Sturm counts.  Sign convention: phi1 and phi2 positive
    at the right well, making phiR the right-localized state.
    """
    if k_extra < 1:
        raise UsageError("k_extra must be >= 1")
    grid = H.grid
    n_int = grid.n_points - 1
    blocks = H.parity_blocks()
    (de, ee), (do, eo) = blocks
    k_block = 1 + k_extra
    w_even, v_even = _solve_parity_block(de, ee, k_block)
    w_odd, v_odd = _solve_parity_block(do, eo, k_block)

    lam1 = float(w_even[0])
    lam2 = float(w_odd[0])
    if not lam2 >= lam1:
        raise SolverError("odd ground level below even ground level")

    omega = 0.5 * (lam2 - lam1)
    tiny = omega < 1e3 * H.solver_tolerance()
    if tiny:
        lam1, lam2, omega = _mp_parity_splitting(blocks, lam1, lam2, dps=tiny_dps)
    Omega = 0.5 * (lam2 + lam1)

    extras = sorted(list(w_even[1:]) + list(w_odd[1:]))[:k_extra]
    gap3 = float(extras[0]) - lam2
    if not (omega > 0):
        raise ModelError("vanishing splitting: doublet degenerate at working precision")
    if gap3 <= 2.0 * omega:
        raise ModelError(
            f"ground doublet not separated: gap3 = {gap3:g} <= 2*omega = {2*omega:g}"
        )

    phi1_int = _unfold_parity_vector(v_even[:, 0], n_int, even=True)
    phi2_int = _unfold_parity_vector(v_odd[:, 0], n_int, even=False)
    dx = grid.dx
    phi1_int /= math.sqrt(np.sum(phi1_int**2) * dx)
    phi2_int /= math.sqrt(np.sum(phi2_int**2) * dx)

    # sign convention: positive at the right well
    right = H.interior_x > 0
    jstar = np.argmax(np.where(right, phi1_int**2, -1.0))
    if phi1_int[jstar] < 0:
        phi1_int = -phi1_int
    jstar2 = np.argmax(np.where(right, phi2_int**2, -1.0))
    if phi2_int[jstar2] < 0:
        phi2_int = -phi2_int

    # residuals against the interior realization
    for lam, vec in ((lam1, phi1_int), (lam2, phi2_int)):
        res = H.matvec_interior(vec) - lam * vec
        if math.sqrt(np.sum(res**2) * dx) > 1e-8 * abs(lam):
            raise SolverError(
                f"eigen-residual above tolerance at lambda = {lam:g}"
            )

    # embed into the full grid (the x = -L node carries 0 by the Dirichlet
    # convention) and assert the decay-based domain truncation
    def embed(vec):
        full = np.zeros(grid.n_points, dtype=complex)
        full[1:] = vec
        return Wavefunction(grid, full)

    boundary_amp = max(
        abs(phi1_int[0]), abs(phi1_int[-1]), abs(phi2_int[0]), abs(phi2_int[-1])
    )
    if boundary_amp >= 1e-12:
        raise ModelError(
            f"eigenstates not decayed at the boundary (|phi| = {boundary_amp:g}); "
            "increase the grid half_width"
        )

    phi1 = embed(phi1_int)
    phi2 = embed(phi2_int)
    phiR = Wavefunction(grid, (phi1.values + phi2.values) / math.sqrt(2.0))
    phiL = Wavefunction(grid, (phi1.values - phi2.values) / math.sqrt(2.0))

    for f in (phi1, phi2, phiR, phiL):
        if abs(lp_norm(f, 2) - 1.0) > 1e-10:
            raise ModelError("doublet state failed normalization check")
    for f, sign in ((phi1, -1.0), (phi2, +1.0)):
        parity_defect = lp_norm(
            Wavefunction(grid, f.values + sign * reflect(f).values), 2
        )
        if parity_defect > 1e-8:
            raise ModelError(f"parity defect {parity_defect:g} above tolerance")
    mirror_defect = lp_norm(
        Wavefunction(grid, reflect(phiR).values - phiL.values), 2
    )
    if mirror_defect > 1e-8:
        raise ModelError("phiR(-x) != phiL(x) beyond tolerance")

    # localization proxy: phiR carries all but O(omega) of its mass on x > 0
    right_mass = float(
        np.sum(np.abs(phiR.values[grid.x > 0]) ** 2) * dx
    )
    if right_mass < 1.0 - 10.0 * omega:
        raise ModelError(
            f"phiR not localized on the right well (mass {right_mass:g})"
        )

    c = float(np.sum(phiR.values.real**4) * dx)
    return DoubletBasis(
        hamiltonian=H,
        lam1=lam1,
        lam2=lam2,
        lam_extra=tuple(float(t) for t in extras),
        omega=omega,
        Omega=Omega,
        gap3=gap3,
        phi1=phi1,
        phi2=phi2,
        phiR=phiR,
        phiL=phiL,
        c=c,
        c_alt=math.sqrt(c),
        tiny_splitting=tiny,
    )


def lowest_eigenvalues(H: DiscreteHamiltonian, k: int) -> np.ndarray:
    """The k lowest eigenvalues of the interior tridiagonal realization
    (eigensolver-validation path; no double-well structure assumed)."""
    d, e = H.tridiagonal()
    try:
        return eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1), eigvals_only=True)
    except Exception as exc:  # pragma: no cover
        raise SolverError(f"tridiagonal eigensolve failed: {exc}") from exc


def overlap_sup(basis: DoubletBasis) -> float:
    """max_j |phiR(x_j) phiL(x_j)|, the sup-norm of the single-well overlap."""
    return float(np.max(np.abs(basis.phiR.values * basis.phiL.values)))


# ---------------------------------------------------------------------------
# Agmon distance


def _well_boundary(spec: PotentialSpec, level: float, x_max: float) -> float:
    """Smallest positive x with V(x) = level, by scan + bisection."""
    xs = np.linspace(0.0, x_max, 16385)
    vs = np.asarray(spec(xs), dtype=float)
    below = vs <= level
    if not np.any(below):
        raise DomainError("no well boundary: potential never reaches the level")
    i = int(np.argmax(below))
    if i == 0:
        return 0.0
    lo, hi = xs[i - 1], xs[i]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if float(spec(mid)) <= level:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return hi


def agmon_distance(spec: PotentialSpec, delta: float = 0.0, *, n_quad: int = 32768) -> float:
    """Barrier integral Gamma_delta = integral_{-b}^{b} sqrt(max(V - (V_min +
    delta), 0)) dx with b the smallest positive root of V = V_min + delta.

    Composite Simpson quadrature on a mesh at least 4x finer than any working
    grid.  Note the integrand follows the bare convention without the
    sqrt(2m) kinetic factor; splitting fits report both normalizations.
    """
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if delta >= spec.barrier_height:
        raise DomainError("delta >= barrier height: the wells merge")
    level = spec.v_min + delta
    if spec.kind == "quartic":
        b = spec.a * math.sqrt(1.0 - math.sqrt(delta / spec.v0))
    else:
        b = _well_boundary(spec, level, spec.table_grid.half_width)
    if n_quad % 2:
        n_quad += 1
    xs = np.linspace(-b, b, n_quad + 1)
    integrand = np.sqrt(np.maximum(np.asarray(spec(xs), dtype=float) - level, 0.0))
    return float(simpson(integrand, x=xs))


def agmon_distance_quad_oracle(spec: PotentialSpec, delta: float = 0.0) -> float:
    """Independent adaptive-quadrature evaluation of the same integral
    (cross-check path; scipy.integrate.quad)."""
    if delta >= spec.barrier_height:
        raise DomainError("delta >= barrier height: the wells merge")
    level = spec.v_min + delta
    if spec.kind == "quartic":
        b = spec.a * math.sqrt(1.0 - math.sqrt(delta / spec.v0))
        x_max = spec.a
    else:
        x_max = spec.table_grid.half_width
        b = _well_boundary(spec, level, x_max)
    val, _ = quad(
        lambda x: math.sqrt(max(float(spec(x)) - level, 0.0)), -b, b, limit=400
    )
    return float(val)


# ---------------------------------------------------------------------------
# splitting scan and Lp report


@dataclasses.dataclass(frozen=True)
class SplittingPoint:
    hbar: float
    converged: bool
    lam1: float = math.nan
    lam2: float = math.nan
    omega: float = math.nan
    Omega: float = math.nan
    gap3: float = math.nan
    c: float = math.nan
    overlap_sup: float = math.nan
    error: str = ""


@dataclasses.dataclass(frozen=True, eq=False)
class SplittingFit:
    """Table of (hbar, omega) plus the least-squares fit of log omega against
    1/hbar.  agmon_gamma0 is the bare barrier integral; the kinetic-normalized
    exponent sqrt(2m)*Gamma0 is the WKB prediction for |slope|."""

    points: tuple[SplittingPoint, ...]
    slope: float
    intercept: float
    r_squared: float
    agmon_gamma0: float
    kinetic_exponent: float

    @property
    def slope_negative(self) -> bool:
        return self.slope < 0

    @property
    def slope_ratio_kinetic(self) -> float:
        return -self.slope / self.kinetic_exponent


def default_grid_for(spec: PotentialSpec, n_points: int = 2048) -> Grid1D:
    """Default truncation: three well-distances of decay room on each side."""
    if spec.kind == "quartic":
        return Grid1D(3.0 * spec.a, n_points)
    return Grid1D(spec.table_grid.half_width, spec.table_grid.n_points)


def splitting_scan(
    spec: PotentialSpec,
    m: float,
    hbars,
    *,
    grid: Grid1D | None = None,
    k_extra: int = 1,
) -> SplittingFit:
    """Doublet splitting across a decreasing hbar scan, with the exponential
    fit log omega ~ slope / hbar + intercept.  Non-converged points are
    flagged and excluded from the fit, never dropped silently."""
    hbars = [float(h) for h in hbars]
    if len(hbars) < 4:
        raise UsageError("splitting_scan needs at least 4 hbar values")
    if any(b >= a for a, b in zip(hbars, hbars[1:])):
        raise UsageError("hbar values must be strictly decreasing")
    if grid is None:
        grid = default_grid_for(spec)
    validate_potential(spec, grid).raise_for_failure()

    def solve_point(hbar):
        try:
            H = assemble_hamiltonian(grid, spec, hbar, m, skip_validation=True)
            basis = lowest_doublet(H, k_extra=k_extra)
            return SplittingPoint(
                hbar=hbar,
                converged=True,
                lam1=basis.lam1,
                lam2=basis.lam2,
                omega=basis.omega,
                Omega=basis.Omega,
                gap3=basis.gap3,
                c=basis.c,
                overlap_sup=overlap_sup(basis),
            )
        except (SolverError, ModelError) as exc:
            return SplittingPoint(hbar=hbar, converged=False, error=str(exc))

    points = tuple(ordered_parallel_map(solve_point, hbars))
    good = [p for p in points if p.converged]
    if len(good) >= 2:
        x = np.array([1.0 / p.hbar for p in good])
        y = np.log(np.array([p.omega for p in good]))
        design = np.vstack([x, np.ones_like(x)]).T
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        slope, intercept = float(coef[0]), float(coef[1])
        resid = y - design @ coef
        ss_tot = float(np.sum((y - y.mean()) ** 2))
        r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else math.nan
    else:
        slope = intercept = r2 = math.nan
    gamma0 = agmon_distance(spec, 0.0)
    return SplittingFit(
        points=points,
        slope=slope,
        intercept=intercept,
        r_squared=r2,
        agmon_gamma0=gamma0,
        kinetic_exponent=math.sqrt(2.0 * m) * gamma0,
    )


@dataclasses.dataclass(frozen=True)
class LpRow:
    p: float
    scaled_phi1: float
    scaled_phi2: float


@dataclasses.dataclass(frozen=True, eq=False)
class LpReport:
    hbar: float
    rows: tuple[LpRow, ...]

    def row(self, p: float) -> LpRow:
        for r in self.rows:
            if r.p == p or (math.isinf(r.p) and math.isinf(p)):
                return r
        raise KeyError(p)


def eigenstate_lp_report(basis: DoubletBasis, hbar: float) -> LpReport:
    """||phi_j||_p * hbar^((p-2)/(4p)) for p in {2, 4, inf}: the semiclassical
    scaling that should stay bounded as hbar decreases."""
    rows = []
    for p in (2.0, 4.0, math.inf):
        expo = 0.25 if math.isinf(p) else (p - 2.0) / (4.0 * p)
        s = hbar**expo
        rows.append(
            LpRow(p, s * lp_norm(basis.phi1, p), s * lp_norm(basis.phi2, p))
        )
    return LpReport(hbar=hbar, rows=tuple(rows))
