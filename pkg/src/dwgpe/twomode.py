"""The two-mode (bosonic Josephson) reduction of the double-well condensate.

In slow time tau the mode amplitudes obey

    b_R' = i b_L - i eta |b_R|^2 b_R,      b_L' = i b_R - i eta |b_L|^2 b_L,

with eta = epsilon c / omega the dimensionless nonlinearity.  The population
imbalance z = |b_R|^2 - |b_L|^2 has a closed form in Jacobi elliptic
functions whose modulus k decides the dynamical regime: beating (k^2 < 1,
z keeps changing sign), self-trapping (k^2 > 1, z keeps its sign), and the
separatrix k^2 = 1 in between, where no closed form is available and the ODE
integrator must be used.
"""

from __future__ import annotations

import cmath
import dataclasses
import enum
import math

import numpy as np

from .elliptic import complete_K, jacobi
from .errors import ConsistencyError, DomainError, SeparatrixError, UsageError

_REGIME_TOL = 1e-9
_ETA_ZERO = 1e-8


class Regime(enum.Enum):
    BEATING = "Beating"
    SELF_TRAPPED = "SelfTrapped"
    SEPARATRIX = "Separatrix"


@dataclasses.dataclass(frozen=True)
class TwoModeState:
    """Normalized pair of complex mode amplitudes (right, left)."""

    b_r: complex
    b_l: complex

    def __post_init__(self):
        n = abs(self.b_r) ** 2 + abs(self.b_l) ** 2
        if not math.isfinite(n):
            raise DomainError("amplitudes must be finite")
        if abs(n - 1.0) > 1e-10:
            raise DomainError(f"state not normalized: |b_R|^2+|b_L|^2 = {n!r}")

    @property
    def z(self) -> float:
        return abs(self.b_r) ** 2 - abs(self.b_l) ** 2

    @property
    def relative_phase(self) -> float:
        """arg b_R - arg b_L, or 0 when either amplitude vanishes."""
        if abs(self.b_r) < 1e-15 or abs(self.b_l) < 1e-15:
            return 0.0
        return cmath.phase(self.b_r) - cmath.phase(self.b_l)


@dataclasses.dataclass(frozen=True)
class TwoModeParams:
    """Closed-form solution data for the imbalance z(tau).

    motion_invariant is I = sqrt(1-z0^2) cos(theta0) - eta z0^2 / 4, conserved
    along the flow.  amplitude (A) and k2 (the squared elliptic modulus) fix
    the orbit; tau0 fixes its time offset (None on the separatrix, where the
    closed form does not apply).  rate is the elliptic argument rate d(arg)/
    d(tau); well_sign is the sign of z on a self-trapped orbit.
    """

    eta: float
    z0: float
    theta0: float
    motion_invariant: float
    amplitude: float
    k2: float
    tau0: float | None
    rate: float
    well_sign: float
    regime: Regime


def _k2_raw(z0, theta0, eta):
    """Squared modulus from the conserved data, in cancellation-safe form."""
    q = math.sqrt(max(1.0 - z0 * z0, 0.0))
    inv = q * math.cos(theta0) - eta * z0 * z0 / 4.0
    s = math.hypot(q * eta / 2.0 + math.cos(theta0), math.sin(theta0))
    p = 1.0 + inv * eta / 2.0
    if s < 1e-12:
        raise ConsistencyError("degenerate initial data: vanishing energy radical")
    if p > 0.0:
        num = (eta * eta / 4.0) * (1.0 - inv) * (1.0 + inv)
        d = num / (s + p)
    else:
        d = s - p
    return d / (2.0 * s), d, s, inv


def classify_k2(k2: float) -> Regime:
    if k2 < 1.0 - _REGIME_TOL:
        return Regime.BEATING
    if k2 > 1.0 + _REGIME_TOL:
        return Regime.SELF_TRAPPED
    return Regime.SEPARATRIX


def _invert_decreasing(fn, target, lo, hi):
    """u in [lo, hi] with fn(u) = target for strictly decreasing fn."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if fn(mid) >= target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def two_mode_params(state0: TwoModeState, eta: float) -> TwoModeParams:
    """Orbit parameters (I, A, k^2, tau0) from a normalized initial state.

    tau0 is fixed numerically: the even elliptic profile is inverted for the
    argument that reproduces z(0), and the branch sign is chosen so that
    dz/dtau at 0 matches the ODE right-hand side 2 sqrt(1-z0^2) sin(theta0).
    """
    z0 = state0.z
    theta0 = state0.relative_phase
    k2, d, s, inv = _k2_raw(z0, theta0, eta)
    if k2 < -1e-12:
        raise ConsistencyError(f"negative squared modulus k2 = {k2:g}")
    k2 = max(k2, 0.0)

    if abs(eta) >= _ETA_ZERO:
        a2 = 8.0 * d / (eta * eta)
    else:
        a2 = (1.0 - inv) * (1.0 + inv)
    if a2 < -1e-12:
        raise ConsistencyError(f"negative amplitude radicand A^2 = {a2:g}")
    amp = math.sqrt(max(a2, 0.0))
    regime = classify_k2(k2)

    q = math.sqrt(max(1.0 - z0 * z0, 0.0))
    slope_sign = _sign(2.0 * q * math.sin(theta0))

    tau0: float | None
    rate = 2.0 * math.sqrt(s)
    well_sign = 1.0
    if regime is Regime.SEPARATRIX:
        tau0 = None
    elif amp < 1e-12:
        tau0 = 0.0  # stationary orbit, z == 0
    elif abs(eta) < _ETA_ZERO:
        # linear beating limit: z = A cos(2 (tau - tau0))
        rate = 2.0
        u0 = math.acos(_clip_unit(z0 / amp))
        if slope_sign < 0:
            u0 = -u0
        tau0 = u0 / rate
    elif regime is Regime.BEATING:
        k = math.sqrt(k2)
        rate = math.copysign(2.0 * math.sqrt(s), eta)  # = A*eta/(2k)
        w = _invert_decreasing(
            lambda u: jacobi(u, k).cn, _clip_unit(z0 / amp), 0.0, 2.0 * complete_K(k)
        )
        u0 = w if slope_sign * _sign(rate) >= 0 else -w
        tau0 = u0 / rate
    else:
        k = math.sqrt(k2)
        m_mod = 1.0 / k
        well_sign = 1.0 if z0 >= 0 else -1.0
        rate = amp * eta / 2.0
        kp = math.sqrt(max(1.0 - m_mod * m_mod, 0.0))
        target = min(max(abs(z0) / amp, kp), 1.0)
        w = _invert_decreasing(
            lambda u: jacobi(u, m_mod).dn, target, 0.0, complete_K(m_mod)
        )
        u0 = w if slope_sign * well_sign * _sign(rate) >= 0 else -w
        tau0 = u0 / rate

    params = TwoModeParams(
        eta=eta,
        z0=z0,
        theta0=theta0,
        motion_invariant=inv,
        amplitude=amp,
        k2=k2,
        tau0=tau0,
        rate=rate,
        well_sign=well_sign,
        regime=regime,
    )
    _check_params(params)
    return params


def _sign(x: float) -> float:
    return 0.0 if x == 0 else math.copysign(1.0, x)


def _clip_unit(x: float) -> float:
    return 1.0 if x > 1.0 else (-1.0 if x < -1.0 else x)


def _check_params(p: TwoModeParams):
    q = math.sqrt(max(1.0 - p.z0 * p.z0, 0.0))
    inv = q * math.cos(p.theta0) - p.eta * p.z0 * p.z0 / 4.0
    if abs(inv - p.motion_invariant) > 1e-14 * max(1.0, abs(inv)):
        raise ConsistencyError("motion invariant failed reconstruction")
    # the displayed modulus formula, evaluated directly
    s2 = p.eta * p.eta / 4.0 + 1.0 + inv * p.eta
    if s2 > 1e-20:
        k2_display = 0.5 * (1.0 - (1.0 + 0.5 * inv * p.eta) / math.sqrt(s2))
        if abs(k2_display - p.k2) > 1e-13 * max(1.0, abs(p.k2)):
            raise ConsistencyError("modulus disagrees with its display formula")
    if p.regime is Regime.BEATING and p.amplitude > 1e-12:
        if not (abs(p.z0) * (1 - 1e-12) <= p.amplitude <= 1.0 + 1e-12):
            raise ConsistencyError(
                f"amplitude {p.amplitude!r} outside [|z0|, 1] in the beating regime"
            )


def imbalance_analytic(tau: float, params: TwoModeParams) -> float:
    """Closed-form z(tau): A cn(rate (tau - tau0), k) while beating,
    sign * A dn(rate (tau - tau0), 1/k) while self-trapped."""
    p = params
    if p.regime is Regime.SEPARATRIX:
        raise SeparatrixError(
            "no closed form on the separatrix (k^2 = 1); integrate_two_mode "
            "is the supported path there"
        )
    if p.amplitude < 1e-12:
        return 0.0
    u = p.rate * (tau - p.tau0)
    if abs(p.eta) < _ETA_ZERO:
        return p.amplitude * math.cos(u)
    if p.regime is Regime.BEATING:
        return p.amplitude * jacobi(u, math.sqrt(p.k2)).cn
    return p.well_sign * p.amplitude * jacobi(u, 1.0 / math.sqrt(p.k2)).dn


@dataclasses.dataclass(frozen=True, eq=False)
class TwoModeTrajectory:
    tau: np.ndarray
    b_r: np.ndarray
    b_l: np.ndarray

    @property
    def z(self) -> np.ndarray:
        return np.abs(self.b_r) ** 2 - np.abs(self.b_l) ** 2

    @property
    def norm_defect(self) -> np.ndarray:
        return np.abs(np.abs(self.b_r) ** 2 + np.abs(self.b_l) ** 2 - 1.0)


def _rhs(b_r, b_l, eta):
    return (
        1j * b_l - 1j * eta * (b_r.real**2 + b_r.imag**2) * b_r,
        1j * b_r - 1j * eta * (b_l.real**2 + b_l.imag**2) * b_l,
    )


def integrate_two_mode(
    state0: TwoModeState, eta: float, tau_end: float, dtau: float
) -> TwoModeTrajectory:
    """Classical fixed-step RK4 on the slow-time system, sampled every step.

    No renormalization is applied: norm conservation is a test observable,
    and re-imposing it would mask integrator defects.
    """
    if not tau_end > 0:
        raise UsageError("tau_end must be positive")
    if not 0 < dtau <= 0.01 / max(1.0, abs(eta)):
        raise UsageError("dtau must satisfy 0 < dtau <= 0.01/max(1, |eta|)")
    nsteps = int(math.ceil(tau_end / dtau - 1e-9))
    taus = dtau * np.arange(nsteps + 1)
    br = np.empty(nsteps + 1, dtype=complex)
    bl = np.empty(nsteps + 1, dtype=complex)
    yr, yl = complex(state0.b_r), complex(state0.b_l)
    br[0], bl[0] = yr, yl
    h = dtau
    for i in range(1, nsteps + 1):
        k1r, k1l = _rhs(yr, yl, eta)
        k2r, k2l = _rhs(yr + 0.5 * h * k1r, yl + 0.5 * h * k1l, eta)
        k3r, k3l = _rhs(yr + 0.5 * h * k2r, yl + 0.5 * h * k2l, eta)
        k4r, k4l = _rhs(yr + h * k3r, yl + h * k3l, eta)
        yr = yr + (h / 6.0) * (k1r + 2 * k2r + 2 * k3r + k4r)
        yl = yl + (h / 6.0) * (k1l + 2 * k2l + 2 * k3l + k4l)
        br[i], bl[i] = yr, yl
    return TwoModeTrajectory(tau=taus, b_r=br, b_l=bl)


@dataclasses.dataclass(frozen=True)
class MotionReport:
    regime: Regime
    k2: float
    amplitude: float
    tau_period: float | None  # full oscillation period of z (beating only)


def classify_motion(params: TwoModeParams) -> MotionReport:
    """Regime per the k^2 thresholds, with the beating period of z in tau
    (within one such period z attains both signs)."""
    period = None
    if params.regime is Regime.BEATING and params.amplitude >= 1e-12:
        if abs(params.eta) < _ETA_ZERO:
            period = math.pi
        else:
            period = 4.0 * complete_K(math.sqrt(params.k2)) / abs(params.rate)
    return MotionReport(
        regime=params.regime,
        k2=params.k2,
        amplitude=params.amplitude,
        tau_period=period,
    )


def k2_of_eta(z0: float, theta0: float, eta) -> np.ndarray:
    """Vectorized squared modulus as a function of eta (for sweeps/rootfinding)."""
    eta = np.asarray(eta, dtype=float)
    q = math.sqrt(max(1.0 - z0 * z0, 0.0))
    inv = q * math.cos(theta0) - eta * z0 * z0 / 4.0
    s = np.hypot(q * eta / 2.0 + math.cos(theta0), math.sin(theta0))
    p = 1.0 + inv * eta / 2.0
    num = (eta * eta / 4.0) * (1.0 - inv) * (1.0 + inv)
    with np.errstate(divide="ignore", invalid="ignore"):
        d = np.where(p > 0.0, num / (s + p), s - p)
        return d / (2.0 * s)


def critical_eta(
    z0: float, theta0: float = 0.0, *, eta_max: float = 1e3, scan_step: float = 1e-2
) -> float | None:
    """Smallest eta > 0 with k^2(eta; z0, theta0) = 1, by a scan for the first
    sign change of k^2 - 1 followed by bisection; None if k^2 stays below 1
    on (0, eta_max]."""
    if not -1.0 <= z0 <= 1.0:
        raise DomainError("z0 must lie in [-1, 1]")
    etas = np.arange(scan_step, eta_max + scan_step, scan_step)
    g = k2_of_eta(z0, theta0, etas) - 1.0
    above = np.nonzero(g >= 0.0)[0]
    if len(above) == 0:
        return None
    i = int(above[0])
    lo = etas[i - 1] if i > 0 else min(scan_step * 1e-6, etas[0] / 2)
    hi = etas[i]

    def f(eta):
        return float(k2_of_eta(z0, theta0, eta)) - 1.0

    if f(lo) >= 0.0:
        return float(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-13 * max(1.0, hi):
            break
    return float(hi)
