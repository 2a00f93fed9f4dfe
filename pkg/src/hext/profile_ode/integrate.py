"""Numerical side of the boundary value problem: integration and shooting.

The substitution v = (2*gamma + phi)^2 / 2 turns the profile equation into

    v' = 2*sqrt(2)*sqrt(v) + q(gamma),    v(1) = 2,

which removes the boundary degeneracy at gamma = 1 (phi vanishes there, v
does not).  A solution closing up smoothly at gamma = m+1 has
v(m+1) = 2*(m+1)^2; the shooting defect is v(m+1) - 2*(m+1)^2 and the free
parameter is C.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..errors import (
    CertificateFailure,
    EndpointSingularity,
    NoBracket,
    PositivityLost,
    StepFailure,
)
from .coeffs import (
    CoeffSet,
    KahlerClassIndex,
    Rational,
    admissible_C_max,
    coeffs_from_C,
    compute_LN,
    hcsck_coeffs,
)

TWO_SQRT2 = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive-step configuration for the v-integration.

    max_step defaults to m/1024 when left unset.  v_floor is the positivity
    floor below which the run is aborted with PositivityLost; admissible C
    (L*C + N >= -2 + eps_floor) keeps v well above it.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: Optional[float] = None
    v_floor: float = 1e-9
    eps_floor: float = 0.01
    method: str = "DOP853"
    max_step_divisor: int = 1024

    def resolved_max_step(self, m: int) -> float:
        return self.max_step if self.max_step is not None else m / self.max_step_divisor

    def halved(self) -> "IntegratorConfig":
        return IntegratorConfig(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_step=None if self.max_step is None else self.max_step / 2.0,
            v_floor=self.v_floor,
            eps_floor=self.eps_floor,
            method=self.method,
            max_step_divisor=self.max_step_divisor * 2,
        )


DEFAULT_CONFIG = IntegratorConfig()

# coarser settings are enough to read off defect signs during a scan
SCAN_CONFIG = IntegratorConfig(rel_tol=1e-8, abs_tol=1e-10, max_step_divisor=64)


class Trajectory:
    """A sampled solution v(gamma) of the reduced problem.

    The grid spans [1, m+1] strictly increasingly, v(1) = 2 exactly, and
    v > 0 at every grid point (anything else is an error, not a Trajectory).
    phi and v are related pointwise by v = (2*gamma + phi)^2 / 2.
    """

    def __init__(self, grid: np.ndarray, v: np.ndarray, meta: CoeffSet):
        grid = np.asarray(grid, dtype=float)
        v = np.asarray(v, dtype=float)
        if grid.ndim != 1 or grid.shape != v.shape or grid.size < 2:
            raise ValueError("grid and v must be matching 1-d arrays")
        if grid[0] != 1.0 or abs(grid[-1] - (meta.m + 1)) > 1e-12:
            raise ValueError("grid must span [1, m+1]")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if v[0] != 2.0:
            raise ValueError("initial value v(1) must be exactly 2")
        if np.any(v <= 0):
            raise ValueError("v must stay positive on a Trajectory")
        self.grid = grid
        self.v = v
        self.meta = meta

    @property
    def m(self) -> int:
        return self.meta.m

    @property
    def phi(self) -> np.ndarray:
        return np.sqrt(2.0 * self.v) - 2.0 * self.grid

    def q_values(self) -> np.ndarray:
        a, b, c = self.meta.float_abc()
        g = self.grid
        return ((a / 3.0 * g + b / 2.0) * g * g + c) * g

    @property
    def phi_prime(self) -> np.ndarray:
        # 2*gamma + phi = sqrt(2 v) > 0 everywhere on a valid trajectory
        return self.q_values() / np.sqrt(2.0 * self.v)

    @property
    def lambda_values(self) -> np.ndarray:
        a, b, _ = self.meta.float_abc()
        return a * self.grid + b

    @property
    def defect(self) -> float:
        return float(self.v[-1] - 2.0 * (self.m + 1) ** 2)

    def interior_positive(self) -> bool:
        """phi > 0 at all interior grid points, equivalently v > 2*gamma^2."""
        g = self.grid[1:-1]
        return bool(np.all(self.v[1:-1] > 2.0 * g * g))

    def to_csv(self) -> str:
        """CSV with header gamma,v,phi,phi_prime,lambda; 17 significant digits."""
        cols = (self.grid, self.v, self.phi, self.phi_prime, self.lambda_values)
        lines = ["gamma,v,phi,phi_prime,lambda"]
        for row in zip(*cols):
            lines.append(",".join(f"{x:.17g}" for x in row))
        return "\n".join(lines) + "\n"


def integrate_v(
    m: int, C: Rational, config: Optional[IntegratorConfig] = None
) -> Trajectory:
    """Integrate v' = 2*sqrt(2)*sqrt(v) + q(gamma) from v(1) = 2 to gamma = m+1.

    Raises PositivityLost if v reaches the configured floor (the signature of
    an inadmissible C) and StepFailure if the solver gives up.
    """
    cfg = config or DEFAULT_CONFIG
    KahlerClassIndex(m)
    cs = coeffs_from_C(m, C)
    a, b, c = cs.float_abc()
    c_float = float(cs.C)

    def rhs(t, y):
        v = y[0]
        root = math.sqrt(v) if v > 0.0 else 0.0
        return (TWO_SQRT2 * root + ((a / 3.0 * t + b / 2.0) * t * t + c) * t,)

    def floor_event(t, y):
        return y[0] - cfg.v_floor

    floor_event.terminal = True
    floor_event.direction = -1.0

    sol = solve_ivp(
        rhs,
        (1.0, float(m + 1)),
        [2.0],
        method=cfg.method,
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=cfg.resolved_max_step(m),
        events=[floor_event],
        dense_output=False,
    )
    if sol.status < 0:
        raise StepFailure(f"integration failed: {sol.message}")
    if sol.status == 1:
        gamma_stop = float(sol.t_events[0][0]) if len(sol.t_events[0]) else float(sol.t[-1])
        raise PositivityLost(gamma=gamma_stop, c=c_float, floor=cfg.v_floor)
    grid = sol.t.copy()
    v = sol.y[0].copy()
    grid[0], v[0] = 1.0, 2.0  # pin the exact initial point against fp drift
    return Trajectory(grid=grid, v=v, meta=cs)


def residual_check(t: Trajectory) -> float:
    """Max interior residual of the second-order form

        gamma*(phi + 2*gamma)*phi'' + phi'*(phi'*gamma - phi) - (A*gamma+B)*gamma^3

    with phi'' in closed form from differentiating the first-order equation:
    phi'' = (q'(gamma) - (2 + phi')*phi') / (2*gamma + phi).
    """
    a, b, c = t.meta.float_abc()
    g = t.grid[1:-1]
    phi = t.phi[1:-1]
    dphi = t.phi_prime[1:-1]
    qp = (4.0 * a / 3.0 * g + 1.5 * b) * g * g + c
    phi2 = (qp - (2.0 + dphi) * dphi) / (2.0 * g + phi)
    res = g * (phi + 2.0 * g) * phi2 + dphi * (dphi * g - phi) - (a * g + b) * g ** 3
    return float(np.max(np.abs(res)))


@dataclass(frozen=True)
class ScanPoint:
    c: float
    defect: Optional[float]
    error: Optional[str] = None


@dataclass(frozen=True)
class ScanResult:
    m: int
    points: Tuple[ScanPoint, ...]

    @property
    def brackets(self) -> List[Tuple[float, float]]:
        """Adjacent C pairs whose defects change sign."""
        out = []
        for lo, hi in zip(self.points, self.points[1:]):
            if lo.defect is None or hi.defect is None:
                continue
            if lo.defect == 0.0 or lo.defect * hi.defect < 0.0:
                out.append((lo.c, hi.c))
        return out


def defect_scan(
    m: int,
    C_lo: float,
    C_hi: float,
    steps: int,
    config: Optional[IntegratorConfig] = None,
) -> ScanResult:
    """Defect over a monotone C grid.  Integrator errors are recorded per
    point, not raised.  Requires C_hi inside the admissible window."""
    cfg = config or SCAN_CONFIG
    if steps < 2:
        raise ValueError("need at least two scan points")
    c_max = float(admissible_C_max(m, Fraction(int(round(cfg.eps_floor * 10000)), 10000)))
    if C_hi > c_max + 1e-9:
        raise ValueError(f"C_hi={C_hi:g} exceeds admissible maximum {c_max:.12g}")
    if not C_lo < C_hi:
        raise ValueError("need C_lo < C_hi")
    points = []
    for c in np.linspace(C_lo, C_hi, steps):
        c = float(c)
        try:
            traj = integrate_v(m, c, cfg)
            points.append(ScanPoint(c=c, defect=traj.defect))
        except (PositivityLost, StepFailure) as exc:
            points.append(ScanPoint(c=c, defect=None, error=str(exc)))
    return ScanResult(m=m, points=tuple(points))


def _extend_scan_upward(m: int, scan: ScanResult, max_steps: int = 256) -> ScanResult:
    """Continue a bracketless scan past its top edge in steps of 1/64."""
    points = list(scan.points)
    last = points[-1]
    if last.defect is None or last.defect <= 0.0:
        return scan
    delta = 2.0 ** -6
    prev_d = last.defect
    for k in range(1, max_steps + 1):
        c = last.c + k * delta
        try:
            d = integrate_v(m, c, SCAN_CONFIG).defect
        except (PositivityLost, StepFailure) as exc:
            points.append(ScanPoint(c=c, defect=None, error=str(exc)))
            break
        points.append(ScanPoint(c=c, defect=d))
        if d == 0.0 or d * prev_d < 0.0:
            break
        prev_d = d
    return ScanResult(m=m, points=tuple(points))


@dataclass
class ShootResult:
    m: int
    c_star: float
    trajectory: Trajectory
    defect: float
    a_slope: float
    not_hcsck: bool
    phi_prime_end: float
    bracket: Tuple[float, float]
    iterations: int
    scan: ScanResult


def shoot(
    m: int,
    config: Optional[IntegratorConfig] = None,
    defect_tol: float = 1e-8,
    c_tol: float = 1e-10,
    max_iter: int = 60,
    scan_steps: int = 64,
    c_min: float = -50.0,
    c_max: Optional[float] = None,
) -> ShootResult:
    """Bisect the defect to the C with v(m+1) = 2*(m+1)^2.

    The bracket is discovered by scanning C upward from c_min to the
    admissible maximum; at very negative C the defect is provably positive,
    so the scan only has to find the negative side.  Raises NoBracket (with
    the scan attached) when no sign change exists in the window, which for
    large m is a legitimate outcome rather than a failure of the method.
    """
    cfg = config or DEFAULT_CONFIG
    c_adm = float(admissible_C_max(m, Fraction(1, 100)))
    c_hi = c_adm if c_max is None else min(c_adm, c_max)
    scan = defect_scan(m, c_min, c_hi, scan_steps)
    if not scan.brackets and c_max is None:
        # The eps-floor window is a sufficient condition for positivity, not
        # a necessary one; when the defect is still positive at the window
        # edge the root lies beyond it (that is the delicate regime for
        # m >= 3).  Probe upward in fine steps until the sign flips or the
        # positivity floor genuinely trips.
        scan = _extend_scan_upward(m, scan)
    if not scan.brackets:
        raise NoBracket(
            f"no defect sign change for m={m} in C range [{c_min:g}, {c_hi:.6g}]",
            scan=scan,
        )
    lo, hi = scan.brackets[0]

    def defect_at(c: float) -> Tuple[float, Trajectory]:
        traj = integrate_v(m, c, cfg)
        return traj.defect, traj

    d_lo, traj_lo = defect_at(lo)
    d_hi, traj_hi = defect_at(hi)
    if d_lo == 0.0:
        return _finish_shoot(m, lo, traj_lo, (lo, hi), 0, scan)
    if d_hi == 0.0 or d_lo * d_hi > 0.0:
        # scan used coarser tolerances; re-bracket defensively
        if d_lo * d_hi > 0.0:
            raise NoBracket(
                f"bracket ({lo:g}, {hi:g}) lost its sign change at full accuracy",
                scan=scan,
            )
        return _finish_shoot(m, hi, traj_hi, (lo, hi), 0, scan)

    best_c, best_traj, best_d = (lo, traj_lo, d_lo) if abs(d_lo) < abs(d_hi) else (hi, traj_hi, d_hi)
    iterations = 0
    while iterations < max_iter:
        iterations += 1
        mid = 0.5 * (lo + hi)
        d_mid, traj_mid = defect_at(mid)
        if abs(d_mid) < abs(best_d):
            best_c, best_traj, best_d = mid, traj_mid, d_mid
        if abs(d_mid) < defect_tol:
            break
        if d_mid == 0.0:
            break
        if d_mid * d_lo < 0.0:
            hi, d_hi = mid, d_mid
        else:
            lo, d_lo = mid, d_mid
        if hi - lo < c_tol:
            break
    if abs(best_d) >= defect_tol and hi - lo >= c_tol:
        raise StepFailure(
            f"bisection did not converge in {max_iter} iterations (|defect|={abs(best_d):g})"
        )
    return _finish_shoot(m, best_c, best_traj, scan.brackets[0], iterations, scan)


def _finish_shoot(
    m: int,
    c_star: float,
    traj: Trajectory,
    bracket: Tuple[float, float],
    iterations: int,
    scan: ScanResult,
) -> ShootResult:
    if not traj.interior_positive():
        raise StepFailure("shooting solution lost interior positivity (phi <= 0)")
    a_slope = float(traj.meta.A)
    return ShootResult(
        m=m,
        c_star=c_star,
        trajectory=traj,
        defect=traj.defect,
        a_slope=a_slope,
        not_hcsck=abs(a_slope) > 1e-3,
        phi_prime_end=float(traj.phi_prime[-1]),
        bracket=bracket,
        iterations=iterations,
        scan=scan,
    )


@dataclass
class NonexistenceReport:
    """Outcome of the constant-lambda (A = 0) run for one m.

    `alt_*` echo an alternative constant set sometimes quoted for the A = 0
    case; it fails p(1) = 2 (see alt_satisfies_boundary) and is reported
    verbatim for comparison, never adopted.  The derived constants give an
    exact zero integral and the strict excess margin below.
    """

    m: int
    coeffs: CoeffSet
    integral: Fraction
    margin: float
    target: float
    trajectory: Trajectory
    alt_B: Fraction
    alt_C: Fraction
    alt_integral: Fraction
    alt_satisfies_boundary: bool


def hcsck_nonexistence(
    m: int, config: Optional[IntegratorConfig] = None
) -> NonexistenceReport:
    """Run the A = 0 initial value problem and report the endpoint excess.

    A constant-lambda solution that closes up would need v(m+1) = 2*(m+1)^2,
    but the integrated v overshoots strictly; the positive margin is the
    numerical face of that contradiction.
    """
    cs = hcsck_coeffs(m)
    ln = compute_LN(m)
    integral = ln.lc_plus_n(cs.C)
    traj = integrate_v(m, cs.C, config)
    target = 2.0 * (m + 1) ** 2
    margin = traj.v[-1] - target

    s1 = Fraction((m + 1) ** 2 - 1)
    alt_B = -12 / s1
    alt_C = 4 + 8 / s1
    alt_boundary_ok = (alt_B / 2 + alt_C) == 2

    if not margin > 0.0:
        raise CertificateFailure("hcsck_margin", None)
    return NonexistenceReport(
        m=m,
        coeffs=cs,
        integral=integral,
        margin=float(margin),
        target=target,
        trajectory=traj,
        alt_B=alt_B,
        alt_C=alt_C,
        alt_integral=Fraction(2),
        alt_satisfies_boundary=alt_boundary_ok,
    )


class ProfileCurve:
    """The profile curve in the arc coordinate s with ds/dgamma = 1/phi.

    s is anchored to zero at gamma_mid = 1 + m/2.  The quadrature excludes a
    margin at each endpoint where 1/phi has a logarithmic singularity (phi
    vanishes linearly there); that divergence is the cylindrical geometry of
    the ends, not an error.
    """

    def __init__(self, m: int, gamma: np.ndarray, s: np.ndarray, phi: np.ndarray, margin: float):
        self.m = m
        self.gamma = gamma
        self.s = s
        self.phi = phi
        self.margin = margin

    @property
    def tau(self) -> np.ndarray:
        return self.gamma - 1.0

    @property
    def f_prime(self) -> np.ndarray:
        # the Legendre variable itself: f'(s) = tau
        return self.tau

    @property
    def ds_dgamma(self) -> np.ndarray:
        return 1.0 / self.phi

    def s_at(self, gamma: float) -> float:
        if gamma == 1.0 or gamma == float(self.m + 1):
            raise EndpointSingularity(
                f"s diverges logarithmically at gamma={gamma:g}"
            )
        if gamma < self.gamma[0] or gamma > self.gamma[-1]:
            raise ValueError(
                f"gamma={gamma:g} outside the covered range "
                f"[{self.gamma[0]:.6g}, {self.gamma[-1]:.6g}]"
            )
        return float(np.interp(gamma, self.gamma, self.s))

    def to_csv(self) -> str:
        lines = ["gamma,tau,s,phi"]
        for row in zip(self.gamma, self.tau, self.s, self.phi):
            lines.append(",".join(f"{x:.17g}" for x in row))
        return "\n".join(lines) + "\n"


def reconstruct_curve(t: Trajectory, margin: float = 1e-3) -> ProfileCurve:
    """Composite-trapezoid quadrature of s(gamma) = int dgamma/phi on the
    interior grid, excluding `margin` at both endpoints."""
    if not t.interior_positive():
        raise ValueError("profile curve needs phi > 0 on the open interval")
    if margin <= 0:
        raise ValueError("endpoint margin must be positive")
    g = t.grid
    mask = (g >= 1.0 + margin) & (g <= (t.m + 1) - margin)
    if mask.sum() < 3:
        raise ValueError("margin leaves too few interior points")
    gamma = g[mask]
    phi = t.phi[mask]
    integrand = 1.0 / phi
    ds = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(gamma)
    s = np.concatenate(([0.0], np.cumsum(ds)))
    gamma_mid = 1.0 + t.m / 2.0
    s = s - np.interp(gamma_mid, gamma, s)
    return ProfileCurve(m=t.m, gamma=gamma, s=s, phi=phi, margin=margin)
