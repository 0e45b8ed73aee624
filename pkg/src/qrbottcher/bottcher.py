"""Böttcher-type coordinate for f = h^2 + c on a neighborhood of infinity.

The coordinate is built in logarithmic coordinates as the limit of

    F_k = (inverse half-step)^k  ∘  f_tilde^k,

where one inverse half-step is B(Y) = Y/2 + xi(Y/2).  On the half-plane
Re X > sigma the approximants converge super-geometrically: the k-th
correction is driven by rho evaluated at Re ~ 2^k * sigma.  The limit F
conjugates f_tilde to the c = 0 dynamics, and psi(z) = exp(F(log z))
conjugates f to H = h^2 near infinity:  H(psi(z)) = psi(f(z)).

Evaluation detail: F_k is computed in telescoped form.  Writing
F_k(X) = X + e_0, the correction satisfies the exact backward recursion

    e_k = 0,
    s_j   = (rho(V_j) + e_{j+1}) / 2,
    e_j   = s_j + [xi(V_j + s_j) - xi(V_j)],        V_j = X_j + phi(X_j),

over the forward orbit X_{j+1} = 2*V_j + rho(V_j).  This is algebraically
identical to unrolling the definition (each half-step halves the offset
from the c = 0 orbit, whose own fold cancels exactly), but it only ever
adds small quantities, so F_k(X) - X carries full relative precision and
the c = 0 case collapses to the identity with zero rounding error.
"""

import cmath
import math
from dataclasses import dataclass, field

from .errors import (
    DegenerateDerivativeError,
    HalfPlaneError,
    NoConvergenceError,
    OutsideDomainError,
)
from .logcoords import phi, rho, xi_increment
from .qamap import QAMap, escape_radius, eval_f, eval_H

PROBE_COUNT = 16


@dataclass(frozen=True)
class SolverConfig:
    """Domain and stopping parameters for the coordinate construction.

    sigma: the coordinate is built on {Re X > sigma}, i.e. |z| > exp(sigma).
        Must put the domain beyond the escape radius and keep the
        perturbation term well inside its half-plane of definition.
    tol: probe-grid sup-norm stopping tolerance for |F_{k+1} - F_k|.
    k_max: iteration budget before NoConvergence is raised.
    alpha: Hölder exponent (in (1, 2)) used in reporting the expected decay
        profile; it does not influence the computed values.
    """

    sigma: float
    tol: float = 1e-12
    k_max: int = 40
    alpha: float = 1.2

    def __post_init__(self):
        if not math.isfinite(self.sigma):
            raise ValueError(f"sigma must be finite, got {self.sigma!r}")
        if not (self.tol > 0.0):
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.k_max < 1:
            raise ValueError(f"k_max must be >= 1, got {self.k_max!r}")
        if not (1.0 < self.alpha < 2.0):
            raise ValueError(f"alpha must lie in (1, 2), got {self.alpha!r}")


def default_config(m: QAMap, tol: float = 1e-12, k_max: int = 40, alpha: float = 1.2) -> SolverConfig:
    """Config with sigma = max(log R + 1, log(2|c| + 1) + 1) for the map's R.

    The first term keeps the domain a unit log-margin beyond the escape
    radius; the second keeps |c * exp(-2 sigma)| <= |c|/(e^2 (2|c|+1)^2)
    < 0.04, safely inside the half-plane where rho is defined.
    """
    sigma = max(
        math.log(escape_radius(m)) + 1.0,
        math.log(2.0 * abs(m.c) + 1.0) + 1.0,
    )
    return SolverConfig(sigma=sigma, tol=tol, k_max=k_max, alpha=alpha)


def _validate_domain(m: QAMap, cfg: SolverConfig):
    if math.exp(cfg.sigma) < escape_radius(m):
        raise ValueError(
            f"sigma = {cfg.sigma:.6g} puts the domain inside the escape radius "
            f"{escape_radius(m):.6g}; increase sigma"
        )
    if abs(m.c) * math.exp(-2.0 * cfg.sigma) >= 0.5:
        raise ValueError(
            f"sigma = {cfg.sigma:.6g} leaves |c*exp(-2 sigma)| >= 1/2; increase sigma"
        )


def _correction(m: QAMap, X: complex, k: int) -> complex:
    """e_0 = F_k(X) - X by the telescoped backward recursion."""
    p = m.stretch
    Xj = complex(X)
    steps: list[tuple[complex, complex]] = []
    for _ in range(k):
        V = Xj + phi(p, Xj)
        r = rho(m.c, V)  # may raise HalfPlaneError: orbit left the domain
        steps.append((V, r))
        Xj = 2.0 * V + r
    e = 0j
    for V, r in reversed(steps):
        s = 0.5 * (r + e)
        e = s + xi_increment(p, V, s)
    return e


def F_k(m: QAMap, cfg: SolverConfig, X: complex, k: int) -> complex:
    """The k-th conjugacy approximant; F_0 is the identity."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k!r}")
    X = complex(X)
    if X.real < cfg.sigma - 1e-12:
        raise OutsideDomainError(
            f"F_k evaluated at Re X = {X.real:.6g} < sigma = {cfg.sigma:.6g}"
        )
    try:
        return X + _correction(m, X, k)
    except HalfPlaneError as exc:
        raise HalfPlaneError(
            f"forward orbit left the admissible half-plane at k <= {k} "
            f"(sigma = {cfg.sigma:.6g} too small): {exc}"
        ) from exc


@dataclass(frozen=True)
class BottcherCoordinate:
    """A converged coordinate: the map, its config, and the stopping index.

    probe_history[k] is the probe-grid sup of |F_{k+1} - F_k|; k_used is the
    first index where it dropped below cfg.tol.  validation_residual records
    the conjugacy defect max |H(psi(z)) - psi(f(z))| measured on a small
    circle of radius 2*exp(sigma) right after construction.
    """

    map: QAMap
    config: SolverConfig
    k_used: int
    probe_history: tuple[float, ...] = field(default=(), repr=False)
    validation_residual: float = math.nan


def probe_points(cfg: SolverConfig, count: int = PROBE_COUNT) -> list[complex]:
    """The probe grid: count points with Re X = sigma, Im X spanning [0, 2 pi)."""
    return [complex(cfg.sigma, 2.0 * math.pi * i / count) for i in range(count)]


def probe_differences(m: QAMap, cfg: SolverConfig, k_hi: int) -> list[float]:
    """sup over the probe grid of |F_{k+1} - F_k| for k = 0 .. k_hi - 1."""
    probes = probe_points(cfg)
    prev = [F_k(m, cfg, X, 0) for X in probes]
    diffs = []
    for k in range(1, k_hi + 1):
        cur = [F_k(m, cfg, X, k) for X in probes]
        diffs.append(max(abs(a - b) for a, b in zip(cur, prev)))
        prev = cur
    return diffs


def build_coordinate(m: QAMap, cfg: SolverConfig | None = None) -> BottcherCoordinate:
    """Iterate the approximants until the probe grid stabilizes.

    k_used is the smallest k with sup |F_{k+1} - F_k| < cfg.tol over the
    probe grid; NoConvergenceError (with the recorded sup-differences as
    diagnostics) is raised if the budget k_max is exhausted first.
    """
    if cfg is None:
        cfg = default_config(m)
    _validate_domain(m, cfg)
    probes = probe_points(cfg)
    history: list[float] = []
    prev = list(probes)  # F_0 = identity
    k_used = None
    for k in range(cfg.k_max):
        cur = [F_k(m, cfg, X, k + 1) for X in probes]
        d = max(abs(a - b) for a, b in zip(cur, prev))
        history.append(d)
        if d < cfg.tol:
            k_used = k
            break
        prev = cur
    if k_used is None:
        raise NoConvergenceError(
            f"probe grid did not stabilize below tol = {cfg.tol:.3g} within "
            f"k_max = {cfg.k_max} steps (last sup-difference {history[-1]:.3g})",
            diagnostics={"sup_differences": history, "sigma": cfg.sigma, "tol": cfg.tol},
        )
    coord = BottcherCoordinate(m, cfg, k_used, tuple(history))
    residual = max(
        conjugacy_residual(coord, 2.0 * math.exp(cfg.sigma) * cmath.exp(2j * math.pi * i / 8))
        for i in range(8)
    )
    return BottcherCoordinate(m, cfg, k_used, tuple(history), residual)


def log_coordinate(b: BottcherCoordinate, X: complex) -> complex:
    """F(X) at the converged index: the coordinate in the log plane."""
    return F_k(b.map, b.config, X, b.k_used)


def psi(b: BottcherCoordinate, z: complex) -> complex:
    """The Böttcher-type coordinate psi(z) = exp(F(log z)) for |z| > exp(sigma).

    psi is a near-identity adjustment (psi(z)/z -> 1 as z -> infinity) that
    conjugates f to H:  H(psi(z)) = psi(f(z)).  It commutes with the
    symmetry z -> -z of the family.  For c = 0 it is the identity.
    """
    z = complex(z)
    if not abs(z) > math.exp(b.config.sigma):
        raise OutsideDomainError(
            f"psi defined for |z| > exp(sigma) = {math.exp(b.config.sigma):.6g}, "
            f"got |z| = {abs(z):.6g}"
        )
    e = _correction(b.map, cmath.log(z), b.k_used)
    return z * cmath.exp(e)


def psi_inverse(b: BottcherCoordinate, w: complex, tol: float = 1e-13, max_iter: int = 80) -> complex:
    """Solve psi(z) = w by the damped fixed-point iteration z <- w - (psi(z) - z).

    The update map is a contraction because psi - id has derivative O(1/|z|)
    on the domain.  Raises OutsideDomainError if the iteration would leave
    |z| > exp(sigma), NoConvergenceError if it fails to settle.
    """
    w = complex(w)
    z = w
    for _ in range(max_iter):
        z_next = w - (psi(b, z) - z)
        if abs(z_next - z) <= tol * max(1.0, abs(w)):
            return z_next
        z = z_next
    raise NoConvergenceError(
        f"psi_inverse did not converge to {tol:.3g} in {max_iter} iterations"
    )


def conjugacy_residual(b: BottcherCoordinate, z: complex) -> float:
    """|H(psi(z)) - psi(f(z))|, the pointwise defect of the conjugacy."""
    return abs(eval_H(b.map, psi(b, z)) - psi(b, eval_f(b.map, z)))


def psi_dilatation_estimate(b: BottcherCoordinate, z: complex, step: float) -> complex:
    """Finite-difference Beltrami coefficient psi_zbar / psi_z at z.

    Uses central differences along the real and imaginary axes:

        psi_z    ~ (psi(z+h) - psi(z-h))/(4h) + (psi(z+ih) - psi(z-ih))/(4ih)
        psi_zbar ~ (psi(z+h) - psi(z-h))/(4h) - (psi(z+ih) - psi(z-ih))/(4ih)

    All four sample points must stay inside the domain, so |z| - step must
    exceed exp(sigma).  Raises DegenerateDerivativeError when |psi_z| < 1e-8
    (psi is near-identity on its domain, so this only signals a bad step).
    """
    z = complex(z)
    if not (step > 0.0):
        raise ValueError(f"step must be positive, got {step!r}")
    if not abs(z) - step > math.exp(b.config.sigma):
        raise OutsideDomainError(
            f"dilatation stencil of half-width {step:.3g} at |z| = {abs(z):.6g} "
            f"leaves the domain |z| > {math.exp(b.config.sigma):.6g}"
        )
    fx = (psi(b, z + step) - psi(b, z - step)) / (4.0 * step)
    fy = (psi(b, z + 1j * step) - psi(b, z - 1j * step)) / (4j * step)
    d_z = fx + fy
    d_zbar = fx - fy
    if abs(d_z) < 1e-8:
        raise DegenerateDerivativeError(
            f"|psi_z| ~ {abs(d_z):.3g} too small for a stable ratio at z = {z:.6g}"
        )
    return d_zbar / d_z
