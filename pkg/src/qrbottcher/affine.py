"""The affine stretch h and its parameter normalization.

A planar affine stretch with stretch factor K >= 1 along the direction
making angle theta with the real axis is

    h(z) = (K+1)/2 * z + exp(2i*theta) * (K-1)/2 * conj(z).

It fixes the line through 0 at angle theta + pi/2 and multiplies lengths
along the theta-direction by K.  Its complex dilatation is the constant
nu = exp(2i*theta) * (K-1)/(K+1), so |nu| = (K-1)/(K+1) < 1.
"""

import cmath
import math
from dataclasses import dataclass

_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class StretchParams:
    """Parameters (K, theta) of an affine stretch.

    K must be >= 1 and theta must lie in (-pi/2, pi/2].  Parameters outside
    that window describe the same family up to a positive scalar factor;
    use normalize_omega to fold them in.
    """

    K: float
    theta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.K) and self.K >= 1.0):
            raise ValueError(f"stretch factor must satisfy K >= 1, got {self.K!r}")
        if not (math.isfinite(self.theta) and -_HALF_PI < self.theta <= _HALF_PI):
            raise ValueError(
                f"theta must lie in (-pi/2, pi/2], got {self.theta!r}; "
                "use normalize_omega for general parameters"
            )

    @property
    def nu(self) -> complex:
        """Complex dilatation exp(2i*theta) * (K-1)/(K+1) of the stretch."""
        return cmath.exp(2j * self.theta) * (self.K - 1.0) / (self.K + 1.0)


def apply_stretch(p: StretchParams, z: complex) -> complex:
    """Evaluate h(z) = (K+1)/2 * z + exp(2i*theta)*(K-1)/2 * conj(z)."""
    z = complex(z)
    return 0.5 * (p.K + 1.0) * z + cmath.exp(2j * p.theta) * 0.5 * (p.K - 1.0) * z.conjugate()


def apply_stretch_xy(p: StretchParams, x: float, y: float) -> tuple[float, float]:
    """Evaluate the stretch in real coordinates.

    Rotate by -theta, scale the first coordinate by K, rotate back.  This is
    the same map as apply_stretch written without complex arithmetic, which
    makes it a useful independent cross-check.
    """
    ct, st = math.cos(p.theta), math.sin(p.theta)
    u = ct * x + st * y
    v = -st * x + ct * y
    u *= p.K
    return ct * u - st * v, st * u + ct * v


def apply_stretch_polar(p: StretchParams, r: float, phi: float) -> tuple[float, float]:
    """Evaluate the stretch on r*exp(i*phi), returning (r_out, phi_out).

    r_out = r * sqrt(1 + (K^2 - 1) * cos(phi - theta)^2)
    phi_out = theta + atan2(sin(phi - theta), K * cos(phi - theta))

    The atan2 form is total: at phi - theta = +-pi/2 the stretch fixes the
    ray, and atan2 returns exactly that angle instead of evaluating tan at
    its pole.  For |phi - theta| > pi/2 it also lands in the correct
    half-plane, where an arctan(tan(.)/K) formula would be off by pi.
    """
    if r < 0.0:
        raise ValueError(f"polar radius must be >= 0, got {r!r}")
    u = phi - p.theta
    r_out = r * math.sqrt(1.0 + (p.K * p.K - 1.0) * math.cos(u) ** 2)
    phi_out = p.theta + math.atan2(math.sin(u), p.K * math.cos(u))
    return r_out, phi_out


def inverse_stretch(p: StretchParams, z: complex) -> complex:
    """Evaluate h^{-1}(z) = (K+1)/(2K) * z - exp(2i*theta)*(K-1)/(2K) * conj(z)."""
    z = complex(z)
    return (
        0.5 * (p.K + 1.0) / p.K * z
        - cmath.exp(2j * p.theta) * 0.5 * (p.K - 1.0) / p.K * z.conjugate()
    )


def stretch_dilatation(p: StretchParams) -> complex:
    """Complex dilatation of the stretch: exp(2i*theta) * (K-1)/(K+1)."""
    return p.nu


def normalize_omega(K_raw: float, theta_raw: float) -> tuple[StretchParams, float]:
    """Fold arbitrary (K_raw > 0, theta_raw) into the canonical window.

    Returns (params, scale) with params.K >= 1, params.theta in
    (-pi/2, pi/2], and

        h_{K_raw, theta_raw} = scale * h_{params.K, params.theta}

    pointwise.  A stretch with factor K_raw < 1 along theta is K_raw times
    a stretch with factor 1/K_raw along the perpendicular direction, so in
    that case scale = K_raw < 1; otherwise scale = 1.  theta is reduced
    modulo pi (h depends on theta only through exp(2i*theta)), with the tie
    -pi/2 mapped to +pi/2.  K_raw = 1 is the identity for every theta and
    normalizes to theta = 0.
    """
    K = float(K_raw)
    th = float(theta_raw)
    if not (math.isfinite(K) and K > 0.0):
        raise ValueError(f"stretch factor must be positive and finite, got {K_raw!r}")
    if not math.isfinite(th):
        raise ValueError(f"theta must be finite, got {theta_raw!r}")
    scale = 1.0
    if K < 1.0:
        scale = K
        K = 1.0 / K
        th += _HALF_PI
    if K == 1.0:
        return StretchParams(1.0, 0.0), scale
    th = math.remainder(th, math.pi)  # lands in [-pi/2, pi/2]
    if th <= -_HALF_PI:
        th += math.pi
    return StretchParams(K, th), scale
