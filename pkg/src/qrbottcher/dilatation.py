"""Dilatation growth of the iterates of H = h^2 along invariant rays.

H maps the ray of angle phi to the ray of angle 2*(theta + arctan(tan(phi -
theta)/K)); a fixed ray solves that equation.  Along a fixed ray the
Beltrami coefficients mu_n of the iterates H^n obey a closed recurrence
mu_{n+1} = A(mu_n) for a hyperbolic disk Möbius transformation A whose
normalized trace satisfies tr^2 A >= 4, with equality exactly when cos(phi)
hits the lower bound (6K - 1 - K^2)/(K+1)^2.  Consequently |mu_n| -> 1 and
the distortion of H^n blows up along the ray — the mechanism that prevents
a uniformly quasiconformal linearization.
"""

import cmath
import math
from dataclasses import dataclass

from .affine import StretchParams, apply_stretch, stretch_dilatation
from .errors import BranchPointError, MultipleRootsError, OutsideDomainError
from .qamap import QAMap

RAY_RESIDUAL_TOL = 1e-12
_SCAN_CELLS = 1024
_BISECT_WIDTH = 1e-14


def G(p: StretchParams, varphi: float) -> float:
    """Angle defect G(varphi) = varphi - theta - arctan(tan(varphi - theta)/K).

    G measures how much the stretch rotates the ray of angle varphi toward
    theta.  Defined on the open sector |varphi - theta| < pi/2, with
    G(theta) = 0; a ray is fixed by H = h^2 exactly when G(varphi) =
    varphi/2 (the squaring doubles the stretched angle back to varphi).
    """
    u = varphi - p.theta
    if not -0.5 * math.pi < u < 0.5 * math.pi:
        raise OutsideDomainError(
            f"G defined for |varphi - theta| < pi/2, got varphi - theta = {u:.6g}"
        )
    return u - math.atan(math.tan(u) / p.K)


@dataclass(frozen=True)
class FixedRay:
    """A ray angle phi with H(ray at phi) = ray at phi."""

    phi: float


def ray_angle_defect(p: StretchParams, varphi: float) -> float:
    """2*arg h(e^{i varphi}) - varphi, the rotation defect of H on the ray.

    Zero exactly at fixed rays.  Uses the atan2 form of the stretched angle,
    so it is total on [theta - pi/2, theta + pi/2] including the endpoints,
    where it takes the values theta -+ pi/2.
    """
    u = varphi - p.theta
    return 2.0 * (p.theta + math.atan2(math.sin(u), p.K * math.cos(u))) - varphi


def fixed_rays(p: StretchParams) -> tuple[FixedRay, ...]:
    """All fixed-ray angles in the sector (theta - pi/2, theta + pi/2).

    The defect is scanned over a uniform partition of the sector and each
    sign change is bisected down to width 1e-14.  There is always at least
    one root (the defect runs from theta - pi/2 to theta + pi/2); for K > 2
    and small |theta| the equation genuinely has three.
    """
    lo = p.theta - 0.5 * math.pi
    hi = p.theta + 0.5 * math.pi
    xs = [lo + (hi - lo) * i / _SCAN_CELLS for i in range(_SCAN_CELLS + 1)]
    vals = [ray_angle_defect(p, x) for x in xs]
    roots: list[float] = []
    for i in range(_SCAN_CELLS):
        a, b = xs[i], xs[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb < 0.0:
            while b - a > _BISECT_WIDTH:
                mid = 0.5 * (a + b)
                fm = ray_angle_defect(p, mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0.0:
                    b = mid
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))
    deduped: list[float] = []
    for r in sorted(roots):
        if not deduped or r - deduped[-1] > 1e-10:
            deduped.append(r)
    return tuple(FixedRay(r) for r in deduped)


def fixed_ray(p: StretchParams, strict: bool = False) -> FixedRay:
    """The canonical fixed ray: the root of smallest |phi|.

    For K <= 2, or for theta away from 0, the fixed ray is unique and this
    returns it.  For K > 2 with theta near 0 three rays coexist; the
    canonical one is the angle of smallest modulus (phi = 0 exactly when
    theta = 0).  strict=True raises MultipleRootsError instead of choosing.
    theta = pi/2 is handled directly: the stretch then expands along the
    imaginary axis, the positive real ray maps to itself (its defect root
    sits exactly at the sector boundary, where the scan cannot bracket it),
    so phi = 0 is returned outright.
    """
    if p.theta == 0.5 * math.pi:
        return FixedRay(0.0)
    roots = fixed_rays(p)
    if not roots:  # cannot happen: the defect changes sign across the sector
        raise RuntimeError("no fixed ray found; scan resolution insufficient")
    if strict and len(roots) > 1:
        raise MultipleRootsError(
            f"{len(roots)} fixed rays exist for K = {p.K}, theta = {p.theta}: "
            f"{[round(r.phi, 6) for r in roots]}"
        )
    best = min(roots, key=lambda r: (abs(r.phi), r.phi))
    if abs(ray_angle_defect(p, best.phi)) > RAY_RESIDUAL_TOL:
        raise RuntimeError(
            f"fixed-ray residual {ray_angle_defect(p, best.phi):.3g} exceeds "
            f"{RAY_RESIDUAL_TOL:.1g}"
        )
    return best


def H_deriv_ratio(m: QAMap, z: complex) -> complex:
    """The unimodular ratio r(z) = conj(H_z(z)) / H_z(z) driving the recurrence.

    For H = h^2 the chain rule gives H_z = 2 h_z h = (K+1) h(z), so the real
    factor K+1 cancels and

        r(z) = conj(h(z)) / h(z) = exp(-2i arg h(z)),

    which has modulus 1.  On a fixed ray of angle phi, arg h = phi/2 (mod
    pi) and r = exp(-i phi).  Undefined at the branch point z = 0 (h(z)=0).
    """
    hz = apply_stretch(m.stretch, z)
    if hz == 0:
        raise BranchPointError("H_deriv_ratio undefined at the branch point 0")
    return hz.conjugate() / hz


def _stretched_angle(p: StretchParams, ang: float) -> float:
    """arg h(e^{i ang}) via the polar form (total, pole-free)."""
    u = ang - p.theta
    return p.theta + math.atan2(math.sin(u), p.K * math.cos(u))


def mu_iterate_general(m: QAMap, z: complex, n: int) -> complex:
    """Beltrami coefficient of H^n at z by the orbit recurrence.

    mu_1 is the constant coefficient nu of h (squaring is conformal), and

        mu_{j+1}(z) = (mu_1 + r(z) * mu_j(H(z))) / (1 + r(z) * conj(mu_1) * mu_j(H(z)))

    with r = H_deriv_ratio.  Since r and the H-orbit of a ray stay on rays
    (H multiplies moduli by positive factors), the recurrence only needs the
    angles of the orbit, which avoids the double-exponential modulus growth
    of the orbit points themselves.  Orbits of z != 0 never hit the branch
    point, so only z = 0 is rejected.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    p = m.stretch
    mu1 = stretch_dilatation(p)
    if n == 1:
        return mu1
    z = complex(z)
    if z == 0:
        raise BranchPointError("the orbit recurrence is undefined at the branch point 0")
    ang = math.atan2(z.imag, z.real)
    ratios = []
    for _ in range(n - 1):
        sa = _stretched_angle(p, ang)
        ratios.append(cmath.exp(-2j * sa))  # r(z_j) = exp(-2i arg h(z_j))
        ang = 2.0 * sa  # arg H(z_j)
    mu = mu1
    for r in reversed(ratios):
        mu = (mu1 + r * mu) / (1.0 + r * mu1.conjugate() * mu)
    return mu


@dataclass(frozen=True)
class DiskMobius:
    """A Möbius transformation w -> (a w + b) / (c_ w + d) of the unit disk."""

    a: complex
    b: complex
    c_: complex
    d: complex

    def apply(self, w: complex) -> complex:
        return (self.a * w + self.b) / (self.c_ * w + self.d)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c_

    def trace(self) -> complex:
        return self.a + self.d

    def compose(self, other: "DiskMobius") -> "DiskMobius":
        """Matrix product self ∘ other."""
        return DiskMobius(
            self.a * other.a + self.b * other.c_,
            self.a * other.b + self.b * other.d,
            self.c_ * other.a + self.d * other.c_,
            self.c_ * other.b + self.d * other.d,
        )

    def normalized(self) -> "DiskMobius":
        s = cmath.sqrt(self.det())
        return DiskMobius(self.a / s, self.b / s, self.c_ / s, self.d / s)


def mobius_A(p: StretchParams, ray: FixedRay) -> DiskMobius:
    """The one-step update A of the dilatation along a fixed ray, det-normalized.

    Along a fixed ray of angle phi the orbit recurrence freezes to
    mu_{n+1} = A(mu_n) with

        A(w) = e^{-i phi} * (w + e^{i phi} mu_1) / (1 + conj(e^{i phi} mu_1) w),

    normalized here to determinant 1 (coefficients carry e^{-+i phi/2}).
    """
    mu1 = stretch_dilatation(p)
    e = cmath.exp(-1j * ray.phi)
    raw = DiskMobius(e, mu1, (mu1 * cmath.exp(1j * ray.phi)).conjugate(), 1.0)
    return raw.normalized()


def mobius_power(mob: DiskMobius, n: int) -> DiskMobius:
    """n-fold composition by sequential coefficient products.

    A Möbius map is unchanged by scaling all four coefficients, but the true
    coefficients of a hyperbolic power grow without bound, so the matrix is
    rescaled toward determinant 1 every 128 steps to keep them in floating
    range.  apply() stays accurate for any n; det() and trace() of the result
    are only meaningful while the coefficients are moderate (the determinant
    is a difference of products and cancels catastrophically once they grow).
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n!r}")
    acc = DiskMobius(1.0, 0.0, 0.0, 1.0)
    for i in range(1, n + 1):
        acc = mob.compose(acc)
        if i % 128 == 0:
            acc = acc.normalized()
    return acc


def trace_sq(p: StretchParams, ray: FixedRay) -> float:
    """tr^2 of the normalized A: (K+1)^2 (1 + cos phi) / (2K).

    Always >= 4 at a fixed ray (A is hyperbolic or parabolic on the disk);
    equality forces cos phi = (6K - 1 - K^2)/(K+1)^2.
    """
    return (p.K + 1.0) ** 2 * (1.0 + math.cos(ray.phi)) / (2.0 * p.K)


def cos_phi_lower_bound(K: float) -> float:
    """The sharp lower bound (-K^2 + 6K - 1)/(K+1)^2 for cos phi at fixed rays.

    Equivalent to tr^2 A >= 4 via (K+1)^2 + (-K^2 + 6K - 1) = 8K.
    """
    return (-K * K + 6.0 * K - 1.0) / (K + 1.0) ** 2


def mu_fixed_ray(p: StretchParams, n: int, ray: FixedRay | None = None) -> complex:
    """Beltrami coefficient of H^n along the canonical fixed ray.

    mu_n = A^{n-1}(mu_1), evaluated by n-1 scalar applications of the closed
    recurrence mu <- (mu_1 + e^{-i phi} mu) / (1 + e^{-i phi} conj(mu_1) mu).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n!r}")
    mu1 = stretch_dilatation(p)
    if p.K == 1.0:
        return 0j
    if ray is None:
        ray = fixed_ray(p)
    e = cmath.exp(-1j * ray.phi)
    mu = mu1
    mu1_bar = mu1.conjugate()
    for _ in range(n - 1):
        mu = (mu1 + e * mu) / (1.0 + e * mu1_bar * mu)
    return mu


def distortion_growth(p: StretchParams, n: int, ray: FixedRay | None = None) -> float:
    """Distortion K_n = (1 + |mu_n|)/(1 - |mu_n|) of H^n along the fixed ray.

    Strictly increasing in n and unbounded whenever K > 1: the closed
    recurrence is a hyperbolic (or parabolic) Möbius map whose orbit of
    mu_1 marches monotonically out to the unit circle.  Returns math.inf
    once |mu_n| is within 1e-15 of 1.
    """
    a = abs(mu_fixed_ray(p, n, ray))
    if a >= 1.0 - 1e-15:
        return math.inf
    return (1.0 + a) / (1.0 - a)
