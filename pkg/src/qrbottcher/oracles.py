"""Independent reference computations used to cross-check the main routines.

Everything here deliberately takes a different route from the production
code: the classical Böttcher limit works on the holomorphic map z^2 + c
directly, the ray scan uses vectorized Cartesian arithmetic and angle
wrapping instead of bisection on the arctan form, and the Wirtinger
finite differences know nothing about the closed-form derivatives.  Tests
compare the two routes; agreement is the evidence.
"""

import cmath
import math

import numpy as np

from .cxmath import clog1p
from .logcoords import f_tilde, xi
from .qamap import QAMap, eval_f

__all__ = [
    "classical_bottcher",
    "brute_force_fixed_rays",
    "wirtinger_fd",
    "F_k_unrolled",
    "escape_time",
]


def classical_bottcher(c: complex, z: complex, tol: float = 1e-25) -> complex:
    """Böttcher coordinate of z^2 + c near infinity by the product formula.

    B(z) = z * prod_{j>=0} (1 + c / w_j^2)^(2^-(j+1)) with w_0 = z and
    w_{j+1} = w_j^2 + c, branches tracked through the logarithm.  This is
    the textbook limit of (f^n(z))^(1/2^n) and converges super-geometrically
    once |c / z^2| < 1.
    """
    w = complex(z)
    acc = 0j
    weight = 0.5
    for _ in range(200):
        q = c / (w * w)
        if abs(q) >= 1.0:
            raise ValueError("point is not deep enough in the escaping regime")
        term = weight * clog1p(q)
        acc += term
        if abs(term) < tol:
            break
        weight *= 0.5
        w = w * w + c
        if abs(w) > 1e120:
            break  # remaining terms are below 1e-240 relative
    return z * cmath.exp(acc)


def brute_force_fixed_rays(
    K: float, theta: float, n_angles: int = 1_000_000
) -> list[float]:
    """All invariant ray angles of H = h^2 in (theta - pi/2, theta + pi/2).

    Scans n_angles angles, evaluates h in Cartesian form, takes the angle of
    H(e^{i phi}) with np.angle, wraps the defect 2*arg(h) - phi into
    [-pi, pi), and linearly interpolates each sign change.  No arctan
    identities and no bisection are shared with the production solver.
    """
    lo = theta - 0.5 * math.pi
    hi = theta + 0.5 * math.pi
    phis = np.linspace(lo, hi, n_angles)
    # keep away from the exact endpoints, where the ray equation degenerates
    phis = phis[1:-1]
    zu = np.exp(1j * phis)
    hz = 0.5 * (K + 1.0) * zu + np.exp(2j * theta) * 0.5 * (K - 1.0) * np.conj(zu)
    defect = 2.0 * np.angle(hz) - phis
    defect = (defect + np.pi) % (2.0 * np.pi) - np.pi
    sign = np.sign(defect)
    flips = np.nonzero((sign[:-1] * sign[1:]) < 0)[0]
    roots = []
    for i in flips:
        # a genuine crossing stays small on both sides; a wrap artifact jumps by ~2*pi
        if abs(defect[i]) > 1.0 or abs(defect[i + 1]) > 1.0:
            continue
        x0, x1 = phis[i], phis[i + 1]
        y0, y1 = defect[i], defect[i + 1]
        roots.append(float(x0 - y0 * (x1 - x0) / (y1 - y0)))
    for i in np.nonzero(sign == 0)[0]:
        roots.append(float(phis[i]))
    roots.sort()
    merged: list[float] = []
    for r in roots:
        if not merged or abs(r - merged[-1]) > 1e-5:
            merged.append(r)
    return merged


def wirtinger_fd(fn, z: complex, step: float = 1e-6) -> tuple[complex, complex]:
    """Central finite-difference estimate of the Wirtinger pair (f_z, f_zbar)."""
    fx = (fn(z + step) - fn(z - step)) / (2.0 * step)
    fy = (fn(z + 1j * step) - fn(z - 1j * step)) / (2.0 * step)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def F_k_unrolled(m: QAMap, X: complex, k: int) -> complex:
    """Literal forward-orbit / backward-fold form of the k-th approximant.

    Computes X_j = f_tilde^j(X) for j = 0..k, then folds Y <- Y/2 + xi(Y/2)
    k times starting from Y = X_k.  Numerically cruder than the telescoped
    production evaluation (the fold subtracts large quantities), but it is
    the definition, and agreement validates the telescoping.
    """
    X = complex(X)
    Y = X
    for _ in range(k):
        Y = f_tilde(m, Y)
    for _ in range(k):
        half = 0.5 * Y
        Y = half + xi(m.stretch, half)
    return Y


def escape_time(m: QAMap, z: complex, radius: float, max_iter: int = 100):
    """First n >= 1 with |f^n(z)| > radius by plain iteration, else None."""
    w = complex(z)
    for n in range(1, max_iter + 1):
        w = eval_f(m, w)
        if not cmath.isfinite(w) or abs(w) > radius:
            return n
    return None
