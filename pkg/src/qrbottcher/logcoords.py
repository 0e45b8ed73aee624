"""Logarithmic coordinates for f = h^2 + c near infinity.

Writing z = exp(X) turns the stretch into a translation-like map

    X + phi(X),   phi(X) = log((K+1)/2 + exp(2i*theta)*(K-1)/2 * exp(-2i Im X)),

squaring into X -> 2X, and the +c perturbation into

    rho(c, X) = log(1 + c * exp(-2X)),

so the full map becomes f_tilde(X) = 2(X + phi(X)) + rho(c, X + phi(X)).
xi is the analogous log-increment of the inverse stretch, satisfying
xi(X + phi(X)) = -phi(X) ... up to the fact that xi is evaluated at the
displaced point; the pair (phi, xi) drives the Böttcher construction.

All of phi, xi and their derivatives depend on X only through Im X and are
pi-periodic in it; rho is pi*i-periodic in X.  The argument of the log in
phi has real part >= 1 (and in xi >= 1/K), so the principal branch is safe
and both functions are bounded by log K in modulus.
"""

import cmath
import math

from .affine import StretchParams
from .cxmath import cexpm1, clog1p
from .errors import HalfPlaneError
from .qamap import QAMap


def _nu_term(p: StretchParams, X: complex) -> complex:
    """nu * exp(-2i Im X), the oscillating part shared by phi and xi."""
    return p.nu * cmath.exp(-2j * X.imag)


def phi(p: StretchParams, X: complex) -> complex:
    """Logarithmic displacement of the stretch: log(h(e^X)) - X."""
    X = complex(X)
    return math.log(0.5 * (p.K + 1.0)) + clog1p(_nu_term(p, X))


def xi(p: StretchParams, X: complex) -> complex:
    """Logarithmic displacement of the inverse stretch: log(h^{-1}(e^X)) - X."""
    X = complex(X)
    return math.log(0.5 * (p.K + 1.0) / p.K) + clog1p(-_nu_term(p, X))


def xi_increment(p: StretchParams, X: complex, s: complex) -> complex:
    """xi(X + s) - xi(X), accurate to full relative precision for small s.

    Both xi values are O(log K) while the difference can be 1e-12 or less,
    so the subtraction is done inside the logarithm:

        xi(X+s) - xi(X) = log(1 - nu*dE / (1 - nu*E)),

    with E = exp(-2i Im X) and dE = E * (exp(-2i Im s) - 1).
    """
    X = complex(X)
    s = complex(s)
    E = cmath.exp(-2j * X.imag)
    dE = E * cexpm1(-2j * s.imag)
    return clog1p(-p.nu * dE / (1.0 - p.nu * E))


def rho(c: complex, X: complex) -> complex:
    """Perturbation term log(1 + c * exp(-2X)) of the squaring step.

    Defined where |c * exp(-2X)| < 1, i.e. Re X > log(sqrt(|c|)); raises
    HalfPlaneError otherwise.  Decays like |c| * exp(-2 Re X) to the right.
    """
    X = complex(X)
    w = complex(c) * cmath.exp(-2.0 * X)
    if not (abs(w) < 1.0):
        raise HalfPlaneError(
            f"rho evaluated at Re X = {X.real:.6g} where |c*exp(-2X)| = {abs(w):.3g} >= 1"
        )
    return clog1p(w)


def h_tilde(p: StretchParams, X: complex) -> complex:
    """The stretch in log coordinates: X + phi(X)."""
    return X + phi(p, X)


def h_tilde_inv(p: StretchParams, X: complex) -> complex:
    """The inverse stretch in log coordinates: X + xi(X)."""
    return X + xi(p, X)


def f_tilde(m: QAMap, X: complex) -> complex:
    """The full map in log coordinates: 2(X + phi(X)) + rho(c, X + phi(X)).

    Satisfies exp(f_tilde(X)) = f(exp(X)) and the exact translation symmetry
    f_tilde(X + 2*pi*i) = f_tilde(X) + 4*pi*i.
    """
    X = complex(X)
    V = X + phi(m.stretch, X)
    return 2.0 * V + rho(m.c, V)


def phi_partials(p: StretchParams, X: complex) -> tuple[complex, complex]:
    """Wirtinger derivatives (phi_X, phi_Xbar).

    With t = nu * exp(-2i Im X):  phi_X = -t/(1+t) and phi_Xbar = +t/(1+t),
    since phi depends on X only through Im X = (X - conj(X))/(2i).  In
    particular phi_Xbar = -phi_X, and |phi_X| <= |nu|/(1-|nu|) = (K-1)/2.
    """
    t = _nu_term(p, complex(X))
    d = -t / (1.0 + t)
    return d, -d


def xi_partials(p: StretchParams, X: complex) -> tuple[complex, complex]:
    """Wirtinger derivatives (xi_X, xi_Xbar).

    With t = nu * exp(-2i Im X):  xi_X = t/(1-t) and xi_Xbar = -t/(1-t).
    Both partials share the 1 - t denominator (xi's log argument is
    1 - t up to a constant factor), and xi_Xbar = -xi_X for the same
    Im-X-only reason as for phi.  These are the values consistent with
    finite differences and with the chain rule applied to the identity
    xi(X + phi(X)) = -phi(X).
    """
    t = _nu_term(p, complex(X))
    d = t / (1.0 - t)
    return d, -d
