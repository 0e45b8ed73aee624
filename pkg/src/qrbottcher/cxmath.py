"""Complex counterparts of math.expm1 / math.log1p.

The cmath module has no expm1/log1p, but the perturbative corrections in
this package are routinely of size 1e-9 and smaller, where exp(w) - 1 and
log(1 + w) lose all relative accuracy.  Near zero we sum a short Taylor
polynomial instead; the truncation error is below 1e-20 relative for
|w| <= 1e-4, far under double-precision round-off at the crossover.
"""

import cmath

_SERIES_CUTOFF = 1e-4


def cexpm1(w: complex) -> complex:
    """exp(w) - 1 with full relative accuracy for small |w|."""
    w = complex(w)
    if abs(w) < _SERIES_CUTOFF:
        # w * (1 + w/2 + w^2/6 + w^3/24 + w^4/120)
        return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w * (1.0 / 120.0)))))
    return cmath.exp(w) - 1.0


def clog1p(w: complex) -> complex:
    """log(1 + w) (principal branch) with full relative accuracy for small |w|."""
    w = complex(w)
    if abs(w) < _SERIES_CUTOFF:
        # w * (1 - w/2 + w^2/3 - w^3/4 + w^4/5)
        return w * (1.0 + w * (-0.5 + w * (1.0 / 3.0 + w * (-0.25 + w * (1.0 / 5.0)))))
    return cmath.log(1.0 + w)
