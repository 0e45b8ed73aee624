"""Extending the coordinate from near infinity over the escaping set.

psi is first defined on |z| > exp(sigma).  Any escaping point z eventually
satisfies |f^n(z)| > 2*exp(sigma); applying psi there and pulling back n
times through the conjugacy H(psi(z)) = psi(f(z)) extends psi along the
orbit.  Each pullback inverts H = h^2: the two preimage candidates of w are
inverse_stretch(+-sqrt(w)), antipodal points, and the correct lift is the
one closer to the known forward-orbit point — unambiguous unless the pull
back passes near the branch point 0, which is reported rather than guessed.

Whether the extension covers the whole escaping set is governed by the
orbit of the branch point: if 0 does not escape, every escaping orbit stays
clear of 0 and the extension goes through everywhere.
"""

import cmath
import math
from enum import Enum

from .affine import inverse_stretch
from .bottcher import BottcherCoordinate, psi
from .errors import BranchAmbiguityError, InconclusiveOrbitError, NotInEscapingSetError
from .qamap import Connectivity, QAMap, classify_N, eval_f

BRANCH_TOL = 1e-9


def pullback_psi(b: BottcherCoordinate, z: complex, max_pullbacks: int) -> complex:
    """Extend psi to z by forward iteration and branch-tracked pullback.

    Forward-iterates z until |f^n(z)| > 2*exp(sigma) (NotInEscapingSetError
    if that takes more than max_pullbacks steps), evaluates psi there, and
    pulls the value back n times, choosing at each level the preimage
    candidate nearer the recorded orbit point.
    """
    m = b.map
    threshold = 2.0 * math.exp(b.config.sigma)
    pts = [complex(z)]
    while abs(pts[-1]) <= threshold:
        if len(pts) > max_pullbacks:
            raise NotInEscapingSetError(
                f"orbit of {z:.6g} did not pass |w| > {threshold:.6g} within "
                f"{max_pullbacks} iterations"
            )
        pts.append(eval_f(m, pts[-1]))
    w = psi(b, pts[-1])
    for target in reversed(pts[:-1]):
        s = cmath.sqrt(w)
        cand = inverse_stretch(m.stretch, s)
        if 2.0 * abs(cand) < BRANCH_TOL:
            raise BranchAmbiguityError(
                f"pullback at target {target:.6g} passes within {BRANCH_TOL:.1g} "
                "of the branch point; the two lifts are indistinguishable"
            )
        w = cand if abs(cand - target) <= abs(-cand - target) else -cand
    return w


def extend_psi(b: BottcherCoordinate, z: complex, max_pullbacks: int = 64) -> complex:
    """psi on the escaping set: direct evaluation on the base domain, else pullback."""
    z = complex(z)
    if abs(z) > math.exp(b.config.sigma):
        return psi(b, z)
    return pullback_psi(b, z, max_pullbacks)


class ExtensionDomain(Enum):
    WHOLE_ESCAPING_SET = "whole escaping set"
    STOPS_BEFORE_BRANCH = "stops before branch"


def extension_domain_probe(b: BottcherCoordinate, m: QAMap, max_iter: int = 512) -> ExtensionDomain:
    """Decide how far the extension reaches from the orbit of the branch point.

    If 0 has a bounded orbit the pullbacks never meet the branch point and
    psi extends over the whole escaping set; if 0 escapes, the extension is
    obstructed once pullback chains hit 0's forward orbit.  An undetermined
    orbit of 0 raises InconclusiveOrbitError rather than picking a side.
    """
    verdict = classify_N(m, max_iter)
    if verdict is Connectivity.CONNECTED:
        return ExtensionDomain.WHOLE_ESCAPING_SET
    if verdict is Connectivity.INFINITELY_MANY_COMPONENTS:
        return ExtensionDomain.STOPS_BEFORE_BRANCH
    raise InconclusiveOrbitError(
        f"orbit of 0 undetermined after {max_iter} iterations; cannot classify "
        "the extension domain"
    )
