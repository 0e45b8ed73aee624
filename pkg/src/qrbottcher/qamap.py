"""The quasiregular quadratic family f(z) = h(z)^2 + c and orbit machinery.

Composing the affine stretch h with the complex squaring map gives a
uniformly quasiregular analogue of z^2 + c.  Everything downstream (escape
analysis, Böttcher-type coordinates, dilatation growth) is built on the two
evaluators here.
"""

import cmath
import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .affine import StretchParams, apply_stretch

# A returning orbit is declared periodic when it revisits a previous point
# to within this distance; the history window bounds the detectable period.
CYCLE_TOL = 1e-12
HISTORY_WINDOW = 64


@dataclass(frozen=True)
class QAMap:
    """The map f(z) = h(z)^2 + c with h the affine stretch."""

    stretch: StretchParams
    c: complex = 0j

    def __post_init__(self):
        if not cmath.isfinite(complex(self.c)):
            raise ValueError(f"parameter c must be finite, got {self.c!r}")


def eval_f(m: QAMap, z: complex) -> complex:
    """Evaluate f(z) = h(z)^2 + c."""
    w = apply_stretch(m.stretch, z)
    return w * w + m.c


def eval_H(m: QAMap, z: complex) -> complex:
    """Evaluate the c = 0 map H(z) = h(z)^2."""
    w = apply_stretch(m.stretch, z)
    return w * w


def escape_radius(m: QAMap) -> float:
    """A radius R beyond which orbits at least double in modulus each step.

    R = max(2, 1 + sqrt(1 + |c|)).  For |z| > R,

        |f(z)| >= |h(z)|^2 - |c| >= |z|^2 - |c| > 2|z|,

    because |h(z)| >= |z| and |z|^2 - |c| - 2|z| = (|z|-1)^2 - (1+|c|) > 0.
    Escape past R is therefore irreversible and at doubling speed.
    """
    return max(2.0, 1.0 + math.sqrt(1.0 + abs(m.c)))


class OrbitStatus(Enum):
    ESCAPED = "escaped"
    BOUNDED = "bounded"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class OrbitResult:
    """Outcome of iterating f on a starting point.

    steps is the first n >= 1 with |f^n(z)| > escape_radius for an escaped
    orbit and None otherwise.  final_point is the last orbit point computed.
    trajectory (when requested) contains z itself followed by every computed
    iterate, so its length is steps + 1 for an escaped orbit.
    """

    status: OrbitStatus
    steps: Optional[int]
    final_point: complex
    trajectory: Optional[tuple[complex, ...]] = None


def orbit(m: QAMap, z: complex, max_iter: int, keep_trajectory: bool = False) -> OrbitResult:
    """Iterate f from z until escape, a detected cycle, or the budget runs out.

    A point that leaves the disk of escape_radius has provably escaped
    (ESCAPED with the step count); an orbit that returns within CYCLE_TOL of
    one of its last HISTORY_WINDOW points is declared BOUNDED; otherwise the
    result is UNDETERMINED.  Overflow to a non-finite value counts as escape
    at that step, since it can only happen far outside the escape radius.
    """
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter!r}")
    radius = escape_radius(m)
    w = complex(z)
    traj = [w] if keep_trajectory else None
    history: deque[complex] = deque([w], maxlen=HISTORY_WINDOW)
    for n in range(1, max_iter + 1):
        w = eval_f(m, w)
        if traj is not None:
            traj.append(w)
        if not cmath.isfinite(w) or abs(w) > radius:
            return OrbitResult(OrbitStatus.ESCAPED, n, w, _freeze(traj))
        for prev in history:
            if abs(w - prev) < CYCLE_TOL:
                return OrbitResult(OrbitStatus.BOUNDED, None, w, _freeze(traj))
        history.append(w)
    return OrbitResult(OrbitStatus.UNDETERMINED, None, w, _freeze(traj))


def _freeze(traj):
    return tuple(traj) if traj is not None else None


class Connectivity(Enum):
    CONNECTED = "connected"
    INFINITELY_MANY_COMPONENTS = "infinitely many components"
    UNDETERMINED = "undetermined"


def classify_N(m: QAMap, max_iter: int) -> Connectivity:
    """Classify the complement of the escaping set by the orbit of 0.

    The branch set of f is {0}; the dichotomy for this family mirrors the
    polynomial one: the complement of the escaping set is connected exactly
    when the orbit of the branch point stays bounded, and breaks into
    infinitely many components when it escapes.
    """
    res = orbit(m, 0j, max_iter)
    if res.status is OrbitStatus.BOUNDED:
        return Connectivity.CONNECTED
    if res.status is OrbitStatus.ESCAPED:
        return Connectivity.INFINITELY_MANY_COMPONENTS
    return Connectivity.UNDETERMINED
