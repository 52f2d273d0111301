"""Ball representation of maximally nonseparable modes and loop classes.

A concurrence-1 mode corresponds, up to a global sign, to a
special-unitary matrix and hence to a rotation: a point a*k in the solid
ball of radius pi with antipodal surface points identified.  Closed
transformation paths in that ball fall into two homotopy classes,
distinguished by the sign of the lifted special-unitary endpoint: +1
(contractible, "ZeroType") or -1 ("PiType", the class that shifts the
mode phase by pi).

Absolute class labels inherit the Jones and mirror conventions from
:mod:`spinorbit.optics`; only relative classes between two arms are
convention-free observables.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import SpinOrbitState, concurrence
from .errors import NotClosed, NotMaximallyNonseparable, StepTooCoarse
from .optics import RetarderSpec, apply_polarization, compose, retarder

#: Tolerance on ||product -+ I|| for a sequence to count as closed.
CLOSURE_TOL = 1e-9
#: Largest allowed rotation angle between consecutive path samples.
DEFAULT_STEP_BOUND = 0.2
#: |w| below this counts as "on the surface" when counting crossings.
SURFACE_TOL = 1e-9

_AXIS_TOL = 1e-12


class HomotopyClass(Enum):
    ZERO_TYPE = "ZeroType"
    PI_TYPE = "PiType"


class RelativeClass(Enum):
    SAME = "Same"
    DIFFERENT = "Different"


@dataclass(frozen=True)
class SpherePoint:
    """Rotation by angle a (in [0, pi]) about the unit axis k.

    Surface points (a = pi) are stored with their canonical antipode
    representative: kz > 0, ties broken by ky > 0 then kx > 0.  a = 0
    stores the conventional axis +z.
    """

    a: float
    k: tuple

    def axis(self) -> np.ndarray:
        return np.array(self.k, dtype=float)

    def quaternion(self) -> np.ndarray:
        h = 0.5 * self.a
        return np.concatenate([[np.cos(h)], np.sin(h) * self.axis()])


class SpherePath:
    """Ordered point samples of a lifted transformation path."""

    def __init__(self, points, closed: bool, crossings: int):
        self.points = list(points)
        self.closed = bool(closed)
        self.crossings = int(crossings)

    def __len__(self):
        return len(self.points)


def _canonical_quaternion(q: np.ndarray) -> np.ndarray:
    """Pick the double-cover representative used for ball coordinates."""
    if q[0] < -_AXIS_TOL:
        return -q
    if q[0] > _AXIS_TOL:
        return q
    # surface point: fixed hemisphere, kz then ky then kx
    for comp in (q[3], q[2], q[1]):
        if comp > _AXIS_TOL:
            return q
        if comp < -_AXIS_TOL:
            return -q
    return q


def _point_from_quaternion(q: np.ndarray) -> SpherePoint:
    q = _canonical_quaternion(q)
    vec = q[1:]
    vn = float(np.linalg.norm(vec))
    a = 2.0 * np.arctan2(vn, q[0])
    if vn < 1e-15:
        return SpherePoint(a=0.0, k=(0.0, 0.0, 1.0))
    k = vec / vn
    return SpherePoint(a=float(a), k=(float(k[0]), float(k[1]), float(k[2])))


def _quaternion_from_state(state: SpinOrbitState) -> np.ndarray:
    """Quaternion (one of the two signs) of the special-unitary matrix behind an MNS state."""
    m = np.sqrt(2.0) * np.array(
        [[state.alpha, state.beta], [state.gamma, state.delta]], dtype=complex
    )
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    # Rotate out any residual global phase (defined mod pi; the leftover
    # sign is the double-cover ambiguity handled by canonicalization).
    m = m * np.exp(-0.5j * np.angle(det))
    w = 0.5 * (m[0, 0] + m[1, 1]).real
    x = -0.5 * (m[0, 1] + m[1, 0]).imag
    y = 0.5 * (m[1, 0] - m[0, 1]).real
    z = -0.5 * (m[0, 0] - m[1, 1]).imag
    q = np.array([w, x, y, z])
    return q / np.linalg.norm(q)


def mns_from_point(p: SpherePoint) -> SpinOrbitState:
    """Maximally nonseparable mode at ball point a*k.

    alpha = cos(a/2) - i kz sin(a/2) and beta = -(ky + i kx) sin(a/2)
    fill the antisymmetric pattern (alpha, beta, -conj(beta),
    conj(alpha)) / sqrt(2), which always has concurrence 1.
    """
    h = 0.5 * p.a
    kx, ky, kz = p.k
    alpha = np.cos(h) - 1j * kz * np.sin(h)
    beta = -(ky + 1j * kx) * np.sin(h)
    s = 1.0 / np.sqrt(2.0)
    return SpinOrbitState(s * alpha, s * beta, -s * np.conj(beta), s * np.conj(alpha))


def point_from_mns(state: SpinOrbitState) -> SpherePoint:
    """Invert mns_from_point, up to the global sign the ball cannot see.

    Raises NotMaximallyNonseparable when the mode's concurrence is below
    1 - 1e-9: partially separable modes have no single ball point.
    """
    c = concurrence(state)
    if c <= 1.0 - 1e-9:
        raise NotMaximallyNonseparable(
            f"concurrence {c!r} < 1; the ball representation does not apply"
        )
    return _point_from_quaternion(_quaternion_from_state(state))


def sphere_distance(p1: SpherePoint, p2: SpherePoint) -> float:
    """Geodesic rotation angle between two ball points (antipodes identified)."""
    dot = abs(float(np.dot(p1.quaternion(), p2.quaternion())))
    return 2.0 * np.arccos(min(dot, 1.0))


def lift_path(
    start: SpinOrbitState,
    elements,
    samples_per_element: int = 64,
    step_bound: float = DEFAULT_STEP_BOUND,
) -> SpherePath:
    """Trace the ball trajectory as each element is inserted continuously.

    Every element is a RetarderSpec whose retardance is swept from 0 to
    its full value in samples_per_element steps, modelling the physical
    insertion of the plate; each intermediate mode is mapped to its ball
    point.  The crossing counter increments whenever the path traverses
    the surface (antipode jump); touching the surface without passing
    through does not count.

    Raises NotMaximallyNonseparable if the start mode has no ball point,
    and StepTooCoarse if consecutive samples are farther apart than
    step_bound.
    """
    if samples_per_element < 1:
        raise StepTooCoarse("samples_per_element must be at least 1")
    states = [start]
    for element in elements:
        if not isinstance(element, RetarderSpec):
            element = RetarderSpec(*element)
        base = states[-1]
        for s in range(1, samples_per_element + 1):
            j = retarder(element.gamma * s / samples_per_element, element.theta)
            states.append(apply_polarization(base, j))

    # Continuous double-cover lift: flip signs to keep consecutive
    # quaternions on the same sheet.
    quats = [_quaternion_from_state(s) for s in states]
    for i in range(1, len(quats)):
        if np.dot(quats[i - 1], quats[i]) < 0.0:
            quats[i] = -quats[i]

    for i in range(1, len(quats)):
        dot = min(abs(float(np.dot(quats[i - 1], quats[i]))), 1.0)
        step = 2.0 * np.arccos(dot)
        if step > step_bound:
            raise StepTooCoarse(
                f"path step {step:.3f} rad exceeds bound {step_bound}; "
                "increase samples_per_element"
            )

    crossings = 0
    last_sign = 0
    for q in quats:
        w = q[0]
        sign = 0 if abs(w) <= SURFACE_TOL else (1 if w > 0 else -1)
        if sign != 0:
            if last_sign != 0 and sign != last_sign:
                crossings += 1
            last_sign = sign

    points = [_point_from_quaternion(q) for q in quats]
    closed = sphere_distance(points[0], points[-1]) < CLOSURE_TOL
    return SpherePath(points=points, closed=closed, crossings=crossings)


def su2_endpoint_sign(matrix) -> int:
    """+1 or -1 according to which signed identity a closed product reaches."""
    m = np.asarray(matrix, dtype=complex)
    eye = np.eye(2)
    if np.linalg.norm(m - eye) <= CLOSURE_TOL:
        return +1
    if np.linalg.norm(m + eye) <= CLOSURE_TOL:
        return -1
    raise NotClosed("sequence does not compose to +I or -I within tolerance")


def homotopy_class(elements) -> HomotopyClass:
    """Class of a closed element sequence from the sign of its lifted endpoint."""
    elements = list(elements)
    if not elements:
        return HomotopyClass.ZERO_TYPE
    sign = su2_endpoint_sign(compose(elements))
    return HomotopyClass.ZERO_TYPE if sign > 0 else HomotopyClass.PI_TYPE


def relative_class(arm1, arm2) -> RelativeClass:
    """Whether two closed arms belong to the same loop class.

    Unlike the absolute labels, this comparison does not depend on the
    mirror or retarder phase conventions.
    """
    arm1, arm2 = list(arm1), list(arm2)
    s1 = su2_endpoint_sign(compose(arm1)) if arm1 else +1
    s2 = su2_endpoint_sign(compose(arm2)) if arm2 else +1
    return RelativeClass.SAME if s1 == s2 else RelativeClass.DIFFERENT
