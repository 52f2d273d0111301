"""Jones-calculus elements acting on the (H, V) polarization amplitudes.

Conventions, fixed once for the whole package:

* Retarders use the symmetric-phase form
  R(theta) diag(exp(-i gamma/2), exp(+i gamma/2)) R(-theta), which has
  determinant +1 exactly.  Every waveplate is then a special-unitary
  element and the rotation-group machinery in :mod:`spinorbit.topology`
  applies without extra phase bookkeeping.
* Mirrors act as the identity on the (H, V) components in a fixed lab
  frame.  Any fixed mirror convention only relabels absolute loop
  classes; relative classes and fringe shifts are convention-free.
* Angles are radians.  The CLI converts from degrees.

All functions are pure; matrices are plain 2x2 complex ndarrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SpinOrbitState, ZERO_TOL, normalize
from .errors import DomainError, EmptySequence, ZeroState

#: Jones action of the arm mirrors (identity in the lab frame).
MIRROR = np.eye(2, dtype=complex)

#: One-line record of the convention, embedded in classify reports.
JONES_CONVENTION = "symmetric-phase retarders (det +1); mirror = identity on (H, V)"


def rotation(theta: float) -> np.ndarray:
    """Real rotation of the (H, V) basis by theta."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def retarder(gamma: float, theta: float) -> np.ndarray:
    """Waveplate with retardance gamma about a fast axis at angle theta."""
    r = rotation(theta)
    d = np.diag([np.exp(-0.5j * gamma), np.exp(+0.5j * gamma)])
    return r @ d @ r.T.conj()


def hwp(theta: float) -> np.ndarray:
    """Half waveplate: retarder(pi, theta)."""
    return retarder(np.pi, theta)


def qwp(theta: float) -> np.ndarray:
    """Quarter waveplate: retarder(pi/2, theta)."""
    return retarder(np.pi / 2, theta)


def polarizer(axis: str) -> np.ndarray:
    """Projector onto the horizontal ("H") or vertical ("V") axis."""
    if axis == "H":
        return np.diag([1.0 + 0j, 0.0])
    if axis == "V":
        return np.diag([0.0 + 0j, 1.0])
    raise DomainError(f"polarizer axis must be 'H' or 'V', got {axis!r}")


def double_pass_arm(qwp_angle: float) -> np.ndarray:
    """Quarter waveplate traversed twice around the arm mirror.

    With the identity mirror convention this equals retarder(pi, angle):
    the two passes add their retardances on the common axis.
    """
    q = qwp(qwp_angle)
    return q @ MIRROR @ q


def compose(elements) -> np.ndarray:
    """Matrix product of elements in optical order (first element applied first).

    The last element of the sequence ends up leftmost in the product.
    """
    elements = list(elements)
    if not elements:
        raise EmptySequence("compose requires at least one element")
    total = np.array(elements[0], dtype=complex)
    for m in elements[1:]:
        total = np.asarray(m, dtype=complex) @ total
    return total


def apply_polarization(state: SpinOrbitState, jones) -> SpinOrbitState:
    """Act with a Jones matrix on the polarization index of both spatial sectors.

    (alpha, beta) and (gamma, delta) each transform as column vectors.
    The output is not renormalized; unitary elements preserve the norm,
    projectors do not.
    """
    j = np.asarray(jones, dtype=complex)
    plus = j @ np.array([state.alpha, state.beta])
    minus = j @ np.array([state.gamma, state.delta])
    return SpinOrbitState(complex(plus[0]), complex(plus[1]), complex(minus[0]), complex(minus[1]))


def prepare_stage(theta_a: float, theta_b: float) -> SpinOrbitState:
    """Idealized preparation bench: grating, two half waveplates, crossed polarizers, recombiner.

    The vortex order psi+ passes the plate at theta_a and the horizontal
    polarizer; psi- passes the plate at theta_b and the vertical one.
    With a vertically polarized source the surviving amplitudes are
    sin(2 theta_a) on psi+ e_H and cos(2 theta_b) on psi- e_V, so equal
    plate angles give the one-parameter family with
    eps = sin^2(2 theta): 22.5 degrees prepares the maximally
    nonseparable midpoint, 45 degrees the separable psi+ e_H, 0 degrees
    the separable psi- e_V.  Losses, diffraction efficiency and the
    recombiner phase are idealized away; only the normalized output is
    meaningful.
    """
    amp_plus = np.sin(2.0 * theta_a)
    amp_minus = np.cos(2.0 * theta_b)
    if max(abs(amp_plus), abs(amp_minus)) < 1e-12:
        raise ZeroState("both preparation arms are extinguished at these angles")
    return normalize(SpinOrbitState(amp_plus, 0.0, 0.0, amp_minus))


@dataclass(frozen=True)
class RetarderSpec:
    """Retardance/axis descriptor of a waveplate, used to ramp elements continuously."""

    gamma: float
    theta: float

    def matrix(self) -> np.ndarray:
        return retarder(self.gamma, self.theta)

    def partial(self, fraction: float) -> np.ndarray:
        """Element with its retardance swept to fraction*gamma (physical insertion)."""
        return retarder(self.gamma * fraction, self.theta)


def hwp_spec(theta: float) -> RetarderSpec:
    return RetarderSpec(np.pi, theta)


def qwp_spec(theta: float) -> RetarderSpec:
    return RetarderSpec(np.pi / 2, theta)


def double_pass_spec(theta: float) -> RetarderSpec:
    """Double-passed quarter waveplate: both passes ramp together, net retardance pi."""
    return RetarderSpec(np.pi, theta)
