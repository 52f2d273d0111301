"""Spin-orbit mode algebra on the {psi+, psi-} x {H, V} basis.

A first-order beam with arbitrary polarization is described by four
complex amplitudes (alpha, beta, gamma, delta) multiplying the basis
fields psi+ e_H, psi+ e_V, psi- e_H, psi- e_V, in that order.  psi+- are
the first-order vortex profiles evaluated at the beam waist; propagation
phases between elements are omitted since every observable here lives in
a single detection plane.

All functions are pure and all values immutable, so everything in this
module is safe to call from any number of threads.  Angles are radians
throughout the library; the CLI converts from degrees at its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotNormalized, ZeroState

# Tolerance for "state is normalized" preconditions.
NORM_TOL = 1e-9
# Below this magnitude an amplitude counts as zero.
ZERO_TOL = 1e-15


@dataclass(frozen=True)
class SpinOrbitState:
    """Four complex amplitudes over psi+ e_H, psi+ e_V, psi- e_H, psi- e_V.

    The coefficient order (alpha, beta, gamma, delta) follows the basis
    order above: alpha and beta share the psi+ profile, alpha and gamma
    share horizontal polarization.
    """

    alpha: complex
    beta: complex
    gamma: complex
    delta: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta], dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    @staticmethod
    def from_array(c) -> "SpinOrbitState":
        c = np.asarray(c, dtype=complex)
        return SpinOrbitState(complex(c[0]), complex(c[1]), complex(c[2]), complex(c[3]))


def lg_profile(x, y, sign, waist=1.0):
    """First-order vortex profile psi_+ or psi_- at the beam waist.

    psi_pm(x, y) = N (r/w) exp(pm i phi) exp(-r^2/w^2) with
    N = 2/(w sqrt(pi)) so the profile has unit power on the infinite
    plane.  Since r exp(pm i phi) = x pm i y, the vortex null at the
    origin is exact.  Accepts scalars or arrays.
    """
    if waist <= 0:
        raise DomainError("waist must be positive")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    norm = 2.0 / (waist * np.sqrt(np.pi))
    out = norm / waist * (x + 1j * sign * y) * np.exp(-(x * x + y * y) / waist**2)
    if out.ndim == 0:
        return complex(out)
    return out


def normalize(state: SpinOrbitState) -> SpinOrbitState:
    """Scale a state to unit norm, preserving its direction."""
    c = state.as_array()
    if np.max(np.abs(c)) < ZERO_TOL:
        raise ZeroState("cannot normalize a state with all amplitudes below 1e-15")
    return SpinOrbitState.from_array(c / np.linalg.norm(c))


def _require_normalized(state: SpinOrbitState) -> None:
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise NotNormalized(f"state norm {state.norm()!r} deviates from 1 by more than {NORM_TOL}")


def concurrence(state: SpinOrbitState) -> float:
    """Nonseparability measure 2|alpha*delta - beta*gamma| in [0, 1].

    0 for product modes, 1 for maximally nonseparable ones.
    """
    _require_normalized(state)
    return float(2.0 * abs(state.alpha * state.delta - state.beta * state.gamma))


def product_state(spatial, polar) -> SpinOrbitState:
    """Separable mode from a spatial pair (c+, c-) and a polarization pair (cH, cV).

    The coefficients are the outer product (c+ cH, c+ cV, c- cH, c- cV),
    normalized.  Such modes carry a single polarization state across the
    whole wavefront and have concurrence 0.
    """
    cp, cm = complex(spatial[0]), complex(spatial[1])
    ch, cv = complex(polar[0]), complex(polar[1])
    if max(abs(cp), abs(cm)) < ZERO_TOL or max(abs(ch), abs(cv)) < ZERO_TOL:
        raise ZeroState("product_state requires nonzero spatial and polarization pairs")
    return normalize(SpinOrbitState(cp * ch, cp * cv, cm * ch, cm * cv))


def epsilon_state(eps: float) -> SpinOrbitState:
    """One-parameter family sqrt(eps) psi+ e_H + sqrt(1-eps) psi- e_V.

    Interpolates between separable endpoints (eps = 0, 1) and the
    maximally nonseparable midpoint (eps = 1/2); its concurrence is
    2 sqrt(eps (1 - eps)).
    """
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"eps must lie in [0, 1], got {eps!r}")
    return SpinOrbitState(np.sqrt(eps), 0.0, 0.0, np.sqrt(1.0 - eps))


def epsilon_from_hwp(theta: float) -> float:
    """Mode fraction eps = cos^2(2 theta) for the preparation half waveplates.

    theta (radians) is the common rotation of the two preparation plates
    away from their eps = 1 setting.
    """
    return float(np.cos(2.0 * theta) ** 2)


@dataclass(frozen=True)
class TransverseGrid:
    """Pixel sampling of the transverse plane, centred on the beam axis.

    extent is the half-width in units of the waist; physical coordinates
    are extent*waist.  Pixel (i, j) is centred at
    (ys[i], xs[j]) with no pixel exactly on the axis for even counts.
    """

    nx: int
    ny: int
    extent: float = 5.0
    waist: float = 1.0

    def __post_init__(self):
        if self.nx < 16 or self.ny < 16:
            raise ValueError("grid needs at least 16 pixels per axis")
        if self.extent <= 0 or self.waist <= 0:
            raise ValueError("extent and waist must be positive")

    @property
    def half_width(self) -> float:
        return self.extent * self.waist

    @property
    def full_width(self) -> float:
        return 2.0 * self.extent * self.waist

    @property
    def pixel_area(self) -> float:
        return (self.full_width / self.nx) * (self.full_width / self.ny)

    def xs(self) -> np.ndarray:
        dx = self.full_width / self.nx
        return (np.arange(self.nx) + 0.5) * dx - self.half_width

    def ys(self) -> np.ndarray:
        dy = self.full_width / self.ny
        return (np.arange(self.ny) + 0.5) * dy - self.half_width

    def mesh(self):
        return np.meshgrid(self.xs(), self.ys())


@dataclass(frozen=True)
class VectorField:
    """Per-pixel complex amplitudes (e_h, e_v) of the two polarization components."""

    e_h: np.ndarray
    e_v: np.ndarray
    grid: TransverseGrid

    def intensity(self) -> np.ndarray:
        return np.abs(self.e_h) ** 2 + np.abs(self.e_v) ** 2

    def total_power(self) -> float:
        return float(self.intensity().sum() * self.grid.pixel_area)


def evaluate_field(state: SpinOrbitState, grid: TransverseGrid) -> VectorField:
    """Sample the mode on a grid: e_h = alpha psi+ + gamma psi-, e_v = beta psi+ + delta psi-.

    Pure per pixel, so the evaluation order cannot change any value.
    """
    _require_normalized(state)
    xx, yy = grid.mesh()
    psi_p = lg_profile(xx, yy, +1, grid.waist)
    psi_m = lg_profile(xx, yy, -1, grid.waist)
    e_h = state.alpha * psi_p + state.gamma * psi_m
    e_v = state.beta * psi_p + state.delta * psi_m
    return VectorField(e_h=e_h, e_v=e_v, grid=grid)
