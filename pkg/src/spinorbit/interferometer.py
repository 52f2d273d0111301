"""Tilted-mirror interferograms and fringe analysis.

The two arm transformations act on the polarization of a common input
mode; their output fields are superposed with a linear tilt phase
exp(i (tilt*x + arm_phase)) on the second arm and detected without an
analyzer, so the intensity is the sum over both polarization
components.  The deliberate tilt turns phase differences between the
arms into transverse fringe shifts.

Fringe reports come from a least-squares fit of

    A * env(x) * [1 + V sin(tilt*x + delta0)] + B

with env the doughnut envelope restricted to the scan line.  The model
is linear in (A, A*V*cos(delta0), A*V*sin(delta0), B), so the fit is a
plain (optionally weighted) linear solve with no starting guess.

Visibility scans default to the diagonal line y = x: there the fork
deformation factor sin(2 phi) equals 1 identically and the model above
is exact, so the fitted V is the modulation depth itself.  On horizontal
lines that factor varies and changes sign across the axis, which is
exactly what the parity test exploits by comparing fits above and below
the singularity.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import SpinOrbitState, TransverseGrid, evaluate_field
from .errors import DomainError, FitDiverged
from .optics import apply_polarization

#: Fringe periods across the full grid width with the default tilt.
DEFAULT_FRINGE_PERIODS = 4
#: Relative RMS residual above which a fringe fit counts as diverged.
RESIDUAL_LIMIT = 0.2
#: |V sin(delta0)| below this is an indeterminate fringe parity.
PARITY_THRESHOLD = 0.5


class VortexParity(Enum):
    BRIGHT = "Bright"
    DARK = "Dark"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ScanLine:
    """A 1-D cut through the pattern, parametrized by x."""

    orientation: str  # "horizontal" | "diagonal"
    offset: float = 0.0

    @staticmethod
    def horizontal(y: float) -> "ScanLine":
        return ScanLine("horizontal", float(y))

    @staticmethod
    def diagonal() -> "ScanLine":
        return ScanLine("diagonal", 0.0)


@dataclass(frozen=True)
class LineScan:
    """Sampled intensities along a scan line, with their plane coordinates."""

    x: np.ndarray
    y: np.ndarray
    intensity: np.ndarray
    waist: float


@dataclass(frozen=True)
class Interferogram:
    """Rendered intensity pattern plus the configuration that produced it."""

    grid: TransverseGrid
    intensity: np.ndarray
    tilt: float
    arm_phase: float
    input_state: SpinOrbitState
    arm1: np.ndarray
    arm2: np.ndarray
    arm1_elements: tuple = field(default=None)
    arm2_elements: tuple = field(default=None)


@dataclass(frozen=True)
class FringeReport:
    """Fitted fringe parameters of one scan."""

    visibility: float
    fringe_phase: float
    residual: float
    vortex_parity: VortexParity
    sigma_visibility: float = None
    sigma_phase: float = None


def default_tilt(grid: TransverseGrid) -> float:
    """Tilt wavenumber putting DEFAULT_FRINGE_PERIODS fringes across the aperture."""
    return 2.0 * np.pi * DEFAULT_FRINGE_PERIODS / grid.full_width


def michelson(
    state: SpinOrbitState,
    arm1,
    arm2,
    tilt: float = None,
    grid: TransverseGrid = None,
    arm_phase: float = 0.0,
    arm1_elements=None,
    arm2_elements=None,
) -> Interferogram:
    """Render the two-arm interference pattern of a spin-orbit mode.

    arm1 and arm2 are the total Jones matrices of each arm (including
    any elements shared upstream of the splitter).  Per pixel,

        I = sum_p |F1_p + exp(i (tilt*x + arm_phase)) F2_p|^2

    where F1, F2 are the arm output fields and p runs over H and V.
    Both arms carry unit amplitude; the overall intensity scale is
    arbitrary.
    """
    grid = grid if grid is not None else TransverseGrid(256, 256)
    tilt = default_tilt(grid) if tilt is None else float(tilt)
    periods = tilt * grid.full_width / (2.0 * np.pi)
    if periods < 4:
        warnings.warn(
            f"only {periods:.2f} fringe periods across the grid; fringes may be unresolved",
            stacklevel=2,
        )
    f1 = evaluate_field(apply_polarization(state, arm1), grid)
    f2 = evaluate_field(apply_polarization(state, arm2), grid)
    xx, _ = grid.mesh()
    phase = np.exp(1j * (tilt * xx + arm_phase))
    intensity = np.abs(f1.e_h + phase * f2.e_h) ** 2 + np.abs(f1.e_v + phase * f2.e_v) ** 2
    return Interferogram(
        grid=grid,
        intensity=intensity,
        tilt=tilt,
        arm_phase=arm_phase,
        input_state=state,
        arm1=np.asarray(arm1, dtype=complex),
        arm2=np.asarray(arm2, dtype=complex),
        arm1_elements=tuple(arm1_elements) if arm1_elements is not None else None,
        arm2_elements=tuple(arm2_elements) if arm2_elements is not None else None,
    )


def analytic_pattern(eps, x, y, tilt, phase_offset: float = 0.0, waist: float = 1.0):
    """Closed-form pattern for the one-parameter mode family.

    2 |psi(r)|^2 [1 + 2 sqrt(eps(1-eps)) sin(2 phi) sin(tilt*x + phase_offset)]
    with |psi|^2 the unit-power doughnut envelope shared with lg_profile
    and phi the transverse azimuth.  The modulation depth equals the
    mode's concurrence; the sin(2 phi) factor is the deformed-fork
    signature that integrates to zero around any ring.
    """
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"eps must lie in [0, 1], got {eps!r}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r2 = x * x + y * y
    norm2 = (2.0 / (waist * np.sqrt(np.pi))) ** 2 / waist**2
    envelope = norm2 * r2 * np.exp(-2.0 * r2 / waist**2)
    sin2phi = np.where(r2 > 0.0, 2.0 * x * y / np.where(r2 > 0.0, r2, 1.0), 0.0)
    modulation = 2.0 * np.sqrt(eps * (1.0 - eps)) * sin2phi * np.sin(tilt * x + phase_offset)
    out = 2.0 * envelope * (1.0 + modulation)
    if out.ndim == 0:
        return float(out)
    return out


def extract_scan(pattern: Interferogram, line: ScanLine) -> LineScan:
    """Pull the intensities along a scan line out of a rendered pattern."""
    grid = pattern.grid
    xs = grid.xs()
    if line.orientation == "horizontal":
        row = int(np.argmin(np.abs(grid.ys() - line.offset)))
        y = np.full_like(xs, grid.ys()[row])
        values = pattern.intensity[row, :].copy()
    elif line.orientation == "diagonal":
        if grid.nx != grid.ny:
            raise DomainError("diagonal scans require a square grid")
        y = xs.copy()
        values = np.diagonal(pattern.intensity).copy()
    else:
        raise DomainError(f"unknown scan orientation {line.orientation!r}")
    return LineScan(x=xs.copy(), y=y, intensity=values, waist=grid.waist)


def _scan_envelope(x, y, waist):
    r2 = x * x + y * y
    return r2 * np.exp(-2.0 * r2 / waist**2)


def _fit_fringe(x, y, values, tilt, waist, weights=None):
    """Fringe-model solve shared by intensity and count fits.

    Returns (V, delta0, relative_residual, sigma_V, sigma_delta0); the
    sigmas are None for unweighted fits.
    """
    x = np.asarray(x, dtype=float)
    values = np.asarray(values, dtype=float)
    env = _scan_envelope(x, np.asarray(y, dtype=float), waist)

    dx = np.median(np.abs(np.diff(x)))
    if tilt > 0 and 2.0 * np.pi / (tilt * dx) < 8:
        warnings.warn("fewer than 8 samples per fringe period", stacklevel=3)

    design = np.column_stack(
        [env, env * np.sin(tilt * x), env * np.cos(tilt * x), np.ones_like(x)]
    )
    if weights is None:
        coef, *_ = np.linalg.lstsq(design, values, rcond=None)
        cov = None
    else:
        w = np.asarray(weights, dtype=float)
        normal = design.T @ (w[:, None] * design)
        rhs = design.T @ (w * values)
        coef = np.linalg.solve(normal, rhs)
        # Weights are inverse variances, so the covariance needs no
        # residual rescaling.
        cov = np.linalg.inv(normal)

    amp, p, q, _ = coef
    fringe = float(np.hypot(p, q))
    visibility = fringe / amp if amp != 0.0 else np.inf
    delta0 = float(np.arctan2(q, p))

    residual = values - design @ coef
    scale = float(np.sqrt(np.mean(values**2)))
    rel_residual = float(np.sqrt(np.mean(residual**2))) / scale if scale > 0 else np.inf
    if not np.isfinite(rel_residual) or rel_residual > RESIDUAL_LIMIT:
        raise FitDiverged(
            f"relative fit residual {rel_residual:.3f} exceeds {RESIDUAL_LIMIT}; "
            "wrong tilt or degenerate scan"
        )

    sigma_v = sigma_d = None
    if cov is not None:
        if fringe > 0 and amp != 0.0:
            grad_v = np.array([-fringe / amp**2, p / (fringe * amp), q / (fringe * amp), 0.0])
            grad_d = np.array([0.0, -q / fringe**2, p / fringe**2, 0.0])
            sigma_v = float(np.sqrt(grad_v @ cov @ grad_v))
            sigma_d = float(np.sqrt(grad_d @ cov @ grad_d))
        else:
            sigma_v = float(np.sqrt(max(cov[1, 1], cov[2, 2]))) / abs(amp) if amp else np.inf
            sigma_d = np.pi
    return visibility, delta0, rel_residual, sigma_v, sigma_d


def _parity_of(visibility, delta0) -> VortexParity:
    m = visibility * np.sin(delta0)
    if m >= PARITY_THRESHOLD:
        return VortexParity.BRIGHT
    if m <= -PARITY_THRESHOLD:
        return VortexParity.DARK
    return VortexParity.INDETERMINATE


def visibility_fit(scan: LineScan, tilt: float) -> FringeReport:
    """Fit the fringe model to a noiseless intensity scan.

    The returned visibility is clamped to [0, 1] and the fringe phase
    canonicalized to (-pi, pi].  Raises FitDiverged when the model
    cannot describe the scan (wrong tilt or degenerate geometry).
    """
    v, d0, resid, _, _ = _fit_fringe(scan.x, scan.y, scan.intensity, tilt, scan.waist)
    parity = _parity_of(v, d0)
    return FringeReport(
        visibility=float(np.clip(v, 0.0, 1.0)),
        fringe_phase=wrap_phase(d0),
        residual=resid,
        vortex_parity=parity,
    )


def wrap_phase(value: float) -> float:
    """Canonicalize an angle to (-pi, pi]."""
    return float(np.angle(np.exp(1j * value)))


def phase_shift(report1: FringeReport, report2: FringeReport) -> float:
    """Fringe-phase difference delta0(2) - delta0(1), canonicalized to (-pi, pi]."""
    return wrap_phase(report2.fringe_phase - report1.fringe_phase)


def vortex_parity(pattern: Interferogram, y_offset: float = None) -> VortexParity:
    """Bright, dark, or indeterminate fringe at the phase singularity.

    Fits the fringe model on symmetric horizontal lines above and below
    the singularity and evaluates the mean fitted modulation at x = 0.
    Fork-deformed patterns have opposite fringe phases on the two lines,
    so their contributions cancel into Indeterminate, as does a
    vanished-visibility pattern.
    """
    y0 = 0.5 * pattern.grid.waist if y_offset is None else float(y_offset)
    periods = pattern.tilt * pattern.grid.full_width / (2.0 * np.pi)
    if periods < 4:
        warnings.warn("fewer than 4 fringe periods; parity may be unresolved", stacklevel=2)
    modulation = 0.0
    for sign in (+1.0, -1.0):
        scan = extract_scan(pattern, ScanLine.horizontal(sign * y0))
        v, d0, _, _, _ = _fit_fringe(scan.x, scan.y, scan.intensity, pattern.tilt, scan.waist)
        modulation += 0.5 * v * np.sin(d0)
    if modulation >= PARITY_THRESHOLD:
        return VortexParity.BRIGHT
    if modulation <= -PARITY_THRESHOLD:
        return VortexParity.DARK
    return VortexParity.INDETERMINATE
