"""Spin-orbit laser mode simulator.

Models first-order vortex beams with structured polarization: the mode
algebra and nonseparability measure, Jones-calculus waveplate sequences,
the ball representation of maximally nonseparable modes with loop-class
analysis, tilted-mirror interferograms with fringe fitting, and the
photon-counting regime.
"""

from .core import (
    SpinOrbitState,
    TransverseGrid,
    VectorField,
    concurrence,
    epsilon_from_hwp,
    epsilon_state,
    evaluate_field,
    lg_profile,
    normalize,
    product_state,
)
from .errors import (
    DegeneratePattern,
    DomainError,
    EmptySequence,
    FitDiverged,
    NotClosed,
    NotMaximallyNonseparable,
    NotNormalized,
    ParseError,
    SchemaError,
    SimulationError,
    StepTooCoarse,
    ZeroState,
)
from .interferometer import (
    FringeReport,
    Interferogram,
    LineScan,
    ScanLine,
    VortexParity,
    analytic_pattern,
    default_tilt,
    extract_scan,
    michelson,
    phase_shift,
    visibility_fit,
    vortex_parity,
    wrap_phase,
)
from .optics import (
    JONES_CONVENTION,
    MIRROR,
    RetarderSpec,
    apply_polarization,
    compose,
    double_pass_arm,
    double_pass_spec,
    hwp,
    hwp_spec,
    polarizer,
    prepare_stage,
    qwp,
    qwp_spec,
    retarder,
)
from .photostats import (
    CountScan,
    SweepRow,
    fit_counts,
    sample_counts,
    standard_arms,
    sweep_visibility,
)
from .scene import SceneConfig, parse_scene, serialize_scene
from .topology import (
    HomotopyClass,
    RelativeClass,
    SpherePath,
    SpherePoint,
    homotopy_class,
    lift_path,
    mns_from_point,
    point_from_mns,
    relative_class,
    sphere_distance,
    su2_endpoint_sign,
)

__version__ = "0.1.0"
