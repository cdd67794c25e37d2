"""Color-vibration pairs from MacAdam ellipses, and the experiment around them.

The package covers the full path from chromaticity geometry to a fitted
detection threshold: colorimetry (xyY / XYZ / sRGB), the 25-ellipse atlas and
its amplitude-scaled endpoint pairs, gamut-filtered stimulus sets, trial
scheduling with catch trials, JSONL session persistence with an HTTP API,
and maximum-likelihood sigmoid fitting of the flicker-detection curve.
"""

from .colorimetry import (
    Chromaticity,
    DegenerateChromaticity,
    EncodedSRGB,
    LinearRGB,
    OutOfGamut,
    TristimulusXYZ,
    XYZ_TO_LINEAR_SRGB,
    XYZ_to_linear_sRGB,
    ZeroTristimulus,
    chromaticity_of,
    encoded_to_linear,
    in_gamut,
    linear_to_encoded,
    xyY_to_XYZ,
)
from .macadam import (
    ChromaticityOutOfDiagram,
    EndpointPair,
    MacAdamEllipse,
    atlas_table,
    builtin_atlas,
    endpoint_coords,
    endpoints,
    interpolate_ellipse,
    metric_matrix,
)
from .pairs import (
    CenterOutOfGamut,
    ColorVibrationPair,
    DEFAULT_LUMINANCE,
    Rejection,
    StimulusSet,
    build_stimulus_set,
    default_r_grid,
    default_stimulus_set,
    make_pair,
    max_in_gamut_r,
    rank_displayable,
)
from .psychometrics import (
    CatchReport,
    NoCatchTrials,
    NotConverged,
    ObservationBin,
    PsychometricCurve,
    catch_report,
    curve_csv,
    fit_sigmoid,
    make_report,
    threshold_at,
)
from .session import (
    DuplicateResponse,
    EmptyStimulusSet,
    ExperimentConfig,
    IncompleteSession,
    IndexOutOfRange,
    Response,
    Schedule,
    SessionRecord,
    SessionStore,
    Trial,
    analyze_session,
    build_schedule,
    record_response,
    run_simulation,
    stimulus_set_from_config,
)

__version__ = "0.1.0"
