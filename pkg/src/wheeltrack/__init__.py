"""Wheel hub detection (Hough gradient circles) and CamShift tracking.

Pure numpy/scipy implementations of the full chain: PGM/PPM I/O, colour
conversion, Sobel/Canny edges, Hough-gradient circle detection, hue
histogram back-projection, mean shift / CamShift, plus a synthetic wheel
scene generator for ground-truth experiments.
"""

from .annotate import annotate, midpoint_circle
from .edges import EdgeMap, GradientField, canny, sobel
from .errors import (
    BoundsError,
    DetectionError,
    FrameSourceError,
    InvalidModelError,
    NoMassError,
    ParameterError,
    PnmParseError,
    SizeError,
    WheelTrackError,
)
from .histogram import (
    ChannelHistogram,
    HistParams,
    HueHistogram,
    ProbabilityMap,
    back_project,
    compute_channel_histograms,
    compute_hue_histogram,
)
from .hough import (
    CenterAccumulator,
    CircleHit,
    HoughParams,
    accumulate_centers,
    detect_circles,
    estimate_radius,
    select_candidates,
)
from .image import (
    Image,
    Model,
    Roi,
    gaussian_blur,
    hsv_to_rgb,
    load_pnm,
    rgb_to_hsv,
    save_pnm,
    to_grayscale,
)
from .pipeline import PipelineConfig, TrackLogRecord, detect_and_seed, run_pipeline
from .synth import SynthSpec, WheelSpec, linear_profile, synth_sequence
from .tracker import (
    Moments,
    TrackingSession,
    TrackParams,
    TrackState,
    Window,
    camshift_step,
    centroid,
    compute_moments,
    mean_shift,
    track_sequence,
    update_window,
)

__version__ = "0.1.0"
