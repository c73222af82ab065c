"""Causal classification of flat and conformally flat Lorentzian cylinders."""

from .causality import (
    CausalClass,
    Mode,
    classify_conformal,
    classify_spacetime,
    closed_causal_curve,
    diamond_membership,
    dual_class,
    future_membership,
)
from .metric import (
    CausalCharacter,
    CylinderPoint,
    FlatMetric,
    TangentVector,
    TimeOrientation,
    canonical_time_orientation,
    classify_vector,
    is_future_directed,
    metric_pairing,
    negate_metric,
    null_directions,
    quadratic_form,
    validate_lorentzian,
)

__version__ = "0.1.0"
