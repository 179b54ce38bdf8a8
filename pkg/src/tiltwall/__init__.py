"""Exact tilt-stability computations on polarized threefolds."""

from .chern_core import (
    ChernVector,
    Order,
    Slope,
    TiltPoint,
    discriminant,
    format_rational,
    parse_rational,
    q_form,
    slope_cmp,
    tilt_slope,
    twist,
)
from .search import (
    Conclusion,
    HeartInterval,
    heart_bounds,
    solve_e2_for_wall,
    verify_class,
    verify_counterexample,
    vertical_ray_stable,
)
from .variety import DivisorClass, VarietyPreset, blowup_p3, load_preset, p3
from .walls import Nesting, WallLocus, point_on_wall, q_wall, shape, wall_between, walls_nested

__version__ = "0.1.0"
