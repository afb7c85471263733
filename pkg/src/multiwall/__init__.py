"""Indoor multiwall path-loss prediction, calibration and coverage maps.

The simplified multiwall model adds ``M * PL_w`` to the log-distance loss,
with ``M`` the number of walls crossed by the straight tx-rx segment::

    >>> from multiwall import DEFAULT_PARAMS, simplified_multiwall
    >>> round(simplified_multiwall(DEFAULT_PARAMS, 10.0, 2).wall_term_db, 2)
    35.56
"""

from .calibration import (
    FitResult,
    Measurement,
    WallLossSample,
    differential_wall_loss,
    fit_joint,
    fit_log_distance,
    fit_wall_loss,
)
from .coverage import CoverageGrid, GridSpec, Quantity, export_csv, export_pgm, generate_grid, parse_csv
from .errors import (
    CalibrationError,
    DataFormatError,
    DegeneratePathError,
    ModelError,
    MultiwallError,
    PlanError,
    RankDeficientError,
)
from .evaluation import ComparisonReport, compare, compare_wall_losses, descriptive_stats
from .floorplan import (
    CrossingReport,
    FloorPlan,
    Point2D,
    Wall,
    WallCategory,
    straight_line_distance,
    validate_plan,
    wall_crossings,
)
from .pathloss import (
    DEFAULT_PARAMS,
    Model,
    ModelParams,
    PathLossBreakdown,
    cost231_multiwall,
    friis_reference_loss,
    one_slope,
    predict_link,
    predict_rss,
    simplified_multiwall,
)

__version__ = "0.1.0"
