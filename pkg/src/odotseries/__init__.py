"""Graded odot-product algebra, rho-norms and radii of absolute convergence
for power series in many variables."""

__version__ = "0.1.0"

from .graded_matrix import (  # noqa: E402
    FieldError,
    GradedMatrix,
    column_vector,
    h_power_closed,
    identity,
    odot,
    odot_power,
    ordinary_mul,
    row_vector,
    v_power_closed,
    zeros,
)
from .multiindex import CapacityError, DimensionError, enumerate_slice  # noqa: E402
from .norms import Rho, conjugate, log_rho_norm, point_norm, rho_norm  # noqa: E402
from .series import (  # noqa: E402
    BlockSeries,
    CoefficientMap,
    converges_at,
    evaluate,
    from_coefficients,
    indeterminacy_layer,
    layer_witness_scan,
    radius_estimate,
)
from .extremal import ExtremalProblem, lambda_estimate, opnorm_estimate  # noqa: E402
