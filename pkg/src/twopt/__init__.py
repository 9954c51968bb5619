"""Exact genus-zero two-point descendant Gromov-Witten invariants from small J-functions."""
from .algebra import BiZSeries, CohClass, DegreeMonoid, ZSeries, divide_by_z1_plus_z2
from .engine import InvariantTable, Report, TargetSpec, two_point
from .errors import (ConditionError, DegenerateLambdaError, DivisibilityError, LimitError,
                     NotCertifiedError, TwoPointError, ValidationError)
from .oracle import DescendantOracle, two_point_oracle
from .projective import pn_target, pn_two_point
from .toric import (builtin_X1, builtin_X2, condition_scan, load_toric, nonequivariant_limit,
                    semifano_builtin, toric_two_point)
from .wps import wps_basis_data, wps_closed_form, wps_target, wps_two_point

__version__ = "0.1.0"
