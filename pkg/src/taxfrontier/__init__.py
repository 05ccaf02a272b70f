"""Optimal piecewise-linear income taxation under a mean/dispersion criterion."""

__version__ = "0.1.0"

from .budget import BalancedPolicy, balance_linear, balance_two_bracket, budget_residual
from .distribution import SkillDistribution, expect, moment, parse_distribution
from .errors import (DegeneratePolicyError, InvalidArgument, NoBalanceError, NumericDomainError,
                     NumericFailure, QuadratureError, TaxFrontierError)
from .frontier import (FrontierCurve, FrontierSample, GridSpec, TwoBracketOptimum,
                       frontier_linear, frontier_two_bracket, optimal_linear_closed_form,
                       optimize_two_bracket)
from .household import HouseholdOutcome, respond_oracle, respond_quadratic
from .logmodel import (LogModelParams, log_balance, log_frontier, log_optimize, log_respond,
                       log_welfare)
from .schedule import RegimeThresholds, TaxPolicy, parse_policy, tax_at, thresholds
from .welfare import WelfarePoint, welfare_linear, welfare_two_bracket
