"""Bullwhip effect and safety stocks for ARMA(p, q) demand.

A retailer follows an order-up-to policy with minimum mean-squared-error
forecasts. ``scperf`` computes the variance amplification of its orders,
the lead-time forecast-error spread and two safety-stock measures, and
checks the analytic results against a Monte-Carlo simulation.
"""

from .arma_core import (
    ArmaModel,
    PsiWeights,
    RootDecomposition,
    ValidationVerdict,
    demand_mean,
    demand_variance,
    mmse_forecast,
    psi_closed_form_ar2,
    psi_closed_form_arp,
    psi_weights,
    root_decomposition,
    validate_model,
)
from .bullwhip import (
    BullwhipResult,
    Method,
    bullwhip_ar1,
    bullwhip_arma11,
    bullwhip_exists,
    bullwhip_general,
    bullwhip_increases_at,
    bullwhip_maq,
)
from .exceptions import (
    DegenerateInputError,
    DomainError,
    InvalidInputError,
    ScperfError,
    TruncationError,
    UnsupportedCaseError,
)
from .inventory import ScperfReport, safety_factor, safety_stocks, scperf, sigma_hat_L
from .simulator import (
    MaPolicy,
    SimulationConfig,
    SimulationResult,
    estimate_bullwhip,
    generate_demand,
    orders_via_prop1,
    run_out_policy,
)

__version__ = "0.1.0"
