"""Safety factor, lead-time forecast-error spread, and safety stocks.

Two safety-stock measures are compared:

* ``SS = z * sigma_d * sqrt(L)``, from the per-period demand deviation;
* ``SSLT = z * sigma_hat_L``, from the deviation of the L-period MMSE
  forecast error, ``sigma_hat_L^2 = sigma_eps^2 * sum_{k<L} (psi_0 + ... + psi_k)^2``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .arma_core import (
    ArmaModel,
    PsiWeights,
    demand_mean,
    psi_weights,
    require_valid,
)
from .bullwhip import _check_lead_time, bullwhip_general, bullwhip_maq
from .exceptions import InvalidInputError
from .normal import norm_ppf

__all__ = [
    "ScperfReport",
    "safety_factor",
    "sigma_hat_L",
    "safety_stocks",
    "scperf",
]


@dataclass(frozen=True)
class ScperfReport:
    """Everything :func:`scperf` computes for one (model, L, SL) triple.

    Values are unrounded; rounding is left to presentation code.
    """

    bullwhip: float
    demand_mean: float
    demand_sd: float
    sigma_hat_L: float
    safety_factor: float
    service_level: float
    ss: float
    sslt: float
    lead_time: int

    def to_dict(self) -> dict:
        return asdict(self)


def safety_factor(service_level: float) -> float:
    """z = Phi^{-1}(SL) for a cycle service level SL in (0, 1)."""
    sl = float(service_level)
    if not (0.0 < sl < 1.0):
        raise InvalidInputError(f"service level must lie in (0, 1), got {service_level!r}")
    return norm_ppf(sl)


def sigma_hat_L(psi: PsiWeights, sigma_eps: float, lead_time: int) -> float:
    """Standard deviation of the L-period cumulative MMSE forecast error.

    Depends only on psi and L, so it is the same at every period t.
    """
    L = _check_lead_time(lead_time)
    if L == 1:
        return float(sigma_eps)
    psi.require_length(L - 1)
    partial = np.cumsum(psi.weights[:L])
    return float(sigma_eps) * math.sqrt(float(np.dot(partial, partial)))


def _psi_for(model: ArmaModel, lead_time: int) -> PsiWeights:
    require_valid(model)
    return psi_weights(model, min_n=lead_time + 1)


def safety_stocks(model: ArmaModel, lead_time: int, service_level: float) -> tuple[float, float]:
    """Return ``(ss, sslt)`` for the given model, lead time and service level."""
    L = _check_lead_time(lead_time)
    z = safety_factor(service_level)
    psi = _psi_for(model, L)
    sd = model.sigma_eps * math.sqrt(psi.sum_sq)
    return z * sd * math.sqrt(L), z * sigma_hat_L(psi, model.sigma_eps, L)


def scperf(model: ArmaModel, lead_time: int, service_level: float) -> ScperfReport:
    """Bullwhip measure, demand moments and safety stocks in one report.

    Pure-MA input (including white noise) reports M = 1 from the
    constant-OUT-level argument; everything else uses the general
    psi-weight formula.

    Examples
    --------
    >>> r = scperf(ArmaModel(phi=[0.95], theta=[0.4]), 5, 0.95)
    >>> round(r.bullwhip, 5), round(r.ss, 3), round(r.sslt, 3)
    (3.13393, 16.322, 14.652)
    """
    L = _check_lead_time(lead_time)
    z = safety_factor(service_level)
    psi = _psi_for(model, L)
    if model.is_pure_ma:
        m = bullwhip_maq(model.theta, L).m
    else:
        m = bullwhip_general(psi, L).m
    sd = model.sigma_eps * math.sqrt(psi.sum_sq)
    shat = sigma_hat_L(psi, model.sigma_eps, L)
    return ScperfReport(
        bullwhip=m,
        demand_mean=demand_mean(model),
        demand_sd=sd,
        sigma_hat_L=shat,
        safety_factor=z,
        service_level=float(service_level),
        ss=z * sd * math.sqrt(L),
        sslt=z * shat,
        lead_time=L,
    )
