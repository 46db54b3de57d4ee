"""Bullwhip measure M = Var(O_t) / Var(d_t) under MMSE order-up-to ordering.

Lead time ``L`` follows the "physical lead time plus one review period"
convention, so zero physical lead time means ``L = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .arma_core import PsiWeights
from .exceptions import DomainError, InvalidInputError

__all__ = [
    "Method",
    "BullwhipResult",
    "cross_sum",
    "bullwhip_general",
    "bullwhip_ar1",
    "bullwhip_arma11",
    "bullwhip_maq",
    "bullwhip_exists",
    "bullwhip_increases_at",
]


class Method(str, Enum):
    GENERAL = "general"
    AR1_CLOSED = "ar1_closed"
    ARMA11_CLOSED = "arma11_closed"
    MAQ_TRIVIAL = "maq_trivial"


@dataclass(frozen=True)
class BullwhipResult:
    m: float
    lead_time: int
    numerator_cross_sum: float
    denominator_psi_sq: float
    method: Method


def _check_lead_time(lead_time) -> int:
    if isinstance(lead_time, bool) or int(lead_time) != lead_time or lead_time < 1:
        raise InvalidInputError(f"lead time L must be an integer >= 1, got {lead_time!r}")
    return int(lead_time)


def cross_sum(psi: PsiWeights, lead_time: int) -> float:
    """sum_{0<=i<j<=L} psi_i psi_j.

    Evaluated as sum_i psi_i * (psi_{i+1} + ... + psi_L), which is O(L) and
    keeps its sign even when the off-diagonal terms are tiny next to psi_0^2.
    """
    L = _check_lead_time(lead_time)
    psi.require_length(L)
    w = psi.weights[: L + 1]
    suffix = np.cumsum(w[::-1])[::-1]
    return float(np.dot(w[:-1], suffix[1:]))


def bullwhip_general(psi: PsiWeights, lead_time: int) -> BullwhipResult:
    """Bullwhip measure for any stationary ARMA(p, q) from its psi-weights.

    ``M = 1 + 2 * sum_{0<=i<j<=L} psi_i psi_j / sum_j psi_j^2``, the
    denominator carrying the certified tail of the truncated weights.

    Examples
    --------
    >>> from scperf.arma_core import ArmaModel, psi_weights
    >>> round(bullwhip_general(psi_weights(ArmaModel(phi=[0.7, 0.2])), 1).m, 6)
    1.315
    """
    L = _check_lead_time(lead_time)
    num = cross_sum(psi, L)
    den = psi.sum_sq
    return BullwhipResult(1.0 + 2.0 * num / den, L, num, den, Method.GENERAL)


def bullwhip_ar1(phi: float, lead_time: int) -> BullwhipResult:
    """Closed form for AR(1): 1 + 2 phi (1 - phi^L)(1 - phi^{L+1}) / (1 - phi)."""
    L = _check_lead_time(lead_time)
    phi = float(phi)
    if not abs(phi) < 1:
        raise DomainError(f"AR(1) needs |phi| < 1, got {phi}")
    den = 1.0 / (1.0 - phi * phi)
    num = phi * (1.0 - phi**L) * (1.0 - phi ** (L + 1)) / ((1.0 - phi) * (1.0 - phi * phi))
    m = 1.0 + 2.0 * phi * (1.0 - phi**L) * (1.0 - phi ** (L + 1)) / (1.0 - phi)
    return BullwhipResult(m, L, num, den, Method.AR1_CLOSED)


def bullwhip_arma11(phi: float, theta: float, lead_time: int) -> BullwhipResult:
    """Closed form for ARMA(1, 1) with psi_j = (phi + theta) phi^{j-1}."""
    L = _check_lead_time(lead_time)
    phi, theta = float(phi), float(theta)
    if not (abs(phi) < 1 and abs(theta) < 1):
        raise DomainError(f"ARMA(1,1) needs |phi| < 1 and |theta| < 1, got ({phi}, {theta})")
    s = 1.0 + theta * theta + 2.0 * phi * theta
    bracket = 1.0 - phi ** (L + 1) + theta * phi * (1.0 - phi ** (L - 1))
    lead = (phi + theta) * (1.0 - phi**L) / (1.0 - phi)
    num = lead * bracket / (1.0 - phi * phi)
    den = s / (1.0 - phi * phi)
    m = 1.0 + 2.0 * lead * bracket / s
    return BullwhipResult(m, L, num, den, Method.ARMA11_CLOSED)


def bullwhip_maq(q_params: Sequence[float], lead_time: int) -> BullwhipResult:
    """Pure MA(q) demand treated with a constant order-up-to level.

    With a constant OUT level the order equals the observed demand, so
    M = 1 for every L. This is *not* what the general formula gives for
    MA(q) psi-weights under MMSE forecasting (it can differ from 1); both
    are exposed and the caller chooses.
    """
    L = _check_lead_time(lead_time)
    theta = np.asarray(q_params, dtype=float).ravel()
    if not np.all(np.isfinite(theta)):
        raise InvalidInputError("MA coefficients must be finite")
    den = 1.0 + float(np.dot(theta, theta))
    return BullwhipResult(1.0, L, 0.0, den, Method.MAQ_TRIVIAL)


def bullwhip_exists(psi: PsiWeights, lead_time: int) -> bool:
    """True iff M > 1, i.e. the psi cross-sum over 0..L is strictly positive."""
    return cross_sum(psi, lead_time) > 0.0


def bullwhip_increases_at(psi: PsiWeights, lead_time: int) -> bool:
    """True iff M(L + 1) > M(L), i.e. psi_{L+1} * sum_{j<=L} psi_j > 0."""
    L = _check_lead_time(lead_time)
    psi.require_length(L + 1)
    w = psi.weights
    return bool(w[L + 1] * math.fsum(w[: L + 1]) > 0.0)
