"""Monte-Carlo check of the bullwhip measure.

Each replication draws Gaussian innovations, builds ARMA demand, runs the
retailer's order-up-to policy with MMSE forecasts, and records the sample
variances of demand and orders after a burn-in. Replications use
independent Philox sub-streams spawned from one seed, so results do not
depend on execution order or on how many worker threads run them.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy import signal

from .arma_core import ArmaModel, PsiWeights, demand_mean, psi_weights, require_valid
from .bullwhip import _check_lead_time, bullwhip_general, bullwhip_maq
from .exceptions import DegenerateInputError, InvalidInputError
from .inventory import safety_factor, sigma_hat_L
from .normal import norm_ppf

__all__ = [
    "MaPolicy",
    "SimulationConfig",
    "SimulationResult",
    "PATH_REL_TOL",
    "default_burn_in",
    "replication_rng",
    "generate_demand",
    "forecast_path",
    "run_out_policy",
    "orders_via_prop1",
    "estimate_bullwhip",
]

# Order paths compare two routes to 1e-8; the MA(inf) tail has to be far
# smaller than that, hence a much tighter cut than the analytic default.
PATH_REL_TOL = 1e-24


class MaPolicy(str, Enum):
    """How a pure-MA demand is handled by the retailer.

    CONSTANT_OUT keeps the order-up-to level fixed, so orders equal demand
    and M = 1. MMSE forecasts the MA process like any other ARMA model.
    """

    CONSTANT_OUT = "constant_out"
    MMSE = "mmse"


def default_burn_in(psi: PsiWeights) -> int:
    return max(2000, 10 * psi.truncation_index)


@dataclass(frozen=True)
class SimulationConfig:
    model: ArmaModel
    lead_time: int = 1
    service_level: float = 0.95
    periods: int = 100_000
    burn_in: int | None = None
    replications: int = 20
    seed: int = 0
    ma_policy: MaPolicy = MaPolicy.CONSTANT_OUT

    def __post_init__(self):
        _check_lead_time(self.lead_time)
        if self.replications < 1:
            raise InvalidInputError("replications must be >= 1")
        if self.periods < 2:
            raise InvalidInputError("periods must be >= 2")
        object.__setattr__(self, "ma_policy", MaPolicy(self.ma_policy))

    def path_psi(self) -> PsiWeights:
        return psi_weights(self.model, rel_tol=PATH_REL_TOL, min_n=self.lead_time + 1)

    def resolved_burn_in(self, psi: PsiWeights | None = None) -> int:
        if self.burn_in is not None:
            return int(self.burn_in)
        return default_burn_in(psi if psi is not None else self.path_psi())

    def constant_out(self) -> bool:
        return self.model.is_pure_ma and self.ma_policy is MaPolicy.CONSTANT_OUT


@dataclass
class SimulationResult:
    empirical_m: float
    analytic_m: float
    half_width: float
    per_replication: list[tuple[float, float]]
    out_level_trace: np.ndarray | None = field(default=None, repr=False)

    def agrees(self, k: float = 1.0) -> bool:
        return abs(self.empirical_m - self.analytic_m) <= k * self.half_width

    def to_dict(self) -> dict:
        return {
            "empirical_m": self.empirical_m,
            "analytic_m": self.analytic_m,
            "half_width": self.half_width,
            "per_replication": [list(r) for r in self.per_replication],
        }


def replication_rng(seed: int, replication: int) -> np.random.Generator:
    """Independent counter-based stream for one replication."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.Philox(ss))


def generate_demand(model: ArmaModel, periods: int, rng: np.random.Generator):
    """Simulate ``periods`` values of ARMA demand.

    Presample demand sits at its mean and presample innovations are zero,
    which is exactly the MA(inf) form with eps_t = 0 for t <= 0.

    Returns
    -------
    demand, innovations : ndarray
    """
    if periods < 1:
        raise InvalidInputError("periods must be >= 1")
    eps = model.sigma_eps * rng.standard_normal(int(periods))
    dev = signal.lfilter(model.ma_poly(), model.ar_poly(), eps)
    return demand_mean(model) + dev, eps


def forecast_path(mu_d: float, psi: PsiWeights, innovations, tau: int) -> np.ndarray:
    """MMSE forecast of d_{t+tau} made at every t of an innovation path.

    Element t equals ``mmse_forecast(model, psi, eps[t::-1], tau)``.
    """
    eps = np.asarray(innovations, dtype=float)
    kernel = psi.weights[tau:]
    if kernel.size == 0:
        return np.full(eps.size, mu_d)
    return mu_d + signal.convolve(eps, kernel)[: eps.size]


def _lead_time_forecast(mu_d: float, psi: PsiWeights, eps: np.ndarray, L: int) -> np.ndarray:
    # sum over tau of the tau-step forecasts collapses to one FIR filter
    # with taps a_k = psi_{k+1} + ... + psi_{k+L}
    w = psi.weights
    csum = np.r_[0.0, np.cumsum(w)]
    k = np.arange(max(w.size - 1, 0))
    hi = np.minimum(k + L, w.size - 1)
    taps = csum[hi + 1] - csum[k + 1]
    if taps.size == 0:
        return np.full(eps.size, L * mu_d)
    return L * mu_d + signal.convolve(eps, taps)[: eps.size]


def run_out_policy(config: SimulationConfig, demand, innovations, psi: PsiWeights | None = None):
    """Order-up-to ordering O_t = S_t - S_{t-1} + d_t.

    S_t is the L-period MMSE demand forecast plus z * sigma_hat_L. Orders
    may be negative (free returns). S_{-1} is the level implied by zero
    presample innovations.

    Returns
    -------
    orders, out_levels : ndarray
    """
    d = np.asarray(demand, dtype=float)
    eps = np.asarray(innovations, dtype=float)
    model, L = config.model, config.lead_time
    if d.shape != eps.shape:
        raise InvalidInputError("demand and innovations must have the same length")
    if psi is None:
        psi = config.path_psi()
    burn = int(config.burn_in or 0)
    if d.size <= burn + L:
        raise InvalidInputError(
            f"series of length {d.size} too short for burn-in {burn} and L={L}"
        )
    mu_d = demand_mean(model)
    z = safety_factor(config.service_level)
    shat = sigma_hat_L(psi, model.sigma_eps, L)
    if config.constant_out():
        levels = np.full(d.size, L * mu_d + z * shat)
    else:
        levels = _lead_time_forecast(mu_d, psi, eps, L) + z * shat
    prev = np.r_[L * mu_d + z * shat, levels[:-1]]
    return levels - prev + d, levels


def orders_via_prop1(config: SimulationConfig, innovations, psi: PsiWeights | None = None) -> np.ndarray:
    """Orders straight from the MA(inf) form of the order process.

    O_t = mu_d + (psi_0 + ... + psi_L) eps_t + sum_{j>=1} psi_{L+j} eps_{t-j}.
    """
    model, L = config.model, config.lead_time
    eps = np.asarray(innovations, dtype=float)
    if psi is None:
        psi = config.path_psi()
    psi.require_length(L)
    mu_d = demand_mean(model)
    if config.constant_out():
        taps = np.r_[psi.weights]
    else:
        w = psi.weights
        taps = np.r_[w[: L + 1].sum(), w[L + 1 :]]
    return mu_d + signal.convolve(eps, taps)[: eps.size]


def _analytic_m(config: SimulationConfig, psi: PsiWeights) -> float:
    if config.constant_out():
        return bullwhip_maq(config.model.theta, config.lead_time).m
    return bullwhip_general(psi, config.lead_time).m


def _write_trace(path: str, start: int, d, o, s, eps) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "d", "O", "S", "eps"])
        for i in range(d.size):
            w.writerow([start + i, repr(float(d[i])), repr(float(o[i])), repr(float(s[i])), repr(float(eps[i]))])


def estimate_bullwhip(
    config: SimulationConfig,
    *,
    workers: int | None = None,
    keep_trace: bool = False,
    trace_dir: str | os.PathLike | None = None,
) -> SimulationResult:
    """Empirical Var(O) / Var(d) averaged over replications.

    The half-width is the 95% normal-approximation interval of the mean
    ratio across replications (infinite for a single replication).

    Parameters
    ----------
    config : SimulationConfig
    workers : int, optional
        Threads used to run replications; results are identical for any value.
    keep_trace : bool
        Retain the post-burn-in OUT-level series of replication 0.
    trace_dir : path, optional
        Write ``rep_XXXX.csv`` (columns t, d, O, S, eps) per replication.
    """
    model = config.model
    require_valid(model)
    psi = config.path_psi()
    burn = config.resolved_burn_in(psi)
    if config.periods <= burn + config.lead_time + 1:
        raise InvalidInputError(
            f"periods={config.periods} must exceed burn_in={burn} plus the lead time"
        )
    if trace_dir is not None:
        os.makedirs(trace_dir, exist_ok=True)

    def one(r: int):
        rng = replication_rng(config.seed, r)
        d, eps = generate_demand(model, config.periods, rng)
        o, s = run_out_policy(config, d, eps, psi)
        dd, oo = d[burn:], o[burn:]
        var_d = float(np.var(dd, ddof=1))
        var_o = float(np.var(oo, ddof=1))
        if trace_dir is not None:
            _write_trace(os.path.join(trace_dir, f"rep_{r:04d}.csv"), burn, dd, oo, s[burn:], eps[burn:])
        trace = s[burn:].copy() if keep_trace and r == 0 else None
        return var_d, var_o, trace

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outs = list(pool.map(one, range(config.replications)))
    else:
        outs = [one(r) for r in range(config.replications)]

    per_rep = [(vd, vo) for vd, vo, _ in outs]
    if any(not vd > 0 for vd, _ in per_rep):
        raise DegenerateInputError("demand sample variance is zero; bullwhip ratio undefined")
    ratios = np.array([vo / vd for vd, vo in per_rep])
    emp = float(ratios.mean())
    if ratios.size > 1:
        half = norm_ppf(0.975) * float(ratios.std(ddof=1)) / math.sqrt(ratios.size)
    else:
        half = math.inf
    return SimulationResult(
        empirical_m=emp,
        analytic_m=_analytic_m(config, psi),
        half_width=half,
        per_replication=per_rep,
        out_level_trace=outs[0][2],
    )
