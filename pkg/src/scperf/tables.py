"""Reference tables of M, SS and SSLT, and parameter sweeps for plotting.

All tables use sigma_eps = 1. Rows are plain dicts so they render equally
well as CSV, JSON or text.
"""

from __future__ import annotations

import numpy as np

from .arma_core import ArmaModel, psi_weights, validate_model
from .bullwhip import bullwhip_general
from .exceptions import InvalidInputError
from .inventory import scperf

__all__ = [
    "TABLE1_MODELS",
    "table1",
    "table2",
    "table3",
    "table",
    "grid",
    "sweep_m",
    "preset_sweep",
    "PRESETS",
]

TABLE1_MODELS = {
    "AR(c(-0.2,0.7))": (-0.2, 0.7),
    "AR(c(0.6,-0.4))": (0.6, -0.4),
    "AR(c(0.7,0.2))": (0.7, 0.2),
}
ARMA_095_04 = ArmaModel(phi=[0.95], theta=[0.4])


def table1(lead_times=range(1, 11)) -> list[dict]:
    """Bullwhip measure for three AR(2) demands, L = 1..10."""
    rows = []
    for L in lead_times:
        row = {"L": L}
        for label, phi in TABLE1_MODELS.items():
            row[label] = scperf(ArmaModel(phi=phi), L, 0.95).bullwhip
        rows.append(row)
    return rows


def table2(lead_times=range(1, 11), service_level: float = 0.95) -> list[dict]:
    """Bullwhip, SS and SSLT for ARMA(0.95, 0.4), L = 1..10."""
    rows = []
    for L in lead_times:
        r = scperf(ARMA_095_04, L, service_level)
        rows.append({"L": L, "Bullwhip": r.bullwhip, "SS": r.ss, "SSLT": r.sslt})
    return rows


def table3(service_levels=None, lead_times=(1, 2, 3)) -> list[dict]:
    """SS and SSLT for ARMA(0.95, 0.4) over SL = 0.90..0.99 and L = 1..3."""
    if service_levels is None:
        service_levels = [round(0.90 + 0.01 * i, 2) for i in range(10)]
    rows = []
    for sl in service_levels:
        row = {"SL": sl}
        for L in lead_times:
            r = scperf(ARMA_095_04, L, sl)
            row[f"SS_L{L}"] = r.ss
            row[f"SSLT_L{L}"] = r.sslt
        rows.append(row)
    return rows


def table(table_id) -> list[dict]:
    try:
        builder = {1: table1, 2: table2, 3: table3}[int(table_id)]
    except (KeyError, ValueError):
        raise InvalidInputError(f"unknown table id {table_id!r}; choose 1, 2 or 3") from None
    return builder()


def grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive decimal grid, rounded so that e.g. 0.3 is exactly 0.3."""
    if step <= 0:
        raise InvalidInputError("grid step must be positive")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    if n < 1:
        raise InvalidInputError(f"empty grid from {start} to {stop}")
    return np.round(start + step * np.arange(n), 10)


def sweep_m(phi, theta, lead_time: int) -> float | None:
    """M for one sweep cell, or None when the cell is not stationary/invertible.

    Redundant (common-root) cells are still evaluated: their psi-weights
    are well defined.
    """
    model = ArmaModel(phi=phi, theta=theta)
    v = validate_model(model)
    if not (v.stationary and v.invertible):
        return None
    return bullwhip_general(psi_weights(model, min_n=lead_time + 1), lead_time).m


def _fig1():
    axis = grid(-0.95, 0.95, 0.05)
    for phi in axis:
        for theta in axis:
            yield {"phi": phi, "theta": theta, "L": 1, "M": sweep_m([phi], [theta], 1)}


def _fig2():
    for theta in (0.2, 0.5, 0.8):
        for L in (1, 2, 3, 4):
            for phi in grid(-0.95, 0.95, 0.05):
                yield {"theta": theta, "L": L, "phi": phi, "M": sweep_m([phi], [theta], L)}


def _fig3():
    for L in range(1, 7):
        for phi in grid(-0.99, 0.99, 0.01):
            yield {"L": L, "phi": phi, "M": sweep_m([phi], [], L)}


PRESETS = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3}


def preset_sweep(name: str) -> list[dict]:
    try:
        return list(PRESETS[name]())
    except KeyError:
        raise InvalidInputError(f"unknown preset {name!r}; choose one of {sorted(PRESETS)}") from None
