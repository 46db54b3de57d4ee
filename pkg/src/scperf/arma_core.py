"""ARMA(p, q) demand models and their MA(inf) representation.

The demand process is

    d_t = mu + phi_1 d_{t-1} + ... + phi_p d_{t-p}
             + eps_t + theta_1 eps_{t-1} + ... + theta_q eps_{t-q}

with the MA terms *added* (the sign convention used by R's ``arima``).
Stationary, invertible models admit ``d_t = mu_d + sum_j psi_j eps_{t-j}``;
this module computes the psi-weights by recursion and, for pure AR models
with distinct roots, by the root/partial-fraction closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exceptions import (
    DomainError,
    InvalidInputError,
    TruncationError,
    UnsupportedCaseError,
)

__all__ = [
    "ArmaModel",
    "ValidationVerdict",
    "PsiWeights",
    "RootDecomposition",
    "polynomial_roots",
    "reciprocal_roots",
    "validate_model",
    "require_valid",
    "psi_weights",
    "root_decomposition",
    "psi_closed_form_arp",
    "psi_closed_form_ar2",
    "demand_mean",
    "demand_variance",
    "mmse_forecast",
    "DEFAULT_REL_TOL",
    "DEFAULT_MAX_N",
    "REDUNDANCY_TOL",
]

DEFAULT_REL_TOL = 1e-12
DEFAULT_MAX_N = 100_000
REDUNDANCY_TOL = 1e-8
ROOT_SEPARATION_TOL = 1e-8
_IMAG_TOL = 1e-10


def _as_coefs(values, name: str) -> tuple[float, ...]:
    if values is None:
        return ()
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be a flat sequence of numbers")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} coefficients must be finite")
    return tuple(float(v) for v in arr)


def _trim(coefs: tuple[float, ...]) -> tuple[float, ...]:
    # trailing zeros do not change the polynomial degree we care about
    end = len(coefs)
    while end and coefs[end - 1] == 0.0:
        end -= 1
    return coefs[:end]


@dataclass(frozen=True)
class ArmaModel:
    """Stationary ARMA(p, q) demand process.

    Parameters
    ----------
    mu : float
        Constant term (not the process mean; see :func:`demand_mean`).
    phi : sequence of float
        AR coefficients phi_1..phi_p.
    theta : sequence of float
        MA coefficients theta_1..theta_q, entering with a plus sign.
    sigma_eps : float
        Innovation standard deviation.

    Trailing zero coefficients are dropped, so ``ArmaModel(phi=[0.5, 0])``
    is an AR(1). Stationarity/invertibility is checked by
    :func:`validate_model`, not at construction.
    """

    mu: float = 0.0
    phi: tuple[float, ...] = ()
    theta: tuple[float, ...] = ()
    sigma_eps: float = 1.0

    def __post_init__(self):
        mu = float(self.mu)
        sigma = float(self.sigma_eps)
        if not math.isfinite(mu) or not math.isfinite(sigma):
            raise InvalidInputError("mu and sigma_eps must be finite")
        if mu < 0:
            raise InvalidInputError(f"mu must be nonnegative, got {mu}")
        if sigma <= 0:
            raise InvalidInputError(f"sigma_eps must be positive, got {sigma}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma_eps", sigma)
        object.__setattr__(self, "phi", _trim(_as_coefs(self.phi, "phi")))
        object.__setattr__(self, "theta", _trim(_as_coefs(self.theta, "theta")))

    @property
    def p(self) -> int:
        return len(self.phi)

    @property
    def q(self) -> int:
        return len(self.theta)

    @property
    def is_pure_ma(self) -> bool:
        return self.p == 0

    @property
    def is_pure_ar(self) -> bool:
        return self.q == 0

    def ar_poly(self) -> np.ndarray:
        """Coefficients of 1 - phi_1 z - ... - phi_p z^p, lowest degree first."""
        return np.array((1.0,) + tuple(-c for c in self.phi))

    def ma_poly(self) -> np.ndarray:
        """Coefficients of 1 + theta_1 z + ... + theta_q z^q, lowest degree first."""
        return np.array((1.0,) + self.theta)

    def with_sigma(self, sigma_eps: float) -> "ArmaModel":
        return ArmaModel(self.mu, self.phi, self.theta, sigma_eps)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "phi": list(self.phi),
            "theta": list(self.theta),
            "sigma_eps": self.sigma_eps,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArmaModel":
        return cls(
            mu=data.get("mu", 0.0),
            phi=data.get("phi", ()),
            theta=data.get("theta", ()),
            sigma_eps=data.get("sigma_eps", 1.0),
        )


def reciprocal_roots(coefs_low_first) -> np.ndarray:
    """Reciprocals 1/z_i of the roots of ``c_0 + c_1 z + ... + c_n z^n``.

    These are the eigenvalues of the companion matrix of the reversed
    polynomial ``c_0 w^n + c_1 w^{n-1} + ... + c_n``. Working with 1/z
    keeps tiny leading coefficients from overflowing the roots.
    """
    c = np.asarray(coefs_low_first, dtype=float)
    nz = np.flatnonzero(c)
    c = c[: nz[-1] + 1] if nz.size else c[:0]
    if c.size <= 1:
        return np.empty(0, dtype=complex)
    if c.size == 2:
        return np.array([-c[1] / c[0]], dtype=complex)
    # np.roots reads its argument highest degree first, i.e. the reversal
    return np.roots(c).astype(complex)


def polynomial_roots(coefs_low_first) -> np.ndarray:
    """Roots of ``c_0 + c_1 z + ... + c_n z^n`` (c_0 != 0)."""
    return _invert(reciprocal_roots(coefs_low_first))


def _invert(lam: np.ndarray) -> np.ndarray:
    # a (sub)normal-tiny reciprocal root stands for a root at infinity
    with np.errstate(all="ignore"):
        z = 1.0 / lam
    z[~np.isfinite(z)] = np.inf
    return z


@dataclass(frozen=True)
class ValidationVerdict:
    stationary: bool
    invertible: bool
    redundant: bool
    ar_roots: np.ndarray
    ma_roots: np.ndarray

    @property
    def ok(self) -> bool:
        return self.stationary and self.invertible and not self.redundant

    @property
    def ar_root_moduli(self) -> np.ndarray:
        return np.abs(self.ar_roots)

    @property
    def ma_root_moduli(self) -> np.ndarray:
        return np.abs(self.ma_roots)

    def problems(self) -> list[str]:
        out = []
        if not self.stationary:
            out.append("AR polynomial root inside or on the unit circle (not stationary)")
        if not self.invertible:
            out.append("MA polynomial root inside or on the unit circle (not invertible)")
        if self.redundant:
            out.append("AR and MA polynomials share a common root (parameter redundancy)")
        return out


def validate_model(model: ArmaModel, tol: float = REDUNDANCY_TOL) -> ValidationVerdict:
    """Check stationarity, invertibility and parameter redundancy.

    A root on the unit circle (within ``tol``) counts as a violation. Roots
    of the AR and MA polynomials closer than ``tol`` flag redundancy.
    """
    ar_lam = reciprocal_roots(model.ar_poly())
    ma_lam = reciprocal_roots(model.ma_poly())
    # |z| > 1 + tol  <=>  |1/z| < 1 / (1 + tol)
    stationary = bool(np.all(np.abs(ar_lam) < 1.0 / (1.0 + tol)))
    invertible = bool(np.all(np.abs(ma_lam) < 1.0 / (1.0 + tol)))
    redundant = False
    if ar_lam.size and ma_lam.size:
        dist = np.abs(ar_lam[:, None] - ma_lam[None, :])
        redundant = bool(np.any(dist < tol))
    ar_roots, ma_roots = _invert(ar_lam), _invert(ma_lam)
    return ValidationVerdict(stationary, invertible, redundant, ar_roots, ma_roots)


def require_valid(model: ArmaModel, *, invertible: bool = True, redundancy: bool = False) -> ValidationVerdict:
    """Raise :class:`DomainError` naming the first violated condition."""
    v = validate_model(model)
    if not v.stationary:
        raise DomainError(v.problems()[0])
    if invertible and not v.invertible:
        raise DomainError("MA polynomial root inside or on the unit circle (not invertible)")
    if redundancy and v.redundant:
        raise DomainError("AR and MA polynomials share a common root (parameter redundancy)")
    return v


@dataclass(frozen=True)
class PsiWeights:
    """Finite prefix psi_0..psi_N of the MA(inf) weights.

    ``tail_sum_sq`` is sum_{j>N} psi_j^2 obtained from the AR companion
    recursion (exact up to rounding); ``tail_bound`` is that tail relative
    to the head sum sum_{j<=N} psi_j^2.
    """

    weights: np.ndarray
    truncation_index: int
    tail_bound: float
    tail_sum_sq: float = 0.0
    phi: tuple[float, ...] = field(default=(), repr=False)
    theta: tuple[float, ...] = field(default=(), repr=False)

    def __len__(self) -> int:
        return self.weights.size

    def __getitem__(self, j):
        return self.weights[j]

    @property
    def sum_sq(self) -> float:
        """Tail-corrected sum of all squared weights."""
        return float(np.dot(self.weights, self.weights)) + self.tail_sum_sq

    def require_length(self, n: int) -> None:
        if self.truncation_index < n:
            raise TruncationError(
                f"psi-weights truncated at N={self.truncation_index}, need index {n}",
                self.tail_bound,
            )


def _companion(phi: Sequence[float]) -> np.ndarray:
    p = len(phi)
    a = np.zeros((p, p))
    a[0, :] = phi
    if p > 1:
        a[1:, :-1] = np.eye(p - 1)
    return a


def _tail_gram(phi: Sequence[float]) -> np.ndarray:
    """Q with s_N^T Q s_N = sum_{k>=1} psi_{N+k}^2 for the state s_N.

    s_N = (psi_N, ..., psi_{N-p+1}) and s_{N+1} = A s_N once the MA terms
    have died out, so the tail is the matrix-geometric series
    sum_k (A^k)^T e1 e1^T A^k taken from k = 1.
    """
    if len(phi) == 1:
        f2 = float(phi[0]) ** 2
        return np.array([[f2 / (1.0 - f2)]])
    a = _companion(phi)
    p = a.shape[0]
    e1 = np.zeros((p, p))
    e1[0, 0] = 1.0
    # P = A^T P A + e1 e1^T, solved as (I - A^T kron A^T) vec(P) = vec(e1 e1^T)
    gram = np.linalg.solve(np.eye(p * p) - np.kron(a.T, a.T), e1.ravel()).reshape(p, p)
    gram = 0.5 * (gram + gram.T)
    return a.T @ gram @ a


def _recursion(phi: Sequence[float], theta: Sequence[float], n: int) -> np.ndarray:
    psi = [0.0] * (n + 1)
    psi[0] = 1.0
    p, q = len(phi), len(theta)
    for j in range(1, n + 1):
        acc = 0.0
        for k in range(1, min(p, j) + 1):
            acc += phi[k - 1] * psi[j - k]
        if j <= q:
            acc += theta[j - 1]
        psi[j] = acc
    return np.asarray(psi)


def psi_weights(
    model: ArmaModel,
    rel_tol: float = DEFAULT_REL_TOL,
    max_n: int = DEFAULT_MAX_N,
    min_n: int = 0,
) -> PsiWeights:
    """MA(inf) weights by the coefficient-matching recursion.

    The truncation index N is the smallest index >= max(p, q + 1, min_n)
    whose tail sum_{j>N} psi_j^2, relative to the head sum, is at most
    ``rel_tol``. The tail is evaluated from the last p weights through the
    companion-matrix geometric series, so the bound is certified rather
    than guessed.

    Raises
    ------
    DomainError
        The AR polynomial has a root on or inside the unit circle.
    TruncationError
        ``rel_tol`` is not reached by ``max_n``.
    """
    if not rel_tol > 0:
        raise InvalidInputError("rel_tol must be positive")
    p, q = model.p, model.q
    n0 = max(p, q + 1, int(min_n))
    if max_n < n0:
        raise InvalidInputError(f"max_n must be at least {n0}, got {max_n}")
    v = validate_model(model)
    if not v.stationary:
        raise DomainError(v.problems()[0])

    if p == 0:
        w = _recursion((), model.theta, n0)
        return PsiWeights(w, n0, 0.0, 0.0, model.phi, model.theta)

    with np.errstate(divide="ignore"):
        rho = float(np.max(1.0 / np.abs(v.ar_roots)))
    gram = _tail_gram(model.phi)
    guess = n0
    if rho > 0:
        guess = max(n0, int(math.ceil(math.log(rel_tol) / (2.0 * math.log(rho)))) + q + p)
    n = min(guess, max_n)
    while True:
        w = _recursion(model.phi, model.theta, n)
        head = np.cumsum(w * w)
        # states s_j = (psi_j, ..., psi_{j-p+1}) for j = n0..n
        padded = np.concatenate((np.zeros(p - 1), w))
        idx = np.arange(n0, n + 1)
        states = np.stack([padded[idx + p - 1 - k] for k in range(p)], axis=1)
        tails = np.einsum("ij,jk,ik->i", states, gram, states)
        tails = np.maximum(tails, 0.0)
        rel = tails / head[idx]
        hit = np.nonzero(rel <= rel_tol)[0]
        if hit.size:
            i = int(hit[0])
            big_n = int(idx[i])
            return PsiWeights(
                w[: big_n + 1].copy(), big_n, float(rel[i]), float(tails[i]), model.phi, model.theta
            )
        if n >= max_n:
            raise TruncationError(
                f"tail bound {rel[-1]:.3e} > rel_tol {rel_tol:.1e} at max_n={max_n}",
                float(rel[-1]),
            )
        n = min(2 * n, max_n)


@dataclass(frozen=True)
class RootDecomposition:
    """Roots z_i of phi(z) and constants c_i with psi_j = sum_i c_i z_i^{-j}."""

    roots: np.ndarray
    constants: np.ndarray
    distinct: bool

    def psi(self, j) -> np.ndarray:
        j = np.asarray(j)
        lam = 1.0 / self.roots
        return np.sum(self.constants[:, None] * lam[:, None] ** np.atleast_1d(j)[None, :], axis=0)


def root_decomposition(model: ArmaModel, sep_tol: float = ROOT_SEPARATION_TOL) -> RootDecomposition:
    """Roots and partial-fraction constants of a pure AR(p) model.

    With reciprocal roots lam_i = 1 / z_i, the constants are
    c_i = lam_i^{p-1} / prod_{k != i} (lam_i - lam_k), which sum to one.
    """
    if model.q > 0:
        raise DomainError("closed-form psi-weights need a pure AR model (q = 0)")
    lam = reciprocal_roots(model.ar_poly())
    p = lam.size
    roots = _invert(lam)
    if p == 0:
        return RootDecomposition(roots, np.empty(0, dtype=complex), True)
    gaps = np.abs(lam[:, None] - lam[None, :])
    distinct = bool(np.all(gaps[~np.eye(p, dtype=bool)] > sep_tol))
    if not distinct:
        return RootDecomposition(roots, np.full(p, np.nan + 0j), False)
    consts = np.empty(p, dtype=complex)
    for i in range(p):
        diff = lam[i] - np.delete(lam, i)
        consts[i] = lam[i] ** (p - 1) / np.prod(diff)
    return RootDecomposition(roots, consts, True)


def psi_closed_form_arp(model: ArmaModel, n: int) -> PsiWeights:
    """psi_0..psi_n of a pure AR(p) model from its characteristic roots.

    Raises
    ------
    DomainError
        ``q > 0`` or the model is not stationary.
    UnsupportedCaseError
        Two AR roots coincide (within the separation tolerance).
    """
    if model.q > 0:
        raise DomainError("closed-form psi-weights need a pure AR model (q = 0)")
    if not validate_model(model).stationary:
        raise DomainError("AR polynomial root inside or on the unit circle (not stationary)")
    dec = root_decomposition(model)
    if not dec.distinct:
        raise UnsupportedCaseError("repeated AR roots: closed form not available, use psi_weights")
    j = np.arange(n + 1)
    if model.p == 0:
        w = (j == 0).astype(float)
    else:
        vals = dec.psi(j)
        scale = np.maximum(1.0, np.abs(vals))
        if np.any(np.abs(vals.imag) > _IMAG_TOL * scale):
            raise UnsupportedCaseError("closed form left a non-negligible imaginary residue")
        w = vals.real
    return PsiWeights(w, int(n), float("nan"), float("nan"), model.phi, model.theta)


def psi_closed_form_ar2(phi1: float, phi2: float, j: int) -> float:
    """psi_j of a stationary AR(2) with distinct roots.

    Uses ``psi_j = (z2^{j+1} - z1^{j+1}) / ((z1 z2)^j (z2 - z1))`` where
    z1, z2 solve ``1 - phi1 z - phi2 z^2 = 0``; complex roots are handled
    in complex arithmetic and the (vanishing) imaginary part is dropped.
    """
    phi1, phi2 = float(phi1), float(phi2)
    if not (phi1 + phi2 < 1 and phi2 - phi1 < 1 and abs(phi2) < 1):
        raise DomainError("(phi1, phi2) outside the AR(2) stationarity triangle")
    if phi2 == 0.0:
        raise UnsupportedCaseError("phi2 = 0: characteristic equation has degree 1")
    disc = phi1 * phi1 + 4.0 * phi2
    if abs(disc) <= ROOT_SEPARATION_TOL:
        raise UnsupportedCaseError("repeated AR(2) root (phi1^2 + 4 phi2 = 0)")
    sq = np.sqrt(complex(disc))
    z1 = (-phi1 + sq) / (2.0 * phi2)
    z2 = (-phi1 - sq) / (2.0 * phi2)
    # reciprocal roots keep powers bounded for large j
    l1, l2 = 1.0 / z1, 1.0 / z2
    val = (l1 ** (j + 1) - l2 ** (j + 1)) / (l1 - l2)
    if abs(val.imag) > _IMAG_TOL * max(1.0, abs(val.real)):
        raise UnsupportedCaseError("non-negligible imaginary residue in AR(2) closed form")
    return float(val.real)


def demand_mean(model: ArmaModel) -> float:
    """Unconditional mean mu / (1 - phi_1 - ... - phi_p)."""
    denom = 1.0 - math.fsum(model.phi)
    if abs(denom) < 1e-12:
        raise DomainError("1 - sum(phi) vanishes: model on the non-stationary boundary")
    return model.mu / denom


def demand_variance(model: ArmaModel, psi: PsiWeights | None = None) -> float:
    """sigma_eps^2 times the tail-corrected sum of squared psi-weights."""
    if psi is None:
        psi = psi_weights(model)
    return model.sigma_eps**2 * psi.sum_sq


def mmse_forecast(model: ArmaModel, psi: PsiWeights, innovations, tau: int) -> float:
    """Conditional-mean forecast of d_{t+tau} given information up to t.

    ``innovations`` lists eps_t, eps_{t-1}, eps_{t-2}, ... (most recent
    first). The forecast is mu_d + sum_{j>=tau} psi_j eps_{t+tau-j}; terms
    beyond the truncation index or the window are dropped.
    """
    if int(tau) != tau or tau < 1:
        raise InvalidInputError(f"forecast horizon must be a positive integer, got {tau}")
    tau = int(tau)
    eps = np.asarray(innovations, dtype=float)
    w = psi.weights[tau:]
    m = min(w.size, eps.size)
    return demand_mean(model) + float(np.dot(w[:m], eps[:m]))
