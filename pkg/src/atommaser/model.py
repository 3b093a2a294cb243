"""Physical model of the atom maser on the photon-number ladder.

The cavity state diagonal in the Fock basis evolves as a birth-death
process.  Four detection channels act on the output: atoms leaving in the
ground state (photon number +1), atoms leaving in the excited state
(photon number unchanged), photon emission into the thermal bath (-1) and
photon absorption from the bath (+1).  All rates are elementary functions
of the photon number, so they are exposed both as scalar operations and
as vectorized lookup tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TruncationError

__all__ = [
    "MaserParams",
    "ChannelRates",
    "RatePhiDerivatives",
    "StationaryDistribution",
    "channel_rates",
    "rate_phi_derivatives",
    "rate_tables",
    "rate_phi_derivative_tables",
    "rate_phi_second_derivative_tables",
    "stationary_distribution",
]


@dataclass(frozen=True)
class MaserParams:
    """Pump and bath parameters of the maser.

    Parameters
    ----------
    phi : float
        Accumulated Rabi angle, radians.  The parameter to be estimated.
    n_ex : float
        Effective pump rate, atoms per cavity lifetime.
    nu : float
        Thermal bath mean photon number.
    """

    phi: float
    n_ex: float = 100.0
    nu: float = 0.15

    def __post_init__(self):
        if not self.n_ex > 0:
            raise ValueError(f"n_ex must be positive, got {self.n_ex}")
        if self.nu < 0:
            raise ValueError(f"nu must be nonnegative, got {self.nu}")
        if self.phi < 0:
            raise ValueError(f"phi must be nonnegative, got {self.phi}")

    @property
    def alpha(self) -> float:
        """Pump-scaled coordinate alpha = phi * sqrt(n_ex), always derived."""
        return self.phi * math.sqrt(self.n_ex)

    @classmethod
    def from_alpha(cls, alpha: float, n_ex: float = 100.0, nu: float = 0.15) -> "MaserParams":
        return cls(phi=alpha / math.sqrt(n_ex), n_ex=n_ex, nu=nu)


@dataclass(frozen=True)
class ChannelRates:
    """Per-channel jump rates at a fixed photon number."""

    ground: float
    excited: float
    emit: float
    absorb: float

    @property
    def up(self) -> float:
        """Total photon-number birth rate (ground + absorb)."""
        return self.ground + self.absorb

    @property
    def down(self) -> float:
        return self.emit

    @property
    def total(self) -> float:
        return self.ground + self.excited + self.emit + self.absorb


@dataclass(frozen=True)
class RatePhiDerivatives:
    """d(rate)/d(phi) per channel at a fixed photon number."""

    ground: float
    excited: float
    emit: float
    absorb: float


def channel_rates(k: int, params: MaserParams) -> ChannelRates:
    """Jump rates out of photon number ``k``.

    ground = n_ex sin^2(phi sqrt(k+1)), excited = n_ex cos^2(phi sqrt(k+1)),
    emit = (nu+1) k, absorb = nu (k+1).
    """
    if k < 0:
        raise ValueError("photon number must be nonnegative")
    theta = params.phi * math.sqrt(k + 1.0)
    s2 = math.sin(theta) ** 2
    return ChannelRates(
        ground=params.n_ex * s2,
        excited=params.n_ex * (1.0 - s2),
        emit=(params.nu + 1.0) * k,
        absorb=params.nu * (k + 1.0),
    )


def rate_phi_derivatives(k: int, params: MaserParams) -> RatePhiDerivatives:
    """Rabi-angle derivatives of the four rates at photon number ``k``.

    Only the atom channels depend on phi; the bath rates are constant.
    """
    if k < 0:
        raise ValueError("photon number must be nonnegative")
    root = math.sqrt(k + 1.0)
    d = params.n_ex * root * math.sin(2.0 * params.phi * root)
    return RatePhiDerivatives(ground=d, excited=-d, emit=0.0, absorb=0.0)


def rate_tables(params: MaserParams, n_max: int):
    """Vectorized rate lookup tables for photon numbers 0..n_max.

    Returns
    -------
    (ground, excited, emit, absorb) : tuple of ndarray, each length n_max+1
    """
    k = np.arange(n_max + 1, dtype=np.float64)
    s2 = np.sin(params.phi * np.sqrt(k + 1.0)) ** 2
    ground = params.n_ex * s2
    excited = params.n_ex - ground
    emit = (params.nu + 1.0) * k
    absorb = params.nu * (k + 1.0)
    return ground, excited, emit, absorb


def rate_phi_derivative_tables(params: MaserParams, n_max: int):
    """d(rate)/d(phi) tables; bath channels are identically zero."""
    k = np.arange(n_max + 1, dtype=np.float64)
    root = np.sqrt(k + 1.0)
    d = params.n_ex * root * np.sin(2.0 * params.phi * root)
    zero = np.zeros_like(d)
    return d, -d, zero, zero


def rate_phi_second_derivative_tables(params: MaserParams, n_max: int):
    """d^2(rate)/d(phi)^2 tables; bath channels are identically zero."""
    k = np.arange(n_max + 1, dtype=np.float64)
    kp1 = k + 1.0
    d2 = 2.0 * params.n_ex * kp1 * np.cos(2.0 * params.phi * np.sqrt(kp1))
    zero = np.zeros_like(d2)
    return d2, -d2, zero, zero


@dataclass(frozen=True)
class StationaryDistribution:
    """Truncated stationary photon-number distribution.

    ``probs[k]`` is the stationary probability of ``k`` photons for
    ``k = 0..n_max``; ``tail_bound`` bounds the discarded mass.
    """

    probs: np.ndarray
    n_max: int
    tail_bound: float
    mean_photon: float
    _cdf: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_cdf", np.cumsum(self.probs))

    def sample(self, u: float) -> int:
        """Inverse-CDF draw: map a uniform in [0,1) to a photon number."""
        return int(np.searchsorted(self._cdf, u, side="right"))

    def mode_locations(self, floor: float = 1e-4):
        """Indices of local maxima of ``probs`` above ``floor`` (bistability probe)."""
        p = self.probs
        inner = (p[1:-1] > p[:-2]) & (p[1:-1] >= p[2:]) & (p[1:-1] > floor)
        modes = list(np.nonzero(inner)[0] + 1)
        if len(p) > 1 and p[0] > p[1] and p[0] > floor:
            modes.insert(0, 0)
        return modes


def _log_weight_factors(params: MaserParams, n: int) -> np.ndarray:
    """log of the stationary product factors for k = 1..n."""
    k = np.arange(1, n + 1, dtype=np.float64)
    factors = params.nu / (params.nu + 1.0) + (
        params.n_ex / (params.nu + 1.0)
    ) * np.sin(params.phi * np.sqrt(k)) ** 2 / k
    with np.errstate(divide="ignore"):
        return np.log(factors)


def _tail_ratio_bound(params: MaserParams, n: int) -> float:
    """Upper bound on the product factor for every k > n.

    Uses sin^2(x) <= min(1, x^2):  factor(k) <= nu/(nu+1)
    + (n_ex/(nu+1)) * min(1/k, phi^2).
    """
    return params.nu / (params.nu + 1.0) + (params.n_ex / (params.nu + 1.0)) * min(
        1.0 / (n + 1.0), params.phi * params.phi
    )


def stationary_distribution(
    params: MaserParams,
    tail_tol: float = 1e-12,
    hard_cap: int = 4096,
    n_max: int | None = None,
) -> StationaryDistribution:
    """Stationary photon-number distribution on a self-chosen truncation.

    The unnormalized weights are the product of birth/death rate ratios;
    they are accumulated in log space because they span hundreds of orders
    of magnitude at large pump rates.  The truncation level is the
    smallest ``n`` at which a geometric bound on the discarded mass falls
    below ``tail_tol`` (the factors beyond ``n`` are bounded by a ratio
    strictly below one).  Forcing ``n_max`` skips the automatic choice.

    Raises
    ------
    TruncationError
        If ``hard_cap`` is reached before the tail bound is met.
    """
    if n_max is None:
        if not (0.0 < tail_tol <= 1e-6):
            raise ValueError(f"tail_tol must be in (0, 1e-6], got {tail_tol}")
        n = 64
        log_tail_tol = math.log(tail_tol)
        while True:
            n = min(n, hard_cap)
            logw = np.concatenate(([0.0], np.cumsum(_log_weight_factors(params, n))))
            rho = _tail_ratio_bound(params, n)
            if rho < 1.0:
                m = logw.max()
                log_total = m + math.log(np.exp(logw - m).sum())
                log_tail = logw[-1] + math.log(rho / (1.0 - rho))
                if log_tail - log_total < log_tail_tol:
                    # walk back to the smallest admissible level
                    n = _smallest_truncation(params, logw, log_total, log_tail_tol)
                    logw = logw[: n + 1]
                    break
            if n == hard_cap:
                raise TruncationError(
                    f"tail bound not met below hard cap {hard_cap} "
                    f"(phi={params.phi}, n_ex={params.n_ex}, nu={params.nu})"
                )
            n = min(2 * n, hard_cap)
    else:
        logw = np.concatenate(([0.0], np.cumsum(_log_weight_factors(params, n_max))))
        n = n_max

    w = np.exp(logw - logw.max())
    probs = w / w.sum()
    rho = _tail_ratio_bound(params, n)
    tail = probs[-1] * rho / (1.0 - rho) if rho < 1.0 else float("nan")
    mean = float(np.arange(n + 1) @ probs)
    return StationaryDistribution(probs=probs, n_max=n, tail_bound=float(tail), mean_photon=mean)


def _smallest_truncation(params, logw, log_total, log_tail_tol) -> int:
    """Smallest n with geometric tail bound below tol, given log weights."""
    n_hi = len(logw) - 1
    for n in range(1, n_hi + 1):
        rho = _tail_ratio_bound(params, n)
        if rho >= 1.0:
            continue
        log_tail = logw[n] + math.log(rho / (1.0 - rho))
        if log_tail - log_total < log_tail_tol:
            return n
    return n_hi
