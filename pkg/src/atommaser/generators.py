"""Tridiagonal operators on the truncated photon-number algebra.

Three generator families are built here: the Markov generator of the
birth-death process, the tilted generator carrying counting fields on the
four detection channels, and the two-point generator whose exponential
gives the overlap of output states at two nearby Rabi angles.

Conventions.  ``function`` picture operators act on sequences
``x(k)`` (observables); ``measure`` picture operators are their exact
transposes and act on probability vectors.  The truncated chain is
reflecting at ``n_max``: the birth gain of the top row and its matching
loss term are both dropped, so the Markov generator keeps exact zero row
sums.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .model import (
    MaserParams,
    rate_phi_derivative_tables,
    rate_phi_second_derivative_tables,
    rate_tables,
)

__all__ = [
    "TridiagonalOperator",
    "TiltVector",
    "markov_generator",
    "tilted_generator",
    "two_point_generator",
    "channel_gain_operators",
    "phi_derivative_generator",
    "phi_second_derivative_generator",
]

CHANNELS = ("ground", "excited", "emit", "absorb")


@dataclass(frozen=True)
class TridiagonalOperator:
    """Real tridiagonal operator with a picture tag.

    ``sub[i]`` is entry (i+1, i), ``diag[i]`` entry (i, i), ``sup[i]``
    entry (i, i+1).
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    convention: str = "function"

    def __post_init__(self):
        if len(self.sub) != self.dim - 1 or len(self.sup) != self.dim - 1:
            raise ValueError("off-diagonal length must be dim - 1")
        if self.convention not in ("function", "measure"):
            raise ValueError(f"unknown convention {self.convention!r}")

    @property
    def dim(self) -> int:
        return len(self.diag)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        out = self.diag * x
        out[1:] += self.sub * x[:-1]
        out[:-1] += self.sup * x[1:]
        return out

    def transpose(self) -> "TridiagonalOperator":
        tag = "measure" if self.convention == "function" else "function"
        return TridiagonalOperator(
            sub=self.sup.copy(), diag=self.diag.copy(), sup=self.sub.copy(), convention=tag
        )

    def to_dense(self) -> np.ndarray:
        return (
            np.diag(self.diag)
            + np.diag(self.sup, 1)
            + np.diag(self.sub, -1)
        )

    def row_sums(self) -> np.ndarray:
        out = self.diag.copy()
        out[1:] += self.sub
        out[:-1] += self.sup
        return out

    def shifted(self, c: float) -> "TridiagonalOperator":
        """Operator plus ``c`` times the identity."""
        return replace(self, diag=self.diag + c)

    def scale_norm(self) -> float:
        """Cheap infinity-norm bound used for step-size heuristics."""
        return float(
            np.abs(self.diag).max()
            + (np.abs(self.sub).max() if self.dim > 1 else 0.0)
            + (np.abs(self.sup).max() if self.dim > 1 else 0.0)
        )


@dataclass(frozen=True)
class TiltVector:
    """Real counting fields, one per detection channel."""

    ground: float = 0.0
    excited: float = 0.0
    emit: float = 0.0
    absorb: float = 0.0

    def __post_init__(self):
        for name in CHANNELS:
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"tilt {name} must be finite")

    def as_tuple(self):
        return (self.ground, self.excited, self.emit, self.absorb)

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.as_tuple())


def markov_generator(params: MaserParams, n_max: int) -> TridiagonalOperator:
    """Function-picture birth-death generator, reflecting at ``n_max``.

    (Qf)(k) = q_up(k) (f(k+1) - f(k)) + q_down(k) (f(k-1) - f(k)).
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ground, _, emit, absorb = rate_tables(params, n_max)
    up = ground + absorb
    up[-1] = 0.0
    sup = up[:-1]
    sub = emit[1:]
    diag = -(up + emit)
    return TridiagonalOperator(sub=sub, diag=diag, sup=sup, convention="function")


def tilted_generator(
    params: MaserParams, n_max: int, tilt: TiltVector
) -> TridiagonalOperator:
    """Markov generator with gain terms scaled by exp(s_channel).

    The excited channel never changes the state, so its tilt appears only
    as the self-loop term (e^s - 1) excited(k) on the diagonal; at zero
    tilt the operator equals :func:`markov_generator` entrywise.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    ground, excited, emit, absorb = rate_tables(params, n_max)
    ground = ground.copy()
    absorb = absorb.copy()
    ground[-1] = 0.0
    absorb[-1] = 0.0
    sup = np.exp(tilt.ground) * ground[:-1] + np.exp(tilt.absorb) * absorb[:-1]
    sub = np.exp(tilt.emit) * emit[1:]
    diag = (np.expm1(tilt.excited)) * excited - (ground + absorb + emit)
    return TridiagonalOperator(sub=sub, diag=diag, sup=sup, convention="function")


def two_point_generator(
    params0: MaserParams, u: float, v: float, t: float, n_max: int
) -> TridiagonalOperator:
    """Generator of the two-angle semigroup for the output-state overlap.

    Acts on sequences x as, with phi_w = phi0 + w/sqrt(t) and
    theta_w(k) = phi_w sqrt(k+1):

        (Mx)(k) = [n_ex sin theta_u(k) sin theta_v(k) + nu (k+1)] x(k+1)
                  + (nu+1) k x(k-1)
                  + [n_ex cos theta_u(k) cos theta_v(k) - (q_u(k)+q_v(k))/2] x(k)

    where q_w(k) is the total loss rate at angle phi_w.  At u = v the
    operator reduces entrywise to the Markov generator at phi_u.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    root_t = np.sqrt(t)
    pu = MaserParams(params0.phi + u / root_t, params0.n_ex, params0.nu)
    pv = MaserParams(params0.phi + v / root_t, params0.n_ex, params0.nu)
    k = np.arange(n_max + 1, dtype=np.float64)
    rk = np.sqrt(k + 1.0)
    thu = pu.phi * rk
    thv = pv.phi * rk
    nu = params0.nu
    n_ex = params0.n_ex
    absorb = nu * (k + 1.0)
    emit = (nu + 1.0) * k

    gain_up = n_ex * np.sin(thu) * np.sin(thv) + absorb
    # per-angle loss, with the top-row birth loss dropped (reflecting)
    loss_u = n_ex * np.sin(thu) ** 2 + absorb + emit + n_ex * np.cos(thu) ** 2 * 0.0
    loss_v = n_ex * np.sin(thv) ** 2 + absorb + emit
    loss_u = n_ex * np.sin(thu) ** 2 + absorb + emit
    loss_u[-1] = emit[-1]
    loss_v[-1] = emit[-1]
    sup = gain_up[:-1]
    sub = emit[1:]
    diag = n_ex * np.cos(thu) * np.cos(thv) - 0.5 * (loss_u + loss_v) - n_ex * np.cos(thu) * np.cos(thv) * 0.0
    diag = n_ex * np.cos(thu) * np.cos(thv) - 0.5 * (loss_u + loss_v)
    # the excited sandwich is the cos*cos gain; its loss n_ex is inside q_w
    diag -= n_ex - n_ex  # no-op, kept for clarity of the cancellation
    return TridiagonalOperator(sub=sub, diag=diag, sup=sup, convention="function")


def channel_gain_operators(params: MaserParams, n_max: int) -> dict:
    """Per-channel gain matrices M_c with the reflecting convention.

    These are the tilt derivatives of the tilted generator at zero tilt:
    d/ds_c L_s |_{s=0} = M_c.
    """
    ground, excited, emit, absorb = rate_tables(params, n_max)
    zero_off = np.zeros(n_max)
    zero_diag = np.zeros(n_max + 1)
    g = ground.copy()
    a = absorb.copy()
    g[-1] = 0.0
    a[-1] = 0.0
    return {
        "ground": TridiagonalOperator(zero_off.copy(), zero_diag.copy(), g[:-1], "function"),
        "absorb": TridiagonalOperator(zero_off.copy(), zero_diag.copy(), a[:-1], "function"),
        "emit": TridiagonalOperator(emit[1:].copy(), zero_diag.copy(), zero_off.copy(), "function"),
        "excited": TridiagonalOperator(zero_off.copy(), excited.copy(), zero_off.copy(), "function"),
    }


def phi_derivative_generator(params: MaserParams, n_max: int) -> TridiagonalOperator:
    """Entrywise d/dphi of the Markov generator (bath rates drop out)."""
    dg, _, _, _ = rate_phi_derivative_tables(params, n_max)
    dg = dg.copy()
    dg[-1] = 0.0
    return TridiagonalOperator(
        sub=np.zeros(n_max), diag=-dg, sup=dg[:-1], convention="function"
    )


def phi_second_derivative_generator(params: MaserParams, n_max: int) -> TridiagonalOperator:
    """Entrywise d^2/dphi^2 of the Markov generator."""
    d2g, _, _, _ = rate_phi_second_derivative_tables(params, n_max)
    d2g = d2g.copy()
    d2g[-1] = 0.0
    return TridiagonalOperator(
        sub=np.zeros(n_max), diag=-d2g, sup=d2g[:-1], convention="function"
    )
