"""Baseline relaying schemes and the superposition broadcast calculator."""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import ScalarDiamond, pdf_rate
from .polymatroid import RateVector

POWER_SPLIT_TOL = 1e-12


class AfMode(str, Enum):
    NAIVE = "naive"
    OPTIMIZED = "optimized"


@dataclass(frozen=True)
class AfSolution:
    """Amplify-and-forward operating point.

    ``scalings`` are the complex relay gains ``beta_i``; each satisfies
    ``|beta_i|^2 (|h_is|^2 snr + 1) <= snr``.
    """

    rate: float
    scalings: np.ndarray
    mode: AfMode


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of the source power given to each superposed codebook."""

    powers: np.ndarray

    def __post_init__(self):
        powers = np.array(self.powers, dtype=np.float64).reshape(-1)
        if np.any(powers < 0) or not np.all(np.isfinite(powers)):
            raise ValueError("power fractions must be finite and nonnegative")
        if powers.sum() > 1.0 + POWER_SPLIT_TOL:
            raise ValueError(f"power fractions sum to {powers.sum():.15g} > 1")
        powers.setflags(write=False)
        object.__setattr__(self, "powers", powers)


def best_relay_rate(net: ScalarDiamond) -> float:
    """Decode-and-forward through the single relay with the best bottleneck."""
    per_relay = np.minimum(np.log2(1.0 + net.snr * net.bc_gains), np.log2(1.0 + net.snr * net.mac_gains))
    return float(np.max(per_relay))


def _af_snr(a: np.ndarray, b: np.ndarray, c: np.ndarray, snr: float) -> float:
    num = float(np.dot(a, c)) ** 2
    return snr * num / (1.0 + float(np.dot(b, c * c)))


def _optimal_amplitudes(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Maximise ``(a.c)^2 / (1 + sum b c^2)`` over ``c`` in ``[0, 1]^n``.

    Stationarity gives ``c_i = min(1, t a_i / b_i)`` with one common ``t``,
    and scaling ``c`` up always helps, so some relay runs at full power. If
    the ``k`` relays with the largest ``a_i / b_i`` are saturated the fixed
    point is ``t = (1 + sum_K b) / sum_K a``; we try every ``k``.
    """
    active = np.flatnonzero(a > 0)
    c_best = np.zeros_like(a)
    if active.size == 0:
        return c_best
    ratio = a[active] / b[active]
    order = active[np.argsort(-ratio, kind="stable")]
    best = -1.0
    for k in range(1, order.size + 1):
        sat = order[:k]
        t = (1.0 + b[sat].sum()) / a[sat].sum()
        c = np.zeros_like(a)
        c[active] = np.minimum(1.0, t * a[active] / b[active])
        c[sat] = 1.0
        val = _af_snr(a, b, c, 1.0)
        if val > best:
            best, c_best = val, c
    return c_best


def af_rate(net: ScalarDiamond, mode: AfMode | str = AfMode.OPTIMIZED) -> AfSolution:
    """Amplify-and-forward with coherent phase alignment at the destination.

    Every relay rotates its observation by ``-arg(h_id h_is)`` (phase is
    free), so only amplitudes matter. ``naive`` runs all relays at full
    power; ``optimized`` picks amplitudes that maximise the end-to-end SNR.
    """
    mode = AfMode(mode)
    snr = net.snr
    u, w = np.abs(net.h_bc), np.abs(net.h_mac)
    beta_max = np.sqrt(snr / (u * u * snr + 1.0))
    a = w * beta_max * u
    b = (w * beta_max) ** 2
    phase = np.exp(-1j * (np.angle(net.h_mac) + np.angle(net.h_bc)))

    if not np.any(a > 0):
        return AfSolution(0.0, np.zeros(net.n, dtype=np.complex128), mode)

    c_naive = np.ones(net.n)
    if mode is AfMode.NAIVE:
        c = c_naive
    else:
        c = _optimal_amplitudes(a, b)
        # keep the full-power point as a floor against rounding
        if _af_snr(a, b, c_naive, snr) > _af_snr(a, b, c, snr):
            c = c_naive
    rate = math.log2(1.0 + _af_snr(a, b, c, snr))
    return AfSolution(rate, c * beta_max * phase, mode)


def bc_superposition_rates(gains_bc, snr: float, split: PowerSplit) -> RateVector:
    """Successive-cancellation rates of a superposition broadcast code.

    Relays are ranked by channel gain, strongest first. Relay ``i`` in that
    order cancels the codewords of every weaker relay and sees the codewords
    of stronger relays as noise:
    ``R_i = log2(1 + g_i snr P_i / (1 + g_i snr sum_{j<i} P_j))``.
    ``split.powers[i]`` belongs to relay ``i`` in the caller's order, and the
    rates come back in that order too.
    """
    gains = np.asarray(gains_bc, dtype=np.float64).reshape(-1)
    if not isinstance(split, PowerSplit):
        split = PowerSplit(split)
    if gains.size != split.powers.size:
        raise ValueError(f"{gains.size} gains but {split.powers.size} power fractions")
    if np.any(gains < 0):
        raise ValueError("gains must be nonnegative")
    order = np.argsort(-gains, kind="stable")
    g, p = gains[order], split.powers[order]
    stronger = np.concatenate([[0.0], np.cumsum(p)[:-1]])
    sorted_rates = np.log2(1.0 + g * snr * p / (1.0 + g * snr * stronger))
    rates = np.empty_like(sorted_rates)
    rates[order] = sorted_rates
    return RateVector(rates)


def best_of(net: ScalarDiamond) -> float:
    """Best rate among PDF, both AF variants and best relay."""
    return max(
        pdf_rate(net),
        af_rate(net, AfMode.OPTIMIZED).rate,
        af_rate(net, AfMode.NAIVE).rate,
        best_relay_rate(net),
    )
