"""Scalar (single-antenna) bounds and achievable rates.

All rates are in bits per channel use (log base 2). Noise variance is
normalised to one, so transmit power equals ``snr``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SizeError

MAX_CUT_RELAYS = 30


@dataclass(frozen=True)
class ScalarDiamond:
    """One instance of the N-relay Gaussian diamond network.

    Parameters
    ----------
    h_bc : array_like of complex, shape (n,)
        Source-to-relay coefficients ``h_is``.
    h_mac : array_like of complex, shape (n,)
        Relay-to-destination coefficients ``h_id``.
    snr : float
        ``P / sigma^2`` in linear scale.
    """

    h_bc: np.ndarray
    h_mac: np.ndarray
    snr: float

    def __post_init__(self):
        h_bc = np.array(self.h_bc, dtype=np.complex128).reshape(-1)
        h_mac = np.array(self.h_mac, dtype=np.complex128).reshape(-1)
        if h_bc.size < 1:
            raise ValueError("need at least one relay")
        if h_bc.shape != h_mac.shape:
            raise ValueError(f"h_bc has {h_bc.size} entries but h_mac has {h_mac.size}")
        if not (np.all(np.isfinite(h_bc)) and np.all(np.isfinite(h_mac))):
            raise ValueError("channel coefficients must be finite")
        snr = float(self.snr)
        if not (math.isfinite(snr) and snr > 0):
            raise ValueError(f"snr must be positive and finite, got {self.snr!r}")
        h_bc.setflags(write=False)
        h_mac.setflags(write=False)
        object.__setattr__(self, "h_bc", h_bc)
        object.__setattr__(self, "h_mac", h_mac)
        object.__setattr__(self, "snr", snr)

    @property
    def n(self) -> int:
        return int(self.h_bc.size)

    @property
    def bc_gains(self) -> np.ndarray:
        """``|h_is|^2`` per relay."""
        return np.abs(self.h_bc) ** 2

    @property
    def mac_gains(self) -> np.ndarray:
        """``|h_id|^2`` per relay."""
        return np.abs(self.h_mac) ** 2

    def to_json(self) -> dict:
        return {
            "snr": self.snr,
            "h_bc": [[float(z.real), float(z.imag)] for z in self.h_bc],
            "h_mac": [[float(z.real), float(z.imag)] for z in self.h_mac],
        }


@dataclass(frozen=True)
class GapConstants:
    """Worst-case gaps (bits) to the cutset proxy: ``g1`` for noisy network
    coding, ``g2`` for partial decode-and-forward."""

    g1: float
    g2: float


def _check_size(n: int) -> None:
    if n > MAX_CUT_RELAYS:
        raise SizeError(f"{n} relays exceeds the enumeration limit of {MAX_CUT_RELAYS}")


def cutset_proxy(net: ScalarDiamond) -> float:
    """Upper bound on the cutset bound with independent SIMO/MISO terms.

    ``min_L log2(1 + SNR sum_{i not in L} |h_is|^2)
    + log2(1 + SNR (sum_{i in L} |h_id|)^2)``; the MISO term keeps the
    coherent beamforming gain.
    """
    _check_size(net.n)
    value, _ = kernels.cut_minimum(
        net.bc_gains, np.abs(net.h_mac), net.snr, net.snr, coherent=True
    )
    return max(value, 0.0)


def nnc_rate(net: ScalarDiamond) -> float:
    """Noisy network coding rate with quantisation noise of variance ``N``.

    Coarse quantisation trades ``log2(N + 1)`` bits on the broadcast side for
    a description penalty of ``log2(1 + 1/N)`` per relay in the cut. Negative
    values from degenerate channels are clamped to zero.
    """
    _check_size(net.n)
    n = net.n
    value, _ = kernels.cut_minimum(
        net.bc_gains,
        net.mac_gains,
        net.snr / (n + 1),
        net.snr,
        coherent=False,
        penalty=math.log2(1.0 + 1.0 / n),
    )
    return max(value, 0.0)


def pdf_rate(net: ScalarDiamond) -> float:
    """Partial decode-and-forward rate.

    Max sum rate over the MAC region intersected with the equal-power-split
    polymatroid inside the BC region, i.e. ``min_L f(L) + g(complement L)``.
    """
    from . import polymatroid

    _check_size(net.n)
    if net.n <= polymatroid.MAX_STORED_N:
        f = polymatroid.mac_set_function(net.mac_gains, net.snr)
        g = polymatroid.bc_lower_set_function(net.bc_gains, net.snr)
        return max(polymatroid.edmonds_max_sum(f, g).value, 0.0)
    # too many relays to store both set functions: stream the same cut
    value, _ = kernels.cut_minimum(net.bc_gains, net.mac_gains, net.snr / net.n, net.snr)
    return max(value, 0.0)


def gap_constants_scalar(n: int) -> GapConstants:
    if n < 1:
        raise ValueError("n must be >= 1")
    return GapConstants(
        g1=math.log2(n + 1) + math.log2(n) + 1.0,
        g2=2.0 * math.log2(n),
    )
