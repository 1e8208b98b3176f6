"""Multi-antenna bounds: log-det capacities, waterfilling, cutset proxy,
NNC and PDF rates, and the antenna-dependent gap constants."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, polymatroid
from .core import GapConstants, ScalarDiamond
from .errors import SizeError

MAX_MIMO_RELAYS = 20
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class MimoDiamond:
    """Diamond network with multi-antenna nodes.

    ``h_bc[i]`` is ``H_is`` with shape ``(n_i, n_s)``; ``h_mac[i]`` is
    ``H_id`` with shape ``(n_d, n_i)``.
    """

    n_s: int
    n_d: int
    h_bc: tuple
    h_mac: tuple
    snr: float

    def __post_init__(self):
        n_s, n_d = int(self.n_s), int(self.n_d)
        if n_s < 1 or n_d < 1:
            raise ValueError("source and destination need at least one antenna")
        h_bc = tuple(np.array(h, dtype=np.complex128, ndmin=2) for h in self.h_bc)
        h_mac = tuple(np.array(h, dtype=np.complex128, ndmin=2) for h in self.h_mac)
        if len(h_bc) < 1 or len(h_bc) != len(h_mac):
            raise ValueError(f"need matching non-empty relay lists, got {len(h_bc)} and {len(h_mac)}")
        for i, (hs, hd) in enumerate(zip(h_bc, h_mac)):
            n_i = hs.shape[0]
            if n_i < 1 or hs.shape != (n_i, n_s):
                raise ValueError(f"relay {i}: H_bc has shape {hs.shape}, expected (n_i, {n_s})")
            if hd.shape != (n_d, n_i):
                raise ValueError(f"relay {i}: H_mac has shape {hd.shape}, expected ({n_d}, {n_i})")
            if not (np.all(np.isfinite(hs)) and np.all(np.isfinite(hd))):
                raise ValueError(f"relay {i}: channel entries must be finite")
            hs.setflags(write=False)
            hd.setflags(write=False)
        total = sum(h.shape[0] for h in h_bc)
        if n_s > total or n_d > total:
            raise ValueError(f"n_s={n_s} and n_d={n_d} must not exceed the {total} relay antennas")
        snr = float(self.snr)
        if not (math.isfinite(snr) and snr > 0):
            raise ValueError(f"snr must be positive and finite, got {self.snr!r}")
        object.__setattr__(self, "n_s", n_s)
        object.__setattr__(self, "n_d", n_d)
        object.__setattr__(self, "h_bc", h_bc)
        object.__setattr__(self, "h_mac", h_mac)
        object.__setattr__(self, "snr", snr)

    @classmethod
    def from_scalar(cls, net: ScalarDiamond) -> "MimoDiamond":
        return cls(
            1,
            1,
            tuple(np.array([[h]]) for h in net.h_bc),
            tuple(np.array([[h]]) for h in net.h_mac),
            net.snr,
        )

    @property
    def n(self) -> int:
        return len(self.h_bc)

    @property
    def antennas(self) -> tuple[int, ...]:
        return tuple(h.shape[0] for h in self.h_bc)

    @property
    def total_antennas(self) -> int:
        return sum(self.antennas)

    @property
    def n_a(self) -> int:
        return min(self.n_s, *self.antennas)

    @property
    def n_b(self) -> int:
        return min(self.n_d, *self.antennas)

    def to_scalar(self) -> ScalarDiamond:
        if self.n_s != 1 or self.n_d != 1 or any(k != 1 for k in self.antennas):
            raise ValueError("only single-antenna networks reduce to the scalar model")
        return ScalarDiamond(
            [h[0, 0] for h in self.h_bc], [h[0, 0] for h in self.h_mac], self.snr
        )

    def to_json(self) -> dict:
        def pairs(m):
            return [[float(z.real), float(z.imag)] for z in m.ravel()]

        return {
            "snr": self.snr,
            "n_s": self.n_s,
            "n_d": self.n_d,
            "relays": [
                {"n_i": int(hs.shape[0]), "H_bc": pairs(hs), "H_mac": pairs(hd)}
                for hs, hd in zip(self.h_bc, self.h_mac)
            ],
        }


@dataclass(frozen=True)
class WaterfillResult:
    allocation: np.ndarray
    water_level: float
    capacity: float


def _logdet_batch(grams: np.ndarray) -> np.ndarray:
    """``log2 det(I + G)`` for a stack of Hermitian PSD matrices."""
    eig = np.linalg.eigvalsh(grams)
    return np.sum(np.log1p(np.clip(eig, 0.0, None)), axis=-1) / _LN2


def logdet_rate(gram) -> float:
    """``log2 det(I + gram)`` through the Hermitian eigenvalues.

    Raises ``ValueError`` when ``gram`` is not Hermitian (within ``1e-9``) or
    has an eigenvalue below ``-1e-7``; both tolerances scale with the
    largest entry.
    """
    g = np.array(gram, dtype=np.complex128, ndmin=2)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {g.shape}")
    scale = max(1.0, float(np.max(np.abs(g))) if g.size else 1.0)
    if np.max(np.abs(g - g.conj().T), initial=0.0) > 1e-9 * scale:
        raise ValueError("matrix is not Hermitian")
    eig = np.linalg.eigvalsh(g)
    if eig.size and eig.min() < -1e-7 * scale:
        raise ValueError(f"matrix is not positive semidefinite (eigenvalue {eig.min():.3g})")
    return float(np.sum(np.log1p(np.clip(eig, 0.0, None))) / _LN2)


def waterfill(singular_values_sq, total_power: float, tol: float = 1e-12) -> WaterfillResult:
    """Optimal power over parallel modes with gains ``singular_values_sq``.

    The water level is bracketed by bisection; the active set it identifies
    then fixes the level in closed form so the budget is met to rounding.
    Zero-gain modes get no power. If every gain is zero the capacity is 0
    and the water level is infinite.
    """
    lam = np.asarray(singular_values_sq, dtype=np.float64).reshape(-1)
    if total_power <= 0 or not math.isfinite(total_power):
        raise ValueError(f"total power must be positive, got {total_power!r}")
    if np.any(lam < 0):
        raise ValueError("mode gains must be nonnegative")
    usable = lam > 0
    alloc = np.zeros_like(lam)
    if not usable.any():
        return WaterfillResult(alloc, math.inf, 0.0)
    inv = 1.0 / lam[usable]

    lo, hi = inv.min(), inv.min() + total_power
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        residual = np.maximum(mid - inv, 0.0).sum() - total_power
        if abs(residual) <= tol * max(1.0, total_power):
            break
        if residual > 0:
            hi = mid
        else:
            lo = mid
    active = mid > inv
    while True:
        level = (total_power + inv[active].sum()) / active.sum()
        still = active & (level > inv)
        if still.sum() == active.sum():
            break
        active = still
    sub = np.where(active, level - inv, 0.0)
    alloc[usable] = sub
    capacity = float(np.sum(np.log1p(alloc * lam)) / _LN2)
    return WaterfillResult(alloc, float(level), capacity)


def lemma1_bound(n_t: int, n_r: int) -> float:
    """Largest possible waterfilling gain over equal power allocation."""
    if n_t < 1 or n_r < 1:
        raise ValueError("antenna counts must be >= 1")
    n = min(n_t, n_r)
    return n * math.log2(1.0 + (n_t - 1) / n)


def _subset_gram_sums(grams: list[np.ndarray]) -> np.ndarray:
    """Stack of ``sum_{i in mask} grams[i]`` for every mask (ascending order)."""
    d = grams[0].shape[0]
    sums = np.zeros((1, d, d), dtype=np.complex128)
    for gm in grams:
        sums = np.concatenate([sums, sums + gm])
    return sums


def _check_size(net: MimoDiamond) -> None:
    if net.n > MAX_MIMO_RELAYS:
        raise SizeError(f"{net.n} relays exceeds the enumeration limit of {MAX_MIMO_RELAYS}")


def _bc_grams(net: MimoDiamond) -> list[np.ndarray]:
    return [h.conj().T @ h for h in net.h_bc]


def _mac_grams(net: MimoDiamond) -> list[np.ndarray]:
    return [h @ h.conj().T for h in net.h_mac]


def _source_set_values(net: MimoDiamond, scale: float) -> np.ndarray:
    return _logdet_batch(scale * _subset_gram_sums(_bc_grams(net)))


def _dest_set_values(net: MimoDiamond, per_relay_scale) -> np.ndarray:
    grams = [s * g for s, g in zip(per_relay_scale, _mac_grams(net))]
    return _logdet_batch(_subset_gram_sums(grams))


def antenna_correction(net: MimoDiamond) -> float:
    """Waterfilling-over-equal-power allowance added to the cutset proxy."""
    m = net.total_antennas
    return net.n_s * math.log2(1.0 + (net.n_s - 1) / net.n_a) + net.n_d * math.log2(
        1.0 + (m - 1) / net.n_b
    )


def mimo_cutset_proxy(net: MimoDiamond) -> float:
    """Upper bound on the MIMO cutset bound.

    ``min_L [log2det(I + snr/n_s sum_{not L} H_is^H H_is)
    + log2det(I + snr sum_{L} H_id H_id^H)]`` plus the waterfilling
    allowances of :func:`antenna_correction`.
    """
    _check_size(net)
    src = _source_set_values(net, net.snr / net.n_s)
    dst = _dest_set_values(net, [net.snr] * net.n)
    # src indexed by the complement: reversed order
    return float(np.min(src[::-1] + dst)) + antenna_correction(net)


def mimo_nnc_rate(net: MimoDiamond) -> float:
    """Noisy network coding with quantisation noise covariance ``M I``."""
    _check_size(net)
    m = net.total_antennas
    src = _source_set_values(net, net.snr / (net.n_s * (m + 1)))
    dst = _dest_set_values(net, [net.snr / k for k in net.antennas])
    ant = kernels.subset_sums(np.asarray(net.antennas, dtype=np.float64))
    penalty = ant * math.log2(1.0 + 1.0 / m)
    return max(float(np.min(src[::-1] + dst - penalty)), 0.0)


def mimo_mac_set_function(net: MimoDiamond) -> polymatroid.SetFunction:
    """``f(S) = log2det(I + sum_{i in S} snr/n_i H_id H_id^H)``."""
    _check_size(net)
    return polymatroid.SetFunction(net.n, _dest_set_values(net, [net.snr / k for k in net.antennas]))


def mimo_bc_lower_set_function(net: MimoDiamond) -> polymatroid.SetFunction:
    """``g(S) = log2det(I + snr/M sum_{i in S} H_is^H H_is)``."""
    _check_size(net)
    return polymatroid.SetFunction(net.n, _source_set_values(net, net.snr / net.total_antennas))


def mimo_pdf_rate(net: MimoDiamond) -> float:
    f = mimo_mac_set_function(net)
    g = mimo_bc_lower_set_function(net)
    return max(polymatroid.edmonds_max_sum(f, g).value, 0.0)


def mimo_gap_constants(n_s: int, n_d: int, antennas) -> GapConstants:
    antennas = [int(k) for k in antennas]
    if n_s < 1 or n_d < 1 or not antennas or min(antennas) < 1:
        raise ValueError("antenna counts must be >= 1")
    m = sum(antennas)
    n_a = min(n_s, *antennas)
    n_b = min(n_d, *antennas)
    shared = (
        n_s * math.log2(1.0 + (n_s - 1) / n_a)
        + n_d * math.log2(max(antennas))
        + n_d * math.log2(1.0 + (m - 1) / n_b)
    )
    return GapConstants(
        g1=n_s * math.log2(m + 1) + shared + 1.0,
        g2=n_s * math.log2(m) + shared,
    )
