"""Set functions on subsets of the relays and polymatroid intersection.

Subsets are bitmasks: bit ``i - 1`` set means relay ``i`` is a member.
Values are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .errors import DiamondError, SizeError

MAX_STORED_N = 20
MAX_CHECK_N = 12
MAX_LP_N = 10

AXIOM_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


def mask_to_subset(mask: int) -> tuple[int, ...]:
    """1-based members of ``mask``."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def subset_to_mask(subset) -> int:
    mask = 0
    for i in subset:
        if i < 1:
            raise ValueError(f"elements are 1-based, got {i}")
        mask |= 1 << (i - 1)
    return mask


@dataclass(frozen=True)
class SetFunction:
    """Real-valued function on all ``2**n`` subsets of ``{1..n}``."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ground set must be non-empty")
        if self.n > MAX_STORED_N:
            raise SizeError(f"n={self.n} exceeds the storage limit of {MAX_STORED_N}")
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValueError("set function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def __getitem__(self, mask: int) -> float:
        return float(self.values[mask])

    def of(self, subset) -> float:
        """Value at a subset given as 1-based elements."""
        return self[subset_to_mask(subset)]


@dataclass(frozen=True)
class RateVector:
    rates: np.ndarray

    def __post_init__(self):
        rates = np.array(self.rates, dtype=np.float64).reshape(-1)
        if np.any(rates < 0) or not np.all(np.isfinite(rates)):
            raise ValueError("rates must be finite and nonnegative")
        rates.setflags(write=False)
        object.__setattr__(self, "rates", rates)

    @property
    def n(self) -> int:
        return int(self.rates.size)

    def sum_rate(self) -> float:
        return float(np.sum(self.rates))


class PolymatroidCheck(NamedTuple):
    """Outcome of :func:`check_polymatroid`.

    ``axiom`` is ``None`` or one of ``"normalized"``, ``"non-decreasing"``,
    ``"submodular"``; ``witness`` holds the two offending subsets (1-based).
    """

    ok: bool
    axiom: str | None = None
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    def __bool__(self):
        return self.ok


class CutValue(NamedTuple):
    value: float
    mask: int

    @property
    def subset(self) -> tuple[int, ...]:
        return mask_to_subset(self.mask)


def _log_modular(gains, scale: float) -> SetFunction:
    gains = np.asarray(gains, dtype=np.float64).reshape(-1)
    n = gains.size
    if n > MAX_STORED_N:
        raise SizeError(f"n={n} exceeds the storage limit of {MAX_STORED_N}")
    if np.any(gains < 0) or not np.all(np.isfinite(gains)):
        raise ValueError("gains must be finite and nonnegative")
    return SetFunction(n, np.log2(1.0 + scale * kernels.subset_sums(gains)))


def mac_set_function(gains, snr: float) -> SetFunction:
    """``f(S) = log2(1 + snr * sum_{i in S} gains_i)``: the Gaussian MAC region."""
    return _log_modular(gains, snr)


def bc_lower_set_function(gains, snr: float) -> SetFunction:
    """Dual-MAC inner bound on the BC region with power ``snr / n`` per relay."""
    n = np.asarray(gains).size
    return _log_modular(gains, snr / n)


_AXIOMS = {1: "normalized", 2: "non-decreasing", 3: "submodular"}


def check_polymatroid(sf: SetFunction, tol: float = AXIOM_TOL) -> PolymatroidCheck:
    """Exhaustively test normalisation, monotonicity and submodularity.

    Submodularity is checked in its local form
    ``f(S+i) + f(S+j) >= f(S+i+j) + f(S)``. ``tol`` is scaled by
    ``max(1, max|f|)`` so large log-det values do not trip on rounding.
    """
    if sf.n > MAX_CHECK_N:
        raise SizeError(f"exhaustive check limited to n <= {MAX_CHECK_N}, got {sf.n}")
    scaled = tol * max(1.0, float(np.max(np.abs(sf.values))))
    code, a, b = kernels.polymatroid_violation(sf.values, sf.n, scaled)
    if code == 0:
        return PolymatroidCheck(True)
    return PolymatroidCheck(False, _AXIOMS[code], (mask_to_subset(a), mask_to_subset(b)))


def _same_ground(f: SetFunction, g: SetFunction) -> None:
    if f.n != g.n:
        raise ValueError(f"ground sets differ: {f.n} vs {g.n}")


def edmonds_max_sum(f: SetFunction, g: SetFunction) -> CutValue:
    """``max{sum R : R in P(f) and P(g)} = min_L f(L) + g(complement of L)``.

    Returns the value and the minimising ``L`` (smallest bitmask on ties).
    """
    _same_ground(f, g)
    # g[full ^ mask] == g.values reversed
    totals = f.values + g.values[::-1]
    mask = int(np.argmin(totals))
    return CutValue(float(totals[mask]), mask)


def _constraint_matrix(n: int) -> np.ndarray:
    masks = np.arange(1, 1 << n)
    return ((masks[:, None] >> np.arange(n)[None, :]) & 1).astype(np.float64)


def find_max_rate_point(f: SetFunction, g: SetFunction) -> RateVector:
    """A max-sum-rate point of ``P(f) & P(g)``, recovered by linear programming."""
    _same_ground(f, g)
    n = f.n
    if n > MAX_LP_N:
        raise SizeError(f"rate-point recovery limited to n <= {MAX_LP_N}, got {n}")
    a = _constraint_matrix(n)
    res = linprog(
        c=-np.ones(n),
        A_ub=np.vstack([a, a]),
        b_ub=np.concatenate([f.values[1:], g.values[1:]]),
        bounds=[(0, None)] * n,
        method="highs-ds",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise DiamondError(f"rate-point LP failed: {res.message}")
    return RateVector(np.maximum(res.x, 0.0))


def membership(sf: SetFunction, r: RateVector, tol: float = MEMBERSHIP_TOL) -> bool:
    """True iff ``r`` satisfies every subset constraint of ``P(sf)``."""
    if r.n != sf.n:
        raise ValueError(f"rate vector has {r.n} entries, set function has {sf.n}")
    if np.any(r.rates < -tol):
        return False
    return bool(np.all(kernels.subset_sums(r.rates) <= sf.values + tol))
