"""Randomised property suites run by ``diamond-relay check``."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mimo, polymatroid
from .core import ScalarDiamond, cutset_proxy, gap_constants_scalar, nnc_rate, pdf_rate
from .sim import sample_channel

TOL = 1e-9


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""
    counterexample: dict | None = field(default=None)


def complex_gaussian(rng: np.random.Generator, *shape) -> np.ndarray:
    """i.i.d. CN(0, 1) entries."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def random_snr(rng: np.random.Generator, low_db=-10.0, high_db=40.0) -> float:
    return float(10.0 ** (rng.uniform(low_db, high_db) / 10.0))


def random_gains(rng: np.random.Generator, n: int) -> np.ndarray:
    """Nonnegative gains spread over several decades, some exactly zero."""
    g = rng.exponential(size=n) * 10.0 ** rng.uniform(-3, 3, size=n)
    g[rng.random(n) < 0.05] = 0.0
    return g


def random_mimo(rng: np.random.Generator, max_relays=4, max_antennas=3, snr=None, relays=None) -> mimo.MimoDiamond:
    n = relays or int(rng.integers(1, max_relays + 1))
    antennas = rng.integers(1, max_antennas + 1, size=n)
    m = int(antennas.sum())
    n_s = int(rng.integers(1, min(max_antennas, m) + 1))
    n_d = int(rng.integers(1, min(max_antennas, m) + 1))
    return mimo.MimoDiamond(
        n_s,
        n_d,
        tuple(complex_gaussian(rng, int(k), n_s) for k in antennas),
        tuple(complex_gaussian(rng, n_d, int(k)) for k in antennas),
        random_snr(rng) if snr is None else snr,
    )


def single_antenna_mimo(rng: np.random.Generator, n: int) -> mimo.MimoDiamond:
    net = ScalarDiamond(complex_gaussian(rng, n), complex_gaussian(rng, n), random_snr(rng))
    return mimo.MimoDiamond.from_scalar(net)


def polymatroid_suite(rng, trials=50, n=None) -> SuiteResult:
    sizes = [n] if n else range(1, 9)
    checked = 0
    for size in sizes:
        for _ in range(trials):
            snr = random_snr(rng)
            candidates = {
                "mac": polymatroid.mac_set_function(random_gains(rng, size), snr),
                "bc_lower": polymatroid.bc_lower_set_function(random_gains(rng, size), snr),
            }
            if size <= 8:
                net = random_mimo(rng, snr=snr, relays=size)
                candidates["mimo_mac"] = mimo.mimo_mac_set_function(net)
                candidates["mimo_bc_lower"] = mimo.mimo_bc_lower_set_function(net)
            for kind, sf in candidates.items():
                checked += 1
                res = polymatroid.check_polymatroid(sf)
                if not res:
                    return SuiteResult("polymatroid", False, checked,
                                       f"{kind} n={size} violates {res.axiom} at {res.witness}",
                                       {"values": sf.values.tolist()})
    return SuiteResult("polymatroid", True, checked, "normalized, non-decreasing, submodular")


def edmonds_suite(rng, trials=200, n=None) -> SuiteResult:
    sizes = [n] if n else range(2, 9)
    checked, worst = 0, 0.0
    for size in sizes:
        for _ in range(trials):
            snr = random_snr(rng)
            f = polymatroid.mac_set_function(random_gains(rng, size), snr)
            g = polymatroid.bc_lower_set_function(random_gains(rng, size), snr)
            combinatorial = polymatroid.edmonds_max_sum(f, g).value
            point = polymatroid.find_max_rate_point(f, g)
            err = abs(point.sum_rate() - combinatorial)
            worst = max(worst, err)
            checked += 1
            feasible = polymatroid.membership(f, point) and polymatroid.membership(g, point)
            if err > 1e-8 or not feasible:
                return SuiteResult("edmonds", False, checked,
                                   f"n={size}: LP {point.sum_rate():.12g} vs min-cut {combinatorial:.12g}, "
                                   f"feasible={feasible}",
                                   {"f": f.values.tolist(), "g": g.values.tolist()})
    return SuiteResult("edmonds", True, checked, f"max |LP - min cut| = {worst:.2e}")


def lemma1_gap(rng, n_t: int, n_r: int, power: float) -> float:
    """Waterfilling minus equal-power capacity for one random channel."""
    h = complex_gaussian(rng, n_r, n_t)
    lam = np.linalg.eigvalsh(h.conj().T @ h)
    lam = np.sort(np.clip(lam, 0.0, None))[::-1][: min(n_t, n_r)]
    c_wf = mimo.waterfill(lam, n_t * power).capacity
    c_ep = float(np.sum(np.log2(1.0 + power * lam)))
    return c_wf - c_ep


def lemma1_suite(rng, trials=10_000, n=None) -> SuiteResult:
    worst_margin = -math.inf
    for t in range(trials):
        n_t, n_r = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        power = random_snr(rng, -20, 30)
        gap = lemma1_gap(rng, n_t, n_r, power)
        bound = mimo.lemma1_bound(n_t, n_r)
        worst_margin = max(worst_margin, gap - bound)
        if gap > bound + TOL:
            return SuiteResult("lemma1", False, t + 1,
                               f"n_t={n_t} n_r={n_r} P={power:.6g}: gap {gap:.12g} > {bound:.12g}")
    return SuiteResult("lemma1", True, trials, f"max (gap - bound) = {worst_margin:.4f}")


def mimo_gaps_suite(rng, trials=1000, n=None) -> SuiteResult:
    for t in range(trials):
        net = random_mimo(rng, max_relays=n or 4)
        consts = mimo.mimo_gap_constants(net.n_s, net.n_d, net.antennas)
        upper = mimo.mimo_cutset_proxy(net)
        nnc_gap = upper - mimo.mimo_nnc_rate(net)
        pdf_gap = upper - mimo.mimo_pdf_rate(net)
        if nnc_gap > consts.g1 + TOL or pdf_gap > consts.g2 + TOL:
            return SuiteResult("mimo_gaps", False, t + 1,
                               f"nnc gap {nnc_gap:.6g} (G1 {consts.g1:.6g}), pdf gap {pdf_gap:.6g} (G2 {consts.g2:.6g})",
                               net.to_json())
    return SuiteResult("mimo_gaps", True, trials, "MIMO NNC and PDF gaps within G1, G2")


def reduction_suite(rng, trials=100, n=None) -> SuiteResult:
    for t in range(trials):
        net = single_antenna_mimo(rng, n or int(rng.integers(1, 9)))
        scalar = net.to_scalar()
        d_nnc = abs(mimo.mimo_nnc_rate(net) - nnc_rate(scalar))
        d_pdf = abs(mimo.mimo_pdf_rate(net) - pdf_rate(scalar))
        if d_nnc > 1e-12 or d_pdf > 1e-12:
            return SuiteResult("reduction", False, t + 1,
                               f"scalar/MIMO mismatch nnc {d_nnc:.3g}, pdf {d_pdf:.3g}", net.to_json())
    return SuiteResult("reduction", True, trials, "single-antenna MIMO matches scalar within 1e-12")


def theorems_suite(rng, trials=1000, n=None) -> SuiteResult:
    for t in range(trials):
        size = n or int(rng.integers(1, 13))
        dist = ("rayleigh", "shadow")[t % 2]
        net = sample_channel(dist, size, random_snr(rng), rng)
        consts = gap_constants_scalar(size)
        upper = cutset_proxy(net)
        nnc_gap, pdf_gap = upper - nnc_rate(net), upper - pdf_rate(net)
        if nnc_gap > consts.g1 + TOL or pdf_gap > consts.g2 + TOL or min(nnc_gap, pdf_gap) < -TOL:
            return SuiteResult("theorems", False, t + 1,
                               f"N={size}: nnc gap {nnc_gap:.6g}, pdf gap {pdf_gap:.6g}", net.to_json())
    return SuiteResult("theorems", True, trials, "scalar NNC and PDF gaps within G1, G2")


SUITES = {
    "polymatroid": (polymatroid_suite, 50),
    "edmonds": (edmonds_suite, 200),
    "lemma1": (lemma1_suite, 10_000),
    "mimo_gaps": (mimo_gaps_suite, 1000),
    "reduction": (reduction_suite, 100),
    "theorems": (theorems_suite, 1000),
}


def run_suite(name: str, seed: int = 0, trials: int | None = None, n: int | None = None) -> SuiteResult:
    func, default_trials = SUITES[name]
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(sorted(SUITES).index(name),)))
    return func(rng, trials or default_trials, n)
