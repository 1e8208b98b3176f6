"""Seeded Monte Carlo over fading models: per-scheme gaps to the cutset proxy.

Each trial draws one static channel from its own RNG substream
``SeedSequence(seed, spawn_key=(trial,))``, so results do not depend on how
trials are spread across worker processes.
"""
from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import ScalarDiamond, cutset_proxy, gap_constants_scalar, nnc_rate, pdf_rate
from .errors import SimulationAssertionError
from .strategies import AfMode, af_rate, best_relay_rate

SCHEMES = ("pdf", "af_opt", "af_naive", "best_relay", "best_of", "nnc")
DEFAULT_SCHEMES = ("pdf", "af_opt", "af_naive", "best_relay", "best_of")
DISTRIBUTIONS = ("rayleigh", "shadow")
GAP_TOL = 1e-9


@dataclass(frozen=True)
class SimConfig:
    n: int = 10
    snr: float = 1000.0
    dist: str = "rayleigh"
    shadow_std_db: float = 7.0
    trials: int = 10_000
    seed: int = 0
    schemes: tuple[str, ...] = DEFAULT_SCHEMES
    workers: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not (self.snr > 0 and math.isfinite(self.snr)):
            raise ValueError("snr must be positive and finite")
        if self.dist not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.dist!r}; choose from {DISTRIBUTIONS}")
        if self.shadow_std_db < 0:
            raise ValueError("shadow_std_db must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        unknown = [s for s in self.schemes if s not in SCHEMES]
        if unknown:
            raise ValueError(f"unknown schemes {unknown}; choose from {SCHEMES}")
        object.__setattr__(self, "schemes", tuple(dict.fromkeys(self.schemes)))
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class GapSamples:
    """Gap samples in bits, one array per scheme, ordered by trial index."""

    config: SimConfig
    gaps: dict[str, np.ndarray] = field(default_factory=dict)

    def summary(self, scheme: str) -> dict:
        g = self.gaps[scheme]
        return {
            "count": int(g.size),
            "min": float(np.min(g)),
            "max": float(np.max(g)),
            "mean": float(np.mean(g)),
            "median": float(np.median(g)),
        }

    def histogram(self, scheme: str, bin_width: float = 0.25) -> tuple[np.ndarray, np.ndarray]:
        """Counts over bins of ``bin_width`` bits from 0 to ``ceil(max gap)``.

        Gaps within rounding of zero land in the first bin.
        """
        if bin_width <= 0:
            raise ValueError("bin_width must be positive")
        g = np.clip(self.gaps[scheme], 0.0, None)
        top = max(math.ceil(float(np.max(g))), bin_width)
        n_bins = max(1, math.ceil(round(top / bin_width, 9)))
        edges = np.arange(n_bins + 1) * bin_width
        counts, _ = np.histogram(g, bins=edges)
        return edges, counts


def sample_channel(dist: str, n: int, snr: float, rng: np.random.Generator,
                   shadow_std_db: float = 7.0) -> ScalarDiamond:
    """Draw one network.

    ``rayleigh``: all ``2n`` coefficients i.i.d. CN(0, 1).
    ``shadow``: each coefficient is ``10 ** (-X / 10)`` with
    ``X ~ N(0, shadow_std_db^2)``, kept real and positive.
    """
    if dist == "rayleigh":
        z = rng.standard_normal((2, 2, n))
        h = (z[0] + 1j * z[1]) / math.sqrt(2.0)
    elif dist == "shadow":
        x = rng.normal(0.0, shadow_std_db, size=(2, n))
        h = 10.0 ** (-x / 10.0)
    else:
        raise ValueError(f"unknown distribution {dist!r}; choose from {DISTRIBUTIONS}")
    return ScalarDiamond(h[0], h[1], snr)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _scheme_rates(net: ScalarDiamond, schemes) -> dict[str, float]:
    rates: dict[str, float] = {}
    need = set(schemes) | {"pdf"}
    if "best_of" in need:
        need |= {"af_opt", "af_naive", "best_relay"}
    if "pdf" in need:
        rates["pdf"] = pdf_rate(net)
    if "af_opt" in need:
        rates["af_opt"] = af_rate(net, AfMode.OPTIMIZED).rate
    if "af_naive" in need:
        rates["af_naive"] = af_rate(net, AfMode.NAIVE).rate
    if "best_relay" in need:
        rates["best_relay"] = best_relay_rate(net)
    if "best_of" in need:
        rates["best_of"] = max(rates["pdf"], rates["af_opt"], rates["af_naive"], rates["best_relay"])
    if "nnc" in need:
        rates["nnc"] = nnc_rate(net)
    return rates


def evaluate_trial(cfg: SimConfig, trial: int) -> dict[str, float]:
    """Gaps for one trial; raises on any violated hard invariant."""
    net = sample_channel(cfg.dist, cfg.n, cfg.snr, trial_rng(cfg.seed, trial), cfg.shadow_std_db)
    bound = cutset_proxy(net)
    rates = _scheme_rates(net, cfg.schemes)
    gaps = {k: bound - r for k, r in rates.items()}
    limits = gap_constants_scalar(cfg.n)

    def fail(msg):
        raise SimulationAssertionError(f"trial {trial}: {msg}", instance=net.to_json())

    for k, gap in gaps.items():
        if gap < -GAP_TOL:
            fail(f"{k} rate exceeds the cutset proxy by {-gap:.3g} bits")
    if gaps["pdf"] > limits.g2 + GAP_TOL:
        fail(f"pdf gap {gaps['pdf']:.12g} exceeds 2 log2 N = {limits.g2:.12g}")
    if "nnc" in gaps and gaps["nnc"] > limits.g1 + GAP_TOL:
        fail(f"nnc gap {gaps['nnc']:.12g} exceeds {limits.g1:.12g}")
    return {k: gaps[k] for k in cfg.schemes}


def _run_chunk(cfg: SimConfig, start: int, stop: int) -> np.ndarray:
    out = np.empty((stop - start, len(cfg.schemes)))
    for row, trial in enumerate(range(start, stop)):
        gaps = evaluate_trial(cfg, trial)
        out[row] = [gaps[s] for s in cfg.schemes]
    return out


def run_monte_carlo(cfg: SimConfig) -> GapSamples:
    """Evaluate ``cfg.trials`` sampled channels, optionally across processes."""
    if cfg.workers == 1 or cfg.trials < 2:
        table = _run_chunk(cfg, 0, cfg.trials)
    else:
        n_chunks = min(cfg.trials, 4 * cfg.workers)
        bounds = np.linspace(0, cfg.trials, n_chunks + 1).astype(int)
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = [pool.submit(_run_chunk, cfg, int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:])]
            table = np.vstack([f.result() for f in futures])
    return GapSamples(cfg, {s: table[:, j].copy() for j, s in enumerate(cfg.schemes)})


def summary_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".summary.json")


def export(gs: GapSamples, path, bin_width: float = 0.25) -> None:
    """Write raw samples to ``path`` as CSV and stats to ``<stem>.summary.json``."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["scheme", "gap_bits"])
        for scheme, gaps in gs.gaps.items():
            for g in gaps:
                writer.writerow([scheme, repr(float(g))])

    schemes = {}
    for scheme in gs.gaps:
        edges, counts = gs.histogram(scheme, bin_width)
        schemes[scheme] = gs.summary(scheme) | {
            "histogram": {"bin_edges": edges.tolist(), "counts": counts.tolist()}
        }
    cfg = asdict(gs.config)
    cfg.pop("workers")
    cfg["schemes"] = list(cfg["schemes"])
    doc = {"config": cfg, "bin_width": bin_width, "schemes": schemes}
    with open(summary_path(path), "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_csv(path) -> dict[str, np.ndarray]:
    """Parse a CSV written by :func:`export` back into per-scheme arrays."""
    out: dict[str, list[float]] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["scheme", "gap_bits"]:
            raise ValueError(f"unexpected header {header}")
        for scheme, value in reader:
            out.setdefault(scheme, []).append(float(value))
    return {k: np.array(v) for k, v in out.items()}


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
