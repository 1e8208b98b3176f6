import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from diamond_relay.core import ScalarDiamond, cutset_proxy, pdf_rate
from diamond_relay.strategies import (
    AfMode,
    PowerSplit,
    af_rate,
    bc_superposition_rates,
    best_of,
    best_relay_rate,
)

from conftest import cn

A20 = 2.0**20


def af_effective_snr(net, beta):
    """End-to-end SNR for arbitrary complex relay gains, from the signal model."""
    signal = abs(np.sum(net.h_mac * beta * net.h_bc)) ** 2
    noise = 1.0 + np.sum(np.abs(net.h_mac * beta) ** 2)
    return net.snr * signal / noise


def af_oracle(net, starts=12, seed=0):
    """Multi-start bounded quasi-Newton over real amplitudes with aligned phases."""
    r = np.random.default_rng(seed)
    u, w = np.abs(net.h_bc), np.abs(net.h_mac)
    bmax = np.sqrt(net.snr / (u * u * net.snr + 1))

    def neg(c):
        return -((w * bmax * u) @ c) ** 2 / (1 + ((w * bmax) ** 2) @ (c * c))

    inits = [np.ones(net.n)] + [np.eye(net.n)[i] for i in range(net.n)]
    inits += [r.random(net.n) for _ in range(starts)]
    best = min(minimize(neg, x0, bounds=[(0, 1)] * net.n, method="L-BFGS-B").fun for x0 in inits)
    return math.log2(1 - net.snr * best)


def test_best_relay_examples():
    assert best_relay_rate(ScalarDiamond(np.zeros(3), np.zeros(3), 5.0)) == 0.0
    assert best_relay_rate(ScalarDiamond([1, 1], [1, 1], 1.0)) == pytest.approx(1.0, abs=1e-12)
    a = 1024.0
    net = ScalarDiamond(np.sqrt([a**3, a**2, a]), np.sqrt([a, a, a]), 1.0)
    assert best_relay_rate(net) == pytest.approx(10.001408194392808389, abs=1e-12)


def test_af_single_relay_closed_form():
    sol = af_rate(ScalarDiamond([1], [1], 1.0), "naive")
    assert sol.rate == pytest.approx(math.log2(4 / 3), abs=1e-12)
    assert abs(sol.scalings[0]) ** 2 == pytest.approx(0.5, abs=1e-15)


def test_af_zero_channels():
    net = ScalarDiamond(np.zeros(4), np.zeros(4), 10.0)
    for mode in AfMode:
        sol = af_rate(net, mode)
        assert sol.rate == 0.0 and np.all(sol.scalings == 0)


def test_af_symmetric_beats_pdf():
    net = ScalarDiamond(np.ones(10), np.ones(10), 1000.0)
    upper = cutset_proxy(net)
    assert upper - af_rate(net).rate <= upper - pdf_rate(net)


@pytest.mark.parametrize("seed", range(8))
def test_af_optimum_matches_numeric_oracle(seed):
    r = np.random.default_rng(seed)
    n = int(r.integers(1, 8))
    # shadowing-like spread makes partial-power solutions common
    h = 10 ** (-r.normal(0, 7, size=(2, n)) / 10) * np.exp(2j * np.pi * r.random((2, n)))
    net = ScalarDiamond(h[0], h[1], 10 ** r.uniform(0, 3))
    sol = af_rate(net)
    assert sol.rate >= af_oracle(net) - 1e-7
    assert sol.rate == pytest.approx(math.log2(1 + af_effective_snr(net, sol.scalings)), abs=1e-12)


def test_af_two_relay_grid_oracle():
    net = ScalarDiamond([3.0, 0.05], [0.2, 4.0], 100.0)
    grid = np.linspace(0, 1, 2001)
    u, w = np.abs(net.h_bc), np.abs(net.h_mac)
    bmax = np.sqrt(net.snr / (u * u * net.snr + 1))
    best = 0.0
    for c1 in grid:
        c = np.stack([np.full_like(grid, c1), grid])
        val = net.snr * ((w * bmax * u) @ c) ** 2 / (1 + ((w * bmax) ** 2) @ (c * c))
        best = max(best, val.max())
    assert af_rate(net).rate >= math.log2(1 + best) - 1e-9
    assert af_rate(net).rate == pytest.approx(math.log2(1 + best), abs=1e-4)


def test_af_power_constraint(rng):
    net = ScalarDiamond(cn(rng, 6), cn(rng, 6), 300.0)
    for mode in AfMode:
        beta = af_rate(net, mode).scalings
        assert np.all(np.abs(beta) ** 2 * (net.bc_gains * net.snr + 1) <= net.snr * (1 + 1e-12))


def test_naive_runs_full_power(rng):
    net = ScalarDiamond(cn(rng, 5), cn(rng, 5), 10.0)
    beta = af_rate(net, "naive").scalings
    assert np.abs(beta) ** 2 * (net.bc_gains * net.snr + 1) == pytest.approx(np.full(5, net.snr))


def test_superposition_first_split():
    a = A20
    split = PowerSplit([1 / a**2, 1 / a, 1 - 1 / a - 1 / a**2])
    r = bc_superposition_rates([a**3, a**2, a], 1.0, split).rates
    assert r == pytest.approx([20.0, 19.0, 19.0], abs=1e-4)


def test_superposition_improved_split():
    a, n = A20, 3
    p = [i / a ** (n - i) for i in range(1, n)]
    split = PowerSplit(p + [1 - sum(p)])
    r = bc_superposition_rates([a**3, a**2, a], 1.0, split).rates
    assert r[:2] == pytest.approx([20.0, 20.0], abs=1e-3)
    assert r[2] == pytest.approx(20.0 - math.log2(3), abs=1e-3)


def test_superposition_all_power_on_strongest():
    r = bc_superposition_rates([9.0, 4.0, 1.0], 2.0, PowerSplit([1, 0, 0])).rates
    assert r == pytest.approx([math.log2(19.0), 0, 0], abs=1e-15)


def test_superposition_unsorted_input_keeps_caller_order():
    sorted_r = bc_superposition_rates([9.0, 4.0, 1.0], 3.0, [0.1, 0.3, 0.6]).rates
    shuffled = bc_superposition_rates([1.0, 9.0, 4.0], 3.0, [0.6, 0.1, 0.3]).rates
    assert shuffled == pytest.approx(sorted_r[[2, 0, 1]], abs=1e-15)


def test_superposition_symmetric_equal_split():
    r = bc_superposition_rates(np.ones(4), 10.0, np.full(4, 0.25)).rates
    # equal gains: decoding order is by index, so only the sum is symmetric
    assert r.sum() == pytest.approx(math.log2(11.0), abs=1e-12)


def test_power_split_validation():
    with pytest.raises(ValueError):
        PowerSplit([0.6, 0.6])
    with pytest.raises(ValueError):
        PowerSplit([-0.1, 0.5])
    with pytest.raises(ValueError):
        bc_superposition_rates([1, 2], 1.0, [0.5])


def test_best_of_examples():
    assert best_of(ScalarDiamond(np.zeros(2), np.zeros(2), 1.0)) == 0.0
    assert best_of(ScalarDiamond([1, 1], [1, 1], 1.0)) >= 1.0


@st.composite
def networks(draw):
    n = draw(st.integers(1, 6))
    vals = draw(st.lists(st.floats(-3, 3), min_size=4 * n, max_size=4 * n))
    v = np.array(vals).reshape(4, n)
    h = 10 ** v[:2] * np.exp(1j * v[2:])
    return ScalarDiamond(h[0], h[1], 10 ** draw(st.floats(-1, 4)))


@settings(max_examples=150, deadline=None)
@given(networks())
def test_strategy_invariants(net):
    upper = cutset_proxy(net)
    opt, naive = af_rate(net, "optimized").rate, af_rate(net, "naive").rate
    assert opt >= naive - 1e-9
    for rate in (opt, naive, best_relay_rate(net), best_of(net)):
        assert 0 <= rate <= upper + 1e-9
    assert best_of(net) >= max(opt, naive, best_relay_rate(net), pdf_rate(net))


@settings(max_examples=60, deadline=None)
@given(networks(), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_phase_invariance(net, a, b):
    rotated = ScalarDiamond(net.h_bc * np.exp(1j * a), net.h_mac * np.exp(1j * b), net.snr)
    assert best_relay_rate(rotated) == pytest.approx(best_relay_rate(net), abs=1e-12)
    assert pdf_rate(rotated) == pytest.approx(pdf_rate(net), abs=1e-12)
    for mode in AfMode:
        assert af_rate(rotated, mode).rate == pytest.approx(af_rate(net, mode).rate, abs=1e-9)
