import itertools
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diamond_relay import polymatroid
from diamond_relay.core import (
    ScalarDiamond,
    cutset_proxy,
    gap_constants_scalar,
    nnc_rate,
    pdf_rate,
)
from diamond_relay.errors import SizeError

from conftest import cn

LOG2_3 = math.log2(3)

# stored n=3 fixture; expected values from a 50-digit mpmath enumeration of all 8 cuts
FIXTURE_3 = ScalarDiamond(
    [0.8 - 0.3j, -1.2 + 0.5j, 0.1 + 0.9j], [0.4 + 0.4j, 1.5 - 0.2j, -0.7 - 0.6j], 10.0
)
FIXTURE_3_CUTSET = 5.0617761975866898766
FIXTURE_3_NNC = 3.18586654531133392
FIXTURE_3_PDF = 3.5607149544744789109


def symmetric(n=2, snr=1.0):
    return ScalarDiamond(np.ones(n), np.ones(n), snr)


def mp_cut(net, src_scale, dst_power, penalty=0):
    """Arbitrary-precision enumeration of every cut."""
    mpmath.mp.dps = 40
    n = net.n
    xs = [mpmath.mpf(abs(complex(h))) for h in net.h_bc]
    ys = [mpmath.mpf(abs(complex(h))) for h in net.h_mac]
    best = None
    for k in range(n + 1):
        for inside in itertools.combinations(range(n), k):
            s = sum((xs[i] ** 2 for i in range(n) if i not in inside), mpmath.mpf(0))
            if dst_power == "coherent":
                d = sum((ys[i] for i in inside), mpmath.mpf(0)) ** 2
            else:
                d = sum((ys[i] ** 2 for i in inside), mpmath.mpf(0))
            val = mpmath.log(1 + src_scale * s, 2) + mpmath.log(1 + net.snr * d, 2) - penalty * k
            best = val if best is None else min(best, val)
    return float(best)


def test_zero_network_is_zero(backend):
    net = ScalarDiamond([0], [0], 1.0)
    assert cutset_proxy(net) == 0.0
    assert nnc_rate(net) == 0.0
    assert pdf_rate(net) == 0.0


def test_symmetric_pair(backend):
    net = symmetric()
    assert cutset_proxy(net) == pytest.approx(LOG2_3, abs=1e-12)
    assert nnc_rate(net) == pytest.approx(LOG2_3 - 2 * math.log2(1.5), abs=1e-12)
    assert nnc_rate(net) == pytest.approx(0.41503749927884381855, abs=1e-12)
    assert pdf_rate(net) == pytest.approx(1.0, abs=1e-12)


def test_single_relay_pdf_equals_cutset(backend):
    net = ScalarDiamond([1], [1], 1.0)
    assert pdf_rate(net) == pytest.approx(1.0, abs=1e-12)
    assert cutset_proxy(net) == pytest.approx(pdf_rate(net), abs=1e-12)


def test_stored_fixture(backend):
    assert cutset_proxy(FIXTURE_3) == pytest.approx(FIXTURE_3_CUTSET, abs=1e-12)
    assert nnc_rate(FIXTURE_3) == pytest.approx(FIXTURE_3_NNC, abs=1e-12)
    assert pdf_rate(FIXTURE_3) == pytest.approx(FIXTURE_3_PDF, abs=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_against_mpmath_enumeration(seed):
    r = np.random.default_rng(seed)
    n = int(r.integers(1, 7))
    net = ScalarDiamond(cn(r, n), cn(r, n), 10 ** r.uniform(-1, 3))
    assert cutset_proxy(net) == pytest.approx(mp_cut(net, net.snr, "coherent"), abs=1e-9)
    nnc_ref = max(0.0, mp_cut(net, net.snr / (n + 1), "power", math.log2(1 + 1 / n)))
    assert nnc_rate(net) == pytest.approx(nnc_ref, abs=1e-9)
    assert pdf_rate(net) == pytest.approx(mp_cut(net, net.snr / n, "power"), abs=1e-9)


def test_gap_constants():
    assert gap_constants_scalar(10).g2 == pytest.approx(6.6438561897747246957, abs=1e-12)
    assert gap_constants_scalar(10).g1 == pytest.approx(7.7813597135246596041, abs=1e-12)
    assert gap_constants_scalar(1) == gap_constants_scalar(1).__class__(g1=2.0, g2=0.0)
    with pytest.raises(ValueError):
        gap_constants_scalar(0)


@pytest.mark.parametrize("n", range(1, 30))
def test_gap_constant_ordering(n):
    c = gap_constants_scalar(n)
    assert c.g1 >= c.g2 >= 0


def test_rayleigh_fixture_theorem_gaps(rng):
    net = ScalarDiamond(cn(rng, 10), cn(rng, 10), 1000.0)
    upper = cutset_proxy(net)
    assert upper - nnc_rate(net) <= gap_constants_scalar(10).g1 + 1e-9
    assert upper - pdf_rate(net) <= 2 * math.log2(10) + 1e-9


def test_pdf_delegates_to_edmonds(rng):
    net = ScalarDiamond(cn(rng, 8), cn(rng, 8), 50.0)
    f = polymatroid.mac_set_function(net.mac_gains, net.snr)
    g = polymatroid.bc_lower_set_function(net.bc_gains, net.snr)
    assert pdf_rate(net) == pytest.approx(polymatroid.edmonds_max_sum(f, g).value, abs=1e-12)


def test_pdf_streaming_path_matches(monkeypatch, rng):
    net = ScalarDiamond(cn(rng, 9), cn(rng, 9), 20.0)
    stored = pdf_rate(net)
    monkeypatch.setattr(polymatroid, "MAX_STORED_N", 4)
    assert pdf_rate(net) == pytest.approx(stored, abs=1e-12)


def test_size_guard():
    net = ScalarDiamond(np.ones(31), np.ones(31), 1.0)
    for fn in (cutset_proxy, nnc_rate, pdf_rate):
        with pytest.raises(SizeError):
            fn(net)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(h_bc=[], h_mac=[], snr=1.0),
        dict(h_bc=[1, 2], h_mac=[1], snr=1.0),
        dict(h_bc=[1], h_mac=[1], snr=0.0),
        dict(h_bc=[1], h_mac=[1], snr=math.inf),
        dict(h_bc=[math.nan], h_mac=[1], snr=1.0),
    ],
)
def test_invalid_instances(kwargs):
    with pytest.raises(ValueError):
        ScalarDiamond(**kwargs)


magnitudes = st.floats(min_value=0.0, max_value=30.0, allow_nan=False)
phases = st.floats(min_value=-math.pi, max_value=math.pi)


@st.composite
def networks(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    mags = draw(st.lists(magnitudes, min_size=2 * n, max_size=2 * n))
    ph = draw(st.lists(phases, min_size=2 * n, max_size=2 * n))
    h = np.array(mags) * np.exp(1j * np.array(ph))
    snr = 10 ** draw(st.floats(min_value=-2, max_value=4))
    return ScalarDiamond(h[:n], h[n:], snr)


@settings(max_examples=200, deadline=None)
@given(networks())
def test_ordering_and_theorems(net):
    upper = cutset_proxy(net)
    nnc, pdf = nnc_rate(net), pdf_rate(net)
    assert 0 <= nnc <= upper + 1e-9
    assert 0 <= pdf <= upper + 1e-9
    c = gap_constants_scalar(net.n)
    assert upper - nnc <= c.g1 + 1e-9
    assert upper - pdf <= c.g2 + 1e-9


@settings(max_examples=100, deadline=None)
@given(networks(), st.floats(min_value=1.0, max_value=10.0))
def test_monotone_in_gain_and_snr(net, factor):
    louder = ScalarDiamond(net.h_bc, net.h_mac, net.snr * factor)
    stronger = ScalarDiamond(net.h_bc * factor, net.h_mac * factor, net.snr)
    for fn in (cutset_proxy, nnc_rate, pdf_rate):
        base = fn(net)
        assert fn(louder) >= base - 1e-9
        assert fn(stronger) >= base - 1e-9
