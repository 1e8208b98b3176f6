import numpy as np
import pytest

from diamond_relay import kernels

BACKENDS = kernels.available_backends()


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    monkeypatch.setattr(kernels, "_impl", BACKENDS[request.param])
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def cn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
