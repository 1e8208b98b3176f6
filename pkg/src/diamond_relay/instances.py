"""JSON instance files.

Scalar::

    {"snr": 1.0, "h_bc": [[re, im], ...], "h_mac": [[re, im], ...]}

MIMO::

    {"snr": 1.0, "n_s": 2, "n_d": 2,
     "relays": [{"n_i": 1, "H_bc": [[re, im], ...], "H_mac": [[re, im], ...]}]}

Matrices are row-major, either as a flat list of ``[re, im]`` pairs or as a
list of rows. ``H_bc`` is ``n_i x n_s`` and ``H_mac`` is ``n_d x n_i``.
"""
from __future__ import annotations

import json
import math
from numbers import Real

import numpy as np

from .core import ScalarDiamond
from .errors import InstanceParseError
from .mimo import MimoDiamond


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise InstanceParseError(f"{where}: expected a finite number, got {value!r}")
    return float(value)


def _positive_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise InstanceParseError(f"{where}: expected a positive integer, got {value!r}")
    return value


def _complex(value, where: str) -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise InstanceParseError(f"{where}: expected an [re, im] pair, got {value!r}")
    return complex(_number(value[0], f"{where}[0]"), _number(value[1], f"{where}[1]"))


def _vector(value, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise InstanceParseError(f"{where}: expected a non-empty list of [re, im] pairs")
    return np.array([_complex(v, f"{where}[{k}]") for k, v in enumerate(value)])


def _matrix(value, rows: int, cols: int, where: str) -> np.ndarray:
    if not isinstance(value, list):
        raise InstanceParseError(f"{where}: expected a matrix, got {type(value).__name__}")
    nested = len(value) > 0 and all(
        isinstance(r, list) and r and isinstance(r[0], list) for r in value
    )
    if nested:
        if len(value) != rows:
            raise InstanceParseError(f"{where}: expected {rows} rows, got {len(value)}")
        out = np.empty((rows, cols), dtype=np.complex128)
        for r, row in enumerate(value):
            if len(row) != cols:
                raise InstanceParseError(f"{where}[{r}]: expected {cols} entries, got {len(row)}")
            for c, z in enumerate(row):
                out[r, c] = _complex(z, f"{where}[{r}][{c}]")
        return out
    if len(value) != rows * cols:
        raise InstanceParseError(f"{where}: expected {rows}x{cols}={rows * cols} entries, got {len(value)}")
    flat = [_complex(z, f"{where}[{k}]") for k, z in enumerate(value)]
    return np.array(flat, dtype=np.complex128).reshape(rows, cols)


def parse_instance(doc) -> ScalarDiamond | MimoDiamond:
    """Build a network from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise InstanceParseError("instance: expected a JSON object")
    if "snr" not in doc:
        raise InstanceParseError("snr: missing")
    snr = _number(doc["snr"], "snr")
    if snr <= 0:
        raise InstanceParseError(f"snr: must be positive, got {snr}")

    if "relays" in doc:
        for key in ("n_s", "n_d"):
            if key not in doc:
                raise InstanceParseError(f"{key}: missing")
        n_s = _positive_int(doc["n_s"], "n_s")
        n_d = _positive_int(doc["n_d"], "n_d")
        relays = doc["relays"]
        if not isinstance(relays, list) or not relays:
            raise InstanceParseError("relays: expected a non-empty list")
        h_bc, h_mac = [], []
        for k, relay in enumerate(relays):
            where = f"relays[{k}]"
            if not isinstance(relay, dict):
                raise InstanceParseError(f"{where}: expected an object")
            for key in ("n_i", "H_bc", "H_mac"):
                if key not in relay:
                    raise InstanceParseError(f"{where}.{key}: missing")
            n_i = _positive_int(relay["n_i"], f"{where}.n_i")
            h_bc.append(_matrix(relay["H_bc"], n_i, n_s, f"{where}.H_bc"))
            h_mac.append(_matrix(relay["H_mac"], n_d, n_i, f"{where}.H_mac"))
        try:
            return MimoDiamond(n_s, n_d, tuple(h_bc), tuple(h_mac), snr)
        except ValueError as exc:
            raise InstanceParseError(f"relays: {exc}") from exc

    for key in ("h_bc", "h_mac"):
        if key not in doc:
            raise InstanceParseError(f"{key}: missing")
    h_bc = _vector(doc["h_bc"], "h_bc")
    h_mac = _vector(doc["h_mac"], "h_mac")
    if h_bc.size != h_mac.size:
        raise InstanceParseError(f"h_mac: expected {h_bc.size} entries to match h_bc, got {h_mac.size}")
    return ScalarDiamond(h_bc, h_mac, snr)


def load_instance(path) -> ScalarDiamond | MimoDiamond:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise InstanceParseError(f"{path}: {exc.strerror or exc}") from exc
    return parse_instance(doc)


def dump_instance(net: ScalarDiamond | MimoDiamond, path) -> None:
    with open(path, "w") as fh:
        json.dump(net.to_json(), fh, indent=2)
        fh.write("\n")
