"""Named parameter sets: initialization, gradients, and binary serialization."""

from __future__ import annotations

import hashlib
import json
import logging
import struct
from pathlib import Path

import numpy as np

from ..errors import DimensionError, SchemaError, TruncatedPayloadError
from .autodiff import Tensor

log = logging.getLogger(__name__)

PARAMS_FORMAT = "imlw-params-v1"


class ParameterSet:
    """Ordered name -> Tensor mapping; shapes are fixed after construction."""

    def __init__(self, arrays: dict[str, np.ndarray]):
        self._params: dict[str, Tensor] = {
            name: Tensor(np.asarray(a, dtype=np.float64), requires_grad=True)
            for name, a in arrays.items()
        }

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __iter__(self):
        return iter(self._params)

    def names(self) -> list[str]:
        return list(self._params)

    def items(self):
        return self._params.items()

    def num_values(self) -> int:
        return sum(t.value.size for t in self._params.values())

    def zero_grads(self) -> None:
        for t in self._params.values():
            t.grad = None

    def values_copy(self) -> dict[str, np.ndarray]:
        return {name: t.value.copy() for name, t in self._params.items()}

    def load_values(self, arrays: dict[str, np.ndarray]) -> None:
        for name, t in self._params.items():
            a = np.asarray(arrays[name], dtype=np.float64)
            if a.shape != t.value.shape:
                raise DimensionError(f"parameter {name}: shape {a.shape} != {t.value.shape}")
            t.value = a.copy()

    def copy(self) -> "ParameterSet":
        return ParameterSet(self.values_copy())


def gradients(loss: Tensor, params: ParameterSet) -> dict[str, np.ndarray]:
    """Exact reverse-mode derivatives of the recorded graph; off-graph params get zeros."""
    params.zero_grads()
    loss.backward()
    grads = {}
    for name, t in params.items():
        if t.grad is None:
            log.warning("parameter %s is not on the recorded graph; gradient is zero", name)
            grads[name] = np.zeros_like(t.value)
        else:
            grads[name] = t.grad
    return grads


def fan_in_init(rng: np.random.Generator, shape: tuple[int, ...],
                zero: bool = False) -> np.ndarray:
    if zero:
        return np.zeros(shape)
    fan_in = shape[0] if len(shape) > 1 else shape[0]
    if len(shape) == 1:
        return np.zeros(shape)  # biases start at zero
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def config_hash(config: dict) -> str:
    return hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest()[:16]


# --- serialization -----------------------------------------------------------

def params_to_bytes(params: ParameterSet, cfg_hash: str = "") -> bytes:
    entries = []
    payload = bytearray()
    for name, t in params.items():
        a = np.ascontiguousarray(t.value, dtype="<f8")
        entries.append({"name": name, "shape": list(a.shape), "offset": len(payload)})
        payload += a.tobytes()
    header = json.dumps({
        "format": PARAMS_FORMAT,
        "config_hash": cfg_hash,
        "entries": entries,
        "payload_bytes": len(payload),
    }).encode()
    return struct.pack("<Q", len(header)) + header + bytes(payload)


def params_from_bytes(raw: bytes, origin: str = "<bytes>") -> tuple[ParameterSet, str]:
    if len(raw) < 8:
        raise TruncatedPayloadError(f"{origin}: too short for a header")
    (hlen,) = struct.unpack_from("<Q", raw, 0)
    if 8 + hlen > len(raw):
        raise TruncatedPayloadError(f"{origin}: header extends past end of payload")
    header = json.loads(raw[8:8 + hlen].decode())
    if header.get("format") != PARAMS_FORMAT:
        raise SchemaError(f"{origin}: expected format {PARAMS_FORMAT}, got {header.get('format')}")
    payload = raw[8 + hlen:]
    if len(payload) < header["payload_bytes"]:
        raise TruncatedPayloadError(f"{origin}: payload truncated")
    arrays = {}
    for entry in header["entries"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        arrays[entry["name"]] = np.frombuffer(
            payload[start:start + 8 * count], dtype="<f8").reshape(shape).copy()
    return ParameterSet(arrays), header.get("config_hash", "")


def save_params(params: ParameterSet, path: str | Path, cfg_hash: str = "") -> None:
    Path(path).write_bytes(params_to_bytes(params, cfg_hash))


def load_params(path: str | Path) -> tuple[ParameterSet, str]:
    return params_from_bytes(Path(path).read_bytes(), origin=str(path))
