"""JSON serialization for states.

Format::

    {"registers": [{"name": "A", "dim": 2}, ...],
     "amplitudes": [[re, im], ...]}            # pure states
     "matrix": [[re, im], ...]                 # density matrices, row-major

Numbers are written with 17 significant digits so that a reload is
bit-identical.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Union

import numpy as np

from .layout import RegisterLayout
from .states import DensityMatrix, PureState


def _fmt(x: float) -> str:
    x = float(x)
    if not np.isfinite(x):
        raise ValueError("cannot serialize non-finite value")
    return format(x, ".17g")


def _pairs(values: np.ndarray) -> str:
    values = np.asarray(values, dtype=complex).reshape(-1)
    return "[" + ",".join(f"[{_fmt(z.real)},{_fmt(z.imag)}]" for z in values) + "]"


def state_to_json(state: Union[PureState, DensityMatrix]) -> str:
    registers = json.dumps(state.layout.to_dict())
    if isinstance(state, PureState):
        return f'{{"registers":{registers},"amplitudes":{_pairs(state.amplitudes)}}}\n'
    head = f'{{"registers":{registers},"matrix":{_pairs(state.matrix)}'
    if state.rank is not None:
        head += f',"rank":{int(state.rank)}'
    return head + "}\n"


def _complex_array(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    arr = arr.reshape(-1, 2)
    return arr[:, 0] + 1j * arr[:, 1]


def state_from_dict(data: dict) -> Union[PureState, DensityMatrix]:
    try:
        layout = RegisterLayout((r["name"], r["dim"]) for r in data["registers"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed registers field: {exc}") from exc
    if "amplitudes" in data:
        return PureState(layout, _complex_array(data["amplitudes"]))
    if "matrix" in data:
        d = layout.total_dim
        return DensityMatrix(layout, _complex_array(data["matrix"]).reshape(d, d), rank=data.get("rank"))
    raise ValueError("state file needs an 'amplitudes' or 'matrix' field")


def state_from_json(text: str) -> Union[PureState, DensityMatrix]:
    return state_from_dict(json.loads(text))


def atomic_write_text(path: Union[str, os.PathLike], text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_state(state: Union[PureState, DensityMatrix], path) -> None:
    atomic_write_text(path, state_to_json(state))


def load_state(path) -> Union[PureState, DensityMatrix]:
    with open(path, encoding="utf-8") as fh:
        return state_from_json(fh.read())
