"""Curve and lattice files.

Curve files are JSON objects ``{"dimension", "closed", "params", "samples"}``
with every number written to 17 significant digits, which round-trips
IEEE doubles exactly. ``closed: true`` holds a loop (no repeated closing
sample, params in [0, 1)); ``closed: false`` holds an arc (params end at 1).
"""

from __future__ import annotations

import json

import numpy as np

from .core import InputError, Lattice, SampledArc, SampledLoop
from .tantrix import TantrixSamples


def format_number(x: float) -> str:
    x = float(x)
    if not np.isfinite(x):
        raise InputError("cannot serialize a non-finite number")
    return format(x, ".17g")


def _array(values) -> str:
    return "[" + ", ".join(format_number(v) for v in values) + "]"


def dumps_curve(samples, params, closed: bool) -> str:
    samples = np.asarray(samples, dtype=float)
    rows = ",\n    ".join(_array(row) for row in samples)
    return (
        "{\n"
        f'  "dimension": {samples.shape[1]},\n'
        f'  "closed": {"true" if closed else "false"},\n'
        f'  "params": {_array(params)},\n'
        f'  "samples": [\n    {rows}\n  ]\n'
        "}\n"
    )


def write_curve(path, curve) -> None:
    if isinstance(curve, SampledArc):
        text = dumps_curve(curve.samples, curve.params, closed=False)
    elif isinstance(curve, SampledLoop):
        if np.any(curve.shift):
            raise InputError("loops with a lift shift are written as arcs")
        text = dumps_curve(curve.samples, curve.params, closed=True)
    elif isinstance(curve, TantrixSamples):
        text = dumps_curve(curve.dirs, curve.params, closed=True)
    else:
        raise TypeError(f"cannot write {type(curve).__name__}")
    with open(path, "w") as fh:
        fh.write(text)


def loads_curve(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"curve file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not {"dimension", "closed", "params", "samples"} <= data.keys():
        raise InputError("curve file needs dimension, closed, params and samples")
    samples = np.array(data["samples"], dtype=float)
    params = np.array(data["params"], dtype=float)
    if samples.ndim != 2 or samples.shape[1] != data["dimension"]:
        raise InputError("samples do not match the declared dimension")
    if not isinstance(data["closed"], bool):
        raise InputError("'closed' must be a boolean")
    return {"samples": samples, "params": params, "closed": data["closed"]}


def read_curve(path) -> dict:
    with open(path) as fh:
        return loads_curve(fh.read())


def read_loop(path) -> SampledLoop:
    """Read a curve file as a loop; arcs become loops in the quotient (shift = displacement)."""
    data = read_curve(path)
    if data["closed"]:
        return SampledLoop(data["samples"], data["params"])
    return SampledArc(data["samples"], data["params"]).as_loop()


def read_tantrix(path) -> TantrixSamples:
    data = read_curve(path)
    if not data["closed"]:
        raise InputError("a tantrix file must hold a closed curve")
    return TantrixSamples(data["samples"], data["params"])


def read_lattice(path) -> Lattice:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"lattice file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or not {"dimension", "generators"} <= data.keys():
        raise InputError("lattice file needs dimension and generators")
    return Lattice(np.array(data["generators"], dtype=float), dimension=int(data["dimension"]))


def write_lattice(path, lattice: Lattice) -> None:
    rows = ", ".join(_array(g) for g in lattice.generators)
    with open(path, "w") as fh:
        fh.write(f'{{"dimension": {lattice.dimension}, "generators": [{rows}]}}\n')
