"""Text formats for tensor series and fitted models.

Series files look like::

    #LTAR-SERIES v1
    # ell=2 depth=3 count=2
    0.5,1,2
    3,4,5

    6,7,8
    9,10,11

Each observation is ``ell`` lines of ``depth`` comma-separated numbers, and
observations are separated by one blank line.  Models are JSON documents.
All floats are written with 17 significant digits, so values survive a
write/read cycle bit for bit.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

import numpy as np

from ltar.differencing import DifferenceOrder
from ltar.errors import FormatError
from ltar.model import LtarModel
from ltar.tensor import Tensor3, TensorSeries
from ltar.transforms import TransformKind

__all__ = [
    "format_series",
    "parse_series",
    "write_series",
    "read_series",
    "model_to_json",
    "model_from_json",
    "save_model",
    "load_model",
    "format_float",
]

SERIES_MAGIC = "#LTAR-SERIES v1"
MODEL_FORMAT_VERSION = 1
_HEADER = re.compile(r"# ell=(\d+) depth=(\d+) count=(\d+)")


def format_float(value) -> str:
    v = float(value)
    if not np.isfinite(v):
        raise ValueError(f"cannot serialise non-finite value {v}")
    return format(v, ".17g")


def format_series(series: TensorSeries) -> str:
    data = series.data
    n, ell, m = data.shape
    lines = [SERIES_MAGIC, f"# ell={ell} depth={m} count={n}"]
    for j in range(n):
        if j:
            lines.append("")
        for i in range(ell):
            lines.append(",".join(format_float(v) for v in data[j, i]))
    return "\n".join(lines) + "\n"


def _parse_row(text, lineno, depth):
    fields = text.split(",")
    if len(fields) != depth:
        raise FormatError(f"expected {depth} comma-separated values, found {len(fields)}", lineno)
    try:
        return [float(f) for f in fields]
    except ValueError:
        pass
    col = 1
    for f in fields:
        try:
            float(f)
        except ValueError:
            raise FormatError(f"invalid number {f!r}", lineno, col) from None
        col += len(f) + 1
    raise AssertionError("unreachable")


def parse_series(text: str) -> TensorSeries:
    """Parse the series format, reporting the 1-based line of any defect."""
    if "\r" in text:
        line = text[: text.index("\r")].count("\n") + 1
        raise FormatError("carriage return found; files must use LF line endings", line)
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    else:
        raise FormatError("file must end with a newline", len(lines))
    if not lines or lines[0] != SERIES_MAGIC:
        raise FormatError(f"missing magic line {SERIES_MAGIC!r}", 1)
    header = _HEADER.fullmatch(lines[1]) if len(lines) > 1 else None
    if header is None:
        raise FormatError("expected header '# ell=<ell> depth=<depth> count=<count>'", 2)
    ell, depth, count = (int(g) for g in header.groups())
    if min(ell, depth, count) < 1:
        raise FormatError("ell, depth and count must be positive", 2)

    data = np.empty((count, ell, depth))
    pos = 2
    for j in range(count):
        if j:
            if pos >= len(lines) or lines[pos] != "":
                raise FormatError(f"expected a blank line before observation {j + 1}", pos + 1)
            pos += 1
        for i in range(ell):
            if pos >= len(lines):
                raise FormatError(f"file ends inside observation {j + 1} (header says count={count})", pos)
            if lines[pos] == "":
                raise FormatError(f"observation {j + 1} has {i} rows, expected {ell}", pos + 1)
            data[j, i] = _parse_row(lines[pos], pos + 1, depth)
            pos += 1
    if pos != len(lines):
        raise FormatError(f"unexpected content after {count} observations", pos + 1)
    return TensorSeries(data)


def write_series(series: TensorSeries, path) -> None:
    Path(path).write_bytes(format_series(series).encode("utf-8"))


def read_series(path) -> TensorSeries:
    raw = Path(path).read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = raw[: exc.start].count(b"\n") + 1
        raise FormatError("file is not valid UTF-8", line) from None
    return parse_series(text)


def _flat(arr) -> list:
    # row-major within each frontal slice, slices in depth order
    return np.moveaxis(np.asarray(arr), -1, 0).ravel().tolist()


def _unflat(values, shape, what):
    arr = np.asarray(values, dtype=np.float64)
    rows, cols, depth = shape
    if arr.ndim != 1 or arr.size != rows * cols * depth:
        raise FormatError(f"{what} must hold {rows * cols * depth} numbers, got {arr.size}")
    return np.moveaxis(arr.reshape(depth, rows, cols), 0, -1)


def _json_array(values) -> str:
    return "[" + ", ".join(format_float(v) for v in values) + "]"


def model_to_json(model: LtarModel) -> str:
    """Serialise a model as a JSON document with 17-digit floats."""
    tails = [] if model.tail is None else [_json_array(_flat(obs.data[:, 0, :])) for obs in model.tail]
    fields = [
        ("format_version", str(MODEL_FORMAT_VERSION)),
        ("p", str(model.p)),
        ("d", str(model.d)),
        ("s", str(model.s)),
        ("transform", json.dumps(model.transform.value)),
        ("difference_order", json.dumps(model.difference_order.value)),
        ("ell", str(model.ell)),
        ("m", str(model.depth)),
        ("A", "[\n    " + ",\n    ".join(_json_array(_flat(a.data)) for a in model.A) + "\n  ]"),
        ("C", _json_array(_flat(model.C.data[:, 0, :]))),
        ("retained_tails", "[\n    " + ",\n    ".join(tails) + "\n  ]" if tails else "[]"),
    ]
    return "{\n" + ",\n".join(f'  "{k}": {v}' for k, v in fields) + "\n}\n"


def model_from_json(text: str) -> LtarModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise FormatError("model document must be a JSON object")
    required = ("format_version", "p", "d", "s", "transform", "ell", "m", "A", "C")
    missing = [k for k in required if k not in doc]
    if missing:
        raise FormatError(f"model document lacks fields: {', '.join(missing)}")
    if doc["format_version"] != MODEL_FORMAT_VERSION:
        raise FormatError(f"unsupported model format_version {doc['format_version']!r}")
    try:
        ell, m, p = int(doc["ell"]), int(doc["m"]), int(doc["p"])
        if len(doc["A"]) != p:
            raise FormatError(f"expected {p} lag tensors, found {len(doc['A'])}")
        A = tuple(Tensor3(_unflat(a, (ell, ell, m), f"A[{i}]")) for i, a in enumerate(doc["A"]))
        C = Tensor3(_unflat(doc["C"], (ell, 1, m), "C"))
        tails = doc.get("retained_tails") or []
        tail = TensorSeries([Tensor3(_unflat(t, (ell, 1, m), "retained tail")) for t in tails]) if tails else None
        return LtarModel(
            A=A,
            C=C,
            transform=TransformKind.parse(doc["transform"]),
            d=int(doc["d"]),
            s=int(doc["s"]),
            difference_order=DifferenceOrder.parse(doc.get("difference_order", "seasonal-then-lag")),
            tail=tail,
        )
    except FormatError:
        raise
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid model document: {exc}") from None


def save_model(model: LtarModel, path) -> None:
    Path(path).write_bytes(model_to_json(model).encode("utf-8"))


def load_model(path) -> LtarModel:
    return model_from_json(Path(path).read_text(encoding="utf-8"))
