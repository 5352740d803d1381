"""Series containers, file parsing, normalization, and deterministic JSON.

Two input formats are supported: labeled rows (one univariate series per
line, ``label<delim>v1<delim>v2...``) and matrix CSV (rows are timesteps,
columns are channels), plus manifests that pair matrix-CSV paths with labels.
JSON output goes through a deterministic writer that renders every float
with 17 significant digits so repeated runs are byte-identical.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDataset, InvalidInput, ParseError
from .validation import as_matrix

_STD_FLOOR = 1e-12
_DELIMITERS = {"tab": "\t", "comma": ","}


@dataclass(frozen=True)
class TimeSeries:
    """A T x d real-valued series with an identifier and optional class label."""

    id: str
    values: np.ndarray
    label: str | None = None

    def __post_init__(self):
        arr = as_matrix(self.values, name=f"series {self.id!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def length(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of series sharing the same dimensionality."""

    name: str
    series: tuple[TimeSeries, ...]

    def __post_init__(self):
        series = tuple(self.series)
        object.__setattr__(self, "series", series)
        dims = {s.dim for s in series}
        if len(dims) > 1:
            raise InvalidInput(f"dataset {self.name!r} mixes dimensionalities {sorted(dims)}")

    def __len__(self) -> int:
        return len(self.series)


def znormalize(series) -> TimeSeries:
    """Per channel: subtract the mean and divide by the population stdev.

    Channels with stdev below 1e-12 become all zeros instead of dividing.
    """
    if isinstance(series, TimeSeries):
        sid, label = series.id, series.label
    else:
        sid, label = "", None
    arr = as_matrix(series)
    mean = arr.mean(axis=0)
    std = arr.std(axis=0)
    out = np.zeros_like(arr)
    keep = std >= _STD_FLOOR
    out[:, keep] = (arr[:, keep] - mean[keep]) / std[keep]
    return TimeSeries(id=sid, values=out, label=label)


def _parse_float(token: str, line_no: int, path: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(
            f"{path}: non-numeric value {token!r} on line {line_no}", line=line_no
        ) from None


def parse_labeled_rows(path, delimiter: str = "tab") -> Dataset:
    """Parse a labeled-rows file: one univariate labeled series per line."""
    if delimiter not in _DELIMITERS:
        raise InvalidInput(f"delimiter must be 'tab' or 'comma', got {delimiter!r}")
    delim = _DELIMITERS[delimiter]
    base = os.path.basename(str(path))
    series = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = line.split(delim)
            if len(parts) < 2:
                raise ParseError(
                    f"{base}: line {line_no} has a label but no values", line=line_no
                )
            values = [_parse_float(p.strip(), line_no, base) for p in parts[1:]]
            series.append(
                TimeSeries(id=f"{base}:{line_no}", values=np.array(values), label=parts[0])
            )
    if not series:
        raise EmptyDataset(f"{base}: no series found")
    return Dataset(name=base, series=tuple(series))


def parse_matrix_csv(path) -> TimeSeries:
    """Parse a matrix CSV (rows = timesteps, columns = channels).

    A non-numeric first row is treated as a header and skipped.  Ragged rows
    raise ParseError with the offending line number.
    """
    base = os.path.basename(str(path))
    rows: list[list[float]] = []
    width = None
    header_allowed = True
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if header_allowed:
                header_allowed = False
                try:
                    rows.append([float(p) for p in parts])
                    width = len(parts)
                except ValueError:
                    pass  # non-numeric first row: header, skip it
                continue
            if width is None:
                rows.append([_parse_float(p, line_no, base) for p in parts])
                width = len(parts)
                continue
            if len(parts) != width:
                raise ParseError(
                    f"{base}: row on line {line_no} has {len(parts)} values, expected {width}",
                    line=line_no,
                )
            rows.append([_parse_float(p, line_no, base) for p in parts])
    if not rows:
        raise EmptyDataset(f"{base}: no rows found")
    return TimeSeries(id=base, values=np.array(rows))


def parse_manifest(path) -> Dataset:
    """Assemble a dataset from a manifest of ``csv_path,label`` lines.

    Relative paths resolve against the manifest's directory; a line without a
    comma yields an unlabeled series.
    """
    base = os.path.basename(str(path))
    root = os.path.dirname(os.path.abspath(str(path)))
    series = []
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.strip()
            if not line:
                continue
            csv_path, _, label = line.partition(",")
            label = label.strip() or None
            resolved = os.path.join(root, csv_path.strip())
            loaded = parse_matrix_csv(resolved)
            series.append(TimeSeries(id=loaded.id, values=loaded.values, label=label))
    if not series:
        raise EmptyDataset(f"{base}: empty manifest")
    return Dataset(name=base, series=tuple(series))


def write_matrix_csv(series, path) -> None:
    """Write a series as matrix CSV with 17-significant-digit floats."""
    arr = as_matrix(series)
    with open(path, "w", encoding="utf-8") as handle:
        for row in arr:
            handle.write(",".join(format_float(v) for v in row) + "\n")


def write_labeled_rows(dataset: Dataset, path, delimiter: str = "tab") -> None:
    """Write a univariate labeled dataset in rows format."""
    if delimiter not in _DELIMITERS:
        raise InvalidInput(f"delimiter must be 'tab' or 'comma', got {delimiter!r}")
    delim = _DELIMITERS[delimiter]
    with open(path, "w", encoding="utf-8") as handle:
        for s in dataset.series:
            if s.dim != 1:
                raise InvalidInput(f"rows format is univariate, series {s.id!r} has d={s.dim}")
            fields = [s.label if s.label is not None else ""]
            fields.extend(format_float(v) for v in s.values[:, 0])
            handle.write(delim.join(fields) + "\n")


def format_float(value) -> str:
    """Render a float with 17 significant digits (bit-faithful round trips)."""
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInput(f"cannot serialize non-finite value {value!r}")
    text = format(value, ".17g")
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def dump_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats via format_float."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True or obj is False:
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            f"{pad}  {json.dumps(str(key), ensure_ascii=False)}: {dump_json(val, indent + 2)}"
            for key, val in obj.items()
        )
        return "{\n" + inner + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)) or isinstance(obj, np.ndarray):
        items = list(obj)
        if not items:
            return "[]"
        simple = all(
            isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool)
            for x in items
        )
        if simple:
            return "[" + ", ".join(dump_json(x) for x in items) + "]"
        inner = ",\n".join(f"{pad}  {dump_json(x, indent + 2)}" for x in items)
        return "[\n" + inner + "\n" + pad + "]"
    raise InvalidInput(f"cannot serialize object of type {type(obj).__name__}")
