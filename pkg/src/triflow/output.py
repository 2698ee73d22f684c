"""Deterministic file emission: metadata-headed CSV, JSON, and state files.

CSV layout: UTF-8, '#'-prefixed key=value metadata lines, one header row,
comma-separated values with 17 significant digits for floats.  Identical
inputs must produce identical bytes, so nothing time- or host-dependent
belongs in the metadata.
"""

from __future__ import annotations

import json
from typing import Mapping, Sequence

import numpy as np

from .linalg import DensityOperator


def format_value(value) -> str:
    """Lossless scalar rendering: floats at 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def table_bytes(columns: Mapping[str, np.ndarray], metadata: Mapping[str, object]) -> bytes:
    """Render a column table with metadata header to CSV bytes."""
    names = list(columns)
    arrays = [np.asarray(columns[name]) for name in names]
    length = len(arrays[0])
    if any(len(a) != length for a in arrays):
        raise ValueError("columns differ in length")
    lines = [f"# {key}={format_value(value)}" for key, value in metadata.items()]
    lines.append(",".join(names))
    for i in range(length):
        lines.append(",".join(format_value(a[i]) for a in arrays))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_table(path: str, columns: Mapping[str, np.ndarray], metadata: Mapping[str, object]) -> None:
    with open(path, "wb") as fh:
        fh.write(table_bytes(columns, metadata))


def parse_metadata(text: str) -> dict[str, str]:
    """Read the key=value metadata block back from CSV text."""
    out = {}
    for line in text.splitlines():
        if not line.startswith("#"):
            break
        body = line[1:].strip()
        key, sep, value = body.partition("=")
        if sep:
            out[key.strip()] = value.strip()
    return out


def read_table(path: str) -> tuple[dict[str, np.ndarray], dict[str, str]]:
    """Parse a CSV written by write_table back into columns and metadata."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    metadata = parse_metadata(text)
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    if not rows:
        raise ValueError(f"{path} has no table body")
    names = rows[0].split(",")
    data = np.array(
        [[float(cell) for cell in line.split(",")] for line in rows[1:]],
        dtype=float,
    )
    if data.size == 0:
        data = data.reshape(0, len(names))
    return {name: data[:, j] for j, name in enumerate(names)}, metadata


def json_bytes(payload) -> bytes:
    return (json.dumps(payload, indent=2) + "\n").encode("utf-8")


def write_json(path: str, payload) -> None:
    with open(path, "wb") as fh:
        fh.write(json_bytes(payload))


def write_state_file(path: str, state: DensityOperator) -> None:
    """JSON state file: subsystem dims plus row-major [re, im] entry pairs."""
    matrix = [
        [[float(z.real), float(z.imag)] for z in row]
        for row in state.matrix
    ]
    write_json(path, {"dims": list(state.dims), "matrix": matrix})


def read_state_file(path: str) -> DensityOperator:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        dims = [int(d) for d in payload["dims"]]
        rows = payload["matrix"]
        mat = np.array(
            [[complex(entry[0], entry[1]) for entry in row] for row in rows],
            dtype=complex,
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise ValueError(f"malformed state file {path}") from exc
    return DensityOperator(matrix=mat, dims=tuple(dims))


def column_subset(
    columns: Mapping[str, np.ndarray], names: Sequence[str]
) -> dict[str, np.ndarray]:
    return {name: columns[name] for name in names}
