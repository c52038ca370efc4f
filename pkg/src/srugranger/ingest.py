"""Load external datasets and ground-truth graphs from CSV.

The accepted schema is exactly what :mod:`srugranger.datagen` emits: a header
row of component labels, one row per time step, and (for multi-sequence data
such as gene-expression trajectory collections) a leading integer sequence-id
column whose contiguous runs delimit the sequences.  Errors name the 1-based
file line and column of the offending cell.

Converting foreign distributions (MAT-files, TSVs with wall-clock time
columns) to this schema is an external, documented step; see
docs/data_conversion.md.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .datagen import GroundTruthAdjacency, TimeSeriesDataset, standardize


class IngestError(ValueError):
    """Malformed dataset file; message carries the file location."""


@dataclass
class DatasetManifest:
    """Where and how to read one series file (plus optional truth file)."""

    series_path: str
    truth_path: str | None = None
    has_header: bool = True
    sequence_column: str | None = None
    standardize: bool = False


def _read_rows(path) -> list[list[str]]:
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = [row for row in csv.reader(fh) if row]
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise IngestError(f"{path}: file is empty")
    return rows


def _parse_cell(cell: str, path, line: int, col: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise IngestError(
            f"{path}: non-numeric cell {cell!r} at row {line}, column {col}") from None


def load_series(manifest: DatasetManifest) -> TimeSeriesDataset:
    """Parse a series CSV into a dataset, splitting on the sequence column.

    Rows sharing a contiguous sequence-id value become one sequence, in file
    order; without a sequence column the whole file is a single sequence.
    Ragged rows, non-numeric cells and empty files are rejected with their
    location.
    """
    path = manifest.series_path
    rows = _read_rows(path)

    labels = None
    start = 0
    seq_col = None
    if manifest.has_header:
        header = [h.strip() for h in rows[0]]
        start = 1
        if manifest.sequence_column is not None:
            if manifest.sequence_column not in header:
                raise IngestError(
                    f"{path}: sequence column {manifest.sequence_column!r} "
                    f"not found in header {header}")
            seq_col = header.index(manifest.sequence_column)
        labels = [h for k, h in enumerate(header) if k != seq_col]
    elif manifest.sequence_column is not None:
        try:
            seq_col = int(manifest.sequence_column)
        except ValueError:
            raise IngestError(
                "sequence_column must be an integer index when the file "
                f"has no header, got {manifest.sequence_column!r}") from None

    data_rows = rows[start:]
    if not data_rows:
        raise IngestError(f"{path}: no data rows after header")
    width = len(data_rows[0])
    n = width - (1 if seq_col is not None else 0)
    if n < 1:
        raise IngestError(f"{path}: no value columns")

    values = np.empty((len(data_rows), n))
    seq_ids: list[float] = []
    for r, row in enumerate(data_rows):
        line = start + r + 1
        if len(row) != width:
            raise IngestError(
                f"{path}: ragged row at row {line}: expected {width} cells, "
                f"got {len(row)}")
        c = 0
        for k, cell in enumerate(row):
            v = _parse_cell(cell, path, line, k + 1)
            if k == seq_col:
                seq_ids.append(v)
            else:
                values[r, c] = v
                c += 1

    if seq_col is None:
        sequences = [values]
    else:
        sequences = []
        ids = np.asarray(seq_ids)
        boundaries = [0] + [k for k in range(1, len(ids)) if ids[k] != ids[k - 1]] + [len(ids)]
        for a, b in zip(boundaries[:-1], boundaries[1:]):
            sequences.append(values[a:b])

    for k, s in enumerate(sequences):
        if s.shape[0] < 2:
            raise IngestError(f"{path}: sequence {k} has fewer than 2 samples")
    if not np.all(np.isfinite(values)):
        bad = np.argwhere(~np.isfinite(values))[0]
        raise IngestError(
            f"{path}: non-finite value at data row {int(bad[0]) + start + 1}, "
            f"column {int(bad[1]) + 1}")

    ds = TimeSeriesDataset(sequences, n=n, labels=labels)
    if manifest.standardize:
        ds, _, _ = standardize(ds)
    return ds


def load_adjacency(path, n: int, transpose: bool = False) -> GroundTruthAdjacency:
    """Parse an n x n 0/1 CSV into an adjacency matrix.

    The file is expected in the "(i, j) = 1 iff series j causes series i"
    convention; pass ``transpose=True`` for sources using the opposite one.
    """
    rows = _read_rows(path)
    if len(rows) != n:
        raise IngestError(f"{path}: expected {n} rows, got {len(rows)}")
    edges = np.zeros((n, n), dtype=np.int64)
    for r, row in enumerate(rows):
        if len(row) != n:
            raise IngestError(
                f"{path}: expected {n} columns at row {r + 1}, got {len(row)}")
        for c, cell in enumerate(row):
            v = _parse_cell(cell, path, r + 1, c + 1)
            if v not in (0.0, 1.0):
                raise IngestError(
                    f"{path}: entry {cell!r} at row {r + 1}, column {c + 1} "
                    "is not 0 or 1")
            edges[r, c] = int(v)
    if transpose:
        edges = edges.T
    return GroundTruthAdjacency(edges)


def load_score_matrix(path, n: int | None = None) -> np.ndarray:
    """Parse a rectangular numeric CSV (no header) into a float matrix."""
    rows = _read_rows(path)
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for r, row in enumerate(rows):
        if len(row) != width:
            raise IngestError(
                f"{path}: ragged row at row {r + 1}: expected {width} cells, "
                f"got {len(row)}")
        for c, cell in enumerate(row):
            out[r, c] = _parse_cell(cell, path, r + 1, c + 1)
    if n is not None and out.shape != (n, n):
        raise IngestError(f"{path}: expected shape ({n}, {n}), got {out.shape}")
    return out
