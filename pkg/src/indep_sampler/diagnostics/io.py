"""
Dataset loaders and CSV writers.

CSVs use '.' decimals, '\\n' line endings, a header row and 12 significant digits,
so identical runs produce identical files.
"""

import math
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd

from ..config import get_default_config_path
from ..models.bdm import ClusterData
from ..models.sir import EpidemicData
from ..records import EssReport, Trace, TuningRow, TuningTable

FLOAT_FORMAT = "%.12g"
TUNING_COLUMNS = [
    "k",
    "acceptance",
    "acceptance_se",
    "mean_moved",
    "normalized_efficiency",
    "theoretical_efficiency",
]
ESS_COLUMNS = ["label", "n", "iact", "ess"]
DEFAULT_CLUSTER_FILE = "tuberculosis_clusters.csv"

PathLike = Union[str, Path]


def _data_lines(path: PathLike):
    """Yield (line_number, stripped content) for non-blank, non-comment lines."""
    with Path(path).open(encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            content = line.split("#", 1)[0].strip()
            if content:
                yield line_number, content


def _require_file(path: PathLike, kind: str) -> Path:
    file_path = Path(path)
    if not file_path.is_file():
        msg = f"{kind} file not found: {path}"
        raise FileNotFoundError(msg)
    return file_path


def load_removal_times(path: PathLike, population_size: int) -> EpidemicData:
    """
    Load removal times, one per line (or the first comma-separated field).

    The loader sorts the times and records the permutation in ``order`` so that
    ``removal_times == raw[order]``. An optional non-numeric header line is skipped.

    Args:
        path: Removal-times file
        population_size: Population size N

    Returns:
        EpidemicData with sorted removal times

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: On an unparsable, non-finite or negative time (with line number)
    """
    file_path = _require_file(path, "Removal times")
    raw: list[float] = []
    for index, (line_number, content) in enumerate(_data_lines(file_path)):
        field = content.split(",")[0].strip()
        try:
            value = float(field)
        except ValueError as e:
            if index == 0:
                continue
            msg = f"{path}:{line_number}: cannot parse removal time '{field}'"
            raise ValueError(msg) from e
        if not math.isfinite(value) or value < 0:
            msg = f"{path}:{line_number}: removal time must be finite and non-negative, got {field}"
            raise ValueError(msg)
        raw.append(value)
    if not raw:
        msg = f"{path}: no removal times found"
        raise ValueError(msg)

    values = np.array(raw)
    order = np.argsort(values, kind="stable")
    return EpidemicData(removal_times=values[order], population_size=population_size, order=order, source=str(path))


def load_clusters(path: Optional[PathLike] = None) -> ClusterData:
    """
    Load a cluster-size distribution: lines ``size,count``, optional header, '#' comments.

    Args:
        path: Cluster file; defaults to the bundled tuberculosis table

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: On a malformed line or repeated size (with line number)
    """
    if path is None:
        path = get_default_config_path(DEFAULT_CLUSTER_FILE)
    file_path = _require_file(path, "Cluster")
    clusters: dict[int, int] = {}
    for index, (line_number, content) in enumerate(_data_lines(file_path)):
        parts = [part.strip() for part in content.split(",")]
        if len(parts) != 2:
            msg = f"{path}:{line_number}: expected 'size,count', got '{content}'"
            raise ValueError(msg)
        try:
            size, count = int(parts[0]), int(parts[1])
        except ValueError as e:
            if index == 0:
                continue
            msg = f"{path}:{line_number}: size and count must be integers, got '{content}'"
            raise ValueError(msg) from e
        if size < 1 or count < 1:
            msg = f"{path}:{line_number}: size and count must be positive, got '{content}'"
            raise ValueError(msg)
        if size in clusters:
            msg = f"{path}:{line_number}: duplicate cluster size {size}"
            raise ValueError(msg)
        clusters[size] = count
    if not clusters:
        msg = f"{path}: no clusters found"
        raise ValueError(msg)
    return ClusterData(clusters=tuple(clusters.items()), source=str(path))


def tuning_frame(table: TuningTable) -> pd.DataFrame:
    """Tuning table as a DataFrame: the fixed columns, then extras in sorted order."""
    extras = sorted({name for row in table.rows for name in row.extras})
    records = []
    for row in table.rows:
        record = {
            "k": row.k,
            "acceptance": row.acceptance,
            "acceptance_se": row.mc_se,
            "mean_moved": row.mean_moved,
            "normalized_efficiency": row.normalized_efficiency,
            "theoretical_efficiency": row.theoretical_efficiency,
        }
        record.update({name: row.extras.get(name, math.nan) for name in extras})
        records.append(record)
    return pd.DataFrame.from_records(records, columns=TUNING_COLUMNS + extras)


def write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write any DataFrame with the fixed float format and line endings."""
    out_path = Path(path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out_path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return out_path


def write_csv(table: TuningTable, path: PathLike) -> Path:
    """Write a tuning table to CSV."""
    return write_frame(tuning_frame(table), path)


def read_tuning_csv(path: PathLike) -> TuningTable:
    """
    Read a CSV written by write_csv back into a TuningTable (metadata is not stored).

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: If a required column is missing
    """
    frame = pd.read_csv(_require_file(path, "Tuning CSV"))
    missing = [column for column in TUNING_COLUMNS if column not in frame.columns]
    if missing:
        msg = f"{path}: missing columns {missing}"
        raise ValueError(msg)
    extras = [column for column in frame.columns if column not in TUNING_COLUMNS]
    rows = [
        TuningRow(
            k=int(record["k"]),
            acceptance=float(record["acceptance"]),
            mean_moved=float(record["mean_moved"]),
            normalized_efficiency=float(record["normalized_efficiency"]),
            mc_se=float(record["acceptance_se"]),
            theoretical_efficiency=float(record["theoretical_efficiency"]),
            extras={name: float(record[name]) for name in extras},
        )
        for record in frame.to_dict(orient="records")
    ]
    return TuningTable(rows=rows)


def write_trace_csv(traces: list[Trace], path: PathLike) -> Path:
    """
    Write equal-length traces side by side with an iteration column.

    Raises:
        ValueError: If traces is empty or lengths differ
    """
    if not traces:
        msg = "write_trace_csv needs at least one trace"
        raise ValueError(msg)
    lengths = {len(trace) for trace in traces}
    if len(lengths) != 1:
        msg = f"traces must have equal lengths, got {sorted(lengths)}"
        raise ValueError(msg)
    frame = pd.DataFrame({"iteration": np.arange(lengths.pop())})
    for trace in traces:
        frame[trace.label] = trace.values
    return write_frame(frame, path)


def write_ess_csv(reports: list[EssReport], path: PathLike) -> Path:
    """Write ESS reports, one row per label."""
    frame = pd.DataFrame(
        [{"label": report.label, "n": report.n, "iact": report.iact, "ess": report.ess} for report in reports],
        columns=ESS_COLUMNS,
    )
    return write_frame(frame, path)
