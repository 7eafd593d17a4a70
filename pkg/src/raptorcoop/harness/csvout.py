"""CSV emission with a provenance comment on the first line."""
from __future__ import annotations

import csv
import io
import math
from pathlib import Path

SIM_COLUMNS_HEAD = ["scheme", "M", "k", "N", "e_inter"]
SIM_COLUMNS_TAIL = ["F", "trials", "mean_throughput", "ci95", "mean_frames", "incomplete_count"]


def sim_columns(M: int) -> list[str]:
    return SIM_COLUMNS_HEAD + [f"e_{i + 1}" for i in range(M)] + SIM_COLUMNS_TAIL


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return f"{v:.6f}"
    return str(v)


def render(columns: list[str], rows: list[dict], config_hash: str, master_seed: int) -> str:
    buf = io.StringIO()
    buf.write(f"# config_hash={config_hash} master_seed={master_seed}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def write(path: Path, columns: list[str], rows: list[dict], config_hash: str, master_seed: int) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(columns, rows, config_hash, master_seed))
    return path


def read(path: Path) -> tuple[str, list[dict]]:
    """Return the provenance comment and the rows as dicts of strings."""
    lines = Path(path).read_text().splitlines()
    header = lines[0]
    rows = list(csv.DictReader(lines[1:]))
    return header, rows
