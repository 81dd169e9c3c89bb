"""CSV and JSON writers for distributions, trajectories, snapshots and metrics.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs always give byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def write_json(path: Path, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def write_trajectory(path: Path, trajectory: Sequence[int]) -> Path:
    return write_csv(path, ("t", "x"), enumerate(int(x) for x in trajectory))


def write_box_snapshot(path: Path, rows) -> Path:
    return write_csv(path, ("t", "x", "c", "N_xc", "eta_xc"), rows)


def write_spin_snapshot(path: Path, rows) -> Path:
    return write_csv(path, ("t", "x", "s", "n_xs", "eta_xs"), rows)


def read_csv(path: Path) -> list[dict[str, str]]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))
