"""Column tables with CSV/JSON emission.

Every file starts with one ``#``-prefixed line holding the run metadata as
JSON; ``read_table`` strips it again.
"""
from __future__ import annotations

import csv
import functools
import io
import json
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@functools.lru_cache(maxsize=1)
def version_string() -> str:
    from . import __version__

    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty", "--tags"],
            cwd=Path(__file__).resolve().parent,
            capture_output=True,
            text=True,
            timeout=5,
        )
    except (OSError, subprocess.SubprocessError):
        return __version__
    desc = out.stdout.strip()
    return f"{__version__}+{desc}" if out.returncode == 0 and desc else __version__


@dataclass(frozen=True, eq=False)
class SeriesTable:
    columns: tuple[str, ...]
    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        data = np.atleast_2d(np.asarray(self.data, dtype=float))
        if data.shape[1] != len(self.columns):
            raise ValueError(f"{len(self.columns)} columns declared, data has {data.shape[1]}")
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "data", data)

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def __len__(self):
        return len(self.data)

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, map(float, row))) for row in self.data]

    def _meta_line(self) -> str:
        meta = {"version": version_string(), **self.metadata}
        return "# " + json.dumps(meta, sort_keys=True, default=_json_default) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(self._meta_line())
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(self.columns)
        for row in self.data:
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return self._meta_line() + json.dumps(self.records(), indent=1, allow_nan=True) + "\n"

    def write(self, path, fmt: str = "csv") -> None:
        text = {"csv": self.to_csv, "json": self.to_json}[fmt]()
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.generic):
        return obj.item()
    return str(obj)


def read_table(path) -> SeriesTable:
    """Load a table written by ``SeriesTable.write`` (CSV or JSON)."""
    text = Path(path).read_text()
    first, _, body = text.partition("\n")
    if not first.startswith("#"):
        raise ValueError(f"{path}: missing metadata line")
    meta = json.loads(first[1:])
    if body.lstrip().startswith("["):
        recs = json.loads(body)
        columns = tuple(recs[0]) if recs else ()
        data = np.array([[r[c] for c in columns] for r in recs], dtype=float)
    else:
        rows = list(csv.reader(io.StringIO(body)))
        columns = tuple(rows[0])
        data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
    return SeriesTable(columns, data.reshape(-1, len(columns)), meta)
