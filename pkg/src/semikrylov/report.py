"""Run reports: a JSON-stable summary of a solve or diagnostic pipeline."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass

TRACE_COLUMNS = [
    "iter",
    "alpha",
    "beta",
    "res_norm",
    "normal_res_norm",
    "range_res_norm",
    "null_res_norm",
    "measured_bound_quantity",
    "bound_value",
]


@dataclass(frozen=True)
class RunReport:
    """Everything one CLI run reports, with a lossless JSON round trip.

    Per-iteration arrays are parallel-indexed by state (alphas/betas are one
    shorter, one entry per completed iteration). Optional arrays are None
    when the pipeline that produced the report does not define them.
    """

    command: str
    method: str | None
    dims: tuple[int, int]
    rank: int
    spectral_summary: dict
    stop_reason: str | None
    iterations: int
    res_norms: list
    alphas: list
    betas: list
    normal_res_norms: list | None
    range_res_norms: list | None
    null_res_norms: list | None
    measured: list | None
    bound: list | None
    contraction_factor: float | None
    final_distances: dict | None
    checks: dict
    passed: bool
    timestamp: str
    diagnostics: dict | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["dims"] = list(self.dims)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        d = dict(d)
        d["dims"] = tuple(d["dims"])
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def trace_csv_text(rows: list[dict]) -> str:
    """Render per-iteration rows as CSV with the fixed trace columns."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=TRACE_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow({col: row.get(col, "") for col in TRACE_COLUMNS})
    return buf.getvalue()


def write_text_atomic(path, text: str) -> None:
    """Write text via a temp file and rename, so readers never see partial output."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
