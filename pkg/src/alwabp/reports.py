"""CSV reporting helpers: best-known-value tables, deviations, aggregates.

Deviation percentages are rounded to one decimal on the row level, and
every aggregate is computed from the rounded row values, so re-reading a
report and recomputing its summary reproduces it exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path


class BkvError(Exception):
    pass


def load_bkv(path) -> dict[str, int]:
    """Two-column CSV `instance,cycle`; a header row is optional."""
    table = {}
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise BkvError(f"{path}:{lineno}: expected 2 columns, "
                               f"got {len(row)}")
            name, value = row[0].strip(), row[1].strip()
            if lineno == 1 and not value.lstrip("-").isdigit():
                continue    # header
            try:
                cycle = int(value)
            except ValueError:
                raise BkvError(f"{path}:{lineno}: bad cycle {value!r}")
            if cycle <= 0:
                raise BkvError(f"{path}:{lineno}: cycle must be positive")
            table[name] = cycle
    return table


def deviation_pct(cycle: int, bkv: int) -> float:
    """Signed percentage deviation from the best known value."""
    return round((cycle - bkv) / bkv * 100.0, 1)


def fmt_dev(v) -> str:
    return "" if v is None else f"{v:.1f}"


def fmt_time(v) -> str:
    return "" if v is None else f"{v:.4f}"


def fmt_agg(v) -> str:
    """Aggregates carry full precision so they can be re-verified."""
    return "" if v is None else f"{v:.10g}"


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def mean(xs):
    return sum(xs) / len(xs)


def summarize(devs, times):
    """Table-style aggregate: av./max deviation, av./max time; deviation
    parts are None when no row had a best known value."""
    out = {
        "av_time_s": mean(times) if times else None,
        "max_time_s": max(times) if times else None,
    }
    if devs:
        out["av_dev_pct"] = mean(devs)
        out["max_dev_pct"] = max(devs)
    else:
        out["av_dev_pct"] = None
        out["max_dev_pct"] = None
    return out
