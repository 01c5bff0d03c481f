"""Loading and cleaning of 1-minute OHLCV bars into analysis-ready series.

Rows violating the price invariants are dropped and counted, duplicate
timestamps keep the first occurrence, and trading sessions are
concatenated end-to-end (gap minutes removed, never filled).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

from .errors import FileUnreadable, NoValidRows, SchemaMismatch, TooShort
from .spectral import TimeSeries

__all__ = [
    "TickRecord",
    "TickSeries",
    "CleaningReport",
    "DEFAULT_SCHEMA",
    "load_ohlc_csv",
    "build_series",
]

DEFAULT_SCHEMA = {
    "datetime": "datetime",
    "open": "open",
    "high": "high",
    "low": "low",
    "close": "close",
    "volume": "volume",
}

_TS_FORMATS = ("%Y-%m-%d %H:%M", "%Y-%m-%d %H:%M:%S")


@dataclass
class TickRecord:
    timestamp: datetime
    open: float
    high: float
    low: float
    close: float
    volume: float


@dataclass
class TickSeries:
    records: list[TickRecord]
    instrument: str = ""


@dataclass
class CleaningReport:
    n_records_in: int = 0
    n_records_out: int = 0
    n_gaps: int = 0
    n_dropped_invalid: int = 0
    sessions_detected: int = 0
    n_dropped_duplicate: int = field(default=0)


def _parse_timestamp(text: str) -> datetime | None:
    for fmt in _TS_FORMATS:
        try:
            return datetime.strptime(text.strip(), fmt)
        except ValueError:
            continue
    return None


def _valid_prices(o: float, h: float, l: float, c: float, v: float) -> bool:
    if not all(math.isfinite(x) for x in (o, h, l, c, v)):
        return False
    if min(o, h, l, c) <= 0 or v < 0:
        return False
    return l <= min(o, c) and max(o, c) <= h


def load_ohlc_csv(
    path: str | Path,
    schema: dict[str, str] | None = None,
    instrument: str = "",
) -> tuple[TickSeries, CleaningReport]:
    """Parse an OHLCV CSV, drop invalid rows, and report what was cleaned.

    ``schema`` remaps the default column names
    (datetime, open, high, low, close, volume) to those in the file.
    """
    colmap = dict(DEFAULT_SCHEMA)
    if schema:
        colmap.update(schema)
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc

    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None:
        raise FileUnreadable(f"{path} has no header row")
    for logical, column in colmap.items():
        if column not in reader.fieldnames:
            raise SchemaMismatch(f"column {column!r} (for {logical!r}) missing from {path}")

    report = CleaningReport()
    records: list[TickRecord] = []
    last_ts: datetime | None = None
    one_minute = timedelta(minutes=1)
    for row in reader:
        report.n_records_in += 1
        ts = _parse_timestamp(row.get(colmap["datetime"]) or "")
        try:
            o = float(row[colmap["open"]])
            h = float(row[colmap["high"]])
            l = float(row[colmap["low"]])
            c = float(row[colmap["close"]])
            v = float(row[colmap["volume"]])
        except (TypeError, ValueError):
            report.n_dropped_invalid += 1
            continue
        if ts is None or not _valid_prices(o, h, l, c, v):
            report.n_dropped_invalid += 1
            continue
        if last_ts is not None:
            if ts <= last_ts:
                report.n_dropped_duplicate += 1
                continue
            if ts - last_ts != one_minute:
                report.n_gaps += 1
        records.append(TickRecord(ts, o, h, l, c, v))
        last_ts = ts

    if not records:
        raise NoValidRows(f"{path} contains no valid OHLCV rows")
    report.n_records_out = len(records)
    report.sessions_detected = report.n_gaps + 1
    return TickSeries(records=records, instrument=instrument or path.stem), report


def build_series(
    ticks: TickSeries,
    price_field: str = "close",
    transform: str = "raw",
) -> TimeSeries:
    """Concatenate sessions into one unit-interval series.

    price_field: close, open, or mid ((high+low)/2)
    transform:   raw, demean, or log_return (length N-1)
    """
    if len(ticks.records) < 2:
        raise TooShort("need at least 2 valid records")
    if price_field == "close":
        p = np.array([r.close for r in ticks.records])
    elif price_field == "open":
        p = np.array([r.open for r in ticks.records])
    elif price_field == "mid":
        p = np.array([(r.high + r.low) / 2.0 for r in ticks.records])
    else:
        raise ValueError(f"unknown price_field {price_field!r}")

    if transform == "raw":
        v = p
    elif transform == "demean":
        v = p - p.mean()
    elif transform == "log_return":
        v = np.log(p[1:] / p[:-1])
    else:
        raise ValueError(f"unknown transform {transform!r}")
    if len(v) < 2:
        raise TooShort("series shorter than 2 after transform")
    return TimeSeries(values=v, dt=1.0, label=f"{ticks.instrument}-{price_field}-{transform}")
