"""Close-price series: data model, CSV interchange, and synthetic generation.

A series is a symbol plus an ordered run of (date, close) observations.
Days are indexed 1..len over trading rows; calendar gaps between rows are
deliberately ignored, so "day t" always means the t-th observation.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path

import numpy as np

CSV_HEADER = ("date", "close")

# Smallest close a noisy generator may emit; keeps every series positive.
PRICE_FLOOR = 0.01

SYNTH_KINDS = ("constant", "linear", "noisy-regime", "smooth")

# AR(1) pull of the oscillating half of the noisy-regime recipe. Negative,
# so consecutive residuals tend to alternate sign around the level.
_REGIME_AR_COEFF = -0.35

# Trend-segment noise is this fraction of the oscillation amplitude.
_REGIME_TREND_NOISE = 0.25

_SYNTH_START_DATE = dt.date(2020, 1, 1)


class CsvFormatError(ValueError):
    """Raised for malformed interchange files; messages carry the row number."""


@dataclass(frozen=True, eq=False)
class PriceSeries:
    """Immutable daily close history for one symbol.

    ``closes`` is a read-only float array; ``dates`` a tuple of calendar
    days. Invariants: at least one observation, strictly increasing dates,
    every close strictly positive.
    """

    symbol: str
    dates: tuple[dt.date, ...]
    closes: np.ndarray

    def __post_init__(self) -> None:
        closes = np.array(self.closes, dtype=float)
        closes.setflags(write=False)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))
        if len(self.dates) != len(closes):
            raise ValueError(
                f"{len(self.dates)} dates but {len(closes)} closes"
            )
        if len(closes) == 0:
            raise ValueError("a series needs at least one observation")
        nonpositive = np.nonzero(closes <= 0.0)[0]
        if nonpositive.size:
            raise ValueError(f"close must be positive (day {nonpositive[0] + 1})")
        for i in range(1, len(self.dates)):
            if self.dates[i] <= self.dates[i - 1]:
                raise ValueError(f"dates must be strictly increasing (day {i + 1})")

    def __len__(self) -> int:
        return len(self.closes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PriceSeries):
            return NotImplemented
        return (
            self.symbol == other.symbol
            and self.dates == other.dates
            and np.array_equal(self.closes, other.closes)
        )

    def close(self, t: int) -> float:
        """Close for 1-based day ``t``."""
        if not 1 <= t <= len(self):
            raise IndexError(f"day {t} outside 1..{len(self)}")
        return float(self.closes[t - 1])

    def slice(self, start: int, stop: int) -> PriceSeries:
        """Sub-series covering days ``start``..``stop`` inclusive."""
        if not 1 <= start <= stop <= len(self):
            raise ValueError(f"bad slice days {start}..{stop} for length {len(self)}")
        return PriceSeries(
            symbol=self.symbol,
            dates=self.dates[start - 1 : stop],
            closes=self.closes[start - 1 : stop],
        )


def window(series: PriceSeries, t: int, k: int) -> np.ndarray:
    """The ``k`` closes for days t-k+1..t, oldest first.

    Requires 1 <= k <= t <= len(series). The result is a read-only view.
    """
    if k < 1:
        raise ValueError(f"window length must be >= 1, got {k}")
    if t > len(series):
        raise ValueError(f"day {t} beyond series end {len(series)}")
    if t < k:
        raise ValueError(f"day {t} has fewer than k={k} days of history")
    return series.closes[t - k : t]


def load_csv(path: str | Path, symbol: str | None = None) -> PriceSeries:
    """Parse a ``date,close`` file into a PriceSeries.

    Format: UTF-8, header line exactly ``date,close``, one observation per
    line, ISO-8601 dates, decimal closes. Extra columns are rejected. The
    symbol defaults to the file's stem.

    Raises CsvFormatError naming the offending data row (1-based, header
    excluded) for malformed content, and OSError if the file is unreadable.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError("empty file: missing 'date,close' header") from None
        if tuple(h.strip() for h in header) != CSV_HEADER:
            raise CsvFormatError(
                f"malformed header {','.join(header)!r}: expected 'date,close'"
            )
        dates: list[dt.date] = []
        closes: list[float] = []
        for row_no, row in enumerate(reader, start=1):
            if len(row) != 2:
                raise CsvFormatError(f"row {row_no}: expected 2 columns, got {len(row)}")
            raw_date, raw_close = row
            try:
                day = dt.date.fromisoformat(raw_date.strip())
            except ValueError:
                raise CsvFormatError(f"row {row_no}: unparsable date {raw_date!r}") from None
            try:
                close = float(raw_close)
            except ValueError:
                raise CsvFormatError(f"row {row_no}: unparsable close {raw_close!r}") from None
            if not np.isfinite(close) or close <= 0.0:
                raise CsvFormatError(f"row {row_no}: close must be positive, got {raw_close}")
            if dates and day <= dates[-1]:
                raise CsvFormatError(
                    f"row {row_no}: date {day.isoformat()} not after {dates[-1].isoformat()}"
                )
            dates.append(day)
            closes.append(close)
    if not dates:
        raise CsvFormatError("no observations after the header")
    return PriceSeries(symbol=symbol or path.stem, dates=tuple(dates), closes=np.array(closes))


def write_csv(series: PriceSeries, path: str | Path) -> None:
    """Write a series in the ``date,close`` interchange format.

    Closes are written with repr precision so a reload reproduces them
    bit for bit.
    """
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for day, close in zip(series.dates, series.closes):
            writer.writerow([day.isoformat(), repr(float(close))])


@dataclass(frozen=True)
class SynthSpec:
    """Recipe for a deterministic synthetic close series.

    Fields used per kind:

    - ``constant``: base. Every close equals the base level.
    - ``linear``: base, slope. close(t) = base + slope * t.
    - ``noisy-regime``: base, slope, noise, switch_day. A linear trend with
      small noise up to switch_day - 1, then a mean-reverting oscillation
      (amplitude ``noise``) around the level the trend reached. The locally
      best simple predictor flips at the switch.
    - ``smooth``: base, amplitude, period, noise. A slow sine with a random
      phase and very small noise; day-over-day changes stay gentle.

    The seed fixes every random draw; equal specs generate equal series.
    """

    kind: str
    length: int
    seed: int = 0
    base: float = 100.0
    slope: float = 1.0
    noise: float | None = None
    switch_day: int | None = None
    amplitude: float = 8.0
    period: float = 28.0

    def __post_init__(self) -> None:
        if self.kind not in SYNTH_KINDS:
            raise ValueError(f"unknown kind {self.kind!r}: expected one of {SYNTH_KINDS}")
        if self.length < 1:
            raise ValueError(f"length must be >= 1, got {self.length}")
        if self.noise is None:
            default = {"noisy-regime": 1.2, "smooth": 0.05}.get(self.kind, 0.0)
            object.__setattr__(self, "noise", default)
        if self.noise < 0:
            raise ValueError(f"noise amplitude must be >= 0, got {self.noise}")
        if self.kind == "noisy-regime":
            if self.switch_day is None:
                object.__setattr__(self, "switch_day", max(1, self.length // 2))
            if not 1 <= self.switch_day <= self.length:
                raise ValueError(
                    f"switch_day {self.switch_day} outside 1..{self.length}"
                )
        if self.kind == "smooth":
            if self.amplitude < 0:
                raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
            if self.period <= 0:
                raise ValueError(f"period must be > 0, got {self.period}")


def generate(spec: SynthSpec) -> PriceSeries:
    """Produce the series a spec describes; deterministic in the seed."""
    rng = np.random.default_rng(spec.seed)
    t = np.arange(1, spec.length + 1, dtype=float)

    if spec.kind == "constant":
        closes = np.full(spec.length, float(spec.base))
        _require_positive(closes, spec.kind)
    elif spec.kind == "linear":
        closes = spec.base + spec.slope * t
        _require_positive(closes, spec.kind)
    elif spec.kind == "noisy-regime":
        closes = _noisy_regime(spec, rng)
    else:
        closes = _smooth(spec, rng, t)

    start = _SYNTH_START_DATE
    dates = tuple(start + dt.timedelta(days=i) for i in range(spec.length))
    return PriceSeries(symbol=f"synth-{spec.kind}-{spec.seed}", dates=dates, closes=closes)


def _require_positive(closes: np.ndarray, kind: str) -> None:
    if closes.min() <= 0.0:
        raise ValueError(f"{kind} spec produces non-positive closes")


def _noisy_regime(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    """Trend-then-oscillation recipe.

    Days 1..switch_day-1 follow base + slope*t with small noise, so a
    windowed line fit tracks them well. From switch_day on, the series is
    an alternating-sign AR(1) oscillation around the level the trend
    reached, which a short moving average predicts best.
    """
    n, s = spec.length, spec.switch_day
    eps = rng.standard_normal(n)
    closes = np.empty(n)
    trend_days = np.arange(1, s, dtype=float)
    closes[: s - 1] = (
        spec.base + spec.slope * trend_days + _REGIME_TREND_NOISE * spec.noise * eps[: s - 1]
    )
    level = spec.base + spec.slope * (s - 1)
    y = 0.0
    for i in range(s - 1, n):
        y = _REGIME_AR_COEFF * y + spec.noise * eps[i]
        closes[i] = level + y
    return np.maximum(closes, PRICE_FLOOR)


def _smooth(spec: SynthSpec, rng: np.random.Generator, t: np.ndarray) -> np.ndarray:
    phase = rng.uniform(0.0, spec.period)
    eps = rng.standard_normal(spec.length)
    wave = spec.amplitude * np.sin(2.0 * np.pi * (t + phase) / spec.period)
    return np.maximum(spec.base + wave + spec.noise * eps, PRICE_FLOOR)
