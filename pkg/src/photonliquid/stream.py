"""Monte Carlo photon streams and coincidence-histogram estimates of g2.

Streams are ordinary renewal processes: each emission time is the previous
one plus an independent phase-type waiting time.  The estimator counts
ordered pairs (forward delays only) and divides by the number expected for
a Poisson stream with the same rate, including the ``T - tau`` edge
correction so every delay bin is unbiased.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .curve import CorrelationCurve, dump_json, format_float
from .errors import DomainError, EstimationError, ShapeError, ValidationError
from .phase_type import GENERATOR, RatesLike, as_rates, make_rng, mean_rate, sample_intervals

__all__ = [
    "PhotonStream",
    "simulate_stream",
    "estimate_g2",
    "apply_jitter",
    "merge_histograms",
    "read_stream",
    "write_stream",
    "first_unsorted_index",
]


def first_unsorted_index(t):
    """Index of the first timestamp not strictly larger than its predecessor, or None."""
    bad = np.flatnonzero(np.diff(t) <= 0)
    return int(bad[0]) + 1 if len(bad) else None


def _strictly_increasing(t, upper=None):
    # ties (float rounding, clamping) are rare; nudge them up by one ulp, and
    # anything pushed past ``upper`` back down from the top
    t = np.array(t, dtype=float)
    while True:
        i = first_unsorted_index(t)
        if i is None:
            break
        t[i] = np.nextafter(t[i - 1], np.inf)
    if upper is not None and len(t) and t[-1] > upper:
        t[-1] = upper
        for i in range(len(t) - 2, -1, -1):
            if t[i] < t[i + 1]:
                break
            t[i] = np.nextafter(t[i + 1], -np.inf)
    return t


@dataclass
class PhotonStream:
    timestamps: np.ndarray
    duration: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.timestamps = np.asarray(self.timestamps, dtype=float)
        self.duration = float(self.duration)
        if self.timestamps.ndim != 1:
            raise ValidationError("timestamps must be 1-d")
        if not self.duration > 0:
            raise DomainError("observation window must be positive")
        i = first_unsorted_index(self.timestamps)
        if i is not None:
            raise ValidationError(f"timestamps not strictly increasing at index {i}", index=i)
        if len(self) and (self.timestamps[0] < 0 or self.timestamps[-1] > self.duration):
            raise ValidationError("timestamps must lie in [0, duration]")

    def __len__(self):
        return len(self.timestamps)

    @property
    def rate(self):
        return len(self) / self.duration


def simulate_stream(rates: RatesLike, duration: float, seed: int) -> PhotonStream:
    """Cumulative sums of phase-type waiting times, truncated at ``duration``."""
    st = as_rates(rates)
    if not duration > 0:
        raise DomainError("duration must be positive")
    rng = make_rng(seed)
    expected = duration * mean_rate(st)
    chunk = int(expected + 10 * np.sqrt(expected) + 1024)
    pieces, t0 = [], 0.0
    while True:
        ts = t0 + np.cumsum(sample_intervals(st, chunk, rng))
        if ts[-1] > duration:
            pieces.append(ts[ts <= duration])
            break
        pieces.append(ts)
        t0 = ts[-1]
    times = _strictly_increasing(np.concatenate(pieces), duration)
    meta = {"rates": list(st.rates), "seed": seed if isinstance(seed, int) else None, "generator": GENERATOR}
    return PhotonStream(times, duration, meta)


def apply_jitter(stream: PhotonStream, sigma_d: float, seed: int) -> PhotonStream:
    """Add Gaussian detector noise of std ``sigma_d`` to every timestamp."""
    if sigma_d < 0:
        raise DomainError("jitter must be non-negative")
    if sigma_d == 0:
        return stream
    rng = make_rng(seed)
    t = stream.timestamps + sigma_d * rng.standard_normal(len(stream))
    t = np.sort(np.clip(t, 0.0, stream.duration))
    meta = {**stream.meta, "jitter": sigma_d, "jitter_seed": seed}
    return PhotonStream(_strictly_increasing(t, stream.duration), stream.duration, meta)


def _pair_counts(t, bin_width, n_bins):
    """Histogram of forward delays ``t[j] - t[i]`` (j > i) below ``n_bins * bin_width``.

    Delays at a fixed lag ``j - i`` grow with the lag, so the scan stops at
    the first lag with no delay inside the window.
    """
    edge = n_bins * bin_width
    counts = np.zeros(n_bins, dtype=np.int64)
    for lag in range(1, len(t)):
        d = t[lag:] - t[:-lag]
        d = d[d < edge]
        if d.size == 0:
            break
        idx = np.minimum((d / bin_width).astype(np.int64), n_bins - 1)
        counts += np.bincount(idx, minlength=n_bins)
    return counts


def _normalise(counts, n_events, total_time, n_streams, bin_width):
    centres = (np.arange(len(counts)) + 0.5) * bin_width
    rate = n_events / total_time
    exposure = (total_time - n_streams * centres) * bin_width
    norm = 1.0 / (rate**2 * exposure)
    meta = {
        "n_events": int(n_events),
        "total_time": float(total_time),
        "n_streams": int(n_streams),
        "bin_width": float(bin_width),
        "rate": float(rate),
    }
    return CorrelationCurve(centres, counts * norm, np.sqrt(counts) * norm, counts=np.asarray(counts), meta=meta)


def estimate_g2(stream: PhotonStream, bin_width: float = None, tau_max: float = None) -> CorrelationCurve:
    """Coincidence estimate of g2 on bin centres ``(k + 1/2) * bin_width``.

    Defaults follow the measured rate ``r``: bins of ``0.01 / r`` up to ``30 / r``.
    """
    if len(stream) == 0:
        raise EstimationError("cannot estimate g2 from an empty stream")
    r = stream.rate
    bin_width = 0.01 / r if bin_width is None else float(bin_width)
    tau_max = 30.0 / r if tau_max is None else float(tau_max)
    if not bin_width > 0 or not tau_max > bin_width:
        raise DomainError("need bin_width > 0 and tau_max > bin_width")
    if tau_max >= stream.duration:
        raise DomainError("tau_max must be shorter than the observation window")
    n_bins = int(round(tau_max / bin_width))
    counts = _pair_counts(stream.timestamps, bin_width, n_bins)
    curve = _normalise(counts, len(stream), stream.duration, 1, bin_width)
    curve.meta.update({k: stream.meta[k] for k in ("rates", "seed", "generator", "jitter") if k in stream.meta})
    return curve


def merge_histograms(curves: Sequence[CorrelationCurve]) -> CorrelationCurve:
    """Pool raw counts, events and observation time of independent estimates."""
    curves = list(curves)
    if not curves:
        raise ShapeError("nothing to merge")
    ref = curves[0]
    for c in curves:
        if c.counts is None or "n_events" not in c.meta:
            raise ShapeError("merging needs raw counts and normalisation metadata")
        if len(c) != len(ref) or not np.isclose(c.meta["bin_width"], ref.meta["bin_width"], rtol=1e-12, atol=0):
            raise ShapeError("curves must share the same delay grid")
    counts = np.sum([c.counts for c in curves], axis=0)
    return _normalise(
        counts,
        sum(c.meta["n_events"] for c in curves),
        sum(c.meta["total_time"] for c in curves),
        sum(c.meta["n_streams"] for c in curves),
        ref.meta["bin_width"],
    )


# --------------------------------------------------------------------------
# timestamp files


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".json")


def write_stream(stream: PhotonStream, path) -> list:
    """Write timestamps as ``.txt`` (one per line) or ``.f64`` (little-endian doubles)."""
    path = Path(path)
    if path.suffix == ".txt":
        text = "".join(format_float(x) + "\n" for x in stream.timestamps)
        path.write_text(text, newline="\n")
    elif path.suffix == ".f64":
        path.write_bytes(stream.timestamps.astype("<f8").tobytes())
    else:
        raise ValueError(f"unknown timestamp format {path.suffix!r}; use .txt or .f64")
    from . import __version__

    meta = {"version": __version__, "duration": stream.duration, "n_events": len(stream), **stream.meta}
    _sidecar(path).write_text(dump_json(meta), newline="\n")
    return [path, _sidecar(path)]


def read_stream(path, duration: float = None) -> PhotonStream:
    """Read a timestamp file; duration comes from the argument, the sidecar, or the last event."""
    path = Path(path)
    if path.suffix == ".txt":
        text = path.read_text()
        t = np.loadtxt(text.splitlines(), ndmin=1) if text.strip() else np.empty(0)
    elif path.suffix == ".f64":
        t = np.frombuffer(path.read_bytes(), dtype="<f8").astype(float)
    else:
        raise ValueError(f"unknown timestamp format {path.suffix!r}; use .txt or .f64")
    meta = {}
    if _sidecar(path).exists():
        meta = json.loads(_sidecar(path).read_text())
    if duration is None:
        duration = meta.get("duration", t[-1] if len(t) else None)
    if duration is None:
        raise EstimationError("empty stream without a known duration")
    keep = {k: meta[k] for k in ("rates", "seed", "generator") if k in meta}
    return PhotonStream(t, duration, keep)
