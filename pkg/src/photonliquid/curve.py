"""Sampled g2 curves and their CSV / JSON serialisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DomainError, ShapeError

__all__ = ["CorrelationCurve", "format_float", "dump_json"]

UNIFORM_RTOL = 1e-9


def format_float(x) -> str:
    """17 significant digits, enough to round-trip a double."""
    return f"{float(x):.17g}"


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_jsonable) + "\n"


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    raise TypeError(f"not JSON serialisable: {type(o)}")


@dataclass
class CorrelationCurve:
    """g2 sampled on a uniform delay grid.

    ``counts`` holds raw coincidence counts when the curve is a Monte Carlo
    estimate; ``meta`` carries the normalisation inputs (event count,
    observation time, bin width) so estimates can be pooled later.
    """

    tau: np.ndarray
    values: np.ndarray
    errors: np.ndarray | None = None
    counts: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.tau = np.asarray(self.tau, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.tau.ndim != 1 or self.tau.shape != self.values.shape:
            raise ShapeError("tau and values must be 1-d arrays of equal length")
        if len(self.tau) >= 2:
            step = np.diff(self.tau)
            slack = UNIFORM_RTOL * step[0] + 1e-12 * np.max(np.abs(self.tau))
            if np.any(step <= 0) or np.max(np.abs(step - step[0])) > slack:
                raise ShapeError("tau grid must be uniform and increasing")
        if np.any(self.values < -1e-8):
            raise DomainError("g2 values must be non-negative")
        self.values = np.maximum(self.values, 0.0)
        if self.errors is not None:
            self.errors = np.asarray(self.errors, dtype=float)
            if self.errors.shape != self.values.shape or np.any(self.errors < 0):
                raise ShapeError("errors must be non-negative and match values")
        if self.counts is not None:
            self.counts = np.asarray(self.counts)

    def __len__(self):
        return len(self.tau)

    @property
    def bin_width(self):
        return float(self.tau[1] - self.tau[0]) if len(self.tau) > 1 else float(self.meta.get("bin_width", 0.0))

    def mirrored(self):
        """Symmetric curve on negative and positive delays (g2 is even in tau)."""
        keep = self.tau > 0
        has_zero = np.any(self.tau == 0)
        tau = np.concatenate([-self.tau[keep][::-1], self.tau[self.tau == 0] if has_zero else [], self.tau[keep]])
        vals = np.concatenate([self.values[keep][::-1], self.values[self.tau == 0] if has_zero else [], self.values[keep]])
        errs = None
        if self.errors is not None:
            errs = np.concatenate([self.errors[keep][::-1], self.errors[self.tau == 0] if has_zero else [], self.errors[keep]])
        return CorrelationCurve(tau, vals, errs, meta={**self.meta, "mirrored": True})

    def columns(self):
        cols = {"tau": self.tau, "g2": self.values}
        if self.errors is not None:
            cols["stderr"] = self.errors
        return cols

    def to_csv(self) -> str:
        cols = self.columns()
        lines = [",".join(cols)]
        for row in zip(*cols.values()):
            lines.append(",".join(format_float(x) for x in row))
        return "\n".join(lines) + "\n"

    def metadata(self) -> dict:
        meta = {"version": __version__, **self.meta}
        if self.counts is not None:
            meta["counts"] = self.counts
        return meta

    def to_json(self) -> str:
        cols = {k: [float(format_float(x)) for x in v] for k, v in self.columns().items()}
        return dump_json({"columns": cols, "metadata": self.metadata()})

    def write(self, path, fmt="csv"):
        """Write the curve; CSV gets a sidecar ``<path>.json`` with the metadata."""
        path = Path(path)
        if fmt == "json":
            path.write_text(self.to_json(), newline="\n")
            return [path]
        if fmt != "csv":
            raise ValueError(f"unknown format {fmt!r}")
        path.write_text(self.to_csv(), newline="\n")
        side = path.with_name(path.name + ".json")
        side.write_text(dump_json(self.metadata()), newline="\n")
        return [path, side]

    @classmethod
    def read_csv(cls, path):
        path = Path(path)
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        header = path.read_text().splitlines()[0].split(",")
        errors = data[:, 2] if "stderr" in header else None
        meta = {}
        side = path.with_name(path.name + ".json")
        if side.exists():
            meta = json.loads(side.read_text())
        counts = meta.pop("counts", None)
        return cls(data[:, 0], data[:, 1], errors, counts=counts, meta=meta)
