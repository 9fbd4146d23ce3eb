"""Parameter grids and verification reports shared by the scanners."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np


@dataclass(frozen=True)
class Axis:
    lo: float
    hi: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"axis needs lo < hi, got {self.lo}:{self.hi}")
        if self.count < 2:
            raise ValueError("axis needs at least 2 points")
        if self.spacing not in ("linear", "geom"):
            raise ValueError(f"unknown spacing {self.spacing!r}")
        if self.spacing == "geom" and not self.lo > 0:
            raise ValueError("geometric spacing needs lo > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "geom":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)

    def __str__(self) -> str:
        text = f"{self.lo:g}:{self.hi:g}:{self.count}"
        return text + (":geom" if self.spacing == "geom" else "")


@dataclass(frozen=True)
class GridSpec:
    """Named axes; the CLI spelling is ``name=lo:hi:count[:geom]``."""

    axes: tuple[tuple[str, Axis], ...]

    @classmethod
    def of(cls, **axes: Axis) -> GridSpec:
        return cls(tuple(axes.items()))

    @classmethod
    def parse(cls, items: Iterable[str]) -> GridSpec:
        axes = []
        for item in items:
            name, sep, rest = item.partition("=")
            parts = rest.split(":")
            if not sep or not name or len(parts) not in (3, 4):
                raise ValueError(f"grid item {item!r} is not name=lo:hi:count[:geom]")
            spacing = "linear"
            if len(parts) == 4:
                if parts[3] not in ("geom", "lin", "linear"):
                    raise ValueError(f"unknown spacing in {item!r}")
                spacing = "geom" if parts[3] == "geom" else "linear"
            axes.append((name.strip(), Axis(float(parts[0]), float(parts[1]), int(parts[2]), spacing)))
        return cls(tuple(axes))

    def merged(self, other: GridSpec | None) -> GridSpec:
        """Axes of ``other`` replace same-named axes of ``self``."""
        if other is None:
            return self
        table = dict(self.axes)
        table.update(dict(other.axes))
        return GridSpec(tuple(table.items()))

    def __getitem__(self, name: str) -> Axis:
        return dict(self.axes)[name]

    def __contains__(self, name: str) -> bool:
        return name in dict(self.axes)

    def values(self, name: str) -> np.ndarray:
        return self[name].values()

    def serialize(self) -> list[str]:
        return [f"{name}={axis}" for name, axis in self.axes]

    def __str__(self) -> str:
        return " ".join(self.serialize())


PASS, VIOLATION, GATE_FAILED = "pass", "violation", "gate_failed"


@dataclass
class VerificationReport:
    """
    Outcome of a scan.  ``min_margin`` is the signed distance to the claimed
    inequality; violations are the points with margin below ``-tolerance``.
    """

    claim_id: str
    grid: GridSpec | None
    min_margin: float
    violations: list[tuple[dict, float]]
    evaluations: int
    tolerance: float
    status: str = ""
    param_names: tuple[str, ...] = ()
    secondary: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.status:
            self.status = PASS if not self.violations else VIOLATION

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, VIOLATION: 1, GATE_FAILED: 2}[self.status]

    def summary(self) -> str:
        line = (
            f"{self.claim_id}: {self.status.upper()} min_margin={_fmt(self.min_margin)} "
            f"tolerance={self.tolerance:.1e} evaluations={self.evaluations} "
            f"violations={len(self.violations)}"
        )
        for key, value in self.secondary.items():
            line += f" {key}={_fmt(value)}"
        return line

    def csv_text(self) -> str:
        names = list(self.param_names)
        if not names and self.violations:
            names = list(self.violations[0][0])
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["claim_id", *names, "margin"])
        for params, margin in self.violations:
            writer.writerow([self.claim_id, *(_fmt(params[n]) for n in names), _fmt(margin)])
        return buf.getvalue()

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(self.csv_text())


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _plain(v):
    return v.item() if isinstance(v, np.generic) else v


def collect(
    claim_id: str,
    margins: np.ndarray,
    params: Mapping[str, np.ndarray],
    tolerance: float,
    grid: GridSpec | None = None,
) -> VerificationReport:
    """Build a report from flat arrays of margins and matching parameter values."""
    margins = np.asarray(margins, dtype=float)
    cols = {k: np.broadcast_to(np.asarray(v), margins.shape).ravel() for k, v in params.items()}
    margins = margins.ravel()
    if np.any(np.isnan(margins)):
        raise ArithmeticError(f"{claim_id}: NaN margin encountered")
    bad = np.flatnonzero(margins < -tolerance)
    violations = [({k: _plain(cols[k][i]) for k in cols}, float(margins[i])) for i in bad]
    return VerificationReport(
        claim_id=claim_id,
        grid=grid,
        min_margin=float(margins.min()) if margins.size else math.inf,
        violations=violations,
        evaluations=int(margins.size),
        tolerance=tolerance,
        param_names=tuple(params),
    )
