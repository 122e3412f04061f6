"""Line-oriented check reports and CSV output."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float

    @property
    def passed(self) -> bool:
        # a zero threshold means the check is exact
        if self.threshold == 0:
            return self.value == 0
        return bool(self.value < self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name} {status} {self.value:.6e} {self.threshold:.6e}"


def format_report(results: Sequence[CheckResult]) -> str:
    return "".join(r.line() + "\n" for r in results)


def all_passed(results: Sequence[CheckResult]) -> bool:
    return all(r.passed for r in results)


def format_float(v: float) -> str:
    """17 significant digits, '.' decimal separator."""
    return format(float(v), ".17g")


def write_csv(path: str | Path, header: Sequence[str], rows: np.ndarray) -> None:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != len(header):
        raise ValueError("row width does not match header")
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_float(v) for v in row) + "\n")


def read_csv(path: str | Path) -> tuple[list[str], np.ndarray]:
    with open(path, encoding="ascii") as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data
