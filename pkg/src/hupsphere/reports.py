"""JSON reports and CSV point scans."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Report", "to_jsonable", "points_csv"]


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


@dataclass
class Report:
    """Outcome of a verification operation.

    ``artifacts`` holds in-memory by-products (e.g. counterexample densities)
    and is never serialised.
    """

    operation: str
    inputs: dict
    verdict: str
    diagnostics: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict, repr=False, compare=False)

    def to_dict(self) -> dict:
        return to_jsonable({
            "operation": self.operation,
            "inputs": self.inputs,
            "verdict": self.verdict,
            "diagnostics": self.diagnostics,
            "residuals": self.residuals,
            "tolerances": self.tolerances,
        })

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)


def points_csv(points, values) -> str:
    """CSV text with columns ``x1..xn,re,im,abs``, one row per point."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.asarray(values, dtype=complex).ravel()
    if len(pts) != len(vals):
        raise ValueError("points and values differ in length")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(pts.shape[1])] + ["re", "im", "abs"])
    for p, v in zip(pts, vals):
        writer.writerow([repr(float(c)) for c in p]
                        + [repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v)))])
    return buf.getvalue()
