"""Identity/run report types and machine-readable emission."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

RESIDUAL_FLOOR = 1e-14


@dataclass
class IdentityReport:
    """Outcome of one identity check.

    ``residual_rel = residual_abs / max(scale, 1e-14)`` where scale is the
    larger magnitude of the two compared sides.
    """

    identity: str
    residual_abs: float
    scale: float
    tolerance: float
    nodes: int = 0
    epsilon: float = 0.0
    fd_step: float = 0.0
    corpus: str = ""
    probe_points: list = field(default_factory=list)
    status: str = "ok"  # ok | not-applicable
    extra: dict = field(default_factory=dict)

    @property
    def residual_rel(self) -> float:
        return self.residual_abs / max(self.scale, RESIDUAL_FLOOR)

    @property
    def passed(self) -> bool:
        if self.status == "not-applicable":
            return True
        return self.residual_rel <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "corpus": self.corpus,
            "residual_abs": self.residual_abs,
            "residual_rel": self.residual_rel,
            "scale": self.scale,
            "tolerance": self.tolerance,
            "nodes": self.nodes,
            "epsilon": self.epsilon,
            "fd_step": self.fd_step,
            "probe_points": [list(map(float, p)) for p in self.probe_points],
            "status": self.status,
            "pass": self.passed,
            "extra": _jsonable(self.extra),
        }


def residual_report(identity: str, lhs, rhs, tolerance: float, **meta) -> IdentityReport:
    """Build a report from the two computed sides of an identity."""
    lhs = np.atleast_1d(np.asarray(lhs))
    rhs = np.atleast_1d(np.asarray(rhs))
    resid = float(np.abs(lhs - rhs).max())
    scale = float(max(np.abs(lhs).max(), np.abs(rhs).max()))
    return IdentityReport(identity=identity, residual_abs=resid, scale=scale,
                          tolerance=tolerance, **meta)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


@dataclass
class RunReport:
    """Aggregated result of a suite run."""

    suite: str
    config: dict
    reports: list  # list[IdentityReport]
    convergence: dict = field(default_factory=dict)  # identity -> list of ratios or flag
    wall_clock: dict = field(default_factory=dict)   # identity -> seconds

    @property
    def overall_pass(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "config": _jsonable(self.config),
            "checks": [r.to_dict() for r in self.reports],
            "convergence": _jsonable(self.convergence),
            "overall_pass": self.overall_pass,
        }
        if include_timing:
            out["wall_clock_s"] = _jsonable(self.wall_clock)
        return out


CSV_HEADER = ["suite", "identity", "corpus", "nodes", "epsilon",
              "residual_abs", "residual_rel", "pass"]


def emit_report(report: RunReport, fmt: str = "json", path: Optional[str] = None,
                include_timing: bool = False) -> str:
    """Render a RunReport as json, csv, or text; optionally write it to ``path``.

    JSON output is deterministic for a fixed (config, seed): keys are sorted
    and wall-clock timings are excluded unless explicitly requested.
    """
    if fmt == "json":
        text = json.dumps(report.to_dict(include_timing=include_timing),
                          sort_keys=True, indent=2)
    elif fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in report.reports:
            writer.writerow([report.suite, r.identity, r.corpus, r.nodes, r.epsilon,
                             f"{r.residual_abs:.6e}", f"{r.residual_rel:.6e}",
                             "pass" if r.passed else "FAIL"])
        text = buf.getvalue()
    elif fmt == "text":
        lines = [f"suite: {report.suite}"]
        width = max((len(r.identity) for r in report.reports), default=10) + 2
        for r in report.reports:
            if r.status == "not-applicable":
                mark = "NotApplicable"
            else:
                mark = "pass" if r.passed else "FAIL"
            clock = self_time = report.wall_clock.get(r.identity)
            tpart = f"  {self_time:8.2f}s" if clock is not None else ""
            lines.append(f"  {r.identity:<{width}} {r.corpus:<22} n={r.nodes:<3d} "
                         f"rel={r.residual_rel:10.3e} tol={r.tolerance:8.1e} {mark}{tpart}")
        for ident, ratios in report.convergence.items():
            lines.append(f"  convergence {ident}: {ratios}")
        lines.append(f"overall: {'pass' if report.overall_pass else 'FAIL'}")
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
