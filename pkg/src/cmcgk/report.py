"""Versioned, deterministic run reports (JSON plus a tab-separated check table)."""
from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

__all__ = ["Check", "Report", "SCHEMA", "PASS", "FAIL", "XFAIL", "XPASS", "INFO"]

SCHEMA = "cmcgk.report/1"
PASS, FAIL, XFAIL, XPASS, INFO = "PASS", "FAIL", "XFAIL", "XPASS", "INFO"


@dataclass
class Check:
    """One named residual against a tolerance.

    ``relation`` is ``"le"`` (residual must not exceed the tolerance) or
    ``"ge"`` (used by controls that must detect a violation).  A check with
    ``expect_fail`` is a planted negative control: failing it is reported as
    XFAIL and counts as success.
    """

    name: str
    value: float
    tolerance: float | None = None
    relation: str = "le"
    expect_fail: bool = False
    note: str = ""

    @property
    def finite(self) -> bool:
        return self.value is not None and math.isfinite(self.value)

    @property
    def holds(self) -> bool:
        if not self.finite:
            return False
        if self.tolerance is None:
            return True
        if self.relation == "le":
            return self.value <= self.tolerance
        if self.relation == "ge":
            return self.value >= self.tolerance
        raise ValueError(f"unknown relation {self.relation!r}")

    @property
    def status(self) -> str:
        if self.tolerance is None and self.finite:
            return INFO
        if self.expect_fail:
            return XPASS if self.holds else XFAIL
        return PASS if self.holds else FAIL

    @property
    def ok(self) -> bool:
        return self.status in (PASS, XFAIL, INFO)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value if self.finite else None,
            "tolerance": self.tolerance,
            "relation": self.relation,
            "status": self.status,
            "note": self.note if self.finite else (self.note + " non-finite residual").strip(),
        }


@dataclass
class Report:
    command: str
    checks: list[Check] = field(default_factory=list)
    config: dict | None = None
    data: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    artifacts: list[str] = field(default_factory=list)
    timestamp: bool = False

    def add(self, name, value, tolerance=None, relation="le", expect_fail=False, note="") -> Check:
        c = Check(name, None if value is None else float(value), tolerance, relation, expect_fail, note)
        self.checks.append(c)
        return c

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> dict:
        counts = {s: 0 for s in (PASS, FAIL, XFAIL, XPASS, INFO)}
        for c in self.checks:
            counts[c.status] += 1
        return {"status": PASS if self.passed else FAIL, "counts": counts}

    def as_dict(self) -> dict:
        from . import __version__

        meta = {"package": "cmcgk", "version": __version__}
        if self.timestamp:
            # the only field allowed to differ between identical runs
            meta["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        return {
            "schema": SCHEMA,
            "command": self.command,
            "metadata": meta,
            "config": self.config,
            "checks": [c.as_dict() for c in self.checks],
            "data": self.data,
            "notes": list(self.notes),
            "artifacts": sorted(self.artifacts),
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, allow_nan=False) + "\n"

    def to_tsv(self) -> str:
        rows = ["name\tvalue\ttolerance\trelation\tstatus"]
        for c in self.checks:
            val = repr(c.value) if c.finite else ""  # missing or non-finite: left empty, never "nan"
            tol = "" if c.tolerance is None else repr(float(c.tolerance))
            rows.append(f"{c.name}\t{val}\t{tol}\t{c.relation}\t{c.status}")
        return "\n".join(rows) + "\n"

    def write(self, path: str | Path) -> list[Path]:
        """Write ``path`` (JSON) and ``<stem>_checks.tsv`` next to it."""
        path = Path(path)
        tsv = path.with_name(path.stem + "_checks.tsv")
        self.artifacts.append(tsv.name)
        path.write_text(self.to_json())
        tsv.write_text(self.to_tsv())
        return [path, tsv]

    def render_lines(self) -> list[str]:
        """Human-readable one-line-per-check rendering for the terminal."""
        out = []
        for c in self.checks:
            tol = "" if c.tolerance is None else f" ({'<=' if c.relation == 'le' else '>='} {c.tolerance:.1e})"
            val = f"{c.value:.3e}" if c.finite else "non-finite"
            out.append(f"{c.status:5s}  {c.name}: {val}{tol}")
        out.append(f"overall: {self.summary()['status']}")
        return out
