"""Check reports shared by every verifier."""

import time
from dataclasses import dataclass, field

from .errors import TruncationEscape, WindowRejected

SCHEMA_VERSION = 1


@dataclass
class CheckReport:
    """Outcome counts of one check over a grid.

    ``passed + skipped + failed == grid_size`` always holds.  Skips are window
    rejections and truncation escapes, never failures.
    """

    check: str
    instance: str
    grid_size: int = 0
    passed: int = 0
    skipped: int = 0
    failed: int = 0
    first_failure: dict = None
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def ok(self):
        return self.failed == 0

    def record(self, outcome, witness=None):
        self.grid_size += 1
        if outcome is None:
            self.skipped += 1
        elif outcome:
            self.passed += 1
        else:
            self.failed += 1
            if self.first_failure is None:
                self.first_failure = witness if witness is not None else {}

    def attempt(self, fn, witness=None):
        """Run ``fn``; True passes, False fails, window problems skip."""
        try:
            ok = fn()
        except (WindowRejected, TruncationEscape):
            self.record(None)
            return None
        w = witness() if callable(witness) else witness
        self.record(bool(ok), None if ok else w)
        return ok

    def merge(self, other):
        self.grid_size += other.grid_size
        self.passed += other.passed
        self.skipped += other.skipped
        self.failed += other.failed
        if self.first_failure is None and other.first_failure is not None:
            self.first_failure = other.first_failure
        return self

    def to_json(self):
        out = {
            "check": self.check,
            "instance": self.instance,
            "gridSize": self.grid_size,
            "passed": self.passed,
            "skipped": self.skipped,
            "failed": self.failed,
        }
        if self.first_failure is not None:
            out["firstFailure"] = self.first_failure
        if self.details:
            out["details"] = self.details
        return out

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        return (f"{status} {self.check} [{self.instance}] grid={self.grid_size} "
                f"passed={self.passed} skipped={self.skipped} failed={self.failed}")


class timed:
    """Context manager that stores elapsed seconds on a report."""

    def __init__(self, report):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.wall_time = time.perf_counter() - self.t0
        return False
