"""Line-oriented PASS/FAIL reports with a machine-readable summary block."""

from __future__ import annotations

import json
import time


class Report:
    def __init__(self, title, seed=None):
        self.title = title
        self.seed = seed
        self.entries = []
        self._clock = time.perf_counter()
        self._last = self._clock

    def _elapsed(self):
        now = time.perf_counter()
        dt, self._last = now - self._last, now
        return dt

    def check(self, claim, passed, detail=""):
        self.entries.append(("PASS" if passed else "FAIL", claim, detail, self._elapsed()))
        return bool(passed)

    def skip(self, claim, reason):
        self.entries.append(("N/A", claim, reason, self._elapsed()))

    def extend(self, other, prefix=""):
        for status, claim, detail, dt in other.entries:
            self.entries.append((status, prefix + claim, detail, dt))

    @property
    def passed(self):
        return all(status != "FAIL" for status, *_ in self.entries)

    @property
    def failures(self):
        return [claim for status, claim, *_ in self.entries if status == "FAIL"]

    def counts(self):
        out = {"PASS": 0, "FAIL": 0, "N/A": 0}
        for status, *_ in self.entries:
            out[status] += 1
        return out

    def summary(self):
        return {
            "title": self.title,
            "seed": self.seed,
            "passed": self.passed,
            "counts": self.counts(),
            "failures": self.failures,
        }

    def render(self, timing=True):
        """Text form; ``timing=False`` gives byte-identical output across runs."""
        lines = [f"# {self.title}"]
        if self.seed is not None:
            lines.append(f"# seed: {self.seed}")
        for status, claim, detail, dt in self.entries:
            line = f"{status:4} {claim}"
            if detail:
                line += f" [{detail}]"
            if timing:
                line += f" ({dt:.3f}s)"
            lines.append(line)
        if timing:
            lines.append(f"# total time: {time.perf_counter() - self._clock:.3f}s")
        lines.append("--- summary ---")
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"
