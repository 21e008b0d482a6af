"""Metric reports: values plus the provenance needed to trust them."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

PROVENANCE_KEYS = ("n", "episodes", "state_type", "reward", "policy", "seed")


@dataclass
class MetricReport:
    values: dict
    provenance: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def to_row(self, metric_keys=None) -> dict:
        """Flat dict for CSV output: provenance first, then metrics."""
        row = {k: self.provenance.get(k, "") for k in PROVENANCE_KEYS}
        for k, v in self.provenance.items():
            row.setdefault(k, v)
        keys = metric_keys if metric_keys is not None else self.values.keys()
        for k in keys:
            row[k] = self.values.get(k, math.nan)
        for k, v in self.flags.items():
            row[k] = int(bool(v))
        for k, v in self.timings.items():
            row[f"time_{k}"] = v
        return row

    def to_dict(self) -> dict:
        return {
            "values": self.values,
            "provenance": self.provenance,
            "flags": self.flags,
            "timings": self.timings,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MetricReport":
        return cls(
            dict(data["values"]),
            dict(data.get("provenance", {})),
            dict(data.get("flags", {})),
            dict(data.get("timings", {})),
        )

    def write_json(self, path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True), encoding="utf-8")
        return path

    @classmethod
    def read_json(cls, path) -> "MetricReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
