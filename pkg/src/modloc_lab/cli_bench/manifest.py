"""Run manifest: per-check records, CSV emission with fixed numeric format,
file digests.  Everything except the timestamp is deterministic."""

import hashlib
import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .. import __version__

PASS = "pass"
FAIL = "fail"
UNVERIFIED = "unverified-by-design"


def format_float(x):
    """17 significant digits, '.' decimal separator (round-to-nearest-even
    is the IEEE default); bit-exact across platforms."""
    return f"{float(x):.16e}"


@dataclass(frozen=True)
class Record:
    name: str
    measured: float | None
    tolerance: float | None
    comparator: str                # "<", ">", "recorded", "none"
    verdict: str
    note: str = ""

    def as_dict(self):
        return {
            "name": self.name,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "comparator": self.comparator,
            "verdict": self.verdict,
            "note": self.note,
        }


def check_less(name, measured, tolerance, note=""):
    v = PASS if measured < tolerance else FAIL
    return Record(name, float(measured), float(tolerance), "<", v, note)


def check_greater(name, measured, tolerance, note=""):
    v = PASS if measured > tolerance else FAIL
    return Record(name, float(measured), float(tolerance), ">", v, note)


def check_bool(name, ok, note=""):
    return Record(name, 1.0 if ok else 0.0, None, "none", PASS if ok else FAIL, note)


def record_value(name, measured, note=""):
    return Record(name, float(measured), None, "recorded", PASS, note)


def unverified(name, note):
    return Record(name, None, None, "none", UNVERIFIED, note)


@dataclass
class RunManifest:
    experiment: str
    config: dict
    records: list = field(default_factory=list)
    files: dict = field(default_factory=dict)

    def extend(self, records):
        self.records.extend(records)

    @property
    def verdicts(self):
        return [r.verdict for r in self.records]

    @property
    def passed(self):
        return all(v in (PASS, UNVERIFIED) for v in self.verdicts)

    def write(self, out_dir):
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "experiment": self.experiment,
            "artifact_version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "config": self.config,
            "records": [r.as_dict() for r in self.records],
            "files": self.files,
            "passed": self.passed,
        }
        path = out_dir / f"{self.experiment}_manifest.json"
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                        encoding="utf-8")
        return path


def write_csv(out_dir, experiment, table_name, header, rows):
    """LF line endings, 17 significant digit floats; returns (path, digest)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{experiment}_{table_name}.csv"
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            format_float(v) if isinstance(v, (int, float)) else str(v)
            for v in row
        ))
    data = ("\n".join(lines) + "\n").encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return path, hashlib.sha256(data).hexdigest()
