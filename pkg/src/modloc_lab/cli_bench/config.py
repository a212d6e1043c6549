"""Experiment configuration: flat key = value text with a section header
(diff-friendly), JSON accepted as an alternative.  Unknown keys are
rejected with field-level messages."""

import configparser
import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigurationError


def _floats(s):
    return tuple(float(tok) for tok in str(s).split(",") if tok.strip())


# key -> (converter, default, (lo, hi) or None)
_SCHEMAS = {
    "ej-fluct": {
        "beta": (float, 6.283185307179586, (1e-3, 1e3)),
        "tol_rel_diff": (float, 1e-6, (0.0, 1.0)),
        "rtol": (float, 1e-7, (0.0, 1.0)),
    },
    "thermal-map": {
        "betas": (_floats, (1.0, 6.283185307179586), None),
        "grid_n": (int, 100, (4, 100000)),
        "tol": (float, 1e-10, (0.0, 1.0)),
    },
    "entropy-scan": {
        "n_sites": (int, 2000, (64, 100000)),
        "lengths": (_floats, (8, 16, 32, 64, 128, 256), None),
        "tol_r2": (float, 0.995, (0.0, 1.0)),
        "thermal_n_sites": (int, 1200, (64, 100000)),
        "thermal_beta": (float, 6.283185307179586, (1e-3, 1e3)),
        "thermal_lengths": (_floats, (40, 80, 120, 160, 200, 240), None),
        "thermal_tol_r2": (float, 0.99, (0.0, 1.0)),
        "purity_sizes": (_floats, (512, 2048), None),
        "purity_tol": (float, 1e-8, (0.0, 1.0)),
        "eps_values": (_floats, (1.0, 0.5, 0.25, 0.125), None),
        "eps_interval": (int, 48, (8, 100000)),
    },
    "charge-scaling": {
        "n2_mass": (float, 1e-6, (0.0, 100.0)),
        "n2_ratio_lo": (float, 1.2e4, (1.0, 1e9)),
        "n2_ratio_hi": (float, 1.2e5, (1.0, 1e9)),
        "n2_samples": (int, 8, (6, 64)),
        "n2_tol_exponent": (float, 0.1, (0.0, 10.0)),
        "n2_tol_r2": (float, 0.999, (0.0, 1.0)),
        "n34_tol_exponent": (float, 0.1, (0.0, 10.0)),
        "oracle_tol": (float, 0.03, (0.0, 1.0)),
        "limit_tol": (float, 1e-3, (0.0, 1.0)),
    },
    "unruh": {
        "accelerations": (_floats, (0.5, 1.0, 2.0), None),
        "tol_balance": (float, 1e-3, (0.0, 10.0)),
        "control_min_defect": (float, 0.5, (0.0, 100.0)),
        "tol_strip": (float, 1e-10, (0.0, 1.0)),
        "tol_stationarity": (float, 1e-10, (0.0, 1.0)),
    },
    "crossing": {
        "mass": (float, 1.0, (1e-6, 1e3)),
        "grid_n": (int, 20, (4, 200)),
        "tol_crossing": (float, 1e-6, (0.0, 1.0)),
        "tol_cr_residual": (float, 1e-8, (0.0, 1.0)),
        "tol_involution": (float, 1e-8, (0.0, 1.0)),
        "tol_kms": (float, 1e-6, (0.0, 1.0)),
    },
    "zf-algebra": {
        "couplings": (_floats, (0.3, 1.0, 2.5), None),
        "tol_smatrix": (float, 1e-12, (0.0, 1.0)),
        "tol_exchange": (float, 1e-10, (0.0, 1.0)),
        "tol_double": (float, 1e-12, (0.0, 1.0)),
        "tol_associativity": (float, 1e-10, (0.0, 1.0)),
        "tol_leak": (float, 1e-8, (0.0, 1.0)),
        "k_max": (int, 4, (2, 6)),
    },
}

EXPERIMENTS = tuple(_SCHEMAS)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    params: dict
    strict: bool = False

    def __getitem__(self, key):
        return self.params[key]


def _coerce(experiment, raw):
    schema = _SCHEMAS[experiment]
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigurationError(
            f"[{experiment}] unknown keys: {', '.join(unknown)}; "
            f"expected: {', '.join(sorted(schema))}"
        )
    params = {}
    for key, (conv, default, bounds) in schema.items():
        if key in raw:
            try:
                val = conv(raw[key])
            except (TypeError, ValueError) as exc:
                raise ConfigurationError(f"[{experiment}] {key}: {exc}") from None
        else:
            val = default
        if bounds is not None and not (bounds[0] <= val <= bounds[1]):
            raise ConfigurationError(
                f"[{experiment}] {key} = {val} outside {bounds}"
            )
        params[key] = val
    return params


def load_config(experiment, path=None, strict=False):
    """Defaults when no file is given; otherwise the file's section for this
    experiment is parsed (INI key = value, or JSON)."""
    if experiment not in _SCHEMAS:
        raise ConfigurationError(
            f"unknown experiment {experiment!r}; choose from {', '.join(EXPERIMENTS)}"
        )
    raw = {}
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        stripped = text.lstrip()
        if stripped.startswith("{"):
            doc = json.loads(text)
            raw = doc.get(experiment, doc if set(doc) <= set(_SCHEMAS[experiment]) else None)
            if raw is None:
                raise ConfigurationError(
                    f"JSON config has no block for {experiment!r}"
                )
        else:
            cp = configparser.ConfigParser()
            try:
                cp.read_string(text)
            except configparser.Error as exc:
                raise ConfigurationError(f"config parse error: {exc}") from None
            if experiment not in cp:
                raise ConfigurationError(f"config has no [{experiment}] section")
            raw = dict(cp[experiment])
        if not raw:
            raise ConfigurationError(
                f"[{experiment}] parameter block is empty; expected keys: "
                f"{', '.join(sorted(_SCHEMAS[experiment]))}"
            )
    return ExperimentConfig(experiment, _coerce(experiment, raw), strict=strict)
