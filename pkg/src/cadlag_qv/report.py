"""JSON report emission with a versioned schema."""

import csv
import json
import math

import numpy as np

SCHEMA_VERSION = 1


def jsonable(obj):
    """Recursively convert numpy scalars/arrays and report objects to JSON types."""
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    return obj


def make_report(command, **payload):
    return jsonable({"schema": SCHEMA_VERSION, "command": command, **payload})


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True)


def write_report(report, dest):
    with open(dest, "w") as fh:
        fh.write(dumps(report) + "\n")


PLOT_COLUMNS = ("level", "j1_distance", "uniform_distance", "value_at_t")


def write_plot_csv(rows, dest):
    """Per-level plot data: ``level, j1_distance, uniform_distance, value_at_t``."""
    with open(dest, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(PLOT_COLUMNS)
        for r in rows:
            w.writerow([r[0]] + [repr(float(v)) for v in r[1:]])
