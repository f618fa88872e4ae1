"""``lep-lab``: run configured experiments and write CSV data plus a JSON report.

    lep-lab list
    lep-lab run CONFIG.json [--out DIR] [--threads K]

Exit status is 0 iff every check of the run passes, 1 if some check fails,
2 on a usage or configuration error and 3 when the experiment itself raises.
"""

import argparse
import copy
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .experiments import EXPERIMENTS

SCHEMA_TEXT = """\
config schema (JSON object; every key except "experiment" has a default):
  experiment   one of the names printed by `lep-lab list`            (required)
  grid         {"half_width": >0, "num_points": odd integer >= 3}    lattice grid
  model        {"alpha": >=1, "box_half_width": >0,
                "num_points": power of two, "t_max": >0}             polyharmonic box
  sweep        experiment-specific sweep values (lists must be nonempty)
  tolerances   experiment-specific tolerances (all > 0)
  seed         integer seed for random batteries (default 0)
  out          output directory (default runs/<experiment>; --out overrides)
outputs: <out>/data/*.csv and <out>/report.json
"""


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending field."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass
class ExperimentReport:
    config: dict
    records: list
    summary: dict
    provenance: dict

    def to_json(self):
        return {"config": self.config, "records": self.records, "summary": self.summary, "provenance": self.provenance}


def _block_schema(props):
    return {"type": "object", "properties": props, "additionalProperties": False}


_GRID = _block_schema({"half_width": {"type": "number", "exclusiveMinimum": 0}, "num_points": {"type": "integer", "minimum": 3}})
_MODEL = _block_schema({
    "alpha": {"type": "number", "minimum": 1},
    "box_half_width": {"type": "number", "exclusiveMinimum": 0},
    "num_points": {"type": "integer", "minimum": 2},
    "t_max": {"type": "number", "exclusiveMinimum": 0},
})


def config_schema(exp):
    return {
        "type": "object",
        "required": ["experiment"],
        "additionalProperties": False,
        "properties": {
            "experiment": {"enum": list(EXPERIMENTS)},
            "grid": _GRID,
            "model": _MODEL,
            "sweep": _block_schema(exp.sweep_schema),
            "tolerances": _block_schema(exp.tol_schema),
            "seed": {"type": "integer", "minimum": 0},
            "out": {"type": "string"},
        },
    }


def _merge(defaults, given):
    out = copy.deepcopy(defaults)
    for key, val in given.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = val
    return out


def resolve_config(raw):
    """Validate ``raw`` and merge in the experiment defaults.

    Raises
    ------
    ConfigError
        With the dotted path of the first invalid field.
    """
    if not isinstance(raw, dict):
        raise ConfigError("", "config must be a JSON object")
    name = raw.get("experiment")
    if name not in EXPERIMENTS:
        valid = ", ".join(EXPERIMENTS)
        raise ConfigError("experiment", f"unknown experiment {name!r}; valid names: {valid}")
    exp = EXPERIMENTS[name]
    try:
        jsonschema.validate(raw, config_schema(exp))
    except jsonschema.ValidationError as err:
        path = ".".join(str(p) for p in err.absolute_path)
        raise ConfigError(path, err.message) from None
    cfg = _merge({"seed": 0, "out": f"runs/{name}", **exp.defaults}, raw)
    if "grid" in exp.blocks:
        n = cfg["grid"]["num_points"]
        if n % 2 == 0:
            raise ConfigError("grid.num_points", f"must be odd (symmetric grid with a center node), got {n}")
    if "model" in exp.blocks:
        m = cfg["model"]["num_points"]
        if m & (m - 1):
            raise ConfigError("model.num_points", f"must be a power of two, got {m}")
    return cfg


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_table(path, header, rows):
    """CSV with shortest round-trip floats; byte-identical for identical input."""
    lines = [header]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else None
    return obj


def run(cfg, out=None, threads=1):
    """Run a resolved config, write its outputs and return the report."""
    exp = EXPERIMENTS[cfg["experiment"]]
    out = Path(out or cfg["out"])
    data = out / "data"
    data.mkdir(parents=True, exist_ok=True)

    if threads > 1:
        pool = ThreadPoolExecutor(max_workers=threads)

        def pmap(fn, items):
            return list(pool.map(fn, items))

    else:
        pool = None

        def pmap(fn, items):
            return [fn(x) for x in items]

    try:
        result = exp.runner(cfg, pmap)
    except Exception as err:
        raise RuntimeError(f"experiment {exp.name!r} failed: {err}") from err
    finally:
        if pool is not None:
            pool.shutdown()

    for name, (header, rows) in result.tables.items():
        write_table(data / f"{name}.csv", header, rows)
    summary = {"pass": result.passed, "num_records": len(result.records), **result.metrics}
    report = ExperimentReport(
        config=cfg,
        records=result.records,
        summary=summary,
        provenance={"version": __version__, "timestamp": datetime.now(timezone.utc).isoformat()},
    )
    (out / "report.json").write_text(json.dumps(_jsonable(report.to_json()), indent=2) + "\n")
    return report


def list_experiments():
    width = max(len(n) for n in EXPERIMENTS)
    return "\n".join(f"{e.name:<{width}}  {e.description}  [{e.anchor}]" for e in EXPERIMENTS.values())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="lep-lab",
        description="Experiments on locally eventually positive semigroups.",
        epilog=SCHEMA_TEXT,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="list the available experiments")
    p_run = sub.add_parser(
        "run", help="run one experiment from a JSON config", epilog=SCHEMA_TEXT,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p_run.add_argument("config", type=Path)
    p_run.add_argument("--out", type=Path, default=None, help="output directory (overrides the config)")
    p_run.add_argument("--threads", type=int, default=1, help="worker threads for independent sweep points")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "list":
        print(list_experiments())
        return 0
    if args.threads < 1:
        print("lep-lab: error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        raw = json.loads(args.config.read_text())
        cfg = resolve_config(raw)
    except (OSError, json.JSONDecodeError) as err:
        print(f"lep-lab: error: cannot read config {args.config}: {err}", file=sys.stderr)
        return 2
    except ConfigError as err:
        print(f"lep-lab: error: invalid config field {err}", file=sys.stderr)
        return 2
    try:
        report = run(cfg, args.out, args.threads)
    except RuntimeError as err:
        print(f"lep-lab: error: {err}", file=sys.stderr)
        return 3
    status = "PASS" if report.summary["pass"] else "FAIL"
    print(f"{cfg['experiment']}: {status} ({report.summary['num_records']} checks)")
    return 0 if report.summary["pass"] else 1


if __name__ == "__main__":
    sys.exit(main())
