"""``wsk <experiment> [--param value ...] [--config FILE] [--check] [--out DIR]``.

Parameters come from the experiment defaults, then an optional config file
(flat ``key = value`` lines, or a previous ``run.json``), then command-line
``--key value`` pairs. ``WSK_THREADS`` caps the sweep worker pool.
"""

import argparse
import json
import platform
import sys
from pathlib import Path

import numpy as np
import sklearn

from . import __version__
from .exceptions import ConfigError, WSKError
from .experiments import EXPERIMENTS, resolve_params, RUNNERS, worker_count

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG = 0, 1, 2


def read_config(path):
    """Parameter overrides from a flat key-value file or a ``run.json`` manifest.

    Returns ``(experiment or None, overrides)``.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc}") from None
    if path.suffix == ".json":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"{path} is not valid JSON: {exc}") from None
        return data.get("experiment"), dict(data.get("params", {}))
    overrides = {}
    experiment = None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "experiment":
            experiment = value
        else:
            overrides[key] = value
    return experiment, overrides


def _parse_pairs(extra):
    """``--key value`` pairs from the unparsed tail of the command line."""
    out = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--") or len(tok) <= 2:
            raise ConfigError(None, f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
            i += 1
        else:
            if i + 1 >= len(extra):
                raise ConfigError(key, "missing value")
            value = extra[i + 1]
            i += 2
        out[key.replace("-", "_")] = value
    return out


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_field(path, values, sidecar):
    np.savetxt(path, values, fmt="%.17g", delimiter=",")
    side = dict(sidecar, shape=list(values.shape))
    Path(str(path)[:-4] + ".json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if np.isfinite(f) else str(f)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_outputs(result, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, (header, rows) in sorted(result.tables.items()):
        write_csv(out / f"{name}.csv", header, rows)
    for name, (values, sidecar) in sorted(result.fields.items()):
        write_field(out / f"{name}.csv", values, sidecar)
    manifest = {
        "experiment": result.experiment,
        "params": result.params,
        "summary": result.summary,
        "checks": [{"name": c.name, "passed": bool(c.passed), "detail": c.detail} for c in result.checks],
        "versions": {"wsk": __version__, "numpy": np.__version__,
                     "scikit-learn": sklearn.__version__, "python": platform.python_version()},
    }
    (out / "run.json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    return out


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wsk", description="Weak-form surrogate identification experiments.", allow_abbrev=False,
        epilog="Any other --key value pair overrides an experiment parameter.")
    parser.add_argument("experiment", choices=EXPERIMENTS)
    parser.add_argument("--config", help="flat key = value file or a previous run.json")
    parser.add_argument("--check", action="store_true", help="exit non-zero if any acceptance check fails")
    parser.add_argument("--out", help="output directory (default: wsk-out/<experiment>)")
    parser.add_argument("--show-params", action="store_true", help="print resolved parameters and exit")
    return parser


def main(argv=None):
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        overrides = {}
        if args.config:
            file_exp, overrides = read_config(args.config)
            if file_exp is not None and file_exp != args.experiment:
                raise ConfigError("experiment", f"config is for {file_exp!r}, not {args.experiment!r}")
        overrides.update(_parse_pairs(extra))
        params = resolve_params(args.experiment, overrides)
        worker_count()  # validate WSK_THREADS early
    except ConfigError as exc:
        print(f"wsk: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.show_params:
        print(json.dumps(params, indent=2, sort_keys=True))
        return EXIT_OK
    try:
        result = RUNNERS[args.experiment](params)
    except WSKError as exc:
        print(f"wsk: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    out = write_outputs(result, args.out or Path("wsk-out") / args.experiment)
    for c in result.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  [{c.detail}]")
    print(f"wrote {out}")
    if args.check and not result.passed:
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
