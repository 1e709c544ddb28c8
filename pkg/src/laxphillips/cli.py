"""
Scenario runner.

    laxphillips SCENARIO [SCENARIO ...] [-o REPORT.json] [--trunc-n N]
                [--grid-factor G] [--only TYPE[,TYPE]] [-v]

A scenario is a YAML file (or the name of a bundled scenario).  The report is
JSON; sweep tables are also written as CSV next to it.  Exit status: 0 when
every experiment passed, 1 when at least one failed, 2 on configuration
errors.  ``LAXPHILLIPS_THREADS`` sets how many experiments run concurrently.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .errors import LaxPhillipsError
from .experiments import DEFAULT_TOLERANCES, EXPERIMENTS, Context, run_experiment
from .scattering import scattering_from_record

SCHEMA_VERSION = "1.0"
SCENARIO_VERSION = 1
THREADS_ENV = "LAXPHILLIPS_THREADS"
BUNDLED = (
    "inner_single",
    "inner_triple",
    "inner_matrix",
    "constant_unitary",
    "anti_inner_single",
    "anti_inner_double",
    "smooth_phase",
)
_TOP_KEYS = {"schema_version", "name", "description", "k_dim", "trunc_n", "grid_factor", "seed",
             "scattering", "experiments", "tolerances"}

log = logging.getLogger("laxphillips")


class ConfigError(LaxPhillipsError):
    """Invalid scenario file; the message names the field and line."""


@dataclass
class Scenario:
    name: str
    k_dim: int
    scattering: dict
    experiments: list
    trunc_n: int = 512
    grid_factor: int = 4
    seed: int = 1729
    tolerances: dict = field(default_factory=dict)
    description: str = ""
    source: str = ""

    def context(self):
        S = scattering_from_record(self.scattering, self.k_dim)
        return Context(S, self.trunc_n, self.grid_factor, self.seed, dict(self.tolerances))

    def echo(self):
        return {
            "name": self.name,
            "description": self.description,
            "source": self.source,
            "k_dim": self.k_dim,
            "trunc_n": self.trunc_n,
            "grid_factor": self.grid_factor,
            "seed": self.seed,
            "scattering": self.scattering,
            "experiments": self.experiments,
            "tolerances": {**DEFAULT_TOLERANCES, **self.tolerances},
        }


def bundled_path(name):
    return resources.files("laxphillips") / "scenarios" / f"{name}.yaml"


def resolve(path_or_name):
    p = Path(path_or_name)
    if p.exists():
        return p
    if path_or_name in BUNDLED:
        return bundled_path(path_or_name)
    raise ConfigError(f"{path_or_name}: no such file or bundled scenario")


def _line(node, path):
    """Line number (1-based) of the YAML node at ``path`` (keys and indices), best effort."""
    for key in path:
        if isinstance(node, yaml.MappingNode):
            nxt = None
            for k, v in node.value:
                if k.value == key:
                    nxt = v
                    break
            if nxt is None:
                break
            node = nxt
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            break
    return node.start_mark.line + 1 if node is not None else 0


def load_scenario(path_or_name):
    """Parse and validate a scenario file."""
    path = resolve(path_or_name)
    text = Path(str(path)).read_text()
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f" line {mark.line + 1}" if mark else ""
        raise ConfigError(f"{path}:{where} YAML syntax error: {getattr(exc, 'problem', exc)}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    def fail(fieldpath, msg):
        line = _line(root, fieldpath)
        name = ".".join(str(p) if not isinstance(p, int) else f"[{p}]" for p in fieldpath).replace(".[", "[")
        raise ConfigError(f"{path}: line {line}: field '{name}': {msg}")

    unknown = set(data) - _TOP_KEYS
    if unknown:
        fail([sorted(unknown)[0]], "unknown field")
    version = data.get("schema_version", SCENARIO_VERSION)
    if version != SCENARIO_VERSION:
        fail(["schema_version"], f"unsupported version {version!r} (expected {SCENARIO_VERSION})")
    for key in ("name", "k_dim", "scattering", "experiments"):
        if key not in data:
            raise ConfigError(f"{path}: missing required field '{key}'")

    def positive_int(key, default=None):
        val = data.get(key, default)
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            fail([key], f"must be a positive integer, got {val!r}")
        return val

    k_dim = positive_int("k_dim")
    trunc_n = positive_int("trunc_n", 512)
    grid_factor = positive_int("grid_factor", 4)
    seed = data.get("seed", 1729)
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        fail(["seed"], f"must be a non-negative integer, got {seed!r}")
    if grid_factor < 4:
        fail(["grid_factor"], "must be at least 4 (anti-aliasing rule)")

    tolerances = data.get("tolerances") or {}
    if not isinstance(tolerances, dict):
        fail(["tolerances"], "must be a mapping")
    for key, val in tolerances.items():
        if key not in DEFAULT_TOLERANCES:
            fail(["tolerances", key], f"unknown tolerance (known: {', '.join(DEFAULT_TOLERANCES)})")
        if not isinstance(val, (int, float)) or isinstance(val, bool) or not val > 0:
            fail(["tolerances", key], f"must be a positive number, got {val!r}")
    tolerances = {k: float(v) for k, v in tolerances.items()}

    exps = data["experiments"]
    if not isinstance(exps, list) or not exps:
        fail(["experiments"], "must be a non-empty list")
    experiments = []
    for i, e in enumerate(exps):
        if isinstance(e, str):
            e = {"type": e}
        if not isinstance(e, dict) or "type" not in e:
            fail(["experiments", i], "each experiment needs a 'type'")
        if e["type"] not in EXPERIMENTS:
            fail(["experiments", i, "type"], f"unknown experiment type {e['type']!r} (known: {', '.join(EXPERIMENTS)})")
        params = e.get("parameters") or {}
        if not isinstance(params, dict):
            fail(["experiments", i, "parameters"], "must be a mapping")
        experiments.append({"type": e["type"], "parameters": params})

    scattering = data["scattering"] or {}
    if not isinstance(scattering, dict):
        fail(["scattering"], "must be a mapping")
    try:
        scattering_from_record(scattering, k_dim)
    except (LaxPhillipsError, ValueError, TypeError, KeyError) as exc:
        fail(["scattering"], str(exc))

    return Scenario(
        name=str(data["name"]),
        k_dim=k_dim,
        scattering=scattering,
        experiments=experiments,
        trunc_n=trunc_n,
        grid_factor=grid_factor,
        seed=seed,
        tolerances=tolerances,
        description=str(data.get("description", "")),
        source=str(path),
    )


def _threads():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        log.warning("ignoring non-integer %s=%r", THREADS_ENV, raw)
        return 1


def run_scenario(path_or_name, trunc_n=None, grid_factor=None, only=None):
    """Run every experiment of a scenario and return the report as a dict."""
    sc = load_scenario(path_or_name)
    if trunc_n is not None:
        sc.trunc_n = int(trunc_n)
    if grid_factor is not None:
        sc.grid_factor = int(grid_factor)
    exps = [e for e in sc.experiments if only is None or e["type"] in only]
    ctx = sc.context()
    # build the shared system once, before any concurrent use
    _ = ctx.system
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda e: run_experiment(ctx, e["type"], e["parameters"]), exps))
    records = [r.as_dict() for r in results]
    for rec, e in zip(records, exps):
        rec["parameters"] = e["parameters"]
    failed = [r["type"] for r in records if not r["passed"]]
    return {
        "schema_version": SCHEMA_VERSION,
        "generator": f"laxphillips {__version__}",
        "scenario": sc.echo(),
        "experiments": records,
        "summary": {"experiments": len(records), "failed": failed, "passed": not failed},
    }


def run_convergence(path_or_name, n_list=(128, 256, 512)):
    """Residual-versus-N table of the scenario's discretization checks."""
    sc = load_scenario(path_or_name)
    res = run_experiment(sc.context(), "convergence", {"n_list": list(n_list)})
    return res.as_dict()


def report_residuals(report):
    """Flatten every check value of a report into {experiment/check: value}."""
    out = {}
    for i, rec in enumerate(report["experiments"]):
        for c in rec["checks"]:
            out[f"{i}:{rec['type']}/{c['name']}"] = c["value"]
    return out


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_cell(v):
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return f"{v[0]!r}{v[1]:+}j"
    return v


def table_csv(table):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(table["columns"])
    for row in table["rows"]:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def write_outputs(reports, output):
    """Write the JSON report (one scenario: object, several: list) and CSV tables."""
    out = Path(output)
    payload = reports[0] if len(reports) == 1 else reports
    _atomic_write(out, json.dumps(payload, indent=2, sort_keys=False) + "\n")
    written = [out]
    for rep in reports:
        for i, rec in enumerate(rep["experiments"]):
            for tname, table in rec["tables"].items():
                p = out.with_name(f"{out.stem}.{rep['scenario']['name']}.{i}-{rec['type']}.{tname}.csv")
                _atomic_write(p, table_csv(table))
                written.append(p)
    return written


def _summary_lines(report):
    lines = [f"scenario {report['scenario']['name']} (N={report['scenario']['trunc_n']}, seed={report['scenario']['seed']})"]
    for rec in report["experiments"]:
        state = "PASS" if rec["passed"] else "FAIL"
        if rec["status"] == "skipped":
            state = "SKIP"
        line = f"  {state} {rec['type']} ({rec['seconds']:.1f}s)"
        if rec["message"]:
            line += f": {rec['message']}"
        lines.append(line)
        for c in rec["checks"]:
            if not c["passed"]:
                lines.append(f"       {c['name']} = {c['value']} (need {c['relation']} {c['tolerance']})")
    return lines


def build_parser():
    p = argparse.ArgumentParser(prog="laxphillips", description="Run Lax-Phillips scattering scenarios.")
    p.add_argument("scenarios", nargs="*", help="scenario files or bundled scenario names")
    p.add_argument("-o", "--output", help="write the JSON report here (CSV tables alongside)")
    p.add_argument("--trunc-n", type=int, help="override the truncation N")
    p.add_argument("--grid-factor", type=int, help="override the circle grid factor")
    p.add_argument("--only", help="comma-separated experiment types to run")
    p.add_argument("--list", action="store_true", help="list bundled scenarios and exit")
    p.add_argument("-v", "--verbose", action="count", default=0)
    p.add_argument("--version", action="version", version=f"laxphillips {__version__}")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    if args.list:
        print("\n".join(BUNDLED))
        return 0
    if not args.scenarios:
        print("laxphillips: no scenario given (use --list for bundled ones)", file=sys.stderr)
        return 2
    only = None
    if args.only:
        only = {s.strip() for s in args.only.split(",") if s.strip()}
        bad = only - set(EXPERIMENTS)
        if bad:
            print(f"laxphillips: unknown experiment type(s) in --only: {', '.join(sorted(bad))}", file=sys.stderr)
            return 2
    if args.trunc_n is not None and args.trunc_n < 1:
        print("laxphillips: --trunc-n must be positive", file=sys.stderr)
        return 2
    if args.grid_factor is not None and args.grid_factor < 4:
        print("laxphillips: --grid-factor must be at least 4", file=sys.stderr)
        return 2
    reports = []
    try:
        scenarios = [load_scenario(s) for s in args.scenarios]
    except ConfigError as exc:
        print(f"laxphillips: {exc}", file=sys.stderr)
        return 2
    for sc in scenarios:
        rep = run_scenario(sc.source, args.trunc_n, args.grid_factor, only)
        reports.append(rep)
        for line in _summary_lines(rep):
            print(line)
    if args.output:
        for p in write_outputs(reports, args.output):
            log.info("wrote %s", p)
    return 0 if all(r["summary"]["passed"] for r in reports) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
