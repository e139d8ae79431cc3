"""Command-line interface.

Every subcommand prints a JSON (or CSV) result to stdout and can additionally
write its artifacts plus a ``manifest.json`` (sha256 checksums, configuration,
timestamp) into a directory given by ``--out``.  Options may come from a
config file (``--config``, JSON object or ``key = value`` lines); explicit
flags win over the file, and unknown keys are rejected.

Exit codes: 0 success / all checks passed; 1 a statistical check failed;
2 bad usage, parameters, or config; 3 a simulation cap was exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .battery import PROFILES, run_battery
from .constants import (
    alpha1,
    estimate_renewal_constants,
    estimate_symmetric_constants,
    stationary_mu,
)
from .errors import BadParameter, CapExceeded, MallowsimError
from .harness import (
    clt_check,
    mean_variance_scaling,
    parity_limit_check,
    size_bias_convergence,
)
from .parallel import default_workers, pool_context, run_partitioned, partition_counts
from .perms import cycle_counts, exact_distribution, exact_expectation, make_permutation
from .regen import (
    decompose_additive,
    decompose_antiadditive,
    occupation_distribution,
    sample_excursions,
    sample_symmetric_blocks,
    DEFAULT_STEP_CAP,
)
from .report import tv_distance
from .rng import RngStream
from .sampler import sample_finite, sample_finite_batch
from .harness import parse_statistic


class ConfigError(MallowsimError, ValueError):
    """Bad config file: unreadable, wrong shape, or unknown keys."""


@dataclass
class RunConfig:
    """Resolved options for one subcommand (flags merged over config file)."""

    command: str
    options: dict

    def get(self, key, default=None):
        v = self.options.get(key)
        return default if v is None else v

    def resolve_seed(self, default: int) -> int:
        seed = int(self.get("seed", default))
        self.options["seed"] = seed
        return seed

    def require(self, *keys):
        missing = [k for k in keys if self.options.get(k) is None]
        if missing:
            raise BadParameter(
                f"missing required option(s) for '{self.command}': "
                + ", ".join("--" + k.replace("_", "-") for k in missing)
            )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mallowsim",
        description="Simulation laboratory for cycle statistics of "
        "inversion-weighted random permutations (fixed q != 1).",
    )
    parser.add_argument("--version", action="version", version=f"mallowsim {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", type=str, default=None, help="config file (JSON or key=value lines)")
        sp.add_argument("--out", type=str, default=None, help="directory for artifacts + manifest.json")
        sp.add_argument("--format", choices=("json", "csv"), default=None, help="stdout format (default json)")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--verbose", action="store_true", default=None, help="progress logging on stderr")
        return sp

    sp = add("sample", "draw permutations and print them in one-line notation")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--reps", type=int, default=None)

    sp = add("exact", "exhaustive small-n distribution table or expectation")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--stat", type=str, default=None, help="statistic token (C or Ck) for an expectation")
    sp.add_argument("--cap", type=int, default=None, help="enumeration size cap (default 9)")

    sp = add("decompose", "additive and symmetric block decompositions of one permutation")
    sp.add_argument("--perm", type=str, default=None, help="comma-separated one-line notation")
    sp.add_argument("--q", type=float, default=None, help="sample a permutation instead (with --n)")
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--no-images", action="store_true", default=None, help="omit block images from output")

    sp = add("excursions", "i.i.d. excursion blocks of the infinite process (q < 1)")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--count", type=int, default=None)
    sp.add_argument("--imax", type=int, default=None)
    sp.add_argument("--max-steps", type=int, default=None)

    sp = add("symmetric-blocks", "harvest symmetric blocks from finite samples (q > 1)")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--imax", type=int, default=None)
    sp.add_argument("--include-boundary", action="store_true", default=None)

    sp = add("constants", "estimate renewal constants (mu, alpha, beta) from blocks")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--count", type=int, default=None, help="number of blocks to harvest")
    sp.add_argument("--imax", type=int, default=None)
    sp.add_argument("--ambient", type=int, default=None, help="sample size for q > 1 harvesting")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--max-steps", type=int, default=None)

    sp = add("alpha1", "closed q-series value of the fixed-point density (q < 1)")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--tol", type=float, default=None)

    sp = add("mu-check", "compare chain occupation against the stationary q-series law")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--burn-in", type=int, default=None)
    sp.add_argument("--jmax", type=int, default=None)
    sp.add_argument("--tv-threshold", type=float, default=None)

    sp = add("clt", "sample cycle statistics and test for normality")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--stats", type=str, default=None, help="comma list, e.g. C,C1,C2")
    sp.add_argument("--workers", type=int, default=None)

    sp = add("scaling", "mean/variance of one statistic across sizes")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--sizes", type=str, default=None, help="comma list of sizes")
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--stat", type=str, default=None)
    sp.add_argument("--workers", type=int, default=None)

    sp = add("parity", "odd-cycle laws at sizes n, n+1, n+2 (q > 1)")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--imax", type=int, default=None, help="number of odd sizes tracked")
    sp.add_argument("--tv-threshold", type=float, default=None)
    sp.add_argument("--workers", type=int, default=None)

    sp = add("size-bias", "covering-block lengths against the size-biased limit")
    sp.add_argument("--q", type=float, default=None)
    sp.add_argument("--sizes", type=str, default=None)
    sp.add_argument("--reps", type=int, default=None)
    sp.add_argument("--ref-samples", type=int, default=None)

    sp = add("validate", "run the full verification battery")
    sp.add_argument("--profile", choices=tuple(sorted(PROFILES)), default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--imax", type=int, default=None)

    return parser


_PARSER = _build_parser()


def _known_dests(command: str) -> set:
    sub_actions = None
    for action in _PARSER._actions:
        if isinstance(action, argparse._SubParsersAction):
            sub_actions = action.choices
    sp = sub_actions[command]
    skip = {"help", "config"}
    return {a.dest for a in sp._actions if a.dest not in skip}


def _load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}") from e
    try:
        obj = json.loads(text)
        if not isinstance(obj, dict):
            raise ConfigError("config JSON must be an object")
        raw = obj
    except json.JSONDecodeError:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            value = value.strip()
            try:
                raw[key.strip()] = json.loads(value)
            except json.JSONDecodeError:
                raw[key.strip()] = value
    return {str(k).replace("-", "_"): v for k, v in raw.items()}


def _resolve(args: argparse.Namespace) -> RunConfig:
    options = {
        k: v for k, v in vars(args).items() if k not in ("command", "config")
    }
    if args.config:
        file_opts = _load_config_file(args.config)
        known = _known_dests(args.command)
        unknown = sorted(set(file_opts) - known)
        if unknown:
            raise ConfigError(
                f"unknown config key(s) for '{args.command}': " + ", ".join(unknown)
            )
        for k, v in file_opts.items():
            if options.get(k) is None:
                options[k] = v
    return RunConfig(args.command, options)


def _parse_sizes(text) -> list:
    if isinstance(text, (list, tuple)):
        return [int(v) for v in text]
    try:
        return [int(part) for part in str(text).split(",") if part.strip()]
    except ValueError as e:
        raise BadParameter(f"bad size list {text!r}") from e


def _json_dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


@dataclass
class CommandOutput:
    exit_code: int
    stdout: str
    files: dict


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    if header:
        writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------


def _cmd_sample(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "n")
    q, n = float(cfg.get("q")), int(cfg.get("n"))
    reps = int(cfg.get("reps", 1))
    seed = cfg.resolve_seed(0)
    rng = RngStream(seed)
    rows = []
    remaining = reps
    chunk = max(1, (1 << 22) // max(n, 1))
    while remaining > 0:
        take = min(chunk, remaining)
        rows.append(sample_finite_batch(n, q, take, rng))
        remaining -= take
    samples = np.vstack(rows) if rows else np.empty((0, n), dtype=np.int64)
    if cfg.get("format", "json") == "csv":
        text = _csv_text(None, samples.tolist())
        return CommandOutput(0, text, {"samples.csv": text})
    payload = {
        "q": q,
        "n": n,
        "reps": reps,
        "seed": seed,
        "samples": samples.tolist(),
    }
    text = _json_dump(payload)
    return CommandOutput(0, text, {"samples.json": text})


def _cmd_exact(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "n")
    q, n = float(cfg.get("q")), int(cfg.get("n"))
    from .perms import ENUMERATION_CAP

    cap = int(cfg.get("cap", ENUMERATION_CAP))
    stat = cfg.get("stat")
    if stat is not None:
        name, size = parse_statistic(stat)
        from .perms import cycle_count_statistic, total_cycles_statistic

        fn = total_cycles_statistic() if size is None else cycle_count_statistic(size)
        payload = {
            "q": q,
            "n": n,
            "statistic": name,
            "expectation": exact_expectation(n, q, fn, cap=cap),
        }
        text = _json_dump(payload)
        return CommandOutput(0, text, {"exact.json": text})
    dist = exact_distribution(n, q, cap=cap)
    if cfg.get("format", "json") == "csv":
        rows = [
            [" ".join(str(int(v)) for v in img), int(inv), repr(float(p))]
            for img, inv, p in zip(
                dist.images, dist.inversion_counts, dist.probabilities
            )
        ]
        text = _csv_text(["permutation", "inversions", "probability"], rows)
        return CommandOutput(0, text, {"exact.csv": text})
    payload = {
        "q": q,
        "n": n,
        "total_mass": dist.total_mass(),
        "entries": [
            {
                "permutation": [int(v) for v in img],
                "inversions": int(inv),
                "probability": float(p),
            }
            for img, inv, p in zip(
                dist.images, dist.inversion_counts, dist.probabilities
            )
        ],
    }
    text = _json_dump(payload)
    return CommandOutput(0, text, {"exact.json": text})


def _cmd_decompose(cfg: RunConfig) -> CommandOutput:
    if cfg.get("perm") is not None:
        values = [int(v) for v in str(cfg.get("perm")).replace(" ", "").split(",") if v]
        w = make_permutation(values)
    else:
        cfg.require("q", "n")
        w = sample_finite(int(cfg.get("n")), float(cfg.get("q")), RngStream(cfg.resolve_seed(0)))
    include_images = not bool(cfg.get("no_images", False))
    payload = {
        "n": w.n,
        "permutation": list(w.image) if include_images else None,
        "additive": decompose_additive(w).to_dict(include_images),
        "antiadditive": decompose_antiadditive(w).to_dict(include_images),
    }
    text = _json_dump(payload)
    return CommandOutput(0, text, {"decomposition.json": text})


def _cmd_excursions(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "count")
    q, count = float(cfg.get("q")), int(cfg.get("count"))
    seed = cfg.resolve_seed(0)
    i_max = int(cfg.get("imax", 10))
    max_steps = int(cfg.get("max_steps", DEFAULT_STEP_CAP))
    blocks = sample_excursions(q, count, RngStream(seed), max_steps=max_steps)
    header = ["length"] + [f"c{i}" for i in range(1, i_max + 1)]
    rows = []
    for b in blocks:
        cc = cycle_counts(b.block)
        rows.append([b.length] + [cc.count_of(i) for i in range(1, i_max + 1)])
    if cfg.get("format", "json") == "csv":
        text = _csv_text(header, rows)
        return CommandOutput(0, text, {"excursions.csv": text})
    lengths = np.array([b.length for b in blocks], dtype=np.float64)
    payload = {
        "q": q,
        "count": count,
        "seed": seed,
        "mean_length": float(lengths.mean()) if count else None,
        "se": float(lengths.std(ddof=1) / np.sqrt(count)) if count > 1 else None,
        "rows": rows,
        "columns": header,
    }
    text = _json_dump(payload)
    return CommandOutput(0, text, {"excursions.json": text})


def _cmd_symmetric_blocks(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "n", "reps")
    q, n, reps = float(cfg.get("q")), int(cfg.get("n")), int(cfg.get("reps"))
    seed = cfg.resolve_seed(0)
    i_max = int(cfg.get("imax", 10))
    include_boundary = bool(cfg.get("include_boundary", False))
    blocks = sample_symmetric_blocks(
        q, n, reps, RngStream(seed), include_boundary=include_boundary
    )
    header = ["kind", "parity", "length"] + [f"c{2 * i}" for i in range(1, i_max + 1)]
    rows = []
    for b in blocks:
        cc = cycle_counts(b.block)
        rows.append(
            [b.kind, b.parity, b.length]
            + [cc.count_of(2 * i) for i in range(1, i_max + 1)]
        )
    if cfg.get("format", "json") == "csv":
        text = _csv_text(header, rows)
        return CommandOutput(0, text, {"symmetric_blocks.csv": text})
    pair_lengths = [b.length for b in blocks if b.kind == "pair"]
    payload = {
        "q": q,
        "n": n,
        "reps": reps,
        "seed": seed,
        "block_counts": {
            "pair": sum(1 for b in blocks if b.kind == "pair"),
            "central": sum(1 for b in blocks if b.kind == "central"),
        },
        "mean_pair_length": (
            float(np.mean(pair_lengths)) if pair_lengths else None
        ),
        "rows": rows,
        "columns": header,
    }
    text = _json_dump(payload)
    return CommandOutput(0, text, {"symmetric_blocks.json": text})


def _cmd_constants(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "count")
    q, count = float(cfg.get("q")), int(cfg.get("count"))
    seed = cfg.resolve_seed(0)
    i_max = int(cfg.get("imax", 10))
    workers = int(cfg.get("workers", 1))
    max_steps = int(cfg.get("max_steps", DEFAULT_STEP_CAP))
    rng = RngStream(seed)
    with pool_context(workers) as pool:
        if q < 1.0:
            report = estimate_renewal_constants(
                q, count, rng, i_max=i_max, max_steps=max_steps,
                pool=pool, worker_count=workers,
            )
        else:
            report = estimate_symmetric_constants(
                q, count, rng, i_max=i_max, ambient=cfg.get("ambient"),
                pool=pool, worker_count=workers,
            )
    text = _json_dump(report.to_json_dict())
    return CommandOutput(0, text, {"constants.json": text})


def _cmd_alpha1(cfg: RunConfig) -> CommandOutput:
    cfg.require("q")
    q = float(cfg.get("q"))
    tol = float(cfg.get("tol", 1e-14))
    val = alpha1(q, tol=tol)
    payload = {
        "q": q,
        "alpha1": val.value,
        "terms_used": val.terms_used,
        "truncation_bound": val.truncation_bound,
    }
    text = _json_dump(payload)
    return CommandOutput(0, text, {"alpha1.json": text})


def _cmd_mu_check(cfg: RunConfig) -> CommandOutput:
    cfg.require("q")
    q = float(cfg.get("q"))
    steps = int(cfg.get("steps", 1_000_000))
    burn = int(cfg.get("burn_in", min(10_000, steps // 10)))
    threshold = float(cfg.get("tv_threshold", 0.005))
    seed = cfg.resolve_seed(0)
    occ = occupation_distribution(q, steps, RngStream(seed), burn_in=burn)
    j_max = cfg.get("jmax")
    target = stationary_mu(q, j_max=int(j_max) if j_max is not None else None)
    width = max(occ.shape[0], target.shape[0])
    a = np.zeros(width)
    a[: occ.shape[0]] = occ
    b = np.zeros(width)
    b[: target.shape[0]] = target
    tv = 0.5 * float(np.abs(a - b).sum())
    payload = {
        "q": q,
        "steps": steps,
        "burn_in": burn,
        "seed": seed,
        "tv_distance": tv,
        "tv_threshold": threshold,
        "occupation": [float(v) for v in occ],
        "stationary": [float(v) for v in target],
        "passed": tv < threshold,
    }
    text = _json_dump(payload)
    return CommandOutput(0 if tv < threshold else 1, text, {"mu_check.json": text})


def _cmd_clt(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "n", "reps")
    q, n, reps = float(cfg.get("q")), int(cfg.get("n")), int(cfg.get("reps"))
    default_stats = "C,C2" if q > 1.0 else "C,C1,C2"
    tokens = [t for t in str(cfg.get("stats", default_stats)).split(",") if t.strip()]
    seed = cfg.resolve_seed(0)
    workers = int(cfg.get("workers", 1))
    with pool_context(workers) as pool:
        report = clt_check(q, n, reps, tokens, RngStream(seed), pool)
    text = _json_dump(report.to_dict())
    return CommandOutput(0 if report.passed else 1, text, {"clt.json": text})


def _cmd_scaling(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "sizes", "reps")
    q = float(cfg.get("q"))
    sizes = _parse_sizes(cfg.get("sizes"))
    reps = int(cfg.get("reps"))
    stat = str(cfg.get("stat", "C1"))
    seed = cfg.resolve_seed(0)
    workers = int(cfg.get("workers", 1))
    with pool_context(workers) as pool:
        report = mean_variance_scaling(q, sizes, reps, stat, RngStream(seed), pool)
    if cfg.get("format", "json") == "csv":
        header = [
            "n", "reps", "mean", "mean_se", "variance", "variance_se",
            "mean_over_n", "variance_over_n",
        ]
        rows = [
            [r.n, r.reps, r.mean, r.mean_se, r.variance, r.variance_se,
             r.mean_over_n, r.variance_over_n]
            for r in report.rows
        ]
        text = _csv_text(header, rows)
        return CommandOutput(0 if report.stabilized else 1, text, {"scaling.csv": text})
    text = _json_dump(report.to_dict())
    return CommandOutput(0 if report.stabilized else 1, text, {"scaling.json": text})


def _cmd_parity(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "n", "reps")
    q, n, reps = float(cfg.get("q")), int(cfg.get("n")), int(cfg.get("reps"))
    num_odd = int(cfg.get("imax", 3))
    threshold = float(cfg.get("tv_threshold", 0.02))
    seed = cfg.resolve_seed(0)
    workers = int(cfg.get("workers", 1))
    with pool_context(workers) as pool:
        report = parity_limit_check(
            q, n, reps, RngStream(seed), num_odd_sizes=num_odd, pool=pool
        )
    passed = report.same_parity.max_tv < threshold
    payload = report.to_dict()
    payload["tv_threshold"] = threshold
    payload["passed"] = passed
    text = _json_dump(payload)
    return CommandOutput(0 if passed else 1, text, {"parity.json": text})


def _cmd_size_bias(cfg: RunConfig) -> CommandOutput:
    cfg.require("q", "sizes", "reps")
    q = float(cfg.get("q"))
    sizes = _parse_sizes(cfg.get("sizes"))
    reps = int(cfg.get("reps"))
    ref_samples = int(cfg.get("ref_samples", 200_000))
    seed = cfg.resolve_seed(0)
    report = size_bias_convergence(q, sizes, reps, RngStream(seed), ref_samples)
    text = _json_dump(report.to_dict())
    return CommandOutput(0 if report.converged else 1, text, {"size_bias.json": text})


def _cmd_validate(cfg: RunConfig) -> CommandOutput:
    profile = str(cfg.get("profile", "desk"))
    seed = cfg.resolve_seed(42)
    workers = int(cfg.get("workers", default_workers()))
    i_max = int(cfg.get("imax", 10))
    report = run_battery(profile=profile, seed=seed, workers=workers, i_max=i_max)
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    text = report.to_json()
    return CommandOutput(0 if report.overall_passed else 1, text, {"report.json": text})


_COMMANDS = {
    "sample": _cmd_sample,
    "exact": _cmd_exact,
    "decompose": _cmd_decompose,
    "excursions": _cmd_excursions,
    "symmetric-blocks": _cmd_symmetric_blocks,
    "constants": _cmd_constants,
    "alpha1": _cmd_alpha1,
    "mu-check": _cmd_mu_check,
    "clt": _cmd_clt,
    "scaling": _cmd_scaling,
    "parity": _cmd_parity,
    "size-bias": _cmd_size_bias,
    "validate": _cmd_validate,
}


def _write_artifacts(
    outdir: str, command: str, cfg: RunConfig, files: dict, elapsed: float
) -> None:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    checksums = {}
    for name, content in files.items():
        data = content.encode() if isinstance(content, str) else content
        tmp = out / (name + ".tmp")
        tmp.write_bytes(data)
        os.replace(tmp, out / name)
        checksums[name] = hashlib.sha256(data).hexdigest()
    manifest = {
        "command": command,
        "package_version": __version__,
        "options": {
            k: v for k, v in cfg.options.items() if v is not None and k != "out"
        },
        "outputs": checksums,
        "created_unix": time.time(),
        "wall_seconds": round(elapsed, 6),
    }
    tmp = out / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    os.replace(tmp, out / "manifest.json")


def main(argv=None) -> int:
    args = _PARSER.parse_args(argv)
    if args.command is None:
        _PARSER.print_help(sys.stderr)
        return 2
    try:
        cfg = _resolve(args)
        if cfg.get("verbose"):
            logging.basicConfig(
                level=logging.INFO,
                stream=sys.stderr,
                format="%(asctime)s %(name)s: %(message)s",
            )
        start = time.perf_counter()
        result = _COMMANDS[args.command](cfg)
        elapsed = time.perf_counter() - start
        sys.stdout.write(result.stdout)
        if cfg.get("out"):
            _write_artifacts(
                str(cfg.get("out")), args.command, cfg, result.files, elapsed
            )
        return result.exit_code
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except MallowsimError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
