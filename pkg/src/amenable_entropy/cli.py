"""Command line front end.

Each subcommand reads a TOML config, runs one experiment, and writes a JSON
report to --out (or stdout). Reports are deterministic for a fixed config
and seed: keys are sorted, rationals are rendered as "p/q" strings, and the
only run-dependent field is metadata.timestamp. Profile commands can also
write a CSV via --csv. Exit codes: 0 success, 2 config or window errors,
3 exhausted search budgets.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Any

from .bowen import (
    DEFAULT_ATOM_BUDGET,
    bowen_entropy_estimate,
    candidate_balls,
    critical_exponent,
    frostman_measure,
    outer_measure_M,
)
from .config import (
    ExperimentConfig,
    as_fraction,
    load_config,
    parse_int_range,
    parse_target,
)
from .entropy_top import OpenCoverSpec, htop_profile
from .errors import BudgetExceededError, ConfigError, CoverError, WindowError
from .group import folner_defect, growth_ratios, shulman_profile
from .measures import (
    ProductMeasure,
    local_entropy_profile,
    measure_entropy,
    sample,
    smb_estimate,
)
from .shift_space import MetricSpec, bowen_window, pattern_to_literal

__all__ = ["main"]

COMMANDS = (
    "folner-check",
    "htop",
    "bowen",
    "local-entropy",
    "smb",
    "vp-check",
    "duality-check",
)


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _fail(code: int, kind: str, exc: Exception) -> int:
    err = {"error": {"kind": kind, "message": str(exc), "exit_code": code}}
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def _unit_factor(units: str) -> float:
    return 1.0 if units == "nats" else 1.0 / math.log(2.0)


def _check_range(cfg: ExperimentConfig, ns: list[int], where: str) -> list[int]:
    top = cfg.folner.max_index()
    for n in ns:
        if n < 1 or (top is not None and n > top):
            raise ConfigError(f"{where}: index {n} outside the Folner sequence")
    return ns


def _measure_label(mu: ProductMeasure) -> str:
    if mu.kind == "bernoulli":
        return "bernoulli(" + ",".join(str(p) for p in mu.probs) + ")"
    rows = ";".join(
        "[" + ",".join(str(v) for v in row) + "]" for row in mu.transition
    )
    return f"markov({rows})"


def _sampling_window(cfg: ExperimentConfig, eps: Fraction, n_top: int) -> list:
    metric = MetricSpec(cfg.group)
    window = bowen_window(metric, cfg.folner.subset(n_top), eps)
    return sorted(window)


def _schedule(params: dict) -> list[tuple[Fraction, int, int]]:
    raw = params.get("schedule")
    if raw is not None:
        if not isinstance(raw, list) or not raw:
            raise ConfigError("params.schedule must be a nonempty list")
        out = []
        for i, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != 3:
                raise ConfigError(
                    f"params.schedule[{i}] must be [eps, n_min, n_max]"
                )
            eps = as_fraction(row[0], f"params.schedule[{i}].eps")
            if not isinstance(row[1], int) or not isinstance(row[2], int):
                raise ConfigError(f"params.schedule[{i}]: scales must be ints")
            out.append((eps, row[1], row[2]))
        return out
    for key in ("eps", "n_min", "n_max"):
        if key not in params:
            raise ConfigError(f"params.{key} is required (or give params.schedule)")
    eps = as_fraction(params["eps"], "params.eps")
    return [(eps, int(params["n_min"]), int(params["n_max"]))]


# ---------------------------------------------------------------- commands


def cmd_folner_check(cfg: ExperimentConfig, args, conv) -> tuple[dict, None]:
    p = cfg.params
    defect_ns = _check_range(
        cfg, parse_int_range(p.get("defect_ns", "2..12"), "params.defect_ns"),
        "params.defect_ns",
    )
    growth_ns = _check_range(
        cfg, parse_int_range(p.get("growth_ns", "2..20"), "params.growth_ns"),
        "params.growth_ns",
    )
    sh_max = p.get("shulman_n_max", 12)
    if not isinstance(sh_max, int) or sh_max < 2:
        raise ConfigError("params.shulman_n_max must be an integer >= 2")
    _check_range(cfg, [sh_max], "params.shulman_n_max")

    defects = []
    for g in cfg.group.generators():
        rows = [
            [n, folner_defect(cfg.group, cfg.folner.subset(n), g)]
            for n in defect_ns
        ]
        defects.append({"generator": list(g), "rows": rows})
    profile = shulman_profile(cfg.folner, sh_max)
    growth = growth_ratios(cfg.folner, growth_ns)
    payload = {
        "defects": defects,
        "shulman": {
            "n_max": sh_max,
            "constant": max(r for _, r in profile),
            "rows": [[n, r] for n, r in profile],
        },
        "growth": {
            "rows": [[n, size, ratio] for n, size, ratio in growth.rows],
            "sizes_increasing": growth.sizes_increasing,
        },
    }
    return payload, None


def cmd_htop(cfg: ExperimentConfig, args, conv) -> tuple[dict, list]:
    space = cfg.require_space()
    p = cfg.params
    depth = p.get("depth", 0)
    if not isinstance(depth, int) or depth < 0:
        raise ConfigError("params.depth must be a nonnegative integer")
    ns = _check_range(cfg, parse_int_range(p.get("ns", "1..8"), "params.ns"),
                      "params.ns")
    rows = htop_profile(space, OpenCoverSpec(depth), cfg.folner, ns)
    out_rows = [
        {"n": r.n, "folner_size": r.folner_size, "count": r.count,
         "value": conv(r.value)}
        for r in rows
    ]
    payload = {"depth": depth, "rows": out_rows, "estimate": conv(rows[-1].value)}
    csv_rows = [["n", "folner_size", "count", "value"]] + [
        [r.n, r.folner_size, r.count, conv(r.value)] for r in rows
    ]
    return payload, csv_rows


def cmd_bowen(cfg: ExperimentConfig, args, conv) -> tuple[dict, None]:
    space = cfg.require_space()
    p = cfg.params
    z = parse_target(p.get("target"))
    sched = _schedule(p)
    for _, n_min, n_max in sched:
        _check_range(cfg, [n_min, n_max], "params.schedule")
    report = bowen_entropy_estimate(
        z, space, cfg.folner, sched, budget_atoms=args.budget_atoms
    )
    payload = {
        "schedule": [
            {
                "eps": r.eps,
                "n_min": r.n_min,
                "n_max": r.n_max,
                "s_hat": conv(r.s_hat),
                "window_ratio": r.window_ratio,
            }
            for r in report.rows
        ],
        "estimate": conv(report.estimate),
    }
    grid = p.get("s_grid", [])
    if grid:
        eps, n_min, n_max = sched[0]
        family = candidate_balls(space, cfg.folner, eps, n_min, n_max, z)
        rows = []
        for raw_s in grid:
            s = float(as_fraction(raw_s, "params.s_grid"))
            res = outer_measure_M(z, family, s, budget_atoms=args.budget_atoms)
            rows.append(
                {
                    "s": s,
                    "value_lower": res.value_lower,
                    "value_upper": res.value_upper,
                    "value_float": float(res.value_upper),
                    "exact": res.exact,
                    "method": res.method,
                    "certificate": [list(c) for c in res.certificate]
                    if res.certificate
                    else None,
                }
            )
        payload["outer_measures"] = rows
    return payload, None


def cmd_local_entropy(cfg: ExperimentConfig, args, conv) -> tuple[dict, list]:
    mu = cfg.require_measure()
    p = cfg.params
    raw_eps = p.get("eps", "1/2")
    eps_list = [
        as_fraction(e, "params.eps")
        for e in (raw_eps if isinstance(raw_eps, list) else [raw_eps])
    ]
    ns = _check_range(cfg, parse_int_range(p.get("ns", "1..40"), "params.ns"),
                      "params.ns")
    seed = args.seed if args.seed is not None else int(p.get("seed", 0))
    metric = MetricSpec(cfg.group)
    window = _sampling_window(cfg, min(eps_list), max(ns))
    x = sample(mu, window, seed)
    profiles = []
    csv_rows = [["eps", "n", "value"]]
    for eps in sorted(eps_list, reverse=True):
        est = local_entropy_profile(mu, metric, x, cfg.folner, eps, ns)
        profiles.append(
            {
                "eps": eps,
                "rows": [[n, conv(v)] for n, v in est.values],
                "liminf_proxy": conv(est.liminf_proxy),
                "limsup_proxy": conv(est.limsup_proxy),
            }
        )
        csv_rows += [[str(eps), n, conv(v)] for n, v in est.values]
    payload = {"seed": seed, "profiles": profiles,
               "entropy_exact": conv(measure_entropy(mu))}
    return payload, csv_rows


def cmd_smb(cfg: ExperimentConfig, args, conv) -> tuple[dict, list]:
    mu = cfg.require_measure()
    p = cfg.params
    ns = _check_range(cfg, parse_int_range(p.get("ns", "1..40"), "params.ns"),
                      "params.ns")
    seed = args.seed if args.seed is not None else int(p.get("seed", 0))
    window = _sampling_window(cfg, Fraction(1, 2), max(ns))
    x = sample(mu, window, seed)
    est = smb_estimate(mu, x, cfg.folner, ns)
    payload = {
        "seed": seed,
        "rows": [[n, conv(v)] for n, v in est.values],
        "liminf_proxy": conv(est.liminf_proxy),
        "limsup_proxy": conv(est.limsup_proxy),
        "entropy_exact": conv(measure_entropy(mu)),
    }
    csv_rows = [["n", "value"]] + [[n, conv(v)] for n, v in est.values]
    return payload, csv_rows


def cmd_vp_check(cfg: ExperimentConfig, args, conv) -> tuple[dict, None]:
    space = cfg.require_space()
    p = cfg.params
    z = parse_target(p.get("target"))
    sched = _schedule(p)
    eps, n_min, n_max = sched[0]
    _check_range(cfg, [n_min, n_max], "params")
    tol = float(p.get("tolerance", 0.05))
    ns = _check_range(
        cfg,
        parse_int_range(p.get("proxy_ns", p.get("ns", "1..40")),
                        "params.proxy_ns"),
        "params.proxy_ns",
    )
    seed = args.seed if args.seed is not None else int(p.get("seed", 0))
    s_hat = critical_exponent(
        z, space, cfg.folner, eps, n_min, n_max, budget_atoms=args.budget_atoms
    )
    metric = MetricSpec(cfg.group)
    proxy_eps = as_fraction(p.get("proxy_eps", "1/2"), "params.proxy_eps")
    window = _sampling_window(cfg, proxy_eps, max(ns))
    rows = []
    for i, mu in enumerate(cfg.all_measures()):
        x = sample(mu, window, seed + i)
        est = local_entropy_profile(mu, metric, x, cfg.folner, proxy_eps, ns)
        rows.append(
            {"measure": _measure_label(mu), "proxy": conv(est.liminf_proxy)}
        )
    best = max(range(len(rows)), key=lambda i: rows[i]["proxy"])
    payload = {
        "s_hat": conv(s_hat),
        "seed": seed,
        "eps": eps,
        "n_min": n_min,
        "n_max": n_max,
        "tolerance": tol,
        "measures": rows,
        "max_proxy": rows[best]["proxy"],
        "maximizer": rows[best]["measure"],
        "ok": rows[best]["proxy"] <= conv(s_hat) + tol,
    }
    return payload, None


def cmd_duality_check(cfg: ExperimentConfig, args, conv) -> tuple[dict, None]:
    space = cfg.require_space()
    p = cfg.params
    k_set = parse_target(p.get("target"))
    sched = _schedule(p)
    eps, n_min, n_max = sched[0]
    _check_range(cfg, [n_min, n_max], "params")
    s = float(as_fraction(p.get("s", "1"), "params.s"))
    family = candidate_balls(space, cfg.folner, eps, n_min, n_max, k_set)
    res = frostman_measure(k_set, family, s)
    payload = {
        "s": s,
        "eps": eps,
        "n_min": n_min,
        "n_max": n_max,
        "packing_value": res.value,
        "cover_value": res.cover_value,
        "gap": res.value - res.cover_value,
        "ok": res.value == res.cover_value,
        "support_size": sum(1 for _, m in res.measure if m > 0),
        "min_slack": min(res.ball_slacks) if res.ball_slacks else None,
        "masses": [
            [pattern_to_literal(pat), m] for pat, m in res.measure if m > 0
        ],
    }
    return payload, None


_DISPATCH = {
    "folner-check": cmd_folner_check,
    "htop": cmd_htop,
    "bowen": cmd_bowen,
    "local-entropy": cmd_local_entropy,
    "smb": cmd_smb,
    "vp-check": cmd_vp_check,
    "duality-check": cmd_duality_check,
}


def _write_output(payload: dict, args, command: str) -> None:
    meta = {
        "command": command,
        "config": str(args.config),
        "seed": args.seed,
        "units": args.units,
        "budget_atoms": args.budget_atoms,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    doc = _jsonable({"metadata": meta, **payload})
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_csv(rows: list, path: str) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh).writerows(rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amenable-entropy",
        description="Entropy experiments for shift actions of amenable groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="TOML config path")
        p.add_argument("--out", help="write the JSON report here (else stdout)")
        p.add_argument("--csv", help="also write profile rows as CSV")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--units", choices=("nats", "bits"), default="nats")
        p.add_argument(
            "--budget-atoms",
            type=int,
            default=DEFAULT_ATOM_BUDGET,
            help="atom count above which exact covering is abandoned",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print(
            json.dumps({"error": {"kind": "config",
                                  "message": "--seed must fit in u64",
                                  "exit_code": 2}}, sort_keys=True),
            file=sys.stderr,
        )
        return 2
    factor = _unit_factor(args.units)

    def conv(x: float) -> float:
        return x * factor

    try:
        cfg = load_config(args.config)
        payload, csv_rows = _DISPATCH[args.command](cfg, args, conv)
    except BudgetExceededError as e:
        return _fail(3, "budget", e)
    except (ConfigError, WindowError) as e:
        return _fail(2, "config", e)
    except CoverError as e:
        return _fail(2, "cover", e)
    _write_output(payload, args, args.command)
    if args.csv and csv_rows:
        _write_csv(csv_rows, args.csv)
    return 0


if __name__ == "__main__":
    sys.exit(main())
