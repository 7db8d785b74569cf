"""Command-line front end.

Subcommands: stabilize, modes, sweep, ytilde, drift, excursion.  Every run
command requires a seed (flag --seed or environment ARW_SEED); nothing is
ever seeded from the clock.  A flat `key = value` config file can supply
defaults for any long flag; explicit flags win.

Exit codes: 0 success, 1 usage or parameter error, 2 budget exhaustion,
3 invariant violation under --check.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import carpet, harness
from .core import Configuration, ParameterError, Tapes, stabilize_greedy
from .rng import derive_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BUDGET = 2
EXIT_CHECK = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit2(message)


class SystemExit2(Exception):
    """Usage error carrying the message; mapped to exit code 1."""


def parse_config(path: str) -> dict:
    """Flat `key = value` file; keys mirror long flag names."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise ParameterError(f"{path}:{lineno}: empty key or value")
            values[key] = value
    return values


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ARW_SEED")
    if env is not None:
        return int(env)
    raise ParameterError("a seed is required: pass --seed or set ARW_SEED")


def _int_list(text):
    return [int(v) for v in str(text).split(",") if v.strip() != ""]


def _float_list(text):
    return [float(v) for v in str(text).split(",") if v.strip() != ""]


def cmd_stabilize(args) -> int:
    seed = _resolve_seed(args)
    config = Configuration.bernoulli(derive_seed(seed, "occupancy"), args.N, args.zeta)
    tapes = Tapes(derive_seed(seed, "tapes"), args.lam, args.N)
    initial = config.particle_count()
    res = stabilize_greedy(config, tapes, budget=args.budget)
    digest = hashlib.sha256(res.config.sites.tobytes()).hexdigest()[:16]
    print(f"N={args.N} zeta={args.zeta} lambda={args.lam} seed={seed}")
    print(f"J={res.jumps} instructions={res.consumed} particles={initial}")
    print(f"odometer: total={int(res.odometer.sum())} max={int(res.odometer.max())} "
          f"argmax={int(res.odometer.argmax())}")
    s = res.config.sites
    print(f"final: sleeping={int((s == -1).sum())} empty={int((s == 0).sum())} digest={digest}")
    if res.exhausted:
        print("budget exhausted; J is a lower bound", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_modes(args) -> int:
    seed = _resolve_seed(args)
    layout = carpet.build_layout(args.n, args.a)
    state = carpet.init_first_mode(args.zeta, layout, args.lam, seed, budget=args.budget)
    if args.trace:
        state.hole_trace = []
    if args.dump:
        print(carpet.dump_state(state))
    reports = []
    terminated = None
    exit_code = EXIT_OK
    try:
        while len(reports) < args.max_modes:
            if carpet.choose_hot(state) is None:
                terminated = harness.TERM_NO_ELIGIBLE
                break
            report = carpet.run_mode(state, check_properties=args.check)
            reports.append(report)
            if args.dump:
                print(carpet.dump_state(state))
            if report.inconclusive:
                terminated = harness.TERM_BUDGET
                break
            if not report.condition1:
                terminated = harness.TERM_CONDITION1
                break
            carpet.relabel_blocks(state)
        else:
            terminated = harness.TERM_MAX_MODES
    except carpet.PropertyViolation as exc:
        print(f"invariant violation: {' '.join(exc.violated)}", file=sys.stderr)
        return EXIT_CHECK
    j_total, _cfg, res = carpet.finalize_stabilization(state)
    if res.exhausted:
        terminated = harness.TERM_BUDGET
        exit_code = EXIT_BUDGET
    cell = harness.Cell(args.n, args.a, args.lam, args.zeta)
    result = harness.ReplicaResult(
        cell=cell, cell_index=0, replica_index=0, seed=seed,
        mode_reports=reports, J_total=j_total, terminated_by=terminated,
        free_final=state.free_total(), frozen_final=state.frozen_total(),
        defects_final=state.defect_total(), hole_trace=state.hole_trace or [],
    )
    paths = harness.export_results([result], args.out, traces=args.trace)
    print(f"modes={len(reports)} J_total={j_total} terminated_by={terminated}")
    for name, path in paths.items():
        print(f"{name}: {path}")
    return exit_code


def cmd_sweep(args) -> int:
    raw = parse_config(args.spec_file)
    if not raw:
        raise ParameterError(f"{args.spec_file}: empty sweep spec")
    known = {"n", "a", "lambda", "zeta", "replicas", "seed", "max-modes", "budget", "out", "trace"}
    unknown = set(raw) - known
    if unknown:
        raise ParameterError(f"{args.spec_file}: unknown keys {sorted(unknown)}")
    try:
        spec = harness.ExperimentSpec.grid(
            ns=_int_list(raw.get("n", "4")),
            a_values=_int_list(raw.get("a", "4")),
            lams=_float_list(raw.get("lambda", "0.5")),
            zetas=_float_list(raw.get("zeta", "0.97")),
            replicas=args.replicas or int(raw.get("replicas", "20")),
            master_seed=int(raw["seed"]) if "seed" in raw else _resolve_seed(args),
            max_modes=args.max_modes or int(raw.get("max-modes", harness.DEFAULT_MAX_MODES)),
            budget=args.budget or int(raw.get("budget", harness.DEFAULT_REPLICA_BUDGET)),
            trace_holes=args.trace or raw.get("trace", "0") not in ("0", "false", "no"),
        )
    except (KeyError, ValueError) as exc:
        raise ParameterError(f"{args.spec_file}: {exc}")
    out_dir = args.out if args.out != "results" else raw.get("out", args.out)
    results = harness.run_replicas(spec, jobs=args.jobs)
    paths = harness.export_results(results, out_dir, traces=spec.trace_holes)
    budget_hit = sum(r.terminated_by == harness.TERM_BUDGET for r in results)
    print(f"replicas={len(results)} budget_capped={budget_hit}")
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def cmd_ytilde(args) -> int:
    dist = harness.ytilde_pmf(args.v, args.lam, args.K)
    print(f"v={args.v} lambda={args.lam} K={args.K} delta={dist.delta:.12g}")
    for value, p in zip(dist.support, dist.pmf):
        print(f"P({int(value):+d}) = {p:.12g}")
    print(f"mean = {harness.ytilde_mean(dist):.12g}")
    print(f"mean_closed_form = {harness.ytilde_mean_analytic(args.v, args.lam, args.K):.12g}")
    return EXIT_OK


def cmd_drift(args) -> int:
    seed = _resolve_seed(args)
    cell = harness.Cell(args.n, args.a, args.lam, args.zeta)
    result = harness.run_replica(cell, seed, max_modes=args.max_modes,
                                 budget=args.budget, trace_holes=True)
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    with open(args.out, "w") as fh:
        for rec in result.hole_trace:
            fh.write(json.dumps({"block": rec["block"], "pblock": rec["pblock"],
                                 "j": rec["j"], "H": rec["H"], "T": rec["T"],
                                 "outcome": rec["outcome"]}) + "\n")
    stats = harness.hole_drift_stats(result.hole_trace, args.a)
    print(f"traces: {args.out}")
    print(json.dumps(stats, default=str))
    return EXIT_BUDGET if result.terminated_by == harness.TERM_BUDGET else EXIT_OK


def cmd_excursion(args) -> int:
    seed = _resolve_seed(args)
    law = harness.excursion_min_law(args.samples, seed, max_depth=args.max_depth)
    rows = ["k,empirical,theory,samples"]
    for k in range(1, args.max_depth + 1):
        rows.append(f"{k},{law.frequency(k):.10g},{law.theory(k):.10g},{args.samples}")
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        print(f"excursion law: {args.out}")
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="ringarw", description="Activated random walks on the ring")
    parser.add_argument("--config", help="flat key = value defaults file")
    parser.add_argument("--verbose", action="store_true", help="print backend and resolved parameters")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stabilize", help="greedy stabilization of a Bernoulli configuration")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=int, default=10**9)
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("modes", help="run the mode loop of the toppling procedure")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-modes", type=int, default=harness.DEFAULT_MAX_MODES)
    p.add_argument("--budget", type=int, default=harness.DEFAULT_REPLICA_BUDGET)
    p.add_argument("--out", default="results")
    p.add_argument("--check", action="store_true", help="verify invariants after every attempted emission")
    p.add_argument("--trace", action="store_true", help="record hole traces")
    p.add_argument("--dump", action="store_true", help="print state dumps between modes")
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("sweep", help="run a replica sweep from a spec file")
    p.add_argument("spec_file")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="results")
    p.add_argument("--replicas", type=int, help="override the spec file's replica count")
    p.add_argument("--max-modes", type=int, help="override the spec file's mode cap")
    p.add_argument("--budget", type=int, help="override the spec file's instruction budget")
    p.add_argument("--trace", action="store_true", help="force hole-trace recording")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("ytilde", help="print the reference displacement pmf and its mean")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--K", type=int, required=True)
    p.set_defaults(func=cmd_ytilde)

    p = sub.add_parser("drift", help="hole-trace JSONL from one replica")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--zeta", type=float, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-modes", type=int, default=harness.DEFAULT_MAX_MODES)
    p.add_argument("--budget", type=int, default=harness.DEFAULT_REPLICA_BUDGET)
    p.add_argument("--out", default="holes.jsonl")
    p.set_defaults(func=cmd_drift)

    p = sub.add_parser("excursion", help="empirical excursion-minimum law as CSV")
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-depth", type=int, default=20)
    p.add_argument("--out")
    p.set_defaults(func=cmd_excursion)

    return parser


_CONFIG_TYPES = {
    "N": int, "n": int, "a": int, "zeta": float, "lambda": float, "seed": int,
    "budget": int, "max-modes": int, "jobs": int, "samples": int,
    "max-depth": int, "out": str, "v": int, "K": int,
}


def _apply_config(parser, argv):
    """Pre-scan --config and turn its entries into parser defaults."""
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return
    values = parse_config(path)
    defaults = {}
    for key, value in values.items():
        if key not in _CONFIG_TYPES:
            raise ParameterError(f"{path}: unknown config key {key!r}")
        dest = "lam" if key == "lambda" else key.replace("-", "_")
        defaults[dest] = _CONFIG_TYPES[key](value)
    for action in parser._subparsers._group_actions[0].choices.values():
        action.set_defaults(**{k: v for k, v in defaults.items()
                               if any(a.dest == k for a in action._actions)})
        for a in action._actions:
            if a.dest in defaults:
                a.required = False


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        if args.verbose:
            from . import BACKEND

            settings = {k: v for k, v in vars(args).items() if k not in ("func", "verbose")}
            print(f"backend={BACKEND} {settings}", file=sys.stderr)
        return args.func(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
