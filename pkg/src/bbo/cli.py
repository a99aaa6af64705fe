"""Command-line entry point: ``bbo run | refine | summarize | list``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .harness import (
    METHODS,
    Settings,
    emit_curves,
    emit_traces,
    read_results,
    resolve_budget,
    run_experiment,
    run_metadata,
    summarize_all,
    write_metadata,
    write_results,
    write_summary,
)
from .harness.runner import settings_dict
from .objective import PROBLEM_NAMES, BudgetedEvaluator, get_problem
from .refine import GAMMA_C1, GAMMA_C2, plan_refinement, refine_search_space

log = logging.getLogger("bbo")


def _csv_list(text: str, universe) -> list[str]:
    items = [t.strip() for t in text.split(",") if t.strip()]
    if items == ["all"]:
        return list(universe)
    return items


def _budget(text: str):
    return text if text.lower().endswith("d") else int(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bbo", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment grid and write results")
    run.add_argument("--method", required=True, help="comma-separated methods or 'all'")
    run.add_argument("--problem", required=True, help="comma-separated problems or 'all'")
    run.add_argument("--budget", default="10d", type=_budget, help="evaluations per trial, or '10d'")
    run.add_argument("--trials", type=int, default=50)
    run.add_argument("--seed", type=int, default=0, help="base seed; trial i uses seed + i")
    run.add_argument("--out", required=True, type=Path)
    run.add_argument("--jobs", type=int, default=1)
    run.add_argument("--gamma-c1", type=float, default=GAMMA_C1)
    run.add_argument("--gamma-c2", type=float, default=GAMMA_C2)
    run.add_argument("--n-init", type=int, default=5)
    run.add_argument("--soo-k", type=int, default=3)
    run.add_argument("--eta", type=float, default=0.05)

    ref = sub.add_parser("refine", help="print the refinement plan and the refined bounds")
    ref.add_argument("--problem", required=True)
    ref.add_argument("--budget", default="10d", type=_budget)
    ref.add_argument("--seed", type=int, default=0)
    ref.add_argument("--gamma-c1", type=float, default=GAMMA_C1)
    ref.add_argument("--gamma-c2", type=float, default=GAMMA_C2)

    summ = sub.add_parser("summarize", help="rebuild summary and curves from results CSVs")
    summ.add_argument("--in", dest="in_dir", required=True, type=Path)
    summ.add_argument("--out", required=True, type=Path)

    sub.add_parser("list", help="list problems and methods")
    return p


def write_outputs(results, out_dir: Path, config: dict | None = None) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    by_problem: dict[str, list] = {}
    for r in results:
        by_problem.setdefault(r.problem, []).append(r)
    for problem, group in by_problem.items():
        written.append(write_results(group, out_dir / f"results_{problem}.csv"))
    series = summarize_all(results)
    written.append(write_summary(series, out_dir / "summary.csv"))
    if config is not None:
        written.append(write_metadata(run_metadata(results, config), out_dir / "metadata.json"))
    if series:
        written += emit_curves(series, out_dir)
        written += emit_traces(results, out_dir)
    return written


def cmd_run(args) -> int:
    methods = _csv_list(args.method, METHODS)
    problems = _csv_list(args.problem, PROBLEM_NAMES)
    settings = Settings(
        n_init=args.n_init, gamma_c1=args.gamma_c1, gamma_c2=args.gamma_c2, soo_k=args.soo_k, eta=args.eta
    )
    results = run_experiment(methods, problems, args.trials, args.budget, args.seed, settings, args.jobs)
    config = {
        "methods": methods,
        "problems": [get_problem(p).name for p in problems],
        "trials": args.trials,
        "budget": args.budget,
        "base_seed": args.seed,
        **settings_dict(settings),
    }
    for path in write_outputs(results, args.out, config):
        log.info("wrote %s", path)
    failed = [r for r in results if r.error]
    for r in failed:
        print(f"failed: {r.method} {r.problem} seed={r.seed}: {r.error}", file=sys.stderr)
    print(f"{len(results) - len(failed)}/{len(results)} trials completed; outputs in {args.out}")
    return 0


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{x:.17g}" for x in v) + "]"


def cmd_refine(args) -> int:
    problem = get_problem(args.problem)
    B = resolve_budget(args.budget, problem)
    plan = plan_refinement(B, problem.dim, args.gamma_c1, args.gamma_c2)
    ev = BudgetedEvaluator(problem, B, phase="refine")
    outcome = refine_search_space(ev, problem.space, plan.b_ref, np.random.default_rng(args.seed))
    sub = outcome.subspace
    lines = [
        f"problem: {problem.name}",
        f"dimension: {problem.dim}",
        f"budget: {B}",
        f"gamma: {plan.gamma:.17g}",
        f"b_ref: {plan.b_ref:.17g}",
        f"K: {plan.K}",
        f"cost: {plan.cost}",
        f"evaluations_used: {len(outcome.evaluations)}",
        f"axis_order: {list(outcome.dimension_order)}",
        f"lower: {_fmt_vec(sub.lower)}",
        f"upper: {_fmt_vec(sub.upper)}",
    ]
    if outcome.evaluations:
        lines.append(f"center_value: {outcome.center_value:.17g}")
    print("\n".join(lines))
    return 0


def cmd_summarize(args) -> int:
    files = sorted(Path(args.in_dir).glob("results_*.csv"))
    if not files:
        raise FileNotFoundError(f"no results_*.csv files in {args.in_dir}")
    results = [r for f in files for r in read_results(f)]
    for path in write_outputs(results, args.out):
        log.info("wrote %s", path)
    print(f"summarized {len(results)} trials from {len(files)} files into {args.out}")
    return 0


def cmd_list(args) -> int:
    print("problems:")
    for name in PROBLEM_NAMES:
        p = get_problem(name)
        print(f"  {name:<11} d={p.dim}  space={p.space!r}")
    print("methods:")
    for m in METHODS:
        print(f"  {m}")
    return 0


COMMANDS = {"run": cmd_run, "refine": cmd_refine, "summarize": cmd_summarize, "list": cmd_list}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except Exception as exc:
        print(f"bbo {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
