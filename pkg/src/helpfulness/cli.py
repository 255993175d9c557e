"""Command-line drivers: plan, table, respond and risk-sweep."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path
from typing import Sequence, TextIO

from helpfulness.core import AgentId, CostModel, Problem
from helpfulness.domainfile import DomainError, DomainFile, load_domain
from helpfulness.foodworld import KitchenLayout, build_kitchen
from helpfulness.interaction import (
    Belief,
    FailurePolicy,
    RecognitionError,
    delta_grid,
    responsive_robot,
    risk_sweep,
    simulate_episode,
)
from helpfulness.interaction.simulate import MetricSnapshot, remaining_solo, remaining_team
from helpfulness.metrics import HelpfulnessReport, format_number
from helpfulness.planner import default_bundle, plan_joint, plan_single

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_SOLUTION = 2
EXIT_RECOGNITION = 3
TABLE_DIGITS = 3


class UsageError(Exception):
    pass


def _problem(domain: DomainFile, layout: str, dish: str) -> Problem:
    try:
        return Problem(domain.kitchen(layout), domain.dish(dish), CostModel())
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def cmd_plan(domain: DomainFile, layout: str, dish: str, agents: str, out: TextIO) -> int:
    problem = _problem(domain, layout, dish)
    if agents == "solo":
        plan = plan_single(problem, AgentId.HUMAN)
    else:
        plan = plan_joint(problem)
    if not plan.solved:
        print("no solution", file=out)
        return EXIT_NO_SOLUTION
    for i, step in enumerate(plan.steps, start=1):
        print(f"{i}: {step}", file=out)
    print(f"cost: {format_number(plan.total_cost)}", file=out)
    return EXIT_OK


TABLE_HEADER = ["dish", "layout", "cost_solo", "cost_team", "H", "H_N", "H_R"]


def table_rows(domain: DomainFile, layouts: Sequence[KitchenLayout] | None = None) -> list[list[str]]:
    rows = []
    for dish in domain.dishes:
        for layout in layouts or domain.layouts:
            problem = Problem(build_kitchen(layout), dish, CostModel())
            solo = plan_single(problem).total_cost
            team = plan_joint(problem).total_cost
            rep = HelpfulnessReport.from_costs(solo, team, team, solo)
            rows.append([dish.dish_name, layout.name] + rep.row(TABLE_DIGITS))
    return rows


def cmd_table(domain: DomainFile, out: TextIO) -> int:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    writer.writerows(table_rows(domain))
    return EXIT_OK


RESPOND_HEADER = ["step", "remaining_solo_cost", "remaining_team_cost", "H", "H_N", "H_R"]


def respond_rows(
    domain: DomainFile, layout: str, dish: str, observe_budget: int, alpha: float, beta: float
) -> list[MetricSnapshot]:
    """Snapshots of a responsive episode, led by one for the initial state."""
    problem = _problem(domain, layout, dish)
    goal, model = problem.goal, problem.cost_model
    belief = Belief.from_prior(domain.dishes, beta=beta)
    robot = responsive_robot(observe_budget, default_bundle(problem, alpha))
    episode = simulate_episode(problem, goal, robot_policy=robot, belief=belief)
    start = problem.initial_state
    solo, team = remaining_solo(start, goal, model), remaining_team(start, goal, model)
    first = HelpfulnessReport.from_costs(solo, solo, team, solo)
    return [MetricSnapshot(0, solo, team, first.H, first.H_N, first.H_R), *episode.snapshots]


def cmd_respond(
    domain: DomainFile, layout: str, dish: str, observe_budget: int, alpha: float, beta: float, out: TextIO
) -> int:
    rows = respond_rows(domain, layout, dish, observe_budget, alpha, beta)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RESPOND_HEADER)
    writer.writerows(r.row() for r in rows)
    return EXIT_OK


def parse_grid(text: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
        return delta_grid(start, stop, step)
    except ValueError as exc:
        raise UsageError(f"bad --delta-grid {text!r}, expected a:b:step ({exc})") from None


def cmd_risk_sweep(
    domain: DomainFile,
    layout: str,
    dishes: Sequence[str],
    deltas: Sequence[float],
    trials: int,
    seed: int,
    beta: float,
    observe_budget: int,
    failure_policy: FailurePolicy,
    trials_out: TextIO,
    aggregate_out: TextIO,
) -> int:
    if trials < 1:
        raise UsageError("--trials must be at least 1")
    try:
        goals = [domain.dish(name) for name in dishes]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    problem = _problem(domain, layout, goals[0].dish_name)
    table = risk_sweep(problem, goals, None, deltas, trials, seed, beta, observe_budget, failure_policy)
    table.write_trials(trials_out)
    table.write_aggregate(aggregate_out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="helpfulness", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, dish=True, layout=True):
        p.add_argument("--domain", metavar="PATH", help="domain file (default: bundled Foodworld)")
        if layout:
            p.add_argument("--layout", metavar="NAME", default="organized")
        if dish:
            p.add_argument("--dish", metavar="NAME", required=True)
        p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    p = sub.add_parser("plan", help="print an optimal plan and its cost")
    common(p)
    p.add_argument("--agents", choices=("solo", "joint"), default="joint")

    p = sub.add_parser("table", help="helpfulness of optimal joint plans, one row per dish and layout")
    common(p, dish=False, layout=False)

    p = sub.add_parser("respond", help="per-step metrics of a responsive episode")
    common(p)
    p.add_argument("--observe-budget", type=int, default=2, metavar="N")
    p.add_argument("--alpha", type=float, default=1.0, metavar="F")
    p.add_argument("--beta", type=float, default=1.0, metavar="F")

    p = sub.add_parser("risk-sweep", help="mean relative helpfulness across risk bounds")
    common(p, dish=False)
    p.add_argument("--dishes", metavar="A,B,C", help="comma-separated goal set (default: every dish)")
    p.add_argument("--delta-grid", default="0:1:0.1", metavar="a:b:step")
    p.add_argument("--trials", type=int, default=50, metavar="N")
    p.add_argument("--seed", type=int, required=True, metavar="N")
    p.add_argument("--beta", type=float, default=1.0, metavar="F")
    p.add_argument("--observe-budget", type=int, default=0, metavar="N")
    p.add_argument(
        "--failure-policy", choices=[f.value for f in FailurePolicy], default=FailurePolicy.HALT_ON_FAILURE.value
    )
    p.add_argument("--aggregate-out", metavar="PATH", help="aggregate CSV (default: next to --out, or stdout)")
    return parser


def _run(args, stdout: TextIO) -> int:
    domain = load_domain(args.domain)
    sink = io.StringIO()
    if args.command == "plan":
        code = cmd_plan(domain, args.layout, args.dish, args.agents, sink)
    elif args.command == "table":
        code = cmd_table(domain, sink)
    elif args.command == "respond":
        if args.observe_budget < 0:
            raise UsageError("--observe-budget must be non-negative")
        code = cmd_respond(domain, args.layout, args.dish, args.observe_budget, args.alpha, args.beta, sink)
    else:
        names = args.dishes.split(",") if args.dishes else [d.dish_name for d in domain.dishes]
        trials_sink = io.StringIO()
        code = cmd_risk_sweep(
            domain,
            args.layout,
            [n.strip() for n in names],
            parse_grid(args.delta_grid),
            args.trials,
            args.seed,
            args.beta,
            args.observe_budget,
            FailurePolicy(args.failure_policy),
            trials_sink,
            sink,
        )
        if args.out:
            Path(args.out).write_text(trials_sink.getvalue())
            aggregate = args.aggregate_out or str(Path(args.out).with_suffix("")) + ".aggregate.csv"
            Path(aggregate).write_text(sink.getvalue())
            return code
        if args.aggregate_out:
            Path(args.aggregate_out).write_text(sink.getvalue())
            stdout.write(trials_sink.getvalue())
            return code
    if args.out:
        Path(args.out).write_text(sink.getvalue())
    else:
        stdout.write(sink.getvalue())
    return code


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return _run(args, stdout)
    except (UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except RecognitionError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_RECOGNITION


if __name__ == "__main__":
    sys.exit(main())
