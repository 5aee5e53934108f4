"""Command-line interface.

Subcommands: topology, spectrum, pin, simulate, compare, sweep, reproduce.
Exit codes: 0 success, 2 scenario/comparison definition error, 3 divergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .errors import DivergenceError, PinnetError, ScenarioDefinitionError
from .harness import ComparisonReport, run_comparison, run_scenario, sweep
from .pinning import plan_by_degree, plan_explicit, read_plan, write_plan
from .scenarios import FAMILIES, Scenario, get_scenario
from .spectral import controlled_spectrum, eig_symmetric
from .topology import (
    ClusterSpec,
    barabasi_albert,
    cluster_stars,
    coupling_matrix,
    read_edge_list,
    star,
    write_edge_list,
)

EXIT_OK = 0
EXIT_DEFINITION = 2
EXIT_DIVERGED = 3


def _add_sim_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=Path, default=None, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="initial-condition seed override")
    p.add_argument("--h", type=float, default=None, help="integration step override")
    p.add_argument("--T", type=float, default=None, help="horizon override")
    p.add_argument("--tol", type=float, default=None, help="sync tolerance override")
    p.add_argument("--full", action="store_true", help="write full per-node states CSV")


def _apply_overrides(scenario: Scenario, args) -> Scenario:
    sim = scenario.sim
    if args.h is not None:
        sim = dataclasses.replace(sim, h=args.h)
    if args.T is not None:
        sim = dataclasses.replace(sim, T=args.T)
    if args.tol is not None:
        sim = dataclasses.replace(sim, tol=args.tol)
    if args.seed is not None:
        sim = dataclasses.replace(sim, init_seed=args.seed)
    return dataclasses.replace(scenario, sim=sim)


def _load_scenario(ref: str) -> Scenario:
    """A scenario reference is a shipped name or a path to a scenario JSON."""
    path = Path(ref)
    if path.suffix == ".json" or path.exists():
        with open(path) as fh:
            return Scenario.from_dict(json.load(fh))
    return get_scenario(ref)


def _cmd_topology(args) -> int:
    if args.family == "star":
        g = star(args.n)
    elif args.family == "cluster":
        sizes = tuple(int(x) for x in args.branches.split(","))
        g = cluster_stars(ClusterSpec(sizes))
    else:
        g = barabasi_albert(args.n, args.m0, args.m, args.seed)
    if args.out is None:
        lines = [f"N {g.n_nodes}"] + [f"{i} {j}" for i, j in sorted(g.edges)]
        print("\n".join(lines))
    else:
        write_edge_list(g, args.out)
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    g = read_edge_list(args.edges)
    A = coupling_matrix(g)
    if args.plan is not None:
        dec = controlled_spectrum(A, read_plan(args.plan))
    else:
        dec = eig_symmetric(A)
    print("index,eigenvalue")
    for i, lam in enumerate(dec.eigenvalues):
        print(f"{i},{lam:.12g}")
    return EXIT_OK


def _cmd_pin(args) -> int:
    g = read_edge_list(args.edges)
    if args.explicit:
        gains = {}
        try:
            for item in args.explicit.split(","):
                node, gain = item.split(":")
                gains[int(node)] = float(gain)
        except ValueError as exc:
            raise ScenarioDefinitionError(
                f"--explicit expects node:gain,... pairs, got {args.explicit!r}"
            ) from exc
        plan = plan_explicit(g.n_nodes, gains, args.c)
    else:
        plan = plan_by_degree(g, args.strategy, args.count, args.gain, args.c)
    write_plan(plan, args.plan_out)
    return EXIT_OK


def _cmd_simulate(args) -> int:
    scenario = _apply_overrides(_load_scenario(args.scenario), args)
    row = run_scenario(scenario, out_dir=args.out, full_states=args.full)
    print(ComparisonReport((row,)).to_table_text(), end="")
    return EXIT_DIVERGED if row.outcome == "diverged" else EXIT_OK


def _cmd_compare(args) -> int:
    with open(args.scenarios) as fh:
        spec = json.load(fh)
    refs = spec["scenarios"] if isinstance(spec, dict) else spec
    scenarios = []
    for ref in refs:
        sc = Scenario.from_dict(ref) if isinstance(ref, dict) else _load_scenario(str(ref))
        scenarios.append(_apply_overrides(sc, args))
    report = run_comparison(scenarios, out_dir=args.out, full_states=args.full)
    print(report.to_table_text(), end="")
    return EXIT_DIVERGED if any(r.outcome == "diverged" for r in report.rows) else EXIT_OK


def _cmd_sweep(args) -> int:
    scenario = _apply_overrides(_load_scenario(args.scenario), args)
    try:
        values = [float(v) for v in args.values.split(",")]
    except ValueError as exc:
        raise ScenarioDefinitionError(
            f"--values expects comma-separated numbers, got {args.values!r}"
        ) from exc
    report = sweep(scenario, args.vary, values, out_dir=args.out)
    print(report.to_table_text(), end="")
    return EXIT_DIVERGED if any(r.outcome == "diverged" for r in report.rows) else EXIT_OK


def _cmd_reproduce(args) -> int:
    names = FAMILIES.get(args.family)
    if names is None:
        raise ScenarioDefinitionError(
            f"unknown family {args.family!r}; choose from {', '.join(sorted(FAMILIES))}"
        )
    rows = []
    for name in names:
        scenario = _apply_overrides(get_scenario(name), args)
        rows.append(
            run_scenario(
                scenario, out_dir=args.out, simulate=not args.cf_only,
                full_states=args.full,
            )
        )
    report = ComparisonReport(tuple(sorted(rows, key=lambda r: r.name)))
    if args.out is not None:
        out = Path(args.out)
        (out / f"{args.family}.report.csv").write_text(report.to_csv_text())
        (out / f"{args.family}.report.txt").write_text(report.to_table_text())
    print(report.to_table_text(), end="")
    return EXIT_DIVERGED if any(r.outcome == "diverged" for r in report.rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pinnet",
        description="Pinning control of coupled dynamical networks: "
        "topologies, controlled spectra, costs, and synchronization runs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("topology", help="generate a graph and emit its edge list")
    topo_sub = p.add_subparsers(dest="family", required=True)
    ps = topo_sub.add_parser("star")
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--out", type=Path, default=None)
    ps.set_defaults(func=_cmd_topology)
    pc = topo_sub.add_parser("cluster")
    pc.add_argument("--branches", type=str, required=True, help="comma-separated sizes")
    pc.add_argument("--out", type=Path, default=None)
    pc.set_defaults(func=_cmd_topology)
    pb = topo_sub.add_parser("ba")
    pb.add_argument("--n", type=int, required=True)
    pb.add_argument("--m0", type=int, required=True)
    pb.add_argument("--m", type=int, required=True)
    pb.add_argument("--seed", type=int, required=True)
    pb.add_argument("--out", type=Path, default=None)
    pb.set_defaults(func=_cmd_topology)

    p = sub.add_parser("spectrum", help="eigenvalues of the (controlled) coupling matrix")
    p.add_argument("--edges", type=Path, required=True)
    p.add_argument("--plan", type=Path, default=None)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("pin", help="build a pinning plan JSON")
    p.add_argument("--edges", type=Path, required=True)
    p.add_argument("--strategy", choices=("largest", "smallest"), default="smallest")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--gain", type=float, default=1.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--explicit", type=str, default=None, help="node:gain,node:gain,...")
    p.add_argument("--plan-out", type=Path, required=True)
    p.set_defaults(func=_cmd_pin)

    p = sub.add_parser("simulate", help="run one scenario (shipped name or JSON file)")
    p.add_argument("scenario")
    _add_sim_overrides(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("compare", help="run scenarios on one topology and tabulate")
    p.add_argument("scenarios", help="JSON file with a scenarios list")
    _add_sim_overrides(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("sweep", help="sweep gain or coupling strength of a scenario")
    p.add_argument("scenario")
    p.add_argument("--vary", choices=("epsilon", "c"), required=True)
    p.add_argument("--values", type=str, required=True, help="comma-separated values")
    _add_sim_overrides(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("reproduce", help="run a shipped scenario family")
    p.add_argument("family", help="fig2|fig3|fig5|fig6|fig7|fig8|fig9")
    p.add_argument("--cf-only", action="store_true", help="analysis only, skip integration")
    _add_sim_overrides(p)
    p.set_defaults(func=_cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (PinnetError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEFINITION


if __name__ == "__main__":
    raise SystemExit(main())
