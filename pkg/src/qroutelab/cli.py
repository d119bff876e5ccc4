"""Command-line interface (installed as ``qrl``).

Subcommands cover the pipeline stages: ``gen`` writes an instance, ``brute-force``
solves it exactly, ``solve-classical`` runs the relax-and-round MaxCut solver
on a QUBO, ``run`` executes a benchmark config, and ``report`` aggregates a
record file into the summary CSV, plot data, and a per-instance rank table.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, harness, maxcut
from .encoding import build_tsp_qubo, qubo_from_json, qubo_to_json, string_of_bits
from .instances import brute_force_optimal, generate_instance, instance_from_json, instance_to_json
from .qaoa import derive_seed


def _cmd_gen(args: argparse.Namespace) -> int:
    instance = generate_instance(args.seed, args.cities)
    Path(args.out).write_text(instance_to_json(instance) + "\n", encoding="utf-8")
    print(f"wrote {args.cities}-city instance (seed {args.seed}) to {args.out}")
    return 0


def _cmd_brute_force(args: argparse.Namespace) -> int:
    instance = instance_from_json(Path(args.instance).read_text(encoding="utf-8"))
    oracle = brute_force_optimal(instance)
    result = {
        "optimal_cost": oracle.optimal_cost,
        "optimal_tours": sorted(list(t) for t in oracle.optimal_tours),
    }
    text = json.dumps(result, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_export_qubo(args: argparse.Namespace) -> int:
    instance = instance_from_json(Path(args.instance).read_text(encoding="utf-8"))
    qubo = build_tsp_qubo(instance, penalty_a=args.penalty_a, penalty_b=args.penalty_b)
    Path(args.out).write_text(qubo_to_json(qubo) + "\n", encoding="utf-8")
    print(f"wrote {qubo.n_vars}-variable QUBO to {args.out}")
    return 0


def _cmd_solve_classical(args: argparse.Namespace) -> int:
    qubo = qubo_from_json(Path(args.qubo).read_text(encoding="utf-8"))
    graph = maxcut.qubo_to_maxcut(qubo)
    factor = maxcut.solve_sdp(graph, seed=derive_seed("sdp", args.seed))
    spins = maxcut.gw_round(factor, graph, trials=args.trials, seed=derive_seed("round", args.seed))
    bits = maxcut.recover_bits(spins)
    result = {
        "spins": [int(s) for s in spins],
        "cut": maxcut.cut_value(graph, spins),
        "bits": string_of_bits(bits),
        "C1": graph.offset_c1,
    }
    text = json.dumps(result, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_run(args: argparse.Namespace) -> int:
    if args.config:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
    else:
        data = {}
    config = harness.ExperimentConfig.from_dict(data)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "config.json").write_text(
        json.dumps(config.to_dict(), indent=2) + "\n", encoding="utf-8"
    )

    def progress(done: int, total: int) -> None:
        print(f"[{done}/{total}] instance/variant groups complete", flush=True)

    records = harness.run_experiment(
        config, out_dir=out_dir, parallel=args.parallel, on_group_done=progress
    )
    errors = [r for r in records if r.error is not None]
    print(f"{len(records)} records written to {out_dir / harness.RECORDS_FILENAME}")
    if errors:
        print(f"{len(errors)} cells failed:", file=sys.stderr)
        for record in errors:
            print(
                f"  seed={record.instance_seed} variant={record.variant} "
                f"depth={record.depth} init={record.init_index}: {record.error}",
                file=sys.stderr,
            )
        return 1
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    records = harness.load_records(Path(args.in_dir) / harness.RECORDS_FILENAME)
    rows = harness.aggregate(records)
    harness.write_summary_csv(rows, args.out)
    if args.plots:
        harness.write_plot_data(records, args.plots)
    print(harness.render_rank_table(records))
    print(f"\nsummary written to {args.out}" + (f", plot data to {args.plots}" if args.plots else ""))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qrl", description=__doc__)
    parser.add_argument("--version", action="version", version=f"qrl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a random Euclidean instance")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--cities", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_bf = sub.add_parser("brute-force", help="exhaustively solve an instance file")
    p_bf.add_argument("--instance", required=True)
    p_bf.add_argument("--out", default=None)
    p_bf.set_defaults(func=_cmd_brute_force)

    p_qubo = sub.add_parser("export-qubo", help="write the penalized QUBO of an instance")
    p_qubo.add_argument("--instance", required=True)
    p_qubo.add_argument("--out", required=True)
    p_qubo.add_argument("--penalty-a", type=float, default=None)
    p_qubo.add_argument("--penalty-b", type=float, default=None)
    p_qubo.set_defaults(func=_cmd_export_qubo)

    p_solve = sub.add_parser(
        "solve-classical", help="relax-and-round MaxCut solve of a QUBO file"
    )
    p_solve.add_argument("--qubo", required=True)
    p_solve.add_argument("--trials", type=int, default=100)
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--out", default=None)
    p_solve.set_defaults(func=_cmd_solve_classical)

    p_run = sub.add_parser("run", help="run a benchmark config")
    p_run.add_argument("--config", default=None, help="JSON config (defaults if omitted)")
    p_run.add_argument("--out-dir", required=True)
    p_run.add_argument(
        "--parallel", type=int, default=1,
        help="worker processes (capped by QRL_THREADS)",
    )
    p_run.set_defaults(func=_cmd_run)

    p_report = sub.add_parser("report", help="aggregate a record file")
    p_report.add_argument("--in", dest="in_dir", required=True)
    p_report.add_argument("--out", required=True, help="summary CSV path")
    p_report.add_argument("--plots", default=None, help="directory for plot-data CSVs")
    p_report.set_defaults(func=_cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError) as exc:
        print(f"qrl: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
