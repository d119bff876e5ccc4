"""Benchmark harness: run the (instance x variant x depth x init) matrix.

Each cell optimizes one ansatz from one random parameter initialization,
samples the optimized state, and scores the samples against the brute-force
oracle. Records are appended to a JSONL file as they complete, every cell's
randomness is derived by hashing its coordinates (so reruns and parallel runs
produce identical records), and aggregation is a pure function of the record
set.

Scoring: ``pct_true`` is the percentage of shots that decode to a cost-optimal
tour; ``rank`` is the best 1-based position of any optimal bitstring when the
distinct sampled bitstrings are ordered by decreasing count (ties broken
lexicographically), or ``None`` if no optimal bitstring was sampled at all.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import multiprocessing
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from . import __version__
from .encoding import BlockLayout, bits_of_string, decode_bits
from .instances import DEFAULT_SEEDS, OracleResult, brute_force_optimal, generate_instance
from .optimize import OptimizerConfig, minimize, random_params
from .qaoa import Variant, derive_seed, evolve, objective, prepare_context
from .statevec import sample

#: Objective-evaluation budget per ansatz layer (max_evals = this * depth).
EVALS_PER_LAYER = 300

#: Human-readable variant names used in rendered tables.
VARIANT_LABELS = {
    Variant.X: "Pure X",
    Variant.WS: "Pure Warm",
    Variant.XY: "Pure XY",
    Variant.WSXY: "XY Warm-start",
}

RECORDS_FILENAME = "records.jsonl"


@dataclass(frozen=True)
class ExperimentConfig:
    """Full benchmark specification (defaults define the full-scale study)."""

    instance_seeds: tuple[int, ...] = DEFAULT_SEEDS
    n_cities: int = 5
    variants: tuple[Variant, ...] = (Variant.X, Variant.WS, Variant.XY, Variant.WSXY)
    depths: tuple[int, ...] = (1, 2, 3)
    n_inits: int = 5
    shots: int = 1000
    epsilon: float = 0.25
    gw_trials: int = 100
    penalty_a: float | None = None
    penalty_b: float | None = None

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["variants"] = [v.value for v in self.variants]
        data["instance_seeds"] = list(self.instance_seeds)
        data["depths"] = list(self.depths)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        kwargs = dict(data)
        if "variants" in kwargs:
            kwargs["variants"] = tuple(Variant(v) for v in kwargs["variants"])
        for key in ("instance_seeds", "depths"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(**kwargs)

    def digest(self) -> str:
        """Stable hash of the config, stored in every record's metadata."""
        text = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Metrics:
    """Sample scores for one cell (see module docstring for definitions)."""

    pct_true: float
    rank: int | None
    rank_count: int | None


@dataclass
class RunRecord:
    """One benchmark cell: what ran, what it found, and how it scored."""

    instance_seed: int
    variant: str
    depth: int
    init_index: int
    best_params: list[float]
    best_objective: float | None
    samples: dict[str, int]
    pct_true: float
    rank: int | None
    rank_count: int | None
    optimal_cost: float
    error: str | None
    metadata: dict

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        return cls(**json.loads(text))


@dataclass(frozen=True)
class SummaryRow:
    """Aggregate over instances for one (variant, depth) pair."""

    variant: str
    depth: int
    mean_pct_true: float
    std_pct_true: float
    median_rank: float | None
    rank_outliers: tuple[int, ...]
    n_instances: int


def compute_metrics(samples: dict[str, int], oracle: OracleResult, layout: BlockLayout) -> Metrics:
    """Score a sample map against the oracle's optimal tours."""
    shots = sum(samples.values())
    if shots == 0:
        return Metrics(pct_true=0.0, rank=None, rank_count=None)
    optimal_hits = {
        bitstring: count
        for bitstring, count in samples.items()
        if decode_bits(layout, bits_of_string(bitstring)) in oracle.optimal_tours
    }
    pct_true = 100.0 * sum(optimal_hits.values()) / shots
    if not optimal_hits:
        return Metrics(pct_true=0.0, rank=None, rank_count=None)
    ordering = sorted(samples.items(), key=lambda item: (-item[1], item[0]))
    rank = min(
        position
        for position, (bitstring, _) in enumerate(ordering, start=1)
        if bitstring in optimal_hits
    )
    return Metrics(pct_true=pct_true, rank=rank, rank_count=samples[ordering[rank - 1][0]])


def _run_group(args: tuple[ExperimentConfig, int, Variant]) -> list[RunRecord]:
    """All (depth, init) cells for one instance/variant pair.

    Grouped so the QUBO, energy table, oracle, and warm start are built once;
    each cell still derives its own seeds from its coordinates.
    """
    config, instance_seed, variant = args
    records = []
    instance = generate_instance(instance_seed, config.n_cities)
    oracle = brute_force_optimal(instance)
    base_metadata = {
        "config_hash": config.digest(),
        "version": __version__,
        "optimizer": "nelder-mead",
        "n_cities": config.n_cities,
        "shots": config.shots,
        "epsilon": config.epsilon,
        "gw_trials": config.gw_trials,
        "warm_start_register": "qubo-variables-auxiliary-spin-pinned-up",
    }
    try:
        # The classical preprocessing (SDP + rounding) is a property of the
        # instance, not of the ansatz: every warm-started variant consumes the
        # same classical solution, keeping the comparison controlled.
        # classical_warm_start namespaces its own sub-streams internally, so
        # the instance seed is passed through as the master seed.
        ctx = prepare_context(
            instance,
            variant,
            epsilon=config.epsilon,
            gw_trials=config.gw_trials,
            seed=instance_seed,
            depth_p=1,
            penalty_a=config.penalty_a,
            penalty_b=config.penalty_b,
        )
    except Exception as exc:  # pragma: no cover - defensive; keeps the matrix going
        ctx = None
        ctx_error = f"{type(exc).__name__}: {exc}"
    for depth in config.depths:
        for init_index in range(config.n_inits):
            if ctx is None:
                records.append(
                    _error_record(config, instance_seed, variant, depth, init_index, ctx_error, base_metadata)
                )
                continue
            try:
                cell_ctx = dataclasses.replace(ctx, depth_p=depth)
                records.append(
                    _run_cell(config, cell_ctx, oracle, instance_seed, variant, depth, init_index, base_metadata)
                )
            except Exception as exc:
                records.append(
                    _error_record(
                        config, instance_seed, variant, depth, init_index,
                        f"{type(exc).__name__}: {exc}", base_metadata,
                    )
                )
    return records


def _run_cell(
    config: ExperimentConfig,
    ctx,
    oracle: OracleResult,
    instance_seed: int,
    variant: Variant,
    depth: int,
    init_index: int,
    base_metadata: dict,
) -> RunRecord:
    x0 = random_params(depth, derive_seed("init", instance_seed, variant, depth, init_index))
    opt_config = OptimizerConfig(
        max_evals=EVALS_PER_LAYER * depth,
        seed=derive_seed("opt", instance_seed, variant, depth, init_index),
    )
    trace = minimize(lambda params: objective(ctx, variant, params), x0, opt_config)
    if trace.error is not None or trace.best_params is None:
        raise RuntimeError(trace.error or "optimizer produced no finite evaluation")
    state = evolve(ctx, variant, trace.best_params[:depth], trace.best_params[depth:])
    samples = sample(state, config.shots, derive_seed("sample", instance_seed, variant, depth, init_index))
    metrics = compute_metrics(samples, oracle, ctx.layout)
    metadata = dict(
        base_metadata,
        penalty_a=ctx.qubo.penalty_a,
        penalty_b=ctx.qubo.penalty_b,
        max_evals=opt_config.max_evals,
        n_evals=trace.n_evals,
        converged=trace.converged,
    )
    return RunRecord(
        instance_seed=instance_seed,
        variant=variant.value,
        depth=depth,
        init_index=init_index,
        best_params=[float(v) for v in trace.best_params],
        best_objective=trace.best_value,
        samples=samples,
        pct_true=metrics.pct_true,
        rank=metrics.rank,
        rank_count=metrics.rank_count,
        optimal_cost=oracle.optimal_cost,
        error=None,
        metadata=metadata,
    )


def _error_record(config, instance_seed, variant, depth, init_index, message, base_metadata) -> RunRecord:
    return RunRecord(
        instance_seed=instance_seed,
        variant=variant.value,
        depth=depth,
        init_index=init_index,
        best_params=[],
        best_objective=None,
        samples={},
        pct_true=0.0,
        rank=None,
        rank_count=None,
        optimal_cost=float("nan"),
        error=message,
        metadata=dict(base_metadata),
    )


def resolve_parallelism(requested: int) -> int:
    """Clamp a requested worker count by the ``QRL_THREADS`` environment cap."""
    workers = max(1, requested)
    cap = os.environ.get("QRL_THREADS")
    if cap is not None:
        workers = min(workers, max(1, int(cap)))
    return workers


def run_experiment(
    config: ExperimentConfig,
    out_dir: str | Path | None = None,
    parallel: int = 1,
    on_group_done: Callable[[int, int], None] | None = None,
) -> list[RunRecord]:
    """Run the full benchmark matrix; returns records in canonical order.

    If ``out_dir`` is given, ``records.jsonl`` inside it is rewritten from
    scratch, one line per cell as each (instance, variant) group completes, so
    partial output survives interruption but stale records from earlier runs
    never mix in. Cell failures become error records; the matrix always runs
    to completion.
    """
    groups = [(config, seed, variant) for seed in config.instance_seeds for variant in config.variants]
    writer = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        writer = open(out_dir / RECORDS_FILENAME, "w", encoding="utf-8")
    records: list[RunRecord] = []
    workers = resolve_parallelism(parallel)
    try:
        if workers == 1:
            results: Iterable[list[RunRecord]] = map(_run_group, groups)
        else:
            pool = multiprocessing.Pool(processes=workers)
            results = pool.imap_unordered(_run_group, groups)
        for done, group_records in enumerate(results, start=1):
            records.extend(group_records)
            if writer is not None:
                for record in group_records:
                    writer.write(record.to_json() + "\n")
                writer.flush()
            if on_group_done is not None:
                on_group_done(done, len(groups))
        if workers > 1:
            pool.close()
            pool.join()
    finally:
        if writer is not None:
            writer.close()
    records.sort(key=lambda r: (r.instance_seed, r.variant, r.depth, r.init_index))
    return records


def load_records(path: str | Path) -> list[RunRecord]:
    """Read a JSONL record file written by :func:`run_experiment`."""
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(RunRecord.from_json(line))
    return records


def best_per_instance(records: list[RunRecord]) -> dict[tuple[str, int], dict[int, RunRecord]]:
    """For each (variant, depth): the best-objective record per instance.

    "Best" follows the optimizer's own criterion (lowest optimized objective,
    ties broken by init index), not the downstream sample scores.
    """
    chosen: dict[tuple[str, int], dict[int, RunRecord]] = {}
    for record in records:
        if record.error is not None or record.best_objective is None:
            continue
        per_instance = chosen.setdefault((record.variant, record.depth), {})
        incumbent = per_instance.get(record.instance_seed)
        if incumbent is None or (record.best_objective, record.init_index) < (
            incumbent.best_objective,
            incumbent.init_index,
        ):
            per_instance[record.instance_seed] = record
    return chosen


def aggregate(records: list[RunRecord]) -> list[SummaryRow]:
    """Summarize records into per-(variant, depth) rows.

    Each instance contributes its best initialization; mean/std are over
    instances (sample std, ddof=1; 0.0 for a single instance); the median is
    over the ranks that exist; outliers are instances whose rank exceeds
    10x the median.
    """
    rows = []
    for (variant, depth), per_instance in sorted(best_per_instance(records).items()):
        chosen = [per_instance[seed] for seed in sorted(per_instance)]
        pcts = np.array([r.pct_true for r in chosen])
        ranks = [r.rank for r in chosen if r.rank is not None]
        median_rank = float(np.median(ranks)) if ranks else None
        outliers = tuple(
            r.instance_seed
            for r in chosen
            if r.rank is not None and median_rank and r.rank > 10.0 * median_rank
        )
        rows.append(
            SummaryRow(
                variant=variant,
                depth=depth,
                mean_pct_true=float(pcts.mean()),
                std_pct_true=float(pcts.std(ddof=1)) if len(pcts) > 1 else 0.0,
                median_rank=median_rank,
                rank_outliers=outliers,
                n_instances=len(chosen),
            )
        )
    return rows


def write_summary_csv(rows: list[SummaryRow], path: str | Path) -> None:
    """Write the pinned-header summary CSV (one row per variant/depth)."""
    lines = [
        "# best init per instance by lowest optimized objective;"
        " std over instances (ddof=1); median over sampled ranks (empty if none)",
        "variant,depth,mean_pct_true,std_pct_true,median_rank,n_instances",
    ]
    for row in rows:
        median = "" if row.median_rank is None else f"{row.median_rank:g}"
        lines.append(
            f"{row.variant},{row.depth},{row.mean_pct_true:.6g},"
            f"{row.std_pct_true:.6g},{median},{row.n_instances}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_plot_data(records: list[RunRecord], plots_dir: str | Path) -> None:
    """Write per-instance CSVs (pct_true and rank) for plotting."""
    plots_dir = Path(plots_dir)
    plots_dir.mkdir(parents=True, exist_ok=True)
    chosen = best_per_instance(records)
    rank_medians = {
        key: np.median([r.rank for r in per.values() if r.rank is not None])
        for key, per in chosen.items()
        if any(r.rank is not None for r in per.values())
    }
    pct_lines = ["variant,depth,instance_seed,pct_true,best_objective,optimal_cost"]
    rank_lines = ["variant,depth,instance_seed,rank,rank_count,outlier"]
    for (variant, depth), per_instance in sorted(chosen.items()):
        for seed in sorted(per_instance):
            record = per_instance[seed]
            pct_lines.append(
                f"{variant},{depth},{seed},{record.pct_true:.6g},"
                f"{record.best_objective:.12g},{record.optimal_cost:.12g}"
            )
            median = rank_medians.get((variant, depth))
            outlier = (
                record.rank is not None
                and median is not None
                and median > 0
                and record.rank > 10.0 * median
            )
            rank_lines.append(
                f"{variant},{depth},{seed},"
                f"{'' if record.rank is None else record.rank},"
                f"{'' if record.rank_count is None else record.rank_count},"
                f"{int(outlier)}"
            )
    (plots_dir / "pct_true_by_instance.csv").write_text("\n".join(pct_lines) + "\n", encoding="utf-8")
    (plots_dir / "rank_by_instance.csv").write_text("\n".join(rank_lines) + "\n", encoding="utf-8")


def format_rank(rank: int | None) -> str:
    """Human rendering of a possibly-missing rank."""
    return "--" if rank is None else str(rank)


def render_rank_table(records: list[RunRecord]) -> str:
    """Per-instance text table: rank and count of the best optimal bitstring.

    One row per (instance, depth, variant) using each instance's best
    initialization; a missing rank (optimum never sampled) renders as ``--``.
    """
    chosen = best_per_instance(records)
    rows = []
    for (variant, depth), per_instance in chosen.items():
        for seed, record in per_instance.items():
            rows.append((seed, depth, variant, record))
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    lines = [
        f"{'Seed':>6}  {'Depth':>5}  {'Approach':<14}  {'Rank':>6}  {'Frequency':>9}",
    ]
    for seed, depth, variant, record in rows:
        label = VARIANT_LABELS.get(Variant(variant), variant)
        frequency = format_rank(record.rank_count)
        lines.append(
            f"{seed:>6}  {depth:>5}  {label:<14}  {format_rank(record.rank):>6}  {frequency:>9}"
        )
    return "\n".join(lines)
