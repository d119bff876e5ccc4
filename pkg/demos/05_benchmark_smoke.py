"""Run a miniature benchmark end to end and render its outputs.

The same machinery as `qrl run` / `qrl report`, scaled down to two 4-city
instances so it finishes in well under a minute: every variant, depths 1-2,
two initializations each, aggregated over the best init per instance.
"""

import tempfile
from pathlib import Path

from qroutelab.harness import (
    ExperimentConfig,
    aggregate,
    render_rank_table,
    run_experiment,
    write_summary_csv,
)

config = ExperimentConfig(
    instance_seeds=(7, 8),
    n_cities=4,
    depths=(1, 2),
    n_inits=2,
    shots=1000,
    gw_trials=50,
)
cells = len(config.instance_seeds) * len(config.variants) * len(config.depths) * config.n_inits
print(f"running {cells} cells (config digest {config.digest()}) ...")

records = run_experiment(config, on_group_done=lambda done, total: print(f"  group {done}/{total}"))
errors = sum(r.error is not None for r in records)
print(f"{len(records)} records, {errors} errors\n")

print(render_rank_table(records))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "summary.csv"
    write_summary_csv(aggregate(records), path)
    print("\n" + path.read_text(), end="")
