#!/usr/bin/env python3
"""Recompute the published level/index tables and write a JSON summary.

    python3 scripts/reproduce_tables.py                 # rows inside the default envelope
    python3 scripts/reproduce_tables.py --all --jobs 2  # every row (slow; some rows are infeasible)

Each table is written to <out>/table<k>.json, in the format of
``pcslevel reproduce --json``. A one-line tally per table goes to stdout.
"""
from __future__ import annotations

import argparse
import contextlib
import io
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from pcslevel.cli import main as cli_main


@dataclass
class RunConfig:
    tables: list = field(default_factory=lambda: [1, 2, 3])
    out: str = "results"
    all_rows: bool = False
    jobs: int = 1
    seed: int = 0


def run_table(table: int, cfg: RunConfig) -> dict:
    argv = ["reproduce", "--table", str(table), "--json", "--jobs", str(cfg.jobs),
            "--seed", str(cfg.seed)]
    if cfg.all_rows:
        argv.append("--all")
    buf = io.StringIO()
    t0 = time.perf_counter()
    with contextlib.redirect_stdout(buf):
        cli_main(argv)
    data = json.loads(buf.getvalue())
    data["seconds"] = round(time.perf_counter() - t0, 1)
    return data


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tables", type=int, nargs="*", default=[1, 2, 3])
    ap.add_argument("--out", default="results")
    ap.add_argument("--all", dest="all_rows", action="store_true")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    cfg = RunConfig(**vars(ap.parse_args()))

    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for table in cfg.tables:
        data = run_table(table, cfg)
        data["config"] = asdict(cfg)
        (out / f"table{table}.json").write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        tally: dict[str, int] = {}
        for row in data["rows"]:
            tally[row["status"]] = tally.get(row["status"], 0) + 1
        print(f"table {table}: {tally} in {data['seconds']} s -> {out / f'table{table}.json'}")


if __name__ == "__main__":
    main()
