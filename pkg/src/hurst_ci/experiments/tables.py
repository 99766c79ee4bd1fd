"""Generators for the reference tables and the length-ratio curves.

Every table is written as ``<out>/table<id>.csv`` (first line is a versioned
``#`` header) together with ``<out>/table<id>.json`` holding the same rows
plus run metadata.  CSV content depends only on the configuration.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .. import __version__
from ..concentration import (
    ConcentrationBound, GeneralBoundParams, invert_nv_phi_l, invert_nv_phi_r,
    invert_phi_l_general, invert_phi_r_general,
)
from ..filter_bank import builtin_filter, dilate, sup_l1_norm, tau_a
from ..intervals import length_ratio_profile, min_n_invertible
from ..intervals.bnp import bnp_max_h_star, bnp_min_n
from .coverage import default_workers, run_coverage

SCHEMA_VERSION = 1
TABLE_IDS = ("1", "2", "3", "4", "5", "6", "fig1", "bnp")

LABELS = {
    "i1": "Increments 1", "i2": "Increments 2", "i3": "Increments 3", "i4": "Increments 4",
    "d4": "Daublets 4", "d6": "Daublets 6", "d8": "Daublets 8", "s8": "Symmlets 8",
    "c6": "Coiflets 6", "c12": "Coiflets 12",
}
TABLE2_FILTERS = ("i2", "d4", "c6", "i3", "d6", "i4", "d8", "s8", "c12")
TABLE3_FILTERS = ("i1", "i2", "d4", "c6", "i3", "d6", "i4", "d8", "c12")
TABLE4_FILTERS = TABLE2_FILTERS
TABLE1_N = (50, 100, 500, 1000, 10000)
TABLE1_ALPHA = (0.01, 0.025, 0.05, 0.10)
MC_N = (50, 100, 500, 1000, 10000)
MC_H = (0.2, 0.5, 0.8)
BNP_N = (50, 100, 200, 500, 1000, 10000)


class UnknownTableError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    table: str = "3"
    reps: int = 500
    n_list: list = field(default_factory=lambda: list(MC_N))
    H_list: list = field(default_factory=lambda: list(MC_H))
    C: float = 1.0
    filters: list = field(default_factory=lambda: ["i2", "d4"])
    M_list: list = field(default_factory=lambda: [2, 5])
    alpha: float = 0.05
    seed: int | None = None
    workers: int | None = None
    out_dir: str = "results"
    m_max: int = 5

    def __post_init__(self):
        self.table = str(self.table)
        if self.table not in TABLE_IDS:
            raise UnknownTableError(f"unknown table {self.table!r}; choose from {', '.join(TABLE_IDS)}")
        if int(self.reps) < 1:
            raise ValueError("reps must be >= 1")
        if any(not 0.0 < float(h) < 1.0 for h in self.H_list):
            raise ValueError("all H must lie in (0, 1)")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {', '.join(sorted(extra))}")
        return cls(**d)


# ---------------------------------------------------------------------------

def table1(cfg):
    rows = []
    for n in TABLE1_N:
        params = GeneralBoundParams.from_nv(4.0 / math.sqrt(n), 4.0)
        nv, bc = {"n": n, "bound": "NV"}, {"n": n, "bound": "BC"}
        for a in TABLE1_ALPHA:
            tag = f"{a * 100:g}%"
            nv[f"l_{tag}"] = invert_nv_phi_l(a, params)
            nv[f"r_{tag}"] = invert_nv_phi_r(a, params)
            bc[f"l_{tag}"] = invert_phi_l_general(a, params)
            bc[f"r_{tag}"] = invert_phi_r_general(a, params)
        rows += [nv, bc]
    return rows


def _per_m(names, fn, m_max):
    rows = []
    for name in names:
        f = builtin_filter(name)
        row = {"filter": LABELS[name], "p": f.order}
        for m in range(1, m_max + 1):
            row[f"m={m}"] = fn(dilate(f, m))
        rows.append(row)
    return rows


def table2(cfg):
    return _per_m(TABLE2_FILTERS, tau_a, cfg.m_max)


def table3(cfg):
    return _per_m(TABLE3_FILTERS, lambda f: sup_l1_norm(f)[1], cfg.m_max)


def table4(cfg):
    return _per_m(TABLE4_FILTERS, min_n_invertible, cfg.m_max)


def table_bnp(cfg):
    rows = []
    for a in TABLE1_ALPHA[:1] + TABLE1_ALPHA[2:]:
        row = {"kind": "min_n", "alpha": a}
        row.update({f"H*={h / 10:g}": bnp_min_n(a, h / 10) for h in range(1, 10)})
        rows.append(row)
    for a in TABLE1_ALPHA[:1] + TABLE1_ALPHA[2:]:
        row = {"kind": "max_H*", "alpha": a}
        row.update({f"n={n}": bnp_max_h_star(a, n) for n in BNP_N})
        rows.append(row)
    return rows


def _mc(cfg, specs):
    if cfg.seed is None:
        raise ValueError("Monte-Carlo tables need an explicit seed")
    workers = default_workers() if cfg.workers is None else cfg.workers
    rows = []
    # the same seed is used in every cell: filters and methods are compared on common paths
    for n in cfg.n_list:
        for label, method, filt, M in specs:
            row = {"n": n, "procedure": label}
            for H in cfg.H_list:
                rec = run_coverage(method, filt, n, H, cfg.C, cfg.alpha, cfg.reps, cfg.seed, workers, M)
                row[f"cover_H={H:g}"] = rec.coverage
                row[f"length_H={H:g}"] = rec.mean_length
                row[f"Hhat_H={H:g}"] = rec.mean_midpoint
                row[f"feasible_H={H:g}"] = rec.feasible_rate
            rows.append(row)
    return rows


def table5(cfg):
    specs = []
    for f in cfg.filters:
        specs += [(f"CI[{f}]", "CI-known", f, 2), (f"CLT[{f}]", "CLT-known", f, 2)]
    return _mc(cfg, specs)


def table6(cfg):
    specs = []
    for f in cfg.filters:
        for M in cfg.M_list:
            specs += [(f"CLT[{f},{M}]", "CLT-unknown", f, M), (f"CI[{f},{M}]", "CI-unknown", f, M)]
    return _mc(cfg, specs)


def fig1(cfg):
    grid = np.round(np.linspace(0.05, 0.95, 19), 10)
    cols = {}
    for f in cfg.filters:
        cols[f"known[{f}]"] = length_ratio_profile(f, None, cfg.alpha, grid)[:, 1]
        for M in cfg.M_list:
            cols[f"unknown[{f},{M}]"] = length_ratio_profile(f, M, cfg.alpha, grid)[:, 1]
    return [{"H": float(h), **{k: float(v[i]) for k, v in cols.items()}} for i, h in enumerate(grid)]


GENERATORS = {"1": table1, "2": table2, "3": table3, "4": table4, "5": table5, "6": table6,
              "fig1": fig1, "bnp": table_bnp}


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows, table_id) -> str:
    buf = io.StringIO()
    buf.write(f"# hurst-ci table={table_id} schema={SCHEMA_VERSION} version={__version__}\n")
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        header = list(rows[0])
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r.get(k)) for k in header])
    return buf.getvalue()


def run_table(table_id, config: ExperimentConfig | None = None, write=True):
    """Compute a table; returns ``(rows, csv_path, json_path)`` (paths None if not written)."""
    table_id = str(table_id)
    if table_id not in GENERATORS:
        raise UnknownTableError(f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    cfg = config or ExperimentConfig(table=table_id)
    t0 = time.perf_counter()
    rows = GENERATORS[table_id](cfg)
    wall = time.perf_counter() - t0
    if not write:
        return rows, None, None
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"table{table_id}.csv"
    json_path = out / f"table{table_id}.json"
    csv_path.write_text(rows_to_csv(rows, table_id))
    summary = {"schema": SCHEMA_VERSION, "version": __version__, "table": table_id,
               "config": asdict(cfg), "wall_time": wall, "rows": rows}
    json_path.write_text(json.dumps(summary, indent=2, allow_nan=True) + "\n")
    return rows, csv_path, json_path
