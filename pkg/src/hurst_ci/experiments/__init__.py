"""Monte-Carlo harness and reference-table generators."""
from .coverage import (
    WORKERS_ENV, CoverageRecord, canonical_method, default_workers, interval_for, run_coverage,
)
from .tables import (
    GENERATORS, SCHEMA_VERSION, TABLE_IDS, ExperimentConfig, UnknownTableError, rows_to_csv, run_table,
)

__all__ = [name for name in dir() if not name.startswith("_")]
