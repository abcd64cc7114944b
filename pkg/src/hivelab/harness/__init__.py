"""Experiment drivers and file plumbing."""

from .concentration import (
    COLUMNS,
    ConcentrationResult,
    DecayVerdict,
    SummaryRow,
    TrialRecord,
    decay_check,
    output_problems,
    run_concentration,
)
from .config import PROBE_NAMES, ExperimentConfig, dump_config, load_config, parse_config_text, probe_vertex
from .equivalence import CheckResult, EquivalenceReport, run_equivalence_suite
from .io import emit, format_table, parse, parse_table
