"""Explain a target ranking as linear scoring plus a few hidden group bonuses.

Entry points:

* :func:`explain_singleton` / :func:`explain_multigroup` - exact search over
  weight-space cells;
* :func:`encode_base` / :func:`encode_refined` / :func:`solve_bnb` - integer
  programming route;
* :func:`forced_bonus_tuples` - tuples no explanation can leave unbonused;
* :func:`verify_realization` - check any explanation against the ranking;
* :mod:`rankexplain.cli` - the ``rankexplain`` command.
"""

from .arrangement import (
    QUADRANTS,
    RegionEnumeration,
    SignRegion,
    build_hyperplanes,
    enumerate_regions,
    enumerate_regions_2d,
)
from .baselines import pairwise_logistic, sampling_baseline
from .core import (
    DEFAULT_TOL,
    Dataset,
    Explanation,
    Group,
    InputError,
    Ranking,
    Regime,
    VerifyResult,
    adjusted_scores,
    linear_scores,
    normalize_dataset,
    ranking_from_weights,
    verify_realization,
)
from .datagen import (
    PlantedInstance,
    ReductionInstance,
    TwoCnf,
    gen_monotone_2cnf,
    gen_synthetic,
    oracle_max1in2sat,
    oracle_reduction_min_bonuses,
    parse_cnf,
    reduce_max1in2sat,
    write_cnf,
)
from .ermb import (
    DIM_CAP,
    ExplainResult,
    explain_multigroup,
    explain_singleton,
    singleton_completion,
)
from .io import (
    load_dataset_csv,
    load_explanation,
    load_ranking,
    save_dataset_csv,
    save_explanation,
    save_ranking,
)
from .lpsolve import interior_witness
from .milp import MilpModel, MilpResult, decode_assignment, encode_base, encode_refined, solve_bnb
from .modelio import export_model, load_model, parse_model, save_model
from .sequence import BudgetedLcsResult, LisResult, budgeted_multigroup_lcs, lis, lis_length, lis_lengths
from .skyline import DominanceRecord, forced_bonus_tuples

__version__ = "0.1.0"

__all__ = [
    "BudgetedLcsResult",
    "DEFAULT_TOL",
    "DIM_CAP",
    "Dataset",
    "DominanceRecord",
    "ExplainResult",
    "Explanation",
    "Group",
    "InputError",
    "LisResult",
    "MilpModel",
    "MilpResult",
    "PlantedInstance",
    "QUADRANTS",
    "Ranking",
    "ReductionInstance",
    "Regime",
    "RegionEnumeration",
    "SignRegion",
    "TwoCnf",
    "VerifyResult",
    "adjusted_scores",
    "budgeted_multigroup_lcs",
    "build_hyperplanes",
    "decode_assignment",
    "encode_base",
    "encode_refined",
    "enumerate_regions",
    "enumerate_regions_2d",
    "explain_multigroup",
    "explain_singleton",
    "export_model",
    "forced_bonus_tuples",
    "gen_monotone_2cnf",
    "gen_synthetic",
    "interior_witness",
    "linear_scores",
    "lis",
    "lis_length",
    "lis_lengths",
    "load_dataset_csv",
    "load_explanation",
    "load_model",
    "load_ranking",
    "normalize_dataset",
    "oracle_max1in2sat",
    "oracle_reduction_min_bonuses",
    "pairwise_logistic",
    "parse_cnf",
    "parse_model",
    "ranking_from_weights",
    "reduce_max1in2sat",
    "sampling_baseline",
    "save_dataset_csv",
    "save_explanation",
    "save_model",
    "save_ranking",
    "singleton_completion",
    "solve_bnb",
    "verify_realization",
    "write_cnf",
]
