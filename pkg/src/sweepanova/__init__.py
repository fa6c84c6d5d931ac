"""Least-squares analysis of designed experiments by projectors and sweeps."""

from .anova import (
    AnovaRow,
    AnovaTable,
    build_table,
    expected_ss,
    residual_mean_square,
    variance_ratio,
)
from .dataio import AnalysisConfig, ingest
from .design import (
    BlockDesign,
    EfficiencyReport,
    average_pairwise_variance,
    bib_check,
    canonical_efficiency_factors,
    concurrence,
    contrast_efficiency,
    effect_variances,
    efficiency_report,
    incidence,
    information_matrix,
    is_bib,
    is_connected,
)
from .estimators import IntraBlockANOVA, SweepANOVA
from .fdist import f_upper_tail
from .model import (
    Factor,
    ModelTerm,
    UnitTable,
    grand_mean_projector,
    indicator_matrix,
    is_marginal,
    is_orthogonal,
    sweep_mean,
)
from .report import analyze, check_bib_cmd, run_analysis
from .spectral import (
    Projector,
    SymmetricEigen,
    Tolerance,
    eigh,
    gauss_markov_excess,
    moore_penrose,
    numeric_rank,
    projector_from_design,
)
from .sweep import (
    FitResult,
    ReducedDesign,
    bib_three_stage,
    reduce,
    residual_operator,
    sequential_sweep,
    solve_reduced,
)

__version__ = "0.1.0"
