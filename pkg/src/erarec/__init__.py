"""Diffusion-based recommendation (ProbS, HeatS, HHP) with enhanced RA similarity."""

from .dataset import (
    BipartiteDataset,
    EmptyDatasetError,
    ParseError,
    SplitPair,
    ingest,
    load,
    save_dataset,
    save_split,
    split,
    stats,
)
from .diffusion import (
    Algorithm,
    ModelConfig,
    ScoreVector,
    full_ranking,
    recommend,
    score_matrix,
    score_user,
    transfer_weight,
)
from .evaluation import (
    EvaluationReport,
    UndefinedMetricError,
    enhanced_precision,
    evaluate,
    hamming_distance,
    ranking_score,
    rankings_for,
)
from .harness import SweepResult, SweepSpec, export_figures, improvement_table, run_sweep, write_sweep
from .similarity import SimilarityMatrix, build_ra, degree_heatmap, enhance, similarity_histogram

__version__ = "0.1.0"
