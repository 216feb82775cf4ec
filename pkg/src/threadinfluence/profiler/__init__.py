"""User-level profiling: features, influential-user classifiers, rankings."""

from threadinfluence.profiler.features import (
    USER_FEATURE_NAMES,
    UserFeatures,
    augment_with_clusters,
    feature_matrix,
    user_features,
    write_feature_table,
)
from threadinfluence.profiler.classify import (
    IU_MODEL_KINDS,
    IuLabelSet,
    IuResult,
    load_label_file,
    train_iu_base,
    train_iu_ensemble,
    write_label_file,
)
from threadinfluence.profiler.ranking import (
    RANKING_METRICS,
    Ranking,
    TopK,
    compute_metric,
    rank_users,
    read_ranking,
    topk_precision,
    topk_recall,
    write_ranking,
)

__all__ = [
    "IU_MODEL_KINDS",
    "RANKING_METRICS",
    "USER_FEATURE_NAMES",
    "IuLabelSet",
    "IuResult",
    "Ranking",
    "TopK",
    "UserFeatures",
    "augment_with_clusters",
    "compute_metric",
    "feature_matrix",
    "load_label_file",
    "rank_users",
    "read_ranking",
    "topk_precision",
    "topk_recall",
    "train_iu_base",
    "train_iu_ensemble",
    "user_features",
    "write_feature_table",
    "write_label_file",
]
