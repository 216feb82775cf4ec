"""Lexicon-driven sentiment features and post-level classifiers."""

from threadinfluence.sentiment.features import (
    FEATURE_NAMES,
    FeatureVector,
    count_sentences,
    extract_features,
    features_from_text,
    sentiment_strength,
    tokenize,
)
from threadinfluence.sentiment.lexicons import (
    DEATH_PHRASES,
    LexiconSet,
    death_mention,
    default_lexicons,
    load_boosters,
    load_death_phrases,
    load_terms,
)
from threadinfluence.sentiment.models import (
    MODEL_KINDS,
    SentimentModel,
    TrainConfig,
    load_model,
    save_model,
    train_classifier,
)
from threadinfluence.sentiment.evaluate import (
    CvMetrics,
    cross_validate,
    exhaustive_select_features,
    forward_select_features,
    roc_area,
    stratified_folds,
)
from threadinfluence.sentiment.scoring import (
    PostScore,
    label_for,
    read_scores,
    score_posts,
    write_scores,
)

__all__ = [
    "DEATH_PHRASES",
    "FEATURE_NAMES",
    "MODEL_KINDS",
    "CvMetrics",
    "FeatureVector",
    "LexiconSet",
    "PostScore",
    "SentimentModel",
    "TrainConfig",
    "count_sentences",
    "cross_validate",
    "death_mention",
    "default_lexicons",
    "exhaustive_select_features",
    "extract_features",
    "features_from_text",
    "forward_select_features",
    "label_for",
    "load_boosters",
    "load_death_phrases",
    "load_model",
    "load_terms",
    "read_scores",
    "roc_area",
    "save_model",
    "score_posts",
    "sentiment_strength",
    "stratified_folds",
    "tokenize",
    "train_classifier",
    "write_scores",
]
