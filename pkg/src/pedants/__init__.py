"""Rule- and type-aware answer correctness judging for short-form QA."""

from .errors import (
    DatasetError,
    DimensionMismatch,
    EmptyCorpus,
    EmptyRecords,
    EmptyReferences,
    InconsistentDimensions,
    MissingAnnotations,
    OutOfRangeScore,
    PedantsError,
    SingleClassCorpus,
    TooFewModels,
)
from .harness import (
    ConfusionCounts,
    JudgedRecord,
    RankingInput,
    SweepRow,
    agreement_accuracy,
    likert_to_binary,
    macro_f1,
    pairwise_ranking_accuracy,
    threshold_sweep,
)
from .linear import LinearModel, TrainConfig, predict, predict_proba, train
from .metrics import (
    PrfScores,
    Threshold,
    best_over_references,
    best_reference,
    exact_match,
    threshold_judge,
    token_prf,
)
from .pipeline import (
    FeatureVector,
    Judgment,
    PedantsModel,
    QAExample,
    QuestionType,
    RuleLabel,
    assemble_features,
    judge,
    train_pedants,
    train_rule_extractor,
    train_type_extractor,
)
from .textnorm import EM_POLICY, PEDANTS_POLICY, POLICY_PRESETS, NormPolicy, normalize, tokenize
from .vectorizer import SparseVector, TfidfConfig, TfidfModel, encode_pair, encode_triple

__version__ = "0.1.0"
