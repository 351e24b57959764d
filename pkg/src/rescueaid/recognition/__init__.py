"""Situation recognition: feature assembly and the complication classifier."""

from rescueaid.recognition.features import (
    FeatureSchema,
    FeatureVector,
    SchemaMismatchError,
    VitalSlot,
    assemble_features,
    build_feature_schema,
)
from rescueaid.recognition.metrics import EvaluationReport, evaluate
from rescueaid.recognition.network import (
    ComplicationDistribution,
    Layer,
    MlpModel,
    classify,
    forward,
    init_model,
    softmax,
)
from rescueaid.recognition.synthetic import (
    DEFAULT_PROFILES,
    GroupProfile,
    generate_synthetic_cases,
    load_profiles,
)
from rescueaid.recognition.training import (
    TrainingConfig,
    TrainingDivergedError,
    gradient_check,
    split_dataset,
    train,
)

__all__ = [
    "ComplicationDistribution",
    "DEFAULT_PROFILES",
    "EvaluationReport",
    "FeatureSchema",
    "FeatureVector",
    "GroupProfile",
    "Layer",
    "MlpModel",
    "SchemaMismatchError",
    "TrainingConfig",
    "TrainingDivergedError",
    "VitalSlot",
    "assemble_features",
    "build_feature_schema",
    "classify",
    "evaluate",
    "forward",
    "generate_synthetic_cases",
    "gradient_check",
    "init_model",
    "load_profiles",
    "softmax",
    "split_dataset",
    "train",
]
