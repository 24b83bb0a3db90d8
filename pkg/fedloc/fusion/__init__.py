from .bayes import (
    DEFAULT_FLOOR,
    ClassPrior,
    classify_map,
    fuse,
    fuse_batch,
    predict_fused,
    predict_fused_batch,
)

__all__ = [
    "DEFAULT_FLOOR",
    "ClassPrior",
    "classify_map",
    "fuse",
    "fuse_batch",
    "predict_fused",
    "predict_fused_batch",
]
