from .checkpoint import (
    FORMAT_VERSION,
    clone_model,
    load_checkpoint,
    load_checkpoint_bytes,
    save_checkpoint,
    save_checkpoint_bytes,
)
from .classifiers import (
    HEAD_PREFIX,
    MODEL_KINDS,
    Classifier,
    CnnClassifier,
    MhSattClassifier,
    MlpClassifier,
    predict,
    replace_head,
)

__all__ = [
    "FORMAT_VERSION",
    "clone_model",
    "load_checkpoint",
    "load_checkpoint_bytes",
    "save_checkpoint",
    "save_checkpoint_bytes",
    "HEAD_PREFIX",
    "MODEL_KINDS",
    "Classifier",
    "CnnClassifier",
    "MhSattClassifier",
    "MlpClassifier",
    "predict",
    "replace_head",
]
