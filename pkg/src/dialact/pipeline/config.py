"""Training configuration and the documented defaults for both phases."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..errors import ConfigurationError
from ..models.classifiers import MODEL_KINDS

FREEZE_POLICIES = ("head_only", "all")

INITIAL_EPOCHS = 200
INITIAL_LR = 0.002
FINETUNE_EPOCHS = {"mlp": 25, "cnn": 15, "mhsatt": 50}
FINETUNE_LR = 0.001
DEFAULT_BATCH_SIZE = 32
DEFAULT_RUNS = 10


@dataclass
class TrainConfig:
    """Everything one training phase needs, seed included."""

    model: str = "mlp"
    epochs: int = INITIAL_EPOCHS
    learning_rate: float = INITIAL_LR
    batch_size: int = DEFAULT_BATCH_SIZE
    seed: int = 0
    freeze_policy: str = "all"
    dropout: float = 0.5
    # architecture sizes (used where the model kind needs them)
    hidden: int = 512
    filters: int = 256
    kernel_width: int = 3
    d_word: int = 128
    d_model: int = 128
    heads: int = 4
    window: int = 15
    stacked: bool = True  # mhsatt: feed translated + original windows

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.model not in MODEL_KINDS:
            raise ConfigurationError(f"unknown model kind {self.model!r}")
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be at least 1, got {self.epochs}")
        if self.learning_rate <= 0:
            raise ConfigurationError(f"learning rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch size must be at least 1, got {self.batch_size}")
        if self.freeze_policy not in FREEZE_POLICIES:
            raise ConfigurationError(f"freeze policy must be one of {FREEZE_POLICIES}")
        if not 0.0 <= self.dropout < 1.0:
            raise ConfigurationError(f"dropout must be in [0, 1), got {self.dropout}")

    def with_overrides(self, **kwargs) -> "TrainConfig":
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


def initial_config(model: str, **overrides) -> TrainConfig:
    """Initial-phase defaults: 200 epochs at learning rate 0.002."""
    return TrainConfig(model=model).with_overrides(**overrides)


def finetune_config(model: str, **overrides) -> TrainConfig:
    """Fine-tuning defaults: head-only updates, lr 0.001, epochs by model kind."""
    base = TrainConfig(
        model=model,
        epochs=FINETUNE_EPOCHS[model],
        learning_rate=FINETUNE_LR,
        freeze_policy="head_only",
    )
    return base.with_overrides(**overrides)
