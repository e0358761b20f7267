"""Request/response models for the experiment service.

All file paths are interpreted on the machine running the service; the
default CLI wiring runs the service in-process, so they are ordinary local
paths there.
"""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

ModelKind = Literal["mlp", "cnn", "mhsatt"]
FreezePolicy = Literal["head_only", "all"]
ConditionName = Literal["majority", "scratch", "no_finetune", "finetune"]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, protected_namespaces=())


class TrainOverrides(_Strict):
    epochs: int | None = None
    learning_rate: float | None = None
    batch_size: int | None = None
    seed: int = 0
    dropout: float | None = None
    hidden: int | None = None
    filters: int | None = None
    kernel_width: int | None = None
    d_word: int | None = None
    d_model: int | None = None
    heads: int | None = None
    window: int | None = None
    stacked: bool | None = None


class TrainRequest(TrainOverrides):
    corpus: str
    embeddings: str
    word_vectors: str | None = None
    model: ModelKind = "mlp"
    labels: list[str] | None = None
    out: str


class TrainResponse(_Strict):
    checkpoint: str
    model: str
    labels: list[str]
    epochs: int
    learning_rate: float
    final_loss: float
    train_size: int


class FinetuneRequest(TrainOverrides):
    from_checkpoint: str = Field(alias="from")
    corpus: str
    embeddings: str
    labels: list[str] | None = None
    freeze: FreezePolicy | None = None
    out: str


class EvalRequest(_Strict):
    model: str  # checkpoint path
    corpus: str
    embeddings: str
    labels: list[str] | None = None
    report_out: str | None = None


class ConfusionPayload(_Strict):
    labels: list[str]
    matrix: list[list[int]]
    unmapped: list[int] | None = None


class EvalResponse(_Strict):
    accuracy: float
    correct: int
    total: int
    labels: list[str]
    confusion: ConfusionPayload
    report_paths: list[str] = Field(default_factory=list)


class CvRequest(TrainOverrides):
    corpus: str
    embeddings: str
    model: ModelKind | None = None
    from_checkpoint: str | None = Field(default=None, alias="from")
    word_vectors: str | None = None
    labels: list[str] | None = None
    k: int = 10
    freeze: FreezePolicy | None = None
    report_out: str | None = None


class CvResponse(_Strict):
    accuracies: list[float]
    mean: float
    std: float
    pooled_accuracy: float
    k: int
    report_paths: list[str] = Field(default_factory=list)


class SuiteRequest(TrainOverrides):
    from_checkpoint: str | None = Field(default=None, alias="from")
    train_corpus: str
    test_corpus: str
    embeddings: str
    word_vectors: str | None = None
    model: ModelKind | None = None
    labels: list[str] | None = None
    conditions: list[ConditionName] = Field(
        default_factory=lambda: ["majority", "scratch", "no_finetune", "finetune"]
    )
    sample: int | None = None  # stratified-subsample the train corpus first
    runs: int = 10
    freeze: FreezePolicy | None = None
    report_out: str | None = None


class SuiteResponse(_Strict):
    report: dict
    report_paths: list[str] = Field(default_factory=list)


class BaselineRequest(_Strict):
    train_corpus: str
    test_corpus: str
    labels: list[str] | None = None


class BaselineResponse(_Strict):
    majority_label: str
    accuracy: float


class InspectRequest(_Strict):
    corpus: str


class DistributionRow(_Strict):
    label: str
    count: int
    percent: float


class InspectResponse(_Strict):
    total: int
    rows: list[DistributionRow]
    table: str


class HealthResponse(_Strict):
    status: str
    version: str
