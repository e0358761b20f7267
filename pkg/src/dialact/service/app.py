"""HTTP surface for the toolkit: one endpoint per experiment verb."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..corpus import (
    Corpus,
    LabelSet,
    load_corpus,
    load_sentence_embeddings,
    load_word_vectors,
)
from ..errors import ConfigurationError, DialactError
from ..models import load_checkpoint, save_checkpoint
from ..pipeline import (
    TrainConfig,
    cross_validate,
    distribution_rows,
    distribution_table,
    eval_report,
    evaluate_accuracy,
    finetune,
    finetune_config,
    initial_config,
    majority_class_baseline,
    run_condition_suite,
    train_initial,
    write_report,
)
from ..pipeline.report import report_to_dict
from . import schemas


def _require_file(path: str | None, what: str) -> str | None:
    if path is not None and not Path(path).is_file():
        raise ConfigurationError(f"{what} file not found: {path}")
    return path


def _load_corpus(path: str, labels: list[str] | None) -> Corpus:
    _require_file(path, "corpus")
    label_set = LabelSet(labels) if labels else None
    return load_corpus(path, label_set)


def _load_embeddings(path: str):
    _require_file(path, "embeddings")
    return load_sentence_embeddings(path)


def _load_word_vectors(path: str | None):
    if path is None:
        return None
    _require_file(path, "word vectors")
    return load_word_vectors(path)


def _overrides(req: schemas.TrainOverrides) -> dict:
    fields = (
        "epochs",
        "learning_rate",
        "batch_size",
        "dropout",
        "hidden",
        "filters",
        "kernel_width",
        "d_word",
        "d_model",
        "heads",
        "window",
        "stacked",
    )
    values = {name: getattr(req, name) for name in fields}
    values["seed"] = req.seed
    return values


def _confusion_payload(confusion) -> schemas.ConfusionPayload:
    payload = confusion.to_dict()
    return schemas.ConfusionPayload(
        labels=payload["labels"],
        matrix=payload["matrix"],
        unmapped=payload.get("unmapped"),
    )


def _write_reports(report, base: str | None) -> list[str]:
    if base is None:
        return []
    paths = write_report(report, base)
    return [str(p) for p in paths]


def create_app() -> FastAPI:
    app = FastAPI(title="dialact", version=__version__)

    @app.exception_handler(DialactError)
    async def domain_error(_request: Request, exc: DialactError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def missing_file(_request: Request, exc: FileNotFoundError):
        return JSONResponse(status_code=400, content={"detail": f"file not found: {exc.filename}"})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/train", response_model=schemas.TrainResponse)
    def train(req: schemas.TrainRequest) -> schemas.TrainResponse:
        corpus = _load_corpus(req.corpus, req.labels)
        embeddings = _load_embeddings(req.embeddings)
        word_vectors = _load_word_vectors(req.word_vectors)
        config = initial_config(req.model, **_overrides(req))
        run = train_initial(corpus, config, embeddings, word_vectors)
        save_checkpoint(run.model, req.out)
        return schemas.TrainResponse(
            checkpoint=req.out,
            model=req.model,
            labels=run.model.label_set.tags,
            epochs=config.epochs,
            learning_rate=config.learning_rate,
            final_loss=run.epoch_losses[-1],
            train_size=len(corpus),
        )

    @app.post("/finetune", response_model=schemas.TrainResponse)
    def finetune_endpoint(req: schemas.FinetuneRequest) -> schemas.TrainResponse:
        _require_file(req.from_checkpoint, "checkpoint")
        model = load_checkpoint(req.from_checkpoint)
        corpus = _load_corpus(req.corpus, req.labels)
        embeddings = _load_embeddings(req.embeddings)
        config = finetune_config(model.kind, freeze_policy=req.freeze, **_overrides(req))
        run = finetune(model, corpus, config, embeddings)
        save_checkpoint(run.model, req.out)
        return schemas.TrainResponse(
            checkpoint=req.out,
            model=model.kind,
            labels=run.model.label_set.tags,
            epochs=config.epochs,
            learning_rate=config.learning_rate,
            final_loss=run.epoch_losses[-1],
            train_size=len(corpus),
        )

    @app.post("/eval", response_model=schemas.EvalResponse)
    def eval_endpoint(req: schemas.EvalRequest) -> schemas.EvalResponse:
        _require_file(req.model, "checkpoint")
        model = load_checkpoint(req.model)
        corpus = _load_corpus(req.corpus, req.labels or model.label_set.tags)
        embeddings = _load_embeddings(req.embeddings)
        result = evaluate_accuracy(model, corpus.turns(), embeddings)
        report_paths = _write_reports(
            eval_report(result, model.label_set.tags), req.report_out
        )
        return schemas.EvalResponse(
            accuracy=result.accuracy,
            correct=result.correct,
            total=result.total,
            labels=model.label_set.tags,
            confusion=_confusion_payload(result.confusion),
            report_paths=report_paths,
        )

    @app.post("/cv", response_model=schemas.CvResponse)
    def cv_endpoint(req: schemas.CvRequest) -> schemas.CvResponse:
        corpus = _load_corpus(req.corpus, req.labels)
        embeddings = _load_embeddings(req.embeddings)
        word_vectors = _load_word_vectors(req.word_vectors)
        source_model = None
        if req.from_checkpoint is not None:
            _require_file(req.from_checkpoint, "checkpoint")
            source_model = load_checkpoint(req.from_checkpoint)
            config = finetune_config(
                source_model.kind, freeze_policy=req.freeze, **_overrides(req)
            )
        elif req.model is not None:
            config = finetune_config(req.model, freeze_policy=req.freeze or "all", **_overrides(req))
        else:
            raise ConfigurationError("cv needs either a model kind or a source checkpoint")
        result = cross_validate(corpus, req.k, config, embeddings, source_model, word_vectors)
        report = eval_report_from_cv(result, corpus.label_set.tags, req.k, config)
        report_paths = _write_reports(report, req.report_out)
        return schemas.CvResponse(
            accuracies=result.accuracies,
            mean=result.mean,
            std=result.std,
            pooled_accuracy=result.pooled_accuracy,
            k=req.k,
            report_paths=report_paths,
        )

    @app.post("/suite", response_model=schemas.SuiteResponse)
    def suite_endpoint(req: schemas.SuiteRequest) -> schemas.SuiteResponse:
        train_corpus = _load_corpus(req.train_corpus, req.labels)
        if req.sample is not None:
            from ..corpus import stratified_sample
            from ..pipeline.experiments import _corpus_from_turns

            sampled = stratified_sample(train_corpus.turns(), req.sample, req.seed)
            train_corpus = _corpus_from_turns(sampled, train_corpus.label_set)
        test_corpus = _load_corpus(req.test_corpus, train_corpus.label_set.tags)
        embeddings = _load_embeddings(req.embeddings)
        word_vectors = _load_word_vectors(req.word_vectors)
        source_model = None
        if req.from_checkpoint is not None:
            _require_file(req.from_checkpoint, "checkpoint")
            source_model = load_checkpoint(req.from_checkpoint)
            kind = source_model.kind
            if req.model is not None and req.model != kind:
                raise ConfigurationError(
                    f"requested model kind {req.model!r} but checkpoint holds {kind!r}"
                )
        else:
            kind = req.model or "mlp"
        config = finetune_config(kind, freeze_policy=req.freeze, **_overrides(req))
        report = run_condition_suite(
            target_train=train_corpus,
            target_test=test_corpus,
            embeddings=embeddings,
            conditions=list(req.conditions),
            finetune_cfg=config,
            source_model=source_model,
            runs=req.runs,
            seed=req.seed,
            word_vectors=word_vectors,
        )
        report_paths = _write_reports(report, req.report_out)
        return schemas.SuiteResponse(report=report_to_dict(report), report_paths=report_paths)

    @app.post("/baseline", response_model=schemas.BaselineResponse)
    def baseline_endpoint(req: schemas.BaselineRequest) -> schemas.BaselineResponse:
        train_corpus = _load_corpus(req.train_corpus, req.labels)
        test_corpus = _load_corpus(req.test_corpus, train_corpus.label_set.tags)
        baseline = majority_class_baseline(
            train_corpus.turns(), test_corpus.turns(), train_corpus.label_set
        )
        return schemas.BaselineResponse(majority_label=baseline.label, accuracy=baseline.accuracy)

    @app.post("/inspect-corpus", response_model=schemas.InspectResponse)
    def inspect_endpoint(req: schemas.InspectRequest) -> schemas.InspectResponse:
        corpus = _load_corpus(req.corpus, None)
        rows = [schemas.DistributionRow(**row) for row in distribution_rows(corpus)]
        return schemas.InspectResponse(
            total=len(corpus), rows=rows, table=distribution_table(corpus)
        )

    return app


def eval_report_from_cv(result, labels: list[str], k: int, config: TrainConfig):
    """Wrap a cross-validation RunResult for the report writers."""
    from ..pipeline.experiments import ExperimentReport

    report = ExperimentReport(
        config={"kind": "cross-validation", "k": k, "seed": config.seed, "model": config.model},
        labels=labels,
    )
    report.conditions["cv"] = result
    report.condition_meta["cv"] = {
        "epochs": config.epochs,
        "learning_rate": config.learning_rate,
    }
    return report


app = create_app()
