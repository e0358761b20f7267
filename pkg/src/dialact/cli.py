"""Command-line front end: a thin client of the experiment service.

Without --server the service runs in-process (same filesystem, no network);
with --server URL the same requests go to a remote instance and every path
in them refers to that machine.

Precedence for every setting: command-line flag, then config file
(--config, see configfile), then the documented defaults.
"""

from __future__ import annotations

import sys

import click
import httpx

from .configfile import validate_config
from .errors import DialactError


class CliFailure(Exception):
    """Service-side failure carried back to the exit-code handler."""


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # starlette's test client warns about its httpx bridge; it is the
        # supported in-process transport and must not pollute stderr
        warnings.simplefilter("ignore", DeprecationWarning)
        from starlette.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app())


def _post(server: str | None, path: str, payload: dict) -> dict:
    payload = {k: v for k, v in payload.items() if v is not None}
    with _client(server) as client:
        response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        if isinstance(detail, list):  # request-model validation problems
            first = detail[0]
            loc = ".".join(str(p) for p in first.get("loc", []) if p != "body")
            detail = f"{loc}: {first.get('msg', 'invalid value')}"
        raise CliFailure(str(detail))
    return response.json()


def _merge(command: str, model: str | None, config_path: str | None, flags: dict) -> dict:
    """Flags override config-file values; unset keys fall to the file."""
    file_values = validate_config(config_path, command, model) if config_path else {}
    merged = dict(file_values)
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    return merged


def _require(merged: dict, command: str, *keys: str) -> None:
    missing = [key for key in keys if merged.get(key) is None]
    if missing:
        flags = ", ".join("--" + key.replace("_", "-") for key in missing)
        raise click.UsageError(f"{command} requires {flags}")


_OVERRIDE_KEYS = (
    "epochs",
    "learning_rate",
    "batch_size",
    "seed",
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


def train_overrides(f):
    decorators = [
        click.option("--config", "config_path", default=None, help="Config file (key=value / INI)"),
        click.option("--epochs", type=int, default=None),
        click.option("--lr", "--learning-rate", "learning_rate", type=float, default=None),
        click.option("--batch-size", type=int, default=None),
        click.option("--seed", type=int, default=None),
        click.option("--dropout", type=float, default=None),
        click.option("--hidden", type=int, default=None),
        click.option("--filters", type=int, default=None),
        click.option("--kernel-width", type=int, default=None),
        click.option("--d-word", type=int, default=None),
        click.option("--d-model", type=int, default=None),
        click.option("--heads", type=int, default=None),
        click.option("--window", type=int, default=None),
        click.option("--stacked/--mono", "stacked", default=None),
    ]
    for decorator in reversed(decorators):
        f = decorator(f)
    return f


def _labels_option(f):
    return click.option(
        "--labels", default=None, help="Comma-separated label set (inferred when omitted)"
    )(f)


def _split_labels(value):
    if value is None:
        return None
    return [part.strip() for part in str(value).split(",") if part.strip()] or None


@click.group()
@click.option("--server", default=None, help="Service URL; omit to run in-process")
@click.pass_context
def cli(ctx, server):
    """Cross-lingual dialogue act recognition toolkit."""
    ctx.obj = {"server": server}


@cli.command()
@click.option("--corpus", default=None)
@click.option("--embeddings", default=None)
@click.option("--word-vectors", default=None)
@click.option("--model", type=click.Choice(["mlp", "cnn", "mhsatt"]), default=None)
@click.option("--out", default=None)
@_labels_option
@train_overrides
@click.pass_obj
def train(obj, corpus, embeddings, word_vectors, model, out, labels, config_path, **overrides):
    """Initial phase: train a classifier on a source corpus."""
    flags = {
        "corpus": corpus,
        "embeddings": embeddings,
        "word_vectors": word_vectors,
        "model": model,
        "out": out,
        "labels": _split_labels(labels),
        **overrides,
    }
    merged = _merge("train", model, config_path, flags)
    merged.setdefault("model", "mlp")
    _require(merged, "train", "corpus", "embeddings", "out")
    payload = {k: merged.get(k) for k in ("corpus", "embeddings", "word_vectors", "model", "out", "labels", *_OVERRIDE_KEYS)}
    result = _post(obj["server"], "/train", payload)
    click.echo(
        f"trained {result['model']} on {result['train_size']} turns "
        f"({result['epochs']} epochs, lr {result['learning_rate']}); "
        f"final loss {result['final_loss']:.6f}"
    )
    click.echo(f"checkpoint written to {result['checkpoint']}")


@cli.command()
@click.option("--from", "from_checkpoint", default=None, help="Source checkpoint")
@click.option("--corpus", default=None)
@click.option("--embeddings", default=None)
@click.option("--out", default=None)
@click.option("--freeze", type=click.Choice(["head_only", "all"]), default=None)
@_labels_option
@train_overrides
@click.pass_obj
def finetune(obj, from_checkpoint, corpus, embeddings, out, freeze, labels, config_path, **overrides):
    """Fine-tuning phase: replace the head and train on a target corpus."""
    flags = {
        "from": from_checkpoint,
        "corpus": corpus,
        "embeddings": embeddings,
        "out": out,
        "freeze": freeze,
        "labels": _split_labels(labels),
        **overrides,
    }
    merged = _merge("finetune", None, config_path, flags)
    _require(merged, "finetune", "from", "corpus", "embeddings", "out")
    payload = {k: merged.get(k) for k in ("from", "corpus", "embeddings", "out", "freeze", "labels", *_OVERRIDE_KEYS)}
    result = _post(obj["server"], "/finetune", payload)
    click.echo(
        f"fine-tuned {result['model']} on {result['train_size']} turns "
        f"({result['epochs']} epochs, lr {result['learning_rate']}); "
        f"final loss {result['final_loss']:.6f}"
    )
    click.echo(f"checkpoint written to {result['checkpoint']}")


@cli.command("eval")
@click.option("--model", "model_path", default=None, help="Checkpoint to evaluate")
@click.option("--corpus", default=None)
@click.option("--embeddings", default=None)
@click.option("--report", "report_out", default=None, help="Report base path (writes .txt and .json)")
@click.option("--config", "config_path", default=None)
@click.pass_obj
def eval_command(obj, model_path, corpus, embeddings, report_out, config_path):
    """Accuracy of a checkpoint on a test corpus."""
    flags = {"model": model_path, "corpus": corpus, "embeddings": embeddings, "report_out": report_out}
    merged = _merge("eval", None, config_path, flags)
    if "report" in merged and "report_out" not in merged:
        merged["report_out"] = merged.pop("report")
    _require(merged, "eval", "model", "corpus", "embeddings")
    payload = {k: merged.get(k) for k in ("model", "corpus", "embeddings", "report_out")}
    result = _post(obj["server"], "/eval", payload)
    click.echo(f"accuracy {result['accuracy']:.6f} ({result['correct']}/{result['total']})")
    for path in result["report_paths"]:
        click.echo(f"report written to {path}")


@cli.command()
@click.option("--corpus", default=None)
@click.option("--embeddings", default=None)
@click.option("--model", type=click.Choice(["mlp", "cnn", "mhsatt"]), default=None)
@click.option("--from", "from_checkpoint", default=None, help="Fine-tune from this checkpoint per fold")
@click.option("--word-vectors", default=None)
@click.option("--k", type=int, default=None)
@click.option("--freeze", type=click.Choice(["head_only", "all"]), default=None)
@click.option("--report", "report_out", default=None)
@_labels_option
@train_overrides
@click.pass_obj
def cv(obj, corpus, embeddings, model, from_checkpoint, word_vectors, k, freeze, report_out, labels, config_path, **overrides):
    """k-fold cross-validation on one corpus."""
    flags = {
        "corpus": corpus,
        "embeddings": embeddings,
        "model": model,
        "from": from_checkpoint,
        "word_vectors": word_vectors,
        "k": k,
        "freeze": freeze,
        "report_out": report_out,
        "labels": _split_labels(labels),
        **overrides,
    }
    merged = _merge("cv", model, config_path, flags)
    if "report" in merged and "report_out" not in merged:
        merged["report_out"] = merged.pop("report")
    _require(merged, "cv", "corpus", "embeddings")
    if merged.get("model") is None and merged.get("from") is None:
        raise click.UsageError("cv requires --model or --from")
    payload = {
        k_: merged.get(k_)
        for k_ in ("corpus", "embeddings", "model", "from", "word_vectors", "k", "freeze", "report_out", "labels", *_OVERRIDE_KEYS)
    }
    result = _post(obj["server"], "/cv", payload)
    click.echo(
        f"cv over {result['k']} folds: mean {result['mean']:.6f} "
        f"std {result['std']:.6f} pooled {result['pooled_accuracy']:.6f}"
    )
    for path in result["report_paths"]:
        click.echo(f"report written to {path}")


@cli.command()
@click.option("--from", "from_checkpoint", default=None, help="Source checkpoint for transfer conditions")
@click.option("--train-corpus", default=None)
@click.option("--test-corpus", default=None)
@click.option("--embeddings", default=None)
@click.option("--word-vectors", default=None)
@click.option("--model", type=click.Choice(["mlp", "cnn", "mhsatt"]), default=None)
@click.option("--conditions", default=None, help="Comma list: majority,scratch,no_finetune,finetune")
@click.option("--sample", type=int, default=None, help="Stratified-subsample the train corpus to N turns")
@click.option("--runs", type=int, default=None)
@click.option("--freeze", type=click.Choice(["head_only", "all"]), default=None)
@click.option("--report", "report_out", default=None)
@_labels_option
@train_overrides
@click.pass_obj
def suite(obj, from_checkpoint, train_corpus, test_corpus, embeddings, word_vectors, model, conditions, sample, runs, freeze, report_out, labels, config_path, **overrides):
    """Baseline and transfer conditions with repeated seeded runs."""
    flags = {
        "from": from_checkpoint,
        "train_corpus": train_corpus,
        "test_corpus": test_corpus,
        "embeddings": embeddings,
        "word_vectors": word_vectors,
        "model": model,
        "conditions": _split_labels(conditions),
        "sample": sample,
        "runs": runs,
        "freeze": freeze,
        "report_out": report_out,
        "labels": _split_labels(labels),
        **overrides,
    }
    merged = _merge("suite", model, config_path, flags)
    if "report" in merged and "report_out" not in merged:
        merged["report_out"] = merged.pop("report")
    _require(merged, "suite", "train_corpus", "test_corpus", "embeddings")
    payload = {
        k_: merged.get(k_)
        for k_ in (
            "from",
            "train_corpus",
            "test_corpus",
            "embeddings",
            "word_vectors",
            "model",
            "conditions",
            "sample",
            "runs",
            "freeze",
            "report_out",
            "labels",
            *_OVERRIDE_KEYS,
        )
    }
    result = _post(obj["server"], "/suite", payload)
    for record in result["report"]["conditions"]:
        click.echo(
            f"{record['name']}: mean {record['mean']:.6f} std {record['std']:.6f} "
            f"(runs {record['runs']})"
        )
    for path in result["report_paths"]:
        click.echo(f"report written to {path}")


@cli.command()
@click.option("--train-corpus", default=None)
@click.option("--test-corpus", default=None)
@click.option("--config", "config_path", default=None)
@_labels_option
@click.pass_obj
def baseline(obj, train_corpus, test_corpus, config_path, labels):
    """Majority-class baseline accuracy."""
    flags = {
        "train_corpus": train_corpus,
        "test_corpus": test_corpus,
        "labels": _split_labels(labels),
    }
    merged = _merge("baseline", None, config_path, flags)
    _require(merged, "baseline", "train_corpus", "test_corpus")
    payload = {k: merged.get(k) for k in ("train_corpus", "test_corpus", "labels")}
    result = _post(obj["server"], "/baseline", payload)
    click.echo(f"majority label {result['majority_label']}: accuracy {result['accuracy']:.6f}")


@cli.command("inspect-corpus")
@click.option("--corpus", default=None)
@click.option("--config", "config_path", default=None)
@click.pass_obj
def inspect_corpus(obj, corpus, config_path):
    """Label distribution table of a corpus."""
    merged = _merge("inspect-corpus", None, config_path, {"corpus": corpus})
    _require(merged, "inspect-corpus", "corpus")
    result = _post(obj["server"], "/inspect-corpus", {"corpus": merged["corpus"]})
    click.echo(result["table"])


@cli.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the experiment service."""
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=host, port=port)


def main(argv: list[str] | None = None) -> int:
    """Dispatch argv; one diagnostic line on stderr and a nonzero code on failure."""
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        print(f"dialact: error: {exc.format_message()}", file=sys.stderr)
        return 2
    except (CliFailure, DialactError) as exc:
        print(f"dialact: error: {exc}", file=sys.stderr)
        return 1
    except (httpx.HTTPError, OSError) as exc:
        print(f"dialact: error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:  # console_scripts hook
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
