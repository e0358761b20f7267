"""Key=value / sectioned config files for the CLI.

Format: INI-style text. Bare `key = value` lines at the top apply to every
command; a `[<command>]` section scopes keys to that command and overrides
the common ones. Validation collects every problem (unknown key, bad type,
out-of-range value) and reports them together. The resolved mapping has the
documented defaults already applied: initial training runs 200 epochs at
learning rate 0.002; fine-tuning runs 25/15/50 epochs (mlp/cnn/mhsatt) at
learning rate 0.001. Command-line flags override anything resolved here.
"""

from __future__ import annotations

import configparser
from pathlib import Path

from .errors import ConfigFileError
from .pipeline.config import FINETUNE_EPOCHS, FINETUNE_LR, INITIAL_EPOCHS, INITIAL_LR

COMMON_SECTION = "common"
COMMANDS = ("train", "finetune", "eval", "cv", "suite", "baseline", "inspect-corpus")

_MODEL_KINDS = ("mlp", "cnn", "mhsatt")
_FREEZE = ("head_only", "all")
_CONDITIONS = ("majority", "scratch", "no_finetune", "finetune")


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_list(raw: str) -> list[str]:
    return [part.strip() for part in raw.split(",") if part.strip()]


# key -> (parser, validator, error description)
_KEYS: dict[str, tuple] = {
    "model": (str.strip, lambda v: v in _MODEL_KINDS, f"must be one of {_MODEL_KINDS}"),
    "epochs": (int, lambda v: v >= 1, "must be at least 1"),
    "learning_rate": (float, lambda v: v > 0, "must be positive"),
    "lr": (float, lambda v: v > 0, "must be positive"),
    "batch_size": (int, lambda v: v >= 1, "must be at least 1"),
    "seed": (int, lambda v: True, ""),
    "dropout": (float, lambda v: 0.0 <= v < 1.0, "must be in [0, 1)"),
    "freeze": (str.strip, lambda v: v in _FREEZE, f"must be one of {_FREEZE}"),
    "hidden": (int, lambda v: v >= 1, "must be at least 1"),
    "filters": (int, lambda v: v >= 1, "must be at least 1"),
    "kernel_width": (int, lambda v: v >= 1, "must be at least 1"),
    "d_word": (int, lambda v: v >= 1, "must be at least 1"),
    "d_model": (int, lambda v: v >= 1, "must be at least 1"),
    "heads": (int, lambda v: v >= 1, "must be at least 1"),
    "window": (int, lambda v: v >= 1, "must be at least 1"),
    "stacked": (_parse_bool, lambda v: True, ""),
    "runs": (int, lambda v: v >= 1, "must be at least 1"),
    "k": (int, lambda v: v >= 2, "must be at least 2"),
    "conditions": (
        _parse_list,
        lambda v: all(c in _CONDITIONS for c in v),
        f"entries must be among {_CONDITIONS}",
    ),
    "labels": (_parse_list, lambda v: len(v) > 0, "must list at least one label"),
    "corpus": (str.strip, lambda v: True, ""),
    "embeddings": (str.strip, lambda v: True, ""),
    "word_vectors": (str.strip, lambda v: True, ""),
    "train_corpus": (str.strip, lambda v: True, ""),
    "test_corpus": (str.strip, lambda v: True, ""),
    "out": (str.strip, lambda v: True, ""),
    "from": (str.strip, lambda v: True, ""),
    "report": (str.strip, lambda v: True, ""),
}


def _apply_defaults(resolved: dict, command: str, model: str | None) -> dict:
    model = resolved.get("model", model)
    if command == "train":
        resolved.setdefault("epochs", INITIAL_EPOCHS)
        resolved.setdefault("learning_rate", INITIAL_LR)
    elif command in ("finetune", "cv", "suite"):
        if model in FINETUNE_EPOCHS:
            resolved.setdefault("epochs", FINETUNE_EPOCHS[model])
        resolved.setdefault("learning_rate", FINETUNE_LR)
    return resolved


def validate_config(
    path_or_text: str | Path,
    command: str,
    model: str | None = None,
) -> dict:
    """Parse + validate a config file for one command; raises ConfigFileError
    carrying every collected problem at once."""
    if command not in COMMANDS:
        raise ConfigFileError([f"unknown command {command!r}"])
    text = Path(path_or_text).read_text(encoding="utf-8") if Path(str(path_or_text)).is_file() else str(path_or_text)
    if not text.lstrip().startswith("["):
        text = f"[{COMMON_SECTION}]\n" + text
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigFileError([f"config parse failure: {exc.message.splitlines()[0]}"]) from None

    errors: list[str] = []
    resolved: dict = {}
    sections = [COMMON_SECTION, command]
    for section in parser.sections():
        if section not in (COMMON_SECTION, *COMMANDS):
            errors.append(f"unknown section [{section}]")
    for section in sections:
        if not parser.has_section(section):
            continue
        for key, raw in parser.items(section):
            if key not in _KEYS:
                errors.append(f"unknown key {key!r}")
                continue
            parse, check, message = _KEYS[key]
            try:
                value = parse(raw)
            except ValueError:
                errors.append(f"{key}: cannot parse {raw!r}")
                continue
            if not check(value):
                errors.append(f"{key}: {message} (got {raw!r})")
                continue
            resolved["learning_rate" if key == "lr" else key] = value
    if errors:
        raise ConfigFileError(errors)
    return _apply_defaults(resolved, command, model)
