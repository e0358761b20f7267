from .config import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_RUNS,
    FINETUNE_EPOCHS,
    FINETUNE_LR,
    FREEZE_POLICIES,
    INITIAL_EPOCHS,
    INITIAL_LR,
    TrainConfig,
    finetune_config,
    initial_config,
)
from .data import Example, build_examples, examples_for_model, forward_example
from .evaluate import (
    ConfusionMatrix,
    EvalResult,
    MajorityBaseline,
    evaluate_accuracy,
    evaluate_examples,
    evaluate_with_label_map,
    majority_class_baseline,
)
from .experiments import (
    CONDITIONS,
    ExperimentReport,
    RunResult,
    cross_validate,
    mean_std,
    run_condition_suite,
    run_repeated,
)
from .report import (
    confusion_grid,
    distribution_rows,
    distribution_table,
    eval_report,
    report_to_dict,
    report_to_json,
    report_to_text,
    write_report,
)
from .train import TrainingRun, build_model, finetune, train_initial, train_on_examples

__all__ = [
    "DEFAULT_BATCH_SIZE",
    "DEFAULT_RUNS",
    "FINETUNE_EPOCHS",
    "FINETUNE_LR",
    "FREEZE_POLICIES",
    "INITIAL_EPOCHS",
    "INITIAL_LR",
    "TrainConfig",
    "finetune_config",
    "initial_config",
    "Example",
    "build_examples",
    "examples_for_model",
    "forward_example",
    "ConfusionMatrix",
    "EvalResult",
    "MajorityBaseline",
    "evaluate_accuracy",
    "evaluate_examples",
    "evaluate_with_label_map",
    "majority_class_baseline",
    "CONDITIONS",
    "ExperimentReport",
    "RunResult",
    "cross_validate",
    "mean_std",
    "run_condition_suite",
    "run_repeated",
    "confusion_grid",
    "distribution_rows",
    "distribution_table",
    "eval_report",
    "report_to_dict",
    "report_to_json",
    "report_to_text",
    "write_report",
    "TrainingRun",
    "build_model",
    "finetune",
    "train_initial",
    "train_on_examples",
]
