"""End-to-end pipeline: eigenspace fit, feature selection, MLP training,
evaluation, and the eigenvector-count sweep."""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

from .discretize import fit_discretizer
from .eigenspace import (
    SelectionStrategy,
    Standard,
    fit_eigenspace,
    select,
    truncate,
)
from .mlp import TrainConfig, encode_targets, init_network, train
from .model_io import PipelineModel
from .pgm import Dataset
from .selection import (
    FeatureSelection,
    fit_selection_with_escalation,
    reduce_matrix,
)

THREADS_ENV_VAR = "ROUGH_REDUCE_THREADS"


@dataclass(frozen=True)
class PipelineConfig:
    """Knobs for one pipeline run; every default is deterministic.

    ``error_threshold=None`` resolves to 0.01 x n_train; ``hidden_size=None``
    resolves to max(5, ceil(n_inputs / 2)).  ``max_components`` truncates the
    eigenspace after the strategy is applied (used by the dimension sweep).
    ``use_reduct=False`` skips rough-set selection and feeds every
    post-projection coordinate to the classifier.
    """

    strategy: SelectionStrategy = field(default_factory=Standard)
    bins: int = 5
    learning_rate: float = 0.5
    max_epochs: int = 5000
    error_threshold: float | None = None
    hidden_size: int | None = None
    seed: int = 0
    target_on: float = 0.8
    target_off: float = 0.2
    shuffle: bool = False
    use_reduct: bool = True
    max_components: int | None = None


@dataclass
class EvalReport:
    """Outcome of one pipeline run."""

    accuracy: float
    confusion: list[list[int]]
    fit_ms: float
    select_ms: float
    train_ms: float
    eval_ms: float
    total_ms: float
    n_pixels: int
    n_components: int
    n_selected: int
    bins_used: int
    final_train_error: float
    converged: bool
    epochs_run: int

    def __post_init__(self) -> None:
        total = sum(sum(row) for row in self.confusion)
        trace = sum(self.confusion[i][i] for i in range(len(self.confusion)))
        if total and abs(self.accuracy - trace / total) > 1e-12:
            raise ValueError("accuracy disagrees with the confusion counts")


def run_pipeline(
    train_set: Dataset, test_set: Dataset, config: PipelineConfig = PipelineConfig()
) -> tuple[PipelineModel, EvalReport]:
    """Fit the full pipeline on ``train_set`` and evaluate on ``test_set``."""
    if train_set.n_samples < 2:
        raise ValueError("need at least two training samples")
    if test_set.n_samples == 0:
        raise ValueError("cannot evaluate on an empty test set")
    if train_set.class_names != test_set.class_names:
        raise ValueError("train and test sets disagree on the class catalogue")
    labels = train_set.labels()
    if len(set(labels)) < 2:
        raise ValueError("decision constant: training set has a single class")

    started = time.perf_counter()
    vectors = train_set.vectors()
    space = select(fit_eigenspace(vectors), config.strategy)
    if config.max_components is not None:
        space = truncate(space, config.max_components)
    train_coords = (vectors - space.mean) @ space.basis
    fit_ms = _elapsed_ms(started)

    t = time.perf_counter()
    discretizer, selection, bins_used = _select_stage(train_coords, labels, config)
    select_ms = _elapsed_ms(t)

    t = time.perf_counter()
    reduced = reduce_matrix(selection, train_coords)
    n_inputs = reduced.shape[1]
    hidden = config.hidden_size
    if hidden is None:
        hidden = max(5, math.ceil(n_inputs / 2))
    threshold = config.error_threshold
    if threshold is None:
        threshold = 0.01 * train_set.n_samples
    net = init_network((n_inputs, hidden, train_set.n_classes), config.seed)
    targets = encode_targets(
        labels, train_set.n_classes, config.target_on, config.target_off
    )
    dataset = [(reduced[i], targets[i]) for i in range(reduced.shape[0])]
    train_cfg = TrainConfig(
        learning_rate=config.learning_rate,
        error_threshold=threshold,
        max_epochs=config.max_epochs,
        rng_seed=config.seed,
        target_on=config.target_on,
        target_off=config.target_off,
        shuffle=config.shuffle,
    )
    net, trace = train(net, dataset, train_cfg)
    train_ms = _elapsed_ms(t)

    model = PipelineModel(
        eigenspace=space,
        strategy=config.strategy,
        discretizer=discretizer,
        selection=selection,
        network=net,
        class_names=list(train_set.class_names),
    )

    t = time.perf_counter()
    predictions = model.predict_many([s[0] for s in test_set.samples])
    truth = test_set.labels()
    k = test_set.n_classes
    confusion = [[0] * k for _ in range(k)]
    for want, got in zip(truth, predictions):
        confusion[int(want)][int(got)] += 1
    accuracy = float((predictions == truth).mean())
    eval_ms = _elapsed_ms(t)

    report = EvalReport(
        accuracy=accuracy,
        confusion=confusion,
        fit_ms=fit_ms,
        select_ms=select_ms,
        train_ms=train_ms,
        eval_ms=eval_ms,
        total_ms=_elapsed_ms(started),
        n_pixels=space.n_pixels,
        n_components=space.n_components,
        n_selected=len(selection.selected_indices),
        bins_used=bins_used,
        final_train_error=trace[-1],
        converged=trace[-1] <= threshold,
        epochs_run=len(trace),
    )
    return model, report


def _select_stage(train_coords, labels, config):
    if config.use_reduct:
        discretizer, _, selection, bins_used = fit_selection_with_escalation(
            train_coords, labels, config.bins
        )
        return discretizer, selection, bins_used
    discretizer = fit_discretizer(train_coords, bins=config.bins)
    selection = FeatureSelection(
        tuple(range(train_coords.shape[1])), "selection disabled"
    )
    return discretizer, selection, config.bins


def _elapsed_ms(since: float) -> float:
    return max((time.perf_counter() - since) * 1000.0, 1e-6)


def evaluate_model(model: PipelineModel, test_set: Dataset) -> EvalReport:
    """Re-evaluate a trained model on a dataset (timings cover eval only)."""
    if test_set.n_samples == 0:
        raise ValueError("cannot evaluate on an empty test set")
    if test_set.n_classes > len(model.class_names):
        raise ValueError(
            f"dataset has {test_set.n_classes} classes, model knows "
            f"{len(model.class_names)}"
        )
    started = time.perf_counter()
    predictions = model.predict_many([s[0] for s in test_set.samples])
    truth = test_set.labels()
    k = len(model.class_names)
    confusion = [[0] * k for _ in range(k)]
    for want, got in zip(truth, predictions):
        confusion[int(want)][int(got)] += 1
    eval_ms = _elapsed_ms(started)
    return EvalReport(
        accuracy=float((predictions == truth).mean()),
        confusion=confusion,
        fit_ms=1e-6,
        select_ms=1e-6,
        train_ms=1e-6,
        eval_ms=eval_ms,
        total_ms=eval_ms,
        n_pixels=model.eigenspace.n_pixels,
        n_components=model.eigenspace.n_components,
        n_selected=len(model.selection.selected_indices),
        bins_used=model.discretizer.bin_count,
        final_train_error=float("nan"),
        converged=True,
        epochs_run=0,
    )


# --- dimension sweep --------------------------------------------------------


def sweep_dimensions(
    train_set: Dataset,
    test_set: Dataset,
    q_values: Sequence[int],
    config: PipelineConfig = PipelineConfig(),
) -> list[tuple[int, float]]:
    """Rerun the pipeline with the eigenspace truncated to each Q.

    Returns (q, accuracy) pairs in the order given.  Runs are independent;
    the ROUGH_REDUCE_THREADS environment variable (default 1) caps how many
    execute concurrently.
    """
    q_values = list(q_values)
    if not q_values:
        return []

    def one(q: int) -> tuple[int, float]:
        _, report = run_pipeline(
            train_set, test_set, replace(config, max_components=q)
        )
        return q, report.accuracy

    workers = max(1, int(os.environ.get(THREADS_ENV_VAR, "1")))
    if workers == 1 or len(q_values) == 1:
        return [one(q) for q in q_values]
    with ThreadPoolExecutor(max_workers=min(workers, len(q_values))) as pool:
        return list(pool.map(one, q_values))


def sweep_to_csv(rows: Sequence[tuple[int, float]]) -> str:
    lines = ["q,accuracy"]
    for q, acc in rows:
        lines.append(f"{q},{acc:.6f}")
    return "\n".join(lines) + "\n"


def report_to_text(report: EvalReport, class_names: Sequence[str] | None = None) -> str:
    """Plain ``key: value`` rendering of a report."""
    lines = [
        f"accuracy: {report.accuracy:.6f}",
        f"raw_dimension: {report.n_pixels}",
        f"projected_dimension: {report.n_components}",
        f"selected_dimension: {report.n_selected}",
        f"bins_used: {report.bins_used}",
        f"fit_ms: {report.fit_ms:.3f}",
        f"select_ms: {report.select_ms:.3f}",
        f"train_ms: {report.train_ms:.3f}",
        f"eval_ms: {report.eval_ms:.3f}",
        f"total_ms: {report.total_ms:.3f}",
        f"final_train_error: {report.final_train_error:.6f}",
        f"converged: {str(report.converged).lower()}",
        f"epochs_run: {report.epochs_run}",
    ]
    names = class_names or [str(i) for i in range(len(report.confusion))]
    for name, row in zip(names, report.confusion):
        lines.append(f"confusion[{name}]: {' '.join(str(v) for v in row)}")
    return "\n".join(lines) + "\n"
