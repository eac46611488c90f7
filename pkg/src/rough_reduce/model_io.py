"""The trained pipeline model and its versioned text persistence.

Models save to a plain text file: a ``rough-reduce-model v1`` header,
named sections for each stage, and a trailing sha256 checksum over all
preceding bytes.  Floats are written with 17 significant digits so every
64-bit value round-trips exactly and a reloaded model reproduces the
in-memory predictions bit for bit.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .discretize import DiscretizationModel
from .eigenspace import (
    DropFirst,
    DropLastFraction,
    Eigenspace,
    Energy,
    SelectionStrategy,
    Standard,
    Stretch,
)
from .mlp import MlpNetwork, classify
from .selection import FeatureSelection, reduce_vector

FORMAT_VERSION = "v1"
_HEADER = "rough-reduce-model"


class ModelFormatError(ValueError):
    """Base for malformed model files."""


class UnsupportedVersionError(ModelFormatError):
    pass


class ChecksumMismatchError(ModelFormatError):
    pass


class MalformedSectionError(ModelFormatError):
    pass


@dataclass
class PipelineModel:
    """Everything needed to classify a raw image vector."""

    eigenspace: Eigenspace
    strategy: SelectionStrategy
    discretizer: DiscretizationModel
    selection: FeatureSelection
    network: MlpNetwork
    class_names: list[str]
    version: str = FORMAT_VERSION

    def __post_init__(self) -> None:
        q = self.eigenspace.n_components
        if self.discretizer.n_features != q:
            raise ValueError(
                f"discretizer covers {self.discretizer.n_features} features, "
                f"eigenspace provides {q}"
            )
        n_selected = len(self.selection.selected_indices)
        if n_selected > q:
            raise ValueError("selection is wider than the eigenspace")
        if self.network.n_inputs != n_selected:
            raise ValueError(
                f"network expects {self.network.n_inputs} inputs, "
                f"selection provides {n_selected}"
            )
        if self.network.n_outputs != len(self.class_names):
            raise ValueError("one output node per class required")

    def predict_class(self, image: np.ndarray) -> int:
        """Class id for one raw image vector."""
        coords = self.eigenspace.basis.T @ (
            np.asarray(image, dtype=np.float64) - self.eigenspace.mean
        )
        return classify(self.network, reduce_vector(self.selection, coords))

    def predict_many(self, images: Sequence[np.ndarray]) -> np.ndarray:
        return np.array([self.predict_class(img) for img in images], dtype=np.int64)


# --- serialization ---------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_row(values) -> str:
    return " ".join(_fmt(v) for v in values)


def _strategy_fields(strategy: SelectionStrategy) -> tuple[str, float | None]:
    if isinstance(strategy, Standard):
        return "standard", None
    if isinstance(strategy, DropLastFraction):
        return "drop-last", strategy.fraction
    if isinstance(strategy, Energy):
        return "energy", strategy.threshold
    if isinstance(strategy, Stretch):
        return "stretch", strategy.threshold
    if isinstance(strategy, DropFirst):
        return "drop-first", None
    raise ValueError(f"cannot serialize strategy {strategy!r}")


def _strategy_from_fields(kind: str, param: float | None) -> SelectionStrategy:
    if kind == "standard":
        return Standard()
    if kind == "drop-last":
        return DropLastFraction(param)
    if kind == "energy":
        return Energy(param)
    if kind == "stretch":
        return Stretch(param)
    if kind == "drop-first":
        return DropFirst()
    raise MalformedSectionError(f"unknown strategy kind {kind!r}")


def model_to_text(model: PipelineModel) -> str:
    space = model.eigenspace
    lines = [f"{_HEADER} {model.version}"]
    lines.append("section eigenspace")
    lines.append(f"n_pixels {space.n_pixels}")
    lines.append(f"n_components {space.n_components}")
    lines.append("mean " + _fmt_row(space.mean))
    lines.append("eigenvalues " + _fmt_row(space.eigenvalues))
    for i in range(space.n_components):
        lines.append("eigenvector " + _fmt_row(space.basis[:, i]))

    kind, param = _strategy_fields(model.strategy)
    lines.append("section strategy")
    lines.append(f"kind {kind}")
    if param is not None:
        lines.append(f"param {_fmt(param)}")

    lines.append("section discretizer")
    lines.append(f"bins {model.discretizer.bin_count}")
    lines.append(f"n_features {model.discretizer.n_features}")
    for feature_edges in model.discretizer.edges:
        lines.append(("edges " + _fmt_row(feature_edges)).rstrip())

    lines.append("section selection")
    lines.append("indices " + " ".join(str(i) for i in model.selection.selected_indices))
    lines.append(f"provenance {model.selection.provenance}")

    lines.append("section classes")
    for name in model.class_names:
        lines.append(f"class {name}")

    lines.append("section mlp")
    lines.append("layer_sizes " + " ".join(str(s) for s in model.network.layer_sizes))
    for w in model.network.weights:
        for row in w:
            lines.append("weights " + _fmt_row(row))

    body = "\n".join(lines) + "\n"
    digest = hashlib.sha256(body.encode()).hexdigest()
    return body + f"checksum sha256 {digest}\n"


def model_from_text(text: str) -> PipelineModel:
    body, _, tail = text.rpartition("checksum sha256 ")
    if not body:
        raise ChecksumMismatchError("missing checksum line")
    if hashlib.sha256(body.encode()).hexdigest() != tail.strip():
        raise ChecksumMismatchError("model file checksum does not match its contents")

    lines = body.splitlines()
    if not lines or not lines[0].startswith(_HEADER):
        raise MalformedSectionError("missing model header line")
    version = lines[0][len(_HEADER):].strip()
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"unsupported model version {version!r}, expected {FORMAT_VERSION!r}"
        )

    sections = _split_sections(lines[1:])
    try:
        space = _parse_eigenspace(sections["eigenspace"])
        strategy = _parse_strategy(sections["strategy"])
        discretizer = _parse_discretizer(sections["discretizer"])
        selection = _parse_selection(sections["selection"])
        class_names = _parse_classes(sections["classes"])
        network = _parse_mlp(sections["mlp"])
        return PipelineModel(space, strategy, discretizer, selection, network, class_names)
    except KeyError as missing:
        raise MalformedSectionError(f"missing section {missing}") from None
    except (ValueError, IndexError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise MalformedSectionError(str(exc)) from exc


def save_model(model: PipelineModel, path) -> None:
    Path(path).write_text(model_to_text(model))


def load_model(path) -> PipelineModel:
    return model_from_text(Path(path).read_text())


# --- section helpers -------------------------------------------------------


def _split_sections(lines: Sequence[str]) -> dict[str, list[tuple[str, str]]]:
    sections: dict[str, list[tuple[str, str]]] = {}
    current: list[tuple[str, str]] | None = None
    for line in lines:
        if not line.strip():
            continue
        key, _, rest = line.partition(" ")
        if key == "section":
            name = rest.strip()
            if name in sections:
                raise MalformedSectionError(f"duplicate section {name!r}")
            current = sections[name] = []
        else:
            if current is None:
                raise MalformedSectionError(f"content before any section: {line!r}")
            current.append((key, rest))
    return sections


def _take(fields: list[tuple[str, str]], key: str) -> str:
    for k, v in fields:
        if k == key:
            return v
    raise MalformedSectionError(f"missing field {key!r}")


def _take_all(fields: list[tuple[str, str]], key: str) -> list[str]:
    return [v for k, v in fields if k == key]


def _floats(text: str) -> np.ndarray:
    return np.array([float(tok) for tok in text.split()], dtype=np.float64)


def _parse_eigenspace(fields) -> Eigenspace:
    n_pixels = int(_take(fields, "n_pixels"))
    n_components = int(_take(fields, "n_components"))
    mean = _floats(_take(fields, "mean"))
    eigenvalues = _floats(_take(fields, "eigenvalues"))
    vectors = [_floats(v) for v in _take_all(fields, "eigenvector")]
    if mean.shape[0] != n_pixels:
        raise MalformedSectionError("mean length disagrees with n_pixels")
    if len(vectors) != n_components or eigenvalues.shape[0] != n_components:
        raise MalformedSectionError("eigenvector count disagrees with n_components")
    basis = (
        np.column_stack(vectors) if vectors else np.empty((n_pixels, 0))
    )
    if basis.shape[0] != n_pixels:
        raise MalformedSectionError("eigenvector length disagrees with n_pixels")
    return Eigenspace(mean, basis, eigenvalues)


def _parse_strategy(fields) -> SelectionStrategy:
    kind = _take(fields, "kind").strip()
    params = _take_all(fields, "param")
    param = float(params[0]) if params else None
    return _strategy_from_fields(kind, param)


def _parse_discretizer(fields) -> DiscretizationModel:
    bins = int(_take(fields, "bins"))
    n_features = int(_take(fields, "n_features"))
    edges = [tuple(float(t) for t in v.split()) for v in _take_all(fields, "edges")]
    if len(edges) != n_features:
        raise MalformedSectionError("edge line count disagrees with n_features")
    return DiscretizationModel(tuple(edges), bins)


def _parse_selection(fields) -> FeatureSelection:
    indices = tuple(int(t) for t in _take(fields, "indices").split())
    provenance = _take(fields, "provenance")
    return FeatureSelection(indices, provenance)


def _parse_classes(fields) -> list[str]:
    names = _take_all(fields, "class")
    if not names:
        raise MalformedSectionError("no classes recorded")
    return names


def _parse_mlp(fields) -> MlpNetwork:
    sizes = tuple(int(t) for t in _take(fields, "layer_sizes").split())
    rows = [_floats(v) for v in _take_all(fields, "weights")]
    weights = []
    at = 0
    for l in range(len(sizes) - 1):
        n_rows, n_cols = sizes[l + 1], sizes[l] + 1
        block = rows[at:at + n_rows]
        if len(block) != n_rows or any(r.shape[0] != n_cols for r in block):
            raise MalformedSectionError(f"weight rows for layer {l + 1} are malformed")
        weights.append(np.vstack(block))
        at += n_rows
    if at != len(rows):
        raise MalformedSectionError("extra weight rows at the end of the mlp section")
    return MlpNetwork(sizes, weights)
