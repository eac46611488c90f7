"""PGM (portable graymap) reading and directory-based face datasets.

Handles binary ``P5`` and ASCII ``P2`` files with maxval up to 255.
Comments (``#`` to end of line) may appear between header tokens.  Pixels
are scaled to [0, 1] by dividing by maxval and flattened row-major.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class PgmParseError(ValueError):
    """Malformed PGM input; ``offset`` is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (byte offset {offset})")


def load_pgm(path) -> np.ndarray:
    """Read one PGM file into a flat [0, 1] float vector."""
    data = Path(path).read_bytes()
    return parse_pgm(data)


def parse_pgm(data: bytes) -> np.ndarray:
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise PgmParseError(f"bad magic {magic!r}, expected P5 or P2", 0)
    pos = 2
    width, pos = _read_header_int(data, pos, "width")
    height, pos = _read_header_int(data, pos, "height")
    maxval_at = _skip_separators(data, pos)
    maxval, pos = _read_header_int(data, pos, "maxval")
    if maxval <= 0:
        raise PgmParseError(f"maxval must be positive, got {maxval}", maxval_at)
    if maxval > 255:
        raise PgmParseError(f"maxval {maxval} exceeds 255", maxval_at)
    if width <= 0 or height <= 0:
        raise PgmParseError(f"bad dimensions {width}x{height}", 2)
    count = width * height

    if magic == b"P5":
        if pos >= len(data):
            raise PgmParseError("header ends before the raster", pos)
        if data[pos:pos + 1] not in (b" ", b"\t", b"\n", b"\r"):
            raise PgmParseError("expected one whitespace byte before the raster", pos)
        pos += 1
        raster = data[pos:pos + count]
        if len(raster) < count:
            raise PgmParseError(
                f"truncated raster: expected {count} bytes, found {len(raster)}",
                pos + len(raster),
            )
        pixels = np.frombuffer(raster, dtype=np.uint8).astype(np.float64)
    else:
        pixels = np.empty(count)
        for i in range(count):
            at = _skip_separators(data, pos)
            value, pos = _read_header_int(data, pos, f"pixel {i}")
            if value > maxval:
                raise PgmParseError(f"pixel value {value} exceeds maxval {maxval}", at)
            pixels[i] = value

    return pixels / maxval


def _skip_separators(data: bytes, pos: int) -> int:
    """Position after whitespace and # comments starting at pos."""
    while pos < len(data):
        byte = data[pos:pos + 1]
        if byte in (b" ", b"\t", b"\n", b"\r", b"\x0b", b"\x0c"):
            pos += 1
        elif byte == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end == -1 else end + 1
        else:
            break
    return pos


def _read_header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    pos = _skip_separators(data, pos)
    start = pos
    while pos < len(data) and data[pos:pos + 1].isdigit():
        pos += 1
    if pos == start:
        raise PgmParseError(f"expected an integer for {what}", start)
    return int(data[start:pos]), pos


# --- datasets --------------------------------------------------------------


@dataclass
class Dataset:
    """Image vectors with dense class ids and their source paths."""

    samples: list[tuple[np.ndarray, int, str]]
    class_names: list[str]

    def __post_init__(self) -> None:
        lengths = {s[0].shape[0] for s in self.samples}
        if len(lengths) > 1:
            raise ValueError(f"images disagree on vector length: {sorted(lengths)}")
        used = {s[1] for s in self.samples}
        if used and (min(used) < 0 or max(used) >= len(self.class_names)):
            raise ValueError("class ids must index class_names")

    @property
    def n_samples(self) -> int:
        return len(self.samples)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def vectors(self) -> np.ndarray:
        return np.vstack([s[0] for s in self.samples])

    def labels(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples], dtype=np.int64)


def load_dataset(data_dir) -> Dataset:
    """Load every ``*.pgm`` under per-class subdirectories of ``data_dir``.

    Subdirectory names become class labels; class ids follow sorted
    directory order, files sorted within each directory.
    """
    root = Path(data_dir)
    if not root.is_dir():
        raise FileNotFoundError(f"data directory {root} does not exist")
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    samples: list[tuple[np.ndarray, int, str]] = []
    class_names: list[str] = []
    for class_id, class_dir in enumerate(class_dirs):
        class_names.append(class_dir.name)
        for f in sorted(class_dir.glob("*.pgm")):
            samples.append((load_pgm(f), class_id, str(f)))
    if not samples:
        raise ValueError(f"no PGM files found under {root}")
    return Dataset(samples, class_names)


def split(dataset: Dataset, per_class_train: int, seed: int) -> tuple[Dataset, Dataset]:
    """Seeded per-class split without replacement, deterministic per seed."""
    if per_class_train < 1:
        raise ValueError("per_class_train must be at least 1")
    rng = np.random.default_rng(seed)
    by_class: dict[int, list[int]] = {}
    for i, (_, class_id, _) in enumerate(dataset.samples):
        by_class.setdefault(class_id, []).append(i)
    train_idx: list[int] = []
    test_idx: list[int] = []
    for class_id in sorted(by_class):
        members = by_class[class_id]
        if per_class_train > len(members):
            raise ValueError(
                f"class {dataset.class_names[class_id]!r} has only "
                f"{len(members)} samples, cannot take {per_class_train}"
            )
        order = rng.permutation(len(members))
        chosen = {members[j] for j in order[:per_class_train]}
        train_idx.extend(i for i in members if i in chosen)
        test_idx.extend(i for i in members if i not in chosen)
    if not test_idx:
        warnings.warn("split leaves an empty test set", stacklevel=2)
    train = Dataset([dataset.samples[i] for i in train_idx], list(dataset.class_names))
    test = Dataset([dataset.samples[i] for i in test_idx], list(dataset.class_names))
    return train, test
