"""PGM parsing against hand-built byte strings, plus dataset loading/splits."""

from __future__ import annotations

import numpy as np
import pytest

from rough_reduce.pgm import (
    PgmParseError,
    load_dataset,
    load_pgm,
    parse_pgm,
    split,
)


class TestParsePgm:
    def test_binary_two_by_two(self):
        data = b"P5\n2 2\n255\n" + bytes([0x00, 0xFF, 0x00, 0xFF])
        np.testing.assert_array_equal(parse_pgm(data), [0.0, 1.0, 0.0, 1.0])

    def test_ascii_matches_binary(self):
        binary = b"P5\n2 2\n255\n" + bytes([0, 255, 0, 255])
        ascii_ = b"P2\n2 2\n255\n0 255\n0 255\n"
        np.testing.assert_array_equal(parse_pgm(binary), parse_pgm(ascii_))

    def test_one_pixel_maxval_one(self):
        assert parse_pgm(b"P5\n1 1\n1\n\x01").tolist() == [1.0]
        assert parse_pgm(b"P2\n1 1\n1\n1\n").tolist() == [1.0]

    def test_scaling_by_maxval(self):
        data = b"P5\n1 2\n100\n" + bytes([50, 100])
        np.testing.assert_array_equal(parse_pgm(data), [0.5, 1.0])

    def test_comments_in_header(self):
        data = b"P5\n# created by hand\n2 # width\n1\n255\n" + bytes([10, 20])
        np.testing.assert_allclose(parse_pgm(data), [10 / 255, 20 / 255])

    def test_comments_in_ascii_raster(self):
        data = b"P2\n2 1\n255\n# row follows\n7 9\n"
        np.testing.assert_allclose(parse_pgm(data), [7 / 255, 9 / 255])

    def test_row_major_flattening(self):
        data = b"P5\n3 2\n255\n" + bytes([1, 2, 3, 4, 5, 6])
        np.testing.assert_allclose(parse_pgm(data), np.arange(1, 7) / 255)

    def test_bad_magic(self):
        with pytest.raises(PgmParseError, match="magic") as exc:
            parse_pgm(b"P6\n1 1\n255\n\x00")
        assert exc.value.offset == 0

    def test_truncated_raster(self):
        with pytest.raises(PgmParseError, match="truncated") as exc:
            parse_pgm(b"P5\n2 2\n255\n" + bytes([1, 2]))
        assert exc.value.offset == 13  # 11 header bytes + the 2 present

    def test_maxval_too_large(self):
        with pytest.raises(PgmParseError, match="exceeds 255") as exc:
            parse_pgm(b"P5\n1 1\n65535\n\x00\x00")
        assert exc.value.offset == 7

    def test_missing_header_field(self):
        with pytest.raises(PgmParseError, match="height"):
            parse_pgm(b"P5\n2\n")

    def test_ascii_pixel_above_maxval(self):
        with pytest.raises(PgmParseError, match="exceeds maxval"):
            parse_pgm(b"P2\n1 1\n10\n11\n")

    def test_offsets_reported_in_message(self):
        with pytest.raises(PgmParseError, match=r"byte offset \d+"):
            parse_pgm(b"P2\n1 1\n255\n")


class TestLoadPgm:
    def test_reads_from_disk(self, tmp_path):
        f = tmp_path / "img.pgm"
        f.write_bytes(b"P5\n2 1\n255\n" + bytes([0, 255]))
        np.testing.assert_array_equal(load_pgm(f), [0.0, 1.0])


def _write_class_dirs(root, n_classes=3, per_class=4, width=4, height=3):
    rng = np.random.default_rng(30)
    for c in range(n_classes):
        d = root / f"s{c + 1}"
        d.mkdir()
        for i in range(per_class):
            raster = rng.integers(0, 256, size=width * height, dtype=np.uint8)
            (d / f"{i + 1}.pgm").write_bytes(
                f"P5\n{width} {height}\n255\n".encode() + raster.tobytes()
            )


class TestLoadDataset:
    def test_classes_from_directories(self, tmp_path):
        _write_class_dirs(tmp_path)
        ds = load_dataset(tmp_path)
        assert ds.n_classes == 3
        assert ds.n_samples == 12
        assert ds.class_names == ["s1", "s2", "s3"]
        assert sorted(set(ds.labels())) == [0, 1, 2]
        assert ds.vectors().shape == (12, 12)

    def test_missing_directory(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_dataset(tmp_path / "nope")

    def test_empty_directory(self, tmp_path):
        with pytest.raises(ValueError, match="no PGM"):
            load_dataset(tmp_path)


class TestSplit:
    @pytest.fixture
    def dataset(self, tmp_path):
        _write_class_dirs(tmp_path, n_classes=4, per_class=10)
        return load_dataset(tmp_path)

    def test_per_class_counts(self, dataset):
        train, test = split(dataset, per_class_train=5, seed=1)
        for ds, expected in ((train, 5), (test, 5)):
            counts = np.bincount(ds.labels(), minlength=4)
            assert list(counts) == [expected] * 4

    def test_deterministic_per_seed(self, dataset):
        a = split(dataset, per_class_train=5, seed=9)
        b = split(dataset, per_class_train=5, seed=9)
        assert [s[2] for s in a[0].samples] == [s[2] for s in b[0].samples]
        c = split(dataset, per_class_train=5, seed=10)
        assert [s[2] for s in a[0].samples] != [s[2] for s in c[0].samples]

    def test_disjoint_and_covering(self, dataset):
        train, test = split(dataset, per_class_train=3, seed=2)
        train_paths = {s[2] for s in train.samples}
        test_paths = {s[2] for s in test.samples}
        assert not train_paths & test_paths
        assert len(train_paths | test_paths) == dataset.n_samples

    def test_taking_everything_warns(self, dataset):
        with pytest.warns(UserWarning, match="empty test set"):
            train, test = split(dataset, per_class_train=10, seed=1)
        assert test.n_samples == 0
        assert train.n_samples == dataset.n_samples

    def test_too_many_requested(self, dataset):
        with pytest.raises(ValueError, match="only 10"):
            split(dataset, per_class_train=11, seed=1)
