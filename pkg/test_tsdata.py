"""데이터셋 모델 / restrict / byte_size 테스트"""

import sys

import numpy as np
import pytest

from errors import DuplicateChannel, EmptySelection, IndexOutOfRange, InvalidDataset, NonFiniteValue
from tsdata import ChannelSubsetView, MtsDataset, byte_size, restrict


def make_dataset(n=10, c=4, length=25, k=2, seed=0, **kwargs):
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % k
    return MtsDataset(
        name="toy",
        values=rng.normal(size=(n, c, length)),
        labels=labels,
        label_names=tuple(f"L{i}" for i in range(k)),
        **kwargs,
    )


def test_shape_properties():
    ds = make_dataset(n=6, c=3, length=5, k=3)
    assert (ds.n_instances, ds.n_channels, ds.length, ds.n_classes) == (6, 3, 5, 3)
    assert ds.names == ("ch0", "ch1", "ch2")
    assert ds.class_counts().tolist() == [2, 2, 2]
    assert ds.label_strings()[:3] == ["L0", "L1", "L2"]


def test_values_are_read_only_copies():
    raw = np.zeros((2, 1, 3))
    ds = MtsDataset("x", raw, [0, 1], ("a", "b"))
    raw[0, 0, 0] = 99.0
    assert ds.values[0, 0, 0] == 0.0
    with pytest.raises(ValueError):
        ds.values[0, 0, 0] = 1.0


def test_invalid_datasets_rejected():
    with pytest.raises(InvalidDataset):
        MtsDataset("x", np.zeros((2, 3)), [0, 1], ("a", "b"))
    with pytest.raises(InvalidDataset):
        MtsDataset("x", np.zeros((0, 1, 3)), [], ("a", "b"))
    with pytest.raises(InvalidDataset):
        MtsDataset("x", np.zeros((2, 1, 3)), [0, 2], ("a", "b"))
    with pytest.raises(InvalidDataset):
        MtsDataset("x", np.zeros((2, 1, 3)), [0, 1], ("a", "a"))
    with pytest.raises(InvalidDataset):
        MtsDataset("x", np.zeros((2, 1, 3)), [0, 1], ("a", "b"), channel_names=("p", "q"))


def test_non_finite_values_rejected():
    values = np.zeros((2, 1, 3))
    values[1, 0, 2] = np.nan
    with pytest.raises(NonFiniteValue):
        MtsDataset("x", values, [0, 1], ("a", "b"))


def test_missing_class_is_allowed_but_reported():
    ds = MtsDataset("x", np.zeros((1, 2, 2)), [0], ("A", "B"))
    assert ds.missing_classes() == [1]


def test_restrict_identity():
    ds = make_dataset()
    assert restrict(ds, list(range(ds.n_channels))) == ds


def test_restrict_single_channel():
    ds = make_dataset(c=3)
    reduced = restrict(ds, [2])
    assert reduced.n_channels == 1
    np.testing.assert_array_equal(reduced.values[:, 0, :], ds.values[:, 2, :])
    np.testing.assert_array_equal(reduced.labels, ds.labels)


def test_restrict_keeps_order_and_channel_names():
    ds = make_dataset(c=3, channel_names=("acc_x", "acc_y", "gyro"))
    reduced = restrict(ds, [2, 0])
    assert reduced.channel_names == ("gyro", "acc_x")
    np.testing.assert_array_equal(reduced.values[:, 0, :], ds.values[:, 2, :])


def test_restrict_errors():
    ds = make_dataset(c=3)
    with pytest.raises(EmptySelection):
        restrict(ds, [])
    with pytest.raises(IndexOutOfRange):
        restrict(ds, [3])
    with pytest.raises(IndexOutOfRange):
        restrict(ds, [-1])
    with pytest.raises(DuplicateChannel):
        ChannelSubsetView(ds, (1, 1))


def test_restrict_composes():
    ds = make_dataset(c=6, channel_names=tuple(f"s{i}" for i in range(6)))
    rng = np.random.default_rng(1)
    for _ in range(50):
        outer = rng.choice(6, size=int(rng.integers(1, 7)), replace=False).tolist()
        inner = rng.choice(len(outer), size=int(rng.integers(1, len(outer) + 1)), replace=False).tolist()
        assert restrict(restrict(ds, outer), inner) == restrict(ds, [outer[i] for i in inner])


def test_byte_size():
    ds = make_dataset(n=10, c=4, length=25)
    assert byte_size(ds) == 8000
    assert byte_size(restrict(ds, [1])) == 2000


def test_value_equality():
    assert make_dataset(seed=1) == make_dataset(seed=1)
    assert make_dataset(seed=1) != make_dataset(seed=2)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
