"""합성 데이터 생성 테스트"""

import json
import sys

import numpy as np
import pytest

from errors import InvalidSpec
from io_utils import parse_archive_file
from prototype import compute_prototypes
from synth import SynthSpec, class_signal, generate, write_synth


def test_defaults_shape():
    spec = SynthSpec()
    assert (spec.channels, spec.informative, spec.classes, spec.per_class, spec.length) == (120, 5, 3, 20, 100)
    train, test, informative = generate(spec)
    assert train.values.shape == (60, 120, 100)
    assert test.values.shape == (60, 120, 100)
    assert train.class_counts().tolist() == [20, 20, 20]
    assert len(informative) == 5
    assert list(informative) == sorted(informative)
    assert train.label_names == test.label_names


def test_same_seed_bitwise_identical():
    a = generate(SynthSpec(channels=10, informative=2, seed=3))
    b = generate(SynthSpec(channels=10, informative=2, seed=3))
    assert a[0] == b[0] and a[1] == b[1] and a[2] == b[2]
    c = generate(SynthSpec(channels=10, informative=2, seed=4))
    assert not np.array_equal(a[0].values, c[0].values)


def test_train_and_test_independent():
    train, test, _ = generate(SynthSpec(channels=4, informative=1, seed=1))
    assert not np.array_equal(train.values, test.values)


def test_zero_effect_is_pure_noise():
    spec = SynthSpec(channels=8, informative=3, effect=0.0, seed=2)
    train, _, informative = generate(spec)
    assert len(informative) == 3
    assert train.values.shape == (60, 8, 100)
    np.testing.assert_array_equal(class_signal(spec, 1, 4), 0.0)


def test_all_channels_informative():
    _, _, informative = generate(SynthSpec(channels=6, informative=6, seed=0))
    assert informative == tuple(range(6))


def test_noise_free_signal():
    spec = SynthSpec(channels=3, informative=3, classes=2, per_class=1, length=8, noise_sigma=0.0, seed=0)
    train, _, _ = generate(spec)
    for y in range(2):
        for c in range(3):
            t = np.arange(8)
            expected = spec.effect * np.sin(2 * np.pi * (1 + y + c % 3) * t / 8 + y * np.pi / 2)
            np.testing.assert_allclose(train.values[y, c], expected, atol=1e-12)


def test_informative_prototypes_dominate():
    train, _, informative = generate(SynthSpec(seed=7))
    magnitude = np.abs(compute_prototypes(train).proto).mean(axis=2)  # [클래스][채널]
    noise = [c for c in range(train.n_channels) if c not in informative]
    assert magnitude[:, list(informative)].min() >= 3 * magnitude[:, noise].max()


def test_invalid_specs():
    for bad in (
        SynthSpec(channels=0),
        SynthSpec(channels=4, informative=5),
        SynthSpec(informative=0),
        SynthSpec(classes=1),
        SynthSpec(per_class=0),
        SynthSpec(noise_sigma=-1.0),
        SynthSpec(effect=float("nan")),
    ):
        with pytest.raises(InvalidSpec):
            generate(bad)


def test_write_synth(tmp_path):
    spec = SynthSpec(channels=5, informative=2, per_class=3, length=12, seed=7)
    paths = write_synth(spec, tmp_path)
    train = parse_archive_file(paths["train"])
    expected_train, _, informative = generate(spec)
    assert train == expected_train
    truth = json.loads(open(paths["truth"], encoding="utf-8").read())
    assert truth["informative"] == list(informative)
    assert truth["spec"]["channels"] == 5 and truth["spec"]["seed"] == 7


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
