"""
분류기 테스트
- 1-NN: 이중 루프 기준 구현과 비교
- 릿지: 표준화 특징에 대한 정규방정식 해와 학습 계수 비교
- ROCKET 커널 샘플링, 특징, 결정성
"""

import sys

import numpy as np
import pytest

from channel_select import select
from classify import (
    KERNEL_LENGTHS,
    ClassifierSpec,
    evaluate,
    fit_ridge_classifier,
    generate_kernels,
    nn1_fit,
    nn1_predict,
    parse_classifier,
    rocket_fit,
    rocket_predict,
    transform,
)
from errors import ShapeMismatch, SingleClass, TooShortSeries, UnknownClassifier
from synth import SynthSpec, generate
from tsdata import MtsDataset


def random_dataset(rng, n, c, length, k=2):
    labels = rng.permutation(np.arange(n) % k)
    return MtsDataset("rand", rng.normal(size=(n, c, length)), labels, tuple(f"k{i}" for i in range(k)))


def naive_nn1(train, labels, test):
    predictions = []
    for x in test:
        best, best_i = None, None
        for i, y in enumerate(train):
            dist = 0.0
            for c in range(len(x)):
                for t in range(len(x[c])):
                    diff = x[c][t] - y[c][t]
                    dist += diff * diff
            if best is None or dist < best:
                best, best_i = dist, i
        predictions.append(labels[best_i])
    return predictions


# ===== 분류기 토큰 =====

def test_parse_classifier():
    assert parse_classifier("nn1") == ClassifierSpec("nn1")
    spec = parse_classifier("rocket:500:7")
    assert (spec.kind, spec.count, spec.seed, spec.token) == ("rocket", 500, 7, "rocket:500:7")
    assert parse_classifier("rocket", default_kernels=100, default_seed=3).token == "rocket:100:3"
    for bad in ("knn", "rocket:x:1", "rocket:0:1", "rocket:5"):
        with pytest.raises(UnknownClassifier):
            parse_classifier(bad)


# ===== 1-NN =====

def test_nn1_matches_brute_force():
    rng = np.random.default_rng(101)
    for _ in range(100):
        train = random_dataset(rng, 10, 2, 8, k=3)
        test = rng.normal(size=(5, 2, 8))
        model = nn1_fit(train)
        expected = naive_nn1(train.values.tolist(), train.labels.tolist(), test.tolist())
        assert nn1_predict(model, test) == expected


def test_nn1_exact_match_and_single_instance():
    rng = np.random.default_rng(1)
    train = random_dataset(rng, 6, 3, 4)
    assert nn1_predict(nn1_fit(train), train.values[[4]]) == [int(train.labels[4])]

    single = nn1_fit(np.ones((1, 1, 3)), np.array([1]))
    assert nn1_predict(single, rng.normal(size=(4, 1, 3))) == [1, 1, 1, 1]


def test_nn1_shape_mismatch():
    model = nn1_fit(random_dataset(np.random.default_rng(0), 4, 2, 5))
    with pytest.raises(ShapeMismatch):
        nn1_predict(model, np.zeros((1, 3, 5)))


# ===== 릿지 =====

def test_ridge_matches_normal_equations():
    rng = np.random.default_rng(55)
    for _ in range(20):
        n = int(rng.integers(6, 15))
        p = int(rng.integers(2, 25))
        X = rng.normal(size=(n, p))
        labels = rng.permutation(np.arange(n) % 3)
        alpha = float(10.0 ** rng.uniform(-1, 1))
        ridge = fit_ridge_classifier(X, labels, 3, alphas=[alpha])
        assert ridge.alpha == alpha

        # 독립 풀이: 표준화 특징 Z, 중심화한 ±1 목표값, [Z; √α·I] 증강 최소제곱
        Z = (X - X.mean(axis=0)) / X.std(axis=0)
        Y = -np.ones((n, 3))
        Y[np.arange(n), labels] = 1.0
        Y -= Y.mean(axis=0)
        augmented = np.vstack([Z, np.sqrt(alpha) * np.eye(p)])
        target = np.vstack([Y, np.zeros((p, 3))])
        expected = np.linalg.lstsq(augmented, target, rcond=None)[0]
        np.testing.assert_allclose(ridge.coef, expected.T, atol=1e-7, rtol=1e-7)


def test_ridge_alpha_ties_pick_smallest():
    # 완전히 분리되는 특징: 모든 alpha가 교차검증 정답 수 동일
    labels = np.repeat([0, 1], 10)
    features = np.column_stack([labels * 10.0 + np.linspace(0, 0.1, 20), np.linspace(-1, 1, 20)])
    ridge = fit_ridge_classifier(features, labels, 2, alphas=[10.0, 0.01, 1.0], folds=5)
    assert ridge.alpha == 0.01
    assert ridge.predict(features) == labels.tolist()
    assert ridge.predict(np.zeros((0, 2))) == []


# ===== ROCKET =====

def test_kernel_weights_mean_centered():
    bank = generate_kernels(100, 10000, seed=3)
    assert bank.count == 10000
    assert set(np.unique(bank.lengths).tolist()) <= set(KERNEL_LENGTHS)
    for i in range(bank.count):
        assert abs(bank.kernel_weights(i).sum()) < 1e-9
    assert np.all(np.abs(bank.biases) <= 1.0)
    assert np.all(bank.dilations >= 1)
    # 팽창된 커널이 시계열 길이를 넘지 않음
    assert np.all((bank.lengths - 1) * bank.dilations <= 99)


def test_short_series_rejected():
    with pytest.raises(TooShortSeries):
        generate_kernels(6, 10, seed=0)


def test_ppv_bounds():
    bank = generate_kernels(20, 50, seed=1)
    # 평균 제거 가중치 → 상수 입력의 합성곱은 패딩 구간 밖에서 0, 편향 부호가 PPV를 결정
    features = transform(bank, np.full((1, 1, 20), 3.0))
    ppv = features[0, 0::2]
    assert np.all((ppv >= 0.0) & (ppv <= 1.0))
    unpadded = bank.paddings == 0
    np.testing.assert_array_equal(ppv[unpadded & (bank.biases > 0)], 1.0)
    np.testing.assert_array_equal(ppv[unpadded & (bank.biases < 0)], 0.0)


def test_rocket_deterministic():
    rng = np.random.default_rng(8)
    train = random_dataset(rng, 20, 3, 30)
    test = rng.normal(size=(7, 3, 30))
    bank_a, ridge_a = rocket_fit(train, kernels=100, seed=4)
    bank_b, ridge_b = rocket_fit(train, kernels=100, seed=4)
    np.testing.assert_array_equal(transform(bank_a, train), transform(bank_b, train))
    np.testing.assert_array_equal(ridge_a.coef, ridge_b.coef)
    assert ridge_a.alpha == ridge_b.alpha
    assert rocket_predict((bank_a, ridge_a), test) == rocket_predict((bank_b, ridge_b), test)


def test_rocket_predict_empty_and_order_invariant():
    rng = np.random.default_rng(9)
    train = random_dataset(rng, 16, 2, 25)
    model = rocket_fit(train, kernels=60, seed=0)
    assert rocket_predict(model, np.zeros((0, 2, 25))) == []
    test = rng.normal(size=(6, 2, 25))
    order = rng.permutation(6)
    forward = rocket_predict(model, test)
    assert rocket_predict(model, test[order]) == [forward[i] for i in order]


def test_rocket_single_class_rejected():
    ds = MtsDataset("one", np.random.default_rng(0).normal(size=(4, 1, 12)), [0, 0, 0, 0], ("a", "b"))
    with pytest.raises(SingleClass):
        rocket_fit(ds, kernels=10, seed=0)


def test_rocket_fits_separable_training_set():
    train, _, _ = generate(SynthSpec(channels=6, informative=3, seed=7))
    model = rocket_fit(train, kernels=200, seed=7)
    predictions = np.asarray(rocket_predict(model, train))
    assert np.mean(predictions == train.labels) >= 0.95


# ===== evaluate =====

def test_evaluate_all_equals_no_selection():
    rng = np.random.default_rng(12)
    train = random_dataset(rng, 12, 4, 10)
    test = random_dataset(rng, 6, 4, 10)
    everything = evaluate(train, test, select(train, "all"), "nn1")
    plain = evaluate(train, test, None, "nn1")
    assert everything.predictions == plain.predictions
    assert everything.accuracy == plain.accuracy
    assert plain.fit_time >= 0 and plain.predict_time >= 0


def test_evaluate_perfect_accuracy():
    rng = np.random.default_rng(13)
    train = random_dataset(rng, 8, 2, 5)
    assert evaluate(train, train, [0, 1], "nn1").accuracy == 1.0


def test_selected_channels_beat_all_with_nn1():
    train, test, _ = generate(SynthSpec(seed=7))
    ecs = select(train, "ecs")
    assert evaluate(train, test, ecs, "nn1").accuracy >= evaluate(train, test, None, "nn1").accuracy


def test_rocket_selected_within_tolerance():
    train, test, _ = generate(SynthSpec(seed=7))
    ecs = select(train, "ecs")
    reduced = evaluate(train, test, ecs, "rocket:500:7").accuracy
    full = evaluate(train, test, None, "rocket:500:7").accuracy
    assert reduced >= full - 0.02


def test_evaluate_shape_mismatch():
    rng = np.random.default_rng(14)
    with pytest.raises(ShapeMismatch):
        evaluate(random_dataset(rng, 6, 2, 5), random_dataset(rng, 6, 3, 5), None, "nn1")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
