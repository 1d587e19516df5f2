"""
내장 분류기
- 1-NN (유클리드, 전체 채널 연결)
- ROCKET 방식 랜덤 합성곱 커널 + one-vs-rest 릿지 분류기
- evaluate: 선택된 채널로 학습/예측하고 정확도와 시간 측정
"""

import logging
import time
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple, Union

import numba
import numpy as np
from numba import njit, prange
from sklearn.linear_model import RidgeClassifier
from sklearn.model_selection import StratifiedKFold
from sklearn.preprocessing import StandardScaler

from errors import ShapeMismatch, SingleClass, TooShortSeries, UnknownClassifier
from tsdata import MtsDataset, restrict

logger = logging.getLogger(__name__)

RNG_ALGORITHM = 'PCG64'
KERNEL_LENGTHS = (7, 9, 11)
RIDGE_ALPHAS = tuple(10.0 ** e for e in range(-3, 4))
RIDGE_FOLDS = 5
DEFAULT_KERNELS = 500
# max 초깃값이 -inf 이므로 ninf/nnan 가정은 제외
_FASTMATH = {'reassoc', 'contract', 'arcp', 'nsz'}

ArrayLike = Union[MtsDataset, np.ndarray]


# ===== 분류기 지정 =====

@dataclass(frozen=True)
class ClassifierSpec:
    """분류기 토큰: "nn1" 또는 "rocket:<count>:<seed>" """
    kind: str
    count: int = 0
    seed: int = 0
    # 릿지 교차검증 설정 (토큰에는 포함되지 않음)
    alphas: Tuple[float, ...] = RIDGE_ALPHAS
    folds: int = RIDGE_FOLDS

    @property
    def token(self) -> str:
        if self.kind == 'rocket':
            return f"rocket:{self.count}:{self.seed}"
        return self.kind


def parse_classifier(token, default_kernels: int = DEFAULT_KERNELS, default_seed: int = 0) -> ClassifierSpec:
    """
    분류기 토큰 파싱

    "rocket" 단독 토큰은 rocket:<default_kernels>:<default_seed> 로 해석

    Raises:
        UnknownClassifier: 형식이 맞지 않는 토큰
    """
    if isinstance(token, ClassifierSpec):
        return token
    text = str(token).strip().lower()
    if text == 'nn1':
        return ClassifierSpec('nn1')
    if text == 'rocket':
        return ClassifierSpec('rocket', int(default_kernels), int(default_seed))
    parts = text.split(':')
    if parts[0] == 'rocket' and len(parts) == 3:
        try:
            count, seed = int(parts[1]), int(parts[2])
        except ValueError:
            raise UnknownClassifier(f"rocket 토큰의 count/seed가 정수가 아닙니다: {token!r}")
        if count < 1 or seed < 0:
            raise UnknownClassifier(f"rocket count는 1 이상, seed는 0 이상이어야 합니다: {token!r}")
        return ClassifierSpec('rocket', count, seed)
    raise UnknownClassifier(f"알 수 없는 분류기: {token!r} (nn1 또는 rocket:<count>:<seed>)")


def _as_values(data: ArrayLike) -> np.ndarray:
    if isinstance(data, MtsDataset):
        return data.values
    values = np.asarray(data, dtype=np.float64)
    if values.ndim != 3:
        raise ShapeMismatch(f"입력은 (N, C, L) 배열이어야 합니다: {values.shape}")
    return values


def _check_shape(train_shape, values: np.ndarray):
    if values.shape[1:] != tuple(train_shape):
        raise ShapeMismatch(
            f"테스트 (C, L)={values.shape[1:]} 가 학습 (C, L)={tuple(train_shape)} 와 다릅니다"
        )


# ===== 1-NN =====

@dataclass(frozen=True, eq=False)
class FittedNn1:
    train: np.ndarray  # [N][C][L]
    labels: np.ndarray


def nn1_fit(ds: ArrayLike, labels: Optional[np.ndarray] = None) -> FittedNn1:
    """1-NN 학습 (학습 데이터 보관)"""
    if isinstance(ds, MtsDataset):
        return FittedNn1(train=ds.values, labels=np.asarray(ds.labels))
    return FittedNn1(train=_as_values(ds), labels=np.asarray(labels, dtype=np.int64))


def nn1_predict(model: FittedNn1, test: ArrayLike) -> List[int]:
    """
    각 테스트 인스턴스에 제곱 유클리드 거리가 가장 가까운 학습 인스턴스의 라벨 부여
    (동점은 낮은 학습 인덱스)
    """
    values = _as_values(test)
    _check_shape(model.train.shape[1:], values)
    predictions = []
    for x in values:
        diff = model.train - x
        dist = np.sum(diff * diff, axis=(1, 2))
        predictions.append(int(model.labels[int(np.argmin(dist))]))
    return predictions


# ===== ROCKET =====

@dataclass(frozen=True, eq=False)
class KernelBank:
    """랜덤 합성곱 커널 묶음"""
    lengths: np.ndarray  # int32 [count]
    weights: np.ndarray  # float64, 커널별 가중치를 이어 붙임
    biases: np.ndarray
    dilations: np.ndarray  # int32
    paddings: np.ndarray  # int32, 0이면 패딩 없음
    seed: int
    input_length: int
    n_channels: int = 0  # 0이면 채널 수 검사 안 함

    @property
    def count(self) -> int:
        return len(self.lengths)

    def kernel_weights(self, i: int) -> np.ndarray:
        start = int(self.lengths[:i].sum())
        return self.weights[start:start + int(self.lengths[i])]


def generate_kernels(input_length: int, count: int, seed: int) -> KernelBank:
    """
    커널 샘플링 (PCG64 생성기)
    - 길이 {7, 9, 11} 중 균등 (시계열보다 긴 길이는 제외)
    - 가중치 표준정규 후 평균 제거, 편향 U(−1, 1)
    - 팽창 2^x, x ~ U(0, log2((L−1)/(len−1)))
    - 1/2 확률로 패딩
    """
    if input_length < min(KERNEL_LENGTHS):
        raise TooShortSeries(f"시계열 길이 {input_length} < {min(KERNEL_LENGTHS)}")
    rng = np.random.Generator(np.random.PCG64(seed))
    candidates = np.array([x for x in KERNEL_LENGTHS if x <= input_length], dtype=np.int32)
    lengths = rng.choice(candidates, count).astype(np.int32)

    weights = np.zeros(int(lengths.sum()), dtype=np.float64)
    biases = np.zeros(count, dtype=np.float64)
    dilations = np.zeros(count, dtype=np.int32)
    paddings = np.zeros(count, dtype=np.int32)

    a1 = 0
    for i in range(count):
        length = int(lengths[i])
        w = rng.normal(0.0, 1.0, length)
        weights[a1:a1 + length] = w - w.mean()
        biases[i] = rng.uniform(-1.0, 1.0)
        dilation = int(2 ** rng.uniform(0, np.log2((input_length - 1) / (length - 1))))
        dilations[i] = max(dilation, 1)
        paddings[i] = ((length - 1) * dilations[i]) // 2 if rng.integers(2) == 1 else 0
        a1 += length

    return KernelBank(lengths=lengths, weights=weights, biases=biases, dilations=dilations,
                      paddings=paddings, seed=seed, input_length=input_length)


@njit(fastmath=_FASTMATH, cache=True)
def _apply_kernel(x, weights, length, bias, dilation, padding):
    n_channels, input_length = x.shape
    output_length = (input_length + 2 * padding) - (length - 1) * dilation
    end = (input_length + padding) - (length - 1) * dilation

    ppv = 0
    max_value = -np.inf
    for i in range(-padding, end):
        # 채널별 합성곱 출력을 시점마다 합산 (편향은 한 번)
        total = bias
        for c in range(n_channels):
            index = i
            for j in range(length):
                if index > -1 and index < input_length:
                    total = total + weights[j] * x[c, index]
                index = index + dilation
        if total > max_value:
            max_value = total
        if total > 0:
            ppv += 1
    return ppv / output_length, max_value


@njit(parallel=True, fastmath=_FASTMATH, cache=True)
def _apply_kernels(X, weights, lengths, biases, dilations, paddings):
    n_instances = X.shape[0]
    n_kernels = len(lengths)
    out = np.zeros((n_instances, n_kernels * 2), dtype=np.float64)
    starts = np.zeros(n_kernels, dtype=np.int64)
    for j in range(1, n_kernels):
        starts[j] = starts[j - 1] + lengths[j - 1]

    for i in prange(n_instances):
        for j in range(n_kernels):
            a1 = starts[j]
            ppv, max_value = _apply_kernel(
                X[i], weights[a1:a1 + lengths[j]], lengths[j], biases[j], dilations[j], paddings[j]
            )
            out[i, 2 * j] = ppv
            out[i, 2 * j + 1] = max_value
    return out


def transform(bank: KernelBank, data: ArrayLike) -> np.ndarray:
    """커널별 PPV, max 특징 → (N, 2·count)"""
    values = np.ascontiguousarray(_as_values(data))
    if values.shape[2] != bank.input_length:
        raise ShapeMismatch(f"시계열 길이 {values.shape[2]} 가 커널 기준 길이 {bank.input_length} 와 다릅니다")
    if values.shape[0] == 0:
        return np.zeros((0, 2 * bank.count), dtype=np.float64)
    return _apply_kernels(values, bank.weights, bank.lengths, bank.biases, bank.dilations, bank.paddings)


@dataclass(frozen=True, eq=False)
class FittedRidge:
    """표준화 + one-vs-rest 릿지 분류기 (선택된 alpha 포함)"""
    scaler: StandardScaler
    model: RidgeClassifier
    alpha: float

    @property
    def coef(self) -> np.ndarray:
        return self.model.coef_

    def predict(self, features: np.ndarray) -> List[int]:
        if len(features) == 0:
            return []
        # 다중 클래스는 결정 점수 argmax, 동점 시 낮은 클래스 id
        return self.model.predict(self.scaler.transform(features)).astype(int).tolist()


def _fit_ridge_alpha(features: np.ndarray, labels: np.ndarray, alpha: float) -> FittedRidge:
    scaler = StandardScaler().fit(features)
    model = RidgeClassifier(alpha=alpha).fit(scaler.transform(features), labels)
    return FittedRidge(scaler=scaler, model=model, alpha=alpha)


def stratified_splits(labels: np.ndarray, folds: int, seed: int):
    """층화 k-겹 분할 (셔플, 시드 고정)"""
    skf = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    labels = np.asarray(labels)
    return list(skf.split(np.zeros(len(labels)), labels))


def fit_ridge_classifier(features: np.ndarray, labels: np.ndarray, n_classes: int,
                         alphas: Sequence[float] = RIDGE_ALPHAS, folds: int = RIDGE_FOLDS,
                         seed: int = 0) -> FittedRidge:
    """
    one-vs-rest 릿지 분류기 학습

    정규화 강도는 층화 k-겹 교차검증 정확도로 선택 (동점은 작은 값)
    """
    labels = np.asarray(labels, dtype=np.int64)
    alphas = sorted(float(a) for a in alphas)
    present = np.unique(labels)
    if len(present) < 2:
        raise SingleClass("학습 데이터에 클래스가 2개 이상 필요합니다")

    n_splits = min(folds, int(np.bincount(labels)[present].min()))
    if n_splits < 2 or len(alphas) == 1:
        chosen = 1.0 if len(alphas) > 1 else alphas[0]
        if len(alphas) > 1:
            logger.warning("클래스별 인스턴스가 부족해 교차검증 없이 alpha=%.3g 사용", chosen)
        return _fit_ridge_alpha(features, labels, chosen)

    splits = stratified_splits(labels, n_splits, seed)
    best_alpha, best_correct = alphas[0], -1
    for alpha in alphas:
        correct = 0
        for train_idx, test_idx in splits:
            model = _fit_ridge_alpha(features[train_idx], labels[train_idx], alpha)
            correct += int(np.sum(np.asarray(model.predict(features[test_idx])) == labels[test_idx]))
        if correct > best_correct:
            best_alpha, best_correct = alpha, correct
    logger.debug("릿지 alpha=%.3g (교차검증 정답 %d/%d)", best_alpha, best_correct, len(labels))
    return _fit_ridge_alpha(features, labels, best_alpha)


def rocket_fit(ds: ArrayLike, kernels: int = DEFAULT_KERNELS, seed: int = 0,
               labels: Optional[np.ndarray] = None,
               n_classes: Optional[int] = None, alphas: Sequence[float] = RIDGE_ALPHAS,
               folds: int = RIDGE_FOLDS) -> Tuple[KernelBank, FittedRidge]:
    """
    ROCKET 방식 분류기 학습

    Args:
        ds: 학습 데이터셋 (또는 (N, C, L) 배열 + labels)
        kernels: 커널 수
        seed: 커널 샘플링 및 교차검증 시드

    Returns:
        (KernelBank, FittedRidge)

    Raises:
        TooShortSeries: L < 7
        SingleClass: 클래스가 하나뿐인 경우
    """
    if isinstance(ds, MtsDataset):
        labels, n_classes = np.asarray(ds.labels), ds.n_classes
    values = _as_values(ds)
    labels = np.asarray(labels, dtype=np.int64)
    if n_classes is None:
        n_classes = int(labels.max()) + 1
    if len(np.unique(labels)) < 2:
        raise SingleClass("학습 데이터에 클래스가 2개 이상 필요합니다")

    bank = replace(generate_kernels(values.shape[2], kernels, seed), n_channels=values.shape[1])
    features = transform(bank, values)
    ridge = fit_ridge_classifier(features, labels, n_classes, alphas=alphas, folds=folds, seed=seed)
    return bank, ridge


def rocket_predict(model: Tuple[KernelBank, FittedRidge], test: ArrayLike) -> List[int]:
    bank, ridge = model
    values = _as_values(test)
    if values.shape[0] == 0:
        return []
    if values.shape[2] != bank.input_length or (bank.n_channels and values.shape[1] != bank.n_channels):
        raise ShapeMismatch("테스트 데이터의 채널 수 또는 길이가 학습 데이터와 다릅니다")
    return ridge.predict(transform(bank, values))


# ===== 공통 학습/예측 =====

@dataclass(frozen=True, eq=False)
class FittedModel:
    spec: ClassifierSpec
    model: object
    train_shape: Tuple[int, int]  # (C, L)


def fit_classifier(spec, values: np.ndarray, labels: np.ndarray, n_classes: int) -> FittedModel:
    spec = parse_classifier(spec)
    if spec.kind == 'nn1':
        model = nn1_fit(values, labels)
    else:
        model = rocket_fit(values, spec.count, spec.seed, labels=labels, n_classes=n_classes,
                           alphas=spec.alphas, folds=spec.folds)
    return FittedModel(spec=spec, model=model, train_shape=tuple(values.shape[1:]))


def predict_classifier(fitted: FittedModel, values: np.ndarray) -> List[int]:
    values = _as_values(values)
    if values.shape[0] == 0:
        return []
    _check_shape(fitted.train_shape, values)
    if fitted.spec.kind == 'nn1':
        return nn1_predict(fitted.model, values)
    return rocket_predict(fitted.model, values)


def cross_val_accuracy(values: np.ndarray, labels: np.ndarray, spec, splits) -> float:
    """주어진 분할에 대한 교차검증 정확도 (전체 정답 수 / N)"""
    spec = parse_classifier(spec)
    labels = np.asarray(labels)
    n_classes = int(labels.max()) + 1
    correct = 0
    for train_idx, test_idx in splits:
        fitted = fit_classifier(spec, values[train_idx], labels[train_idx], n_classes)
        predictions = np.asarray(predict_classifier(fitted, values[test_idx]))
        correct += int(np.sum(predictions == labels[test_idx]))
    return correct / len(labels)


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    fit_time: float  # 초
    predict_time: float
    predictions: Tuple[int, ...]
    channels: Tuple[int, ...]


def evaluate(train: MtsDataset, test: MtsDataset, selection, clf='nn1') -> EvalResult:
    """
    선택된 채널로 학습·예측하고 정확도 계산

    Args:
        train: 학습 데이터셋
        test: 테스트 데이터셋
        selection: SelectionResult (또는 채널 인덱스 리스트, None이면 전체)
        clf: 분류기 지정 토큰

    Returns:
        EvalResult (fit/predict 시간은 학습·예측 구간만 측정)
    """
    spec = parse_classifier(clf)
    if selection is None:
        channels = tuple(range(train.n_channels))
    else:
        channels = tuple(getattr(selection, 'selected', selection))
    if test.values.shape[1:] != train.values.shape[1:]:
        raise ShapeMismatch(
            f"학습 (C, L)={train.values.shape[1:]} 와 테스트 (C, L)={test.values.shape[1:]} 가 다릅니다"
        )

    train_sel = restrict(train, channels)
    test_sel = restrict(test, channels)

    start = time.perf_counter()
    fitted = fit_classifier(spec, train_sel.values, np.asarray(train_sel.labels), train.n_classes)
    fit_time = time.perf_counter() - start

    start = time.perf_counter()
    predictions = predict_classifier(fitted, test_sel.values)
    predict_time = time.perf_counter() - start

    correct = int(np.sum(np.asarray(predictions) == np.asarray(test_sel.labels)))
    accuracy = correct / test_sel.n_instances
    logger.info("%s: %d채널, 정확도 %.4f (학습 %.3fs, 예측 %.3fs)",
                spec.token, len(channels), accuracy, fit_time, predict_time)
    return EvalResult(
        accuracy=accuracy,
        fit_time=fit_time,
        predict_time=predict_time,
        predictions=tuple(predictions),
        channels=channels,
    )


def set_threads(threads: int):
    """numba 병렬 스레드 수 설정"""
    threads = max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(threads)


def warmup():
    """JIT 컴파일을 측정 구간 밖에서 미리 수행"""
    bank = generate_kernels(9, 2, 0)
    data = np.zeros((1, 1, 9))
    transform(bank, data)
    # MtsDataset 값은 읽기 전용 배열이라 별도 시그니처로 컴파일됨
    data.setflags(write=False)
    transform(bank, data)
