"""
벤치마크 하네스
- 전체 채널 vs 선택 채널: 학습/예측 시간, 데이터 크기, 정확도 비교
- 선택은 학습 데이터로만 수행
- 여러 리포트의 전략별 요약표
"""

import logging
from dataclasses import asdict, dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from channel_select import SelectionConfig, Strategy, select
from classify import (
    KERNEL_LENGTHS,
    RNG_ALGORITHM,
    EvalResult,
    evaluate,
    parse_classifier,
    set_threads,
    warmup,
)
from errors import EmptyInput, InvalidDataset, ShapeMismatch
from tsdata import MtsDataset, byte_size, restrict

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ['strategy', 'runs', 'time_saved_pct', 'storage_saved_pct', 'accuracy_delta']
TIMING_FIELDS = ('selection_ms', 'time_saved_pct')


@dataclass(frozen=True)
class DatasetInfo:
    name: str
    n_train: int
    n_test: int
    channels: int
    length: int
    classes: int


@dataclass(frozen=True)
class RunStats:
    fit_ms: float
    predict_ms: float
    bytes: int  # 학습 + 테스트 데이터 크기
    accuracy: float

    @classmethod
    def from_eval(cls, result: EvalResult, size: int) -> 'RunStats':
        return cls(
            fit_ms=result.fit_time * 1000.0,
            predict_ms=result.predict_time * 1000.0,
            bytes=int(size),
            accuracy=float(result.accuracy),
        )

    @property
    def total_ms(self) -> float:
        return self.fit_ms + self.predict_ms


@dataclass(frozen=True)
class BenchReport:
    dataset: DatasetInfo
    strategy: str
    params: Dict[str, Any]
    selected: Tuple[int, ...]
    selection_ms: float
    full: RunStats
    reduced: RunStats
    time_saved_pct: float
    storage_saved_pct: float
    seed: int

    @property
    def accuracy_delta(self) -> float:
        return self.reduced.accuracy - self.full.accuracy

    def to_dict(self) -> Dict[str, Any]:
        return {
            'dataset': asdict(self.dataset),
            'strategy': self.strategy,
            'params': dict(self.params),
            'selected': list(self.selected),
            'selection_ms': self.selection_ms,
            'full': asdict(self.full),
            'reduced': asdict(self.reduced),
            'time_saved_pct': self.time_saved_pct,
            'storage_saved_pct': self.storage_saved_pct,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'BenchReport':
        try:
            return cls(
                dataset=DatasetInfo(**payload['dataset']),
                strategy=str(payload['strategy']),
                params=dict(payload['params']),
                selected=tuple(int(c) for c in payload['selected']),
                selection_ms=float(payload['selection_ms']),
                full=RunStats(**payload['full']),
                reduced=RunStats(**payload['reduced']),
                time_saved_pct=float(payload['time_saved_pct']),
                storage_saved_pct=float(payload['storage_saved_pct']),
                seed=int(payload['seed']),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidDataset(f"벤치마크 리포트 형식이 올바르지 않습니다: {e}") from e


def without_timing(payload: Dict[str, Any]) -> Dict[str, Any]:
    """시간 관련 필드를 뺀 리포트 딕셔너리 (재현성 비교용)"""
    result = {k: v for k, v in payload.items() if k not in TIMING_FIELDS}
    for side in ('full', 'reduced'):
        result[side] = {k: v for k, v in payload[side].items() if k not in ('fit_ms', 'predict_ms')}
    return result


def _check_compatible(train: MtsDataset, test: MtsDataset):
    if train.values.shape[1:] != test.values.shape[1:]:
        raise ShapeMismatch(
            f"학습 (C, L)={train.values.shape[1:]} 와 테스트 (C, L)={test.values.shape[1:]} 가 다릅니다"
        )
    if tuple(train.label_names) != tuple(test.label_names):
        raise InvalidDataset(
            f"학습/테스트 라벨 목록이 다릅니다: {list(train.label_names)} vs {list(test.label_names)}"
        )


def _bench_params(config: SelectionConfig, clf_token: str, spec) -> Dict[str, Any]:
    params = config.params()
    params.update({
        'clf': clf_token,
        'rng': RNG_ALGORITHM,
        'threads': config.threads,
        'greedy_folds': config.folds,
        'greedy_patience': config.patience,
    })
    if spec.kind == 'rocket':
        params['rocket'] = {
            'kernels': spec.count,
            'kernel_lengths': list(KERNEL_LENGTHS),
            'ridge_alphas': list(spec.alphas),
            'ridge_folds': spec.folds,
        }
    return params


def run_benchmark(train: MtsDataset, test: MtsDataset, strategy, clf='nn1', seed: int = 0,
                  config: Optional[SelectionConfig] = None) -> BenchReport:
    """
    전체 채널과 선택 채널 평가를 비교

    Args:
        train: 학습 데이터셋 (선택은 이 데이터로만 수행)
        test: 테스트 데이터셋
        strategy: 선택 전략
        clf: 분류기 지정
        seed: 선택 시드 (config.seed를 덮어씀)
        config: SelectionConfig

    Returns:
        BenchReport
    """
    _check_compatible(train, test)
    strategy = Strategy.parse(strategy)
    spec = parse_classifier(clf)
    config = replace(config or SelectionConfig(), seed=seed)

    set_threads(config.threads)
    if spec.kind == 'rocket':
        warmup()

    full_eval = evaluate(train, test, None, spec)
    full = RunStats.from_eval(full_eval, byte_size(train) + byte_size(test))

    selection = select(train, strategy, config)
    if strategy is Strategy.ALL:
        # 전체 채널과 같은 계산이므로 전체 평가 결과를 그대로 사용
        reduced = full
    else:
        reduced_eval = evaluate(train, test, selection, spec)
        sizes = byte_size(restrict(train, selection.selected)) + byte_size(restrict(test, selection.selected))
        reduced = RunStats.from_eval(reduced_eval, sizes)

    selection_ms = selection.elapsed * 1000.0
    if full.total_ms > 0:
        time_saved_pct = 1.0 - (selection_ms + reduced.total_ms) / full.total_ms
    else:
        time_saved_pct = 0.0
    storage_saved_pct = 1.0 - reduced.bytes / full.bytes

    report = BenchReport(
        dataset=DatasetInfo(
            name=train.name,
            n_train=train.n_instances,
            n_test=test.n_instances,
            channels=train.n_channels,
            length=train.length,
            classes=train.n_classes,
        ),
        strategy=strategy.value,
        params=_bench_params(config, spec.token, spec),
        selected=selection.selected,
        selection_ms=selection_ms,
        full=full,
        reduced=reduced,
        time_saved_pct=time_saved_pct,
        storage_saved_pct=storage_saved_pct,
        seed=seed,
    )
    logger.info(
        "벤치마크 %s/%s: %d/%d채널, 정확도 %.4f → %.4f, 시간 절감 %.1f%%, 저장 절감 %.1f%%",
        strategy.value, spec.token, len(selection.selected), train.n_channels,
        full.accuracy, reduced.accuracy, time_saved_pct * 100, storage_saved_pct * 100,
    )
    return report


def describe_report(report: BenchReport) -> str:
    """사람이 읽는 한 줄 요약"""
    return (
        f"{report.dataset.name} [{report.strategy} / {report.params.get('clf', '')}] "
        f"{len(report.selected)}/{report.dataset.channels}채널, "
        f"정확도 {report.full.accuracy:.4f} → {report.reduced.accuracy:.4f}, "
        f"시간 절감 {report.time_saved_pct:.1%}, 저장 절감 {report.storage_saved_pct:.1%}"
    )


def summarize(reports: Sequence[BenchReport]) -> pd.DataFrame:
    """
    전략별 평균 요약

    Returns:
        DataFrame (strategy, runs, time_saved_pct, storage_saved_pct, accuracy_delta),
        전략은 처음 등장한 순서

    Raises:
        EmptyInput: 리포트가 없는 경우
    """
    if not reports:
        raise EmptyInput("요약할 벤치마크 리포트가 없습니다")

    rows = pd.DataFrame([
        {
            'strategy': r.strategy,
            'time_saved_pct': r.time_saved_pct,
            'storage_saved_pct': r.storage_saved_pct,
            'accuracy_delta': r.accuracy_delta,
        }
        for r in reports
    ])
    grouped = rows.groupby('strategy', sort=False)
    summary = grouped.mean()
    summary.insert(0, 'runs', grouped.size())
    return summary.reset_index()[SUMMARY_COLUMNS]


def render_summary(summary: pd.DataFrame) -> str:
    """정렬된 텍스트 표"""
    return summary.to_string(index=False, float_format=lambda v: f"{v:.4f}")


def summary_csv(summary: pd.DataFrame) -> str:
    return summary.to_csv(index=False, lineterminator='\n')


def load_reports(payloads: List[Dict[str, Any]]) -> List[BenchReport]:
    return [BenchReport.from_dict(p) for p in payloads]
