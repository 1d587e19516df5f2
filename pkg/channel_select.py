"""
채널 선택 전략
- ECS: 클래스쌍 거리 합으로 순위를 매기고 엘보에서 자름
- ECP: 클래스쌍마다 엘보로 자른 뒤 합집합
- GreedyForward: 교차검증 정확도 기준 전진 선택 (비교 기준선)
- All: 전체 채널
"""

import logging
import multiprocessing
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from classify import ClassifierSpec, cross_val_accuracy, parse_classifier, stratified_splits
from distmat import ClassPair, build_distance_matrix, channel_sums
from elbow import elbow_cut
from errors import (
    ChannelSelectionError,
    EmptySelection,
    InsufficientInstances,
    MalformedValue,
    SingleClass,
    UnknownStrategy,
)
from prototype import PrototypeKind, compute_prototypes, znormalize
from tsdata import MtsDataset

logger = logging.getLogger(__name__)


class Strategy(str, Enum):
    ECS = 'ECS'
    ECP = 'ECP'
    GREEDY = 'GreedyForward'
    ALL = 'All'

    @classmethod
    def parse(cls, token) -> 'Strategy':
        if isinstance(token, cls):
            return token
        aliases = {
            'ecs': cls.ECS,
            'ecp': cls.ECP,
            'greedy': cls.GREEDY,
            'greedyforward': cls.GREEDY,
            'all': cls.ALL,
        }
        strategy = aliases.get(str(token).strip().lower())
        if strategy is None:
            raise UnknownStrategy(f"알 수 없는 선택 전략: {token!r} (ecs, ecp, greedy, all)")
        return strategy


@dataclass
class SelectionConfig:
    """선택 설정 (설정 파일 기본값 + CLI 덮어쓰기)"""
    prototype_kind: PrototypeKind = PrototypeKind.MEAN
    znormalize: bool = False
    seed: int = 0
    threads: int = 1
    greedy_clf: str = 'nn1'
    folds: int = 5
    patience: int = 2

    @classmethod
    def from_config(cls, manager) -> 'SelectionConfig':
        return cls(
            prototype_kind=PrototypeKind.parse(manager.get_prototype_kind()),
            znormalize=bool(manager.get("selection_settings.znormalize", False)),
            seed=manager.get_seed(),
            threads=manager.get_threads(),
            greedy_clf=str(manager.get("greedy_settings.clf", "nn1")),
            folds=int(manager.get("greedy_settings.folds", 5)),
            patience=int(manager.get("greedy_settings.patience", 2)),
        )

    def params(self) -> Dict[str, Any]:
        return {
            'prototype_kind': self.prototype_kind.value,
            'znormalize': self.znormalize,
            'seed': self.seed,
        }


@dataclass(frozen=True)
class SelectionResult:
    strategy: Strategy
    selected: Tuple[int, ...]
    scores: Tuple[float, ...]
    per_pair_cuts: Dict[ClassPair, Tuple[int, ...]] = field(default_factory=dict)
    elapsed: float = 0.0  # 초
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        selected = tuple(int(c) for c in self.selected)
        if not selected:
            raise EmptySelection("선택된 채널이 없습니다")
        if list(selected) != sorted(set(selected)):
            raise ValueError(f"selected는 중복 없는 오름차순이어야 합니다: {list(selected)}")
        if selected[0] < 0 or selected[-1] >= len(self.scores):
            raise ValueError(f"selected가 채널 범위(0..{len(self.scores) - 1})를 벗어났습니다")
        if self.strategy is Strategy.ECP:
            union = sorted({c for cut in self.per_pair_cuts.values() for c in cut})
            if union != list(selected):
                raise ValueError("ECP selected는 클래스쌍별 선택의 합집합이어야 합니다")
        object.__setattr__(self, 'selected', selected)
        object.__setattr__(self, 'scores', tuple(float(s) for s in self.scores))

    @property
    def n_channels(self) -> int:
        return len(self.scores)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'strategy': self.strategy.value,
            'selected': list(self.selected),
            'scores': list(self.scores),
            'per_pair_cuts': {pair.key: list(cut) for pair, cut in sorted(self.per_pair_cuts.items())},
            'elapsed_ms': self.elapsed * 1000.0,
            'params': dict(self.params),
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'SelectionResult':
        """
        Raises:
            MalformedValue: 필드 누락 또는 형식 오류
        """
        try:
            return cls(
                strategy=Strategy(payload['strategy']),
                selected=tuple(payload['selected']),
                scores=tuple(payload['scores']),
                per_pair_cuts={
                    ClassPair.from_key(key): tuple(cut)
                    for key, cut in payload.get('per_pair_cuts', {}).items()
                },
                elapsed=float(payload.get('elapsed_ms', 0.0)) / 1000.0,
                params=dict(payload.get('params', {})),
            )
        except ChannelSelectionError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as e:
            raise MalformedValue(f"선택 결과 형식이 올바르지 않습니다: {e}") from e


def _prepare(ds: MtsDataset, znorm: bool) -> MtsDataset:
    if znorm:
        logger.info("z-정규화 적용 후 프로토타입 계산")
        return znormalize(ds)
    return ds


def ecs_select(ds: MtsDataset, kind=PrototypeKind.MEAN, *, znorm: bool = False,
               seed: int = 0) -> SelectionResult:
    """
    ECS 선택: 프로토타입 → 거리 행렬 → 채널별 합 → 엘보

    Args:
        ds: 학습 데이터셋 (K >= 2)
        kind: 프로토타입 종류
        znorm: 프로토타입 계산 전 z-정규화 여부
        seed: 기록용 시드

    Returns:
        SelectionResult (scores = 채널별 거리 합)
    """
    kind = PrototypeKind.parse(kind)
    start = time.perf_counter()
    dm = build_distance_matrix(compute_prototypes(_prepare(ds, znorm), kind))
    scores = channel_sums(dm)
    cut = elbow_cut(scores)
    elapsed = time.perf_counter() - start

    logger.info("ECS: %d/%d 채널 선택 (knee_rank=%d)", cut.knee_rank, ds.n_channels, cut.knee_rank)
    return SelectionResult(
        strategy=Strategy.ECS,
        selected=tuple(sorted(cut.selected)),
        scores=tuple(scores.tolist()),
        elapsed=elapsed,
        params={'prototype_kind': kind.value, 'znormalize': znorm, 'seed': seed},
    )


def ecp_select(ds: MtsDataset, kind=PrototypeKind.MEAN, *, znorm: bool = False,
               seed: int = 0) -> SelectionResult:
    """
    ECP 선택: 클래스쌍마다 거리 열에 엘보를 적용하고 합집합

    scores에는 채널별 최대 쌍 거리를 기록 (보고용, 선택에는 쓰지 않음)
    """
    kind = PrototypeKind.parse(kind)
    start = time.perf_counter()
    dm = build_distance_matrix(compute_prototypes(_prepare(ds, znorm), kind))

    per_pair_cuts = {}
    union = set()
    for p, pair in enumerate(dm.pairs):
        cut = elbow_cut(dm.column(p))
        per_pair_cuts[pair] = tuple(sorted(cut.selected))
        union.update(cut.selected)
    scores = dm.d.max(axis=1)
    elapsed = time.perf_counter() - start

    logger.info("ECP: %d/%d 채널 선택 (%d개 클래스쌍)", len(union), ds.n_channels, len(dm.pairs))
    return SelectionResult(
        strategy=Strategy.ECP,
        selected=tuple(sorted(union)),
        scores=tuple(scores.tolist()),
        per_pair_cuts=per_pair_cuts,
        elapsed=elapsed,
        params={'prototype_kind': kind.value, 'znormalize': znorm, 'seed': seed},
    )


def _evaluate_candidate(args):
    """
    후보 채널 조합 하나의 교차검증 정확도 (멀티프로세싱용 헬퍼 함수)

    Args:
        args: (values, labels, spec, splits) 튜플
    """
    values, labels, spec, splits = args
    return cross_val_accuracy(values, labels, spec, splits)


def _evaluate_candidates(values: np.ndarray, labels: np.ndarray, spec: ClassifierSpec,
                         splits, candidates: List[List[int]], threads: int) -> List[float]:
    jobs = [(values[:, subset, :], labels, spec, splits) for subset in candidates]
    if threads > 1 and len(jobs) > 1:
        ctx = multiprocessing.get_context("spawn")
        with ctx.Pool(processes=min(threads, len(jobs))) as pool:
            # map은 입력 순서를 유지하므로 순차 평가와 같은 결과
            return pool.map(_evaluate_candidate, jobs)
    return [_evaluate_candidate(job) for job in jobs]


def greedy_forward_select(ds: MtsDataset, clf='nn1', folds: int = 5, patience: int = 2, *,
                          seed: int = 0, threads: int = 1,
                          params: Optional[Dict[str, Any]] = None) -> SelectionResult:
    """
    전진 선택 기준선

    매 라운드 남은 채널 중 추가했을 때 층화 k-겹 교차검증 정확도가 가장 높은 채널을
    추가 (동점은 낮은 채널 번호). 최고 정확도가 patience+1 라운드 연속 개선되지
    않거나 채널을 모두 쓰면 종료하고, 최고 정확도 조합을 반환.

    Args:
        ds: 학습 데이터셋
        clf: 분류기 지정 ("nn1" 또는 "rocket:<count>:<seed>")
        folds: 교차검증 겹 수 (>= 2)
        patience: 개선 없는 라운드 허용 수
        seed: 겹 분할 시드
        threads: 후보 평가 프로세스 수

    Raises:
        InsufficientInstances: 클래스별 인스턴스가 folds보다 적은 경우
    """
    spec = parse_classifier(clf)
    if ds.n_classes < 2:
        raise SingleClass(f"클래스가 2개 이상 필요합니다 (현재 {ds.n_classes}개)")
    if folds < 2:
        raise InsufficientInstances(f"folds는 2 이상이어야 합니다 (현재 {folds})")
    if patience < 0:
        raise InsufficientInstances(f"patience는 0 이상이어야 합니다 (현재 {patience})")
    counts = ds.class_counts()
    if counts.min() < folds:
        raise InsufficientInstances(
            f"클래스별 인스턴스가 {folds}개 이상 필요합니다 (최소 {int(counts.min())}개)"
        )

    start = time.perf_counter()
    splits = stratified_splits(ds.labels, folds, seed)
    values, labels = ds.values, np.asarray(ds.labels)

    current: List[int] = []
    remaining = list(range(ds.n_channels))
    scores = np.zeros(ds.n_channels)
    best_acc = -1.0
    best_subset: List[int] = []
    stale = 0
    round_no = 0

    while remaining:
        round_no += 1
        accs = _evaluate_candidates(values, labels, spec, splits,
                                    [current + [c] for c in remaining], threads)
        pick = int(np.argmax(accs))  # remaining은 오름차순 → 동점 시 낮은 채널
        channel = remaining.pop(pick)
        current.append(channel)
        scores[channel] = accs[pick]
        logger.debug("전진 선택 %d라운드: 채널 %d 추가, 정확도 %.4f", round_no, channel, accs[pick])

        if accs[pick] > best_acc:
            best_acc = accs[pick]
            best_subset = list(current)
            stale = 0
        else:
            stale += 1
            if stale > patience:
                break

    elapsed = time.perf_counter() - start
    logger.info("전진 선택: %d라운드, %d채널, 정확도 %.4f", round_no, len(best_subset), best_acc)
    return SelectionResult(
        strategy=Strategy.GREEDY,
        selected=tuple(sorted(best_subset)),
        scores=tuple(scores.tolist()),
        elapsed=elapsed,
        params=params if params is not None else {'prototype_kind': 'mean', 'znormalize': False, 'seed': seed},
    )


def select_all(ds: MtsDataset, params: Optional[Dict[str, Any]] = None) -> SelectionResult:
    start = time.perf_counter()
    selected = tuple(range(ds.n_channels))
    return SelectionResult(
        strategy=Strategy.ALL,
        selected=selected,
        scores=tuple(0.0 for _ in selected),
        elapsed=time.perf_counter() - start,
        params=params or {},
    )


def select(ds: MtsDataset, strategy, config: Optional[SelectionConfig] = None) -> SelectionResult:
    """
    전략 이름으로 선택 실행

    Args:
        ds: 학습 데이터셋
        strategy: Strategy 또는 토큰 ("ecs", "ecp", "greedy", "all")
        config: SelectionConfig (None이면 기본값)

    Raises:
        UnknownStrategy: 알 수 없는 전략 토큰
    """
    strategy = Strategy.parse(strategy)
    config = config or SelectionConfig()

    if strategy is Strategy.ECS:
        return ecs_select(ds, config.prototype_kind, znorm=config.znormalize, seed=config.seed)
    if strategy is Strategy.ECP:
        return ecp_select(ds, config.prototype_kind, znorm=config.znormalize, seed=config.seed)
    if strategy is Strategy.GREEDY:
        return greedy_forward_select(
            ds, config.greedy_clf, config.folds, config.patience,
            seed=config.seed, threads=config.threads, params=config.params(),
        )
    return select_all(ds, config.params())