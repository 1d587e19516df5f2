"""
클래스 프로토타입 계산
- 클래스 x 채널마다 시점별 평균(또는 중앙값) 시계열 하나
- 선택적 z-정규화 (인스턴스·채널별)
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from errors import EmptyClass, SingleClass, UnknownPrototype
from tsdata import MtsDataset

logger = logging.getLogger(__name__)

ZNORM_EPSILON = 1e-12


class PrototypeKind(str, Enum):
    MEAN = 'mean'
    MEDIAN = 'median'

    @classmethod
    def parse(cls, token) -> 'PrototypeKind':
        if isinstance(token, cls):
            return token
        try:
            return cls(str(token).strip().lower())
        except ValueError:
            raise UnknownPrototype(f"알 수 없는 프로토타입 종류: {token!r} (mean 또는 median)")


@dataclass(frozen=True, eq=False)
class PrototypeSet:
    """클래스별 프로토타입 [클래스][채널][시점]"""
    proto: np.ndarray
    kind: PrototypeKind
    class_counts: np.ndarray

    @property
    def n_classes(self) -> int:
        return self.proto.shape[0]

    @property
    def n_channels(self) -> int:
        return self.proto.shape[1]

    def magnitudes(self) -> np.ndarray:
        """채널별 프로토타입 크기 (평균 절댓값, 클래스 평균)"""
        return np.abs(self.proto).mean(axis=(0, 2))


def compute_prototypes(ds: MtsDataset, kind=PrototypeKind.MEAN) -> PrototypeSet:
    """
    클래스 프로토타입 계산

    Args:
        ds: 학습 데이터셋 (K >= 2)
        kind: PrototypeKind.MEAN (기본) 또는 PrototypeKind.MEDIAN

    Returns:
        PrototypeSet

    Raises:
        SingleClass: 클래스가 하나뿐인 경우
        EmptyClass: 인스턴스가 없는 클래스가 있는 경우
    """
    kind = PrototypeKind.parse(kind)
    if ds.n_classes < 2:
        raise SingleClass(f"클래스가 2개 이상 필요합니다 (현재 {ds.n_classes}개)")
    missing = ds.missing_classes()
    if missing:
        raise EmptyClass(f"인스턴스가 없는 클래스: {[ds.label_names[k] for k in missing]}")

    proto = np.empty((ds.n_classes, ds.n_channels, ds.length), dtype=np.float64)
    for k in range(ds.n_classes):
        members = ds.values[ds.labels == k]
        if kind is PrototypeKind.MEAN:
            proto[k] = members.mean(axis=0)
        else:
            # 짝수 개수는 가운데 두 값의 중점
            proto[k] = np.median(members, axis=0)

    ps = PrototypeSet(proto=proto, kind=kind, class_counts=ds.class_counts())
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("프로토타입 크기(채널별): %s", np.round(ps.magnitudes(), 4).tolist())
    return ps


def znormalize(ds: MtsDataset) -> MtsDataset:
    """
    인스턴스·채널별 z-정규화 (모표준편차 사용)
    표준편차 < 1e-12 인 시계열은 0으로 채움
    """
    values = ds.values
    mean = values.mean(axis=2, keepdims=True)
    std = values.std(axis=2, keepdims=True)
    flat = std < ZNORM_EPSILON
    out = np.where(flat, 0.0, (values - mean) / np.where(flat, 1.0, std))
    logger.debug("z-정규화: 상수 시계열 %d개", int(flat.sum()))
    return ds.with_values(out)
