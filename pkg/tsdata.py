"""
다변량 시계열 데이터셋 모델
- MtsDataset: [인스턴스][채널][시점] 3축 배열 + 클래스 라벨
- ChannelSubsetView / restrict: 선택된 채널만 남긴 데이터셋
- byte_size: 축소율 계산용 표준 크기 (값당 8바이트)
"""

from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from errors import (
    DuplicateChannel,
    EmptySelection,
    IndexOutOfRange,
    InvalidDataset,
    NonFiniteValue,
)

BYTES_PER_VALUE = 8


@dataclass(frozen=True, eq=False)
class MtsDataset:
    """등길이 다변량 시계열 데이터셋 (생성 후 변경 불가)"""
    name: str
    values: np.ndarray  # float64 [N][C][L]
    labels: np.ndarray  # int64 [N], 0..K-1
    label_names: Tuple[str, ...]
    channel_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, copy=True)
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        label_names = tuple(str(x) for x in self.label_names)
        channel_names = None if self.channel_names is None else tuple(str(x) for x in self.channel_names)

        if values.ndim != 3:
            raise InvalidDataset(f"values는 3축 배열이어야 합니다 (현재 {values.ndim}축)")
        n, c, length = values.shape
        if n < 1 or c < 1 or length < 1:
            raise InvalidDataset(f"N, C, L은 모두 1 이상이어야 합니다: {values.shape}")
        if not np.all(np.isfinite(values)):
            raise NonFiniteValue("NaN 또는 Inf 값이 포함되어 있습니다")
        if labels.shape != (n,):
            raise InvalidDataset(f"라벨 수({labels.size})가 인스턴스 수({n})와 다릅니다")
        if len(set(label_names)) != len(label_names) or not label_names:
            raise InvalidDataset(f"라벨 이름은 비어 있지 않고 서로 달라야 합니다: {label_names}")
        k = len(label_names)
        if labels.min() < 0 or labels.max() >= k:
            raise InvalidDataset(f"라벨 id는 0..{k - 1} 범위여야 합니다")
        # 테스트 파일은 선언된 클래스 일부만 가질 수 있음 (클래스별 존재 검사는 prototype 단계)
        if channel_names is not None and len(channel_names) != c:
            raise InvalidDataset(f"채널 이름 수({len(channel_names)})가 채널 수({c})와 다릅니다")

        values.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'label_names', label_names)
        object.__setattr__(self, 'channel_names', channel_names)

    @property
    def n_instances(self) -> int:
        return self.values.shape[0]

    @property
    def n_channels(self) -> int:
        return self.values.shape[1]

    @property
    def length(self) -> int:
        return self.values.shape[2]

    @property
    def n_classes(self) -> int:
        return len(self.label_names)

    @property
    def names(self) -> Tuple[str, ...]:
        """채널 이름 (없으면 ch0..chC-1)"""
        if self.channel_names is not None:
            return self.channel_names
        return tuple(f"ch{i}" for i in range(self.n_channels))

    def missing_classes(self) -> list:
        """인스턴스가 하나도 없는 클래스 id"""
        return [k for k, count in enumerate(self.class_counts()) if count == 0]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def label_strings(self) -> list:
        return [self.label_names[i] for i in self.labels]

    def with_values(self, values: np.ndarray) -> 'MtsDataset':
        """같은 라벨로 값만 바꾼 새 데이터셋"""
        return replace(self, values=values)

    def __eq__(self, other):
        if not isinstance(other, MtsDataset):
            return NotImplemented
        return (
            self.name == other.name
            and self.label_names == other.label_names
            and self.channel_names == other.channel_names
            and self.values.shape == other.values.shape
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def __repr__(self):
        n, c, length = self.values.shape
        return f"MtsDataset(name={self.name!r}, N={n}, C={c}, L={length}, K={self.n_classes})"


@dataclass(frozen=True)
class ChannelSubsetView:
    """데이터셋의 채널 부분집합 (순서 유지)"""
    base: MtsDataset
    channels: Tuple[int, ...]

    def __post_init__(self):
        channels = tuple(int(c) for c in self.channels)
        if not channels:
            raise EmptySelection("선택된 채널이 없습니다")
        c_total = self.base.n_channels
        bad = [c for c in channels if c < 0 or c >= c_total]
        if bad:
            raise IndexOutOfRange(f"채널 인덱스 범위(0..{c_total - 1}) 밖: {bad}")
        if len(set(channels)) != len(channels):
            raise DuplicateChannel(f"중복된 채널 인덱스: {list(channels)}")
        object.__setattr__(self, 'channels', channels)

    def materialize(self) -> MtsDataset:
        idx = list(self.channels)
        names = None
        if self.base.channel_names is not None:
            names = tuple(self.base.channel_names[i] for i in idx)
        return MtsDataset(
            name=self.base.name,
            values=self.base.values[:, idx, :],
            labels=self.base.labels,
            label_names=self.base.label_names,
            channel_names=names,
        )


def restrict(ds: MtsDataset, channels: Sequence[int]) -> MtsDataset:
    """
    선택된 채널만 남긴 데이터셋 생성

    Args:
        ds: 원본 데이터셋
        channels: 채널 인덱스 리스트 (순서대로 출력 채널이 됨)

    Returns:
        C' = len(channels)인 MtsDataset (N, L, 라벨은 동일)

    Raises:
        EmptySelection, IndexOutOfRange, DuplicateChannel
    """
    return ChannelSubsetView(ds, tuple(channels)).materialize()


def byte_size(ds: MtsDataset) -> int:
    """표준 데이터 크기 8·N·C·L (파일 인코딩과 무관)"""
    n, c, length = ds.values.shape
    return BYTES_PER_VALUE * n * c * length
