"""
채널 x 클래스쌍 유클리드 거리 행렬
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Tuple

import numpy as np
import pandas as pd

from io_utils import save_table
from prototype import PrototypeSet

logger = logging.getLogger(__name__)

DISTANCE_CSV_COLUMNS = ['channel', 'classA', 'classB', 'distance']


@dataclass(frozen=True, order=True)
class ClassPair:
    """클래스 쌍 (a < b)"""
    a: int
    b: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"ClassPair는 a < b 이어야 합니다: ({self.a}, {self.b})")

    @property
    def key(self) -> str:
        return f"{self.a}-{self.b}"

    @classmethod
    def from_key(cls, key: str) -> 'ClassPair':
        a, b = key.split('-')
        return cls(int(a), int(b))


def class_pairs(n_classes: int) -> List[ClassPair]:
    """사전식 순서의 모든 클래스 쌍, K·(K−1)/2개"""
    return [ClassPair(a, b) for a, b in combinations(range(n_classes), 2)]


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    d: np.ndarray  # [채널][쌍]
    pairs: Tuple[ClassPair, ...]

    @property
    def channel_count(self) -> int:
        return self.d.shape[0]

    def column(self, p: int) -> np.ndarray:
        return self.d[:, p]

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for c in range(self.channel_count):
            for p, pair in enumerate(self.pairs):
                rows.append((c, pair.a, pair.b, float(self.d[c, p])))
        return pd.DataFrame(rows, columns=DISTANCE_CSV_COLUMNS)


def build_distance_matrix(ps: PrototypeSet) -> DistanceMatrix:
    """
    프로토타입 간 유클리드 거리 행렬 생성

    Args:
        ps: PrototypeSet (K >= 2)

    Returns:
        DistanceMatrix, d[c][p] = ||proto[a][c] − proto[b][c]||
    """
    pairs = tuple(class_pairs(ps.n_classes))
    d = np.empty((ps.n_channels, len(pairs)), dtype=np.float64)
    for p, pair in enumerate(pairs):
        diff = ps.proto[pair.a] - ps.proto[pair.b]
        d[:, p] = np.sqrt(np.sum(diff * diff, axis=1))
    logger.debug("거리 행렬: C=%d, P=%d, 최대=%.6g", d.shape[0], d.shape[1], d.max())
    return DistanceMatrix(d=d, pairs=pairs)


def channel_sums(dm: DistanceMatrix) -> np.ndarray:
    """채널별 거리 합 (쌍 오름차순으로 고정된 합산 순서)"""
    scores = np.zeros(dm.channel_count, dtype=np.float64)
    for p in range(len(dm.pairs)):
        scores += dm.d[:, p]
    return scores


def save_distance_csv(dm: DistanceMatrix, out_csv_path):
    """거리 행렬 CSV 저장 (channel,classA,classB,distance)"""
    save_table(dm.to_frame(), out_csv_path)
