"""
엘보(knee) 지점 탐지
- 점수를 내림차순 정렬한 곡선에서 양 끝점을 잇는 현(chord)까지의
  수직 거리가 최대인 점을 엘보로 사용
- 엘보 점보다 앞 순위의 채널만 선택 (엘보 채널부터는 꼬리로 봄)
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from errors import EmptyScores, NonFiniteScore

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ElbowCut:
    ranked_channels: Tuple[int, ...]  # 점수 내림차순 (동점은 채널 번호 오름차순)
    knee_rank: int  # 선택된 채널 수 = 엘보 점 직전까지의 순위 (1-based)
    selected: Tuple[int, ...]  # ranked_channels[:knee_rank]


def rank_channels(scores: np.ndarray) -> np.ndarray:
    """점수 내림차순, 동점은 채널 번호 오름차순"""
    return np.lexsort((np.arange(len(scores)), -scores))


def chord_distances(sorted_scores: np.ndarray) -> np.ndarray:
    """
    정렬된 곡선의 각 점 (i, s_i)에서 현까지의 수직 거리 (공통 분모 제외)

    분모는 모든 점에 공통이므로 argmax에 영향이 없음
    """
    count = len(sorted_scores)
    first, last = sorted_scores[0], sorted_scores[-1]
    i = np.arange(count, dtype=np.float64)
    return np.abs((last - first) * i - (count - 1) * (sorted_scores - first))


def elbow_cut(scores: Sequence[float]) -> ElbowCut:
    """
    엘보 기준 채널 선택

    Args:
        scores: 채널별 점수 (채널 번호 = 인덱스)

    Returns:
        ElbowCut

    Raises:
        EmptyScores: 점수가 없는 경우
        NonFiniteScore: NaN/Inf 점수
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or scores.size == 0:
        raise EmptyScores("점수가 하나 이상 필요합니다")
    if not np.all(np.isfinite(scores)):
        raise NonFiniteScore(f"유한하지 않은 점수: {scores.tolist()}")

    ranked = rank_channels(scores)
    sorted_scores = scores[ranked]
    count = len(scores)

    knee_rank = count
    if count > 2 and sorted_scores[0] != sorted_scores[-1]:
        distances = chord_distances(sorted_scores)
        # 양 끝점의 거리는 0 → 최대가 양수면 엘보는 내부 점 (0-based 위치 = 앞선 채널 수)
        # np.argmax는 동점 시 가장 작은 순위를 반환
        if distances.max() > 0:
            knee_rank = int(np.argmax(distances))

    ranked_channels = tuple(int(c) for c in ranked)
    logger.debug("엘보: C=%d, knee_rank=%d", count, knee_rank)
    return ElbowCut(
        ranked_channels=ranked_channels,
        knee_rank=knee_rank,
        selected=ranked_channels[:knee_rank],
    )
