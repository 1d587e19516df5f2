"""
합성 다채널 데이터셋 생성
- 정보 채널: 클래스별 주파수/위상이 다른 사인파 + 가우시안 잡음
- 나머지 채널: 순수 가우시안 잡음
- 정보 채널 목록(정답)을 함께 반환
"""

import logging
import math
import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Tuple

import numpy as np

from errors import InvalidSpec
from io_utils import save_json, write_archive_file
from tsdata import MtsDataset

logger = logging.getLogger(__name__)

SYNTH_NAME = 'Synth'


@dataclass(frozen=True)
class SynthSpec:
    channels: int = 120
    informative: int = 5
    classes: int = 3
    per_class: int = 20  # 학습/테스트 각각 클래스당 인스턴스 수
    length: int = 100
    noise_sigma: float = 1.0
    effect: float = 1.5
    seed: int = 7

    def validate(self):
        if self.channels < 1:
            raise InvalidSpec(f"채널 수는 1 이상이어야 합니다: {self.channels}")
        if not 1 <= self.informative <= self.channels:
            raise InvalidSpec(f"정보 채널 수는 1..{self.channels} 범위여야 합니다: {self.informative}")
        if self.classes < 2:
            raise InvalidSpec(f"클래스는 2개 이상이어야 합니다: {self.classes}")
        if self.per_class < 1 or self.length < 1:
            raise InvalidSpec("클래스당 인스턴스 수와 길이는 1 이상이어야 합니다")
        if not (math.isfinite(self.noise_sigma) and self.noise_sigma >= 0):
            raise InvalidSpec(f"noise_sigma는 0 이상의 유한값이어야 합니다: {self.noise_sigma}")
        if not math.isfinite(self.effect):
            raise InvalidSpec(f"effect는 유한값이어야 합니다: {self.effect}")
        if self.seed < 0:
            raise InvalidSpec(f"seed는 0 이상이어야 합니다: {self.seed}")

    @classmethod
    def from_config(cls, manager, **overrides) -> 'SynthSpec':
        values = {
            'channels': int(manager.get("synth_settings.channels", 120)),
            'informative': int(manager.get("synth_settings.informative", 5)),
            'classes': int(manager.get("synth_settings.classes", 3)),
            'per_class': int(manager.get("synth_settings.per_class", 20)),
            'length': int(manager.get("synth_settings.length", 100)),
            'noise_sigma': float(manager.get("synth_settings.sigma", 1.0)),
            'effect': float(manager.get("synth_settings.effect", 1.5)),
            'seed': int(manager.get("synth_settings.seed", 7)),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def class_signal(spec: SynthSpec, y: int, c: int) -> np.ndarray:
    """정보 채널 c, 클래스 y의 사인파: effect·sin(2π·f·t/L + φ)"""
    t = np.arange(spec.length, dtype=np.float64)
    freq = 1 + y + (c % 3)
    phase = y * math.pi / spec.classes
    return spec.effect * np.sin(2 * math.pi * freq * t / spec.length + phase)


def _draw(spec: SynthSpec, rng: np.random.Generator, informative, name: str) -> MtsDataset:
    n = spec.classes * spec.per_class
    labels = np.repeat(np.arange(spec.classes), spec.per_class)
    values = rng.normal(0.0, spec.noise_sigma, size=(n, spec.channels, spec.length))
    for y in range(spec.classes):
        rows = labels == y
        for c in informative:
            values[rows, c, :] += class_signal(spec, y, c)
    return MtsDataset(
        name=name,
        values=values,
        labels=labels,
        label_names=tuple(f"class{y}" for y in range(spec.classes)),
    )


def generate(spec: SynthSpec) -> Tuple[MtsDataset, MtsDataset, Tuple[int, ...]]:
    """
    합성 데이터 생성

    Args:
        spec: SynthSpec

    Returns:
        (train, test, informative) - informative는 정렬된 정보 채널 인덱스

    Raises:
        InvalidSpec: 잘못된 설정값
    """
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    informative = tuple(sorted(int(c) for c in rng.permutation(spec.channels)[:spec.informative]))
    train = _draw(spec, rng, informative, SYNTH_NAME)
    test = _draw(spec, rng, informative, SYNTH_NAME)
    logger.info("합성 데이터: C=%d, 정보 채널=%s, seed=%d", spec.channels, list(informative), spec.seed)
    return train, test, informative


def truth_payload(spec: SynthSpec, informative) -> Dict[str, Any]:
    return {'informative': list(informative), 'spec': asdict(spec)}


def write_synth(spec: SynthSpec, out_dir) -> Dict[str, str]:
    """
    학습/테스트 아카이브 파일과 정답 JSON 저장

    Returns:
        {'train': 경로, 'test': 경로, 'truth': 경로}
    """
    train, test, informative = generate(spec)
    paths = {
        'train': os.path.join(out_dir, f"{SYNTH_NAME}_TRAIN.ts"),
        'test': os.path.join(out_dir, f"{SYNTH_NAME}_TEST.ts"),
        'truth': os.path.join(out_dir, f"{SYNTH_NAME}_truth.json"),
    }
    write_archive_file(train, paths['train'])
    write_archive_file(test, paths['test'])
    save_json(truth_payload(spec, informative), paths['truth'])
    return paths
