"""
채널 선택 / 벤치마크 실행 이력 로깅
- 실행 이력을 CSV로 저장하여 엑셀에서 분석 가능
- 로그 저장 실패는 경고만 남기고 실행을 중단하지 않음
"""

import csv
import logging
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)

TIMESTAMP_FORMAT = '%Y-%m-%d %H:%M:%S'

SELECTION_HEADERS = [
    'timestamp', 'dataset', 'strategy', 'channels', 'selected_count',
    'selected', 'elapsed_ms', 'prototype_kind', 'znormalize', 'seed'
]

BENCH_HEADERS = [
    'timestamp', 'dataset', 'strategy', 'clf', 'selected_count', 'channels',
    'accuracy_full', 'accuracy_reduced', 'time_saved_pct', 'storage_saved_pct', 'seed'
]


@dataclass
class SelectionLogEntry:
    """선택 로그 엔트리"""
    timestamp: datetime
    dataset: str
    strategy: str
    channels: int
    selected: tuple
    elapsed_ms: float
    prototype_kind: str = ""
    znormalize: bool = False
    seed: int = 0


@dataclass
class BenchLogEntry:
    """벤치마크 로그 엔트리"""
    timestamp: datetime
    dataset: str
    strategy: str
    clf: str
    selected_count: int
    channels: int
    accuracy_full: float
    accuracy_reduced: float
    time_saved_pct: float
    storage_saved_pct: float
    seed: int = 0


class RunLogger:
    """선택/벤치마크 실행 이력 로깅 클래스"""

    def __init__(self, log_dir: str = "logs"):
        """
        Args:
            log_dir: 로그 저장 디렉토리
        """
        self.log_dir = Path(log_dir)
        self.selection_log_path = self.log_dir / "selection_log.csv"
        self.bench_log_path = self.log_dir / "bench_log.csv"

    def _append_row(self, path: Path, headers, row) -> bool:
        """헤더가 없으면 먼저 쓰고 한 행 추가"""
        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
            write_header = not path.exists()
            with open(path, 'a', newline='', encoding='utf-8-sig') as f:
                writer = csv.writer(f)
                if write_header:
                    writer.writerow(headers)
                writer.writerow(row)
            return True
        except OSError as e:
            logger.warning("실행 이력 저장 실패 (%s): %s", path, e)
            return False

    def log_selection(self, entry: SelectionLogEntry) -> bool:
        """선택 결과 로깅"""
        row = [
            entry.timestamp.strftime(TIMESTAMP_FORMAT),
            entry.dataset,
            entry.strategy,
            entry.channels,
            len(entry.selected),
            ' '.join(str(c) for c in entry.selected),
            f"{entry.elapsed_ms:.3f}",
            entry.prototype_kind,
            'Y' if entry.znormalize else 'N',
            entry.seed,
        ]
        return self._append_row(self.selection_log_path, SELECTION_HEADERS, row)

    def log_bench(self, entry: BenchLogEntry) -> bool:
        """벤치마크 결과 로깅"""
        row = [
            entry.timestamp.strftime(TIMESTAMP_FORMAT),
            entry.dataset,
            entry.strategy,
            entry.clf,
            entry.selected_count,
            entry.channels,
            f"{entry.accuracy_full:.6f}",
            f"{entry.accuracy_reduced:.6f}",
            f"{entry.time_saved_pct:.6f}",
            f"{entry.storage_saved_pct:.6f}",
            entry.seed,
        ]
        return self._append_row(self.bench_log_path, BENCH_HEADERS, row)

    def log_selection_result(self, dataset: str, result) -> bool:
        """SelectionResult를 로그에 기록"""
        params = result.params
        return self.log_selection(SelectionLogEntry(
            timestamp=datetime.now(),
            dataset=dataset,
            strategy=result.strategy.value,
            channels=result.n_channels,
            selected=result.selected,
            elapsed_ms=result.elapsed * 1000.0,
            prototype_kind=str(params.get('prototype_kind', '')),
            znormalize=bool(params.get('znormalize', False)),
            seed=int(params.get('seed', 0)),
        ))

    def log_bench_report(self, report) -> bool:
        """BenchReport를 로그에 기록"""
        return self.log_bench(BenchLogEntry(
            timestamp=datetime.now(),
            dataset=report.dataset.name,
            strategy=report.strategy,
            clf=str(report.params.get('clf', '')),
            selected_count=len(report.selected),
            channels=report.dataset.channels,
            accuracy_full=report.full.accuracy,
            accuracy_reduced=report.reduced.accuracy,
            time_saved_pct=report.time_saved_pct,
            storage_saved_pct=report.storage_saved_pct,
            seed=report.seed,
        ))

    def get_bench_statistics(self, days: Optional[int] = None) -> Dict[str, Dict[str, Any]]:
        """
        전략별 벤치마크 통계

        Args:
            days: 최근 N일만 집계 (None이면 전체)

        Returns:
            {strategy: {'runs', 'avg_time_saved_pct', 'avg_storage_saved_pct', 'avg_accuracy_delta'}}
        """
        if not self.bench_log_path.exists():
            return {}

        cutoff = datetime.now() - timedelta(days=days) if days is not None else None
        totals: Dict[str, Dict[str, float]] = {}
        try:
            with open(self.bench_log_path, 'r', encoding='utf-8-sig') as f:
                for row in csv.DictReader(f):
                    try:
                        if cutoff and datetime.strptime(row['timestamp'], TIMESTAMP_FORMAT) < cutoff:
                            continue
                        bucket = totals.setdefault(row['strategy'], {'runs': 0, 'time': 0.0, 'storage': 0.0, 'delta': 0.0})
                        bucket['runs'] += 1
                        bucket['time'] += float(row['time_saved_pct'])
                        bucket['storage'] += float(row['storage_saved_pct'])
                        bucket['delta'] += float(row['accuracy_reduced']) - float(row['accuracy_full'])
                    except (ValueError, KeyError):
                        continue
        except OSError as e:
            logger.warning("벤치마크 통계 생성 실패: %s", e)
            return {}

        return {
            strategy: {
                'runs': int(b['runs']),
                'avg_time_saved_pct': b['time'] / b['runs'],
                'avg_storage_saved_pct': b['storage'] / b['runs'],
                'avg_accuracy_delta': b['delta'] / b['runs'],
            }
            for strategy, b in sorted(totals.items())
        }
