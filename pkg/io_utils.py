"""
파일 입출력 유틸리티
- 다변량 시계열 아카이브(.ts) 읽기/쓰기
- CSV 교환 형식 (long format + 라벨 CSV)
- JSON/CSV 결과 저장
"""

import json
import logging
import math
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from errors import (
    IoFailure,
    InvalidDataset,
    MalformedHeader,
    MalformedValue,
    MissingValue,
    NonFiniteValue,
    RaggedData,
    UnknownLabel,
)
from tsdata import MtsDataset

logger = logging.getLogger(__name__)

# 헤더 태그 (소문자 비교)
_SINGLE_TAGS = {
    '@problemname', '@dimensions', '@equallength', '@serieslength', '@classlabel',
    '@univariate', '@timestamps', '@missing', '@targetlabel',
}
_CHANNEL_COMMENT = re.compile(r'^#\s*channel\s+(\d+)\s+(\S+)\s*$', re.IGNORECASE)

CSV_VALUE_COLUMNS = ['instance', 'channel', 'time', 'value']
CSV_LABEL_COLUMNS = ['instance', 'label']


def _parse_int(tag: str, tokens: List[str], lineno: int) -> int:
    if len(tokens) != 2:
        raise MalformedHeader(f"{lineno}행: {tag} 뒤에 정수 하나가 필요합니다")
    try:
        value = int(tokens[1])
    except ValueError:
        raise MalformedHeader(f"{lineno}행: {tag} 값이 정수가 아닙니다: {tokens[1]!r}")
    if value < 1:
        raise MalformedHeader(f"{lineno}행: {tag} 값은 1 이상이어야 합니다")
    return value


def _expect_flag(tag: str, tokens: List[str], lineno: int, allowed: Sequence[str]) -> str:
    if len(tokens) != 2 or tokens[1].lower() not in ('true', 'false'):
        raise MalformedHeader(f"{lineno}행: {tag} 뒤에 true/false가 필요합니다")
    flag = tokens[1].lower()
    if flag not in allowed:
        raise MalformedHeader(f"{lineno}행: {tag} {flag} 는 지원하지 않습니다")
    return flag


def _parse_value(token: str, lineno: int) -> float:
    token = token.strip()
    if token == '?':
        raise MissingValue(f"{lineno}행: 결측값('?')은 지원하지 않습니다")
    try:
        value = float(token)
    except ValueError:
        raise MalformedValue(f"{lineno}행: 숫자가 아닌 값 {token!r}")
    if not math.isfinite(value):
        raise NonFiniteValue(f"{lineno}행: 유한하지 않은 값 {token!r}")
    return value


def parse_archive_file(path) -> MtsDataset:
    """
    아카이브(.ts) 파일 읽기

    Args:
        path: 파일 경로

    Returns:
        검증된 MtsDataset

    Raises:
        MalformedHeader: 헤더 태그 누락/중복
        RaggedData: 채널 수 또는 길이가 다른 인스턴스
        UnknownLabel: 선언되지 않은 라벨
        MissingValue: '?' 값
        NonFiniteValue: NaN/Inf 값
        MalformedValue: UTF-8이 아닌 파일
        IoFailure: 파일을 읽을 수 없음
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            lines = f.read().splitlines()
    except OSError as e:
        raise IoFailure(f"파일을 읽을 수 없습니다: {path} ({e})")
    except UnicodeDecodeError as e:
        raise MalformedValue(f"UTF-8 텍스트가 아닙니다: {path} (바이트 위치 {e.start})")

    header: Dict[str, Any] = {}
    channel_names: Dict[int, str] = {}
    label_list: Optional[List[str]] = None
    in_data = False

    rows: List[List[List[float]]] = []
    labels: List[int] = []
    n_channels: Optional[int] = None
    length: Optional[int] = None

    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue

        if line.startswith('#'):
            if not in_data:
                match = _CHANNEL_COMMENT.match(line)
                if match:
                    channel_names[int(match.group(1))] = match.group(2)
            continue

        if not in_data:
            if not line.startswith('@'):
                raise MalformedHeader(f"{lineno}행: @data 이전에 데이터가 있습니다")
            tokens = line.split()
            tag = tokens[0].lower()

            if tag == '@data':
                if len(tokens) != 1:
                    raise MalformedHeader(f"{lineno}행: @data 는 단독 행이어야 합니다")
                in_data = True
                if label_list is None:
                    raise MalformedHeader("@classLabel 태그가 없습니다")
                n_channels = header.get('@dimensions')
                length = header.get('@serieslength')
                continue
            if tag not in _SINGLE_TAGS:
                raise MalformedHeader(f"{lineno}행: 알 수 없는 헤더 태그 {tokens[0]}")
            if tag in header:
                raise MalformedHeader(f"{lineno}행: 헤더 태그 중복 {tokens[0]}")

            if tag == '@problemname':
                if len(tokens) != 2:
                    raise MalformedHeader(f"{lineno}행: @problemName 뒤에 토큰 하나가 필요합니다")
                header[tag] = tokens[1]
            elif tag in ('@dimensions', '@serieslength'):
                header[tag] = _parse_int(tokens[0], tokens, lineno)
            elif tag == '@equallength':
                flag = _expect_flag(tokens[0], tokens, lineno, ('true', 'false'))
                if flag == 'false':
                    raise RaggedData(f"{lineno}행: 길이가 다른 시계열은 지원하지 않습니다")
                header[tag] = True
            elif tag == '@classlabel':
                if len(tokens) < 2 or tokens[1].lower() != 'true':
                    raise MalformedHeader(f"{lineno}행: @classLabel true <라벨...> 형식이어야 합니다")
                label_list = tokens[2:]
                if not label_list:
                    raise MalformedHeader(f"{lineno}행: 클래스 라벨이 선언되지 않았습니다")
                if len(set(label_list)) != len(label_list):
                    raise MalformedHeader(f"{lineno}행: 중복된 클래스 라벨")
                header[tag] = label_list
            elif tag == '@timestamps':
                header[tag] = _expect_flag(tokens[0], tokens, lineno, ('false',))
            elif tag == '@targetlabel':
                header[tag] = _expect_flag(tokens[0], tokens, lineno, ('false',))
            else:
                # @univariate, @missing: 값만 확인
                header[tag] = _expect_flag(tokens[0], tokens, lineno, ('true', 'false'))
            continue

        # 데이터 행
        fields = line.split(':')
        if len(fields) < 2:
            raise RaggedData(f"{lineno}행: 채널과 라벨이 ':'로 구분되어야 합니다")
        label_token = fields[-1].strip()
        channel_fields = fields[:-1]

        if n_channels is None:
            n_channels = len(channel_fields)
        elif len(channel_fields) != n_channels:
            raise RaggedData(
                f"{lineno}행: 채널 수 {len(channel_fields)} (기대값 {n_channels})"
            )

        instance = []
        for c, field in enumerate(channel_fields):
            series = [_parse_value(tok, lineno) for tok in field.split(',')]
            if length is None:
                length = len(series)
            elif len(series) != length:
                raise RaggedData(
                    f"{lineno}행: 채널 {c}의 길이 {len(series)} (기대값 {length})"
                )
            instance.append(series)

        if label_token not in label_list:
            raise UnknownLabel(f"{lineno}행: 선언되지 않은 라벨 {label_token!r}")
        rows.append(instance)
        labels.append(label_list.index(label_token))

    if not in_data:
        raise MalformedHeader("@data 태그가 없습니다")
    if not rows:
        raise InvalidDataset(f"데이터 행이 없습니다: {path}")

    names = None
    if channel_names:
        if sorted(channel_names) != list(range(n_channels)):
            raise MalformedHeader(
                f"채널 이름 주석이 채널 0..{n_channels - 1} 전체를 포함하지 않습니다"
            )
        names = tuple(channel_names[i] for i in range(n_channels))

    ds = MtsDataset(
        name=header.get('@problemname', path.stem),
        values=np.asarray(rows, dtype=np.float64),
        labels=np.asarray(labels, dtype=np.int64),
        label_names=tuple(label_list),
        channel_names=names,
    )
    logger.debug("아카이브 로드: %s (N=%d, C=%d, L=%d)", path, ds.n_instances, ds.n_channels, ds.length)
    return ds


def _check_token(kind: str, token: str):
    if not token or re.search(r'[\s:,]', token):
        raise MalformedHeader(f"{kind} {token!r} 에는 공백, ':' 또는 ','를 쓸 수 없습니다")


def format_archive(ds: MtsDataset) -> str:
    """데이터셋을 아카이브 형식 문자열로 변환"""
    for label in ds.label_names:
        _check_token("라벨", label)
    name = '_'.join(ds.name.split()) or 'dataset'

    out = []
    if ds.channel_names is not None:
        for i, channel in enumerate(ds.channel_names):
            _check_token("채널 이름", channel)
            out.append(f"# channel {i} {channel}")
    out.append(f"@problemName {name}")
    out.append(f"@dimensions {ds.n_channels}")
    out.append("@equalLength true")
    out.append(f"@seriesLength {ds.length}")
    out.append("@classLabel true " + ' '.join(ds.label_names))
    out.append("@data")

    for n in range(ds.n_instances):
        # repr(float)는 최단 왕복 표기
        channels = [','.join(map(repr, series)) for series in ds.values[n].tolist()]
        out.append(':'.join(channels) + ':' + ds.label_names[ds.labels[n]])
    return '\n'.join(out) + '\n'


def write_archive_file(ds: MtsDataset, path):
    """
    아카이브(.ts) 파일 저장

    Args:
        ds: 저장할 데이터셋
        path: 출력 경로 (상위 폴더는 자동 생성)

    Raises:
        IoFailure: 파일 쓰기 실패
    """
    text = format_archive(ds)
    try:
        parent = os.path.dirname(os.fspath(path))
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
    except OSError as e:
        raise IoFailure(f"파일을 저장할 수 없습니다: {path} ({e})")


def read_csv_dataset(values_path, labels_path, name: Optional[str] = None,
                     label_names: Optional[Sequence[str]] = None) -> MtsDataset:
    """
    CSV 교환 형식 읽기

    Args:
        values_path: instance,channel,time,value 컬럼의 long format CSV
        labels_path: instance,label 컬럼의 CSV
        name: 데이터셋 이름 (기본값: 값 파일 이름)
        label_names: 라벨 순서 (기본값: 정렬된 고유 라벨)

    Returns:
        MtsDataset
    """
    try:
        values_df = pd.read_csv(values_path)
        labels_df = pd.read_csv(labels_path, dtype={'label': str})
    except OSError as e:
        raise IoFailure(f"CSV 파일을 읽을 수 없습니다: {e}")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise MalformedValue(f"CSV 형식 오류: {e}")

    if list(values_df.columns) != CSV_VALUE_COLUMNS:
        raise MalformedHeader(f"값 CSV 컬럼은 {CSV_VALUE_COLUMNS} 이어야 합니다: {list(values_df.columns)}")
    if list(labels_df.columns) != CSV_LABEL_COLUMNS:
        raise MalformedHeader(f"라벨 CSV 컬럼은 {CSV_LABEL_COLUMNS} 이어야 합니다: {list(labels_df.columns)}")
    if values_df['value'].isna().any():
        raise MissingValue("값 CSV에 결측값이 있습니다")

    try:
        value = values_df['value'].astype(np.float64).to_numpy()
    except ValueError as e:
        raise MalformedValue(f"숫자가 아닌 값: {e}")
    if not np.all(np.isfinite(value)):
        raise NonFiniteValue("값 CSV에 NaN/Inf 값이 있습니다")

    for frame, columns in ((values_df, CSV_VALUE_COLUMNS[:3]), (labels_df, CSV_LABEL_COLUMNS[:1])):
        if not all(pd.api.types.is_integer_dtype(frame[col]) for col in columns):
            raise MalformedValue(f"인덱스 컬럼 {columns} 은 정수여야 합니다")

    instances = sorted(labels_df['instance'].unique().tolist())
    n = len(instances)
    c = int(values_df['channel'].max()) + 1 if len(values_df) else 0
    length = int(values_df['time'].max()) + 1 if len(values_df) else 0
    if instances != list(range(n)) or n == 0:
        raise RaggedData("라벨 CSV의 instance는 0..N-1 이어야 합니다")
    if len(values_df) != n * c * length:
        raise RaggedData(f"값 CSV 행 수 {len(values_df)} 가 N·C·L={n * c * length} 와 다릅니다")

    grid = np.full((n, c, length), np.nan)
    idx = values_df[['instance', 'channel', 'time']].to_numpy(dtype=np.int64)
    if idx.min() < 0 or idx[:, 0].max() >= n:
        raise RaggedData("값 CSV의 인덱스가 범위를 벗어났습니다")
    grid[idx[:, 0], idx[:, 1], idx[:, 2]] = value
    if np.isnan(grid).any():
        raise RaggedData("값 CSV에 빠진 (instance, channel, time) 조합이 있습니다")

    labels_df = labels_df.sort_values('instance')
    raw_labels = labels_df['label'].astype(str).str.strip().tolist()
    if label_names is None:
        label_names = sorted(set(raw_labels))
    label_names = list(label_names)
    unknown = sorted(set(raw_labels) - set(label_names))
    if unknown:
        raise UnknownLabel(f"선언되지 않은 라벨: {unknown}")

    return MtsDataset(
        name=name or Path(values_path).stem,
        values=grid,
        labels=np.array([label_names.index(x) for x in raw_labels], dtype=np.int64),
        label_names=tuple(label_names),
    )


def write_csv_dataset(ds: MtsDataset, values_path, labels_path):
    """CSV 교환 형식 저장 (값 long format + 라벨)"""
    n, c, length = ds.values.shape
    grid_n, grid_c, grid_t = np.meshgrid(np.arange(n), np.arange(c), np.arange(length), indexing='ij')
    values_df = pd.DataFrame({
        'instance': grid_n.ravel(),
        'channel': grid_c.ravel(),
        'time': grid_t.ravel(),
        'value': ds.values.ravel(),
    })
    labels_df = pd.DataFrame({'instance': np.arange(n), 'label': ds.label_strings()})
    save_table(values_df, values_path)
    save_table(labels_df, labels_path)


def default_labels_path(values_path) -> Path:
    """values.csv → values_labels.csv"""
    path = Path(values_path)
    return path.with_name(f"{path.stem}_labels.csv")


def read_dataset(path, labels_path=None) -> MtsDataset:
    """
    확장자로 형식을 골라 데이터셋 읽기 (.csv는 CSV 교환 형식, 그 외는 아카이브 형식)
    """
    if Path(path).suffix.lower() == '.csv':
        return read_csv_dataset(path, labels_path or default_labels_path(path))
    return parse_archive_file(path)


def save_table(df: pd.DataFrame, out_csv_path):
    """
    DataFrame을 CSV로 저장

    Args:
        df: 저장할 표
        out_csv_path: 출력 CSV 경로
    """
    parent = os.path.dirname(os.fspath(out_csv_path))
    try:
        if parent:
            os.makedirs(parent, exist_ok=True)
        df.to_csv(out_csv_path, index=False, encoding='utf-8', lineterminator='\n')
    except OSError as e:
        raise IoFailure(f"CSV 저장 실패: {out_csv_path} ({e})")


def dump_json(payload: Dict[str, Any], pretty: bool = False) -> str:
    """JSON 문자열 (키 순서 유지)"""
    if pretty:
        return json.dumps(payload, indent=2, ensure_ascii=False)
    return json.dumps(payload, ensure_ascii=False, separators=(',', ':'))


def save_json(payload: Dict[str, Any], path, pretty: bool = True):
    parent = os.path.dirname(os.fspath(path))
    try:
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(dump_json(payload, pretty) + '\n')
    except OSError as e:
        raise IoFailure(f"JSON 저장 실패: {path} ({e})")


def load_json(path) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except OSError as e:
        raise IoFailure(f"JSON 파일을 읽을 수 없습니다: {path} ({e})")
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise MalformedValue(f"JSON 형식 오류: {path} ({e})")
