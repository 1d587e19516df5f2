"""
다변량 시계열 채널 선택 도구 - 명령줄 인터페이스
- select / restrict / bench / synth / inspect / summarize
- stdout에는 결과(JSON/CSV)만, 진단 메시지는 stderr
- 종료 코드: 0 성공, 2 입력/파싱 오류, 3 선택/분류 오류
"""

import argparse
import logging
import multiprocessing
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd

import config_manager
from bench import describe_report, load_reports, render_summary, run_benchmark, summarize, summary_csv
from channel_select import SelectionConfig, SelectionResult, Strategy, select
from classify import parse_classifier, set_threads
from config_manager import ConfigManager
from distmat import build_distance_matrix, channel_sums, save_distance_csv
from errors import ChannelSelectionError, describe
from io_utils import dump_json, load_json, read_dataset, save_json, save_table, write_archive_file
from prototype import PrototypeKind, compute_prototypes, znormalize
from run_logger import RunLogger
from synth import SynthSpec, write_synth
from tsdata import byte_size, restrict

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"0 이상의 정수가 필요합니다: {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"1 이상의 정수가 필요합니다: {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='chansel',
        description='클래스 프로토타입 거리 기반 다변량 시계열 채널 선택',
    )
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='진단 로그 (-v: INFO, -vv: DEBUG)')
    parser.add_argument('--config', default=None, help='설정 파일 경로 (기본값: CHANSEL_CONFIG 또는 config.json)')
    sub = parser.add_subparsers(dest='command', required=True)

    def add_selection_flags(p):
        # --strategy는 choices 없이 받아서 UnknownStrategy로 처리 (종료 코드 3)
        p.add_argument('--strategy', default='ecs', help='ecs | ecp | greedy | all')
        p.add_argument('--prototype', default=None, help='mean | median')
        p.add_argument('--znorm', action='store_true', default=None, help='프로토타입 계산 전 z-정규화')
        p.add_argument('--seed', type=_non_negative_int, default=None)
        p.add_argument('--threads', type=_positive_int, default=None)

    def add_clf_flags(p):
        p.add_argument('--clf', default=None, help='nn1 | rocket | rocket:<count>:<seed>')
        p.add_argument('--kernels', type=_positive_int, default=None, help='"rocket" 단독 지정 시 커널 수')

    p = sub.add_parser('select', help='채널 선택 결과 JSON 출력')
    p.add_argument('--in', dest='input', required=True)
    p.add_argument('--labels', default=None, help='CSV 입력의 라벨 파일')
    p.add_argument('--out', default=None, help='결과 JSON 파일 (생략 시 stdout)')
    p.add_argument('--pretty', action='store_true')
    add_selection_flags(p)
    add_clf_flags(p)
    p.set_defaults(handler=cmd_select)

    p = sub.add_parser('restrict', help='선택된 채널만 남긴 아카이브 파일 저장')
    p.add_argument('--in', dest='input', required=True)
    p.add_argument('--labels', default=None)
    p.add_argument('--selection', required=True, help='select 결과 JSON')
    p.add_argument('--out', required=True)
    p.add_argument('--pretty', action='store_true')
    p.set_defaults(handler=cmd_restrict)

    p = sub.add_parser('bench', help='전체 채널 대비 선택 채널 벤치마크')
    p.add_argument('--in', dest='input', required=True)
    p.add_argument('--test', required=True)
    p.add_argument('--labels', default=None)
    p.add_argument('--test-labels', default=None)
    p.add_argument('--out', default=None, help='리포트 JSON 파일 (생략 시 stdout)')
    p.add_argument('--pretty', action='store_true')
    add_selection_flags(p)
    add_clf_flags(p)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser('synth', help='합성 데이터셋 생성')
    p.add_argument('--out', required=True, help='출력 폴더')
    p.add_argument('--channels', type=int, default=None)
    p.add_argument('--informative', type=int, default=None)
    p.add_argument('--classes', type=int, default=None)
    p.add_argument('--per-class', type=int, default=None)
    p.add_argument('--length', type=int, default=None)
    p.add_argument('--sigma', type=float, default=None)
    p.add_argument('--effect', type=float, default=None)
    p.add_argument('--seed', type=_non_negative_int, default=None)
    p.add_argument('--pretty', action='store_true')
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser('inspect', help='거리 행렬 CSV와 채널 점수 CSV 저장')
    p.add_argument('--in', dest='input', required=True)
    p.add_argument('--labels', default=None)
    p.add_argument('--out', required=True, help='출력 폴더')
    p.add_argument('--prototype', default=None)
    p.add_argument('--znorm', action='store_true', default=None)
    p.add_argument('--pretty', action='store_true')
    p.set_defaults(handler=cmd_inspect)

    p = sub.add_parser('summarize', help='벤치마크 리포트 전략별 요약 CSV')
    p.add_argument('--in', dest='input', nargs='+', required=True)
    p.add_argument('--out', default=None, help='요약 CSV 파일 (생략 시 stdout)')
    p.add_argument('--pretty', action='store_true')
    p.set_defaults(handler=cmd_summarize)

    return parser


def configure_logging(settings: ConfigManager, verbose: int):
    level = getattr(logging, settings.get_log_level(), logging.WARNING)
    if verbose == 1:
        level = min(level, logging.INFO)
    elif verbose >= 2:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT, force=True)


def _emit(payload, out, pretty: bool):
    """--out이 있으면 파일로, 없으면 stdout으로 JSON 출력"""
    if out:
        save_json(payload, out, pretty=pretty)
    else:
        sys.stdout.write(dump_json(payload, pretty) + '\n')


def _selection_config(args, settings: ConfigManager) -> SelectionConfig:
    config = SelectionConfig.from_config(settings)
    overrides = {}
    if getattr(args, 'prototype', None) is not None:
        overrides['prototype_kind'] = PrototypeKind.parse(args.prototype)
    if getattr(args, 'znorm', None):
        overrides['znormalize'] = True
    if getattr(args, 'seed', None) is not None:
        overrides['seed'] = args.seed
    if getattr(args, 'threads', None) is not None:
        overrides['threads'] = args.threads
    if getattr(args, 'clf', None) is not None and args.command == 'select':
        overrides['greedy_clf'] = _classifier(args, settings, overrides.get('seed', config.seed)).token
    return replace(config, **overrides)


def _classifier(args, settings: ConfigManager, seed: int):
    token = args.clf or settings.get_default_clf()
    kernels = args.kernels or int(settings.get("classifier_settings.rocket_kernels", 500))
    spec = parse_classifier(token, default_kernels=kernels, default_seed=seed)
    alphas = settings.get_ridge_alphas()
    return replace(
        spec,
        alphas=tuple(alphas) if alphas else spec.alphas,
        folds=int(settings.get("classifier_settings.cv_folds", spec.folds)),
    )


def _history(settings: ConfigManager):
    history_dir = settings.get_history_dir()
    return RunLogger(history_dir) if history_dir else None


def cmd_select(args, settings: ConfigManager) -> int:
    strategy = Strategy.parse(args.strategy)
    config = _selection_config(args, settings)
    set_threads(config.threads)

    ds = read_dataset(args.input, args.labels)
    result = select(ds, strategy, config)
    _emit(result.to_dict(), args.out, args.pretty)

    if args.pretty:
        print(f"{ds.name}: {strategy.value} {len(result.selected)}/{ds.n_channels}채널 "
              f"{list(result.selected)} ({result.elapsed * 1000:.1f} ms)", file=sys.stderr)
    history = _history(settings)
    if history:
        history.log_selection_result(ds.name, result)
    return 0


def cmd_restrict(args, settings: ConfigManager) -> int:
    ds = read_dataset(args.input, args.labels)
    selection = SelectionResult.from_dict(load_json(args.selection))
    if selection.n_channels != ds.n_channels:
        logger.warning("선택 결과의 채널 수(%d)가 데이터셋(%d)과 다릅니다", selection.n_channels, ds.n_channels)

    reduced = restrict(ds, selection.selected)
    write_archive_file(reduced, args.out)
    payload = {
        'out': os.fspath(args.out),
        'selected': list(selection.selected),
        'bytes_full': byte_size(ds),
        'bytes_reduced': byte_size(reduced),
    }
    sys.stdout.write(dump_json(payload, args.pretty) + '\n')
    return 0


def cmd_bench(args, settings: ConfigManager) -> int:
    strategy = Strategy.parse(args.strategy)
    config = _selection_config(args, settings)
    spec = _classifier(args, settings, config.seed)

    train = read_dataset(args.input, args.labels)
    test = read_dataset(args.test, args.test_labels)
    report = run_benchmark(train, test, strategy, spec, seed=config.seed, config=config)
    _emit(report.to_dict(), args.out, args.pretty)

    if args.pretty:
        print(describe_report(report), file=sys.stderr)
    history = _history(settings)
    if history:
        history.log_bench_report(report)
    return 0


def cmd_synth(args, settings: ConfigManager) -> int:
    spec = SynthSpec.from_config(
        settings,
        channels=args.channels,
        informative=args.informative,
        classes=args.classes,
        per_class=args.per_class,
        length=args.length,
        noise_sigma=args.sigma,
        effect=args.effect,
        seed=args.seed,
    )
    paths = write_synth(spec, args.out)
    sys.stdout.write(dump_json(paths, args.pretty) + '\n')
    return 0


def cmd_inspect(args, settings: ConfigManager) -> int:
    config = _selection_config(args, settings)
    ds = read_dataset(args.input, args.labels)
    prepared = znormalize(ds) if config.znormalize else ds
    prototypes = compute_prototypes(prepared, config.prototype_kind)
    dm = build_distance_matrix(prototypes)

    out_dir = Path(args.out)
    paths = {
        'distances': os.fspath(out_dir / f"{ds.name}_distances.csv"),
        'scores': os.fspath(out_dir / f"{ds.name}_scores.csv"),
    }
    save_distance_csv(dm, paths['distances'])
    scores = pd.DataFrame({
        'channel': np.arange(ds.n_channels),
        'name': list(ds.names),
        'score': channel_sums(dm),
        'magnitude': prototypes.magnitudes(),
    })
    save_table(scores, paths['scores'])

    if args.pretty:
        top = scores.sort_values('score', ascending=False, kind='stable').head(10)
        print(top.to_string(index=False), file=sys.stderr)
    sys.stdout.write(dump_json(paths, args.pretty) + '\n')
    return 0


def cmd_summarize(args, settings: ConfigManager) -> int:
    reports = load_reports([load_json(path) for path in args.input])
    summary = summarize(reports)
    if args.out:
        save_table(summary, args.out)
    else:
        sys.stdout.write(summary_csv(summary))
    if args.pretty:
        print(render_summary(summary), file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = ConfigManager(args.config) if args.config else config_manager.config
    configure_logging(settings, args.verbose)

    try:
        return args.handler(args, settings)
    except ChannelSelectionError as e:
        print(describe(e), file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"IoFailure: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    # Windows 멀티프로세싱 지원 (전진 선택 병렬 평가)
    multiprocessing.freeze_support()
    sys.exit(main())
