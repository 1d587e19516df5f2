"""
설정 관리 (config.json)
- 프로토타입 종류, 전진 선택, 분류기, 합성 데이터, 로그 설정을 JSON 파일로 저장/로드
- 파일이 없으면 기본값만 사용 (로드 시 파일을 만들지 않음)
"""

import copy
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List

logger = logging.getLogger(__name__)

CONFIG_ENV = "CHANSEL_CONFIG"
DEFAULT_CONFIG_PATH = "config.json"


class ConfigManager:
    """프로그램 설정을 JSON 파일로 관리하는 클래스"""

    def __init__(self, config_path: str = None):
        """
        Args:
            config_path: 설정 파일 경로 (None이면 CHANSEL_CONFIG 환경변수, 없으면 config.json)
        """
        if config_path is None:
            config_path = os.environ.get(CONFIG_ENV, DEFAULT_CONFIG_PATH)
        self.config_path = Path(config_path)
        self.config = self._load_config()

    def _get_default_config(self) -> Dict[str, Any]:
        """기본 설정값 반환"""
        return {
            "selection_settings": {
                "prototype_kind": "mean",  # mean 또는 median
                "znormalize": False,  # 프로토타입 계산 전 인스턴스별 z-정규화
                "seed": 0
            },
            "greedy_settings": {
                "clf": "nn1",  # 전진 선택 평가 분류기
                "folds": 5,
                "patience": 2
            },
            "classifier_settings": {
                "default_clf": "nn1",
                "rocket_kernels": 500,
                "ridge_alphas": [0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0],
                "cv_folds": 5
            },
            "synth_settings": {
                "channels": 120,
                "informative": 5,
                "classes": 3,
                "per_class": 20,
                "length": 100,
                "sigma": 1.0,
                "effect": 1.5,
                "seed": 7
            },
            "runtime_settings": {
                "threads": 1
            },
            "log_settings": {
                "level": "WARNING",
                "history_dir": "logs",  # 실행 이력 CSV 저장 폴더
                "history_enabled": True
            }
        }

    def _load_config(self) -> Dict[str, Any]:
        """설정 파일 로드"""
        default_config = self._get_default_config()
        if not self.config_path.exists():
            return default_config

        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                user_config = json.load(f)
        except (json.JSONDecodeError, OSError) as e:
            logger.warning("설정 파일 로드 실패 (%s): %s - 기본값 사용", self.config_path, e)
            return default_config

        if not isinstance(user_config, dict):
            logger.warning("설정 파일 최상위가 객체가 아닙니다 (%s) - 기본값 사용", self.config_path)
            return default_config

        # 기본 설정과 병합 (새로운 키가 추가된 경우 대응)
        return self._merge_config(default_config, user_config)

    def _merge_config(self, default: Dict[str, Any], user: Dict[str, Any]) -> Dict[str, Any]:
        """기본 설정과 사용자 설정을 병합"""
        result = copy.deepcopy(default)

        for key, value in user.items():
            if key in result and isinstance(result[key], dict) and isinstance(value, dict):
                result[key] = self._merge_config(result[key], value)
            else:
                result[key] = value

        return result

    def _save_config(self, config: Dict[str, Any], path: Path = None) -> bool:
        """설정을 파일에 저장"""
        path = Path(path) if path is not None else self.config_path
        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(config, f, indent=2, ensure_ascii=False)
            return True
        except OSError as e:
            logger.warning("설정 파일 저장 실패 (%s): %s", path, e)
            return False

    def save(self) -> bool:
        return self._save_config(self.config)

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        중첩된 키로 설정값 가져오기

        Args:
            key_path: "category.key" 형식의 키 경로
            default: 기본값

        Example:
            config.get("selection_settings.prototype_kind")
        """
        value = self.config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, key_path: str, value: Any, save: bool = True):
        """
        중첩된 키로 설정값 저장

        Args:
            key_path: "category.key" 형식의 키 경로
            value: 저장할 값
            save: 즉시 파일에 저장할지 여부
        """
        keys = key_path.split('.')
        current = self.config

        # 마지막 키를 제외하고 중첩 딕셔너리 생성
        for key in keys[:-1]:
            if not isinstance(current.get(key), dict):
                current[key] = {}
            current = current[key]

        current[keys[-1]] = value

        if save:
            self._save_config(self.config)

    def get_prototype_kind(self) -> str:
        return self.get("selection_settings.prototype_kind", "mean")

    def get_seed(self) -> int:
        return int(self.get("selection_settings.seed", 0))

    def get_default_clf(self) -> str:
        return self.get("classifier_settings.default_clf", "nn1")

    def get_threads(self) -> int:
        return int(self.get("runtime_settings.threads", 1))

    def get_ridge_alphas(self) -> List[float]:
        return [float(a) for a in self.get("classifier_settings.ridge_alphas", [])]

    def get_log_level(self) -> str:
        return str(self.get("log_settings.level", "WARNING")).upper()

    def get_history_dir(self) -> str:
        """실행 이력 폴더 (None이면 이력 기록 안 함)"""
        if not self.get("log_settings.history_enabled", True):
            return None
        return self.get("log_settings.history_dir", "logs")

    def export_config(self, export_path: str) -> bool:
        """설정을 다른 파일로 내보내기"""
        return self._save_config(self.config, Path(export_path))

    def import_config(self, import_path: str) -> bool:
        """다른 설정 파일에서 가져오기"""
        try:
            with open(import_path, 'r', encoding='utf-8') as f:
                imported_config = json.load(f)
        except (json.JSONDecodeError, OSError) as e:
            logger.warning("설정 가져오기 실패 (%s): %s", import_path, e)
            return False

        # 기본 설정과 병합
        self.config = self._merge_config(self._get_default_config(), imported_config)
        return self._save_config(self.config)


# 전역 설정 관리자 인스턴스
config = ConfigManager()
