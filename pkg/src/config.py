#!/usr/bin/env python3
"""
Sperner 重建工具 配置管理模組
==============================

提供結構化的配置管理，支援預設值、JSON 配置檔案與命令列覆蓋。
本工具不讀取任何環境變數。

主要功能：
    - 各組件配置類別（搜尋上限、平行計算、輸出、日誌）
    - 配置驗證機制
    - 檔案載入與命令列覆蓋
    - 配置序列化與反序列化

使用範例：
    >>> from src.config import load_config
    >>> config = load_config()  # 使用預設值
    >>> config = load_config("config.json")  # 從檔案載入
    >>> config.apply_overrides(workers=4, allow_large=True)
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

logger = logging.getLogger(__name__)


# ============================================================================
# 配置資料類別
# ============================================================================


@dataclass
class SearchConfig:
    """
    搜尋與列舉上限配置。

    Attributes:
        canonical_max_n: 精確正規形式搜尋允許的最大基底集合
        exhaustive_max_n: 窮舉列舉允許的最大基底集合
        allow_large: 是否放寬窮舉列舉上限（上限仍受 canonical_max_n 限制）
        display_max_n: 簡寫輸出使用附錄式標籤的最大基底集合
        function_max_permutations: 函數正規鍵允許嘗試的最大參數置換數
        function_space_max: 函數窮舉重建允許的最大函數空間 |B|^(|A|^n)
    """

    canonical_max_n: int = 16
    exhaustive_max_n: int = 5
    allow_large: bool = False
    display_max_n: int = 7
    function_max_permutations: int = 362880
    function_space_max: int = 65536

    def validate(self) -> bool:
        """驗證配置是否有效。"""
        return not self.get_errors()

    def get_errors(self) -> list[str]:
        """返回配置中的具體錯誤列表。"""
        errors = []
        if not 1 <= self.canonical_max_n <= 64:
            errors.append(f"search.canonical_max_n 超出範圍 (1-64): {self.canonical_max_n}")
        if not 1 <= self.exhaustive_max_n <= self.canonical_max_n:
            errors.append(
                f"search.exhaustive_max_n 超出範圍 (1-{self.canonical_max_n}): {self.exhaustive_max_n}"
            )
        if not 0 <= self.display_max_n <= 9:
            errors.append(f"search.display_max_n 超出範圍 (0-9): {self.display_max_n}")
        if self.function_max_permutations < 1:
            errors.append(f"search.function_max_permutations 必須 >= 1: {self.function_max_permutations}")
        if self.function_space_max < 1:
            errors.append(f"search.function_space_max 必須 >= 1: {self.function_space_max}")
        return errors


@dataclass
class ParallelConfig:
    """
    平行計算配置。

    Attributes:
        workers: 牌組計算使用的工作程序數（1 表示序列計算）
        min_items_per_worker: 每個工作程序至少分配的項目數，項目過少時改為序列計算
    """

    workers: int = 1
    min_items_per_worker: int = 8

    def validate(self) -> bool:
        """驗證配置是否有效。"""
        return not self.get_errors()

    def get_errors(self) -> list[str]:
        """返回配置中的具體錯誤列表。"""
        errors = []
        if not 1 <= self.workers <= 64:
            errors.append(f"parallel.workers 超出範圍 (1-64): {self.workers}")
        if self.min_items_per_worker < 1:
            errors.append(f"parallel.min_items_per_worker 必須 >= 1: {self.min_items_per_worker}")
        return errors


@dataclass
class OutputConfig:
    """
    輸出配置。

    Attributes:
        primed_labels: 族系統是否以 1..m、1′..m′、0、0′ 顯示
        json_indent: JSON 輸出縮排
        show_trivial: 附錄表格是否包含 ∅ 與 {∅}
    """

    primed_labels: bool = False
    json_indent: int = 2
    show_trivial: bool = False

    def validate(self) -> bool:
        """驗證配置是否有效。"""
        return not self.get_errors()

    def get_errors(self) -> list[str]:
        """返回配置中的具體錯誤列表。"""
        errors = []
        if not 0 <= self.json_indent <= 8:
            errors.append(f"output.json_indent 超出範圍 (0-8): {self.json_indent}")
        return errors


@dataclass
class LoggingConfig:
    """
    日誌配置。

    Attributes:
        level: 日誌級別
        format: 日誌格式
        file_path: 日誌檔案路徑
        max_file_size: 檔案大小輪轉閾值（位元組）
        backup_count: 保留的備份檔案數量
        console_output: 是否輸出到控制台（stderr）
        rotation_type: 輪轉類型（"time" 或 "size"）
        rotation_interval: 時間輪轉間隔
        module_levels: 個別模組的日誌級別
    """

    level: str = "WARNING"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    file_path: Optional[str] = None
    max_file_size: int = 10 * 1024 * 1024  # 10MB
    backup_count: int = 7
    console_output: bool = True
    rotation_type: str = "size"
    rotation_interval: str = "midnight"
    module_levels: Dict[str, str] = field(default_factory=lambda: {
        "src.iso": "WARNING",
        "performance": "INFO",
    })

    VALID_LEVELS = {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}
    VALID_ROTATION_TYPES = {"time", "size"}
    VALID_INTERVALS = {"midnight", "H", "D", "W0", "W1", "W2", "W3", "W4", "W5", "W6"}

    def validate(self) -> bool:
        """驗證配置是否有效。"""
        return not self.get_errors()

    def get_errors(self) -> list[str]:
        """返回配置中的具體錯誤列表。"""
        errors = []
        if self.level.upper() not in self.VALID_LEVELS:
            errors.append(f"logging.level 無效: {self.level}（有效值: {', '.join(sorted(self.VALID_LEVELS))}）")
        if self.rotation_type not in self.VALID_ROTATION_TYPES:
            errors.append(f"logging.rotation_type 無效: {self.rotation_type}")
        if self.rotation_type == "time" and self.rotation_interval not in self.VALID_INTERVALS:
            errors.append(f"logging.rotation_interval 無效: {self.rotation_interval}")
        if self.backup_count < 1:
            errors.append(f"logging.backup_count 必須 >= 1: {self.backup_count}")
        for name, level in self.module_levels.items():
            if str(level).upper() not in self.VALID_LEVELS:
                errors.append(f"logging.module_levels[{name}] 無效: {level}")
        return errors


@dataclass
class ReconstructionConfig:
    """
    完整的工具配置。

    整合所有子配置模組，提供統一的配置管理介面。

    Attributes:
        search: 搜尋與列舉上限
        parallel: 平行計算
        output: 輸出格式
        logging: 日誌
    """

    search: SearchConfig = field(default_factory=SearchConfig)
    parallel: ParallelConfig = field(default_factory=ParallelConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    SECTIONS = ("search", "parallel", "output", "logging")

    @classmethod
    def from_file(cls, config_path: str) -> "ReconstructionConfig":
        """
        從 JSON 配置檔案載入配置。

        Args:
            config_path: 配置檔案路徑

        Returns:
            ReconstructionConfig: 載入的配置實例（檔案不存在時返回預設配置）

        Raises:
            ConfigurationError: 檔案存在但不是合法的 JSON 物件
        """
        from .exceptions import ConfigurationError

        config_file = Path(config_path)
        if not config_file.exists():
            logger.warning(f"配置檔案不存在: {config_path}，使用預設配置")
            return cls()

        try:
            with open(config_file, "r", encoding="utf-8") as f:
                config_data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"載入配置檔案失敗: {e}", config_field=config_path, cause=e)

        if not isinstance(config_data, dict):
            raise ConfigurationError("配置檔案頂層必須是 JSON 物件", config_field=config_path)

        config = cls()
        for section in cls.SECTIONS:
            _apply_config_section(getattr(config, section), config_data.get(section, {}))

        unknown = sorted(set(config_data) - set(cls.SECTIONS))
        if unknown:
            logger.warning(f"忽略未知的配置區段: {', '.join(unknown)}")

        logger.info(f"成功載入配置檔案: {config_path}")
        return config

    def apply_overrides(self, **overrides: Any) -> None:
        """
        以命令列參數覆蓋配置（值為 None 的參數不覆蓋）。

        支援的鍵：workers、allow_large、log_level、log_file、primed_labels、show_trivial。
        """
        mapping = {
            "workers": (self.parallel, "workers"),
            "allow_large": (self.search, "allow_large"),
            "log_level": (self.logging, "level"),
            "log_file": (self.logging, "file_path"),
            "primed_labels": (self.output, "primed_labels"),
            "show_trivial": (self.output, "show_trivial"),
        }
        for key, value in overrides.items():
            if value is None or key not in mapping:
                continue
            target, attribute = mapping[key]
            setattr(target, attribute, value)

    def validate(self) -> bool:
        """驗證所有配置。"""
        return not self.get_errors()

    def get_errors(self) -> list[str]:
        """
        收集所有子配置的具體錯誤列表。

        Returns:
            list[str]: 錯誤訊息列表，空列表表示全部通過
        """
        errors = []
        for section in self.SECTIONS:
            errors.extend(getattr(self, section).get_errors())
        return errors

    def save_to_file(self, config_path: str) -> bool:
        """
        將配置保存到 JSON 檔案。

        Args:
            config_path: 目標檔案路徑

        Returns:
            bool: 保存成功返回 True
        """
        try:
            config_data = {section: asdict(getattr(self, section)) for section in self.SECTIONS}

            config_file = Path(config_path)
            config_file.parent.mkdir(parents=True, exist_ok=True)

            with open(config_file, "w", encoding="utf-8") as f:
                json.dump(config_data, f, indent=2, ensure_ascii=False)

            logger.info(f"配置已保存至: {config_path}")
            return True

        except OSError as e:
            logger.error(f"保存配置檔案失敗: {e}")
            return False

    def get_summary(self) -> Dict[str, Any]:
        """
        獲取配置摘要（用於日誌記錄）。

        Returns:
            dict: 配置摘要
        """
        return {
            "canonical_max_n": self.search.canonical_max_n,
            "exhaustive_max_n": self.search.exhaustive_max_n,
            "allow_large": self.search.allow_large,
            "workers": self.parallel.workers,
            "primed_labels": self.output.primed_labels,
            "log_level": self.logging.level,
            "log_file": self.logging.file_path or "(未啟用)",
        }


# ============================================================================
# 輔助函數
# ============================================================================


def _apply_config_section(target: Any, source: Dict[str, Any]) -> None:
    """
    將配置字典套用到目標物件。

    Args:
        target: 目標配置物件
        source: 來源配置字典
    """
    for key, value in source.items():
        if hasattr(target, key):
            setattr(target, key, value)
        else:
            logger.warning(f"忽略未知的配置項: {type(target).__name__}.{key}")


def load_config(config_path: Optional[str] = None) -> ReconstructionConfig:
    """
    載入配置的便利函數。

    載入順序：
        1. 預設值
        2. 有 config_path 時以 JSON 檔案覆蓋
        3. 呼叫端再以 apply_overrides 套用命令列參數

    Args:
        config_path: 可選的配置檔案路徑

    Returns:
        ReconstructionConfig: 載入的配置實例
    """
    if config_path:
        config = ReconstructionConfig.from_file(config_path)
    else:
        config = ReconstructionConfig()

    errors = config.get_errors()
    if errors:
        for err in errors:
            logger.warning(f"配置問題: {err}")
        logger.warning("配置驗證失敗，某些功能可能無法正常運作")

    return config


# 預設配置實例（供模組直接使用）
default_config = ReconstructionConfig()
