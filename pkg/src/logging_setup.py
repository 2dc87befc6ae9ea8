#!/usr/bin/env python3
"""
Sperner 重建工具 日誌設置模組
==============================

提供結構化的日誌記錄與效能監控。

命令列輸出保留給 stdout，日誌一律寫入 stderr 或日誌檔案，
確保同一命令的輸出逐位元組穩定。

主要功能：
    - 自訂日誌格式器（錯誤級別顯示檔案與行號）
    - 時間或大小輪轉的檔案日誌
    - 個別模組日誌級別控制
    - 操作日誌記錄工具函數
    - 效能監控日誌記錄器（含常駐記憶體讀數）

使用範例：
    >>> from src.logging_setup import setup_logging, log_operation_start
    >>> from src.config import LoggingConfig
    >>>
    >>> setup_logging(LoggingConfig(level="INFO"))
    >>> log_operation_start("sperner_deck", n=6)
"""

import logging
import logging.handlers
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Optional

import psutil

from .config import LoggingConfig


class ReconstructionFormatter(logging.Formatter):
    """
    自訂日誌格式器。

    根據日誌級別選擇不同的格式：
    - 錯誤級別（ERROR、CRITICAL）：包含檔案路徑和行號
    - 其他級別：使用標準格式
    """

    DEFAULT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    ERROR_FORMAT = (
        "%(asctime)s - %(name)s - %(levelname)s - [%(pathname)s:%(lineno)d] - %(message)s"
    )

    def __init__(self, fmt: Optional[str] = None):
        super().__init__()
        self._default = logging.Formatter(fmt or self.DEFAULT_FORMAT)
        self._error = logging.Formatter(self.ERROR_FORMAT)

    def format(self, record: logging.LogRecord) -> str:
        """根據日誌級別格式化記錄。"""
        if record.levelno >= logging.ERROR:
            return self._error.format(record)
        return self._default.format(record)


class ReconstructionLogger:
    """
    重建工具專用日誌管理器。

    負責初始化和配置日誌系統，包括控制台輸出、
    檔案輸出和個別模組日誌級別控制。

    Attributes:
        config: 日誌配置物件
    """

    def __init__(self, config: LoggingConfig):
        self.config = config
        self._setup_logging()

    def _setup_logging(self) -> None:
        """設置日誌系統。"""
        level = getattr(logging, self.config.level.upper(), logging.WARNING)
        root_logger = logging.getLogger()
        root_logger.setLevel(level)

        # 清除現有處理器
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)

        formatter = ReconstructionFormatter(self.config.format)

        if self.config.console_output:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(formatter)
            console_handler.setLevel(level)
            root_logger.addHandler(console_handler)

        if self.config.file_path:
            self._setup_file_handler(formatter, level)

        self._setup_module_loggers()

    def _setup_file_handler(self, formatter: logging.Formatter, level: int) -> None:
        """
        設置檔案日誌處理器。

        支援時間輪轉和大小輪轉兩種策略。
        """
        try:
            log_path = Path(self.config.file_path)
            log_path.parent.mkdir(parents=True, exist_ok=True)

            if self.config.rotation_type == "time":
                file_handler = logging.handlers.TimedRotatingFileHandler(
                    filename=log_path,
                    when=self.config.rotation_interval,
                    interval=1,
                    backupCount=self.config.backup_count,
                    encoding="utf-8",
                )
                rotation_info = (
                    f"時間輪轉: {self.config.rotation_interval}，"
                    f"保留 {self.config.backup_count} 個檔案"
                )
            else:
                file_handler = logging.handlers.RotatingFileHandler(
                    filename=log_path,
                    maxBytes=self.config.max_file_size,
                    backupCount=self.config.backup_count,
                    encoding="utf-8",
                )
                size_mb = self.config.max_file_size / (1024 * 1024)
                rotation_info = (
                    f"大小輪轉: {size_mb:.1f}MB，"
                    f"保留 {self.config.backup_count} 個檔案"
                )

            file_handler.setFormatter(formatter)
            file_handler.setLevel(level)
            logging.getLogger().addHandler(file_handler)

            logging.info(f"日誌檔案設置完成: {log_path}")
            logging.info(f"日誌輪轉設定: {rotation_info}")

        except OSError as e:
            logging.error(f"設置檔案日誌處理器失敗: {e}")

    def _setup_module_loggers(self) -> None:
        """設置個別模組的日誌級別（從配置讀取）。"""
        for logger_name, level_str in self.config.module_levels.items():
            level = getattr(logging, str(level_str).upper(), logging.WARNING)
            logging.getLogger(logger_name).setLevel(level)


def setup_logging(config: LoggingConfig) -> ReconstructionLogger:
    """
    設置日誌系統的便利函數。

    Args:
        config: 日誌配置物件

    Returns:
        ReconstructionLogger: 日誌管理器實例
    """
    return ReconstructionLogger(config)


# =============================================================================
# 日誌記錄工具函數
# =============================================================================


def log_system_info() -> None:
    """記錄系統啟動資訊。"""
    logger = logging.getLogger("system")
    logger.info("=" * 50)
    logger.info("Sperner 重建工具啟動")
    logger.info(f"啟動時間: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    logger.info(f"Python: {sys.version.split()[0]} | CPU: {os.cpu_count()}")
    logger.info("=" * 50)


def log_config_summary(config_summary: dict) -> None:
    """
    記錄配置摘要。

    Args:
        config_summary: 配置摘要字典
    """
    logger = logging.getLogger("config")
    logger.info("系統配置摘要:")
    for key, value in config_summary.items():
        logger.info(f"  {key}: {value}")


def _join_details(kwargs: dict) -> str:
    return " | ".join(f"{k}={v}" for k, v in kwargs.items())


def log_operation_start(operation: str, **kwargs: Any) -> None:
    """
    記錄操作開始。

    Args:
        operation: 操作名稱
        **kwargs: 額外的詳情
    """
    logger = logging.getLogger("operations")
    details = _join_details(kwargs)
    message = f"開始操作: {operation}"
    if details:
        message += f" | {details}"
    logger.info(message)


def log_operation_success(
    operation: str, duration: Optional[float] = None, **kwargs: Any
) -> None:
    """
    記錄操作成功。

    Args:
        operation: 操作名稱
        duration: 操作耗時（秒）
        **kwargs: 額外的詳情
    """
    logger = logging.getLogger("operations")
    details = _join_details(kwargs)
    duration_str = f" | 耗時: {duration:.2f}s" if duration is not None else ""
    message = f"操作成功: {operation}{duration_str}"
    if details:
        message += f" | {details}"
    logger.info(message)


def log_operation_error(operation: str, error: Exception, **kwargs: Any) -> None:
    """
    記錄操作錯誤。

    Args:
        operation: 操作名稱
        error: 錯誤例外
        **kwargs: 額外的詳情
    """
    logger = logging.getLogger("operations")
    details = _join_details(kwargs)
    message = f"操作失敗: {operation} | 錯誤: {error}"
    if details:
        message += f" | {details}"
    logger.error(message)


# =============================================================================
# 效能監控
# =============================================================================


def current_rss_mb() -> float:
    """返回目前程序的常駐記憶體（MB）。"""
    return psutil.Process(os.getpid()).memory_info().rss / (1024 * 1024)


class PerformanceLogger:
    """
    效能監控日誌記錄器。

    專門用於記錄正規形式搜尋、牌組計算與窮舉列舉的效能指標。
    """

    def __init__(self):
        self.logger = logging.getLogger("performance")

    def log_search_performance(self, n: int, blocks: int, nodes: int, duration: float) -> None:
        """
        記錄一次正規形式搜尋。

        Args:
            n: 基底集合大小
            blocks: 區塊數
            nodes: 搜尋樹節點數
            duration: 耗時（秒）
        """
        self.logger.debug(
            f"正規形式搜尋 | n={n} | 區塊數: {blocks} | 節點數: {nodes} | 耗時: {duration:.3f}s"
        )

    def log_deck_performance(self, kind: str, cards: int, workers: int, duration: float) -> None:
        """
        記錄牌組計算效能。

        Args:
            kind: 牌組種類（sperner、hypergraph、function）
            cards: 卡片數
            workers: 工作程序數
            duration: 耗時（秒）
        """
        avg_time = duration / cards if cards > 0 else 0
        self.logger.info(
            f"牌組計算效能 | 種類: {kind} | 卡片數: {cards} | 工作程序: {workers} | "
            f"總耗時: {duration:.2f}s | 平均: {avg_time:.3f}s/卡"
        )

    def log_enumeration_performance(
        self, n: int, antichains: int, classes: int, duration: float
    ) -> None:
        """
        記錄窮舉列舉效能。

        Args:
            n: 基底集合大小
            antichains: 列舉的帶標籤反鏈數
            classes: 同構類數
            duration: 耗時（秒）
        """
        self.logger.info(
            f"列舉效能 | n={n} | 反鏈數: {antichains} | 同構類: {classes} | "
            f"耗時: {duration:.2f}s | 記憶體: {current_rss_mb():.1f}MB"
        )

    def log_function_space_performance(self, arity: int, functions: int, decks: int, duration: float) -> None:
        """記錄函數空間的牌組分組效能。"""
        self.logger.info(
            f"函數空間效能 | n={arity} | 函數數: {functions} | 相異牌組: {decks} | "
            f"耗時: {duration:.2f}s | 記憶體: {current_rss_mb():.1f}MB"
        )


# 全域效能監控實例
performance_logger = PerformanceLogger()
