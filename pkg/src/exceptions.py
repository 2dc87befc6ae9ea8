#!/usr/bin/env python3
"""
Sperner 重建工具 異常處理模組
==============================

提供結構化的異常類別和錯誤處理工具。

此模組定義了重建工具專用的異常階層，
支援錯誤分類、詳細資訊追蹤、JSON 序列化與命令列結束碼對應。

異常階層：
    ReconstructionError（基礎類別）
    ├── ConfigurationError        - 配置錯誤
    ├── ValidationError           - 輸入驗證錯誤
    │   ├── GroundSetError        - 基底集合大小或元素超出範圍
    │   ├── PermutationError      - 置換不是雙射或大小不符
    │   ├── IdentPairError        - 識別對不合法
    │   ├── AntichainError        - 違反反鏈（Sperner）條件
    │   ├── FamilyParameterError  - 族參數不合法
    │   ├── FunctionShapeError    - 函數表格形狀或值域錯誤
    │   └── ParseError            - 檔案或簡寫格式無法解析
    └── ResourceCapError          - 超出資源上限
        ├── CanonicalizationCapError - 正規形式搜尋超出上限
        └── EnumerationCapError      - 窮舉列舉超出上限
"""

import traceback
from typing import Any, Dict, Optional


class ReconstructionError(Exception):
    """
    重建工具基礎異常類別。

    所有工具相關的異常都繼承自此類別，
    提供統一的錯誤資訊格式和序列化功能。

    Attributes:
        message: 錯誤訊息
        error_code: 錯誤代碼
        details: 額外的錯誤詳情
        cause: 原始異常（如有）
        traceback_str: 堆疊追蹤字串
    """

    def __init__(
        self,
        message: str,
        error_code: str = "RECONSTRUCTION_ERROR",
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        self.cause = cause
        self.traceback_str = traceback.format_exc() if cause else None

    def to_dict(self) -> Dict[str, Any]:
        """
        轉換為字典格式（用於 JSON 輸出）。

        Returns:
            dict: 包含錯誤資訊的字典
        """
        error_dict = {
            "error": True,
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
        }

        if self.cause:
            error_dict["cause"] = str(self.cause)
            error_dict["cause_type"] = type(self.cause).__name__

        if self.traceback_str:
            tb = self.traceback_str
            error_dict["traceback"] = tb[:1000] + "..." if len(tb) > 1000 else tb

        return error_dict

    def __str__(self) -> str:
        """返回格式化的錯誤字串。"""
        parts = [f"[{self.error_code}] {self.message}"]

        if self.details:
            parts.append(f"Details: {self.details}")

        if self.cause:
            parts.append(f"Caused by: {self.cause}")

        return " | ".join(parts)


# =============================================================================
# 特定異常類別
# =============================================================================


class ConfigurationError(ReconstructionError):
    """
    配置相關錯誤。

    當配置檔案無效或設定值不正確時拋出。
    """

    def __init__(
        self,
        message: str,
        config_field: Optional[str] = None,
        **kwargs,
    ):
        details = {"config_field": config_field} if config_field else {}
        super().__init__(message, error_code="CONFIG_ERROR", details=details, **kwargs)


class ValidationError(ReconstructionError):
    """
    輸入驗證錯誤。

    當輸入資料不符合預期格式或前置條件時拋出。
    """

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        value: Optional[Any] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})
        details.update(
            {
                "field": field,
                "value": str(value) if value is not None else None,
            }
        )
        error_code = kwargs.pop("error_code", "VALIDATION_ERROR")
        super().__init__(message, error_code=error_code, details=details, **kwargs)


class GroundSetError(ValidationError):
    """基底集合大小超出 1..64，或元素標籤超出基底集合。"""

    def __init__(
        self,
        message: str,
        n: Optional[int] = None,
        element: Optional[int] = None,
        **kwargs,
    ):
        super().__init__(
            message,
            field="ground_set",
            value=n,
            error_code="GROUND_SET_ERROR",
            details={"n": n, "element": element},
            **kwargs,
        )


class PermutationError(ValidationError):
    """置換不是 1..n 上的雙射，或與集合系統的大小不符。"""

    def __init__(self, message: str, images: Optional[Any] = None, **kwargs):
        super().__init__(
            message, field="permutation", value=images, error_code="PERMUTATION_ERROR", **kwargs
        )


class IdentPairError(ValidationError):
    """識別對不滿足 1 ≤ i < j ≤ n。"""

    def __init__(
        self,
        message: str,
        pair: Optional[Any] = None,
        n: Optional[int] = None,
        **kwargs,
    ):
        super().__init__(
            message,
            field="ident_pair",
            value=pair,
            error_code="IDENT_PAIR_ERROR",
            details={"n": n},
            **kwargs,
        )


class AntichainError(ValidationError):
    """
    反鏈條件錯誤。

    Sperner 系統中有區塊包含另一區塊，或要求單調函數時輸入不單調。
    """

    def __init__(self, message: str, witness: Optional[Any] = None, **kwargs):
        super().__init__(
            message, field="antichain", value=witness, error_code="ANTICHAIN_ERROR", **kwargs
        )


class FamilyParameterError(ValidationError):
    """族建構參數不合法（例如 𝒮 族要求奇數 m）。"""

    def __init__(
        self,
        message: str,
        family: Optional[str] = None,
        parameters: Optional[Dict[str, Any]] = None,
        **kwargs,
    ):
        super().__init__(
            message,
            field="family",
            value=family,
            error_code="FAMILY_PARAMETER_ERROR",
            details={"parameters": parameters or {}},
            **kwargs,
        )


class FunctionShapeError(ValidationError):
    """函數表格形狀、值域或載體大小不符合要求。"""

    def __init__(self, message: str, field: Optional[str] = None, value: Optional[Any] = None, **kwargs):
        super().__init__(
            message, field=field or "function", value=value, error_code="FUNCTION_SHAPE_ERROR", **kwargs
        )


class ParseError(ValidationError):
    """
    解析錯誤。

    當集合系統或函數檔案無法解析時拋出。
    """

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        line: Optional[int] = None,
        **kwargs,
    ):
        super().__init__(
            message,
            field="source",
            value=source,
            error_code="PARSE_ERROR",
            details={"line": line},
            **kwargs,
        )


class ResourceCapError(ReconstructionError):
    """
    資源上限錯誤。

    當要求的計算超出設定的搜尋或列舉上限時拋出。
    """

    def __init__(
        self,
        message: str,
        limit_name: str,
        value: Optional[int] = None,
        limit: Optional[int] = None,
        **kwargs,
    ):
        details = {"limit_name": limit_name, "value": value, "limit": limit}
        error_code = kwargs.pop("error_code", "RESOURCE_CAP")
        super().__init__(message, error_code=error_code, details=details, **kwargs)


class CanonicalizationCapError(ResourceCapError):
    """基底集合超出精確正規形式搜尋的上限。"""

    def __init__(self, message: str, value: Optional[int] = None, limit: Optional[int] = None, **kwargs):
        super().__init__(
            message,
            limit_name="canonical_max_n",
            value=value,
            limit=limit,
            error_code="CANONICALIZATION_CAP",
            **kwargs,
        )


class EnumerationCapError(ResourceCapError):
    """基底集合超出窮舉列舉的上限。"""

    def __init__(self, message: str, value: Optional[int] = None, limit: Optional[int] = None, **kwargs):
        super().__init__(
            message,
            limit_name="exhaustive_max_n",
            value=value,
            limit=limit,
            error_code="ENUMERATION_CAP",
            **kwargs,
        )


# =============================================================================
# 異常處理工具函數
# =============================================================================


def handle_exception(exc: Exception, context: str = "") -> ReconstructionError:
    """
    將一般異常轉換為重建工具異常。

    Args:
        exc: 原始異常
        context: 額外的上下文資訊

    Returns:
        ReconstructionError: 對應類型的工具異常
    """
    if isinstance(exc, ReconstructionError):
        return exc

    prefix = f"{context}: " if context else ""

    if isinstance(exc, (ValueError, KeyError, IndexError)):
        return ParseError(f"{prefix}輸入格式錯誤: {exc}", cause=exc)

    if isinstance(exc, OSError):
        return ParseError(f"{prefix}無法讀取輸入: {exc}", source=getattr(exc, "filename", None), cause=exc)

    if isinstance(exc, MemoryError):
        return ResourceCapError(f"{prefix}記憶體不足: {exc}", limit_name="memory", cause=exc)

    return ReconstructionError(f"{prefix}{exc}", error_code="UNKNOWN_ERROR", cause=exc)


def create_error_response(exc: Exception, context: str = "") -> Dict[str, Any]:
    """
    建立標準化的錯誤響應。

    Args:
        exc: 異常物件
        context: 額外的上下文資訊

    Returns:
        dict: 標準化的錯誤響應字典
    """
    return handle_exception(exc, context).to_dict()


def exit_code_for(exc: Exception) -> int:
    """
    將異常對應到命令列結束碼。

    Returns:
        int: 3 表示超出資源上限，其餘錯誤為 2
    """
    if isinstance(handle_exception(exc), ResourceCapError):
        return 3
    return 2


# =============================================================================
# 預定義的常見錯誤
# =============================================================================


class CommonErrors:
    """
    常見錯誤的工廠類別。

    提供建立常見錯誤的便利方法。
    """

    @staticmethod
    def size_mismatch(n_a: int, n_b: int) -> ValidationError:
        """建立基底集合大小不符錯誤。"""
        return ValidationError(
            f"兩個集合系統的基底集合大小不同: {n_a} != {n_b}",
            field="n",
            value=(n_a, n_b),
        )

    @staticmethod
    def deck_needs_two_elements(n: int) -> ValidationError:
        """建立 Sperner 牌組需要 n ≥ 2 的錯誤。"""
        return ValidationError(
            f"Sperner 牌組需要至少兩個元素才能識別: n={n}",
            field="n",
            value=n,
        )

    @staticmethod
    def canonical_cap(n: int, limit: int) -> CanonicalizationCapError:
        """建立正規形式搜尋超限錯誤。"""
        return CanonicalizationCapError(
            f"基底集合過大，無法進行精確正規形式搜尋: n={n} > {limit}",
            value=n,
            limit=limit,
        )

    @staticmethod
    def enumeration_cap(n: int, limit: int) -> EnumerationCapError:
        """建立窮舉列舉超限錯誤。"""
        return EnumerationCapError(
            f"窮舉列舉僅支援 n ≤ {limit}（可用 --allow-large 放寬）: n={n}",
            value=n,
            limit=limit,
        )

    @staticmethod
    def function_space_cap(size: int, limit: int) -> ResourceCapError:
        """建立函數空間超限錯誤。"""
        return ResourceCapError(
            f"函數窮舉僅支援 {limit} 個以內的函數（可用 --allow-large 放寬）: {size}",
            limit_name="function_space_max",
            value=size,
            limit=limit,
        )

    @staticmethod
    def non_boolean(domain: int, codomain: int) -> FunctionShapeError:
        """建立非布林函數錯誤。"""
        return FunctionShapeError(
            f"此運算僅適用於布林函數: |A|={domain}, |B|={codomain}",
            field="carrier",
            value=(domain, codomain),
        )
