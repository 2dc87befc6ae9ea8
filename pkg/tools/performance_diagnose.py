#!/usr/bin/env python3
"""
Sperner 重建工具 性能診斷工具
==============================

逐項計時正規形式搜尋、牌組計算與窮舉列舉，找出最耗時的階段。

用法：
    uv run python tools/performance_diagnose.py
    uv run python tools/performance_diagnose.py --json
    uv run python tools/performance_diagnose.py --family-m 5 --enumerate-n 5
    uv run python tools/performance_diagnose.py --profile --workers 4
"""

import argparse
import cProfile
import io
import json
import pstats
import sys
import time
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.config import load_config
from src.enumeration import deck_table, find_nonreconstructible
from src.families import build_M, build_U
from src.iso import canonical_form
from src.logging_setup import current_rss_mb, setup_logging
from src.minors import hypergraph_deck, sperner_deck


class StageResult:
    """單一診斷階段的結果。"""

    def __init__(self, name: str):
        self.name = name
        self.passed = False
        self.message = ""
        self.duration = 0.0
        self.rss_mb = 0.0
        self.profile = ""

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "passed": self.passed,
            "message": self.message,
            "duration_ms": round(self.duration * 1000, 1),
            "rss_mb": round(self.rss_mb, 1),
        }
        if self.profile:
            d["profile"] = self.profile
        return d


def run_stage(name: str, action, profile: bool) -> StageResult:
    """執行一個階段，記錄耗時、記憶體與（可選）剖析報告。"""
    result = StageResult(name)
    profiler = cProfile.Profile() if profile else None
    start = time.perf_counter()
    try:
        if profiler:
            profiler.enable()
        result.message = action()
        result.passed = True
    except Exception as e:
        result.message = f"失敗: {e}"
    finally:
        if profiler:
            profiler.disable()
        result.duration = time.perf_counter() - start
        result.rss_mb = current_rss_mb()

    if profiler:
        stream = io.StringIO()
        pstats.Stats(profiler, stream=stream).sort_stats("cumulative").print_stats(10)
        result.profile = stream.getvalue()
    return result


def diagnose(family_m: int, enumerate_n: int, workers: int, profile: bool) -> list[StageResult]:
    """依序執行所有診斷階段。"""
    a, b = build_M(family_m, 1), build_M(family_m, 2)
    u = build_U(2 * family_m + 1, 1)

    def canonical() -> str:
        forms = {canonical_form(a), canonical_form(b)}
        return f"ℳ{family_m}: n={a.n}, {len(a)} 個區塊, {len(forms)} 個同構類"

    def sperner() -> str:
        same = sperner_deck(a, workers=workers) == sperner_deck(b, workers=workers)
        return f"ℳ{family_m} Sperner 牌組{'相同' if same else '不同'}"

    def hypergraph() -> str:
        same = hypergraph_deck(a, workers=workers) == hypergraph_deck(b, workers=workers)
        return f"ℳ{family_m} 刪點牌組{'相同' if same else '不同'}"

    def upward() -> str:
        deck = sperner_deck(u, workers=workers)
        return f"𝒰{u.n}: {deck.cardinality} 張卡片, {len(deck.cards)} 種"

    def enumeration() -> str:
        table = deck_table(enumerate_n, allow_large=True, workers=workers)
        groups = find_nonreconstructible(enumerate_n, allow_large=True, workers=workers)
        return f"n={enumerate_n}: {len(table.rows)} 列, {len(groups)} 個不可重建群組"

    stages = [
        ("正規形式", canonical),
        ("Sperner 牌組", sperner),
        ("刪點牌組", hypergraph),
        ("𝒰 族牌組", upward),
        ("窮舉列舉", enumeration),
    ]
    return [run_stage(name, action, profile) for name, action in stages]


def print_results(results: list[StageResult]) -> None:
    """彩色格式輸出診斷結果。"""
    print("=" * 60)
    print("Sperner 重建工具 性能診斷")
    print("=" * 60)

    for r in results:
        icon = "\033[32m✓\033[0m" if r.passed else "\033[31m✗\033[0m"
        print(f"  {icon} {r.name}: {r.message} ({r.duration * 1000:.0f}ms, RSS {r.rss_mb:.0f}MB)")
        if r.profile:
            print(r.profile)

    print()
    total_time = sum(r.duration for r in results)
    slowest = max(results, key=lambda r: r.duration)
    print(f"總耗時: {total_time:.2f}s（最慢階段: {slowest.name}）")
    print("=" * 60)


def main():
    parser = argparse.ArgumentParser(description="Sperner 重建工具 性能診斷")
    parser.add_argument("--config", help="JSON 配置檔案路徑")
    parser.add_argument("--json", action="store_true", help="JSON 格式輸出")
    parser.add_argument("--family-m", type=int, default=4, help="ℳ 族參數 m（預設 4）")
    parser.add_argument("--enumerate-n", type=int, default=4, help="窮舉列舉的基底集合大小（預設 4）")
    parser.add_argument("--workers", type=int, help="工作程序數（覆蓋配置）")
    parser.add_argument("--profile", action="store_true", help="附上每個階段的 cProfile 報告")
    args = parser.parse_args()

    config = load_config(args.config)
    config.apply_overrides(workers=args.workers)
    setup_logging(config.logging)

    results = diagnose(args.family_m, args.enumerate_n, config.parallel.workers, args.profile)

    if args.json:
        output = {
            "results": [r.to_dict() for r in results],
            "all_passed": all(r.passed for r in results),
            "total_duration_ms": round(sum(r.duration for r in results) * 1000, 1),
        }
        print(json.dumps(output, ensure_ascii=False, indent=2))
    else:
        print_results(results)

    sys.exit(0 if all(r.passed for r in results) else 1)


if __name__ == "__main__":
    main()
