#!/usr/bin/env python3
"""
牌組表匯出工具
==============

重新產生 tests/golden 下的牌組表，或與既有檔案比對。

用法：
    uv run python tools/export_appendix.py
    uv run python tools/export_appendix.py --check
    uv run python tools/export_appendix.py --sizes 2 3 4 5 --out-dir /tmp/tables
"""

import argparse
import sys
from pathlib import Path

PROJECT_ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from src.config import load_config
from src.enumeration import deck_table
from src.logging_setup import setup_logging


def main():
    parser = argparse.ArgumentParser(description="匯出牌組表")
    parser.add_argument("--sizes", type=int, nargs="+", default=[2, 3, 4], help="基底集合大小（預設 2 3 4）")
    parser.add_argument("--out-dir", default=str(PROJECT_ROOT / "tests" / "golden"), help="輸出目錄")
    parser.add_argument("--check", action="store_true", help="只比對，不寫入")
    parser.add_argument("--config", help="JSON 配置檔案路徑")
    parser.add_argument("--workers", type=int, help="工作程序數（覆蓋配置）")
    args = parser.parse_args()

    config = load_config(args.config)
    config.apply_overrides(workers=args.workers)
    setup_logging(config.logging)

    out_dir = Path(args.out_dir)
    mismatched = []
    for n in args.sizes:
        text = deck_table(n, allow_large=True, workers=config.parallel.workers).render_text(
            config.search.display_max_n
        )
        path = out_dir / f"appendix_n{n}.tsv"
        if args.check:
            if not path.exists() or path.read_text(encoding="utf-8") != text:
                mismatched.append(path.name)
                print(f"✗ {path.name}")
            else:
                print(f"✓ {path.name}")
            continue
        out_dir.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        print(f"已寫入 {path}")

    sys.exit(1 if mismatched else 0)


if __name__ == "__main__":
    main()
