#!/usr/bin/env python3
"""
Sperner 重建工具進入點
======================

用法：
    python sperner_reconstruct.py family M 3 1
    python sperner_reconstruct.py deck 12,13,23
    python sperner_reconstruct.py check M3_1 M3_2 --relation strong
    python sperner_reconstruct.py appendix 4
    python sperner_reconstruct.py clones U7_1 --term
"""

import sys

from src.cli import run


def main() -> None:
    """主程序入口點。"""
    sys.exit(run())


if __name__ == "__main__":
    main()
