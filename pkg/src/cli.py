#!/usr/bin/env python3
"""
命令列介面模組
==============

子命令：
    family    建構族系統（G、F、M、U、S）
    deck      計算 Sperner、超圖或函數牌組
    check     判定同構、hypomorphic、強 hypomorphic、超圖 hypomorphic
    appendix  輸出附錄式牌組表
    clones    布林函數的克隆成員報告
    reconstruct  以窮舉搜尋判定系統或函數是否可重建

系統來源可以是檔案路徑、行內簡寫或 JSON，或族參考（例如 M3_1、U8_2）。

結束碼：
    0  成功／判定為真
    1  判定為假
    2  用法、解析或驗證錯誤
    3  超出資源上限
"""

import argparse
import json
import logging
import re
import sys
import time
from pathlib import Path
from typing import Any, Callable, Optional

from .config import ReconstructionConfig, load_config
from .core import SetSystem, SpernerSystem, antichain_violation, block_labels, minimalize
from .enumeration import deck_table, find_nonreconstructible, function_reconstructions, reconstructions
from .exceptions import (
    AntichainError,
    ConfigurationError,
    ParseError,
    ReconstructionError,
    create_error_response,
    exit_code_for,
    handle_exception,
)
from .families import FAMILY_NAMES, build_family, parse_family_reference
from .functions import FiniteFunction, clone_membership, function_deck, term_function
from .iso import display_form, find_isomorphism, format_blocks, shorthand
from .logging_setup import (
    log_config_summary,
    log_operation_error,
    log_operation_start,
    log_operation_success,
    log_system_info,
    setup_logging,
)
from .minors import (
    hypergraph_deck,
    hypergraph_hypomorphic,
    hypomorphic,
    sperner_deck,
    strongly_hypomorphic,
)

logger = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1

_BRACE_BLOCK = re.compile(r"\{([^{}]*)\}")


# =============================================================================
# 集合系統檔案的解析與輸出
# =============================================================================


def _parse_shorthand_line(line: str, source: str, line_number: int) -> list[list[int]]:
    text = line.strip().rstrip("*").strip()
    if text in ("∅", "{}"):
        return []
    if text == "{∅}":
        return [[]]
    if text.startswith("{"):
        blocks = []
        for body in _BRACE_BLOCK.findall(text):
            body = body.strip()
            if body in ("", "∅"):
                blocks.append([])
            else:
                blocks.append([int(token) for token in body.split(",")])
        if not blocks:
            raise ParseError(f"無法解析的區塊列表: {text}", source=source, line=line_number)
        return blocks

    blocks = []
    for token in text.split(","):
        token = token.strip()
        if token == "∅":
            blocks.append([])
            continue
        if not token or not all(ch in "123456789" for ch in token):
            raise ParseError(
                f"簡寫區塊必須由 1-9 的數字並列而成: {token!r}", source=source, line=line_number
            )
        blocks.append([int(ch) for ch in token])
    return blocks


def _system_from_json(data: Any, source: str) -> SetSystem:
    if not isinstance(data, dict) or "blocks" not in data or "n" not in data:
        raise ParseError('集合系統 JSON 必須是 {"n": int, "blocks": [[...], ...]}', source=source)
    try:
        return SetSystem.from_blocks(int(data["n"]), [list(block) for block in data["blocks"]])
    except TypeError as e:
        raise ParseError(f"集合系統 JSON 格式錯誤: {e}", source=source, cause=e)


def parse_systems(text: str, n: Optional[int] = None, source: str = "<inline>") -> list[SetSystem]:
    """
    解析集合系統文字。

    接受 JSON 物件 {"n": ..., "blocks": ...}，或每行一個系統的簡寫
    （空行與 # 開頭的行略過，行尾的 "*" 標記略過）。
    簡寫未提供 n 時取最大元素。

    Raises:
        ParseError: 文字無法解析
        GroundSetError: 元素超出 1..n
        ValidationError: 重複區塊
    """
    stripped = text.strip()
    if stripped.startswith("{") and '"' in stripped:
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise ParseError(f"JSON 解析失敗: {e}", source=source, line=e.lineno, cause=e)
        return [_system_from_json(data, source)]

    systems = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        blocks = _parse_shorthand_line(line, source, line_number)
        size = n
        if size is None:
            labels = [x for block in blocks for x in block]
            if not labels:
                raise ParseError("無法從簡寫推斷基底集合大小，請指定 --n", source=source, line=line_number)
            size = max(labels)
        systems.append(SetSystem.from_blocks(size, blocks))
    if not systems:
        raise ParseError("輸入中沒有集合系統", source=source)
    return systems


def render_system(s: SetSystem, fmt: str = "json", indent: Optional[int] = 2) -> str:
    """以 JSON 或簡寫輸出集合系統（保留原標籤）。"""
    if fmt == "shorthand":
        return format_blocks(s)
    return json.dumps({"n": s.n, "blocks": [list(t) for t in s.block_tuples()]}, indent=indent)


def _read_source(argument: str) -> tuple[str, str]:
    path = Path(argument)
    if path.is_file():
        try:
            return path.read_text(encoding="utf-8"), str(path)
        except OSError as e:
            raise ParseError(f"無法讀取檔案: {e}", source=str(path), cause=e)
    return argument, "<inline>"


def load_system(argument: str, n: Optional[int] = None) -> SetSystem:
    """
    由族參考、檔案路徑或行內文字載入單一集合系統。

    Raises:
        ParseError: 無法解析或包含多個系統
    """
    instance = parse_family_reference(argument)
    if instance is not None:
        return instance.system
    text, source = _read_source(argument)
    systems = parse_systems(text, n=n, source=source)
    if len(systems) != 1:
        raise ParseError(f"預期一個集合系統，實際 {len(systems)} 個", source=source)
    return systems[0]


def require_sperner(s: SetSystem, allow_minimalize: bool = False) -> SpernerSystem:
    """
    確認輸入為反鏈；allow_minimalize 時改取極小區塊並記錄警告。

    Raises:
        AntichainError: 不是反鏈且未允許極小化
    """
    violation = antichain_violation(s)
    if violation is None:
        return SpernerSystem(s.n, s.blocks)
    small, large = (block_labels(mask) for mask in violation)
    if not allow_minimalize:
        raise AntichainError(
            f"輸入不是 Sperner 系統: {set(small) or '∅'} ⊊ {set(large)}（可用 --minimalize）",
            witness=(small, large),
        )
    logger.warning(f"輸入不是反鏈（{set(small) or '∅'} ⊊ {set(large)}），改用極小區塊")
    return minimalize(s)


def load_function(argument: str) -> FiniteFunction:
    """由檔案路徑或行內 JSON 載入有限函數。"""
    text, source = _read_source(argument)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"函數 JSON 解析失敗: {e}", source=source, line=e.lineno, cause=e)
    return FiniteFunction.from_json_dict(data)


def _function_from_args(args: argparse.Namespace) -> FiniteFunction:
    if args.term:
        return term_function(require_sperner(load_system(args.source, args.n), args.minimalize))
    return load_function(args.source)


def _emit_json(payload: Any, config: ReconstructionConfig) -> None:
    print(json.dumps(payload, ensure_ascii=False, indent=config.output.json_indent or None))


# =============================================================================
# 子命令
# =============================================================================


def cmd_family(args: argparse.Namespace, config: ReconstructionConfig) -> int:
    """建構族系統並輸出。"""
    instance = build_family(args.name, args.params)
    s = instance.system
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(render_system(s, "json", config.output.json_indent) + "\n", encoding="utf-8")
        logger.info(f"已寫入 {instance.label()} 至 {out}")

    if config.output.primed_labels:
        print(instance.encoding.render_system(s))
    elif args.json or args.format == "json":
        print(render_system(s, "json", config.output.json_indent or None))
    else:
        print(render_system(s, "shorthand"))
    return EXIT_TRUE


def cmd_deck(args: argparse.Namespace, config: ReconstructionConfig) -> int:
    """計算並輸出牌組（依顯示順序排列，附重數）。"""
    workers = config.parallel.workers
    if args.mode == "function":
        f = _function_from_args(args)
        deck = function_deck(
            f,
            workers=workers,
            max_permutations=config.search.function_max_permutations,
            min_items_per_worker=config.parallel.min_items_per_worker,
        )
        if args.json:
            _emit_json(
                {
                    "mode": "function",
                    "arity": deck.arity,
                    "cards": [
                        {"card": key.render(), "table": list(key.table), "multiplicity": multiplicity}
                        for key, multiplicity in deck.cards.sorted_items()
                    ],
                },
                config,
            )
        else:
            print("\n".join(deck.render_lines()))
        return EXIT_TRUE

    s = load_system(args.source, args.n)
    max_n = config.search.canonical_max_n
    if args.mode == "sperner":
        deck = sperner_deck(
            require_sperner(s, args.minimalize),
            workers=workers,
            max_n=max_n,
            min_items_per_worker=config.parallel.min_items_per_worker,
        )
    else:
        deck = hypergraph_deck(
            s, workers=workers, max_n=max_n, min_items_per_worker=config.parallel.min_items_per_worker
        )

    display_max_n = config.search.display_max_n
    if args.json:
        _emit_json(
            {
                "mode": args.mode,
                "n": deck.n,
                "cards": [
                    {
                        "card": shorthand(form.to_system(), display_max_n=display_max_n),
                        "blocks": [
                            list(t)
                            for t in display_form(
                                form.to_system(), display_max_n=display_max_n
                            ).block_tuples()
                        ],
                        "multiplicity": multiplicity,
                    }
                    for form, multiplicity in deck.sorted_cards(display_max_n)
                ],
            },
            config,
        )
    else:
        print("\n".join(deck.render_lines(display_max_n)))
    return EXIT_TRUE


def cmd_check(args: argparse.Namespace, config: ReconstructionConfig) -> int:
    """判定兩個系統之間的關係，結果以結束碼表示。"""
    a = load_system(args.a, args.n)
    b = load_system(args.b, args.n)
    max_n = config.search.canonical_max_n
    workers = config.parallel.workers
    witness = None

    if args.relation == "iso":
        sigma = find_isomorphism(a, b, max_n=max_n)
        result = sigma is not None
        witness = sigma.one_line() if sigma is not None else None
    elif args.relation == "hypomorphic":
        result = hypomorphic(
            require_sperner(a, args.minimalize), require_sperner(b, args.minimalize), workers, max_n
        )
    elif args.relation == "strong":
        result = strongly_hypomorphic(
            require_sperner(a, args.minimalize), require_sperner(b, args.minimalize), max_n
        )
    else:
        result = hypergraph_hypomorphic(a, b, workers, max_n)

    if args.json:
        _emit_json({"relation": args.relation, "result": result, "witness": witness}, config)
    else:
        print("true" if result else "false")
        if witness is not None:
            print(witness)
    return EXIT_TRUE if result else EXIT_FALSE


def cmd_appendix(args: argparse.Namespace, config: ReconstructionConfig) -> int:
    """輸出 [n] 上所有 Sperner 系統的牌組表。"""
    search = config.search
    table = deck_table(
        args.size,
        allow_large=search.allow_large,
        max_n=search.exhaustive_max_n,
        workers=config.parallel.workers,
        show_trivial=config.output.show_trivial,
    )
    groups = None
    if args.groups or args.json:
        groups = find_nonreconstructible(
            args.size, allow_large=search.allow_large, max_n=search.exhaustive_max_n, workers=config.parallel.workers
        )

    if args.json:
        payload = table.to_json_dict(search.display_max_n)
        payload["groups"] = [[shorthand(s, search.display_max_n) for s in group] for group in groups]
        _emit_json(payload, config)
    elif args.groups:
        for group in groups:
            print(" | ".join(shorthand(s, search.display_max_n) for s in group))
    else:
        sys.stdout.write(table.render_text(search.display_max_n))
    return EXIT_TRUE


def cmd_clones(args: argparse.Namespace, config: ReconstructionConfig) -> int:
    """輸出布林函數的克隆成員報告。"""
    report = clone_membership(_function_from_args(args))
    if args.json:
        _emit_json(
            {
                "members": report.members,
                "reconstructible_in": list(report.reconstructible_in),
                "nonreconstructible_in": list(report.nonreconstructible_in),
            },
            config,
        )
    else:
        print("\n".join(report.render_lines()))
    return EXIT_TRUE


def cmd_reconstruct(args: argparse.Namespace, config: ReconstructionConfig) -> int:
    """以窮舉搜尋判定系統或函數是否可重建，並列出所有重建的類。"""
    search = config.search
    workers = config.parallel.workers
    if args.mode == "function":
        keys = function_reconstructions(
            _function_from_args(args),
            allow_large=search.allow_large,
            max_functions=search.function_space_max,
            workers=workers,
            max_permutations=search.function_max_permutations,
        )
        result = len(keys) == 1
        labels = [key.render() for key in keys]
    else:
        s = require_sperner(load_system(args.source, args.n), args.minimalize)
        found = reconstructions(s, allow_large=search.allow_large, max_n=search.exhaustive_max_n, workers=workers)
        result = len(found) == 1
        labels = [shorthand(other, search.display_max_n) for other in found]

    if args.json:
        _emit_json({"mode": args.mode, "result": result, "reconstructions": labels}, config)
    else:
        print("true" if result else "false")
        for label in labels:
            print(label)
    return EXIT_TRUE if result else EXIT_FALSE


COMMANDS: dict[str, Callable[[argparse.Namespace, ReconstructionConfig], int]] = {
    "family": cmd_family,
    "deck": cmd_deck,
    "check": cmd_check,
    "appendix": cmd_appendix,
    "clones": cmd_clones,
    "reconstruct": cmd_reconstruct,
}


# =============================================================================
# 參數解析與進入點
# =============================================================================


def _add_source_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, help="簡寫輸入的基底集合大小（預設為最大元素）")
    parser.add_argument("--minimalize", action="store_true", help="輸入不是反鏈時改取極小區塊")


def build_parser() -> argparse.ArgumentParser:
    """建立命令列參數解析器。"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON 配置檔案路徑")
    common.add_argument(
        "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="日誌級別"
    )
    common.add_argument("--log-file", help="日誌檔案路徑")
    common.add_argument("--workers", type=int, help="工作程序數（1 為序列計算）")
    common.add_argument("--allow-large", action="store_true", default=None, help="允許超出窮舉上限")
    common.add_argument("--json", action="store_true", help="以 JSON 輸出")
    common.add_argument("--save-config", help="將生效的配置另存為 JSON 檔案")

    parser = argparse.ArgumentParser(
        prog="sperner-reconstruct",
        description="Sperner 系統、超圖與多元函數的重建工具",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    family = subparsers.add_parser("family", parents=[common], help="建構族系統")
    family.add_argument("name", choices=list(FAMILY_NAMES) + [x.lower() for x in FAMILY_NAMES], help="族名稱")
    family.add_argument("params", type=int, nargs="+", help="族參數（F: m；U: n parity；其餘: m parity）")
    family.add_argument("--primed-labels", action="store_true", default=None, help="以 1..m、1′..m′、0、0′ 顯示")
    family.add_argument("--format", choices=["json", "shorthand"], default="json", help="輸出格式")
    family.add_argument("--out", help="另存 JSON 檔案的路徑")

    deck = subparsers.add_parser("deck", parents=[common], help="計算牌組")
    deck.add_argument("source", help="系統或函數：檔案路徑、行內文字或族參考")
    deck.add_argument("--mode", choices=["sperner", "hypergraph", "function"], default="sperner", help="牌組種類")
    deck.add_argument("--term", action="store_true", help="function 模式下以系統的項函數為輸入")
    _add_source_options(deck)

    check = subparsers.add_parser("check", parents=[common], help="判定兩個系統的關係")
    check.add_argument("a", help="第一個系統")
    check.add_argument("b", help="第二個系統")
    check.add_argument(
        "--relation", choices=["iso", "hypomorphic", "strong", "hypergraph"], default="iso", help="判定的關係"
    )
    _add_source_options(check)

    appendix = subparsers.add_parser("appendix", parents=[common], help="輸出附錄式牌組表")
    appendix.add_argument("size", type=int, help="基底集合大小 n")
    appendix.add_argument("--groups", action="store_true", help="只列出不可重建的群組")
    appendix.add_argument("--show-trivial", action="store_true", default=None, help="包含 ∅ 與 {∅}")

    clones = subparsers.add_parser("clones", parents=[common], help="布林函數的克隆成員報告")
    clones.add_argument("source", help="函數 JSON（或配合 --term 的系統）")
    clones.add_argument("--term", action="store_true", help="以系統的項函數為輸入")
    _add_source_options(clones)

    reconstruct = subparsers.add_parser("reconstruct", parents=[common], help="窮舉判定可重建性")
    reconstruct.add_argument("source", help="系統，或函數 JSON（function 模式）")
    reconstruct.add_argument("--mode", choices=["sperner", "function"], default="sperner", help="重建對象")
    reconstruct.add_argument("--term", action="store_true", help="function 模式下以系統的項函數為輸入")
    _add_source_options(reconstruct)

    return parser


def _build_config(args: argparse.Namespace) -> ReconstructionConfig:
    config = load_config(args.config)
    config.apply_overrides(
        workers=args.workers,
        allow_large=args.allow_large,
        log_level=args.log_level,
        log_file=args.log_file,
        primed_labels=getattr(args, "primed_labels", None),
        show_trivial=getattr(args, "show_trivial", None),
    )
    errors = config.get_errors()
    if errors:
        raise ConfigurationError("配置無效: " + "; ".join(errors), config_field=args.config)
    if args.save_config and not config.save_to_file(args.save_config):
        raise ConfigurationError(f"無法保存配置: {args.save_config}", config_field="save_config")
    return config


def _report_error(exc: Exception, args: argparse.Namespace, indent: Optional[int] = 2) -> ReconstructionError:
    """錯誤訊息寫入 stderr；--json 時另將標準化錯誤響應寫入 stdout。"""
    error = handle_exception(exc, args.command)
    print(f"錯誤: {error.message}", file=sys.stderr)
    if args.json:
        response = create_error_response(error, args.command)
        print(json.dumps(response, ensure_ascii=False, indent=indent or None, default=str))
    return error


def run(argv: Optional[list[str]] = None) -> int:
    """
    執行命令列並返回結束碼。

    Args:
        argv: 參數列表（預設為 sys.argv[1:]）

    Returns:
        int: 依結束碼約定
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = _build_config(args)
    except ReconstructionError as e:
        return exit_code_for(_report_error(e, args))

    setup_logging(config.logging)
    log_system_info()
    log_config_summary(config.get_summary())

    started = time.perf_counter()
    log_operation_start(args.command)
    try:
        code = COMMANDS[args.command](args, config)
    except ReconstructionError as e:
        _report_error(e, args, config.output.json_indent)
        log_operation_error(args.command, e, code=e.error_code)
        return exit_code_for(e)
    except Exception as e:
        wrapped = _report_error(e, args, config.output.json_indent)
        logger.exception(f"未預期的錯誤: {e}")
        return exit_code_for(wrapped)

    log_operation_success(args.command, time.perf_counter() - started, exit_code=code)
    return code


def main() -> None:
    """命令列進入點。"""
    sys.exit(run())
