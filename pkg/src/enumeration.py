#!/usr/bin/env python3
"""
窮舉列舉模組
============

列舉小基底集合上所有 Sperner 系統的同構類，計算牌組表，
並以牌組碰撞分組判定可重建性。

列舉策略：直接以遞迴方式產生反鏈（依遮罩遞增加入區塊，
每個新區塊必須與已選區塊互不包含），再以正規形式去重。
n = 5 時只有 7581 個帶標籤反鏈，遠少於 2^32 個集合系統。

平行化依第一個區塊切分工作；去重以正規形式為鍵，
因此輸出與排程無關。

函數的窮舉重建走同一條路：依字典序走遍 A^n → B 的所有表格，
以牌組分組，同組而不等價的函數即為互相的非平凡重建。
布林函數在 n ≤ 4 時共 65536 個。
"""

import logging
import time
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import islice, product

from .core import Multiset, SetSystem, SpernerSystem
from .exceptions import CommonErrors, FunctionShapeError, GroundSetError
from .functions import (
    FUNCTION_MAX_PERMUTATIONS,
    FiniteFunction,
    FunctionDeck,
    FunctionKey,
    canonical_key,
    function_deck,
    identification_minor,
)
from .iso import DISPLAY_MAX_N, CanonicalForm, canonical_form, display_form, display_key, shorthand
from .logging_setup import performance_logger
from .minors import Deck, all_pairs, parallel_map, sperner_deck

logger = logging.getLogger(__name__)

EXHAUSTIVE_MAX_N = 5


# =============================================================================
# 反鏈產生
# =============================================================================


def _incomparable(mask: int, chosen: list[int]) -> bool:
    return all(mask & other not in (mask, other) for other in chosen)


def _antichains_from(n: int, start: int, chosen: list[int]) -> Iterator[frozenset[int]]:
    yield frozenset(chosen)
    for mask in range(start, 1 << n):
        if _incomparable(mask, chosen):
            chosen.append(mask)
            yield from _antichains_from(n, mask + 1, chosen)
            chosen.pop()


def _antichains_with_first(n: int, first: int) -> Iterator[frozenset[int]]:
    """最小遮罩區塊恰為 first 的所有反鏈。"""
    return _antichains_from(n, first + 1, [first])


def _check_exhaustive_n(n: int, allow_large: bool, max_n: int) -> None:
    if n < 1:
        raise GroundSetError(f"基底集合大小必須 ≥ 1: n={n}", n=n)
    if n > max_n and not allow_large:
        raise CommonErrors.enumeration_cap(n, max_n)


def enumerate_antichains(
    n: int, allow_large: bool = False, max_n: int = EXHAUSTIVE_MAX_N
) -> Iterator[SpernerSystem]:
    """
    產生 [n] 上所有帶標籤反鏈（含 ∅ 與 {∅}）。

    Raises:
        EnumerationCapError: n 超過 max_n 且未允許
    """
    _check_exhaustive_n(n, allow_large, max_n)
    for blocks in _antichains_from(n, 0, []):
        yield SpernerSystem(n, blocks)


def _classes_with_first(task: tuple[int, int]) -> tuple[int, set[CanonicalForm]]:
    n, first = task
    count = 0
    forms = set()
    for blocks in _antichains_with_first(n, first):
        count += 1
        forms.add(canonical_form(SpernerSystem(n, blocks)))
    return count, forms


@lru_cache(maxsize=16)
def _enumerate_classes(n: int, workers: int) -> tuple[SpernerSystem, ...]:
    started = time.perf_counter()
    tasks = [(n, first) for first in range(1 << n)]
    results = parallel_map(_classes_with_first, tasks, workers, min_items_per_worker=1)

    antichains = 1
    forms = {canonical_form(SpernerSystem(n, frozenset()))}
    for count, found in results:
        antichains += count
        forms |= found

    systems = [display_form(form.to_system()) for form in forms]
    systems.sort(key=display_key)
    performance_logger.log_enumeration_performance(n, antichains, len(systems), time.perf_counter() - started)
    return tuple(SpernerSystem(s.n, s.blocks) for s in systems)


def enumerate_sperner(
    n: int,
    allow_large: bool = False,
    max_n: int = EXHAUSTIVE_MAX_N,
    workers: int = 1,
) -> list[SpernerSystem]:
    """
    列舉 [n] 上 Sperner 系統的同構類代表。

    代表為附錄式顯示形式，依顯示順序排列；∅ 與 {∅} 也包含在內，
    可用 is_trivial 辨識。

    Args:
        n: 基底集合大小
        allow_large: 允許超過 max_n
        max_n: 窮舉上限
        workers: 工作程序數

    Returns:
        list[SpernerSystem]: 每個同構類一個代表

    Raises:
        EnumerationCapError: n 超過 max_n 且未允許
    """
    _check_exhaustive_n(n, allow_large, max_n)
    return list(_enumerate_classes(n, workers))


def is_trivial(s: SetSystem) -> bool:
    """∅ 或 {∅}。"""
    return not s.blocks or s.blocks == frozenset({0})


# =============================================================================
# 牌組表
# =============================================================================


def _class_deck(system: SpernerSystem) -> Deck:
    return sperner_deck(system)


@lru_cache(maxsize=16)
def _class_decks(n: int, workers: int) -> dict[CanonicalForm, Deck]:
    classes = _enumerate_classes(n, workers)
    decks = parallel_map(_class_deck, classes, workers)
    return {canonical_form(s): deck for s, deck in zip(classes, decks)}


@dataclass(frozen=True)
class DeckRow:
    """
    牌組表的一列。

    Attributes:
        system: 附錄式顯示形式的代表
        deck: Sperner 牌組
        nonreconstructible: 是否與其他同構類共用牌組
        trivial: 是否為 ∅ 或 {∅}
    """

    system: SpernerSystem
    deck: Deck
    nonreconstructible: bool
    trivial: bool

    def label(self, display_max_n: int = DISPLAY_MAX_N) -> str:
        text = shorthand(self.system, display_max_n=display_max_n)
        return f"{text} *" if self.nonreconstructible else text


@dataclass
class DeckTable:
    """
    附錄式牌組表。

    欄為 [n−1] 上的同構類（與列使用相同的顯示順序），
    格內為該卡片在列牌組中的重數，0 以空白表示。
    """

    n: int
    columns: list[SpernerSystem] = field(default_factory=list)
    rows: list[DeckRow] = field(default_factory=list)

    def cell(self, row: DeckRow, column: SpernerSystem) -> int:
        return row.deck.cards.get(canonical_form(column))

    def nonreconstructible_rows(self) -> list[DeckRow]:
        return [row for row in self.rows if row.nonreconstructible]

    def render_text(self, display_max_n: int = DISPLAY_MAX_N) -> str:
        """
        以定位字元分隔的表格文字。

        第一行為 "n = N" 與各欄標籤；之後每列為列標籤（不可重建者加 " *"）與各格重數。
        """
        header = [f"n = {self.n}"] + [shorthand(c, display_max_n=display_max_n) for c in self.columns]
        lines = ["\t".join(header)]
        for row in self.rows:
            cells = [self.cell(row, column) for column in self.columns]
            lines.append("\t".join([row.label(display_max_n)] + [str(c) if c else "" for c in cells]))
        return "\n".join(lines) + "\n"

    def to_json_dict(self, display_max_n: int = DISPLAY_MAX_N) -> dict:
        return {
            "n": self.n,
            "columns": [shorthand(c, display_max_n=display_max_n) for c in self.columns],
            "rows": [
                {
                    "system": shorthand(row.system, display_max_n=display_max_n),
                    "blocks": [list(t) for t in row.system.block_tuples()],
                    "nonreconstructible": row.nonreconstructible,
                    "trivial": row.trivial,
                    "deck": {
                        shorthand(c, display_max_n=display_max_n): self.cell(row, c)
                        for c in self.columns
                        if self.cell(row, c)
                    },
                }
                for row in self.rows
            ],
        }


def _deck_groups(n: int, workers: int) -> dict[Deck, list[SpernerSystem]]:
    decks = _class_decks(n, workers)
    groups: dict[Deck, list[SpernerSystem]] = {}
    for system in _enumerate_classes(n, workers):
        groups.setdefault(decks[canonical_form(system)], []).append(system)
    return groups


def _check_table_n(n: int, allow_large: bool, max_n: int) -> None:
    if n < 2:
        raise CommonErrors.deck_needs_two_elements(n)
    _check_exhaustive_n(n, allow_large, max_n)


def deck_table(
    n: int,
    allow_large: bool = False,
    max_n: int = EXHAUSTIVE_MAX_N,
    workers: int = 1,
    show_trivial: bool = False,
) -> DeckTable:
    """
    建立 [n] 上所有 Sperner 系統的牌組表。

    Args:
        n: 基底集合大小，2 ≤ n ≤ max_n
        allow_large: 允許超過 max_n
        max_n: 窮舉上限
        workers: 工作程序數
        show_trivial: 是否包含 ∅ 與 {∅} 的列與欄

    Raises:
        ValidationError: n < 2
        EnumerationCapError: n 超過 max_n 且未允許
    """
    _check_table_n(n, allow_large, max_n)
    decks = _class_decks(n, workers)
    groups = _deck_groups(n, workers)

    rows = []
    for system in _enumerate_classes(n, workers):
        trivial = is_trivial(system)
        if trivial and not show_trivial:
            continue
        deck = decks[canonical_form(system)]
        rows.append(DeckRow(system, deck, len(groups[deck]) > 1, trivial))

    columns = [
        c for c in _enumerate_classes(n - 1, workers) if show_trivial or not is_trivial(c)
    ]
    logger.info(f"牌組表 n={n}: {len(rows)} 列, {len(columns)} 欄")
    return DeckTable(n, columns, rows)


def find_nonreconstructible(
    n: int, allow_large: bool = False, max_n: int = EXHAUSTIVE_MAX_N, workers: int = 1
) -> list[list[SpernerSystem]]:
    """
    找出所有牌組相同而互不同構的 Sperner 系統群組。

    Returns:
        list: 每個群組至少兩個同構類，依第一個成員的顯示順序排列
    """
    _check_table_n(n, allow_large, max_n)
    return [members for members in _deck_groups(n, workers).values() if len(members) > 1]


def reconstructions(
    s: SetSystem, allow_large: bool = False, max_n: int = EXHAUSTIVE_MAX_N, workers: int = 1
) -> list[SpernerSystem]:
    """
    返回所有與 s 牌組相同的同構類代表（包含 s 自己的類）。

    Raises:
        ValidationError: n < 2
        EnumerationCapError: n 超過 max_n 且未允許
    """
    _check_table_n(s.n, allow_large, max_n)
    return list(_deck_groups(s.n, workers).get(sperner_deck(s), []))


def is_reconstructible(
    s: SetSystem, allow_large: bool = False, max_n: int = EXHAUSTIVE_MAX_N, workers: int = 1
) -> bool:
    """s 與每個牌組相同的系統同構。"""
    found = reconstructions(s, allow_large, max_n, workers)
    return all(canonical_form(other) == canonical_form(s) for other in found)


def is_weakly_reconstructible_class(
    n: int,
    predicate: Callable[[SpernerSystem], bool],
    allow_large: bool = False,
    max_n: int = EXHAUSTIVE_MAX_N,
    workers: int = 1,
) -> bool:
    """
    判斷由 predicate 界定的類別在 [n] 上是否弱可重建：
    類別中任兩個牌組相同的成員皆同構。

    Returns:
        bool: 沒有兩個相異同構類同屬類別且共用牌組時為 True
    """
    _check_table_n(n, allow_large, max_n)
    for members in _deck_groups(n, workers).values():
        selected = [s for s in members if predicate(s)]
        if len(selected) > 1:
            logger.debug(f"類別內牌組碰撞: {[shorthand(s) for s in selected]}")
            return False
    return True


# =============================================================================
# 函數的窮舉重建
# =============================================================================

FUNCTION_SPACE_MAX = 1 << 16
FUNCTION_CHUNK = 4096


def function_space_size(domain: int, codomain: int, arity: int) -> int:
    """A^n → B 的函數個數 |B|^(|A|^n)。"""
    return codomain ** (domain ** arity)


def _check_function_space(
    domain: int, codomain: int, arity: int, allow_large: bool, max_functions: int
) -> None:
    if arity < 2:
        raise FunctionShapeError(f"函數牌組需要元數 ≥ 2: n={arity}", field="arity", value=arity)
    size = function_space_size(domain, codomain, arity)
    if size > max_functions and not allow_large:
        raise CommonErrors.function_space_cap(size, max_functions)


def _function_decks_in_range(
    task: tuple[int, int, int, int, int, int],
) -> list[tuple[FiniteFunction, FunctionDeck]]:
    """依表格字典序，計算第 start 到 stop−1 個函數的牌組。"""
    domain, codomain, arity, start, stop, max_permutations = task
    pairs = all_pairs(arity)
    keys: dict[FiniteFunction, FunctionKey] = {}
    found = []
    values = islice(product(range(codomain), repeat=domain ** arity), start, stop)
    for table in values:
        f = FiniteFunction.from_table(domain, codomain, arity, table)
        cards = []
        for pair in pairs:
            minor = identification_minor(f, pair)
            key = keys.get(minor)
            if key is None:
                key = keys[minor] = canonical_key(minor, max_permutations)
            cards.append(key)
        found.append((f, FunctionDeck(arity, Multiset(cards))))
    return found


@lru_cache(maxsize=4)
def _function_deck_groups(
    domain: int, codomain: int, arity: int, workers: int, max_permutations: int
) -> dict[FunctionDeck, list[FiniteFunction]]:
    started = time.perf_counter()
    size = function_space_size(domain, codomain, arity)
    tasks = [
        (domain, codomain, arity, start, min(start + FUNCTION_CHUNK, size), max_permutations)
        for start in range(0, size, FUNCTION_CHUNK)
    ]
    groups: dict[FunctionDeck, list[FiniteFunction]] = {}
    for chunk in parallel_map(_function_decks_in_range, tasks, workers, min_items_per_worker=1):
        for f, deck in chunk:
            groups.setdefault(deck, []).append(f)
    performance_logger.log_function_space_performance(arity, size, len(groups), time.perf_counter() - started)
    return groups


def function_deck_groups(
    domain: int,
    codomain: int,
    arity: int,
    allow_large: bool = False,
    max_functions: int = FUNCTION_SPACE_MAX,
    workers: int = 1,
    max_permutations: int = FUNCTION_MAX_PERMUTATIONS,
) -> dict[FunctionDeck, list[FiniteFunction]]:
    """
    依牌組將 A^n → B 的所有函數分組。

    Args:
        domain: |A|
        codomain: |B|
        arity: 元數 n ≥ 2
        allow_large: 允許函數空間超過 max_functions
        max_functions: 函數空間上限
        workers: 工作程序數
        max_permutations: 正規鍵的參數置換上限

    Returns:
        dict: 牌組 → 擁有該牌組的函數（依表格字典序）

    Raises:
        FunctionShapeError: n < 2
        ResourceCapError: 函數空間超過上限且未允許
    """
    _check_function_space(domain, codomain, arity, allow_large, max_functions)
    return _function_deck_groups(domain, codomain, arity, workers, max_permutations)


def function_reconstructions(
    f: FiniteFunction,
    allow_large: bool = False,
    max_functions: int = FUNCTION_SPACE_MAX,
    workers: int = 1,
    max_permutations: int = FUNCTION_MAX_PERMUTATIONS,
) -> list[FunctionKey]:
    """
    返回所有與 f 牌組相同的函數的等價類正規鍵（遞增，包含 f 自己的類）。

    Raises:
        FunctionShapeError: n < 2
        ResourceCapError: 函數空間超過上限且未允許
    """
    groups = function_deck_groups(
        f.domain, f.codomain, f.arity, allow_large, max_functions, workers, max_permutations
    )
    members = groups.get(function_deck(f, max_permutations=max_permutations), [])
    return sorted({canonical_key(g, max_permutations) for g in members})


def function_is_reconstructible(
    f: FiniteFunction,
    allow_large: bool = False,
    max_functions: int = FUNCTION_SPACE_MAX,
    workers: int = 1,
    max_permutations: int = FUNCTION_MAX_PERMUTATIONS,
) -> bool:
    """每個與 f 牌組相同的函數都與 f 等價。"""
    found = function_reconstructions(f, allow_large, max_functions, workers, max_permutations)
    return found == [canonical_key(f, max_permutations)]


def find_nonreconstructible_functions(
    domain: int,
    codomain: int,
    arity: int,
    allow_large: bool = False,
    max_functions: int = FUNCTION_SPACE_MAX,
    workers: int = 1,
    max_permutations: int = FUNCTION_MAX_PERMUTATIONS,
) -> list[list[FunctionKey]]:
    """
    找出牌組相同而互不等價的函數群組。

    Returns:
        list: 每個群組至少兩個等價類（正規鍵遞增），群組依第一個鍵排列
    """
    groups = function_deck_groups(
        domain, codomain, arity, allow_large, max_functions, workers, max_permutations
    )
    found = []
    for members in groups.values():
        if len(members) < 2:
            continue
        keys = sorted({canonical_key(g, max_permutations) for g in members})
        if len(keys) > 1:
            found.append(keys)
    found.sort()
    logger.info(f"函數空間 n={arity}: {len(found)} 個不可重建群組")
    return found
