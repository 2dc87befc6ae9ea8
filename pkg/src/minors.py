#!/usr/bin/env python3
"""
識別子式與牌組模組
==================

提供集合系統的商（識別兩個元素）、識別子式卡片、Sperner 牌組、
超圖刪點牌組，以及各種 hypomorphic 判定。

商的重新標記：識別對 {i, j}（i < j）合併後取標籤 i，
大於 j 的標籤減一，介於 i 與 j 之間的標籤不變。

牌組計算對每個識別對彼此獨立，workers > 1 時以程序池平行計算，
結果與序列計算相同。
"""

import logging
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, TypeVar

from .core import Multiset, Permutation, SetSystem, SpernerSystem, minimalize
from .exceptions import CommonErrors, GroundSetError, IdentPairError
from .iso import (
    CANONICAL_MAX_N,
    DISPLAY_MAX_N,
    CanonicalForm,
    canonical_form,
    display_key,
    find_isomorphism,
    shorthand,
)
from .logging_setup import performance_logger

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


# =============================================================================
# 型別
# =============================================================================


@dataclass(frozen=True, order=True)
class IdentPair:
    """
    識別對 {i, j}，1 ≤ i < j。

    Attributes:
        i: 較小的元素
        j: 較大的元素
    """

    i: int
    j: int

    def __post_init__(self):
        if not 1 <= self.i < self.j:
            raise IdentPairError(f"識別對必須滿足 1 ≤ i < j: ({self.i}, {self.j})", pair=(self.i, self.j))

    @classmethod
    def of(cls, a: int, b: int) -> "IdentPair":
        """不論順序建構識別對。"""
        return cls(min(a, b), max(a, b))

    def check_within(self, n: int) -> None:
        if self.j > n:
            raise IdentPairError(
                f"識別對 ({self.i}, {self.j}) 超出基底集合 1..{n}", pair=(self.i, self.j), n=n
            )

    def __str__(self) -> str:
        return f"{{{self.i},{self.j}}}"


def all_pairs(n: int) -> list[IdentPair]:
    """依字典序列出 [n] 的所有識別對。"""
    return [IdentPair(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class Deck:
    """
    牌組：卡片正規形式的多重集合。

    Attributes:
        n: 原系統的基底集合大小
        kind: "sperner" 或 "hypergraph"
        cards: 卡片正規形式的多重集合
    """

    n: int
    kind: str
    cards: Multiset

    @property
    def cardinality(self) -> int:
        return self.cards.cardinality

    def sorted_cards(self, display_max_n: int = DISPLAY_MAX_N) -> list[tuple[CanonicalForm, int]]:
        """依附錄顯示順序排列的 (卡片, 重數)。"""
        return sorted(
            self.cards.items(),
            key=lambda item: display_key(item[0].to_system(), display_max_n=display_max_n),
        )

    def render_lines(self, display_max_n: int = DISPLAY_MAX_N) -> list[str]:
        """每張卡片一行，例如 "12,13,23 ×3"。"""
        return [
            f"{shorthand(form.to_system(), display_max_n=display_max_n)} ×{multiplicity}"
            for form, multiplicity in self.sorted_cards(display_max_n)
        ]


# =============================================================================
# 平行對應
# =============================================================================


def parallel_map(
    func: Callable[[T], R],
    items: Iterable[T],
    workers: int = 1,
    min_items_per_worker: int = 8,
) -> list[R]:
    """
    對項目逐一套用 func，保持輸入順序。

    workers ≤ 1 或項目太少時序列計算；否則使用 ProcessPoolExecutor。
    func 必須是可被 pickle 的模組層級函數。
    """
    items = list(items)
    if workers <= 1 or len(items) < 2 * min_items_per_worker:
        return [func(item) for item in items]

    workers = min(workers, max(1, len(items) // min_items_per_worker))
    chunksize = max(1, len(items) // (workers * 4))
    logger.debug(f"平行計算 {len(items)} 個項目，工作程序 {workers}，chunksize {chunksize}")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(func, items, chunksize=chunksize))


# =============================================================================
# 商與卡片
# =============================================================================


def _quotient_mask(mask: int, i: int, j: int) -> int:
    below = mask & ((1 << (j - 1)) - 1)
    above = mask >> j
    merged = (mask >> (j - 1)) & 1
    return below | (above << (j - 1)) | (merged << (i - 1))


def quotient(s: SetSystem, pair: IdentPair) -> SetSystem:
    """
    以 θ_I 取商並依 δ_I 重新標記。

    Args:
        s: 集合系統
        pair: 識別對

    Returns:
        SetSystem: [n−1] 上的集合系統；像相同的區塊合併

    Raises:
        IdentPairError: 識別對超出基底集合
    """
    pair.check_within(s.n)
    return SetSystem(s.n - 1, frozenset(_quotient_mask(mask, pair.i, pair.j) for mask in s.blocks))


def card(s: SetSystem, pair: IdentPair) -> SpernerSystem:
    """識別子式 𝒜*_I：商的極小區塊。"""
    return minimalize(quotient(s, pair))


def _card_form(task: tuple[SetSystem, IdentPair, int]) -> CanonicalForm:
    s, pair, max_n = task
    return canonical_form(card(s, pair), max_n=max_n)


def sperner_deck(
    s: SetSystem,
    workers: int = 1,
    max_n: int = CANONICAL_MAX_N,
    min_items_per_worker: int = 8,
) -> Deck:
    """
    計算 Sperner 牌組。

    Args:
        s: Sperner 系統，n ≥ 2
        workers: 工作程序數
        max_n: 正規形式搜尋上限
        min_items_per_worker: 每個工作程序至少的卡片數

    Returns:
        Deck: C(n,2) 張卡片的多重集合

    Raises:
        ValidationError: n < 2
    """
    if s.n < 2:
        raise CommonErrors.deck_needs_two_elements(s.n)

    started = time.perf_counter()
    tasks = [(s, pair, max_n) for pair in all_pairs(s.n)]
    forms = parallel_map(_card_form, tasks, workers, min_items_per_worker)
    performance_logger.log_deck_performance("sperner", len(forms), workers, time.perf_counter() - started)
    return Deck(s.n, "sperner", Multiset(forms))


def _check_same_size(a: SetSystem, b: SetSystem) -> None:
    if a.n != b.n:
        raise CommonErrors.size_mismatch(a.n, b.n)


def hypomorphic(a: SetSystem, b: SetSystem, workers: int = 1, max_n: int = CANONICAL_MAX_N) -> bool:
    """兩系統的 Sperner 牌組相等。"""
    _check_same_size(a, b)
    return sperner_deck(a, workers, max_n) == sperner_deck(b, workers, max_n)


def strongly_hypomorphic(a: SetSystem, b: SetSystem, max_n: int = CANONICAL_MAX_N) -> bool:
    """
    對每個識別對 I，card(a, I) 與 card(b, I) 同構。

    Raises:
        ValidationError: 基底集合大小不同或 n < 2
    """
    _check_same_size(a, b)
    if a.n < 2:
        raise CommonErrors.deck_needs_two_elements(a.n)
    for pair in all_pairs(a.n):
        if canonical_form(card(a, pair), max_n=max_n) != canonical_form(card(b, pair), max_n=max_n):
            logger.debug(f"識別對 {pair} 的卡片不同構")
            return False
    return True


def card_isomorphisms(
    a: SetSystem, b: SetSystem, max_n: int = CANONICAL_MAX_N
) -> dict[IdentPair, Optional[Permutation]]:
    """
    逐識別對尋找卡片同構見證。

    Returns:
        dict: 識別對 → σ（σ(card(a, I)) = card(b, I)），不同構時為 None
    """
    _check_same_size(a, b)
    if a.n < 2:
        raise CommonErrors.deck_needs_two_elements(a.n)
    return {
        pair: find_isomorphism(card(a, pair), card(b, pair), max_n=max_n)
        for pair in all_pairs(a.n)
    }


# =============================================================================
# 超圖刪點
# =============================================================================


def vertex_deleted(s: SetSystem, v: int) -> SetSystem:
    """
    刪除頂點 v：捨棄含 v 的區塊，大於 v 的標籤減一。

    Raises:
        GroundSetError: v 超出基底集合，或 n = 1（結果沒有基底集合）
    """
    if not 1 <= v <= s.n:
        raise GroundSetError(f"頂點 {v} 超出基底集合 1..{s.n}", n=s.n, element=v)
    if s.n < 2:
        raise GroundSetError("刪點後基底集合為空，需要 n ≥ 2", n=s.n, element=v)
    bit = 1 << (v - 1)
    low = bit - 1
    kept = frozenset((mask & low) | ((mask >> v) << (v - 1)) for mask in s.blocks if not mask & bit)
    return SetSystem(s.n - 1, kept)


def _deletable_vertices(n: int) -> range:
    # n = 1 時刪點後沒有基底集合，牌組為空
    return range(1, n + 1) if n >= 2 else range(0)


def _vertex_card_form(task: tuple[SetSystem, int, int]) -> CanonicalForm:
    s, v, max_n = task
    return canonical_form(vertex_deleted(s, v), max_n=max_n)


def hypergraph_deck(
    s: SetSystem,
    workers: int = 1,
    max_n: int = CANONICAL_MAX_N,
    min_items_per_worker: int = 8,
) -> Deck:
    """
    計算超圖刪點牌組。

    Returns:
        Deck: n 張卡片的多重集合；n = 1 時沒有可刪的頂點，牌組為空
    """
    started = time.perf_counter()
    tasks = [(s, v, max_n) for v in _deletable_vertices(s.n)]
    forms = parallel_map(_vertex_card_form, tasks, workers, min_items_per_worker)
    performance_logger.log_deck_performance("hypergraph", len(forms), workers, time.perf_counter() - started)
    return Deck(s.n, "hypergraph", Multiset(forms))


def hypergraph_hypomorphic(a: SetSystem, b: SetSystem, workers: int = 1, max_n: int = CANONICAL_MAX_N) -> bool:
    _check_same_size(a, b)
    return hypergraph_deck(a, workers, max_n) == hypergraph_deck(b, workers, max_n)


def hypergraph_strongly_hypomorphic(a: SetSystem, b: SetSystem, max_n: int = CANONICAL_MAX_N) -> bool:
    """對每個頂點 v，a − v 與 b − v 同構。"""
    _check_same_size(a, b)
    return all(
        canonical_form(vertex_deleted(a, v), max_n=max_n) == canonical_form(vertex_deleted(b, v), max_n=max_n)
        for v in _deletable_vertices(a.n)
    )


def vertex_card_isomorphisms(
    a: SetSystem, b: SetSystem, max_n: int = CANONICAL_MAX_N
) -> dict[int, Optional[Permutation]]:
    """逐頂點尋找刪點卡片的同構見證。"""
    _check_same_size(a, b)
    return {
        v: find_isomorphism(vertex_deleted(a, v), vertex_deleted(b, v), max_n=max_n)
        for v in _deletable_vertices(a.n)
    }


def essential_counts(deck: Deck) -> Multiset:
    """
    統計牌組中每張卡片的本質元素個數（依重數加權）。

    Returns:
        Multiset: 本質元素個數 → 卡片張數
    """
    counts: dict[int, int] = {}
    for form, multiplicity in deck.cards.items():
        union = 0
        for mask in form.blocks:
            union |= mask
        size = union.bit_count()
        counts[size] = counts.get(size, 0) + multiplicity
    return Multiset(counts)

