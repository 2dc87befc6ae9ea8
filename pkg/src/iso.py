#!/usr/bin/env python3
"""
同構與正規形式模組
==================

計算集合系統的正規形式、同構見證與附錄式顯示標籤。

正規形式搜尋：
    1. 以 ElementInvariant（出現次數、所在區塊大小的多重集合）為初始顏色
    2. 反覆細化顏色直到分割穩定（同構不變）
    3. 依顏色順序逐位置回溯指派標籤，只允許同色元素佔用該色的位置
    4. 以目前最佳編碼做前綴剪枝；位於完全相同區塊中的元素（孿生元素）
       每個位置只嘗試一個

編碼為排序後的區塊遮罩列表（第 i 位元代表元素 i+1），以字典序比較。

正規形式是「與穩定顏色分割相容的標籤」中編碼最小者，而不是全部 n! 個
重新標記中的最小者。顏色細化與同構相容，所以兩個系統同構若且唯若正規形式
相等；但正規形式不一定是整個同構類的字典序最小代表。需要全域最小
（附錄式標籤）時使用 display_form，它在 n ≤ display_max_n 時窮舉全部置換。
"""

import logging
import time
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Optional

from .core import Permutation, SetSystem, SpernerSystem, apply_permutation, block_labels, is_antichain
from .exceptions import CommonErrors, ReconstructionError
from .logging_setup import performance_logger

logger = logging.getLogger(__name__)

CANONICAL_MAX_N = 16
DISPLAY_MAX_N = 7
SHORTHAND_MAX_N = 9


# =============================================================================
# 型別
# =============================================================================


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """
    集合系統的正規形式。

    全序且可雜湊，可直接作為多重集合的鍵。

    Attributes:
        n: 基底集合大小
        blocks: 排序後的區塊遮罩
    """

    n: int
    blocks: tuple

    def to_system(self) -> SetSystem:
        if is_antichain(SetSystem(self.n, frozenset(self.blocks))):
            return SpernerSystem(self.n, frozenset(self.blocks))
        return SetSystem(self.n, frozenset(self.blocks))

    def shorthand(self, display_max_n: int = DISPLAY_MAX_N) -> str:
        return shorthand(self.to_system(), display_max_n=display_max_n)

    def __str__(self) -> str:
        return self.shorthand()


@dataclass(frozen=True, order=True)
class ElementInvariant:
    """單一元素的同構不變量。"""

    count: int
    block_sizes: tuple


# =============================================================================
# 不變量與顏色細化
# =============================================================================


def element_invariants(s: SetSystem) -> tuple[ElementInvariant, ...]:
    """
    計算每個元素的 ElementInvariant。

    Returns:
        tuple: 第 k 項對應元素 k+1
    """
    sizes: list[list[int]] = [[] for _ in range(s.n)]
    for mask in s.blocks:
        size = mask.bit_count()
        for label in block_labels(mask):
            sizes[label - 1].append(size)
    return tuple(ElementInvariant(len(found), tuple(sorted(found))) for found in sizes)


def _rank(values: list) -> list[int]:
    order = {value: rank for rank, value in enumerate(sorted(set(values)))}
    return [order[value] for value in values]


def refine_colours(s: SetSystem) -> list[int]:
    """
    以元素不變量為起點反覆細化元素顏色。

    每輪的新顏色由舊顏色與「所在各區塊的成員顏色多重集合」決定，
    直到顏色類別數不再增加。

    Returns:
        list[int]: 第 k 項為元素 k+1 的顏色序號
    """
    members = [[label - 1 for label in block_labels(mask)] for mask in s.sorted_blocks()]
    containing: list[list[int]] = [[] for _ in range(s.n)]
    for index, elements in enumerate(members):
        for element in elements:
            containing[element].append(index)

    colours = _rank(list(element_invariants(s)))
    while True:
        signatures = []
        for element in range(s.n):
            around = sorted(
                tuple(sorted(colours[x] for x in members[index])) for index in containing[element]
            )
            signatures.append((colours[element], tuple(around)))
        refined = _rank(signatures)
        if len(set(refined)) == len(set(colours)):
            return refined
        colours = refined


# =============================================================================
# 正規標記搜尋
# =============================================================================


class _LabelingSearch:
    """單一集合系統的回溯搜尋狀態。"""

    def __init__(self, s: SetSystem):
        self.n = s.n
        blocks = [mask for mask in s.sorted_blocks() if mask]
        self.prefix = [0] if 0 in s.blocks else []
        self.total = len(s.blocks)
        self.containing: list[list[int]] = [[] for _ in range(s.n)]
        self.remaining = []
        for index, mask in enumerate(blocks):
            labels = block_labels(mask)
            self.remaining.append(len(labels))
            for label in labels:
                self.containing[label - 1].append(index)
        self.codes = [0] * len(blocks)

        colours = refine_colours(s)
        self.order = sorted(range(s.n), key=lambda e: (colours[e], e))
        self.position_cell = [colours[e] for e in self.order]
        self.cells: dict[int, list[int]] = {}
        for element in self.order:
            self.cells.setdefault(colours[element], []).append(element)

        # 孿生元素：所在區塊集合完全相同
        twin_key = {}
        self.twin_class = []
        for element in range(s.n):
            key = tuple(self.containing[element])
            self.twin_class.append(twin_key.setdefault(key, element))

        self.best: Optional[list[int]] = None
        self.best_labels: Optional[list[int]] = None
        self.labels = [-1] * s.n
        self.nodes = 0

    def run(self) -> tuple[list[int], list[int]]:
        self._extend(0, list(self.prefix))
        return self.best, self.best_labels

    def _candidates(self, depth: int) -> list[int]:
        seen_twins = set()
        found = []
        for element in self.cells[self.position_cell[depth]]:
            if self.labels[element] >= 0:
                continue
            twin = self.twin_class[element]
            if twin in seen_twins:
                continue
            seen_twins.add(twin)
            found.append(element)
        return found

    def _compare(self, encoding: list[int], depth: int) -> int:
        """-1 表示較佳，1 表示較差（剪枝），0 表示平手。"""
        best = self.best
        if best is None:
            return -1
        limit = bisect_left(best, 1 << (depth + 1))
        common = min(len(encoding), limit)
        head, reference = encoding[:common], best[:common]
        if head != reference:
            return -1 if head < reference else 1
        if len(encoding) < limit:
            return 1
        if len(encoding) > limit:
            return -1
        return 0

    def _extend(self, depth: int, encoding: list[int]) -> None:
        self.nodes += 1
        bit = 1 << depth
        for element in self._candidates(depth):
            self.labels[element] = depth
            completed = []
            for index in self.containing[element]:
                self.codes[index] |= bit
                self.remaining[index] -= 1
                if self.remaining[index] == 0:
                    completed.append(self.codes[index])
            completed.sort()
            extended = encoding + completed

            verdict = self._compare(extended, depth)
            if verdict <= 0:
                if depth + 1 == self.n:
                    if self.best is None or extended < self.best:
                        self.best = extended
                        self.best_labels = list(self.labels)
                else:
                    self._extend(depth + 1, extended)

            for index in self.containing[element]:
                self.codes[index] &= ~bit
                self.remaining[index] += 1
            self.labels[element] = -1


@lru_cache(maxsize=65536)
def _canonical_labeling_cached(s: SetSystem) -> tuple[CanonicalForm, Permutation]:
    started = time.perf_counter()
    search = _LabelingSearch(s)
    encoding, labels = search.run()
    performance_logger.log_search_performance(
        s.n, len(s.blocks), search.nodes, time.perf_counter() - started
    )
    return CanonicalForm(s.n, tuple(encoding)), Permutation(tuple(label + 1 for label in labels))


def canonical_labeling(s: SetSystem, max_n: int = CANONICAL_MAX_N) -> tuple[CanonicalForm, Permutation]:
    """
    計算正規形式與對應的標記。

    Args:
        s: 集合系統
        max_n: 精確搜尋允許的最大基底集合

    Returns:
        tuple: (正規形式, 置換)，置換把 s 的元素送到正規標籤，
        即 apply_permutation(s, 置換) 的區塊恰為正規形式的區塊

    Raises:
        CanonicalizationCapError: n 超出 max_n
    """
    if s.n > max_n:
        raise CommonErrors.canonical_cap(s.n, max_n)
    return _canonical_labeling_cached(s.as_set_system())


def canonical_form(s: SetSystem, max_n: int = CANONICAL_MAX_N) -> CanonicalForm:
    """返回集合系統的正規形式；兩系統同構若且唯若正規形式相等。"""
    return canonical_labeling(s, max_n=max_n)[0]


def find_isomorphism(
    a: SetSystem, b: SetSystem, max_n: int = CANONICAL_MAX_N
) -> Optional[Permutation]:
    """
    尋找使 σ(a) = b 的置換。

    Args:
        a: 來源集合系統
        b: 目標集合系統
        max_n: 精確搜尋上限

    Returns:
        Optional[Permutation]: 同構見證；不同構時為 None

    Raises:
        ValidationError: 基底集合大小不同
    """
    if a.n != b.n:
        raise CommonErrors.size_mismatch(a.n, b.n)
    if len(a.blocks) != len(b.blocks):
        return None
    if sorted(element_invariants(a)) != sorted(element_invariants(b)):
        return None

    form_a, label_a = canonical_labeling(a, max_n=max_n)
    form_b, label_b = canonical_labeling(b, max_n=max_n)
    if form_a != form_b:
        return None

    sigma = label_b.inverse().compose(label_a)
    if apply_permutation(a.as_set_system(), sigma) != b:
        raise ReconstructionError(
            "同構見證驗證失敗",
            error_code="ISOMORPHISM_WITNESS_ERROR",
            details={"a": repr(a), "b": repr(b), "witness": sigma.one_line()},
        )
    logger.debug(f"找到同構見證: {sigma.one_line()}")
    return sigma


def is_isomorphic(a: SetSystem, b: SetSystem, max_n: int = CANONICAL_MAX_N) -> bool:
    return find_isomorphism(a, b, max_n=max_n) is not None


# =============================================================================
# 附錄式顯示
# =============================================================================


def _display_key(blocks: list[tuple[int, ...]]) -> tuple:
    return tuple(sorted((len(t), t) for t in blocks))


@lru_cache(maxsize=16384)
def _display_of(form: CanonicalForm) -> SetSystem:
    blocks = [block_labels(mask) for mask in form.blocks]
    best_key = None
    for images in permutations(range(1, form.n + 1)):
        key = _display_key([tuple(sorted(images[x - 1] for x in t)) for t in blocks])
        if best_key is None or key < best_key:
            best_key = key
    masks = frozenset(sum(1 << (x - 1) for x in t) for _, t in best_key)
    return SetSystem(form.n, masks)


def display_form(
    s: SetSystem, display_max_n: int = DISPLAY_MAX_N, max_n: int = CANONICAL_MAX_N
) -> SetSystem:
    """
    返回與 s 同構、在顯示順序下最小的系統。

    顯示順序：區塊先依大小再依字典序排列，系統以區塊列表的字典序比較。
    n 超過 display_max_n 時改用正規形式本身。
    """
    form = canonical_form(s, max_n=max_n)
    if s.n > display_max_n:
        shown = form.to_system()
    else:
        shown = _display_of(form)
    return type(s)(shown.n, shown.blocks) if isinstance(s, SpernerSystem) else shown


def display_key(s: SetSystem, display_max_n: int = DISPLAY_MAX_N) -> tuple:
    """表格列與欄的排序鍵。"""
    return _display_key(display_form(s, display_max_n=display_max_n).block_tuples())


def format_blocks(s: SetSystem) -> str:
    """
    以簡寫格式輸出集合系統（不重新標記）。

    n ≤ 9 時元素直接並列，例如 "12,13,23"；否則使用 "{1,10},{2,3}"。
    空系統為 "∅"，只含空區塊的系統為 "{∅}"。
    """
    tuples = s.block_tuples()
    if not tuples:
        return "∅"
    if tuples == [()]:
        return "{∅}"
    if s.n <= SHORTHAND_MAX_N:
        return ",".join("".join(map(str, t)) if t else "∅" for t in tuples)
    return ",".join("{" + ",".join(map(str, t)) + "}" for t in tuples)


def shorthand(s: SetSystem, display_max_n: int = DISPLAY_MAX_N) -> str:
    """以附錄式標籤輸出集合系統的同構類。"""
    return format_blocks(display_form(s, display_max_n=display_max_n))
