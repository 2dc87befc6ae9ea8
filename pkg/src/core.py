#!/usr/bin/env python3
"""
核心資料型別模組
================

提供其他模組共用的基本詞彙：基底集合、區塊、集合系統、
Sperner 系統、置換與多重集合。

區塊以整數位元遮罩表示：第 i 位元代表元素 i+1。
所有型別建構後即不可變，可在執行緒與程序之間自由傳遞。

使用範例：
    >>> from src.core import SetSystem, minimalize
    >>> s = SetSystem.from_blocks(3, [[1, 2], [1], [2, 3]])
    >>> minimalize(s).block_tuples()
    [(1,), (2, 3)]
"""

import logging
from collections import Counter
from collections.abc import Hashable, Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Generic, Optional, TypeVar

from .exceptions import AntichainError, GroundSetError, PermutationError, ValidationError

logger = logging.getLogger(__name__)

MAX_GROUND_SIZE = 64

K = TypeVar("K", bound=Hashable)


# =============================================================================
# 區塊工具
# =============================================================================


def block_from_labels(labels: Iterable[int], n: Optional[int] = None) -> int:
    """
    將 1 起算的元素標籤轉為位元遮罩。

    Args:
        labels: 元素標籤
        n: 基底集合大小（提供時檢查範圍）

    Returns:
        int: 位元遮罩

    Raises:
        GroundSetError: 標籤超出 1..n
    """
    mask = 0
    for label in labels:
        label = int(label)
        if label < 1 or (n is not None and label > n):
            raise GroundSetError(f"元素 {label} 超出基底集合 1..{n}", n=n, element=label)
        mask |= 1 << (label - 1)
    return mask


def block_labels(mask: int) -> tuple[int, ...]:
    """返回區塊的元素標籤（遞增）。"""
    labels = []
    position = 1
    while mask:
        if mask & 1:
            labels.append(position)
        mask >>= 1
        position += 1
    return tuple(labels)


def block_size(mask: int) -> int:
    return mask.bit_count()


def is_subset(a: int, b: int) -> bool:
    """a ⊆ b"""
    return a & b == a


# =============================================================================
# 基本型別
# =============================================================================


@dataclass(frozen=True)
class GroundSet:
    """
    基底集合 {1, ..., n}。

    Attributes:
        n: 元素個數，1 ≤ n ≤ 64
    """

    n: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_GROUND_SIZE:
            raise GroundSetError(
                f"基底集合大小必須在 1..{MAX_GROUND_SIZE} 之間: {self.n}", n=self.n
            )

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def elements(self) -> range:
        return range(1, self.n + 1)

    def __contains__(self, element: int) -> bool:
        return 1 <= element <= self.n


@dataclass(frozen=True, eq=False)
class SetSystem:
    """
    基底集合 [n] 上的集合系統。

    區塊以不重複的位元遮罩集合儲存。相等比較只看 (n, blocks)，
    因此 SetSystem 與內容相同的 SpernerSystem 視為相等。

    Attributes:
        n: 基底集合大小
        blocks: 區塊位元遮罩的集合
    """

    n: int
    blocks: frozenset

    def __post_init__(self):
        ground = GroundSet(self.n)
        if not isinstance(self.blocks, frozenset):
            object.__setattr__(self, "blocks", frozenset(self.blocks))
        for mask in self.blocks:
            if mask < 0:
                raise GroundSetError(f"區塊遮罩不可為負: {mask}", n=self.n)
            if mask > ground.full_mask:
                raise GroundSetError(
                    f"區塊 {block_labels(mask)} 超出基底集合 1..{self.n}",
                    n=self.n,
                    element=mask.bit_length(),
                )

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]):
        """
        從 1 起算的標籤列表建構集合系統。

        Args:
            n: 基底集合大小
            blocks: 區塊列表，每個區塊為元素標籤的可迭代物件

        Returns:
            集合系統（若以 SpernerSystem 呼叫則檢查反鏈條件）

        Raises:
            ValidationError: 出現重複區塊
            GroundSetError: 元素超出範圍
        """
        GroundSet(n)
        masks = [block_from_labels(block, n) for block in blocks]
        counts = Counter(masks)
        duplicates = [block_labels(mask) for mask, c in counts.items() if c > 1]
        if duplicates:
            raise ValidationError(
                f"集合系統不允許重複區塊: {duplicates[0]}", field="blocks", value=duplicates
            )
        return cls(n, frozenset(masks))

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.n)

    def sorted_blocks(self) -> list[int]:
        """依整數值排序的區塊遮罩。"""
        return sorted(self.blocks)

    def block_tuples(self) -> list[tuple[int, ...]]:
        """依（大小, 字典序）排序的區塊標籤列表。"""
        return sorted((block_labels(mask) for mask in self.blocks), key=lambda t: (len(t), t))

    def as_set_system(self) -> "SetSystem":
        return SetSystem(self.n, self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted_blocks())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetSystem):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, t)) + "}" for t in self.block_tuples())
        return f"{type(self).__name__}(n={self.n}, {{{body}}})"


@dataclass(frozen=True, eq=False, repr=False)
class SpernerSystem(SetSystem):
    """
    Sperner 系統：沒有任何區塊包含另一區塊的集合系統。

    Raises:
        AntichainError: 建構時違反反鏈條件
    """

    def __post_init__(self):
        super().__post_init__()
        witness = antichain_violation(self)
        if witness is not None:
            raise AntichainError(
                f"區塊 {block_labels(witness[0])} 包含於 {block_labels(witness[1])}",
                witness=(block_labels(witness[0]), block_labels(witness[1])),
            )


@dataclass(frozen=True)
class Permutation:
    """
    基底集合 {1, ..., n} 上的置換。

    images[k] 為元素 k+1 的像。

    Attributes:
        images: 長度 n 的像序列
    """

    images: tuple

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise PermutationError(f"不是 1..{len(images)} 上的雙射: {list(images)}", images=images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        """交換 i 與 j 的對換。"""
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> "Permutation":
        """從部分對應建構置換，未列出的元素保持不動。"""
        return cls(tuple(mapping.get(x, x) for x in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, element: int) -> int:
        return self.images[element - 1]

    def inverse(self) -> "Permutation":
        inverse = [0] * self.n
        for source, target in enumerate(self.images, start=1):
            inverse[target - 1] = source
        return Permutation(tuple(inverse))

    def compose(self, other: "Permutation") -> "Permutation":
        """返回 self ∘ other（先套用 other）。"""
        if other.n != self.n:
            raise PermutationError(f"置換大小不符: {self.n} != {other.n}", images=other.images)
        return Permutation(tuple(self(other(x)) for x in range(1, self.n + 1)))

    def apply_to_block(self, mask: int) -> int:
        image = 0
        for label in block_labels(mask):
            image |= 1 << (self.images[label - 1] - 1)
        return image

    def is_identity(self) -> bool:
        return all(image == k for k, image in enumerate(self.images, start=1))

    def one_line(self) -> str:
        """單行表示法，例如 "2 1 3"。"""
        return " ".join(map(str, self.images))


class Multiset(Mapping, Generic[K]):
    """
    不可變的多重集合。

    只儲存正的重數；基數為重數總和。可作為字典鍵。
    """

    __slots__ = ("_counts", "_hash")

    def __init__(self, items: Optional[Iterable[K] | Mapping[K, int]] = None):
        if items is None:
            counts: Counter = Counter()
        elif isinstance(items, Mapping):
            counts = Counter()
            for key, multiplicity in items.items():
                if multiplicity < 0:
                    raise ValidationError(
                        f"重數不可為負: {key} → {multiplicity}", field="multiplicity", value=multiplicity
                    )
                if multiplicity:
                    counts[key] = int(multiplicity)
        else:
            counts = Counter(items)
        self._counts = dict(counts)
        self._hash: Optional[int] = None

    def __getitem__(self, key: K) -> int:
        return self._counts[key]

    def __iter__(self) -> Iterator[K]:
        return iter(self._counts)

    def __len__(self) -> int:
        return len(self._counts)

    def get(self, key, default=0):
        return self._counts.get(key, default)

    @property
    def cardinality(self) -> int:
        return sum(self._counts.values())

    def sorted_items(self) -> list[tuple[K, int]]:
        """依鍵排序的 (鍵, 重數) 列表；鍵必須可比較。"""
        return sorted(self._counts.items())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Multiset):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __reduce__(self):
        return (Multiset, (self._counts,))

    def __repr__(self) -> str:
        return f"Multiset({self._counts!r})"


# =============================================================================
# 操作
# =============================================================================


def antichain_violation(s: SetSystem) -> Optional[tuple[int, int]]:
    """返回第一組 (S, T) 使 S ⊊ T，不存在時返回 None。"""
    ordered = sorted(s.blocks, key=lambda mask: (block_size(mask), mask))
    for index, small in enumerate(ordered):
        for large in ordered[index + 1:]:
            if is_subset(small, large):
                return small, large
    return None


def is_antichain(s: SetSystem) -> bool:
    """
    判斷集合系統是否為反鏈。

    Args:
        s: 集合系統

    Returns:
        bool: 沒有任何區塊包含另一個相異區塊時為 True
    """
    return antichain_violation(s) is None


def minimalize(s: SetSystem) -> SpernerSystem:
    """
    取出包含關係下的極小區塊。

    Args:
        s: 集合系統

    Returns:
        SpernerSystem: 恰為 s 的極小區塊
    """
    kept: list[int] = []
    for mask in sorted(s.blocks, key=lambda b: (block_size(b), b)):
        if not any(is_subset(small, mask) for small in kept):
            kept.append(mask)
    return SpernerSystem(s.n, frozenset(kept))


def apply_permutation(s: SetSystem, sigma: Permutation) -> SetSystem:
    """
    逐區塊套用置換。

    返回與輸入相同的型別（Sperner 系統的像仍是 Sperner 系統）。

    Raises:
        PermutationError: 置換與基底集合大小不符
    """
    if sigma.n != s.n:
        raise PermutationError(
            f"置換大小 {sigma.n} 與基底集合大小 {s.n} 不符", images=sigma.images
        )
    return type(s)(s.n, frozenset(sigma.apply_to_block(mask) for mask in s.blocks))


def essential_elements(s: SetSystem) -> frozenset[int]:
    """返回所有區塊的聯集（本質元素）。"""
    union = 0
    for mask in s.blocks:
        union |= mask
    return frozenset(block_labels(union))


def complement_system(s: SetSystem) -> SetSystem:
    """逐區塊取相對於基底集合的補集。"""
    full = s.ground.full_mask
    return type(s)(s.n, frozenset(full ^ mask for mask in s.blocks))


def homogeneity(s: SetSystem) -> Optional[int]:
    """所有區塊大小皆為 k 時返回 k，否則返回 None（空系統亦返回 None）。"""
    sizes = {mask.bit_count() for mask in s.blocks}
    return sizes.pop() if len(sizes) == 1 else None


def is_totally_symmetric(s: SetSystem) -> bool:
    """
    判斷集合系統在基底集合的所有置換下是否不變。

    相鄰對換生成整個對稱群，因此只檢查 (i, i+1)。
    """
    return all(
        apply_permutation(s, Permutation.transposition(s.n, i, i + 1)) == s
        for i in range(1, s.n)
    )
