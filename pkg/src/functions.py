#!/usr/bin/env python3
"""
多元函數模組
============

有限多元函數 f : Aⁿ → B 的表格表示、識別子式、等價判定、牌組、
Sperner 系統與（截斷）項函數之間的橋接、布林克隆成員判定，
以及保持不可重建性的四種變換。

表格以 numpy 陣列儲存，形狀為 (|A|,) * n，最後一個參數變化最快
（混合基數的列優先順序）。載體元素為 0..|A|−1，鏈依數值排序。

使用範例：
    >>> from src.core import SpernerSystem
    >>> from src.functions import sperner_to_function, clone_membership
    >>> majority = sperner_to_function(SpernerSystem.from_blocks(3, [[1, 2], [1, 3], [2, 3]]))
    >>> clone_membership(majority).members["SM"]
    True
"""

import logging
import math
import time
from collections.abc import Callable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Any, Optional

import numpy as np

from .core import Multiset, SetSystem, SpernerSystem, block_labels
from .exceptions import (
    AntichainError,
    CommonErrors,
    FunctionShapeError,
    ParseError,
    ResourceCapError,
)
from .logging_setup import performance_logger
from .minors import IdentPair, all_pairs, parallel_map

logger = logging.getLogger(__name__)

FUNCTION_MAX_PERMUTATIONS = 362880


# =============================================================================
# 型別
# =============================================================================


@dataclass(frozen=True, eq=False)
class FiniteFunction:
    """
    有限函數 f : Aⁿ → B。

    Attributes:
        domain: |A|
        codomain: |B|
        table: 形狀 (|A|,) * n 的整數陣列（唯讀）
    """

    domain: int
    codomain: int
    table: np.ndarray

    def __post_init__(self):
        if self.domain < 1 or self.codomain < 1:
            raise FunctionShapeError(
                f"載體大小必須為正: |A|={self.domain}, |B|={self.codomain}",
                field="carrier",
                value=(self.domain, self.codomain),
            )
        table = np.array(self.table, dtype=np.int64)
        if any(size != self.domain for size in table.shape):
            raise FunctionShapeError(
                f"表格形狀 {table.shape} 與 |A|={self.domain} 不符", field="table", value=table.shape
            )
        if table.size and (table.min() < 0 or table.max() >= self.codomain):
            raise FunctionShapeError(
                f"表格的值必須在 0..{self.codomain - 1} 之間", field="table", value=(table.min(), table.max())
            )
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_table(cls, domain: int, codomain: int, arity: int, values: Sequence[int]) -> "FiniteFunction":
        """
        從扁平表格建構函數。

        Raises:
            FunctionShapeError: 表格長度不等於 |A|^n
        """
        if arity < 0:
            raise FunctionShapeError(f"元數不可為負: {arity}", field="arity", value=arity)
        expected = domain ** arity
        if len(values) != expected:
            raise FunctionShapeError(
                f"表格長度必須是 |A|^n = {expected}: 實際 {len(values)}", field="table", value=len(values)
            )
        return cls(domain, codomain, np.asarray(values, dtype=np.int64).reshape((domain,) * arity))

    @classmethod
    def from_callable(cls, domain: int, codomain: int, arity: int, rule: Callable[..., int]) -> "FiniteFunction":
        values = [rule(*point) for point in product(range(domain), repeat=arity)]
        return cls.from_table(domain, codomain, arity, values)

    @classmethod
    def from_json_dict(cls, data: Mapping[str, Any]) -> "FiniteFunction":
        """從 {"domain", "codomain", "arity", "table"} 建構。"""
        try:
            return cls.from_table(int(data["domain"]), int(data["codomain"]), int(data["arity"]), list(data["table"]))
        except (KeyError, TypeError) as e:
            raise ParseError(f"函數 JSON 缺少欄位或格式錯誤: {e}", cause=e)

    def to_json_dict(self) -> dict:
        return {
            "domain": self.domain,
            "codomain": self.codomain,
            "arity": self.arity,
            "table": self.table.ravel().tolist(),
        }

    @property
    def arity(self) -> int:
        return self.table.ndim

    @property
    def is_boolean(self) -> bool:
        return self.domain == 2 and self.codomain == 2

    def __call__(self, *arguments: int) -> int:
        return int(self.table[tuple(arguments)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteFunction):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and self.table.shape == other.table.shape
            and np.array_equal(self.table, other.table)
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.table.shape, self.table.tobytes()))

    def __repr__(self) -> str:
        return (
            f"FiniteFunction(|A|={self.domain}, |B|={self.codomain}, n={self.arity}, "
            f"table={self.table.ravel().tolist()})"
        )


@dataclass(frozen=True, order=True)
class FunctionKey:
    """函數等價類的正規鍵：刪除非本質參數後字典序最小的表格。"""

    domain: int
    codomain: int
    arity: int
    table: tuple

    def render(self) -> str:
        if self.codomain <= 10:
            body = "".join(map(str, self.table))
        else:
            body = ",".join(map(str, self.table))
        return f"{self.arity}:{body}"

    def to_function(self) -> FiniteFunction:
        return FiniteFunction.from_table(self.domain, self.codomain, self.arity, list(self.table))


@dataclass(frozen=True)
class FunctionDeck:
    """函數牌組：C(n,2) 個識別子式正規鍵的多重集合。"""

    arity: int
    cards: Multiset

    @property
    def cardinality(self) -> int:
        return self.cards.cardinality

    def render_lines(self) -> list[str]:
        return [f"{key.render()} ×{multiplicity}" for key, multiplicity in self.cards.sorted_items()]


# =============================================================================
# 識別子式與等價
# =============================================================================


def identification_minor(f: FiniteFunction, pair: IdentPair) -> FiniteFunction:
    """
    識別子式 f_I(a₁, …, a_{n−1}) = f(a₁, …, a_{j−1}, a_i, a_j, …, a_{n−1})。

    Raises:
        FunctionShapeError: n < 2
        IdentPairError: 識別對超出 [n]
    """
    if f.arity < 2:
        raise FunctionShapeError(f"識別子式需要元數 ≥ 2: n={f.arity}", field="arity", value=f.arity)
    pair.check_within(f.arity)
    diagonal = np.diagonal(f.table, axis1=pair.i - 1, axis2=pair.j - 1)
    table = np.ascontiguousarray(np.moveaxis(diagonal, -1, pair.i - 1))
    return FiniteFunction(f.domain, f.codomain, table)


def essential_args(f: FiniteFunction) -> frozenset[int]:
    """返回本質參數的索引（1 起算）。"""
    essential = set()
    for axis in range(f.arity):
        base = np.take(f.table, [0], axis=axis)
        if not np.all(f.table == base):
            essential.add(axis + 1)
    return frozenset(essential)


def delete_inessential(f: FiniteFunction) -> FiniteFunction:
    """刪除所有非本質參數，保持其餘參數的相對順序。"""
    table = f.table
    keep = essential_args(f)
    for axis in reversed(range(f.arity)):
        if axis + 1 not in keep:
            table = np.take(table, 0, axis=axis)
    # 常數函數保持 0 維
    return FiniteFunction(f.domain, f.codomain, np.array(table))


def _argument_profiles(table: np.ndarray, codomain: int) -> list[tuple]:
    """
    每個參數的同構不變輪廓。

    第一層為「固定該參數為 v 時輸出值的直方圖」；
    第二層再加入與其他每個參數成對固定時的直方圖（排序後）。
    """
    arity = table.ndim
    domain = table.shape[0] if arity else 0

    def histogram(values: np.ndarray) -> tuple:
        return tuple(np.bincount(values.ravel(), minlength=codomain).tolist())

    first = [
        tuple(histogram(np.take(table, v, axis=axis)) for v in range(domain))
        for axis in range(arity)
    ]
    profiles = []
    for axis in range(arity):
        around = []
        for other in range(arity):
            if other == axis:
                continue
            pairs = []
            for v in range(domain):
                fixed = np.take(table, v, axis=axis)
                reduced = other if other < axis else other - 1
                pairs.append(tuple(histogram(np.take(fixed, w, axis=reduced)) for w in range(domain)))
            around.append((first[other], tuple(pairs)))
        profiles.append((first[axis], tuple(sorted(around))))
    return profiles


def canonical_key(f: FiniteFunction, max_permutations: int = FUNCTION_MAX_PERMUTATIONS) -> FunctionKey:
    """
    計算函數等價類的正規鍵。

    先刪除非本質參數，再依參數輪廓分格，只在輪廓相同的參數之間置換，
    取字典序最小的表格。

    Raises:
        ResourceCapError: 需要嘗試的置換數超過 max_permutations
    """
    g = delete_inessential(f)
    arity = g.arity
    if arity == 0:
        return FunctionKey(f.domain, f.codomain, 0, (int(g.table),))

    profiles = _argument_profiles(g.table, g.codomain)
    order = sorted(range(arity), key=lambda axis: profiles[axis])
    cells: list[list[int]] = []
    for axis in order:
        if cells and profiles[cells[-1][0]] == profiles[axis]:
            cells[-1].append(axis)
        else:
            cells.append([axis])

    total = math.prod(math.factorial(len(cell)) for cell in cells)
    if total > max_permutations:
        raise ResourceCapError(
            f"函數正規鍵需要嘗試 {total} 個參數置換，超過上限 {max_permutations}",
            limit_name="function_max_permutations",
            value=total,
            limit=max_permutations,
        )

    best: Optional[tuple] = None
    for choice in product(*(permutations(cell) for cell in cells)):
        axes = [axis for cell in choice for axis in cell]
        candidate = tuple(np.transpose(g.table, axes).ravel().tolist())
        if best is None or candidate < best:
            best = candidate
    return FunctionKey(f.domain, f.codomain, arity, best)


def equivalent(f: FiniteFunction, g: FiniteFunction, max_permutations: int = FUNCTION_MAX_PERMUTATIONS) -> bool:
    """f ≡ g：刪除非本質參數後存在參數置換使兩者相等。"""
    if (f.domain, f.codomain) != (g.domain, g.codomain):
        return False
    if len(essential_args(f)) != len(essential_args(g)):
        return False
    return canonical_key(f, max_permutations) == canonical_key(g, max_permutations)


def _minor_key(task: tuple[FiniteFunction, IdentPair, int]) -> FunctionKey:
    f, pair, max_permutations = task
    return canonical_key(identification_minor(f, pair), max_permutations)


def function_deck(
    f: FiniteFunction,
    workers: int = 1,
    max_permutations: int = FUNCTION_MAX_PERMUTATIONS,
    min_items_per_worker: int = 8,
) -> FunctionDeck:
    """
    函數牌組：所有識別子式的正規鍵。

    Raises:
        FunctionShapeError: n < 2
    """
    if f.arity < 2:
        raise FunctionShapeError(f"函數牌組需要元數 ≥ 2: n={f.arity}", field="arity", value=f.arity)
    started = time.perf_counter()
    tasks = [(f, pair, max_permutations) for pair in all_pairs(f.arity)]
    keys = parallel_map(_minor_key, tasks, workers, min_items_per_worker)
    performance_logger.log_deck_performance("function", len(keys), workers, time.perf_counter() - started)
    return FunctionDeck(f.arity, Multiset(keys))


def function_hypomorphic(f: FiniteFunction, g: FiniteFunction, workers: int = 1) -> bool:
    if f.arity != g.arity:
        raise CommonErrors.size_mismatch(f.arity, g.arity)
    return function_deck(f, workers) == function_deck(g, workers)


def function_strongly_hypomorphic(f: FiniteFunction, g: FiniteFunction) -> bool:
    """對每個 I，f_I ≡ g_I。"""
    if f.arity != g.arity:
        raise CommonErrors.size_mismatch(f.arity, g.arity)
    return all(
        equivalent(identification_minor(f, pair), identification_minor(g, pair))
        for pair in all_pairs(f.arity)
    )


def is_totally_symmetric(f: FiniteFunction) -> bool:
    """函數在所有參數置換下不變（檢查相鄰對換）。"""
    return all(
        np.array_equal(f.table, np.swapaxes(f.table, axis, axis + 1)) for axis in range(f.arity - 1)
    )


# =============================================================================
# Sperner 系統與項函數
# =============================================================================


def sperner_to_function(s: SetSystem, chain_size: int = 2, a: int = 0, b: int = 1) -> FiniteFunction:
    """
    (a, b)-截斷項函數 t^{ab}_𝒜(x) = a ∨ (b ∧ ⋁_S ⋀_{i∈S} xᵢ)，載體為鏈 0 < … < k−1。

    空的聯集為底 0，空的交集為頂 k−1；因此 ∅ 對應常數 a，{∅} 對應常數 b。

    Args:
        s: 集合系統
        chain_size: 鏈長 k ≥ 2
        a: 下截斷值
        b: 上截斷值，a < b < k

    Raises:
        FunctionShapeError: k < 2 或不滿足 0 ≤ a < b < k
    """
    if chain_size < 2:
        raise FunctionShapeError(f"鏈長必須 ≥ 2: k={chain_size}", field="chain_size", value=chain_size)
    if not 0 <= a < b < chain_size:
        raise FunctionShapeError(
            f"截斷值必須滿足 0 ≤ a < b < k: a={a}, b={b}, k={chain_size}", field="truncation", value=(a, b)
        )
    grid = np.indices((chain_size,) * s.n)
    join = np.zeros((chain_size,) * s.n, dtype=np.int64)
    for mask in s.blocks:
        members = [label - 1 for label in block_labels(mask)]
        if members:
            meet = grid[members].min(axis=0)
        else:
            meet = np.full_like(join, chain_size - 1)
        np.maximum(join, meet, out=join)
    table = np.maximum(a, np.minimum(b, join))
    return FiniteFunction(chain_size, chain_size, table)


def term_function(s: SetSystem) -> FiniteFunction:
    """布林項函數 t_𝒜。"""
    return sperner_to_function(s, 2, 0, 1)


def _require_boolean(f: FiniteFunction) -> None:
    if not f.is_boolean:
        raise CommonErrors.non_boolean(f.domain, f.codomain)


def _point_mask(point: Iterable[int]) -> int:
    return sum(1 << k for k, x in enumerate(point) if x)


def minimal_true_points(f: FiniteFunction) -> list[tuple[int, ...]]:
    """布林函數的極小真點（依遮罩遞增）。"""
    _require_boolean(f)
    table = f.table
    found = []
    for point in map(tuple, np.argwhere(table == 1)):
        minimal = True
        for k, x in enumerate(point):
            if x:
                lowered = point[:k] + (0,) + point[k + 1:]
                if table[lowered] == 1:
                    minimal = False
                    break
        if minimal:
            found.append(tuple(int(x) for x in point))
    return sorted(found, key=_point_mask)


def function_to_sperner(f: FiniteFunction) -> SpernerSystem:
    """
    單調布林函數的極小真點所成的 Sperner 系統。

    常數 0 對應 ∅，常數 1 對應 {∅}。

    Raises:
        FunctionShapeError: 非布林函數或元數為 0
        AntichainError: 函數不單調
    """
    _require_boolean(f)
    if f.arity < 1:
        raise FunctionShapeError("需要元數 ≥ 1 才能對應到集合系統", field="arity", value=f.arity)
    if not monotone(f):
        raise AntichainError("函數不單調，無法對應到 Sperner 系統", witness=f.table.ravel().tolist())
    return SpernerSystem(f.arity, frozenset(_point_mask(p) for p in minimal_true_points(f)))


# =============================================================================
# 布林克隆判定
# =============================================================================


def dual(f: FiniteFunction) -> FiniteFunction:
    """對偶 f^d(x) = ¬f(¬x)。"""
    _require_boolean(f)
    return FiniteFunction(2, 2, 1 - np.flip(f.table))


def preserves_0(f: FiniteFunction) -> bool:
    _require_boolean(f)
    return int(f.table[(0,) * f.arity]) == 0


def preserves_1(f: FiniteFunction) -> bool:
    _require_boolean(f)
    return int(f.table[(1,) * f.arity]) == 1


def monotone(f: FiniteFunction) -> bool:
    _require_boolean(f)
    return all(
        np.all(np.take(f.table, 1, axis=axis) >= np.take(f.table, 0, axis=axis))
        for axis in range(f.arity)
    )


def self_dual(f: FiniteFunction) -> bool:
    return dual(f) == f


def a_separating(f: FiniteFunction, a: int, rank: Optional[int] = None) -> bool:
    """
    判斷 f 是否為 a-分離（rank 為 None 表示 ∞）。

    集合 T 為 a-分離：存在 i 使 T 中每點的第 i 座標皆為 a。
    秩 m：f⁻¹(a) 中每個至多 m 元的子集皆為 a-分離。
    """
    _require_boolean(f)
    if a not in (0, 1):
        raise FunctionShapeError(f"a 必須是 0 或 1: {a}", field="a", value=a)
    if rank is not None and rank < 2:
        raise FunctionShapeError(f"秩必須 ≥ 2: {rank}", field="rank", value=rank)
    full = (1 << f.arity) - 1
    masks = [
        sum(1 << k for k, x in enumerate(point) if x == a)
        for point in np.argwhere(f.table == a)
    ]

    def separating(group: Iterable[int]) -> bool:
        common = full
        for mask in group:
            common &= mask
        return common != 0

    if rank is None or rank >= len(masks):
        return separating(masks)
    return all(separating(group) for group in combinations(masks, rank))


def in_lambda(f: FiniteFunction) -> bool:
    """常數函數，或非空參數子集的合取。"""
    _require_boolean(f)
    if not essential_args(f):
        return True
    return monotone(f) and len(minimal_true_points(f)) == 1


def in_V(f: FiniteFunction) -> bool:
    """常數函數，或非空參數子集的析取。"""
    _require_boolean(f)
    if not essential_args(f):
        return True
    return monotone(f) and all(sum(point) == 1 for point in minimal_true_points(f))


def linear(f: FiniteFunction) -> bool:
    """f 是否為二元體上的仿射函數 c₀ ⊕ c₁x₁ ⊕ … ⊕ c_nx_n。"""
    _require_boolean(f)
    n = f.arity
    constant = int(f.table[(0,) * n])
    predicted = np.full(f.table.shape, constant, dtype=np.int64)
    grid = np.indices(f.table.shape)
    for k in range(n):
        unit = tuple(1 if i == k else 0 for i in range(n))
        if int(f.table[unit]) != constant:
            predicted = predicted ^ grid[k]
    return bool(np.array_equal(predicted, f.table))


CLONE_ORDER = (
    "T0", "T1", "Tc", "M", "M0", "M1", "Mc", "S", "Sc", "SM",
    "L", "L0", "L1", "LS", "Lc", "U∞", "W∞", "U2", "W2",
    "MU∞", "MW∞", "McU∞", "McW∞", "Λ", "V", "I",
)

RECONSTRUCTIBLE_CLONES = ("Λ", "V", "L")
NONRECONSTRUCTIBLE_CLONES = ("SM", "McU∞", "McW∞")


@dataclass(frozen=True)
class CloneReport:
    """
    克隆成員報告。

    Attributes:
        members: 克隆名稱 → 是否屬於（依 CLONE_ORDER 排列）
        reconstructible_in: f 所屬、且高元數成員皆可重建的克隆（Λ、V、L）
        nonreconstructible_in: f 所屬、且含不可重建成員的最小克隆（SM、McU∞、McW∞）；
            reconstructible_in 非空時為空
    """

    members: dict = field(default_factory=dict)
    reconstructible_in: tuple = ()
    nonreconstructible_in: tuple = ()

    def render_lines(self) -> list[str]:
        lines = [f"{name}\t{'✓' if value else '✗'}" for name, value in self.members.items()]
        lines.append("reconstructible-clones\t" + (",".join(self.reconstructible_in) or "-"))
        lines.append("nonreconstructible-clones\t" + (",".join(self.nonreconstructible_in) or "-"))
        return lines


def clone_membership(f: FiniteFunction) -> CloneReport:
    """計算布林函數對各命名克隆的成員關係。"""
    _require_boolean(f)
    t0, t1, m, s, l = preserves_0(f), preserves_1(f), monotone(f), self_dual(f), linear(f)
    u_inf, w_inf = a_separating(f, 1), a_separating(f, 0)
    u2, w2 = a_separating(f, 1, 2), a_separating(f, 0, 2)
    lam, v = in_lambda(f), in_V(f)
    tc = t0 and t1
    mc = m and tc
    values = {
        "T0": t0, "T1": t1, "Tc": tc,
        "M": m, "M0": m and t0, "M1": m and t1, "Mc": mc,
        "S": s, "Sc": s and tc, "SM": s and m,
        "L": l, "L0": l and t0, "L1": l and t1, "LS": l and s, "Lc": l and tc,
        "U∞": u_inf, "W∞": w_inf, "U2": u2, "W2": w2,
        "MU∞": m and u_inf, "MW∞": m and w_inf, "McU∞": mc and u_inf, "McW∞": mc and w_inf,
        "Λ": lam, "V": v, "I": lam and v,
    }
    members = {name: bool(values[name]) for name in CLONE_ORDER}
    reconstructible_in = tuple(name for name in RECONSTRUCTIBLE_CLONES if members[name])
    # 只有不屬於 Λ、V、L 時才報告含不可重建成員的克隆
    nonreconstructible_in = () if reconstructible_in else tuple(
        name for name in NONRECONSTRUCTIBLE_CLONES if members[name]
    )
    return CloneReport(members, reconstructible_in, nonreconstructible_in)


# =============================================================================
# 保持不可重建性的變換
# =============================================================================


def _check_bijection(values: Sequence[int], size: int, name: str) -> np.ndarray:
    array = np.asarray(values, dtype=np.int64)
    if array.shape != (size,) or sorted(array.tolist()) != list(range(size)):
        raise FunctionShapeError(f"{name} 必須是 0..{size - 1} 上的置換: {list(values)}", field=name, value=list(values))
    return array


def relabel(f: FiniteFunction, phi: Sequence[int], psi: Sequence[int]) -> FiniteFunction:
    """f^{ψ,φ}(a₁, …, a_n) = ψ(f(φ(a₁), …, φ(a_n)))。"""
    phi_array = _check_bijection(phi, f.domain, "phi")
    psi_array = _check_bijection(psi, f.codomain, "psi")
    table = f.table
    for axis in range(f.arity):
        table = np.take(table, phi_array, axis=axis)
    return FiniteFunction(f.domain, f.codomain, psi_array[table])


def modify_diagonal(f: FiniteFunction, delta: Sequence[int]) -> FiniteFunction:
    """f^Δ：對角線 (a, …, a) 上的值改為 Δ(a)，其餘不變。"""
    if len(delta) != f.domain or any(not 0 <= value < f.codomain for value in delta):
        raise FunctionShapeError(
            f"Δ 必須是 A → B 的映射（長度 {f.domain}，值 < {f.codomain}）", field="delta", value=list(delta)
        )
    table = np.array(f.table)
    for value in range(f.domain):
        table[(value,) * f.arity] = delta[value]
    return FiniteFunction(f.domain, f.codomain, table)


def subset_table(elements: Iterable[Any], rule: Callable[[frozenset], int]) -> dict[frozenset, int]:
    """對 elements 的每個非空子集計算 rule，作為 θ 的明確表格。"""
    elements = list(elements)
    return {
        frozenset(chosen): rule(frozenset(chosen))
        for size in range(1, len(elements) + 1)
        for chosen in combinations(elements, size)
    }


def _lookup_theta(theta: Mapping[frozenset, int], key: frozenset, codomain: int) -> int:
    try:
        value = int(theta[key])
    except KeyError as e:
        raise FunctionShapeError(f"θ 缺少子集 {sorted(key)} 的值", field="theta", value=sorted(key), cause=e)
    if not 0 <= value < codomain:
        raise FunctionShapeError(f"θ 的值 {value} 超出 0..{codomain - 1}", field="theta", value=value)
    return value


def extend(
    f: FiniteFunction, new_domain: int, new_codomain: int, theta: Mapping[frozenset, int]
) -> FiniteFunction:
    """
    擴張定義域與值域：Aⁿ 上沿用 f，其餘點取 θ({a₁, …, a_n})。

    Raises:
        FunctionShapeError: A′ ⊉ A、B′ ⊉ B，或 θ 缺值
    """
    if new_domain < f.domain or new_codomain < f.codomain:
        raise FunctionShapeError(
            f"擴張後的載體必須包含原載體: A′={new_domain} < {f.domain} 或 B′={new_codomain} < {f.codomain}",
            field="carrier",
            value=(new_domain, new_codomain),
        )
    table = np.zeros((new_domain,) * f.arity, dtype=np.int64)
    for point in np.ndindex(*table.shape):
        if all(x < f.domain for x in point):
            table[point] = f.table[point]
        else:
            table[point] = _lookup_theta(theta, frozenset(point), new_codomain)
    return FiniteFunction(new_domain, new_codomain, table)


def duplicate_pad(f: FiniteFunction, theta: Mapping[frozenset, int]) -> FiniteFunction:
    """
    複製與填補：定義域 A × {0, 1}，元素 (a, b) 編碼為 a + |A|·b。

    所有 bᵢ 相同時取 f(a₁, …, a_n)，否則取 θ({(a₁, b₁), …, (a_n, b_n)})。
    θ 的鍵為 (a, b) 序對的集合。
    """
    size = f.domain
    table = np.zeros((2 * size,) * f.arity, dtype=np.int64)
    for point in np.ndindex(*table.shape):
        decoded = [(x % size, x // size) for x in point]
        if len({b for _, b in decoded}) <= 1:
            table[point] = f.table[tuple(a for a, _ in decoded)]
        else:
            table[point] = _lookup_theta(theta, frozenset(decoded), f.codomain)
    return FiniteFunction(2 * size, f.codomain, table)
