#!/usr/bin/env python3
"""
不可重建族建構模組
==================

建構 E_m = [m] ∪ [m]′ 上的各個 Sperner 系統族：
𝒢ᵐᵢ、ℱᵐ、ℳᵐᵢ、𝒰ⁿᵢ、Q⟨X|Y⟩ / Q°⟨X|Y⟩、𝒟ᵐ、𝒮ᵐᵢ 與 Qᵐⱼ，
以及完整簽名、簡化簽名等輔助工具。

E_m 的編碼（PrimedGroundEncoding）：
    i  → i        （i ∈ [m]）
    i′ → m + i
    0  → 2m + 1   （𝒰 族）
    0′ → 2m + 2   （𝒰²ᵐ⁺² 族）

[m] 上的模運算一律使用代表元 1..m（m + 1 ≡ 1），集中在 wrap()。
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Optional

from .core import Permutation, SetSystem, SpernerSystem, apply_permutation, block_labels
from .exceptions import FamilyParameterError, ValidationError

logger = logging.getLogger(__name__)

FAMILY_NAMES = ("G", "F", "M", "U", "S")
FAMILY_REFERENCE = re.compile(r"^([GFMUS])(\d+)(?:_([12]))?$")


def wrap(m: int, x: int) -> int:
    """將整數化為 [m] 的代表元 1..m。"""
    return (x - 1) % m + 1


def shift_set(m: int, elements: Iterable[int], q: int) -> frozenset[int]:
    """X + q（模 m）。"""
    return frozenset(wrap(m, x + q) for x in elements)


# =============================================================================
# E_m 編碼
# =============================================================================


@dataclass(frozen=True)
class PrimedGroundEncoding:
    """
    E_m（可附加 0 與 0′）到 [n] 的固定編碼。

    Attributes:
        m: 參數 m ≥ 2
        extras: 附加元素個數（0、1 表示 0、2 表示 0 與 0′）
    """

    m: int
    extras: int = 0

    def __post_init__(self):
        if self.m < 2:
            raise FamilyParameterError(f"E_m 需要 m ≥ 2: m={self.m}", family="E", parameters={"m": self.m})
        if self.extras not in (0, 1, 2):
            raise FamilyParameterError(
                f"附加元素個數必須是 0、1 或 2: {self.extras}", family="E", parameters={"extras": self.extras}
            )

    @property
    def n(self) -> int:
        return 2 * self.m + self.extras

    def unprimed(self, i: int) -> int:
        return wrap(self.m, i)

    def primed(self, i: int) -> int:
        return self.m + wrap(self.m, i)

    @property
    def zero(self) -> int:
        if self.extras < 1:
            raise ValidationError("此編碼不含元素 0", field="extras", value=self.extras)
        return 2 * self.m + 1

    @property
    def zero_prime(self) -> int:
        if self.extras < 2:
            raise ValidationError("此編碼不含元素 0′", field="extras", value=self.extras)
        return 2 * self.m + 2

    def mask(self, unprimed: Iterable[int] = (), primed: Iterable[int] = (), zero: bool = False,
             zero_prime: bool = False) -> int:
        """由未加撇與加撇元素組成區塊遮罩。"""
        mask = 0
        for i in unprimed:
            mask |= 1 << (self.unprimed(i) - 1)
        for i in primed:
            mask |= 1 << (self.primed(i) - 1)
        if zero:
            mask |= 1 << (self.zero - 1)
        if zero_prime:
            mask |= 1 << (self.zero_prime - 1)
        return mask

    def label(self, element: int) -> str:
        """整數標籤的 E_m 名稱，例如 m=3 時 5 → "2′"。"""
        if 1 <= element <= self.m:
            return str(element)
        if self.m < element <= 2 * self.m:
            return f"{element - self.m}′"
        if element == 2 * self.m + 1 and self.extras >= 1:
            return "0"
        if element == 2 * self.m + 2 and self.extras >= 2:
            return "0′"
        raise ValidationError(f"元素 {element} 不在編碼範圍內", field="element", value=element)

    def unprimed_part(self, mask: int) -> frozenset[int]:
        return frozenset(x for x in block_labels(mask) if x <= self.m)

    def primed_part(self, mask: int) -> frozenset[int]:
        return frozenset(x - self.m for x in block_labels(mask) if self.m < x <= 2 * self.m)

    def render_block(self, mask: int) -> str:
        return "{" + ",".join(self.label(x) for x in block_labels(mask)) + "}"

    def render_system(self, s: SetSystem) -> str:
        """以 E_m 名稱輸出集合系統（僅供顯示）。"""
        if not s.blocks:
            return "∅"
        return ",".join(self.render_block(mask) for mask in sorted(s.blocks))


def rotation(m: int, extras: int = 0) -> Permutation:
    """旋轉 ρ = (1 2 … m)(1′ 2′ … m′)；0 與 0′ 不動。"""
    encoding = PrimedGroundEncoding(m, extras)
    images = [encoding.unprimed(i + 1) for i in range(1, m + 1)]
    images += [encoding.primed(i + 1) for i in range(1, m + 1)]
    images += [2 * m + k for k in range(1, extras + 1)]
    return Permutation(tuple(images))


def tau(m: int, i: int, extras: int = 0) -> Permutation:
    """對換 τᵢ = (i i′)。"""
    encoding = PrimedGroundEncoding(m, extras)
    return Permutation.transposition(encoding.n, encoding.unprimed(i), encoding.primed(i))


def rotation_closure(s: SetSystem, m: int, extras: int = 0) -> SetSystem:
    """rot(𝒜) = ⋃ ρⁱ(𝒜)。"""
    rho = rotation(m, extras)
    blocks = set(s.blocks)
    current = s.as_set_system()
    for _ in range(m - 1):
        current = apply_permutation(current, rho)
        blocks.update(current.blocks)
    return SetSystem(s.n, frozenset(blocks))


# =============================================================================
# 𝒢、ℱ、ℳ、𝒰
# =============================================================================


def _check_parity(family: str, parity: int, **parameters) -> None:
    if parity not in (1, 2):
        raise FamilyParameterError(
            f"{family} 族的 parity 必須是 1 或 2: {parity}",
            family=family,
            parameters={**parameters, "parity": parity},
        )


def build_G(m: int, parity: int) -> SpernerSystem:
    """
    建構 𝒢ᵐᵢ = {J ∪ ([m]∖J)′ : |J| 為奇數（i=1）或偶數（i=2）}。

    Args:
        m: m ≥ 2
        parity: 1 或 2

    Returns:
        SpernerSystem: 2^{m−1} 個大小為 m 的區塊，位於 [2m] 上
    """
    if m < 2:
        raise FamilyParameterError(f"𝒢 族需要 m ≥ 2: m={m}", family="G", parameters={"m": m})
    _check_parity("G", parity, m=m)
    encoding = PrimedGroundEncoding(m)
    universe = range(1, m + 1)
    blocks = set()
    for size in range(parity % 2, m + 1, 2):
        for chosen in combinations(universe, size):
            rest = [i for i in universe if i not in chosen]
            blocks.add(encoding.mask(chosen, rest))
    return SpernerSystem(encoding.n, frozenset(blocks))


def build_F(m: int) -> SpernerSystem:
    """
    建構 ℱᵐ = {E_m ∖ {p, p′, (p+1)′} : p ∈ [m]}。

    Returns:
        SpernerSystem: m 個大小為 2m−3 的區塊
    """
    if m < 3:
        raise FamilyParameterError(f"ℱ 族需要 m ≥ 3: m={m}", family="F", parameters={"m": m})
    encoding = PrimedGroundEncoding(m)
    full = (1 << encoding.n) - 1
    blocks = {
        full & ~encoding.mask([p], [p, p + 1])
        for p in range(1, m + 1)
    }
    return SpernerSystem(encoding.n, frozenset(blocks))


def build_M(m: int, parity: int) -> SpernerSystem:
    """建構 ℳᵐᵢ = 𝒢ᵐᵢ ∪ ℱᵐ（2^{m−1} + m 個區塊）。"""
    if m < 3:
        raise FamilyParameterError(f"ℳ 族需要 m ≥ 3: m={m}", family="M", parameters={"m": m})
    _check_parity("M", parity, m=m)
    g = build_G(m, parity)
    f = build_F(m)
    # 反鏈條件由 SpernerSystem 建構時檢查
    return SpernerSystem(g.n, g.blocks | f.blocks)


def build_U(n: int, parity: int) -> SpernerSystem:
    """
    建構 𝒰ⁿᵢ。

    n = 2m+1：{S ∪ {0} : S ∈ ℳᵐᵢ}
    n = 2m+2：上述系統再加上區塊 {0, 0′}

    Args:
        n: 7 以上的整數
        parity: 1 或 2

    Raises:
        FamilyParameterError: n < 7 或 parity 不合法
    """
    if n < 7:
        raise FamilyParameterError(
            f"𝒰 族需要 n = 2m+1 或 2m+2 且 m ≥ 3: n={n}", family="U", parameters={"n": n}
        )
    _check_parity("U", parity, n=n)
    extras = 1 if n % 2 else 2
    m = (n - extras) // 2
    encoding = PrimedGroundEncoding(m, extras)
    zero = 1 << (encoding.zero - 1)
    blocks = {mask | zero for mask in build_M(m, parity).blocks}
    if extras == 2:
        blocks.add(encoding.mask(zero=True, zero_prime=True))
    return SpernerSystem(encoding.n, frozenset(blocks))


# =============================================================================
# Q⟨X|Y⟩ 與簽名
# =============================================================================


@dataclass(frozen=True)
class XYPair:
    """
    [m] 的一對互斥子集 (X, Y)。

    Attributes:
        X: 成對元素 x、x′ 都在區塊中的索引
        Y: 成對元素都不在區塊中的索引
    """

    X: frozenset
    Y: frozenset

    def __post_init__(self):
        object.__setattr__(self, "X", frozenset(self.X))
        object.__setattr__(self, "Y", frozenset(self.Y))
        if self.X & self.Y:
            raise FamilyParameterError(
                f"X 與 Y 必須互斥: X={sorted(self.X)}, Y={sorted(self.Y)}",
                family="Q",
                parameters={"X": sorted(self.X), "Y": sorted(self.Y)},
            )

    def z(self, m: int) -> frozenset[int]:
        return frozenset(range(1, m + 1)) - self.X - self.Y

    def shifted(self, m: int, q: int) -> "XYPair":
        return XYPair(shift_set(m, self.X, q), shift_set(m, self.Y, q))

    def swapped(self) -> "XYPair":
        return XYPair(self.Y, self.X)

    def key(self) -> tuple:
        return tuple(sorted(self.X)), tuple(sorted(self.Y))

    def __str__(self) -> str:
        return f"⟨{set(sorted(self.X)) or '∅'}|{set(sorted(self.Y)) or '∅'}⟩"


def _check_pair(m: int, pair: XYPair) -> None:
    if any(not 1 <= x <= m for x in pair.X | pair.Y):
        raise FamilyParameterError(
            f"X、Y 必須是 [m] 的子集: m={m}, {pair}", family="Q", parameters={"m": m}
        )


def q_set(m: int, pair: XYPair) -> SetSystem:
    """
    Q⟨X|Y⟩：對 x ∈ X 同時包含 x 與 x′，對 y ∈ Y 兩者都不含，
    對 z ∈ Z 恰含其一。

    Returns:
        SetSystem: 2^{|Z|} 個大小為 m + |X| − |Y| 的區塊
    """
    _check_pair(m, pair)
    encoding = PrimedGroundEncoding(m)
    base = encoding.mask(pair.X, pair.X)
    free = sorted(pair.z(m))
    blocks = set()
    for choice in product((False, True), repeat=len(free)):
        unprimed = [z for z, primed in zip(free, choice) if not primed]
        primed = [z for z, primed in zip(free, choice) if primed]
        blocks.add(base | encoding.mask(unprimed, primed))
    return SetSystem(encoding.n, frozenset(blocks))


def q_rot(m: int, pair: XYPair) -> SetSystem:
    """Q°⟨X|Y⟩ = ⋃_q Q⟨X+q|Y+q⟩。"""
    _check_pair(m, pair)
    blocks = set()
    for q in range(m):
        blocks.update(q_set(m, pair.shifted(m, q)).blocks)
    return SetSystem(2 * m, frozenset(blocks))


def rotation_class_representative(m: int, pair: XYPair) -> XYPair:
    """旋轉類中字典序最小的 (X, Y)。"""
    _check_pair(m, pair)
    return min((pair.shifted(m, q) for q in range(m)), key=XYPair.key)


def full_signature(m: int, pair: XYPair) -> str:
    """完整簽名 d₁…d_m：dᵢ 依 i 屬於 X、Y 或 Z 為 x、y 或 z。"""
    _check_pair(m, pair)
    return "".join("x" if i in pair.X else "y" if i in pair.Y else "z" for i in range(1, m + 1))


def psi(word: str) -> str:
    """
    將循環字串中的 z 代換為 α 或 β。

    緊接在 x 或 α 之後的 z 變為 β，緊接在 y 或 β 之後的 z 變為 α
    （d₀ = d_m 循環）。

    Raises:
        ValidationError: 字串不含 x 或 y
    """
    if set(word) - {"x", "y", "z"}:
        raise ValidationError(f"字串只能包含 x、y、z: {word!r}", field="word", value=word)
    anchor = next((k for k, letter in enumerate(word) if letter != "z"), None)
    if anchor is None:
        raise ValidationError(f"ψ 在只含 z 的字串上沒有定義: {word!r}", field="word", value=word)

    length = len(word)
    result = list(word)
    for step in range(1, length + 1):
        k = (anchor + step) % length
        if word[k] == "z":
            result[k] = "β" if result[k - 1] in ("x", "α") else "α"
    return "".join(result)


class Signature(Enum):
    """簡化簽名：{α, β} 中出現奇數次的字母。"""

    EMPTY = "∅"
    ALPHA = "α"
    BETA = "β"
    ALPHA_BETA = "αβ"

    def __str__(self) -> str:
        return self.value


def phi(word: str) -> Signature:
    """返回 word 中出現奇數次的 α、β 所組成的簽名。"""
    odd = "".join(letter for letter in ("α", "β") if word.count(letter) % 2)
    return Signature(odd or "∅")


def reduced_signature(m: int, pair: XYPair) -> Signature:
    """
    簡化簽名 φ(ψ(fullsig(X, Y)))。

    Raises:
        FamilyParameterError: (X, Y) = (∅, ∅)
    """
    if not pair.X and not pair.Y:
        raise FamilyParameterError("(∅, ∅) 沒有簡化簽名", family="Q", parameters={"m": m})
    return phi(psi(full_signature(m, pair)))


@dataclass(frozen=True)
class QClass:
    """旋轉類 Q°⟨X|Y⟩ 及其代表元。"""

    representative: XYPair
    system: SetSystem


def balanced_pairs(m: int) -> list[XYPair]:
    """所有滿足 |X| = |Y| 的互斥子集對。"""
    universe = range(1, m + 1)
    pairs = []
    for size in range(0, m // 2 + 1):
        for x in combinations(universe, size):
            rest = [i for i in universe if i not in x]
            for y in combinations(rest, size):
                pairs.append(XYPair(frozenset(x), frozenset(y)))
    return pairs


def q_class_partition(m: int) -> list[QClass]:
    """
    列出所有 |X| = |Y| 的旋轉類 Q°⟨X|Y⟩。

    這些類別兩兩互斥，聯集恰為 E_m 的所有 m 元子集。

    Returns:
        list[QClass]: 依代表元排序
    """
    if m < 2:
        raise FamilyParameterError(f"需要 m ≥ 2: m={m}", family="Q", parameters={"m": m})
    representatives = sorted(
        {rotation_class_representative(m, pair) for pair in balanced_pairs(m)}, key=XYPair.key
    )
    return [QClass(rep, q_rot(m, rep)) for rep in representatives]


# =============================================================================
# 𝒟、𝒮、Qᵐⱼ
# =============================================================================


def _check_odd(family: str, m: int) -> None:
    if m < 3 or m % 2 == 0:
        raise FamilyParameterError(
            f"{family} 族需要奇數 m ≥ 3: m={m}", family=family, parameters={"m": m}
        )


def c_set(m: int) -> frozenset[int]:
    """C_m = {1, 3, …, m−2}。"""
    _check_odd("S", m)
    return frozenset(range(1, m - 1, 2))


def a_block(m: int) -> int:
    """A_m = {m} ∪ (C_m+1) ∪ (C_m+1)′。"""
    encoding = PrimedGroundEncoding(m)
    shifted = shift_set(m, c_set(m), 1)
    return encoding.mask([m, *shifted], shifted)


def b_block(m: int) -> int:
    """B_m = {m} ∪ C_m ∪ C_m′。"""
    encoding = PrimedGroundEncoding(m)
    c = c_set(m)
    return encoding.mask([m, *c], c)


def build_D(m: int) -> SpernerSystem:
    """
    建構 𝒟ᵐ。

    由 rot{A_m, B_m} 加上所有簡化簽名為 β 的旋轉類 Q°⟨X|Y⟩
    （|X| = |Y|，排除 (∅, ∅)、Q°⟨C|C+1⟩ 與 Q°⟨C+1|C⟩）組成。
    類別以代表元比較。
    """
    _check_odd("D", m)
    c = c_set(m)
    c_plus = shift_set(m, c, 1)
    excluded = {
        rotation_class_representative(m, XYPair(c, c_plus)),
        rotation_class_representative(m, XYPair(c_plus, c)),
    }
    base = SetSystem(2 * m, frozenset({a_block(m), b_block(m)}))
    blocks = set(rotation_closure(base, m).blocks)
    for q_class in q_class_partition(m):
        rep = q_class.representative
        if not rep.X and not rep.Y:
            continue
        if rep in excluded:
            continue
        if reduced_signature(m, rep) == Signature.BETA:
            blocks.update(q_class.system.blocks)
    return SpernerSystem(2 * m, frozenset(blocks))


def build_S(m: int, parity: int) -> SpernerSystem:
    """
    建構 𝒮ᵐᵢ = 𝒟ᵐ ∪ 𝒢ᵐᵢ。

    Args:
        m: 奇數 m ≥ 3
        parity: 1 或 2

    Returns:
        SpernerSystem: m-均勻，C(2m, m)/2 個區塊
    """
    _check_odd("S", m)
    _check_parity("S", parity, m=m)
    d = build_D(m)
    return SpernerSystem(d.n, d.blocks | build_G(m, parity).blocks)


def build_Q_j(m: int, j: int) -> SetSystem:
    """Qᵐⱼ = Q°⟨C_m ∖ {m−2} | (C_m+1) ∖ {j}⟩，j ∈ C_m + 1。"""
    c = c_set(m)
    c_plus = shift_set(m, c, 1)
    if j not in c_plus:
        raise FamilyParameterError(
            f"j 必須屬於 C_m + 1 = {sorted(c_plus)}: j={j}", family="Q", parameters={"m": m, "j": j}
        )
    return q_rot(m, q_j_pair(m, j))


def q_j_pair(m: int, j: int) -> XYPair:
    c = c_set(m)
    return XYPair(c - {m - 2}, shift_set(m, c, 1) - {j})


# =============================================================================
# 族名稱
# =============================================================================


@dataclass(frozen=True)
class FamilyInstance:
    """建構出的族實例與其 E_m 編碼。"""

    name: str
    parameters: tuple
    system: SpernerSystem
    encoding: PrimedGroundEncoding

    def label(self) -> str:
        head = f"{self.name}{self.parameters[0]}"
        return head + (f"_{self.parameters[1]}" if len(self.parameters) > 1 else "")


def build_family(name: str, parameters: Iterable[int]) -> FamilyInstance:
    """
    依名稱與參數建構族實例。

    Args:
        name: G、F、M、U、S 其中之一
        parameters: F 為 (m,)；U 為 (n, parity)；其餘為 (m, parity)

    Raises:
        FamilyParameterError: 名稱或參數不合法
    """
    name = name.upper()
    parameters = tuple(int(p) for p in parameters)
    expected = 1 if name == "F" else 2
    if name not in FAMILY_NAMES:
        raise FamilyParameterError(
            f"未知的族名稱: {name}（可用: {', '.join(FAMILY_NAMES)}）", family=name
        )
    if len(parameters) != expected:
        raise FamilyParameterError(
            f"{name} 族需要 {expected} 個參數: {list(parameters)}",
            family=name,
            parameters={"given": list(parameters)},
        )

    if name == "U":
        system = build_U(*parameters)
        n = parameters[0]
        extras = 1 if n % 2 else 2
        encoding = PrimedGroundEncoding((n - extras) // 2, extras)
    else:
        builder = {"G": build_G, "F": build_F, "M": build_M, "S": build_S}[name]
        system = builder(*parameters)
        encoding = PrimedGroundEncoding(parameters[0])
    logger.debug(f"建構族 {name}{list(parameters)}: {len(system)} 個區塊，n={system.n}")
    return FamilyInstance(name, parameters, system, encoding)


def parse_family_reference(text: str) -> Optional[FamilyInstance]:
    """
    解析 "M3_1"、"F4"、"U8_2" 形式的族參考。

    Returns:
        Optional[FamilyInstance]: 不符合格式時返回 None
    """
    match = FAMILY_REFERENCE.match(text.strip())
    if not match:
        return None
    name, first, parity = match.groups()
    parameters = [int(first)] + ([int(parity)] if parity else [])
    return build_family(name, parameters)
