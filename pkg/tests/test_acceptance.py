#!/usr/bin/env python3
"""
驗收測試
========

以具體實例驗證整個工具組的主要結果。

測試範圍：
- n = 2、3、4 的牌組表與 n = 5 的完整分類
- ℳ、𝒰、𝒮 族：不同構但強亞同構，項函數的克隆歸屬
- 簽名範例與 Q°⟨X|Y⟩ 分割性質
- 系統與項函數的橋接、截斷項函數的值域
- 超圖刪點牌組
- 四種變換與等價關係
- 正面重建結果與對偶交換性
- 本質卡片對稱時系統對稱（n = 5）與 n = 4 的反例
- 函數層級的可重建性：常數、Λ、V、仿射函數與項函數

標記為 slow 的測試（m = 5、n = 5 與四元布林函數空間）需要數十秒以上。
"""

import os
import random
import sys
from itertools import product
from math import comb
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core import (
    SetSystem,
    SpernerSystem,
    apply_permutation,
    complement_system,
    essential_elements,
    homogeneity,
    is_totally_symmetric,
    minimalize,
)
from src.enumeration import (
    deck_table,
    enumerate_sperner,
    find_nonreconstructible,
    function_is_reconstructible,
    is_reconstructible,
    is_trivial,
)
from src.families import (
    Signature,
    XYPair,
    build_M,
    build_S,
    build_U,
    full_signature,
    psi,
    q_class_partition,
    q_rot,
    q_set,
    reduced_signature,
    tau,
)
from src.functions import (
    FiniteFunction,
    a_separating,
    dual,
    duplicate_pad,
    equivalent,
    extend,
    identification_minor,
    in_lambda,
    in_V,
    linear,
    modify_diagonal,
    monotone,
    preserves_0,
    preserves_1,
    relabel,
    self_dual,
    sperner_to_function,
    subset_table,
    term_function,
)
from src.iso import is_isomorphic, shorthand
from src.minors import (
    all_pairs,
    card,
    card_isomorphisms,
    hypergraph_deck,
    strongly_hypomorphic,
    vertex_card_isomorphisms,
)

GOLDEN_DIR = Path(__file__).parent / "golden"


def random_sperner(rng: random.Random, n: int) -> SpernerSystem:
    masks = {rng.randrange(0, 1 << n) for _ in range(rng.randint(0, 6))}
    return minimalize(SetSystem(n, frozenset(masks)))


def random_boolean(rng: random.Random, arity: int) -> FiniteFunction:
    return FiniteFunction.from_table(2, 2, arity, [rng.randint(0, 1) for _ in range(2 ** arity)])


def permuted_arguments(f: FiniteFunction, order: list[int]) -> FiniteFunction:
    return FiniteFunction(f.domain, f.codomain, np.transpose(f.table, order))


def with_diagonal_of(g: FiniteFunction, f: FiniteFunction) -> FiniteFunction:
    table = np.array(g.table)
    for value in range(f.domain):
        table[(value,) * f.arity] = f.table[(value,) * f.arity]
    return FiniteFunction(g.domain, g.codomain, table)


# ============================================================
# 牌組表與分類
# ============================================================


class TestAppendixTables:
    """牌組表逐格重現，n = 5 沒有不可重建系統。"""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_tables(self, n):
        expected = (GOLDEN_DIR / f"appendix_n{n}.tsv").read_text(encoding="utf-8")
        assert deck_table(n).render_text() == expected

    def test_four_element_table_shape(self):
        table = deck_table(4)
        assert len(table.rows) == 28
        assert len(table.nonreconstructible_rows()) == 2

    @pytest.mark.slow
    def test_five_element_classification(self):
        classes = enumerate_sperner(5)
        assert len(classes) == 210
        assert sum(1 for s in classes if is_trivial(s)) == 2
        assert find_nonreconstructible(5) == []


# ============================================================
# ℳ、𝒰、𝒮 族
# ============================================================


class TestMonotoneFamily:
    """ℳᵐ₁ 與 ℳᵐ₂ 不同構但強亞同構。"""

    @pytest.mark.parametrize("m", [3, 4, pytest.param(5, marks=pytest.mark.slow)])
    def test_nonisomorphic_strongly_hypomorphic(self, m):
        a, b = build_M(m, 1), build_M(m, 2)
        assert not is_isomorphic(a, b)
        assert strongly_hypomorphic(a, b)

    def test_card_isomorphisms_four(self):
        a, b = build_M(4, 1), build_M(4, 2)
        witnesses = card_isomorphisms(a, b)
        assert len(witnesses) == comb(8, 2)
        for pair, sigma in witnesses.items():
            assert sigma is not None, str(pair)
            assert apply_permutation(card(a, pair), sigma) == card(b, pair)


class TestUpwardFamily:
    """𝒰ⁿ₁ 與 𝒰ⁿ₂，n = 7 … 10。"""

    @pytest.mark.parametrize("n", [7, 8, 9, 10])
    def test_nonisomorphic_strongly_hypomorphic(self, n):
        a, b = build_U(n, 1), build_U(n, 2)
        assert not is_isomorphic(a, b)
        assert strongly_hypomorphic(a, b)

    @pytest.mark.parametrize("n", [7, 8, 9, 10])
    @pytest.mark.parametrize("parity", [1, 2])
    def test_term_in_mc_u_infinity(self, n, parity):
        t = term_function(build_U(n, parity))
        assert monotone(t)
        assert preserves_0(t)
        assert preserves_1(t)
        assert a_separating(t, 1)


class TestSelfDualFamily:
    """𝒮ᵐ₁ 與 𝒮ᵐ₂ 的均勻性、區塊數與項函數。"""

    @pytest.mark.parametrize("m", [3, pytest.param(5, marks=pytest.mark.slow)])
    def test_family(self, m):
        a, b = build_S(m, 1), build_S(m, 2)
        for s in (a, b):
            assert homogeneity(s) == m
            assert len(s) == comb(2 * m, m) // 2
            t = term_function(s)
            assert self_dual(t)
            assert monotone(t)
        assert not is_isomorphic(a, b)
        assert strongly_hypomorphic(a, b)


# ============================================================
# 簽名與 Q°⟨X|Y⟩
# ============================================================


class TestSignatures:
    """九元素的兩個範例。"""

    @pytest.mark.parametrize(
        "x, y, word, image, signature",
        [
            ({2, 5, 9}, {3, 8}, "zxyzxzzyx", "βxyαxβαyx", Signature.EMPTY),
            ({2, 5}, {3, 8}, "zxyzxzzyz", "βxyαxβαyα", Signature.ALPHA),
        ],
    )
    def test_examples(self, x, y, word, image, signature):
        pair = XYPair(frozenset(x), frozenset(y))
        assert full_signature(9, pair) == word
        assert psi(word) == image
        assert reduced_signature(9, pair) == signature


class TestQPartition:
    """|X| = |Y| 的旋轉類分割 E_m 的 m 元子集。"""

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_partition(self, m):
        classes = q_class_partition(m)
        seen = set()
        for q_class in classes:
            assert not seen & q_class.system.blocks
            seen |= q_class.system.blocks
        assert len(seen) == comb(2 * m, m)
        assert all(mask.bit_count() == m for mask in seen)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_complement_swaps(self, m):
        for q_class in q_class_partition(m):
            representative = q_class.representative
            complemented = complement_system(q_class.system)
            assert complemented == q_rot(m, representative.swapped())
            if m % 2 and (representative.X or representative.Y):
                assert complemented != q_class.system

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_transposition_closed(self, m):
        for q_class in q_class_partition(m):
            for j in range(1, m + 1):
                assert apply_permutation(q_class.system, tau(m, j)) == q_class.system

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_block_sizes(self, m):
        rng = random.Random(m)
        for _ in range(30):
            labels = list(range(1, m + 1))
            rng.shuffle(labels)
            cut_x, cut_y = sorted(rng.sample(range(m + 1), 2))
            pair = XYPair(frozenset(labels[:cut_x]), frozenset(labels[cut_x:cut_y]))
            expected = m + len(pair.X) - len(pair.Y)
            assert {mask.bit_count() for mask in q_set(m, pair).blocks} == {expected}


# ============================================================
# 橋接
# ============================================================


class TestBridge:
    """系統的識別子式對應項函數的識別子式。"""

    def test_minors_commute(self):
        rng = random.Random(2024)
        for _ in range(500):
            n = rng.randint(2, 6)
            s = random_sperner(rng, n)
            t = term_function(s)
            for pair in all_pairs(n):
                assert identification_minor(t, pair) == term_function(card(s, pair)), shorthand(s)

    def test_truncated_range(self):
        rng = random.Random(7)
        for _ in range(200):
            n = rng.randint(1, 6)
            f = sperner_to_function(random_sperner(rng, n), 3, 0, 2)
            assert set(f.table.ravel().tolist()) <= {0, 1, 2}
            for point in product((0, 2), repeat=n):
                assert f(*point) in (0, 2)


# ============================================================
# 超圖
# ============================================================


class TestHypergraphDecks:
    """ℳᵐ₁ 與 ℳᵐ₂ 也是不可重建的超圖。"""

    @pytest.mark.parametrize("m", [3, 4, pytest.param(5, marks=pytest.mark.slow)])
    def test_vertex_decks(self, m):
        a, b = build_M(m, 1), build_M(m, 2)
        assert hypergraph_deck(a) == hypergraph_deck(b)
        witnesses = vertex_card_isomorphisms(a, b)
        assert len(witnesses) == 2 * m
        assert all(sigma is not None for sigma in witnesses.values())


# ============================================================
# 變換
# ============================================================


def _pad_theta():
    elements = [(a, b) for a in range(2) for b in range(2)]
    return subset_table(elements, lambda chosen: int(len(chosen) % 2 == 0))


TRANSFORMS = {
    "relabel": lambda f: relabel(f, [1, 0], [1, 0]),
    "modify_diagonal": lambda f: modify_diagonal(f, [1, 0]),
    "extend": lambda f: extend(f, 3, 3, subset_table(range(3), min)),
    "duplicate_pad": lambda f: duplicate_pad(f, _pad_theta()),
}


class TestTransformLaws:
    """每種變換與識別子式交換，並保持（不）等價。"""

    @pytest.mark.parametrize("name", sorted(TRANSFORMS))
    def test_commutes_with_minors(self, name):
        transform = TRANSFORMS[name]
        rng = random.Random(100)
        for _ in range(100):
            f = random_boolean(rng, rng.choice((3, 4)))
            image = transform(f)
            for pair in all_pairs(f.arity):
                assert identification_minor(image, pair) == transform(identification_minor(f, pair))

    @pytest.mark.parametrize("name", sorted(TRANSFORMS))
    def test_preserves_equivalence(self, name):
        transform = TRANSFORMS[name]
        rng = random.Random(200)
        for _ in range(100):
            arity = rng.choice((3, 4))
            f = random_boolean(rng, arity)
            if rng.random() < 0.5:
                order = list(range(arity))
                rng.shuffle(order)
                g = permuted_arguments(f, order)
            else:
                g = with_diagonal_of(random_boolean(rng, arity), f)
            assert equivalent(transform(f), transform(g)) == equivalent(f, g)


# ============================================================
# 正面結果與對偶
# ============================================================


def _covered_by_positive_results(s: SpernerSystem) -> bool:
    return homogeneity(s) == 1 or len(s) == 1 or is_totally_symmetric(s)


class TestPositiveResults:
    """1-均勻、單一區塊與完全對稱的系統皆可重建。"""

    @pytest.mark.parametrize("n", [4, pytest.param(5, marks=pytest.mark.slow)])
    def test_classes(self, n):
        checked = 0
        for s in enumerate_sperner(n):
            if is_trivial(s) or not _covered_by_positive_results(s):
                continue
            assert is_reconstructible(s), shorthand(s)
            checked += 1
        assert checked > 0

    @pytest.mark.parametrize(
        "n, blocks",
        [(2, [[1], [2]]), (2, [[1, 2]]), (3, [[1, 2], [1, 3], [2, 3]])],
    )
    def test_bound_witnesses(self, n, blocks):
        s = SpernerSystem.from_blocks(n, blocks)
        assert _covered_by_positive_results(s)
        assert not is_reconstructible(s)


class TestSymmetricCards:
    """全部元素本質、且 n−1 個本質元素的卡片皆完全對稱時，n ≥ 5 的系統本身完全對稱。"""

    @staticmethod
    def full_cards_symmetric(s: SpernerSystem) -> bool:
        for pair in all_pairs(s.n):
            c = card(s, pair)
            if len(essential_elements(c)) == s.n - 1 and not is_totally_symmetric(c):
                return False
        return True

    @pytest.mark.slow
    def test_five(self):
        checked = 0
        for s in enumerate_sperner(5):
            if len(essential_elements(s)) < 5 or not self.full_cards_symmetric(s):
                continue
            assert is_totally_symmetric(s), shorthand(s)
            checked += 1
        assert checked > 0

    def test_fails_at_four(self):
        s = SpernerSystem.from_blocks(4, [[1, 2], [1, 3], [1, 4], [2, 3, 4]])
        assert essential_elements(s) == frozenset({1, 2, 3, 4})
        assert self.full_cards_symmetric(s)
        assert not is_totally_symmetric(s)


def constant(arity: int, value: int) -> FiniteFunction:
    return FiniteFunction.from_table(2, 2, arity, [value] * 2 ** arity)


class TestFunctionReconstruction:
    """以窮舉搜尋驗證函數層級的可重建性。"""

    def test_constants(self):
        # n > |A| 時常數函數可重建；n = |A| = 2 時不可
        assert not function_is_reconstructible(constant(2, 0))
        assert function_is_reconstructible(constant(3, 0))
        assert function_is_reconstructible(constant(3, 1))

    @pytest.mark.slow
    def test_affine_four(self):
        checked = 0
        for mask in range(16):
            for offset in (0, 1):
                f = FiniteFunction.from_callable(
                    2, 2, 4, lambda *xs, m=mask, c=offset: (c + sum(xs[k] for k in range(4) if m >> k & 1)) % 2
                )
                assert linear(f)
                assert function_is_reconstructible(f), f
                checked += 1
        assert checked == 32

    @pytest.mark.slow
    def test_lambda_and_v_four(self):
        members = [constant(4, 0), constant(4, 1)]
        for mask in range(1, 16):
            chosen = [k for k in range(4) if mask >> k & 1]
            members.append(FiniteFunction.from_callable(2, 2, 4, lambda *xs, c=chosen: min(xs[k] for k in c)))
            members.append(FiniteFunction.from_callable(2, 2, 4, lambda *xs, c=chosen: max(xs[k] for k in c)))
        for f in members:
            assert in_lambda(f) or in_V(f)
            assert function_is_reconstructible(f), f

    @pytest.mark.slow
    def test_term_operations_match_systems(self):
        for s in enumerate_sperner(4):
            assert function_is_reconstructible(term_function(s)) == is_reconstructible(s), shorthand(s)


class TestDuality:
    """(f^d)_I = (f_I)^d 對所有三元布林函數成立。"""

    def test_exhaustive_three(self):
        pairs = all_pairs(3)
        for values in product((0, 1), repeat=8):
            f = FiniteFunction.from_table(2, 2, 3, values)
            f_dual = dual(f)
            for pair in pairs:
                assert identification_minor(f_dual, pair) == dual(identification_minor(f, pair))
