#!/usr/bin/env python3
"""
識別子式與牌組測試
==================

測試範圍：
- IdentPair 驗證
- 商的重新標記與卡片極小化
- Sperner 牌組、hypomorphic、強 hypomorphic
- 超圖刪點與刪點牌組
- 平行計算與序列計算結果一致
"""

import os
import sys
from math import comb

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core import Multiset, Permutation, SetSystem, SpernerSystem, apply_permutation
from src.exceptions import GroundSetError, IdentPairError, ValidationError
from src.families import build_M
from src.iso import canonical_form
from src.minors import (
    IdentPair,
    all_pairs,
    card,
    card_isomorphisms,
    essential_counts,
    hypergraph_deck,
    hypergraph_hypomorphic,
    hypergraph_strongly_hypomorphic,
    hypomorphic,
    parallel_map,
    quotient,
    sperner_deck,
    strongly_hypomorphic,
    vertex_card_isomorphisms,
    vertex_deleted,
)


def _square(x: int) -> int:
    return x * x


@pytest.fixture
def triangle():
    return SpernerSystem.from_blocks(3, [[1, 2], [1, 3], [2, 3]])


# ============================================================
# 識別對
# ============================================================


class TestIdentPair:
    """測試 IdentPair。"""

    def test_order_required(self):
        with pytest.raises(IdentPairError):
            IdentPair(2, 2)
        with pytest.raises(IdentPairError):
            IdentPair(3, 1)
        with pytest.raises(IdentPairError):
            IdentPair(0, 1)

    def test_of_normalizes(self):
        assert IdentPair.of(3, 1) == IdentPair(1, 3)
        assert str(IdentPair(1, 3)) == "{1,3}"

    def test_check_within(self):
        with pytest.raises(IdentPairError):
            quotient(SetSystem(3, frozenset()), IdentPair(2, 4))

    def test_all_pairs(self):
        pairs = all_pairs(4)
        assert len(pairs) == 6
        assert pairs[0] == IdentPair(1, 2)
        assert pairs[-1] == IdentPair(3, 4)


# ============================================================
# 商與卡片
# ============================================================


class TestQuotient:
    """測試 θ_I 商與 δ_I 重新標記。"""

    def test_relabeling(self):
        s = SetSystem.from_blocks(4, [[1, 4], [2, 3]])
        q = quotient(s, IdentPair(2, 4))
        # 4 → 2，3 不變
        assert q.n == 3
        assert q.block_tuples() == [(1, 2), (2, 3)]

    def test_labels_above_j_shift_down(self):
        s = SetSystem.from_blocks(4, [[3, 4]])
        assert quotient(s, IdentPair(1, 3)).block_tuples() == [(1, 3)]

    def test_merged_blocks_collapse(self):
        s = SetSystem.from_blocks(3, [[1, 3], [2, 3], [1, 2]])
        q = quotient(s, IdentPair(1, 2))
        assert q.block_tuples() == [(1,), (1, 2)]

    def test_card_is_minimal(self):
        s = SpernerSystem.from_blocks(3, [[1], [2, 3]])
        assert card(s, IdentPair(1, 2)).block_tuples() == [(1,)]

    def test_degenerate_cards(self):
        assert card(SpernerSystem(3, frozenset()), IdentPair(1, 2)).blocks == frozenset()
        assert card(SpernerSystem(3, frozenset({0})), IdentPair(1, 2)).blocks == frozenset({0})


# ============================================================
# Sperner 牌組
# ============================================================


class TestSpernerDeck:
    """測試 Sperner 牌組。"""

    def test_triangle(self, triangle):
        deck = sperner_deck(triangle)
        assert deck.cardinality == 3
        assert deck.render_lines() == ["1 ×3"]

    def test_cardinality(self):
        s = SpernerSystem.from_blocks(5, [[1, 2], [3, 4, 5]])
        assert sperner_deck(s).cardinality == comb(5, 2)

    def test_needs_two_elements(self):
        with pytest.raises(ValidationError):
            sperner_deck(SpernerSystem.from_blocks(1, [[1]]))

    def test_deck_is_isomorphism_invariant(self):
        s = SpernerSystem.from_blocks(5, [[1, 2], [2, 3, 4], [5]])
        image = apply_permutation(s, Permutation((5, 3, 1, 2, 4)))
        assert sperner_deck(s) == sperner_deck(image)

    def test_hypomorphic_pair_over_four(self):
        a = SpernerSystem.from_blocks(4, [[1, 2], [1, 3], [1, 4], [2, 3, 4]])
        b = SpernerSystem.from_blocks(4, [[1, 2], [1, 3], [2, 3]])
        assert hypomorphic(a, b)
        assert canonical_form(a) != canonical_form(b)

    def test_size_mismatch(self, triangle):
        with pytest.raises(ValidationError):
            hypomorphic(triangle, SpernerSystem(4, frozenset()))

    def test_strongly_hypomorphic_family(self):
        a, b = build_M(3, 1), build_M(3, 2)
        assert strongly_hypomorphic(a, b)
        witnesses = card_isomorphisms(a, b)
        assert len(witnesses) == comb(6, 2)
        for pair, sigma in witnesses.items():
            assert sigma is not None
            assert apply_permutation(card(a, pair), sigma) == card(b, pair)

    def test_not_strongly_hypomorphic(self):
        a = SpernerSystem.from_blocks(4, [[1, 2], [1, 3], [1, 4], [2, 3, 4]])
        b = SpernerSystem.from_blocks(4, [[1, 2], [1, 3], [2, 3]])
        assert hypomorphic(a, b)
        assert not strongly_hypomorphic(a, b)
        assert card_isomorphisms(a, b)[IdentPair(2, 3)] is None

    def test_essential_counts(self, triangle):
        assert essential_counts(sperner_deck(triangle)) == Multiset({1: 3})


# ============================================================
# 超圖刪點
# ============================================================


class TestHypergraph:
    """測試超圖刪點牌組。"""

    def test_vertex_deleted(self):
        s = SetSystem.from_blocks(3, [[1, 2], [2, 3], [3]])
        deleted = vertex_deleted(s, 2)
        assert deleted.n == 2
        assert deleted.block_tuples() == [(2,)]

    def test_vertex_deleted_errors(self):
        with pytest.raises(GroundSetError):
            vertex_deleted(SetSystem(3, frozenset()), 4)
        with pytest.raises(GroundSetError):
            vertex_deleted(SetSystem(1, frozenset({1})), 1)

    def test_deck_cardinality(self):
        s = SetSystem.from_blocks(4, [[1, 2], [3]])
        assert hypergraph_deck(s).cardinality == 4

    def test_single_vertex_has_empty_deck(self):
        a = SetSystem(1, frozenset({1}))
        b = SetSystem(1, frozenset())
        assert hypergraph_deck(a).cardinality == 0
        assert hypergraph_hypomorphic(a, b)
        assert hypergraph_strongly_hypomorphic(a, b)
        assert vertex_card_isomorphisms(a, b) == {}

    def test_family_hypergraph_decks(self):
        a, b = build_M(3, 1), build_M(3, 2)
        assert hypergraph_hypomorphic(a, b)
        assert hypergraph_strongly_hypomorphic(a, b)
        assert all(sigma is not None for sigma in vertex_card_isomorphisms(a, b).values())


# ============================================================
# 平行計算
# ============================================================


class TestParallel:
    """測試平行對應。"""

    def test_serial_fallback(self):
        assert parallel_map(_square, [1, 2, 3], workers=4) == [1, 4, 9]

    def test_process_pool_preserves_order(self):
        items = list(range(40))
        assert parallel_map(_square, items, workers=2, min_items_per_worker=2) == [x * x for x in items]

    def test_parallel_deck_matches_serial(self):
        s = build_M(3, 1)
        assert sperner_deck(s, workers=2, min_items_per_worker=2) == sperner_deck(s)
        assert hypergraph_deck(s, workers=2, min_items_per_worker=1) == hypergraph_deck(s)
