#!/usr/bin/env python3
"""
命令列介面測試
==============

測試範圍：
- family / deck / check / appendix / clones 子命令的輸出與結束碼
- 系統檔案解析（簡寫、大括號格式、JSON）與輸出往返
- reconstruct 子命令的系統與函數模式
- 配置檔案、命令列旗標與 --json 錯誤響應
- 輸出的決定性
"""

import json
import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli import build_parser, load_system, parse_systems, render_system, require_sperner, run
from src.config import load_config
from src.core import SetSystem, SpernerSystem
from src.enumeration import enumerate_sperner
from src.exceptions import AntichainError, GroundSetError, ParseError, ValidationError

GOLDEN_DIR = Path(__file__).parent / "golden"

MAJORITY_JSON = {"domain": 2, "codomain": 2, "arity": 3, "table": [0, 0, 0, 1, 0, 1, 1, 1]}
XOR_JSON = {"domain": 2, "codomain": 2, "arity": 2, "table": [0, 1, 1, 0]}


def invoke(capsys, *argv: str) -> tuple[int, str, str]:
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def majority_file(tmp_path):
    path = tmp_path / "majority.json"
    path.write_text(json.dumps(MAJORITY_JSON), encoding="utf-8")
    return path


# ============================================================
# family
# ============================================================


class TestFamilyCommand:
    """測試 family 子命令。"""

    def test_json_output(self, capsys):
        code, out, _ = invoke(capsys, "family", "M", "3", "1")
        assert code == 0
        data = json.loads(out)
        assert data["n"] == 6
        assert len(data["blocks"]) == 7

    def test_invalid_parameter(self, capsys):
        code, out, err = invoke(capsys, "family", "S", "4", "1")
        assert code == 2
        assert out == ""
        assert err.startswith("錯誤: ")

    def test_shorthand(self, capsys):
        code, out, _ = invoke(capsys, "family", "U", "8", "2", "--format", "shorthand")
        assert code == 0
        blocks = out.strip().split(",")
        assert len(blocks) == 8
        assert "78" in blocks

    def test_primed_labels(self, capsys):
        code, out, _ = invoke(capsys, "family", "U", "8", "2", "--primed-labels")
        assert code == 0
        assert "{0,0′}" in out
        assert out.count("{") == 8

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "out" / "m3.json"
        code, out, _ = invoke(capsys, "family", "m", "3", "1", "--out", str(target))
        assert code == 0
        assert json.loads(target.read_text(encoding="utf-8")) == json.loads(out)

    def test_wrong_parameter_count(self, capsys):
        code, _, err = invoke(capsys, "family", "F", "3", "1")
        assert code == 2
        assert "錯誤" in err


# ============================================================
# deck
# ============================================================


class TestDeckCommand:
    """測試 deck 子命令。"""

    def test_triangle(self, capsys):
        assert invoke(capsys, "deck", "12,13,23") == (0, "1 ×3\n", "")

    def test_explicit_ground_size(self, capsys):
        code, out, _ = invoke(capsys, "deck", "1", "--n", "2")
        assert (code, out) == (0, "1 ×1\n")

    def test_inferred_ground_size_too_small(self, capsys):
        code, _, err = invoke(capsys, "deck", "1")
        assert code == 2
        assert "n=1" in err

    def test_hypergraph_family_decks_match(self, capsys):
        first = invoke(capsys, "deck", "M3_1", "--mode", "hypergraph")
        second = invoke(capsys, "deck", "M3_2", "--mode", "hypergraph")
        assert first[0] == second[0] == 0
        assert first[1] == second[1]

    def test_minimalize(self, capsys):
        code, _, err = invoke(capsys, "deck", "1,12")
        assert code == 2
        assert "--minimalize" in err
        code, out, err = invoke(capsys, "deck", "1,12", "--minimalize")
        assert (code, out) == (0, "1 ×1\n")
        assert "極小區塊" in err

    def test_function_file(self, capsys, majority_file):
        assert invoke(capsys, "deck", str(majority_file), "--mode", "function")[:2] == (0, "1:01 ×3\n")

    def test_function_from_term(self, capsys):
        assert invoke(capsys, "deck", "12,13,23", "--mode", "function", "--term")[:2] == (0, "1:01 ×3\n")

    def test_function_with_constant_minor(self, capsys):
        assert invoke(capsys, "deck", json.dumps(XOR_JSON), "--mode", "function")[:2] == (0, "0:0 ×1\n")

    def test_hypergraph_single_vertex(self, capsys):
        assert invoke(capsys, "deck", "1", "--mode", "hypergraph", "--json")[:2] == (
            0,
            json.dumps({"mode": "hypergraph", "n": 1, "cards": []}, indent=2) + "\n",
        )

    def test_json(self, capsys):
        code, out, _ = invoke(capsys, "deck", "12,13,23", "--json")
        assert code == 0
        assert json.loads(out) == {
            "mode": "sperner",
            "n": 3,
            "cards": [{"card": "1", "blocks": [[1]], "multiplicity": 3}],
        }

    def test_json_file_input(self, capsys, tmp_path):
        path = tmp_path / "system.json"
        path.write_text(json.dumps({"n": 4, "blocks": [[1], [2], [3, 4]]}), encoding="utf-8")
        code, out, _ = invoke(capsys, "deck", str(path))
        assert code == 0
        assert out.splitlines() == ["1,2 ×4", "1,2,3 ×1", "1,23 ×1"]

    def test_parse_error(self, capsys):
        code, _, err = invoke(capsys, "deck", "1x,2")
        assert code == 2
        assert err.startswith("錯誤: ")


# ============================================================
# check
# ============================================================


class TestCheckCommand:
    """測試 check 子命令。"""

    def test_strong(self, capsys):
        assert invoke(capsys, "check", "M3_1", "M3_2", "--relation", "strong")[:2] == (0, "true\n")

    def test_iso_false(self, capsys):
        assert invoke(capsys, "check", "M3_1", "M3_2", "--relation", "iso")[:2] == (1, "false\n")

    def test_iso_witness(self, capsys):
        assert invoke(capsys, "check", "12,13,23", "12,13,23")[:2] == (0, "true\n1 2 3\n")

    def test_iso_nontrivial_witness(self, capsys):
        code, out, _ = invoke(capsys, "check", "12,3", "1,23")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "true"
        images = tuple(int(x) for x in lines[1].split())
        # 12 → 23
        assert {images[0], images[1]} == {2, 3}

    def test_hypomorphic_not_isomorphic(self, capsys):
        a, b = "12,13,14,234", "12,13,23"
        assert invoke(capsys, "check", a, b, "--n", "4", "--relation", "hypomorphic")[0] == 0
        assert invoke(capsys, "check", a, b, "--n", "4", "--relation", "strong")[0] == 1
        assert invoke(capsys, "check", a, b, "--n", "4")[0] == 1

    def test_hypergraph(self, capsys):
        assert invoke(capsys, "check", "M3_1", "M3_2", "--relation", "hypergraph")[:2] == (0, "true\n")

    def test_size_mismatch(self, capsys):
        code, _, err = invoke(capsys, "check", "12,13,23", "1,2,34", "--relation", "hypomorphic")
        assert code == 2
        assert "3 != 4" in err

    def test_json(self, capsys):
        code, out, _ = invoke(capsys, "check", "M3_1", "M3_2", "--json")
        assert code == 1
        assert json.loads(out) == {"relation": "iso", "result": False, "witness": None}


# ============================================================
# appendix
# ============================================================


class TestAppendixCommand:
    """測試 appendix 子命令。"""

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_golden(self, capsys, n):
        expected = (GOLDEN_DIR / f"appendix_n{n}.tsv").read_text(encoding="utf-8")
        assert invoke(capsys, "appendix", str(n))[:2] == (0, expected)

    def test_groups(self, capsys):
        assert invoke(capsys, "appendix", "4", "--groups")[:2] == (0, "12,13,14,234 | 12,13,23\n")

    def test_json(self, capsys):
        code, out, _ = invoke(capsys, "appendix", "3", "--json")
        assert code == 0
        data = json.loads(out)
        assert len(data["rows"]) == 8
        assert data["groups"] == [["1", "12,13,23"]]

    def test_show_trivial(self, capsys):
        code, out, _ = invoke(capsys, "appendix", "2", "--show-trivial")
        assert code == 0
        assert len(out.splitlines()) == 1 + 5

    def test_cap(self, capsys):
        code, _, err = invoke(capsys, "appendix", "6")
        assert code == 3
        assert "--allow-large" in err

    def test_too_small(self, capsys):
        assert invoke(capsys, "appendix", "1")[0] == 2

    @pytest.mark.slow
    def test_five_has_no_asterisks(self, capsys):
        code, out, _ = invoke(capsys, "appendix", "5")
        assert code == 0
        assert len(out.splitlines()) == 1 + 208
        assert "*" not in out

    def test_deterministic(self, capsys):
        assert invoke(capsys, "appendix", "4") == invoke(capsys, "appendix", "4")
        assert invoke(capsys, "appendix", "4", "--workers", "2")[1] == invoke(capsys, "appendix", "4")[1]


# ============================================================
# clones
# ============================================================


class TestClonesCommand:
    """測試 clones 子命令。"""

    def test_majority(self, capsys, majority_file):
        code, out, _ = invoke(capsys, "clones", str(majority_file))
        assert code == 0
        lines = out.splitlines()
        assert "M\t✓" in lines
        assert "S\t✓" in lines
        assert "SM\t✓" in lines
        assert lines[-1] == "nonreconstructible-clones\tSM"

    def test_inline_xor(self, capsys):
        code, out, _ = invoke(capsys, "clones", json.dumps(XOR_JSON))
        assert code == 0
        lines = out.splitlines()
        assert "L\t✓" in lines
        assert "M\t✗" in lines

    def test_family_term(self, capsys):
        code, out, _ = invoke(capsys, "clones", "U7_1", "--term", "--json")
        assert code == 0
        data = json.loads(out)
        assert all(data["members"][name] for name in ("M", "T0", "T1", "U∞", "McU∞"))
        assert "McU∞" in data["nonreconstructible_in"]

    def test_non_boolean(self, capsys):
        payload = {"domain": 3, "codomain": 3, "arity": 1, "table": [0, 1, 2]}
        code, _, err = invoke(capsys, "clones", json.dumps(payload))
        assert code == 2
        assert "布林" in err


# ============================================================
# reconstruct
# ============================================================


class TestReconstructCommand:
    """測試 reconstruct 子命令。"""

    def test_triangle(self, capsys):
        assert invoke(capsys, "reconstruct", "12,13,23")[:2] == (1, "false\n1\n12,13,23\n")

    def test_single_block(self, capsys):
        assert invoke(capsys, "reconstruct", "1234")[:2] == (0, "true\n1234\n")

    def test_json(self, capsys):
        code, out, _ = invoke(capsys, "reconstruct", "12,13,14,234", "--json")
        assert code == 1
        assert json.loads(out) == {
            "mode": "sperner",
            "result": False,
            "reconstructions": ["12,13,14,234", "12,13,23"],
        }

    def test_function(self, capsys):
        zero = {"domain": 2, "codomain": 2, "arity": 2, "table": [0, 0, 0, 0]}
        code, out, _ = invoke(capsys, "reconstruct", json.dumps(zero), "--mode", "function")
        lines = out.splitlines()
        assert code == 1
        assert lines[0] == "false"
        assert len(lines) == 4
        assert "0:0" in lines

    def test_function_term(self, capsys):
        # 投影與多數函數共用牌組
        code, out, _ = invoke(capsys, "reconstruct", "1", "--n", "3", "--mode", "function", "--term")
        assert code == 1
        assert out.splitlines()[0] == "false"
        majority = invoke(capsys, "reconstruct", "12,13,23", "--mode", "function", "--term")
        assert majority[:2] == (1, out)

    def test_function_space_cap(self, capsys):
        payload = {"domain": 3, "codomain": 2, "arity": 4, "table": [0] * 81}
        code, _, err = invoke(capsys, "reconstruct", json.dumps(payload), "--mode", "function")
        assert code == 3
        assert "--allow-large" in err


# ============================================================
# 配置與用法
# ============================================================


class TestConfiguration:
    """測試配置檔案與旗標。"""

    def test_usage_error(self, capsys):
        assert run(["deck"]) == 2
        assert run([]) == 2
        capsys.readouterr()

    def test_invalid_workers(self, capsys):
        code, _, err = invoke(capsys, "deck", "12,13,23", "--workers", "0")
        assert code == 2
        assert "parallel.workers" in err

    def test_config_file(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"output": {"json_indent": 0}}), encoding="utf-8")
        code, out, _ = invoke(capsys, "check", "M3_1", "M3_2", "--json", "--config", str(config))
        assert code == 1
        assert out == '{"relation": "iso", "result": false, "witness": null}\n'

    def test_invalid_config_file(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"search": {"exhaustive_max_n": 0}}), encoding="utf-8")
        code, _, err = invoke(capsys, "appendix", "3", "--config", str(config))
        assert code == 2
        assert "exhaustive_max_n" in err

    def test_config_raises_cap(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"search": {"exhaustive_max_n": 3}}), encoding="utf-8")
        assert invoke(capsys, "appendix", "4", "--config", str(config))[0] == 3
        assert invoke(capsys, "appendix", "4", "--config", str(config), "--allow-large")[0] == 0

    def test_log_file(self, capsys, tmp_path):
        log_file = tmp_path / "logs" / "run.log"
        code, _, _ = invoke(capsys, "deck", "12,13,23", "--log-level", "INFO", "--log-file", str(log_file))
        assert code == 0
        assert "deck" in log_file.read_text(encoding="utf-8")

    def test_json_error_response(self, capsys):
        code, out, err = invoke(capsys, "deck", "1x,2", "--json")
        assert code == 2
        assert err.startswith("錯誤:")
        response = json.loads(out)
        assert response["error"] is True
        assert response["error_code"] == "PARSE_ERROR"

    def test_json_config_error_response(self, capsys):
        code, out, _ = invoke(capsys, "deck", "12,13,23", "--workers", "0", "--json")
        assert code == 2
        assert json.loads(out)["error_code"] == "CONFIG_ERROR"

    def test_json_cap_error_response(self, capsys):
        code, out, _ = invoke(capsys, "appendix", "7", "--json")
        assert code == 3
        assert json.loads(out)["details"]["limit_name"] == "exhaustive_max_n"

    def test_plain_error_keeps_stdout_empty(self, capsys):
        code, out, _ = invoke(capsys, "deck", "1x,2")
        assert code == 2
        assert out == ""

    def test_save_config(self, capsys, tmp_path):
        target = tmp_path / "saved" / "config.json"
        code, _, _ = invoke(capsys, "deck", "12,13,23", "--workers", "3", "--save-config", str(target))
        assert code == 0
        assert load_config(str(target)).parallel.workers == 3

    def test_parser_flags_on_subcommands(self):
        args = build_parser().parse_args(["appendix", "3", "--workers", "2", "--json"])
        assert args.workers == 2
        assert args.json
        assert args.allow_large is None


# ============================================================
# 解析與輸出
# ============================================================


class TestParsing:
    """測試系統檔案解析。"""

    def test_shorthand_lines(self):
        systems = parse_systems("# 註解\n12,13,23 *\n\n1,2\n")
        assert [s.block_tuples() for s in systems] == [[(1, 2), (1, 3), (2, 3)], [(1,), (2,)]]
        assert [s.n for s in systems] == [3, 2]

    def test_brace_format(self):
        s = parse_systems("{1,10},{2,3}")[0]
        assert s.n == 10
        assert s.block_tuples() == [(1, 10), (2, 3)]

    def test_degenerate(self):
        assert parse_systems("∅", n=3)[0] == SetSystem(3, frozenset())
        assert parse_systems("{∅}", n=3)[0] == SetSystem(3, frozenset({0}))
        with pytest.raises(ParseError):
            parse_systems("∅")

    def test_errors(self):
        with pytest.raises(ParseError):
            parse_systems("1a,2")
        with pytest.raises(ParseError):
            parse_systems("   \n# 只有註解\n")
        with pytest.raises(ParseError):
            parse_systems('{"n": 3}')
        with pytest.raises(ParseError):
            parse_systems('{"n": 3, "blocks": [[1]')
        with pytest.raises(GroundSetError):
            parse_systems("14", n=3)
        with pytest.raises(ValidationError):
            parse_systems("12,21")

    def test_load_system_sources(self, tmp_path):
        path = tmp_path / "triangle.txt"
        path.write_text("12,13,23\n", encoding="utf-8")
        assert load_system(str(path)) == load_system("12,13,23")
        assert len(load_system("M3_1")) == 7
        with pytest.raises(ParseError):
            load_system("1\n2")

    def test_require_sperner(self):
        s = SetSystem.from_blocks(3, [[1], [1, 2]])
        with pytest.raises(AntichainError):
            require_sperner(s)
        assert require_sperner(s, allow_minimalize=True).block_tuples() == [(1,)]
        assert isinstance(require_sperner(SetSystem.from_blocks(2, [[1]])), SpernerSystem)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_round_trip(self, n):
        for s in enumerate_sperner(n):
            assert parse_systems(render_system(s, "shorthand"), n=n)[0] == s
            assert parse_systems(render_system(s, "json"))[0] == s

    @pytest.mark.slow
    def test_round_trip_five(self):
        for s in enumerate_sperner(5):
            assert parse_systems(render_system(s, "shorthand"), n=5)[0] == s
            assert parse_systems(render_system(s, "json"))[0] == s
