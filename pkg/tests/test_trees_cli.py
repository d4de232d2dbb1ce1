import io
import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monolearn.cli import RunConfig, main, run
from monolearn.core import MonotoneFn
from monolearn.enumeration import monotone_tables
from monolearn.trees import (
    Leaf,
    Node,
    Open,
    TreeFormatError,
    parse_tree,
    run_tree,
    serialize,
    to_dot,
    tree_height,
    tree_size,
)

from figures import FIG2_COMPLETED, FIG2_TRUNCATED


def cli(*args):
    out, err = io.StringIO(), io.StringIO()
    parsed = _parse(args)
    code = run(parsed, out, err)
    return code, out.getvalue(), err.getvalue()


def _parse(args):
    from monolearn.cli import build_parser

    ns = build_parser().parse_args(list(args))
    fields = {k: v for k, v in vars(ns).items() if k in RunConfig.__dataclass_fields__}
    return RunConfig(**fields)


def records(text):
    return [json.loads(line) for line in text.splitlines()]


class TestTrees:
    def test_shape(self):
        assert tree_size(FIG2_TRUNCATED) == 15  # 7 questions, 8 leaves
        assert tree_height(FIG2_TRUNCATED) == 5

    @pytest.mark.parametrize("tree", [FIG2_TRUNCATED, FIG2_COMPLETED])
    def test_roundtrip(self, tree):
        assert parse_tree(serialize(tree), 3) == tree

    def test_json_layout(self):
        data = json.loads(serialize(Node(1, Leaf(MonotoneFn.zero(1)), Open())))
        assert data == {"question_mask": 1, "on_zero": {"leaf_table_hex": "0"}, "on_one": {"open": True}}

    @pytest.mark.parametrize("text", ["", "   ", "{", "[]", '{"question_mask": 9, "on_zero": {"open": true}, "on_one": {"open": true}}',
                                      '{"question_mask": 1}', '{"leaf_table_hex": "zz"}'])
    def test_malformed(self, text):
        with pytest.raises(TreeFormatError):
            parse_tree(text, 3)

    def test_run_tree(self):
        for t in monotone_tables(3).tolist():
            end, depth = run_tree(FIG2_COMPLETED, MonotoneFn(3, t))
            assert end.function.table == t
            assert 1 <= depth <= 8

    def test_dot(self):
        dot = to_dot(FIG2_TRUNCATED)
        assert dot.startswith("digraph tree {")
        assert 'label="{1,2}"' in dot
        lines = dot.splitlines()
        edges = [line for line in lines if "->" in line and line.strip().startswith("n0 ")]
        assert edges[0].endswith('[label="0"];') and edges[1].endswith('[label="1"];')


@settings(max_examples=100, deadline=None)
@given(st.recursive(st.sampled_from(monotone_tables(2).tolist()).map(lambda t: Leaf(MonotoneFn(2, t))) | st.just(Open()),
                    lambda kids: st.builds(Node, st.integers(0, 3), kids, kids), max_leaves=12))
def test_serialize_roundtrip_random(tree):
    assert parse_tree(serialize(tree), 2) == tree


class TestCli:
    def test_enum(self):
        code, out, err = cli("enum", "--n", "2")
        assert code == 0
        rows = records(out)
        assert [r["table_hex"] for r in rows] == ["0", "8", "a", "c", "e", "f"]
        assert rows[2] == {"n": 2, "table_hex": "a", "m": 2, "size_U": 1, "size_L": 1}
        assert "6 functions" in err

    def test_enum_inequivalent(self):
        code, out, _ = cli("enum", "--n", "3", "--inequivalent")
        assert code == 0 and len(records(out)) == 10

    def test_enum_profile(self):
        code, out, _ = cli("enum", "--n", "3", "--profile")
        assert records(out) == [{"n": 3, "counts": {"1": 2, "2": 3, "3": 6, "4": 8, "6": 1}, "total": 20}]

    def test_learn_function_with_transcript(self, tmp_path):
        path = tmp_path / "t.jsonl"
        code, out, _ = cli("learn", "--n", "3", "--algo", "find-border", "--function", "ff",
                           "--transcript", str(path))
        assert code == 0
        rows = records(out)
        assert rows[0] == {"table_hex": "ff", "m": 1, "asked": 4, "ratio": "4/1"}
        assert rows[-1] == {"summary": {"max_ratio": "4/1", "mean_asked": "4/1"}}
        log = records(path.read_text())
        assert [r["set_mask"] for r in log] == [7, 6, 4, 0]
        assert not any(r["was_deducible"] for r in log)

    def test_learn_all(self):
        code, out, _ = cli("learn", "--n", "3", "--algo", "hansel", "--all")
        rows = records(out)
        assert code == 0 and len(rows) == 21
        assert "summary" in rows[-1]

    def test_learn_bad_hex(self):
        code, _, err = cli("learn", "--n", "2", "--algo", "hansel", "--function", "2")
        assert code == 2
        assert "error" in err

    def test_evaluate(self):
        code, out, _ = cli("evaluate", "--n", "3", "--algo", "find-border")
        rep = records(out)[0]
        assert code == 0 and rep["max_ratio"] == "4/1" and rep["mode"] == "exhaustive"

    def test_bounds(self):
        code, out, _ = cli("bounds", "--n", "5")
        row = records(out)[0]
        assert code == 0 and row["log2"] == "9/5" and row["best"] == "2/1"

    def test_optimal(self, tmp_path):
        dot, js = tmp_path / "t.dot", tmp_path / "t.json"
        code, out, _ = cli("optimal", "--n", "3", "--emit-tree", str(dot), "--emit-json", str(js))
        rec = records(out)[0]
        assert code == 0
        assert rec["value"] == "5/2" and rec["exact"] and rec["witness_verified"]
        assert dot.read_text().startswith("digraph")
        code, out, _ = cli("verify-tree", "--n", "3", "--file", str(js), "--claim", "5/2")
        assert code == 0 and records(out)[0]["max_ratio"] == "5/2"

    def test_optimal_deterministic(self):
        assert cli("optimal", "--n", "3")[1] == cli("optimal", "--n", "3")[1]

    def test_verify_truncated_and_claim(self, tmp_path):
        path = tmp_path / "fig.json"
        path.write_text(serialize(FIG2_TRUNCATED))
        code, out, _ = cli("verify-tree", "--n", "3", "--file", str(path))
        rec = records(out)[0]
        assert code == 0 and not rec["complete"] and rec["max_ratio"] == "5/2"
        assert cli("verify-tree", "--n", "3", "--file", str(path), "--claim", "7/3")[0] == 1

    def test_verify_wrong_tree(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(serialize(Node(0, Leaf(MonotoneFn.zero(1)), Leaf(MonotoneFn.zero(1)))))
        assert cli("verify-tree", "--n", "1", "--file", str(path))[0] == 1

    @pytest.mark.parametrize("args", [
        ("optimal", "--n", "9"),
        ("enum", "--n", "7"),
        ("bounds", "--n", "17"),
        ("enum", "--n", "0"),
    ])
    def test_range_errors(self, args):
        assert cli(*args)[0] == 2

    def test_unreadable_and_empty_files(self, tmp_path):
        assert cli("verify-tree", "--n", "3", "--file", str(tmp_path / "missing.json"))[0] == 2
        empty = tmp_path / "empty.json"
        empty.write_text("")
        assert cli("verify-tree", "--n", "3", "--file", str(empty))[0] == 2

    def test_unwritable_output(self, tmp_path):
        target = tmp_path / "nope" / "t.dot"
        assert cli("optimal", "--n", "2", "--emit-tree", str(target))[0] == 2

    def test_argparse_usage_exit(self):
        with pytest.raises(SystemExit) as exc:
            main(["learn", "--n", "3", "--algo", "bogus"])
        assert exc.value.code == 2

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "monolearn", "bounds", "--n", "3"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["n"] == 3
