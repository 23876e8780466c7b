import io
import json
import re

from treesec import export_dot, is_isomorphic, max_security, parse, read_tree, security
from treesec.cli import main

FIG1 = "((L(LL))(L((LL)(LL))))"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- a small checker for the DOT grammar (graphviz syntax, digraph form) ---

_TOKEN = re.compile(
    r'\s+|(?P<id>[A-Za-z_][A-Za-z_0-9]*|-?(?:\.\d+|\d+(?:\.\d*)?)|"(?:[^"\\]|\\.)*")'
    r"|(?P<punct>->|--|[{}\[\];,=])"
)


def _tokenize_dot(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise AssertionError(f"DOT tokenizer stuck at {text[pos:pos+20]!r}")
        if m.lastgroup:
            out.append(m.group(m.lastgroup))
        pos = m.end()
    return out


class DotParser:
    """Recursive-descent parser for the DOT grammar subset: a digraph with
    node statements, edge statements and attribute lists."""

    def __init__(self, text):
        self.toks = _tokenize_dot(text)
        self.i = 0
        self.nodes = {}
        self.edges = []

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        assert tok is not None, "unexpected end of DOT input"
        if expected is not None:
            assert tok == expected, f"expected {expected!r}, got {tok!r}"
        self.i += 1
        return tok

    def _is_id(self, tok):
        return tok is not None and tok not in "{}[];,=" and tok not in ("->", "--")

    def parse(self):
        if self.peek() == "strict":
            self.take()
        kind = self.take()
        assert kind in ("digraph", "graph")
        if self._is_id(self.peek()):
            self.take()
        self.take("{")
        while self.peek() != "}":
            self.stmt()
            if self.peek() == ";":
                self.take()
        self.take("}")
        assert self.peek() is None, "trailing tokens after the graph"
        return self

    def stmt(self):
        first = self.take()
        assert self._is_id(first), f"statement must start with an id, got {first!r}"
        if self.peek() == "=":
            self.take()
            value = self.take()
            assert self._is_id(value)
            return
        attrs = {}
        while self.peek() == "[":
            attrs.update(self.attr_list())
        if self.peek() in ("->", "--"):
            prev = first
            while self.peek() in ("->", "--"):
                self.take()
                nxt = self.take()
                assert self._is_id(nxt)
                self.edges.append((prev, nxt))
                prev = nxt
            while self.peek() == "[":
                self.attr_list()
        else:
            self.nodes[first] = attrs

    def attr_list(self):
        self.take("[")
        attrs = {}
        while self.peek() != "]":
            key = self.take()
            self.take("=")
            value = self.take()
            attrs[key] = value.strip('"')
            if self.peek() in (",", ";"):
                self.take()
        self.take("]")
        return attrs


class TestExportDot:
    def test_single_vertex_with_rank_label(self):
        dot = export_dot(parse("L"), annotate="ranks")
        p = DotParser(dot).parse()
        assert p.nodes == {"0": {"label": "0"}}
        assert p.edges == []

    def test_worked_example_rank_labels(self):
        dot = export_dot(parse(FIG1), annotate="ranks")
        p = DotParser(dot).parse()
        labels = sorted(int(a["label"]) for a in p.nodes.values())
        assert labels == [0] * 8 + [1] * 5 + [2] * 2
        assert int(p.nodes["0"]["label"]) == 2  # the root
        assert len(p.edges) == 14

    def test_plain_export_parses_and_names_by_preorder(self):
        dot = export_dot(parse("((LL)L)"))
        p = DotParser(dot).parse()
        assert sorted(p.nodes) == ["0", "1", "2", "3", "4"]
        # canonical preorder: leaf child first
        assert ("0", "1") in p.edges

    def test_deterministic(self):
        a = export_dot(parse(FIG1), annotate="ranks")
        b = export_dot(parse(FIG1), annotate="ranks")
        assert a == b


class TestCommands:
    def test_security(self, capsys):
        code, out, _ = run(capsys, "security", "--tree", FIG1)
        assert code == 0 and out == "9\n"

    def test_build_tl(self, capsys):
        code, out, _ = run(capsys, "build", "--family", "tl", "--leaves", "7")
        assert code == 0 and out == "(L((LL)((LL)(LL))))\n"

    def test_build_f_power_of_two_is_complete(self, capsys):
        _, f_out, _ = run(capsys, "build", "--family", "f", "--leaves", "8")
        _, c_out, _ = run(capsys, "build", "--family", "complete", "--height", "3")
        assert f_out == c_out

    def test_build_starlike_and_kary(self, capsys):
        code, out, _ = run(capsys, "build", "--family", "starlike", "--arms", "2,2,2")
        assert code == 0 and len(read_tree(out)) == 7 and out.count("L") == 3
        code, out, _ = run(
            capsys, "build", "--family", "complete-kary", "--order", "13", "--k", "3"
        )
        assert code == 0 and len(read_tree(out)) == 13

    def test_build_missing_flag(self, capsys):
        code, _, err = run(capsys, "build", "--family", "tl")
        assert code == 1 and "leaves" in err

    def test_rank_table_and_vertex(self, capsys):
        code, out, _ = run(capsys, "rank", "--tree", FIG1)
        lines = out.strip().split("\n")
        assert code == 0 and len(lines) == 15
        assert lines[0] == "0\t2"
        code, out, _ = run(capsys, "rank", "--tree", FIG1, "--vertex", "0")
        assert code == 0 and out == "2\n"

    def test_protected(self, capsys):
        code, out, _ = run(capsys, "protected", "--tree", FIG1, "--level", "2")
        assert code == 0 and out == "2\n"

    def test_partition(self, capsys):
        code, out, _ = run(
            capsys, "partition", "--tree", "(((((LL)(LL))(LL))((LL)(LL)))L)"
        )
        assert code == 0 and out == "2 2 1 0\n"

    def test_normalize_with_trace(self, capsys):
        code, out, _ = run(capsys, "normalize", "--tree", "(L(L(LL)))", "--trace")
        lines = out.strip().split("\n")
        assert code == 0
        assert lines[-1] == "((LL)(LL))"
        assert lines[0].startswith("switch_nested_high_sibling: security 3 -> 4")

    def test_flip(self, capsys):
        _, spine, _ = run(capsys, "build", "--family", "tl", "--leaves", "11")
        code, out, _ = run(
            capsys, "flip", "--tree", spine.strip(), "--index", "2", "--variant", "2"
        )
        assert code == 0
        assert security(read_tree(out)) == max_security(11)

    def test_enumerate(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--leaves", "5")
        assert code == 0 and len(out.strip().split("\n")) == 3
        code, out, _ = run(capsys, "enumerate", "--leaves", "5", "--count-only")
        assert code == 0 and out == "3\n"

    def test_verify(self, capsys):
        code, out, _ = run(capsys, "verify", "--max-leaves", "12")
        assert code == 0
        assert out == "OK: formula = oracle for ℓ=3..12\n"

    def test_verify_kary_and_starlike(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--kary", "12", "3", "--starlike", "9", "3"
        )
        assert code == 0
        assert "OK: k-ary root rank = oracle for n=1..12, k=3" in out
        assert "OK: degree-3 root rank = oracle for n=4..9" in out

    def test_table(self, capsys):
        code, out, _ = run(capsys, "table", "--max-leaves", "7")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "leaves\tshapes\tmax_security\tmaximizers\tfraction"
        assert lines[7] == "7\t11\t8\t4\t4/11"
        assert "." not in out

    def test_export_json_roundtrip(self, capsys):
        code, out, _ = run(capsys, "export", "--tree", FIG1, "--format", "json")
        assert code == 0
        assert is_isomorphic(read_tree(out), parse(FIG1))
        json.loads(out)

    def test_export_dot_via_cli(self, capsys):
        code, out, _ = run(capsys, "export", "--tree", FIG1, "--format", "dot", "--ranks")
        assert code == 0
        DotParser(out).parse()


class TestTreeInputs:
    def test_json_tree_inline(self, capsys):
        obj = json.dumps({"children": [{"children": []}, {"children": []}]})
        code, out, _ = run(capsys, "security", "--tree", obj)
        assert code == 0 and out == "1\n"

    def test_file_input(self, capsys, tmp_path):
        path = tmp_path / "tree.txt"
        path.write_text(FIG1)
        code, out, _ = run(capsys, "security", "--file", str(path))
        assert code == 0 and out == "9\n"

    def test_stdin_input(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO(FIG1))
        code, out, _ = run(capsys, "security", "--file", "-")
        assert code == 0 and out == "9\n"

    def test_outputs_reparse(self, capsys):
        for family, flags in [
            ("tl", ["--leaves", "11"]),
            ("f", ["--leaves", "11"]),
            ("caterpillar", ["--leaves", "5"]),
        ]:
            _, out, _ = run(capsys, "build", "--family", family, *flags)
            reparsed = read_tree(out)
            _, again, _ = run(capsys, "security", "--tree", out.strip())
            assert int(again) == security(reparsed)

    def test_enumerate_output_reparses(self, capsys):
        _, out, _ = run(capsys, "enumerate", "--leaves", "6")
        for line in out.strip().split("\n"):
            t = read_tree(line)
            assert t.leaf_count() == 6


class TestExitCodes:
    def test_parse_error_is_one(self, capsys):
        code, _, err = run(capsys, "security", "--tree", "((L)")
        assert code == 1 and "error" in err

    def test_guard_error_is_one(self, capsys):
        code, _, err = run(capsys, "partition", "--tree", "(LLL)")
        assert code == 1 and err

    def test_size_guard_is_two(self, capsys):
        code, _, err = run(capsys, "enumerate", "--leaves", "23")
        assert code == 2 and "size guard" in err

    def test_unknown_flag_is_one(self, capsys):
        code, _, err = run(capsys, "security", "--tree", "L", "--bogus")
        assert code == 1 and err

    def test_unknown_command_is_one(self, capsys):
        code, _, _ = run(capsys, "frobnicate")
        assert code == 1

    def test_table_over_guard_is_two(self, capsys):
        code, _, _ = run(capsys, "table", "--max-leaves", "21")
        assert code == 2
