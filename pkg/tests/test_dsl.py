"""Lexer, parser, and pretty-printer behavior."""

import pytest
from hypothesis import given, settings

from planout import corpus, errors
from planout.dsl import decompile, parse, parse_or_raise, tokenize
from strategies import script_irs


class TestTokenize:
    def test_offsets_and_kinds(self):
        tokens = tokenize("x = 2; # note")
        assert [(t.kind, t.lexeme, t.offset) for t in tokens[:4]] == [
            ("identifier", "x", 0),
            ("punctuation", "=", 2),
            ("number", "2", 4),
            ("punctuation", ";", 5),
        ]
        assert tokens[-1].kind == "eof"

    def test_comments_stripped(self):
        plain = tokenize("x = 2;")
        commented = tokenize("# lead\nx = 2; # trail\n# tail")
        assert [(t.kind, t.lexeme) for t in plain] == \
            [(t.kind, t.lexeme) for t in commented]

    def test_string_quoting_and_escapes(self):
        tokens = tokenize("x = 'a\\n'; y = \"b\";")
        strings = [t.value for t in tokens if t.kind == "string"]
        assert strings == ["a\n", "b"]

    def test_two_char_operators(self):
        lexemes = [t.lexeme for t in tokenize("a == b != c <= d && e || !f")]
        assert "==" in lexemes and "!=" in lexemes and "<=" in lexemes
        assert "&&" in lexemes and "||" in lexemes

    def test_float_and_exponent(self):
        values = [t.value for t in tokenize("0.5 2e3 1.5e-2")
                  if t.kind == "number"]
        assert values == [0.5, 2000.0, 0.015]


class TestParse:
    def test_simple_assignment(self):
        ir = parse_or_raise("x = 2;")
        assert ir.root[0] == {"op": "set", "var": "x", "value": 2}

    def test_random_op_keyword_args(self):
        ir = parse_or_raise(
            "button_color = uniformChoice(choices=['a', 'b'], unit=userid);")
        node = ir.root[0]["value"]
        assert node["op"] == "uniformChoice"
        assert node["args"]["unit"] == {"op": "get", "var": "userid"}
        assert node["args"]["choices"] == {"op": "array", "values": ["a", "b"]}

    def test_builtin_positional_args(self):
        ir = parse_or_raise("n = min(length(friends), 3);")
        node = ir.root[0]["value"]
        assert node["op"] == "min"
        assert node["values"][1] == 3
        assert node["values"][0]["op"] == "length"

    def test_if_else_chain(self):
        ir = parse_or_raise(
            "if (a) { x = 1; } else if (b) { x = 2; } else { x = 3; }")
        node = ir.root[0]
        assert node["op"] == "if"
        assert len(node["branches"]) == 2
        assert node["else"] == [{"op": "set", "var": "x", "value": 3}]

    def test_precedence(self):
        ir = parse_or_raise("x = 1 + 2 * 3;")
        node = ir.root[0]["value"]
        assert node["op"] == "add"
        assert node["rhs"]["op"] == "mul"

    def test_parenthesized_grouping(self):
        node = parse_or_raise("x = (1 + 2) * 3;").root[0]["value"]
        assert node["op"] == "mul"
        assert node["lhs"]["op"] == "add"

    def test_unary_minus_folds_into_literal(self):
        assert parse_or_raise("x = -4;").root[0]["value"] == -4
        assert parse_or_raise("x = -0.5;").root[0]["value"] == -0.5

    def test_unary_minus_on_variable(self):
        node = parse_or_raise("x = -y;").root[0]["value"]
        assert node == {"op": "neg", "value": {"op": "get", "var": "y"}}

    def test_indexing(self):
        node = parse_or_raise("x = probs[has_banner];").root[0]["value"]
        assert node["op"] == "index"
        assert node["base"] == {"op": "get", "var": "probs"}

    def test_return_statement(self):
        assert parse_or_raise("return;").root == ({"op": "return"},)
        assert parse_or_raise("return false;").root == \
            ({"op": "return", "value": False},)

    def test_keywords_as_literals(self):
        ir = parse_or_raise("a = true; b = false; c = null;")
        assert [s["value"] for s in ir.root] == [True, False, None]

    def test_and_or_not_words(self):
        node = parse_or_raise("x = a and not b or c;").root[0]["value"]
        assert node["op"] == "or"
        assert node["lhs"]["op"] == "and"
        assert node["lhs"]["rhs"]["op"] == "not"

    @pytest.mark.parametrize("name", corpus.names())
    def test_corpus_parses_cleanly(self, name):
        result = parse(corpus.get(name).source)
        assert result.ok
        assert result.diagnostics == []


class TestParseErrors:
    def test_missing_semicolon_offset(self):
        result = parse("x = 2")
        assert not result.ok
        assert result.diagnostics[0].offset == 5

    def test_unterminated_string(self):
        with pytest.raises(errors.ParseError):
            parse_or_raise("x = 'oops;")

    def test_unbalanced_brace(self):
        assert not parse("if (a) { x = 1;").ok

    def test_positional_args_for_random_op(self):
        result = parse("x = uniformChoice([1, 2], userid);")
        assert not result.ok
        assert any("keyword" in d.message for d in result.diagnostics)

    def test_chained_comparison_rejected(self):
        assert not parse("x = 1 < 2 < 3;").ok

    def test_parse_error_carries_offset(self):
        with pytest.raises(errors.ParseError) as exc_info:
            parse_or_raise("x = ;")
        assert exc_info.value.offset == 4

    def test_garbage_statement(self):
        assert not parse("42;").ok


class TestDecompile:
    def test_readable_output(self):
        source = ("button_color = uniformChoice(choices=['red', 'blue'], "
                  "unit=userid);")
        assert decompile(parse_or_raise(source)).strip() == source

    def test_if_chain_layout(self):
        text = decompile(parse_or_raise(
            "if (a) { x = 1; } else if (b) { x = 2; } else { x = 3; }"))
        assert "} else if (b) {" in text
        assert "} else {" in text

    def test_precedence_parens_preserved(self):
        ir = parse_or_raise("x = (1 + y) * 3;")
        assert parse_or_raise(decompile(ir)) == ir

    @pytest.mark.parametrize("name", corpus.names())
    def test_corpus_round_trip(self, name):
        ir = corpus.get(name).ir
        assert parse_or_raise(decompile(ir)) == ir

    @settings(max_examples=200)
    @given(script_irs)
    def test_generated_round_trip(self, ir):
        assert parse_or_raise(decompile(ir)) == ir
