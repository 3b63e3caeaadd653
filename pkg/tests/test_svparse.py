"""Lexer and parser unit behavior: tokens, errors, spans, directives."""

import pytest

from bugscope.svparse import (
    AstTree,
    LexError,
    NodeKind,
    SourceFile,
    TokKind,
    UnbalancedDelimiters,
    count_nodes,
    lex,
    parse_source,
    strip_directives,
)


def parse(text: str) -> AstTree:
    return parse_source(SourceFile(path="t.sv", content=text))


# ---- lexer ----

def test_lex_basic_kinds():
    toks = lex("module m; assign y = 4'b10_1x; endmodule")
    kinds = [t.kind for t in toks]
    assert kinds[0] is TokKind.KEYWORD
    assert kinds[1] is TokKind.IDENT
    assert toks[-1].kind is TokKind.EOF
    numbers = [t for t in toks if t.kind is TokKind.NUMBER]
    assert [t.text for t in numbers] == ["4'b10_1x"]


def test_lex_maximal_munch_operators():
    toks = lex("a <<<= b; c ==? d; e !== f;")
    ops = [t.text for t in toks if t.kind is TokKind.OP and t.text != ";"]
    assert ops == ["<<<=", "==?", "!=="]


def test_lex_wildcard_equality_hides_question_mark():
    toks = lex("x ==? y")
    assert not any(t.text == "?" for t in toks if t.kind is TokKind.OP)


def test_lex_string_and_escapes():
    toks = lex('x = "a \\"quoted\\" z";')
    strings = [t for t in toks if t.kind is TokKind.STRING]
    assert len(strings) == 1


def test_lex_unterminated_string():
    with pytest.raises(LexError) as err:
        lex('x = "abc')
    assert "string" in str(err.value)


def test_lex_unterminated_block_comment():
    with pytest.raises(LexError):
        lex("a /* never closed")


def test_lex_system_and_macro_identifiers():
    toks = lex("$display(`MSG)")
    assert toks[0].kind is TokKind.SYSID
    assert toks[0].text == "$display"
    macro = [t for t in toks if t.kind is TokKind.MACRO]
    assert [t.text for t in macro] == ["`MSG"]


def test_lex_offsets_are_byte_offsets():
    # a two-byte UTF-8 character in a comment shifts byte offsets
    text = "/* é */ module"
    toks = lex(text)
    assert toks[0].start == len(text.encode()) - len("module")


def test_strip_directives_preserves_offsets():
    text = "`define A 1\nmodule m;\nendmodule\n"
    stripped, flagged = strip_directives(text)
    assert flagged
    assert len(stripped) == len(text)
    assert stripped.index("module") == text.index("module")


def test_strip_directives_define_continuation():
    text = "`define SUM(a, b) \\\n  ((a) + (b))\nmodule m;\nendmodule\n"
    stripped, _ = strip_directives(text)
    assert "((a) + (b))" not in stripped
    assert "module m;" in stripped


def test_strip_directives_keeps_both_ifdef_branches():
    text = "`ifdef X\nassign a = 1;\n`else\nassign a = 2;\n`endif\n"
    stripped, _ = strip_directives(text)
    assert "assign a = 1;" in stripped
    assert "assign a = 2;" in stripped


def test_no_directives_flag():
    _, flagged = strip_directives("module m; endmodule")
    assert not flagged


# ---- parser: structure and spans ----

def test_tree_records_directive_stripping():
    assert parse("`timescale 1ns/1ps\nmodule m;\nendmodule").directives_stripped
    assert not parse("module m;\nendmodule").directives_stripped


def test_spans_nest_and_cover_source():
    text = """module m;
  always_comb begin
    if (en) y = sel ? a : b;
  end
endmodule
"""
    tree = parse(text)

    def check(node):
        start, end = node.span
        assert 0 <= start <= end <= len(text.encode())
        for child in node.children:
            assert start <= child.span[0] and child.span[1] <= end
            check(child)

    assert len(tree.members) == 1
    check(tree.members[0])


def test_span_matches_source_slice():
    text = "module m;\n  assign y = a;\nendmodule\n"
    tree = parse(text)
    module = tree.members[0]
    assert text[module.span[0] : module.span[1]].startswith("module")
    assign = module.children[0]
    assert text[assign.span[0] : assign.span[1]] == "assign y = a;"


def test_dump_is_indented_and_stable():
    tree = parse("module m;\n  assign y = a;\nendmodule\n")
    dump = tree.dump()
    assert dump.splitlines()[0].startswith("ModuleDeclaration")
    assert dump == parse("module m;\n  assign y = a;\nendmodule\n").dump()


def test_walk_yields_every_node():
    tree = parse("module m;\n  always_comb if (a) y = 1;\nendmodule\n")
    kinds = sorted(node.kind.value for node in tree.walk())
    assert kinds == [
        "AlwaysCombBlock",
        "BlockingAssignment",
        "ConditionalStatement",
        "ModuleDeclaration",
    ]


# ---- parser: tolerance and errors ----

def test_unknown_constructs_become_other():
    text = """module m;
  covergroup cg @(posedge clk);
    coverpoint x;
  endgroup
  import pkg::*;
endmodule
"""
    hist = count_nodes(parse(text))
    assert hist["OtherMember"] == 2
    assert hist["ModuleDeclaration"] == 1


def test_interface_at_top_level_is_other():
    hist = count_nodes(parse("interface bus;\n  logic v;\nendinterface\n"))
    assert dict(hist) == {"OtherMember": 1}


def test_missing_endmodule():
    with pytest.raises(UnbalancedDelimiters):
        parse("module m;\n  assign y = a;\n")


def test_unmatched_close_paren():
    with pytest.raises(UnbalancedDelimiters):
        parse("module m;\n  assign y = a);\nendmodule\n")


def test_stray_end_keyword():
    with pytest.raises(UnbalancedDelimiters):
        parse("module m;\n  end\nendmodule\n")


def test_begin_without_end():
    with pytest.raises(UnbalancedDelimiters):
        parse("module m;\n  always_comb begin\n    y = a;\nendmodule\n")


def test_case_without_endcase():
    with pytest.raises(UnbalancedDelimiters):
        parse("module m;\n  always_comb case (x) default: y = 1;\nendmodule\n")


def test_error_carries_byte_offset():
    with pytest.raises(UnbalancedDelimiters) as err:
        parse("assign y = (a;")
    assert err.value.offset == 11
    assert "byte 11" in str(err.value)


# ---- parser: counting rules ----

def test_each_else_if_counts_once():
    text = """module m;
  always_comb begin
    if (a) y = 1;
    else if (b) y = 2;
    else if (c) y = 3;
    else y = 4;
  end
endmodule
"""
    assert count_nodes(parse(text))["ConditionalStatement"] == 3


def test_sensitivity_list_ternary_not_counted():
    hist = count_nodes(parse("module m;\n  always @(s ? a : b) y = 1;\nendmodule\n"))
    assert hist["ConditionalExpression"] == 0


def test_ternary_in_port_connection_counted():
    hist = count_nodes(parse("module m;\n  sub u (.x(s ? a : b));\nendmodule\n"))
    assert hist["ConditionalExpression"] == 1
    assert hist["HierarchyInstantiation"] == 1


def test_ternary_in_module_header_counted_on_module():
    text = "module m #(parameter W = X ? 8 : 4);\nendmodule\n"
    tree = parse(text)
    module = tree.members[0]
    assert [c.kind for c in module.children] == [NodeKind.CONDITIONAL_EXPRESSION]


def test_ternary_in_case_label_with_colon():
    text = """module m;
  always_comb
    case (x)
      en ? 1 : 0: y = a;
      default: y = b;
    endcase
endmodule
"""
    hist = count_nodes(parse(text))
    assert hist["ConditionalExpression"] == 1
    assert hist["BlockingAssignment"] == 2


def test_increment_and_decrement_are_blocking():
    text = "module m;\n  always_ff @(posedge c) begin i++; j--; end\nendmodule\n"
    assert count_nodes(parse(text))["BlockingAssignment"] == 2


def test_comment_and_whitespace_invariance():
    plain = "module m;\n  always_comb y = s ? a : b;\nendmodule\n"
    commented = "module /*x*/ m; // hi\n  always_comb y = s ? a : b; /* t */\nendmodule\n"
    squeezed = "module m;always_comb y=s?a:b;endmodule"
    h = count_nodes(parse(plain))
    assert count_nodes(parse(commented)) == h
    assert count_nodes(parse(squeezed)) == h


def test_parse_is_deterministic():
    text = "module m;\n  sub u (.a(a));\n  always_comb y = a;\nendmodule\n"
    first = parse(text)
    second = parse(text)
    assert first.dump() == second.dump()
    assert count_nodes(first) == count_nodes(second)


def test_empty_source_parses_to_empty_tree():
    tree = parse("")
    assert tree.members == []
    assert dict(count_nodes(tree)) == {}
