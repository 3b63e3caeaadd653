"""Tolerant recursive-descent parser for a SystemVerilog subset.

Supported constructs (everything else degrades to Other* nodes via
balanced-token skipping, never a parse failure):

  - module/endmodule with parameter and port lists
  - parameter/localparam and data declarations (net and variable)
  - assign (continuous assignment)
  - always, always_ff, always_comb, always_latch (always_latch and legacy
    always both map to AlwaysBlock)
  - if/else (ConditionalStatement, one node per `if`)
  - case/casez/casex (all CaseStatement)
  - for loops and generate-level if/case (all GenerateConstruct)
  - blocking (=, op-assign, ++/--) and non-blocking (<=) assignments
  - module instantiation with named/positional connections, one node per
    instance
  - ternary ?: expressions at any depth, one node per `?` operator,
    counted lexically even inside skipped constructs

begin/end blocks, sensitivity lists, port lists and loop headers produce no
nodes of their own. Parsing is pure and deterministic; identical input yields
an identical tree.
"""

from __future__ import annotations

from .lexer import LexError, TokKind, Token, lex, strip_directives
from .nodes import AstNode, AstTree, NodeKind, SourceFile

__all__ = ["parse_source", "UnbalancedDelimiters", "LexError"]


class UnbalancedDelimiters(Exception):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


# Keyword-delimited regions and their closing keyword(s).
_PAIR_END: dict[str, frozenset[str]] = {
    "begin": frozenset({"end"}),
    "fork": frozenset({"join", "join_any", "join_none"}),
    "module": frozenset({"endmodule"}),
    "macromodule": frozenset({"endmodule"}),
    "case": frozenset({"endcase"}),
    "casez": frozenset({"endcase"}),
    "casex": frozenset({"endcase"}),
    "randcase": frozenset({"endcase"}),
    "function": frozenset({"endfunction"}),
    "task": frozenset({"endtask"}),
    "generate": frozenset({"endgenerate"}),
    "interface": frozenset({"endinterface"}),
    "package": frozenset({"endpackage"}),
    "class": frozenset({"endclass"}),
    "clocking": frozenset({"endclocking"}),
    "property": frozenset({"endproperty"}),
    "sequence": frozenset({"endsequence"}),
    "covergroup": frozenset({"endgroup"}),
    "specify": frozenset({"endspecify"}),
    "primitive": frozenset({"endprimitive"}),
    "checker": frozenset({"endchecker"}),
    "program": frozenset({"endprogram"}),
    "config": frozenset({"endconfig"}),
}

_END_KEYWORDS = frozenset().union(*_PAIR_END.values())

_OPEN_TO_CLOSE = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = frozenset(")]}")

# Keywords that may start a data declaration (module-level or procedural).
_TYPE_KEYWORDS = frozenset("""
    wire reg logic bit byte shortint int longint integer time real realtime
    shortreal string chandle event var genvar parameter localparam specparam
    input output inout ref const static automatic signed unsigned supply0
    supply1 tri triand trior tri0 tri1 wand wor uwire enum struct union
""".split())

# Member-level keywords handled by keyword-pair skipping.
_SKIP_PAIR_MEMBERS = frozenset("""
    function task interface package class property sequence covergroup
    clocking specify primitive checker program config fork begin randcase
""".split())

# Member-level keywords consumed up to the terminating semicolon.
_SKIP_SEMI_MEMBERS = frozenset("""
    typedef import export defparam alias bind timeunit timeprecision
    pulldown pullup
""".split())

_ASSERT_LIKE = frozenset({"assert", "assume", "cover", "restrict", "expect"})

_OP_ASSIGN = frozenset({
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", "<<<=", ">>>=",
})


def parse_source(file: SourceFile) -> AstTree:
    """Parse one design file into an AST of countable construct nodes."""
    stripped, had_directives = strip_directives(file.content)
    tokens = lex(stripped, offset_text=file.content)
    members = _Parser(tokens).parse_top()
    return AstTree(members=members, source=file, directives_stripped=had_directives)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # ---- token access ----

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def peek(self, offset: int = 1) -> Token:
        p = min(self.pos + offset, len(self.toks) - 1)
        return self.toks[p]

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.kind is not TokKind.EOF:
            self.pos += 1
        return tok

    def at_eof(self) -> bool:
        return self.cur.kind is TokKind.EOF

    def _last_end(self) -> int:
        if self.pos == 0:
            return self.cur.start
        return self.toks[self.pos - 1].end

    def _node(self, kind: NodeKind, start: int, children: list[AstNode] | None = None) -> AstNode:
        return AstNode(kind, children or [], (start, self._last_end()))

    # ---- shared consumption helpers ----

    def _ternary_node(self, tok: Token) -> AstNode:
        return AstNode(NodeKind.CONDITIONAL_EXPRESSION, [], (tok.start, tok.end))

    def _consume_balanced(self, sink: list[AstNode] | None) -> None:
        """Consume from an opening bracket through its matching closer."""
        opener = self.cur
        stack = [_OPEN_TO_CLOSE[opener.text]]
        self.advance()
        while stack:
            t = self.cur
            if t.kind is TokKind.EOF:
                raise UnbalancedDelimiters(f"unclosed '{opener.text}'", opener.start)
            if t.kind is TokKind.OP:
                if t.text in _OPEN_TO_CLOSE:
                    stack.append(_OPEN_TO_CLOSE[t.text])
                elif t.text in _CLOSERS:
                    if t.text != stack[-1]:
                        raise UnbalancedDelimiters(f"unmatched '{t.text}'", t.start)
                    stack.pop()
                elif t.text == "?" and sink is not None:
                    sink.append(self._ternary_node(t))
            self.advance()

    # Keywords at which an un-terminated statement resyncs without consuming.
    _RESYNC = frozenset({"begin"}) | _END_KEYWORDS | frozenset({"endmodule"})

    def _consume_to_semi(self, sink: list[AstNode] | None) -> None:
        """Consume through the next ';' at bracket depth zero.

        Stops without consuming at EOF or at a block-closing keyword so a
        missing semicolon cannot swallow enclosing structure.
        """
        stack: list[Token] = []
        while True:
            t = self.cur
            if t.kind is TokKind.EOF:
                if stack:
                    raise UnbalancedDelimiters(
                        f"unclosed '{stack[-1].text}'", stack[-1].start
                    )
                return
            if t.kind is TokKind.OP:
                if t.text in _OPEN_TO_CLOSE:
                    stack.append(t)
                elif t.text in _CLOSERS:
                    if not stack or t.text != _OPEN_TO_CLOSE[stack[-1].text]:
                        raise UnbalancedDelimiters(f"unmatched '{t.text}'", t.start)
                    stack.pop()
                elif t.text == ";" and not stack:
                    self.advance()
                    return
                elif t.text == "?" and sink is not None:
                    sink.append(self._ternary_node(t))
            elif t.kind is TokKind.KEYWORD and not stack and t.text in self._RESYNC:
                return
            self.advance()

    def _skip_construct(self, sink: list[AstNode] | None) -> None:
        """Balanced skip of one unrecognized construct.

        Keyword-delimited constructs are skipped to their matching end
        keyword (nesting-aware); anything else is consumed to the next
        semicolon. Ternary operators in the skipped region still reach
        `sink`.
        """
        first = self.cur
        if first.kind is TokKind.KEYWORD and first.text in _PAIR_END:
            stack: list[frozenset[str]] = [_PAIR_END[first.text]]
            self.advance()
            while stack:
                t = self.cur
                if t.kind is TokKind.EOF:
                    raise UnbalancedDelimiters(
                        f"'{first.text}' without matching end keyword", first.start
                    )
                if t.kind is TokKind.KEYWORD:
                    if t.text in _PAIR_END:
                        stack.append(_PAIR_END[t.text])
                    elif t.text in stack[-1]:
                        stack.pop()
                    elif t.text in _END_KEYWORDS:
                        raise UnbalancedDelimiters(f"mismatched '{t.text}'", t.start)
                elif t.kind is TokKind.OP:
                    if t.text in _OPEN_TO_CLOSE:
                        stack.append(frozenset({_OPEN_TO_CLOSE[t.text]}))
                    elif t.text in _CLOSERS:
                        if t.text not in stack[-1]:
                            raise UnbalancedDelimiters(f"unmatched '{t.text}'", t.start)
                        stack.pop()
                    elif t.text == "?" and sink is not None:
                        sink.append(self._ternary_node(t))
                self.advance()
            self._consume_end_label()
        else:
            self._consume_to_semi(sink)

    def _consume_end_label(self) -> None:
        if self.cur.is_op(":") and self.peek().kind is TokKind.IDENT:
            self.advance()
            self.advance()

    def _skip_statement(self, sink: list[AstNode] | None) -> None:
        """Skip one statement-shaped region without losing nesting structure.

        Compound statements recurse so that a semicolon inside a nested arm is
        never mistaken for the end of the whole statement.
        """
        if self.at_eof():
            return
        t = self.cur
        if t.kind is TokKind.OP and t.text == "@":
            self._consume_event_control()
            self._skip_statement(sink)
            return
        if t.kind is TokKind.OP and t.text == "#":
            self._consume_delay(sink)
            self._skip_statement(sink)
            return
        if t.kind is TokKind.IDENT and self.peek().is_op(":"):
            self.advance()
            self.advance()
            self._skip_statement(sink)
            return
        if t.kind is TokKind.KEYWORD:
            if t.text in _PAIR_END:
                self._skip_construct(sink)
                return
            if t.text in ("unique", "unique0", "priority"):
                self.advance()
                self._skip_statement(sink)
                return
            if t.text == "if":
                self.advance()
                if self.cur.is_op("("):
                    self._consume_balanced(sink)
                self._skip_statement(sink)
                if self.cur.is_kw("else"):
                    self.advance()
                    self._skip_statement(sink)
                return
            if t.text in ("for", "while", "repeat", "foreach", "wait"):
                self.advance()
                if self.cur.is_op("("):
                    self._consume_balanced(sink)
                self._skip_statement(sink)
                return
            if t.text == "do":
                self.advance()
                self._skip_statement(sink)
                if self.cur.is_kw("while"):
                    self._consume_to_semi(sink)
                return
            if t.text == "forever":
                self.advance()
                self._skip_statement(sink)
                return
        self._consume_to_semi(sink)

    def _consume_event_control(self) -> None:
        """Consume an @-event control. Produces no nodes by design."""
        self.advance()  # '@'
        t = self.cur
        if t.is_op("("):
            self._consume_balanced(None)
        elif t.is_op("*"):
            self.advance()
        elif t.kind is TokKind.IDENT:
            self.advance()

    def _consume_delay(self, sink: list[AstNode] | None) -> None:
        self.advance()  # '#'
        t = self.cur
        if t.is_op("("):
            self._consume_balanced(sink)
        elif t.kind in (TokKind.NUMBER, TokKind.IDENT):
            self.advance()

    # ---- top level ----

    def parse_top(self) -> list[AstNode]:
        out: list[AstNode] = []
        while not self.at_eof():
            t = self.cur
            if t.is_kw("module", "macromodule"):
                out.append(self._parse_module())
            elif t.is_op(";"):
                self.advance()
            elif t.kind is TokKind.KEYWORD and (
                t.text in _END_KEYWORDS or t.text == "endmodule"
            ):
                raise UnbalancedDelimiters(f"unmatched '{t.text}'", t.start)
            else:
                start = t.start
                sink: list[AstNode] = []
                self._skip_construct(sink)
                out.append(self._node(NodeKind.OTHER_MEMBER, start, sink))
        return out

    # ---- module ----

    def _parse_module(self) -> AstNode:
        start_tok = self.cur
        self.advance()  # module/macromodule
        sink: list[AstNode] = []
        if self.cur.kind is TokKind.IDENT:
            self.advance()
        while self.cur.is_kw("import"):
            self._consume_to_semi(sink)
        if self.cur.is_op("#"):
            self.advance()
            if self.cur.is_op("("):
                self._consume_balanced(sink)
        if self.cur.is_op("("):
            self._consume_balanced(sink)
        if self.cur.is_op(";"):
            self.advance()
        items: list[AstNode] = []
        while not self.cur.is_kw("endmodule"):
            if self.at_eof():
                raise UnbalancedDelimiters("'module' without 'endmodule'", start_tok.start)
            self._parse_module_item(items)
        self.advance()  # endmodule
        self._consume_end_label()
        return self._node(NodeKind.MODULE_DECLARATION, start_tok.start, sink + items)

    def _parse_module_item(self, out: list[AstNode]) -> None:
        t = self.cur
        if t.kind is TokKind.EOF:
            return
        if t.is_op(";"):
            self.advance()
            return
        if t.kind is TokKind.KEYWORD:
            kw = t.text
            if kw in ("endmodule", "end", "endcase", "endgenerate"):
                raise UnbalancedDelimiters(f"unmatched '{kw}'", t.start)
            if kw in _END_KEYWORDS:
                # stray closer from an earlier mis-parsed region; resync
                self.advance()
                return
            if kw in ("module", "macromodule"):
                out.append(self._parse_module())
                return
            if kw == "generate":
                self.advance()
                while not self.cur.is_kw("endgenerate"):
                    if self.at_eof():
                        raise UnbalancedDelimiters("'generate' without 'endgenerate'", t.start)
                    self._parse_module_item(out)
                self.advance()
                return
            if kw == "for":
                out.append(self._parse_for(generate_level=True))
                return
            if kw == "if":
                out.append(self._parse_generate_if())
                return
            if kw in ("case", "casez", "casex"):
                out.append(self._parse_generate_case())
                return
            if kw == "assign":
                sink: list[AstNode] = []
                self.advance()
                self._consume_to_semi(sink)
                out.append(self._node(NodeKind.CONTINUOUS_ASSIGN, t.start, sink))
                return
            if kw == "always_ff":
                out.append(self._parse_always(NodeKind.ALWAYS_FF_BLOCK))
                return
            if kw == "always_comb":
                out.append(self._parse_always(NodeKind.ALWAYS_COMB_BLOCK))
                return
            if kw in ("always", "always_latch"):
                out.append(self._parse_always(NodeKind.ALWAYS_BLOCK))
                return
            if kw in ("initial", "final"):
                sink = []
                self.advance()
                self._skip_statement(sink)
                out.append(self._node(NodeKind.OTHER_MEMBER, t.start, sink))
                return
            if kw in _TYPE_KEYWORDS:
                sink = []
                self._consume_to_semi(sink)
                out.append(self._node(NodeKind.DATA_DECLARATION, t.start, sink))
                return
            if kw == "virtual":
                self.advance()  # qualifier; re-dispatch on what follows
                self._parse_module_item(out)
                return
            if kw in _ASSERT_LIKE:
                sink = []
                self._consume_to_semi(sink)
                if self.cur.is_kw("else"):
                    self._consume_to_semi(sink)
                out.append(self._node(NodeKind.OTHER_MEMBER, t.start, sink))
                return
            if kw in _SKIP_SEMI_MEMBERS:
                sink = []
                self._consume_to_semi(sink)
                out.append(self._node(NodeKind.OTHER_MEMBER, t.start, sink))
                return
            # function/task/interface/... and any other unknown keyword
            sink = []
            self._skip_construct(sink)
            out.append(self._node(NodeKind.OTHER_MEMBER, t.start, sink))
            return
        if t.kind is TokKind.MACRO:
            sink = []
            self.advance()
            if self.cur.is_op("("):
                self._consume_balanced(sink)
            if self.cur.is_op(";"):
                self.advance()
            out.append(self._node(NodeKind.OTHER_MEMBER, t.start, sink))
            return
        if t.kind is TokKind.IDENT:
            self._parse_ident_led_member(out)
            return
        # numbers, strings, stray operators
        sink = []
        self._consume_to_semi(sink)
        out.append(self._node(NodeKind.OTHER_MEMBER, t.start, sink))

    def _parse_ident_led_member(self, out: list[AstNode]) -> None:
        """Disambiguate `type name ...;` declarations from instantiations."""
        start_tok = self.cur
        sink: list[AstNode] = []
        self.advance()  # type or module identifier
        while self.cur.is_op("::") and self.peek().kind is TokKind.IDENT:
            self.advance()
            self.advance()
        if self.cur.is_op("#"):
            self.advance()
            if self.cur.is_op("("):
                self._consume_balanced(sink)
        while self.cur.is_op("["):
            self._consume_balanced(sink)
        if self.cur.kind is TokKind.IDENT:
            self.advance()  # instance or variable name
            while self.cur.is_op("["):
                self._consume_balanced(sink)
            if self.cur.is_op("("):
                self._consume_balanced(sink)
                out.append(self._node(NodeKind.HIERARCHY_INSTANTIATION, start_tok.start, sink))
                while self.cur.is_op(","):
                    self.advance()
                    inst_start = self.cur.start
                    inst_sink: list[AstNode] = []
                    if self.cur.kind is TokKind.IDENT:
                        self.advance()
                    while self.cur.is_op("["):
                        self._consume_balanced(inst_sink)
                    if self.cur.is_op("("):
                        self._consume_balanced(inst_sink)
                    out.append(
                        self._node(NodeKind.HIERARCHY_INSTANTIATION, inst_start, inst_sink)
                    )
                if self.cur.is_op(";"):
                    self.advance()
                return
            if self.cur.is_op(";", "=", ",", "["):
                self._consume_to_semi(sink)
                out.append(self._node(NodeKind.DATA_DECLARATION, start_tok.start, sink))
                return
        self._consume_to_semi(sink)
        out.append(self._node(NodeKind.OTHER_MEMBER, start_tok.start, sink))

    # ---- always blocks ----

    def _parse_always(self, kind: NodeKind) -> AstNode:
        start_tok = self.cur
        self.advance()
        sink: list[AstNode] = []
        while True:
            if self.cur.is_op("@"):
                self._consume_event_control()
            elif self.cur.is_op("#"):
                self._consume_delay(sink)
            else:
                break
        children = sink + self._parse_statement()
        return self._node(kind, start_tok.start, children)

    # ---- generate-level constructs ----

    def _parse_for(self, generate_level: bool) -> AstNode:
        start_tok = self.cur
        self.advance()
        sink: list[AstNode] = []
        if self.cur.is_op("("):
            self._consume_balanced(sink)
        if generate_level:
            body = self._parse_generate_block()
        else:
            body = self._parse_statement()
        return self._node(NodeKind.GENERATE_CONSTRUCT, start_tok.start, sink + body)

    def _parse_generate_if(self) -> AstNode:
        start_tok = self.cur
        self.advance()  # if
        sink: list[AstNode] = []
        if self.cur.is_op("("):
            self._consume_balanced(sink)
        children = sink + self._parse_generate_block()
        if self.cur.is_kw("else"):
            self.advance()
            if self.cur.is_kw("if"):
                children.append(self._parse_generate_if())
            else:
                children.extend(self._parse_generate_block())
        return self._node(NodeKind.GENERATE_CONSTRUCT, start_tok.start, children)

    def _parse_generate_case(self) -> AstNode:
        start_tok = self.cur
        self.advance()  # case/casez/casex
        sink: list[AstNode] = []
        if self.cur.is_op("("):
            self._consume_balanced(sink)
        children = list(sink)
        while not self.cur.is_kw("endcase"):
            if self.at_eof() or self.cur.is_kw("endmodule", "endgenerate"):
                raise UnbalancedDelimiters("'case' without 'endcase'", start_tok.start)
            if self.cur.is_kw("default"):
                self.advance()
                if self.cur.is_op(":"):
                    self.advance()
            else:
                self._consume_case_label(children)
            children.extend(self._parse_generate_block())
        self.advance()  # endcase
        return self._node(NodeKind.GENERATE_CONSTRUCT, start_tok.start, children)

    def _parse_generate_block(self) -> list[AstNode]:
        if self.cur.is_kw("begin"):
            begin_tok = self.cur
            self.advance()
            self._consume_begin_label()
            items: list[AstNode] = []
            while not self.cur.is_kw("end"):
                if self.at_eof() or self.cur.is_kw("endmodule", "endgenerate", "endcase"):
                    raise UnbalancedDelimiters("'begin' without 'end'", begin_tok.start)
                self._parse_module_item(items)
            self.advance()
            self._consume_end_label()
            return items
        items = []
        self._parse_module_item(items)
        return items

    def _consume_begin_label(self) -> None:
        if self.cur.is_op(":") and self.peek().kind is TokKind.IDENT:
            self.advance()
            self.advance()

    # ---- procedural statements ----

    def _parse_statement(self) -> list[AstNode]:
        t = self.cur
        if t.kind is TokKind.EOF:
            return []
        if t.is_op(";"):
            self.advance()
            return []
        if t.kind is TokKind.KEYWORD:
            kw = t.text
            if kw in ("end", "endcase", "endmodule", "endgenerate", "join", "join_any", "join_none"):
                return []  # caller's terminator; let its loop handle it
            if kw == "begin":
                self.advance()
                self._consume_begin_label()
                out: list[AstNode] = []
                while not self.cur.is_kw("end"):
                    if self.at_eof() or self.cur.is_kw(
                        "endmodule", "endcase", "endgenerate", "join", "join_any", "join_none"
                    ):
                        raise UnbalancedDelimiters("'begin' without 'end'", t.start)
                    out.extend(self._parse_statement())
                self.advance()
                self._consume_end_label()
                return out
            if kw in ("unique", "unique0", "priority"):
                self.advance()
                return self._parse_statement()
            if kw == "if":
                return [self._parse_if()]
            if kw in ("case", "casez", "casex"):
                return [self._parse_case()]
            if kw == "for":
                return [self._parse_for(generate_level=False)]
            if kw in ("while", "repeat", "foreach", "wait"):
                sink: list[AstNode] = []
                self.advance()
                if self.cur.is_op("("):
                    self._consume_balanced(sink)
                self._skip_statement(sink)
                return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
            if kw == "do":
                sink = []
                self.advance()
                self._skip_statement(sink)
                if self.cur.is_kw("while"):
                    self._consume_to_semi(sink)
                return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
            if kw == "forever":
                sink = []
                self.advance()
                self._skip_statement(sink)
                return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
            if kw in ("fork", "randcase"):
                sink = []
                self._skip_construct(sink)
                return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
            if kw in _ASSERT_LIKE:
                sink = []
                self._consume_to_semi(sink)
                if self.cur.is_kw("else"):
                    self._consume_to_semi(sink)
                return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
            if kw == "typedef":
                sink = []
                self._consume_to_semi(sink)
                return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
            if kw in _TYPE_KEYWORDS:
                sink = []
                self._consume_to_semi(sink)
                return [self._node(NodeKind.DATA_DECLARATION, t.start, sink)]
            # return/break/continue/disable/force/release/void/else/...
            sink = []
            self._consume_to_semi(sink)
            return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
        if t.kind is TokKind.MACRO:
            sink = []
            self.advance()
            if self.cur.is_op("("):
                self._consume_balanced(sink)
            if self.cur.is_op(";"):
                self.advance()
            return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
        if t.kind is TokKind.SYSID:
            sink = []
            self._consume_to_semi(sink)
            return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]
        if t.is_op("@"):
            self._consume_event_control()
            return self._parse_statement()
        if t.is_op("#"):
            self._consume_delay(None)
            return self._parse_statement()
        if t.kind is TokKind.IDENT and self.peek().is_op(":"):
            self.advance()  # statement label
            self.advance()
            return self._parse_statement()
        if t.kind is TokKind.IDENT or t.is_op("{"):
            return [self._parse_assignment_or_other()]
        sink = []
        self._consume_to_semi(sink)
        return [self._node(NodeKind.OTHER_STATEMENT, t.start, sink)]

    def _parse_if(self) -> AstNode:
        start_tok = self.cur
        self.advance()  # if
        sink: list[AstNode] = []
        if self.cur.is_op("("):
            self._consume_balanced(sink)
        children = sink + self._parse_statement()
        if self.cur.is_kw("else"):
            self.advance()
            children.extend(self._parse_statement())
        return self._node(NodeKind.CONDITIONAL_STATEMENT, start_tok.start, children)

    def _parse_case(self) -> AstNode:
        start_tok = self.cur
        self.advance()  # case/casez/casex
        sink: list[AstNode] = []
        if self.cur.is_op("("):
            self._consume_balanced(sink)
        if self.cur.is_kw("inside", "matches"):
            self.advance()
        children = list(sink)
        while not self.cur.is_kw("endcase"):
            if self.at_eof() or self.cur.is_kw(
                "end", "endmodule", "endgenerate", "join", "join_any", "join_none"
            ):
                raise UnbalancedDelimiters("'case' without 'endcase'", start_tok.start)
            if self.cur.is_kw("default"):
                self.advance()
                if self.cur.is_op(":"):
                    self.advance()
            else:
                self._consume_case_label(children)
            children.extend(self._parse_statement())
        self.advance()  # endcase
        return self._node(NodeKind.CASE_STATEMENT, start_tok.start, children)

    def _consume_case_label(self, sink: list[AstNode]) -> None:
        """Consume case-item expressions through the item ':'.

        A '?' at depth zero defers the next ':' to the ternary it opens, so
        unparenthesized ternaries in labels do not truncate the item.
        """
        stack: list[str] = []
        ternary_depth = 0
        while True:
            t = self.cur
            if t.kind is TokKind.EOF:
                return
            if t.kind is TokKind.KEYWORD and not stack and t.text in ("endcase", "endmodule"):
                return
            if t.kind is TokKind.OP:
                if t.text in _OPEN_TO_CLOSE:
                    stack.append(_OPEN_TO_CLOSE[t.text])
                elif t.text in _CLOSERS:
                    if not stack or t.text != stack[-1]:
                        raise UnbalancedDelimiters(f"unmatched '{t.text}'", t.start)
                    stack.pop()
                elif t.text == "?":
                    sink.append(self._ternary_node(t))
                    if not stack:
                        ternary_depth += 1
                elif t.text == ":" and not stack:
                    self.advance()
                    if ternary_depth:
                        ternary_depth -= 1
                        continue
                    return
            self.advance()

    def _parse_assignment_or_other(self) -> AstNode:
        start_tok = self.cur
        sink: list[AstNode] = []
        while True:
            t = self.cur
            if t.kind is TokKind.IDENT:
                self.advance()
            elif t.is_op(".") or t.is_op("::"):
                self.advance()
            elif t.is_op("[") or t.is_op("{"):
                self._consume_balanced(sink)
            else:
                break
        t = self.cur
        if t.is_op("="):
            self.advance()
            self._consume_to_semi(sink)
            return self._node(NodeKind.BLOCKING_ASSIGNMENT, start_tok.start, sink)
        if t.is_op("<="):
            self.advance()
            self._consume_to_semi(sink)
            return self._node(NodeKind.NON_BLOCKING_ASSIGNMENT, start_tok.start, sink)
        if t.kind is TokKind.OP and t.text in _OP_ASSIGN:
            self.advance()
            self._consume_to_semi(sink)
            return self._node(NodeKind.BLOCKING_ASSIGNMENT, start_tok.start, sink)
        if t.is_op("++") or t.is_op("--"):
            self.advance()
            self._consume_to_semi(sink)
            return self._node(NodeKind.BLOCKING_ASSIGNMENT, start_tok.start, sink)
        # task/function call, event trigger, or anything else
        self._consume_to_semi(sink)
        return self._node(NodeKind.OTHER_STATEMENT, start_tok.start, sink)
