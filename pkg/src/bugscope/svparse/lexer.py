"""Tokenizer for the SystemVerilog subset.

Comments and whitespace are consumed without producing tokens. Compiler
directives (`define, `ifdef, ...) are blanked out by :func:`strip_directives`
before lexing; the blanking is character-for-character so token offsets stay
valid against the original file content.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import accumulate


class LexError(Exception):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class TokKind(Enum):
    IDENT = "ident"
    KEYWORD = "keyword"
    NUMBER = "number"
    STRING = "string"
    OP = "op"
    MACRO = "macro"  # `name usage surviving directive stripping
    SYSID = "sysid"  # $display and friends
    EOF = "eof"


@dataclass
class Token:
    kind: TokKind
    text: str
    start: int  # byte offset
    end: int

    def is_kw(self, *names: str) -> bool:
        return self.kind is TokKind.KEYWORD and self.text in names

    def is_op(self, *ops: str) -> bool:
        return self.kind is TokKind.OP and self.text in ops


KEYWORDS = frozenset("""
    module macromodule endmodule begin end always always_ff always_comb
    always_latch initial final assign if else case casez casex randcase
    endcase default for while do repeat forever foreach generate endgenerate
    genvar function endfunction task endtask typedef enum struct union packed
    parameter localparam specparam defparam input output inout ref wire reg
    logic bit byte shortint int longint integer time real realtime shortreal
    string chandle event var static automatic const signed unsigned supply0
    supply1 tri triand trior tri0 tri1 wand wor uwire interface endinterface
    modport package endpackage import export class endclass extends
    implements virtual property endproperty sequence endsequence assert
    assume cover restrict expect covergroup endgroup coverpoint bins clocking
    endclocking specify endspecify primitive endprimitive checker endchecker
    program endprogram config endconfig fork join join_any join_none disable
    wait wait_order return break continue unique unique0 priority inside dist
    with void null this super new posedge negedge edge iff alias bind force
    release deassign timeunit timeprecision cell liblist use design instance
""".split())

# Directive names whose whole line (plus `define continuations) is blanked.
DIRECTIVES = frozenset("""
    define undef undefineall ifdef ifndef elsif else endif include timescale
    resetall celldefine endcelldefine default_nettype unconnected_drive
    nounconnected_drive pragma line begin_keywords end_keywords
""".split())

# Multi-character operators, longest first for maximal munch.
_OPS_MULTI = [
    "<<<=", ">>>=",
    "===", "!==", "==?", "!=?", "<<=", ">>=", "<<<", ">>>", "&&&", "|->", "|=>",
    "==", "!=", "<=", ">=", "&&", "||", "<<", ">>", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "++", "--", "**", "::", "+:", "-:", "->", "=>",
    ".*", "~&", "~|", "~^", "^~", "##",
]
_OPS_SINGLE = set("+-*/%&|^~!<>=?:;,.()[]{}@#$")

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CHARS = _IDENT_START | frozenset("0123456789$")
_BASE_CHARS = frozenset("bBoOdDhH")
_BASED_DIGITS = frozenset("0123456789abcdefABCDEF_xXzZ?")


def strip_directives(text: str) -> tuple[str, bool]:
    """Blank compiler-directive lines, preserving every offset.

    For `ifdef/`ifndef/`elsif/`else/`endif only the directive line itself is
    removed; guarded text from every branch stays in place. `define bodies
    (including backslash continuations) are blanked entirely. Macro *usages*
    such as `MY_MACRO(...) are not directives and are left for the lexer.
    """
    lines = text.split("\n")
    changed = False
    in_define = False
    for i, line in enumerate(lines):
        blank = False
        if in_define:
            blank = True
            in_define = line.rstrip().endswith("\\")
        else:
            stripped = line.lstrip()
            if stripped.startswith("`"):
                word = ""
                for ch in stripped[1:]:
                    if ch in _IDENT_CHARS:
                        word += ch
                    else:
                        break
                if word in DIRECTIVES:
                    blank = True
                    if word == "define":
                        in_define = line.rstrip().endswith("\\")
        if blank:
            lines[i] = " " * len(line)
            changed = True
    return "\n".join(lines), changed


def _byte_offsets(text: str) -> list[int] | None:
    """Cumulative UTF-8 byte offset per character index, or None if ASCII."""
    if text.isascii():
        return None
    return [0] + list(accumulate(len(ch.encode("utf-8")) for ch in text))


def lex(text: str, offset_text: str | None = None) -> list[Token]:
    """Tokenize `text`; byte offsets are computed against `offset_text`
    (the un-stripped original) when given. Both must have equal length."""
    offsets = _byte_offsets(offset_text if offset_text is not None else text)

    def byte(pos: int) -> int:
        return pos if offsets is None else offsets[pos]

    tokens: list[Token] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f\v":
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            if text[i + 1] == "/":
                j = text.find("\n", i)
                i = n if j < 0 else j + 1
                continue
            if text[i + 1] == "*":
                j = text.find("*/", i + 2)
                if j < 0:
                    raise LexError("unterminated block comment", byte(i))
                i = j + 2
                continue
        start = i
        if ch == '"':
            i += 1
            while i < n:
                if text[i] == "\\" and i + 1 < n:
                    i += 2
                    continue
                if text[i] == '"':
                    break
                if text[i] == "\n":
                    raise LexError("unterminated string literal", byte(start))
                i += 1
            else:
                raise LexError("unterminated string literal", byte(start))
            i += 1
            tokens.append(Token(TokKind.STRING, text[start:i], byte(start), byte(i)))
            continue
        if ch in _IDENT_START:
            i += 1
            while i < n and text[i] in _IDENT_CHARS:
                i += 1
            word = text[start:i]
            kind = TokKind.KEYWORD if word in KEYWORDS else TokKind.IDENT
            tokens.append(Token(kind, word, byte(start), byte(i)))
            continue
        if ch == "\\":  # escaped identifier: up to whitespace
            i += 1
            while i < n and not text[i].isspace():
                i += 1
            if i == start + 1:
                raise LexError("stray backslash", byte(start))
            tokens.append(Token(TokKind.IDENT, text[start:i], byte(start), byte(i)))
            continue
        if ch == "$" and i + 1 < n and text[i + 1] in _IDENT_START:
            i += 2
            while i < n and text[i] in _IDENT_CHARS:
                i += 1
            tokens.append(Token(TokKind.SYSID, text[start:i], byte(start), byte(i)))
            continue
        if ch == "`":
            if i + 1 < n and text[i + 1] in _IDENT_START:
                i += 2
                while i < n and text[i] in _IDENT_CHARS:
                    i += 1
                tokens.append(Token(TokKind.MACRO, text[start:i], byte(start), byte(i)))
                continue
            raise LexError("stray backtick", byte(i))
        if ch.isdigit():
            i += 1
            while i < n and (text[i].isdigit() or text[i] == "_"):
                i += 1
            if i < n and text[i] == "." and i + 1 < n and text[i + 1].isdigit():
                i += 1
                while i < n and (text[i].isdigit() or text[i] == "_"):
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    i = j + 1
                    while i < n and text[i].isdigit():
                        i += 1
            if i < n and text[i] == "'":
                # sized based literal: the size prefix joins the value token
                j = i + 1
                if j < n and text[j] in "sS":
                    j += 1
                if j < n and text[j] in _BASE_CHARS and j + 1 < n and text[j + 1] in _BASED_DIGITS:
                    i = j + 1
                    while i < n and text[i] in _BASED_DIGITS:
                        i += 1
            tokens.append(Token(TokKind.NUMBER, text[start:i], byte(start), byte(i)))
            continue
        if ch == "'":
            j = i + 1
            if j < n and text[j] in "sS":
                j += 1
            if j < n and text[j] in _BASE_CHARS and j + 1 < n and text[j + 1] in _BASED_DIGITS:
                i = j + 1
                while i < n and text[i] in _BASED_DIGITS:
                    i += 1
                tokens.append(Token(TokKind.NUMBER, text[start:i], byte(start), byte(i)))
                continue
            if (
                j == i + 1
                and j < n
                and text[j] in "01xXzZ"
                and (j + 1 >= n or text[j + 1] not in _IDENT_CHARS)
            ):
                i = j + 1
                tokens.append(Token(TokKind.NUMBER, text[start:i], byte(start), byte(i)))
                continue
            i += 1
            tokens.append(Token(TokKind.OP, "'", byte(start), byte(i)))
            continue
        matched = None
        for op in _OPS_MULTI:
            if text.startswith(op, i):
                matched = op
                break
        if matched is None and ch in _OPS_SINGLE:
            matched = ch
        if matched is None:
            raise LexError(f"illegal character {ch!r}", byte(i))
        i += len(matched)
        tokens.append(Token(TokKind.OP, matched, byte(start), byte(i)))
    tokens.append(Token(TokKind.EOF, "", byte(n), byte(n)))
    return tokens
