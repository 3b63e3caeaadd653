"""SystemVerilog-subset parsing and construct counting."""

from .counting import CATEGORY_ORDER, NodeHistogram, category_map, count_nodes
from .lexer import LexError, Token, TokKind, lex, strip_directives
from .nodes import AstNode, AstTree, NodeKind, SourceFile
from .parser import UnbalancedDelimiters, parse_source

__all__ = [
    "AstNode",
    "AstTree",
    "CATEGORY_ORDER",
    "LexError",
    "NodeHistogram",
    "NodeKind",
    "SourceFile",
    "TokKind",
    "Token",
    "UnbalancedDelimiters",
    "category_map",
    "count_nodes",
    "lex",
    "parse_source",
    "strip_directives",
]
