"""AST node model for the supported SystemVerilog subset.

The tree only contains nodes for the construct kinds the analysis counts
(hierarchical members, statements, assignments, ternary operators).
Comments, whitespace, begin/end scaffolding and sensitivity lists never
produce nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator


class NodeKind(Enum):
    MODULE_DECLARATION = "ModuleDeclaration"
    HIERARCHY_INSTANTIATION = "HierarchyInstantiation"
    ALWAYS_FF_BLOCK = "AlwaysFfBlock"
    ALWAYS_COMB_BLOCK = "AlwaysCombBlock"
    ALWAYS_BLOCK = "AlwaysBlock"
    GENERATE_CONSTRUCT = "GenerateConstruct"
    CASE_STATEMENT = "CaseStatement"
    CONDITIONAL_STATEMENT = "ConditionalStatement"
    CONDITIONAL_EXPRESSION = "ConditionalExpression"
    BLOCKING_ASSIGNMENT = "BlockingAssignment"
    NON_BLOCKING_ASSIGNMENT = "NonBlockingAssignment"
    CONTINUOUS_ASSIGN = "ContinuousAssign"
    DATA_DECLARATION = "DataDeclaration"
    OTHER_MEMBER = "OtherMember"
    OTHER_STATEMENT = "OtherStatement"

    def __repr__(self) -> str:  # keep AST dumps readable
        return self.value


@dataclass
class SourceFile:
    """One design file, identified by repo-relative path and version tag."""

    path: str
    content: str
    version_tag: str = ""


@dataclass
class AstNode:
    kind: NodeKind
    children: list["AstNode"] = field(default_factory=list)
    span: tuple[int, int] = (0, 0)  # byte offsets into the source content

    def walk(self) -> Iterator["AstNode"]:
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class AstTree:
    members: list[AstNode]
    source: SourceFile
    directives_stripped: bool = False

    def walk(self) -> Iterator[AstNode]:
        for member in self.members:
            yield from member.walk()

    def dump(self) -> str:
        """Indented text rendering, one node per line."""
        lines: list[str] = []

        def emit(node: AstNode, depth: int) -> None:
            lines.append(f"{'  ' * depth}{node.kind.value} [{node.span[0]}:{node.span[1]}]")
            for child in node.children:
                emit(child, depth + 1)

        for member in self.members:
            emit(member, 0)
        return "\n".join(lines)
