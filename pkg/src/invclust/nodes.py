"""Syntax tree node definitions for the supported C subset."""

from dataclasses import dataclass, field


class Kind:
    TRANSLATION_UNIT = "translation-unit"
    FUNCTION_DEF = "function-def"
    PARAM = "param"
    DECL = "decl"
    ASSIGN = "assign"
    BINARY_OP = "binary-op"
    UNARY_OP = "unary-op"
    IF = "if"
    WHILE = "while"
    FOR = "for"
    BLOCK = "block"
    CALL = "call"
    RETURN = "return"
    SCANF = "scanf"
    PRINTF = "printf"
    IDENT_REF = "identifier-ref"
    LITERAL = "literal"
    ARRAY_DECL = "array-decl"
    ARRAY_INDEX = "array-index"


ALL_KINDS = frozenset(
    v for k, v in vars(Kind).items() if not k.startswith("_")
)

# The only kinds that carry an identifier field.
IDENTIFIER_KINDS = frozenset(
    {
        Kind.DECL,
        Kind.PARAM,
        Kind.FUNCTION_DEF,
        Kind.IDENT_REF,
        Kind.ARRAY_DECL,
        Kind.CALL,
    }
)


@dataclass
class Node:
    """One tree node.

    The literal slot is overloaded by kind: the value for literal nodes,
    the operator for binary-op/unary-op, the format string for
    scanf/printf, and the element count for array-decl.
    """

    kind: str
    identifier: str | None = None
    type_name: str | None = None
    literal: object = None
    children: list = field(default_factory=list)
    line: int = 0
    col: int = 0

    def to_dict(self):
        d = {"kind": self.kind}
        if self.identifier is not None:
            d["identifier"] = self.identifier
        if self.type_name is not None:
            d["type_name"] = self.type_name
        if self.literal is not None:
            d["literal"] = self.literal
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d


def structurally_equal(a, b):
    """Positional equality ignoring source locations."""
    if a.kind != b.kind or a.identifier != b.identifier or a.type_name != b.type_name:
        return False
    if type(a.literal) is not type(b.literal) or a.literal != b.literal:
        return False
    if len(a.children) != len(b.children):
        return False
    return all(structurally_equal(x, y) for x, y in zip(a.children, b.children))


def copy_tree(node):
    return Node(
        kind=node.kind,
        identifier=node.identifier,
        type_name=node.type_name,
        literal=node.literal,
        children=[copy_tree(c) for c in node.children],
        line=node.line,
        col=node.col,
    )


def count_nodes(node):
    return 1 + sum(count_nodes(c) for c in node.children)


def walk(node):
    yield node
    for c in node.children:
        yield from walk(c)


@dataclass
class SyntaxTree:
    root: Node

    def structurally_equals(self, other):
        return structurally_equal(self.root, other.root)


@dataclass
class SourceProgram:
    id: str
    label: str
    text: str
