"""Branch guards: expression trees over vitals and operator answers.

Guards are evaluated in Kleene three-valued logic. A comparison against a
vital that has not been measured, or an answer that has not been given, is
Unknown rather than an error; Unknown surfaces to the operator as a pending
question or missing measurement instead of silently picking a branch.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

from rescueaid.groups import VitalKind

if TYPE_CHECKING:
    from rescueaid.treatment.model import DataContext

MAX_GUARD_DEPTH = 16

COMPARATORS = ("<=", ">=", "<", ">", "=")


class Truth(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @staticmethod
    def of(flag: bool) -> "Truth":
        return Truth.TRUE if flag else Truth.FALSE


def kleene_not(a: Truth) -> Truth:
    if a is Truth.UNKNOWN:
        return Truth.UNKNOWN
    return Truth.of(a is Truth.FALSE)


def kleene_and(values) -> Truth:
    values = list(values)
    if any(v is Truth.FALSE for v in values):
        return Truth.FALSE
    if any(v is Truth.UNKNOWN for v in values):
        return Truth.UNKNOWN
    return Truth.TRUE


def kleene_or(values) -> Truth:
    values = list(values)
    if any(v is Truth.TRUE for v in values):
        return Truth.TRUE
    if any(v is Truth.UNKNOWN for v in values):
        return Truth.UNKNOWN
    return Truth.FALSE


@dataclass(frozen=True)
class TrueLiteral:
    pass


@dataclass(frozen=True)
class VitalComparison:
    kind: VitalKind
    op: str
    threshold: float

    def __post_init__(self) -> None:
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")


@dataclass(frozen=True)
class AnswerEquals:
    question_id: str
    value: str


@dataclass(frozen=True)
class NotOp:
    operand: "GuardExpr"


@dataclass(frozen=True)
class BoolOp:
    op: str  # "and" | "or"
    operands: tuple["GuardExpr", ...]

    def __post_init__(self) -> None:
        if self.op not in ("and", "or") or len(self.operands) < 2:
            raise ValueError("boolean guard needs 'and'/'or' with two or more operands")


GuardExpr = Union[TrueLiteral, VitalComparison, AnswerEquals, NotOp, BoolOp]


def guard_depth(expr: GuardExpr) -> int:
    if isinstance(expr, NotOp):
        return 1 + guard_depth(expr.operand)
    if isinstance(expr, BoolOp):
        return 1 + max(guard_depth(e) for e in expr.operands)
    return 1


class GuardDepthError(ValueError):
    """Expression tree exceeds the depth bound."""


def _compare(value: float, op: str, threshold: float) -> bool:
    if op == "<":
        return value < threshold
    if op == "<=":
        return value <= threshold
    if op == ">":
        return value > threshold
    if op == ">=":
        return value >= threshold
    return value == threshold


def eval_guard(expr: GuardExpr, ctx: "DataContext") -> Truth:
    """Three-valued evaluation; missing data propagates per Kleene tables."""
    if isinstance(expr, TrueLiteral):
        return Truth.TRUE
    if isinstance(expr, VitalComparison):
        value = ctx.vital(expr.kind)
        if value is None:
            return Truth.UNKNOWN
        return Truth.of(_compare(value, expr.op, expr.threshold))
    if isinstance(expr, AnswerEquals):
        answer = ctx.answer(expr.question_id)
        if answer is None:
            return Truth.UNKNOWN
        return Truth.of(str(answer) == expr.value)
    if isinstance(expr, NotOp):
        return kleene_not(eval_guard(expr.operand, ctx))
    if isinstance(expr, BoolOp):
        values = [eval_guard(e, ctx) for e in expr.operands]
        return kleene_and(values) if expr.op == "and" else kleene_or(values)
    raise TypeError(f"not a guard expression: {expr!r}")


def unknown_needs(expr: GuardExpr, ctx: "DataContext") -> list[tuple[str, str]]:
    """The Unknown leaves of ``expr``: ("vital", kind) and ("question", id).

    Only leaves whose own data is missing are reported; a decided guard
    reports nothing.
    """
    if eval_guard(expr, ctx) is not Truth.UNKNOWN:
        return []
    needs: list[tuple[str, str]] = []

    def walk(node: GuardExpr) -> None:
        if isinstance(node, VitalComparison) and ctx.vital(node.kind) is None:
            item = ("vital", node.kind.value)
            if item not in needs:
                needs.append(item)
        elif isinstance(node, AnswerEquals) and ctx.answer(node.question_id) is None:
            item = ("question", node.question_id)
            if item not in needs:
                needs.append(item)
        elif isinstance(node, NotOp):
            walk(node.operand)
        elif isinstance(node, BoolOp):
            for operand in node.operands:
                walk(operand)

    walk(expr)
    return needs


def guard_to_text(expr: GuardExpr) -> str:
    """Canonical text form; ``parse_guard(guard_to_text(e))`` equals ``e``."""
    if isinstance(expr, TrueLiteral):
        return "true"
    if isinstance(expr, VitalComparison):
        threshold = int(expr.threshold) if expr.threshold == int(expr.threshold) else expr.threshold
        return f"{expr.kind.value} {expr.op} {threshold}"
    if isinstance(expr, AnswerEquals):
        return f'answer({expr.question_id}) = "{expr.value}"'
    if isinstance(expr, NotOp):
        return f"not ({guard_to_text(expr.operand)})"
    if isinstance(expr, BoolOp):
        return f" {expr.op} ".join(f"({guard_to_text(e)})" for e in expr.operands)
    raise TypeError(f"not a guard expression: {expr!r}")


class GuardSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<lparen>\()|(?P<rparen>\))|(?P<op><=|>=|<|>|=)"
    r'|(?P<number>-?\d+(?:\.\d+)?)|(?P<string>"[^"]*")|(?P<word>[A-Za-z_][A-Za-z0-9_]*))'
)


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            remainder = text[pos:].lstrip()
            if not remainder:
                break
            raise GuardSyntaxError(f"unexpected character {remainder[0]!r}", pos + 1)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return tokens


class _Parser:
    """Recursive descent over: or > and > not > atom."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index] if self.index < len(self.tokens) else (None, None, len(self.text) + 1)

    def take(self):
        token = self.peek()
        self.index += 1
        return token

    def expect(self, kind: str, value: str = None):
        got_kind, got_value, column = self.take()
        if got_kind != kind or (value is not None and got_value != value):
            want = value or kind
            raise GuardSyntaxError(f"expected {want!r}, found {got_value!r}", column)
        return got_value, column

    def parse(self) -> GuardExpr:
        expr = self.parse_or()
        kind, value, column = self.peek()
        if kind is not None:
            raise GuardSyntaxError(f"trailing input {value!r}", column)
        if guard_depth(expr) > MAX_GUARD_DEPTH:
            raise GuardSyntaxError(f"guard deeper than {MAX_GUARD_DEPTH} levels", 1)
        return expr

    def parse_or(self) -> GuardExpr:
        operands = [self.parse_and()]
        while self.peek()[:2] == ("word", "or"):
            self.take()
            operands.append(self.parse_and())
        return operands[0] if len(operands) == 1 else BoolOp("or", tuple(operands))

    def parse_and(self) -> GuardExpr:
        operands = [self.parse_unary()]
        while self.peek()[:2] == ("word", "and"):
            self.take()
            operands.append(self.parse_unary())
        return operands[0] if len(operands) == 1 else BoolOp("and", tuple(operands))

    def parse_unary(self) -> GuardExpr:
        kind, value, column = self.peek()
        if (kind, value) == ("word", "not"):
            self.take()
            return NotOp(self.parse_unary())
        if kind == "lparen":
            self.take()
            expr = self.parse_or()
            self.expect("rparen")
            return expr
        return self.parse_atom()

    def parse_atom(self) -> GuardExpr:
        kind, value, column = self.take()
        if kind != "word":
            raise GuardSyntaxError(f"expected a guard term, found {value!r}", column)
        if value == "true":
            return TrueLiteral()
        if value == "answer":
            self.expect("lparen")
            question, _ = self.expect("word")
            self.expect("rparen")
            self.expect("op", "=")
            value_kind, raw, value_column = self.take()
            if value_kind == "string":
                return AnswerEquals(question, raw[1:-1])
            if value_kind in ("word", "number"):
                return AnswerEquals(question, raw)
            raise GuardSyntaxError("expected an answer value", value_column)
        try:
            vital = VitalKind(value)
        except ValueError:
            raise GuardSyntaxError(f"unknown vital kind {value!r}", column) from None
        op, _ = self.expect("op")
        number_kind, number_value, number_column = self.take()
        if number_kind != "number":
            raise GuardSyntaxError("expected a numeric threshold", number_column)
        return VitalComparison(vital, op, float(number_value))


def parse_guard(text: str) -> GuardExpr:
    """Parse guard text; raises :class:`GuardSyntaxError` with a column."""
    parser = _Parser(text)
    if not parser.tokens:
        raise GuardSyntaxError("empty guard expression", 1)
    return parser.parse()
