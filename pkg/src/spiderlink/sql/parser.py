"""Recursive-descent parser for the Spider SQL subset.

Covers single SELECT statements with aggregators count/sum/avg/min/max,
joins, where/group/having/order/limit, value sub-queries, and one
intersect/union/except per level. Aliases are resolved to schema identities
and literals are collapsed to the uniform value placeholder, so two parses
differ only where the queries differ structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..data import ALL_COLUMNS, Schema
from ..errors import SqlParseError, SqlResolutionError
from .ast import (
    VALUE,
    Agg,
    ArithOp,
    CmpOp,
    ColUnit,
    Condition,
    ConditionList,
    FromClause,
    OrderBy,
    SelectItem,
    SqlStruct,
    TableRef,
    ValUnit,
)

_LEX = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<str>'[^']*'|"[^"]*")
    | (?P<num>\d+\.\d+|\.\d+|\d+)
    | (?P<id>[A-Za-z_][A-Za-z_0-9]*(?:\.(?:[A-Za-z_][A-Za-z_0-9]*|\*))?)
    | (?P<op><>|!=|>=|<=|[=<>(),;*+\-/])
    """,
    re.VERBOSE,
)

_AGGS = {a.value: a for a in Agg if a is not Agg.NONE}
_ARITH = {a.value: a for a in ArithOp if a is not ArithOp.NONE}
_CMPS = {
    "between": CmpOp.BETWEEN,
    "=": CmpOp.EQ,
    ">": CmpOp.GT,
    "<": CmpOp.LT,
    ">=": CmpOp.GE,
    "<=": CmpOp.LE,
    "!=": CmpOp.NE,
    "<>": CmpOp.NE,
    "in": CmpOp.IN,
    "like": CmpOp.LIKE,
    "is": CmpOp.IS,
}
_CLAUSE_STARTS = frozenset({"where", "group", "having", "order", "limit"})
_SET_OPS = frozenset({"intersect", "union", "except"})
_LITERAL_WORDS = frozenset({"null", "true", "false"})


@dataclass(frozen=True)
class _Token:
    text: str  # lowercased except string literals
    pos: int
    is_string: bool = False


def _lex(query: str) -> list[_Token]:
    tokens = []
    pos = 0
    n = len(query)
    while pos < n:
        m = _LEX.match(query, pos)
        if m is None:
            raise SqlParseError(f"unexpected character {query[pos]!r}", pos)
        if m.lastgroup != "ws":
            text = m.group()
            if m.lastgroup == "str":
                tokens.append(_Token(text, pos, is_string=True))
            else:
                tokens.append(_Token(text.lower(), pos))
        pos = m.end()
    return tokens


class _SchemaIndex:
    def __init__(self, schema: Schema):
        self.schema = schema
        self.table_ids = {t.name_original.casefold(): i for i, t in enumerate(schema.tables)}
        self.column_ids: dict[tuple[int, str], int] = {}
        for i, col in enumerate(schema.columns):
            if col.table_index >= 0:
                self.column_ids[(col.table_index, col.name_original.casefold())] = i


@dataclass
class _Scope:
    aliases: dict[str, int] = field(default_factory=dict)
    defaults: list[int] = field(default_factory=list)
    parent: _Scope | None = None

    def resolve_alias(self, name: str) -> int | None:
        scope: _Scope | None = self
        while scope is not None:
            if name in scope.aliases:
                return scope.aliases[name]
            scope = scope.parent
        return None


class _Parser:
    def __init__(self, tokens: list[_Token], index: _SchemaIndex):
        self.toks = tokens
        self.index = index
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, offset: int = 0) -> _Token | None:
        i = self.pos + offset
        return self.toks[i] if i < len(self.toks) else None

    def at(self, *texts: str) -> bool:
        tok = self.peek()
        return tok is not None and not tok.is_string and tok.text in texts

    def advance(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise SqlParseError("unexpected end of query")
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok is None:
            raise SqlParseError(f"expected {text!r}, got end of query")
        if tok.is_string or tok.text != text:
            raise SqlParseError(f"expected {text!r}, got {tok.text!r}", tok.pos)
        return self.advance()

    def error(self, message: str) -> SqlParseError:
        tok = self.peek()
        return SqlParseError(message, tok.pos if tok else None)

    # -- name resolution ----------------------------------------------------

    def resolve_table(self, name: str, pos: int) -> int:
        tid = self.index.table_ids.get(name)
        if tid is None:
            raise SqlResolutionError(f"unknown table {name!r}", pos)
        return tid

    def resolve_column(self, tok: _Token, scope: _Scope) -> int:
        name = tok.text
        if name == "*":
            return ALL_COLUMNS
        if "." in name:
            qualifier, col = name.split(".", 1)
            tid = scope.resolve_alias(qualifier)
            if tid is None and qualifier in self.index.table_ids:
                tid = self.index.table_ids[qualifier]
            if tid is None:
                raise SqlResolutionError(f"unknown table or alias {qualifier!r}", tok.pos)
            if col == "*":
                return ALL_COLUMNS
            col_id = self.index.column_ids.get((tid, col))
            if col_id is None:
                table = self.index.schema.tables[tid].name_original
                raise SqlResolutionError(f"no column {col!r} in table {table!r}", tok.pos)
            return col_id
        for tid in scope.defaults:
            col_id = self.index.column_ids.get((tid, name))
            if col_id is not None:
                return col_id
        raise SqlResolutionError(f"column {name!r} not found in the FROM tables", tok.pos)

    # -- grammar ------------------------------------------------------------

    def parse_query(self, parent: _Scope | None) -> SqlStruct:
        wrapped = False
        if self.at("(") and self._next_is_select():
            self.advance()
            wrapped = True
        stmt = self.parse_statement(parent)
        if wrapped:
            self.expect(")")
        return stmt

    def _next_is_select(self) -> bool:
        tok = self.peek(1)
        return tok is not None and not tok.is_string and tok.text == "select"

    def parse_statement(self, parent: _Scope | None) -> SqlStruct:
        select_tok = self.peek()
        if not self.at("select"):
            raise self.error("expected SELECT")

        from_idx = self._find_from(self.pos)
        if from_idx is None:
            raise SqlParseError("missing FROM clause", select_tok.pos if select_tok else None)

        select_end = self.pos
        self.pos = from_idx
        scope = _Scope(parent=parent)
        from_clause = self.parse_from(scope)
        after_from = self.pos

        self.pos = select_end
        distinct, items = self.parse_select(scope, from_idx)
        self.pos = after_from

        where = ConditionList()
        group_by: tuple[ColUnit, ...] = ()
        having = ConditionList()
        order_by = None
        limit = False
        if self.at("where"):
            self.advance()
            where = self.parse_condition(scope)
        if self.at("group"):
            self.advance()
            self.expect("by")
            group_by = self.parse_group_by(scope)
            if self.at("having"):
                self.advance()
                having = self.parse_condition(scope)
        if self.at("order"):
            self.advance()
            self.expect("by")
            order_by = self.parse_order_by(scope)
        if self.at("limit"):
            self.advance()
            tok = self.advance()
            if tok.is_string or not re.fullmatch(r"\d+(\.\d+)?", tok.text):
                raise SqlParseError(f"expected a number after LIMIT, got {tok.text!r}", tok.pos)
            limit = True

        intersect = union = except_ = None
        if self.at(*_SET_OPS):
            op = self.advance().text
            branch = self.parse_query(parent)
            if op == "intersect":
                intersect = branch
            elif op == "union":
                union = branch
            else:
                except_ = branch

        return SqlStruct(
            select_distinct=distinct,
            select=items,
            from_=from_clause,
            where=where,
            group_by=group_by,
            having=having,
            order_by=order_by,
            limit=limit,
            intersect=intersect,
            union=union,
            except_=except_,
        )

    def _find_from(self, start: int) -> int | None:
        depth = 0
        for i in range(start, len(self.toks)):
            tok = self.toks[i]
            if tok.is_string:
                continue
            if tok.text == "(":
                depth += 1
            elif tok.text == ")":
                if depth == 0:
                    return None
                depth -= 1
            elif depth == 0:
                if tok.text == "from":
                    return i
                if tok.text in _SET_OPS or tok.text == ";":
                    return None
        return None

    def parse_select(self, scope: _Scope, end: int) -> tuple[bool, tuple[SelectItem, ...]]:
        self.expect("select")
        distinct = False
        if self.at("distinct"):
            self.advance()
            distinct = True
        items = []
        while self.pos < end:
            items.append(self.parse_select_item(scope))
            if self.pos < end:
                if not self.at(","):
                    raise self.error("expected ',' between select items")
                self.advance()
        if not items:
            raise self.error("empty select list")
        return distinct, tuple(items)

    def parse_select_item(self, scope: _Scope) -> SelectItem:
        # "agg(x)" alone carries the aggregator at item level; inside
        # arithmetic like "max(a) - min(b)" it stays on the column unit.
        if self.at(*_AGGS):
            save = self.pos
            agg = _AGGS[self.advance().text]
            self.expect("(")
            val = self.parse_val_unit(scope)
            self.expect(")")
            if self.at(*_ARITH):
                self.pos = save
                return SelectItem(Agg.NONE, self.parse_val_unit(scope))
            return SelectItem(agg, val)
        return SelectItem(Agg.NONE, self.parse_val_unit(scope))

    def parse_from(self, scope: _Scope) -> FromClause:
        self.expect("from")
        sources: list[TableRef | SqlStruct] = []
        atoms: list[Condition] = []
        connectives: list[str] = []
        while True:
            if self.at("(") and self._next_is_select():
                sub = self.parse_query(scope.parent)
                if self.at("as"):
                    self.advance()
                    self.advance()  # sub-query alias: consumed, not resolvable
                sources.append(sub)
            else:
                tok = self.advance()
                if tok.is_string:
                    raise SqlParseError(f"expected a table name, got {tok.text}", tok.pos)
                tid = self.resolve_table(tok.text, tok.pos)
                scope.aliases.setdefault(tok.text, tid)
                if self.at("as"):
                    self.advance()
                    alias = self.advance()
                    scope.aliases[alias.text] = tid
                scope.defaults.append(tid)
                sources.append(TableRef(tid))
            if self.at("on"):
                self.advance()
                conds = self.parse_condition(scope)
                if atoms:
                    connectives.append("and")
                atoms.extend(conds.atoms)
                connectives.extend(conds.connectives)
            if self.at(",", "join"):
                self.advance()
                continue
            break
        return FromClause(tuple(sources), ConditionList(tuple(atoms), tuple(connectives)))

    def parse_condition(self, scope: _Scope) -> ConditionList:
        atoms = [self.parse_condition_atom(scope)]
        connectives = []
        while self.at("and", "or"):
            connectives.append(self.advance().text)
            atoms.append(self.parse_condition_atom(scope))
        return ConditionList(tuple(atoms), tuple(connectives))

    def parse_condition_atom(self, scope: _Scope) -> Condition:
        lhs = self.parse_val_unit(scope)
        negated = False
        if self.at("not"):
            self.advance()
            negated = True
        tok = self.peek()
        if tok is None or tok.is_string or tok.text not in _CMPS:
            raise self.error("expected a comparison operator")
        op = _CMPS[self.advance().text]
        if negated and op not in (CmpOp.IN, CmpOp.LIKE, CmpOp.BETWEEN):
            raise SqlParseError(f"NOT cannot precede {op.value!r}", tok.pos)
        if op is CmpOp.BETWEEN:
            rhs = self.parse_value(scope)
            self.expect("and")
            rhs2 = self.parse_value(scope)
            return Condition(negated, op, lhs, rhs, rhs2)
        if op is CmpOp.IS:
            if self.at("not"):
                self.advance()
                negated = True
            rhs = self.parse_value(scope)
            return Condition(negated, op, lhs, rhs)
        return Condition(negated, op, lhs, self.parse_value(scope))

    def parse_value(self, scope: _Scope):
        tok = self.peek()
        if tok is None:
            raise SqlParseError("expected a value, got end of query")
        if self.at("("):
            if self._next_is_select():
                sub = self.parse_query(scope)
                return sub
            self.advance()
            first = self.parse_value(scope)
            is_list = False
            while self.at(","):
                is_list = True
                self.advance()
                self.parse_value(scope)
            self.expect(")")
            return VALUE if is_list else first
        if tok.is_string or re.fullmatch(r"\d+(\.\d+)?|\.\d+", tok.text):
            self.advance()
            return VALUE
        if tok.text in _LITERAL_WORDS:
            self.advance()
            return VALUE
        if tok.text in ("-", "+"):
            nxt = self.peek(1)
            if nxt is not None and not nxt.is_string and re.fullmatch(r"\d+(\.\d+)?", nxt.text):
                self.advance()
                self.advance()
                return VALUE
        return self.parse_col_unit(scope)

    def parse_col_unit(self, scope: _Scope) -> ColUnit:
        if self.at(*_AGGS):
            agg = _AGGS[self.advance().text]
            self.expect("(")
            distinct = False
            if self.at("distinct"):
                self.advance()
                distinct = True
            tok = self.advance()
            col = self.resolve_column(tok, scope)
            self.expect(")")
            return ColUnit(agg, col, distinct)
        distinct = False
        if self.at("distinct"):
            self.advance()
            distinct = True
        tok = self.advance()
        if tok.is_string:
            raise SqlParseError(f"expected a column, got {tok.text}", tok.pos)
        return ColUnit(Agg.NONE, self.resolve_column(tok, scope), distinct)

    def parse_val_unit(self, scope: _Scope) -> ValUnit:
        wrapped = False
        if self.at("(") and not self._next_is_select():
            self.advance()
            wrapped = True
        left = self.parse_col_unit(scope)
        op = ArithOp.NONE
        right = None
        if self.at(*_ARITH):
            op = _ARITH[self.advance().text]
            right = self.parse_col_unit(scope)
        if wrapped:
            self.expect(")")
        return ValUnit(op, left, right)

    def parse_group_by(self, scope: _Scope) -> tuple[ColUnit, ...]:
        cols = [self.parse_col_unit(scope)]
        while self.at(","):
            self.advance()
            cols.append(self.parse_col_unit(scope))
        return tuple(cols)

    def parse_order_by(self, scope: _Scope) -> OrderBy:
        items = []
        direction = "asc"
        while True:
            items.append(self.parse_val_unit(scope))
            if self.at("asc", "desc"):
                direction = self.advance().text
            if self.at(","):
                self.advance()
                continue
            break
        return OrderBy(direction, tuple(items))


def parse_sql(query: str, schema: Schema) -> SqlStruct:
    """Parse one statement of the Spider SQL subset against `schema`."""
    tokens = _lex(query)
    if not tokens:
        raise SqlParseError("empty query")
    parser = _Parser(tokens, _SchemaIndex(schema))
    struct = parser.parse_query(parent=None)
    if parser.at(";"):
        parser.advance()
    if parser.pos != len(tokens):
        tok = parser.peek()
        raise SqlParseError(f"unexpected trailing token {tok.text!r}", tok.pos)
    return struct
