"""Clause-decomposed SQL structures used for exact-match comparison.

Everything here is frozen and hashable so clauses can be compared as
multisets. Literal values are collapsed to the single `VALUE` placeholder at
parse time; only nested sub-queries survive as structured operands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Union


class Agg(Enum):
    NONE = "none"
    MAX = "max"
    MIN = "min"
    COUNT = "count"
    SUM = "sum"
    AVG = "avg"


class ArithOp(Enum):
    NONE = "none"
    MINUS = "-"
    PLUS = "+"
    TIMES = "*"
    DIVIDE = "/"


class CmpOp(Enum):
    BETWEEN = "between"
    EQ = "="
    GT = ">"
    LT = "<"
    GE = ">="
    LE = "<="
    NE = "!="
    IN = "in"
    LIKE = "like"
    IS = "is"


@dataclass(frozen=True)
class _ValuePlaceholder:
    def __repr__(self) -> str:
        return "VALUE"


VALUE = _ValuePlaceholder()


@dataclass(frozen=True)
class ColUnit:
    agg: Agg
    col_id: int
    distinct: bool = False


@dataclass(frozen=True)
class ValUnit:
    op: ArithOp
    left: ColUnit
    right: ColUnit | None = None


@dataclass(frozen=True)
class SelectItem:
    agg: Agg
    val: ValUnit


Operand = Union[_ValuePlaceholder, ColUnit, "SqlStruct"]


@dataclass(frozen=True)
class Condition:
    negated: bool
    op: CmpOp
    lhs: ValUnit
    rhs: Operand
    rhs2: Operand | None = None  # second bound of BETWEEN


@dataclass(frozen=True)
class ConditionList:
    atoms: tuple[Condition, ...] = ()
    connectives: tuple[str, ...] = ()  # 'and' / 'or'; one fewer than atoms

    def __bool__(self) -> bool:
        return bool(self.atoms)


@dataclass(frozen=True)
class TableRef:
    table_id: int


@dataclass(frozen=True)
class FromClause:
    sources: tuple[Union[TableRef, "SqlStruct"], ...]
    conds: ConditionList = field(default_factory=ConditionList)


@dataclass(frozen=True)
class OrderBy:
    direction: str  # 'asc' | 'desc'
    items: tuple[ValUnit, ...]


@dataclass(frozen=True)
class SqlStruct:
    select_distinct: bool
    select: tuple[SelectItem, ...]
    from_: FromClause
    where: ConditionList = field(default_factory=ConditionList)
    group_by: tuple[ColUnit, ...] = ()
    having: ConditionList = field(default_factory=ConditionList)
    order_by: OrderBy | None = None
    limit: bool = False
    intersect: SqlStruct | None = None
    union: SqlStruct | None = None
    except_: SqlStruct | None = None


def condition_subqueries(conds: ConditionList) -> list[SqlStruct]:
    """Sub-queries appearing as condition operands."""
    out = []
    for atom in conds.atoms:
        for operand in (atom.rhs, atom.rhs2):
            if isinstance(operand, SqlStruct):
                out.append(operand)
    return out
