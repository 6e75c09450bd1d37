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
from .compare import differing_clauses, exact_match, first_difference
from .evaluate import EvalReport, LevelScore, Mismatch, evaluate, format_report, load_predictions, report_to_dict
from .hardness import Hardness, hardness
from .parser import parse_sql
from .unparse import to_sql

__all__ = [
    "VALUE",
    "Agg",
    "ArithOp",
    "CmpOp",
    "ColUnit",
    "Condition",
    "ConditionList",
    "EvalReport",
    "FromClause",
    "Hardness",
    "LevelScore",
    "Mismatch",
    "OrderBy",
    "SelectItem",
    "SqlStruct",
    "TableRef",
    "ValUnit",
    "differing_clauses",
    "evaluate",
    "exact_match",
    "first_difference",
    "format_report",
    "hardness",
    "load_predictions",
    "parse_sql",
    "report_to_dict",
    "to_sql",
]
