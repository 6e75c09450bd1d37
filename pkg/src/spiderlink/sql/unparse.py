"""Render a parsed structure back to SQL text.

The output is canonical (qualified column names, no aliases, literal
placeholders rendered as dummy values) and re-parses to an equal structure.
"""

from ..data import Schema
from .ast import (
    VALUE,
    Agg,
    ArithOp,
    CmpOp,
    ColUnit,
    Condition,
    ConditionList,
    OrderBy,
    SqlStruct,
    TableRef,
    ValUnit,
)


def _col_name(col_id: int, schema: Schema) -> str:
    return schema.column_label(col_id)


def _col_unit(unit: ColUnit, schema: Schema) -> str:
    name = _col_name(unit.col_id, schema)
    if unit.distinct:
        name = f"DISTINCT {name}"
    if unit.agg is not Agg.NONE:
        return f"{unit.agg.value.upper()}({name})"
    return name


def _val_unit(val: ValUnit, schema: Schema) -> str:
    left = _col_unit(val.left, schema)
    if val.op is ArithOp.NONE:
        return left
    return f"{left} {val.op.value} {_col_unit(val.right, schema)}"


def _operand(operand, schema: Schema) -> str:
    if operand is VALUE:
        return "'value'"
    if isinstance(operand, SqlStruct):
        return f"({to_sql(operand, schema)})"
    if isinstance(operand, ColUnit):
        return _col_unit(operand, schema)
    raise TypeError(f"unexpected operand {operand!r}")


def _condition(atom: Condition, schema: Schema) -> str:
    lhs = _val_unit(atom.lhs, schema)
    if atom.op is CmpOp.BETWEEN:
        neg = "NOT " if atom.negated else ""
        return (
            f"{lhs} {neg}BETWEEN {_operand(atom.rhs, schema)}"
            f" AND {_operand(atom.rhs2, schema)}"
        )
    if atom.op is CmpOp.IS:
        return f"{lhs} IS {'NOT ' if atom.negated else ''}NULL"
    neg = "NOT " if atom.negated else ""
    return f"{lhs} {neg}{atom.op.value.upper()} {_operand(atom.rhs, schema)}"


def _condition_list(conds: ConditionList, schema: Schema) -> str:
    parts = [_condition(conds.atoms[0], schema)]
    for connective, atom in zip(conds.connectives, conds.atoms[1:]):
        parts.append(connective.upper())
        parts.append(_condition(atom, schema))
    return " ".join(parts)


def _select_item(item, schema: Schema) -> str:
    body = _val_unit(item.val, schema)
    if item.agg is not Agg.NONE:
        return f"{item.agg.value.upper()}({body})"
    return body


def _order_by(clause: OrderBy, schema: Schema) -> str:
    items = ", ".join(_val_unit(v, schema) for v in clause.items)
    return f"ORDER BY {items} {clause.direction.upper()}"


def to_sql(struct: SqlStruct, schema: Schema) -> str:
    parts = ["SELECT"]
    if struct.select_distinct:
        parts.append("DISTINCT")
    parts.append(", ".join(_select_item(i, schema) for i in struct.select))

    sources = []
    for source in struct.from_.sources:
        if isinstance(source, TableRef):
            sources.append(schema.tables[source.table_id].name_original)
        else:
            sources.append(f"({to_sql(source, schema)})")
    parts.append("FROM " + " JOIN ".join(sources))
    if struct.from_.conds:
        parts.append("ON " + _condition_list(struct.from_.conds, schema))

    if struct.where:
        parts.append("WHERE " + _condition_list(struct.where, schema))
    if struct.group_by:
        parts.append("GROUP BY " + ", ".join(_col_unit(c, schema) for c in struct.group_by))
    if struct.having:
        parts.append("HAVING " + _condition_list(struct.having, schema))
    if struct.order_by is not None:
        parts.append(_order_by(struct.order_by, schema))
    if struct.limit:
        parts.append("LIMIT 1")
    for keyword, branch in (
        ("INTERSECT", struct.intersect),
        ("UNION", struct.union),
        ("EXCEPT", struct.except_),
    ):
        if branch is not None:
            parts.append(f"{keyword} {to_sql(branch, schema)}")
    return " ".join(parts)
