"""Typed relations between question tokens, tables, and columns.

Naming follows the node-kind pair each relation connects (q = question
token, t = table, c = column). Every type has exactly one inverse and
inverse(inverse(r)) == r; symmetric types are their own inverse.
"""

from enum import IntEnum


class RelationType(IntEnum):
    # question - question
    QQ_SELF = 0
    QQ_ADJACENT_FORWARD = 1
    QQ_ADJACENT_BACKWARD = 2
    QQ_DISTANT = 3
    QQ_DEPENDENCY_FORWARD = 4  # optional, from a pre-computed edge list
    QQ_DEPENDENCY_BACKWARD = 5

    # question - table and inverses
    QT_EXACT_MATCH = 6
    QT_PARTIAL_MATCH = 7
    QT_COSINE_MATCH = 8
    QT_NO_MATCH = 9
    TQ_EXACT_MATCH = 10
    TQ_PARTIAL_MATCH = 11
    TQ_COSINE_MATCH = 12
    TQ_NO_MATCH = 13

    # question - column and inverses
    QC_EXACT_MATCH = 14
    QC_PARTIAL_MATCH = 15
    QC_COSINE_MATCH = 16
    QC_NO_MATCH = 17
    CQ_EXACT_MATCH = 18
    CQ_PARTIAL_MATCH = 19
    CQ_COSINE_MATCH = 20
    CQ_NO_MATCH = 21

    # table - column and inverses
    TC_HAS_COLUMN = 22
    TC_PRIMARY_KEY = 23
    TC_NONE = 24
    CT_BELONGS_TO = 25
    CT_PRIMARY_KEY_OF = 26
    CT_NONE = 27

    # column - column
    CC_SELF = 28
    CC_SAME_TABLE = 29
    CC_FOREIGN_KEY_FORWARD = 30
    CC_FOREIGN_KEY_BACKWARD = 31
    CC_NONE = 32

    # table - table
    TT_SELF = 33
    TT_FOREIGN_KEY_LINK = 34
    TT_NONE = 35


_R = RelationType

_INVERSE_PAIRS = [
    (_R.QQ_SELF, _R.QQ_SELF),
    (_R.QQ_ADJACENT_FORWARD, _R.QQ_ADJACENT_BACKWARD),
    (_R.QQ_DISTANT, _R.QQ_DISTANT),
    (_R.QQ_DEPENDENCY_FORWARD, _R.QQ_DEPENDENCY_BACKWARD),
    (_R.QT_EXACT_MATCH, _R.TQ_EXACT_MATCH),
    (_R.QT_PARTIAL_MATCH, _R.TQ_PARTIAL_MATCH),
    (_R.QT_COSINE_MATCH, _R.TQ_COSINE_MATCH),
    (_R.QT_NO_MATCH, _R.TQ_NO_MATCH),
    (_R.QC_EXACT_MATCH, _R.CQ_EXACT_MATCH),
    (_R.QC_PARTIAL_MATCH, _R.CQ_PARTIAL_MATCH),
    (_R.QC_COSINE_MATCH, _R.CQ_COSINE_MATCH),
    (_R.QC_NO_MATCH, _R.CQ_NO_MATCH),
    (_R.TC_HAS_COLUMN, _R.CT_BELONGS_TO),
    (_R.TC_PRIMARY_KEY, _R.CT_PRIMARY_KEY_OF),
    (_R.TC_NONE, _R.CT_NONE),
    (_R.CC_SELF, _R.CC_SELF),
    (_R.CC_SAME_TABLE, _R.CC_SAME_TABLE),
    (_R.CC_FOREIGN_KEY_FORWARD, _R.CC_FOREIGN_KEY_BACKWARD),
    (_R.CC_NONE, _R.CC_NONE),
    (_R.TT_SELF, _R.TT_SELF),
    (_R.TT_FOREIGN_KEY_LINK, _R.TT_FOREIGN_KEY_LINK),
    (_R.TT_NONE, _R.TT_NONE),
]

_INVERSE: dict[RelationType, RelationType] = {}
for a, b in _INVERSE_PAIRS:
    _INVERSE[a] = b
    _INVERSE[b] = a
assert len(_INVERSE) == len(RelationType)


def inverse(relation: RelationType) -> RelationType:
    return _INVERSE[relation]


COSINE_TYPES = frozenset(
    {_R.QT_COSINE_MATCH, _R.TQ_COSINE_MATCH, _R.QC_COSINE_MATCH, _R.CQ_COSINE_MATCH}
)
