from .config import LinkingConfig
from .export import export_matrices, matrix_to_doc, relation_catalog
from .linker import LinkMap, LinkStats, build_matrix, csr_link, link_corpus, string_link
from .matrix import RelationMatrix, check_matrix
from .relations import RelationType, inverse

__all__ = [
    "LinkMap",
    "LinkStats",
    "LinkingConfig",
    "RelationMatrix",
    "RelationType",
    "build_matrix",
    "check_matrix",
    "csr_link",
    "export_matrices",
    "inverse",
    "link_corpus",
    "matrix_to_doc",
    "relation_catalog",
    "string_link",
]
