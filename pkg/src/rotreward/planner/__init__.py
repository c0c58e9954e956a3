"""Name resolution, AST lowering, plan normalization, and plan exports."""
from .catalog import Catalog, CatalogError, ForeignKey, TableDef, load_catalog, load_catalog_file
from .encode import EncodedGraph, FEATURE_DIM, rot_as_graph, rot_as_tree
from .lower import lower
from .normalize import normalize
from .rot import RotError, RotGraph, RotNode

__all__ = [
    "Catalog",
    "CatalogError",
    "EncodedGraph",
    "FEATURE_DIM",
    "ForeignKey",
    "RotError",
    "RotGraph",
    "RotNode",
    "TableDef",
    "load_catalog",
    "load_catalog_file",
    "lower",
    "normalize",
    "rot_as_graph",
    "rot_as_tree",
]
