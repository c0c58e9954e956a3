"""Schema catalog: tables, typed columns, keys."""
from __future__ import annotations

import json
from dataclasses import dataclass, field


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class ForeignKey:
    column: str
    ref_table: str
    ref_column: str


@dataclass(frozen=True)
class TableDef:
    name: str
    columns: tuple[tuple[str, str], ...]  # (column name, "number" | "text")
    primary_key: tuple[str, ...] = ()
    foreign_keys: tuple[ForeignKey, ...] = ()

    def column_names(self) -> tuple[str, ...]:
        return tuple(c for c, _ in self.columns)

    def column_type(self, name: str) -> str | None:
        for col, type_tag in self.columns:
            if col == name:
                return type_tag
        return None


@dataclass
class Catalog:
    tables: dict[str, TableDef] = field(default_factory=dict)

    def table(self, name: str) -> TableDef | None:
        return self.tables.get(name.lower())


def load_catalog(document: str) -> Catalog:
    """Parse a catalog JSON document; raises CatalogError on structural problems."""
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"malformed catalog document: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("tables"), list):
        raise CatalogError("catalog document must be an object with a 'tables' list")
    catalog = Catalog()
    for entry in raw["tables"]:
        name = str(entry.get("name", "")).lower()
        if not name:
            raise CatalogError("table without a name")
        if name in catalog.tables:
            raise CatalogError(f"duplicate table name {name!r}")
        columns = []
        seen = set()
        for col in entry.get("columns", []):
            col_name = str(col.get("name", "")).lower()
            col_type = str(col.get("type", "text")).lower()
            if not col_name:
                raise CatalogError(f"table {name!r} has a column without a name")
            if col_name in seen:
                raise CatalogError(f"duplicate column {col_name!r} in table {name!r}")
            if col_type not in ("number", "text"):
                raise CatalogError(f"column {name}.{col_name} has unknown type {col_type!r}")
            seen.add(col_name)
            columns.append((col_name, col_type))
        primary_key = tuple(str(c).lower() for c in entry.get("primary_key", []))
        foreign_keys = tuple(
            ForeignKey(
                str(fk.get("column", "")).lower(),
                str(fk.get("ref_table", "")).lower(),
                str(fk.get("ref_column", "")).lower(),
            )
            for fk in entry.get("foreign_keys", [])
        )
        catalog.tables[name] = TableDef(name, tuple(columns), primary_key, foreign_keys)
    # validate key endpoints
    for table in catalog.tables.values():
        for pk in table.primary_key:
            if table.column_type(pk) is None:
                raise CatalogError(f"primary key column {table.name}.{pk} does not exist")
        for fk in table.foreign_keys:
            if table.column_type(fk.column) is None:
                raise CatalogError(f"foreign key column {table.name}.{fk.column} does not exist")
            target = catalog.tables.get(fk.ref_table)
            if target is None:
                raise CatalogError(f"foreign key references missing table {fk.ref_table!r}")
            if target.column_type(fk.ref_column) is None:
                raise CatalogError(
                    f"foreign key references missing column {fk.ref_table}.{fk.ref_column}"
                )
    return catalog


def load_catalog_file(path) -> Catalog:
    with open(path, "r", encoding="utf-8") as handle:
        return load_catalog(handle.read())
