import json

import pytest

from rotreward.planner import (
    CatalogError,
    load_catalog,
    lower,
    normalize,
    rot_as_graph,
    rot_as_tree,
)
from rotreward.planner.rot import DATAFLOW_EDGE, RotError
from rotreward.sqlfront import parse


def plan(sql, catalog):
    return normalize(lower(parse(sql), catalog))


def test_load_catalog_singer_song(data_dir):
    document = (data_dir / "schemas" / "music.json").read_text()
    catalog = load_catalog(document)
    assert set(catalog.tables) == {"singer", "song"}
    assert sum(len(t.foreign_keys) for t in catalog.tables.values()) == 1
    fk = catalog.tables["song"].foreign_keys[0]
    assert (fk.column, fk.ref_table, fk.ref_column) == ("singer_id", "singer", "singer_id")


def test_load_catalog_empty_is_valid():
    assert load_catalog('{"tables": []}').tables == {}


def test_load_catalog_dangling_foreign_key():
    document = json.dumps(
        {
            "tables": [
                {
                    "name": "a",
                    "columns": [{"name": "x", "type": "number"}],
                    "foreign_keys": [{"column": "x", "ref_table": "ghost", "ref_column": "y"}],
                }
            ]
        }
    )
    with pytest.raises(CatalogError, match="ghost"):
        load_catalog(document)


def test_lower_footnote_unresolved_column(footnote_catalog):
    from conftest import FOOTNOTE_CTE_SQL

    with pytest.raises(RotError) as err:
        lower(parse(FOOTNOTE_CTE_SQL), footnote_catalog)
    assert err.value.error_class == "unresolved-column"
    assert "age" in err.value.message


def test_lower_minimal_chain(catalogs):
    rot = lower(parse("SELECT name FROM singer"), catalogs["music"])
    kinds = [n.kind for n in rot.nodes]
    assert kinds[0] == "Project" and "TableScan" in kinds


def test_lower_ambiguous_column(catalogs):
    with pytest.raises(RotError) as err:
        lower(
            parse("SELECT singer_id FROM singer JOIN song ON singer.singer_id = song.singer_id"),
            catalogs["music"],
        )
    assert err.value.error_class == "ambiguous-name"
    assert "singer_id" in err.value.message


def test_lower_unresolved_table(catalogs):
    with pytest.raises(RotError) as err:
        lower(parse("SELECT x FROM ghost"), catalogs["music"])
    assert err.value.error_class == "unresolved-table"


def test_lower_not_in_subquery_shape(catalogs):
    rot = plan(
        "SELECT Name FROM singer WHERE Singer_ID NOT IN (SELECT Singer_ID FROM song)",
        catalogs["music"],
    )
    # Project over Filter whose predicate is the negated-semijoin expression
    kinds = [n.kind for n in rot.nodes]
    assert kinds[0] == "Project" and kinds[1] == "Filter"
    anti = [n for n in rot.nodes if n.kind == "expr-in-subquery"]
    assert len(anti) == 1 and anti[0].attrs["negated"] is True


def test_normalize_filter_merge(catalogs):
    merged = plan(
        "SELECT name FROM (SELECT * FROM singer WHERE birth_year > 1980) z WHERE z.citizenship = 'US'",
        catalogs["music"],
    )
    direct = plan(
        "SELECT name FROM singer WHERE birth_year > 1980 AND citizenship = 'US'",
        catalogs["music"],
    )
    assert merged.structurally_equal(direct)
    filters = [n for n in merged.nodes if n.kind == "Filter"]
    assert len(filters) == 1
    predicate = filters[0].children[1]
    assert predicate.attrs["op"] == "and" and len(predicate.children) == 2


def test_normalize_in_list_expansion(catalogs):
    a = plan("SELECT name FROM technician WHERE age IN (36, 37)", catalogs["workshop"])
    b = plan("SELECT name FROM technician WHERE age = 36 OR age = 37", catalogs["workshop"])
    assert a.structurally_equal(b)


def test_normalize_between(catalogs):
    a = plan("SELECT name FROM technician WHERE age BETWEEN 30 AND 40", catalogs["workshop"])
    b = plan("SELECT name FROM technician WHERE age >= 30 AND age <= 40", catalogs["workshop"])
    assert a.structurally_equal(b)


def test_normalize_not_pushdown(catalogs):
    a = plan("SELECT name FROM technician WHERE NOT (age > 40 OR team = 'Red')", catalogs["workshop"])
    b = plan("SELECT name FROM technician WHERE age <= 40 AND team != 'Red'", catalogs["workshop"])
    assert a.structurally_equal(b)
    c = plan("SELECT name FROM technician WHERE NOT NOT age > 40", catalogs["workshop"])
    d = plan("SELECT name FROM technician WHERE age > 40", catalogs["workshop"])
    assert c.structurally_equal(d)


def test_normalize_idempotent_on_corpus(catalogs, corpus):
    for seed in corpus:
        once = plan(seed.sql, catalogs[seed.schema_id])
        twice = normalize(once)
        assert twice.structurally_equal(once), seed.sql


def test_normalize_inner_join_commutes(catalogs):
    a = plan(
        "SELECT song.title FROM singer JOIN song ON singer.singer_id = song.singer_id",
        catalogs["music"],
    )
    b = plan(
        "SELECT song.title FROM song JOIN singer ON singer.singer_id = song.singer_id",
        catalogs["music"],
    )
    assert a.structurally_equal(b)


def test_alias_invariance(catalogs):
    a = plan(
        "SELECT T1.name FROM singer AS T1 JOIN song AS T2 ON T1.singer_id = T2.singer_id WHERE T2.sales > 10",
        catalogs["music"],
    )
    b = plan(
        "SELECT x.name FROM singer x JOIN song y ON x.singer_id = y.singer_id WHERE y.sales > 10",
        catalogs["music"],
    )
    assert a.structurally_equal(b)


def test_star_projection_collapses_to_scan(catalogs):
    rot = plan("SELECT * FROM singer", catalogs["music"])
    assert [n.kind for n in rot.nodes] == ["TableScan"]
    assert rot.edges == []


def test_distinct_unifies_with_group_by(catalogs):
    a = plan("SELECT DISTINCT citizenship FROM singer", catalogs["music"])
    b = plan("SELECT citizenship FROM singer GROUP BY citizenship", catalogs["music"])
    assert a.structurally_equal(b)


def test_resolution_soundness_on_corpus(catalogs, corpus):
    for seed in corpus:
        rot = plan(seed.sql, catalogs[seed.schema_id])
        catalog = catalogs[seed.schema_id]
        for node in rot.nodes:
            if node.kind == "expr-column":
                label = node.attrs["column"]
                table, column = label.split(".", 1)
                if table == "?":
                    continue
                assert catalog.table(table) is not None, label
                assert catalog.table(table).column_type(column) is not None, label


def test_rot_as_tree_fig1_single_label_difference(catalogs):
    a = rot_as_tree(plan("SELECT name FROM technician WHERE age > 34", catalogs["workshop"]))
    b = rot_as_tree(plan("SELECT name FROM technician WHERE age >= 34", catalogs["workshop"]))
    la, lb = a.labels(), b.labels()
    assert len(la) == len(lb)
    differences = [i for i, (x, y) in enumerate(zip(la, lb)) if x != y]
    assert len(differences) == 1
    assert la[differences[0]][0] == "expr-binary"


def test_rot_as_tree_node_count_select_one(catalogs):
    tree = rot_as_tree(plan("SELECT 1", catalogs["music"]))
    # hand count: Project, Values, literal
    assert len(tree) == 3


def test_rot_as_tree_identical_sql(catalogs, corpus):
    for seed in corpus[:25]:
        a = rot_as_tree(plan(seed.sql, catalogs[seed.schema_id]))
        b = rot_as_tree(plan(seed.sql, catalogs[seed.schema_id]))
        assert a.structurally_equal(b)


def test_rot_as_graph_single_scan(catalogs):
    graph = rot_as_graph(plan("SELECT * FROM singer", catalogs["music"]))
    assert graph.num_nodes == 1 and len(graph.edge_src) == 0


def test_rot_as_graph_dataflow_edge_present(catalogs):
    rot = plan("SELECT name FROM singer WHERE birth_year > 1980", catalogs["music"])
    dataflow = [e for e in rot.edges if e[2] == DATAFLOW_EDGE]
    assert dataflow, "expected a data-flow edge from the scan to the predicate column"
    scan_ids = [i for i, n in enumerate(rot.nodes) if n.kind == "TableScan"]
    column_ids = [i for i, n in enumerate(rot.nodes) if n.kind == "expr-column"]
    assert any(src in scan_ids and dst in column_ids for src, dst, _ in dataflow)


def test_rot_as_graph_alias_erasure(catalogs):
    a = rot_as_graph(
        plan(
            "SELECT T1.name FROM singer AS T1 JOIN song AS T2 ON T1.singer_id = T2.singer_id",
            catalogs["music"],
        )
    )
    b = rot_as_graph(
        plan(
            "SELECT s.name FROM singer s JOIN song q ON s.singer_id = q.singer_id",
            catalogs["music"],
        )
    )
    assert (a.features == b.features).all()
    assert (a.positions == b.positions).all()
    assert (a.edge_src == b.edge_src).all() and (a.edge_type == b.edge_type).all()


def test_rot_as_graph_features_finite(catalogs, corpus):
    import numpy as np

    for seed in corpus[:30]:
        graph = rot_as_graph(plan(seed.sql, catalogs[seed.schema_id]))
        assert np.isfinite(graph.features).all() and np.isfinite(graph.positions).all()
        assert graph.edge_src.max(initial=-1) < graph.num_nodes
