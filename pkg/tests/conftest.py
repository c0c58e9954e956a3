import json
import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from rotreward.executor import load_database_file
from rotreward.pairgen import Seed
from rotreward.planner import load_catalog_file

DATA = pathlib.Path(__file__).resolve().parent.parent / "src" / "rotreward" / "data"


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA


@pytest.fixture(scope="session")
def catalogs():
    return {p.stem: load_catalog_file(p) for p in (DATA / "schemas").glob("*.json")}


@pytest.fixture(scope="session")
def databases(catalogs):
    return {
        p.stem: load_database_file(p, catalogs[p.stem])
        for p in (DATA / "databases").glob("*.json")
    }


@pytest.fixture(scope="session")
def corpus():
    items = []
    with open(DATA / "corpus" / "statements.jsonl", "r", encoding="utf-8") as handle:
        for line in handle:
            raw = json.loads(line)
            items.append(Seed(raw["schema_id"], raw["sql"]))
    return items


@pytest.fixture(scope="session")
def hard_pairs_path():
    return DATA / "pairs" / "hard_pairs.jsonl"


@pytest.fixture(scope="session")
def footnote_catalog():
    """users(id, name): the schema shape behind the bad-column CTE fixture."""
    import json as _json

    from rotreward.planner import load_catalog

    return load_catalog(
        _json.dumps(
            {
                "tables": [
                    {
                        "name": "users",
                        "columns": [
                            {"name": "id", "type": "number"},
                            {"name": "name", "type": "text"},
                        ],
                        "primary_key": ["id"],
                    }
                ]
            }
        )
    )


FOOTNOTE_CTE_SQL = "WITH sub1 AS (SELECT id, name FROM users) SELECT age FROM sub1"
