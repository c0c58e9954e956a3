#!/usr/bin/env python3
"""Regenerate data/pairs/hard_pairs.jsonl.

Template-instantiated SQL pairs that stress structural understanding:
equivalent rewrites that rule-based matchers score below 1 (EXISTS vs IN,
join vs semijoin, UNION vs OR, comma join vs JOIN ON, LIMIT-1 vs MAX) and
non-equivalent look-alikes they score high (associativity shifts, operand
swaps, join-type changes, DISTINCT drops, aggregate swaps). Every pair is
verified against the bundled toy databases before it is written: label 1
must execute identically, label 0 must differ or err.
"""
from __future__ import annotations

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from rotreward.executor import ExecError, execute, load_database_file, results_equal
from rotreward.planner import load_catalog_file
from rotreward.sqlfront import parse, print_canonical

DATA = ROOT / "src" / "rotreward" / "data"

# per-schema slots: t1 joins t2 on t1.k1 = t2.k2 (k2 unique in t2);
# out: projected column of t1; f_col/f_val: filter on t2;
# num/num2: numeric columns of t1; txt/txt_val: text column of t1.
SLOTS = {
    "music": dict(
        t1="singer", k1="singer_id", out="name", num="birth_year", num_lo=1975, num_hi=1990,
        txt="citizenship", txt_val="US", txt_val2="ES",
        t2="song", k2="singer_id", f_col="sales", f_val=50, t2_num="sales", t2_out="title",
    ),
    "world": dict(
        t1="country", k1="code", out="name", num="population", num_lo=1000000, num_hi=200000000,
        txt="continent", txt_val="Europe", txt_val2="Africa",
        t2="city", k2="countrycode", f_col="population", f_val=1000000, t2_num="population", t2_out="name",
    ),
    "forum": dict(
        t1="users", k1="id", out="displayname", num="reputation", num_lo=10, num_hi=500,
        txt="displayname", txt_val="Stephen Turner", txt_val2="Mia Wong",
        t2="posts", k2="owneruserid", f_col="score", f_val=5, t2_num="score", t2_out="title",
    ),
    "workshop": dict(
        t1="technician", k1="id", out="name", num="age", num_lo=30, num_hi=40,
        txt="team", txt_val="Red", txt_val2="Blue",
        t2="repairs", k2="technician_id", f_col="hours", f_val=4, t2_num="hours", t2_out="machine_id",
    ),
    "shop": dict(
        t1="products", k1="productid", out="name", num="price", num_lo=60, num_hi=120,
        txt="category", txt_val="tech", txt_val2="home",
        t2="orders", k2="productid", f_col="quantity", f_val=2, t2_num="quantity", t2_out="customer",
    ),
    "school": dict(
        t1="instructor", k1="dept_name", out="name", num="salary", num_lo=50000, num_hi=92000,
        txt="dept_name", txt_val="Physics", txt_val2="Biology",
        t2="department", k2="dept_name", f_col="budget", f_val=80000, t2_num="budget", t2_out="building",
    ),
    "cars": dict(
        t1="cars_data", k1="id", out="id", num="mpg", num_lo=18, num_hi=28,
        txt=None, txt_val=None, txt_val2=None,
        t2="car_names", k2="makeid", f_col="model", f_val="'amc'", t2_num=None, t2_out="make",
    ),
    "tv": dict(
        t1="cartoon", k1="channel", out="title", num="id", num_lo=2, num_hi=4,
        txt="directed_by", txt_val="Ben Jones", txt_val2="Dan Riba",
        t2="tv_channel", k2="id", f_col="country", f_val="'Italy'", t2_num=None, t2_out="series_name",
    ),
    "election": dict(
        t1="people", k1="people_id", out="name", num="weight", num_lo=55, num_hi=90,
        txt="sex", txt_val="M", txt_val2="F",
        t2="candidate", k2="people_id", f_col="oppose_rate", f_val=0.4, t2_num="support_rate", t2_out="poll_source",
    ),
    "racing": dict(
        t1="circuits", k1="circuitid", out="name", num="circuitid", num_lo=2, num_hi=5,
        txt="country", txt_val="fraNce", txt_val2="Italy",
        t2="races", k2="circuitid", f_col="year", f_val=2008, t2_num="round", t2_out="name",
    ),
    "social": dict(
        t1="user_profiles", k1="uid", out="name", num="followers", num_lo=300, num_hi=5000,
        txt="email", txt_val="bob@example.com", txt_val2="ts@example.com",
        t2="follows", k2="f1", f_col="f2", f_val=1, t2_num="f2", t2_out="f2",
    ),
    "logistics": dict(
        t1="driver", k1="driver_id", out="last_name", num="driver_id", num_lo=1, num_hi=3,
        txt="first_name", txt_val="Zachery", txt_val2="Sue",
        t2="shipment", k2="driver_id", f_col="weight", f_val=100, t2_num="weight", t2_out="ship_id",
    ),
    "activity": dict(
        t1="activity", k1="actid", out="activity_name", num="actid", num_lo=1, num_hi=4,
        txt="activity_name", txt_val="Canoeing", txt_val2="Kayaking",
        t2="participates_in", k2="actid", f_col="stuid", f_val=1002, t2_num="stuid", t2_out="stuid",
    ),
}


def templates(s: dict) -> list[tuple[str, str, int]]:
    t1, k1, out, num = s["t1"], s["k1"], s["out"], s["num"]
    lo, hi = s["num_lo"], s["num_hi"]
    t2, k2, f_col, f_val = s["t2"], s["k2"], s["f_col"], s["f_val"]
    txt, tv, tv2 = s["txt"], s["txt_val"], s["txt_val2"]
    pairs: list[tuple[str, str, int]] = []

    # -- equivalents the rule matchers under-score --------------------------
    pairs.append((
        f"SELECT {out} FROM {t1} WHERE {k1} IN (SELECT {k2} FROM {t2} WHERE {f_col} > {f_val})",
        f"SELECT {out} FROM {t1} WHERE EXISTS (SELECT 1 FROM {t2} WHERE {t2}.{k2} = {t1}.{k1} AND {t2}.{f_col} > {f_val})",
        1,
    ))
    pairs.append((
        f"SELECT {out} FROM {t1} WHERE {k1} NOT IN (SELECT {k2} FROM {t2} WHERE {k2} IS NOT NULL)",
        f"SELECT {out} FROM {t1} WHERE NOT EXISTS (SELECT 1 FROM {t2} WHERE {t2}.{k2} = {t1}.{k1})",
        1,
    ))
    pairs.append((
        f"SELECT DISTINCT a.{out} FROM {t1} AS a JOIN {t2} AS b ON a.{k1} = b.{k2} WHERE b.{f_col} > {f_val}",
        f"SELECT DISTINCT {out} FROM {t1} WHERE {k1} IN (SELECT {k2} FROM {t2} WHERE {f_col} > {f_val})",
        1,
    ))
    pairs.append((
        f"SELECT DISTINCT a.{out} FROM {t1} AS a, {t2} AS b WHERE a.{k1} = b.{k2} AND b.{f_col} > {f_val}",
        f"SELECT DISTINCT a.{out} FROM {t1} AS a JOIN {t2} AS b ON a.{k1} = b.{k2} WHERE b.{f_col} > {f_val}",
        1,
    ))
    pairs.append((
        f"SELECT max({num}) FROM {t1}",
        f"SELECT {num} FROM {t1} WHERE {num} IS NOT NULL ORDER BY {num} DESC LIMIT 1",
        1,
    ))
    if txt:
        pairs.append((
            f"SELECT DISTINCT {out} FROM {t1} WHERE {txt} = '{tv}' OR {num} > {hi}",
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv}' UNION SELECT {out} FROM {t1} WHERE {num} > {hi}",
            1,
        ))
        pairs.append((
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv}' AND {num} >= {lo}",
            f"SELECT {out} FROM (SELECT {out}, {num} FROM {t1} WHERE {txt} = '{tv}') AS sub WHERE {num} >= {lo}",
            1,
        ))

    # -- near-copy equivalents (surface noise only) --------------------------
    pairs.append((
        f"SELECT a.{out} FROM {t1} AS a JOIN {t2} AS b ON a.{k1} = b.{k2}",
        f"SELECT x.{out} FROM {t1} AS x INNER JOIN {t2} AS y ON x.{k1} = y.{k2}",
        1,
    ))
    pairs.append((
        f"SELECT {out} FROM {t1} WHERE {num} >= {lo} AND {num} <= {hi}",
        f"SELECT {out} FROM {t1} WHERE {num} BETWEEN {lo} AND {hi}",
        1,
    ))
    if txt:
        pairs.append((
            f"SELECT {out} FROM {t1} WHERE NOT {txt} = '{tv}'",
            f"SELECT {out} FROM {t1} WHERE {txt} <> '{tv}'",
            1,
        ))
        pairs.append((
            f"SELECT {out.upper()} FROM {t1.upper()} WHERE ({txt} != '{tv}')",
            f"select {out} from {t1} where {txt} != '{tv}'",
            1,
        ))

    # -- non-equivalents the rule matchers over-score ------------------------
    if txt:
        pairs.append((
            f"SELECT {out} FROM {t1} WHERE ({txt} = '{tv}' AND {num} > {lo}) OR {num} > {hi}",
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv}' AND ({num} > {lo} OR {num} > {hi})",
            0,
        ))
        pairs.append((
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv}' AND {num} >= {lo}",
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv}'",
            0,
        ))
        pairs.append((
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv}'",
            f"SELECT {out} FROM {t1} WHERE {txt} = '{tv2}'",
            0,
        ))
        pairs.append((
            f"SELECT {txt} FROM {t1} WHERE {num} > {lo} UNION SELECT {txt} FROM {t1} WHERE {num} <= {lo}",
            f"SELECT {txt} FROM {t1} WHERE {num} > {lo} UNION ALL SELECT {txt} FROM {t1} WHERE {num} <= {lo}",
            0,
        ))
        pairs.append((
            f"SELECT DISTINCT {txt} FROM {t1}",
            f"SELECT {txt} FROM {t1}",
            0,
        ))
    pairs.append((
        f"SELECT a.{out} FROM {t1} AS a JOIN {t2} AS b ON a.{k1} = b.{k2}",
        f"SELECT a.{out} FROM {t1} AS a LEFT JOIN {t2} AS b ON a.{k1} = b.{k2}",
        0,
    ))
    pairs.append((
        f"SELECT {out}, {num} FROM {t1} ORDER BY {num} LIMIT 2",
        f"SELECT {out}, {num} FROM {t1} ORDER BY {num} DESC LIMIT 2",
        0,
    ))
    pairs.append((
        f"SELECT sum({num}) FROM {t1}",
        f"SELECT avg({num}) FROM {t1}",
        0,
    ))
    pairs.append((
        f"SELECT count(*) FROM {t1} WHERE {num} >= {lo}",
        f"SELECT count(*) FROM {t1} WHERE {num} > {lo}",
        0,
    ))
    pairs.append((
        f"SELECT {out} FROM {t1} ORDER BY {num} LIMIT 2",
        f"SELECT {out} FROM {t1} ORDER BY {num} LIMIT 3",
        0,
    ))
    pairs.append((
        f"SELECT min({num}), max({num}) FROM {t1}",
        f"SELECT max({num}), min({num}) FROM {t1}",
        0,
    ))
    if s["t2_num"]:
        pairs.append((
            f"SELECT {t2_out_expr(s)} FROM {t2} WHERE {s['t2_num']} < {f_val}",
            f"SELECT {t2_out_expr(s)} FROM {t2} WHERE {f_val} < {s['t2_num']}",
            0,
        ))
    return pairs


def t2_out_expr(s):
    return s["t2_out"]


def jitter_pair(ref: str, cand: str, rng: random.Random):
    """Shift every shared integer literal by the same offset in both texts."""
    ref_ast, cand_ast = parse(ref), parse(cand)
    values = sorted(
        {
            node.attrs["value"]
            for node in ref_ast.root.walk()
            if node.kind == "expr-literal"
            and node.attrs["type"] == "number"
            and isinstance(node.attrs["value"], int)
            and abs(node.attrs["value"]) > 1
        }
    )
    if not values:
        return None
    mapping = {v: v + rng.choice([-7, -5, -3, -2, -1, 1, 2, 3, 5, 7]) for v in values}
    for ast in (ref_ast, cand_ast):
        for node in ast.root.walk():
            if (
                node.kind == "expr-literal"
                and node.attrs["type"] == "number"
                and node.attrs["value"] in mapping
            ):
                node.attrs["value"] = mapping[node.attrs["value"]]
    return print_canonical(ref_ast), print_canonical(cand_ast)


def verify(ref, cand, label, db, catalog) -> bool:
    try:
        reference = execute(ref, db, catalog)
    except ExecError:
        return False
    try:
        candidate = execute(cand, db, catalog)
        equal = results_equal(candidate, reference)
    except ExecError:
        equal = False
    return equal if label == 1 else not equal


def main():
    rng = random.Random(20240501)
    catalogs = {p.stem: load_catalog_file(p) for p in (DATA / "schemas").glob("*.json")}
    dbs = {p.stem: load_database_file(p) for p in (DATA / "databases").glob("*.json")}
    out = []
    dropped = 0
    seen = set()

    def push(schema_id, ref, cand, label):
        nonlocal dropped
        key = (schema_id, ref, cand)
        if key in seen:
            return
        seen.add(key)
        try:
            parse(ref), parse(cand)
        except Exception:
            dropped += 1
            return
        if not verify(ref, cand, label, dbs[schema_id], catalogs[schema_id]):
            dropped += 1
            return
        out.append(
            {
                "id": f"hard-{len(out):05d}",
                "schema_id": schema_id,
                "reference_sql": ref,
                "candidate_sql": cand,
                "label": label,
            }
        )

    for schema_id, slots in SLOTS.items():
        base = templates(slots)
        for ref, cand, label in base:
            push(schema_id, ref, cand, label)
            for _ in range(6):
                jittered = jitter_pair(ref, cand, rng)
                if jittered is not None:
                    push(schema_id, jittered[0], jittered[1], label)

    path = DATA / "pairs" / "hard_pairs.jsonl"
    with open(path, "w") as handle:
        for item in out:
            handle.write(json.dumps(item) + "\n")
    labels = [item["label"] for item in out]
    print(f"wrote {len(out)} verified hard pairs ({sum(labels)} equivalent, "
          f"{len(labels) - sum(labels)} non-equivalent); dropped {dropped}")


if __name__ == "__main__":
    main()
