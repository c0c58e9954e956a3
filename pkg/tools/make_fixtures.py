#!/usr/bin/env python3
"""Regenerate the bundled schemas, toy databases, and statement corpus.

Deterministic; writes into src/rotreward/data/. Rows are hand-crafted to
exercise boundaries (comparison swaps must change results), nulls, duplicate
values, and text case so that augmentation verification and 3VL tests bite.
"""
from __future__ import annotations

import json
from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "rotreward" / "data"

N, T = "number", "text"


def table(name, cols, pk=(), fks=()):
    return {
        "name": name,
        "columns": [{"name": c, "type": t} for c, t in cols],
        "primary_key": list(pk),
        "foreign_keys": [
            {"column": c, "ref_table": rt, "ref_column": rc} for c, rt, rc in fks
        ],
    }


SCHEMAS = {
    "music": [
        table(
            "singer",
            [("singer_id", N), ("name", T), ("birth_year", N), ("net_worth_millions", N), ("citizenship", T)],
            pk=("singer_id",),
        ),
        table(
            "song",
            [("song_id", N), ("title", T), ("singer_id", N), ("sales", N), ("highest_position", N)],
            pk=("song_id",),
            fks=[("singer_id", "singer", "singer_id")],
        ),
    ],
    "world": [
        table(
            "country",
            [
                ("code", T), ("name", T), ("continent", T), ("surfacearea", N), ("indepyear", N),
                ("population", N), ("lifeexpectancy", N), ("gnp", N), ("governmentform", T),
                ("headofstate", T), ("capital", N),
            ],
            pk=("code",),
        ),
        table(
            "city",
            [("id", N), ("name", T), ("countrycode", T), ("district", T), ("population", N)],
            pk=("id",),
            fks=[("countrycode", "country", "code")],
        ),
        table(
            "countrylanguage",
            [("countrycode", T), ("language", T), ("isofficial", T), ("percentage", N)],
            fks=[("countrycode", "country", "code")],
        ),
    ],
    "forum": [
        table("users", [("id", N), ("displayname", T), ("reputation", N)], pk=("id",)),
        table(
            "posts",
            [("id", N), ("owneruserid", N), ("score", N), ("title", T)],
            pk=("id",),
            fks=[("owneruserid", "users", "id")],
        ),
        table(
            "comments",
            [("id", N), ("userid", N), ("postid", N), ("score", N)],
            pk=("id",),
            fks=[("userid", "users", "id"), ("postid", "posts", "id")],
        ),
    ],
    "workshop": [
        table("technician", [("id", N), ("name", T), ("age", N), ("team", T)], pk=("id",)),
        table("machine", [("machine_id", N), ("value", N), ("team", T)], pk=("machine_id",)),
        table(
            "repairs",
            [("technician_id", N), ("machine_id", N), ("hours", N)],
            fks=[("technician_id", "technician", "id"), ("machine_id", "machine", "machine_id")],
        ),
    ],
    "shop": [
        table("products", [("productid", N), ("name", T), ("price", N), ("category", T)], pk=("productid",)),
        table(
            "orders",
            [("orderid", N), ("productid", N), ("quantity", N), ("customer", T)],
            pk=("orderid",),
            fks=[("productid", "products", "productid")],
        ),
    ],
    "school": [
        table("department", [("dept_name", T), ("building", T), ("budget", N)], pk=("dept_name",)),
        table(
            "instructor",
            [("id", N), ("name", T), ("dept_name", T), ("salary", N)],
            pk=("id",),
            fks=[("dept_name", "department", "dept_name")],
        ),
        table(
            "course",
            [("course_id", T), ("title", T), ("dept_name", T), ("credits", N)],
            pk=("course_id",),
            fks=[("dept_name", "department", "dept_name")],
        ),
    ],
    "cars": [
        table("car_makers", [("id", N), ("maker", T), ("country", T)], pk=("id",)),
        table(
            "model_list",
            [("modelid", N), ("maker", N), ("model", T)],
            pk=("modelid",),
            fks=[("maker", "car_makers", "id")],
        ),
        table("car_names", [("makeid", N), ("model", T), ("make", T)], pk=("makeid",)),
        table(
            "cars_data",
            [("id", N), ("mpg", N), ("cylinders", N), ("horsepower", N), ("weight", N), ("accelerate", N), ("year", N)],
            pk=("id",),
            fks=[("id", "car_names", "makeid")],
        ),
    ],
    "tv": [
        table(
            "tv_channel",
            [("id", T), ("series_name", T), ("country", T), ("language", T), ("package_option", T)],
            pk=("id",),
        ),
        table(
            "cartoon",
            [("id", N), ("title", T), ("directed_by", T), ("channel", T)],
            pk=("id",),
            fks=[("channel", "tv_channel", "id")],
        ),
        table(
            "tv_series",
            [("id", N), ("episode", T), ("rating", N), ("channel", T)],
            pk=("id",),
            fks=[("channel", "tv_channel", "id")],
        ),
    ],
    "election": [
        table(
            "candidate",
            [("candidate_id", N), ("people_id", N), ("poll_source", T), ("support_rate", N), ("oppose_rate", N)],
            pk=("candidate_id",),
            fks=[("people_id", "people", "people_id")],
        ),
        table("people", [("people_id", N), ("name", T), ("sex", T), ("weight", N), ("height", N)], pk=("people_id",)),
    ],
    "racing": [
        table("circuits", [("circuitid", N), ("name", T), ("location", T), ("country", T)], pk=("circuitid",)),
        table(
            "races",
            [("raceid", N), ("year", N), ("round", N), ("circuitid", N), ("name", T)],
            pk=("raceid",),
            fks=[("circuitid", "circuits", "circuitid")],
        ),
    ],
    "social": [
        table("user_profiles", [("uid", N), ("name", T), ("email", T), ("followers", N)], pk=("uid",)),
        table("user", [("uid", N), ("name", T), ("email", T), ("partitionid", N)], pk=("uid",)),
        table("follows", [("f1", N), ("f2", N)]),
    ],
    "logistics": [
        table("driver", [("driver_id", N), ("first_name", T), ("last_name", T), ("city", T)], pk=("driver_id",)),
        table(
            "shipment",
            [("ship_id", N), ("cust_id", N), ("weight", N), ("driver_id", N)],
            pk=("ship_id",),
            fks=[("driver_id", "driver", "driver_id")],
        ),
    ],
    "activity": [
        table("activity", [("actid", N), ("activity_name", T)], pk=("actid",)),
        table(
            "participates_in",
            [("stuid", N), ("actid", N)],
            fks=[("actid", "activity", "actid")],
        ),
        table("faculty", [("facid", N), ("lname", T), ("fname", T), ("rank", T)], pk=("facid",)),
    ],
}

ROWS = {
    "music": {
        "singer": [
            [1, "Liz Carter", 1981, 12, "US"],
            [2, "Marco Ruiz", 1975, 40, "ES"],
            [3, "Ana Koch", 1990, 5, "DE"],
            [4, "Tove Lund", 1981, 5, "SE"],
            [5, "Nina Petrova", 1969, 33, "US"],
            [6, "Juan Ortiz", 1990, None, "ES"],
            [7, "Grace Obi", 2001, 2, "NG"],
        ],
        "song": [
            [1, "Blue Night", 1, 120, 3],
            [2, "Gold Road", 1, 85, 11],
            [3, "Paper Sun", 2, 60, 1],
            [4, "Ivory", 3, 60, 25],
            [5, "Northern Line", 4, 15, 40],
            [6, "Cold Water", 5, 200, 2],
            [7, "Last Leto", 5, 31, None],
            [8, "Echoes", 2, 44, 9],
        ],
    },
    "world": {
        "country": [
            ["USA", "United States", "North America", 9372610, 1776, 278357000, 77.1, 8510700, "Federal Republic", "G. Willow", 3813],
            ["NLD", "Netherlands", "Europe", 41526, 1581, 15864000, 78.3, 371362, "Constitutional Monarchy", "Beatrix", 5],
            ["BRA", "Brazil", "South America", 8547403, 1822, 170115000, 62.9, 776739, "Federal Republic", "F. Cardoso", 211],
            ["JPN", "Japan", "Asia", 377829, -660, 126714000, 80.7, 3787042, "Constitutional Monarchy", "Akihito", 1532],
            ["NOR", "Norway", "Europe", 323877, 1905, 4478500, 78.7, 145895, "Constitutional Monarchy", "Harald V", 2807],
            ["KEN", "Kenya", "Africa", 580367, 1963, 30080000, 48.0, 9217, "Republic", "D. Moi", 2053],
            ["PER", "Peru", "South America", 1285216, 1821, 25662000, 70.0, 64140, "Republic", "V. Fujimori", 2890],
            ["KIR", "Kiribati", "Oceania", 726, 1979, 83000, 59.8, 40.7, "Republic", "T. Tito", 2256],
            ["MCO", "Monaco", "Europe", 1.5, 1861, 34000, 78.8, 776, "Constitutional Monarchy", "Rainier III", 3538],
            ["ERI", "Eritrea", "Africa", 117600, 1993, 3850000, 55.8, 650, "Republic", "I. Afewerki", 652],
            ["ATA", "Antarctica", "Antarctica", 13120000, None, 0, None, 0, "Co-administrated", None, None],
        ],
        "city": [
            [1, "New York", "USA", "New York", 8008278],
            [2, "Los Angeles", "USA", "California", 3694820],
            [3, "Amsterdam", "NLD", "Noord-Holland", 731200],
            [4, "Rotterdam", "NLD", "Zuid-Holland", 593321],
            [5, "Sao Paulo", "BRA", "Sao Paulo", 9968485],
            [6, "Tokyo", "JPN", "Tokyo-to", 7980230],
            [7, "Oslo", "NOR", "Oslo", 508726],
            [8, "Nairobi", "KEN", "Nairobi", 2290000],
            [9, "Lima", "PER", "Lima", 6464693],
            [10, "Monaco-Ville", "MCO", "", 1234],
        ],
        "countrylanguage": [
            ["USA", "English", "T", 86.2],
            ["USA", "Spanish", "F", 7.5],
            ["NLD", "Dutch", "T", 95.6],
            ["BRA", "Portuguese", "T", 97.5],
            ["JPN", "Japanese", "T", 99.1],
            ["NOR", "Norwegian", "T", 96.6],
            ["KEN", "Swahili", "T", 52.0],
            ["KEN", "English", "T", 8.0],
            ["PER", "Spanish", "T", 79.8],
            ["PER", "Quechua", "T", 16.4],
            ["MCO", "French", "T", 41.9],
        ],
    },
    "forum": {
        "users": [
            [1, "Stephen Turner", 420],
            [2, "Mia Wong", 1200],
            [3, "Ravi Patel", 88],
            [4, "Elena Gil", 0],
            [5, "Stephen Turner", 15],
            [6, "Omar Haddad", None],
        ],
        "posts": [
            [10, 1, 12, "Index tuning"],
            [11, 1, -2, "Vacuum strategy"],
            [12, 2, 45, "CTE style"],
            [13, 3, 0, "Join order"],
            [14, 5, 7, "Window warmup"],
            [15, 2, 45, "Backups"],
            [16, 6, None, "Untitled"],
        ],
        "comments": [
            [100, 2, 10, 3],
            [101, 3, 10, 1],
            [102, 1, 12, 0],
            [103, 4, 13, -1],
            [104, 5, 12, 2],
            [105, 1, 15, None],
        ],
    },
    "workshop": {
        "technician": [
            [1, "Joe Sewell", 37, "Red"],
            [2, "Trent Hotman", 34, "Blue"],
            [3, "Ada Malone", 36, "Red"],
            [4, "Kim Roe", 41, "Blue"],
            [5, "Pat Chen", 34, "Green"],
            [6, "Max Webb", None, "Red"],
            [7, "Sue Park", 28, "Green"],
        ],
        "machine": [
            [1, 120, "Red"],
            [2, 60, "Blue"],
            [3, 150, "Red"],
            [4, 60, "Green"],
            [5, None, "Blue"],
        ],
        "repairs": [
            [1, 1, 5],
            [1, 2, 3],
            [3, 1, 8],
            [4, 4, 2],
            [5, 3, 7],
            [7, 5, 1],
        ],
    },
    "shop": {
        "products": [
            [1, "Desk Lamp", 60, "home"],
            [2, "Office Chair", 120, "home"],
            [3, "Notebook", 4, "paper"],
            [4, "Monitor", 199, "tech"],
            [5, "Cable", 9, "tech"],
            [6, "Standing Desk", 320, "home"],
            [7, "Pen Set", 14, "paper"],
            [8, "Webcam", 60, "tech"],
            [9, "Ruler", None, "paper"],
        ],
        "orders": [
            [1, 1, 2, "acme"],
            [2, 2, 1, "acme"],
            [3, 3, 10, "bolt"],
            [4, 4, 1, "core"],
            [5, 1, 1, "bolt"],
            [6, 8, 3, "acme"],
            [7, 5, 4, "dune"],
        ],
    },
    "school": {
        "department": [
            ["Physics", "Watson", 90000],
            ["Biology", "Watson", 120000],
            ["History", "Painter", 50000],
            ["Music", "Packard", 80000],
            ["Finance", "Painter", 120000],
        ],
        "instructor": [
            [1, "Einstein", "Physics", 95000],
            [2, "Curie", "Physics", 92000],
            [3, "Darwin", "Biology", 72000],
            [4, "Tubman", "History", 54000],
            [5, "Bach", "Music", 44000],
            [6, "Keynes", "Finance", 85000],
            [7, "Mendel", "Biology", 72000],
            [8, "Adams", None, 40000],
        ],
        "course": [
            ["PHY-101", "Mechanics", "Physics", 4],
            ["PHY-301", "Quanta", "Physics", 3],
            ["BIO-101", "Cells", "Biology", 4],
            ["HIS-220", "Atlantic World", "History", 3],
            ["MUS-140", "Counterpoint", "Music", 2],
            ["FIN-201", "Markets", "Finance", 3],
        ],
    },
    "cars": {
        "car_makers": [
            [1, "amc", "usa"],
            [2, "volkswagen", "germany"],
            [3, "toyota", "japan"],
            [4, "fiat", "italy"],
        ],
        "model_list": [
            [1, 1, "amc"],
            [2, 2, "vw"],
            [3, 3, "toyota"],
            [4, 4, "fiat"],
        ],
        "car_names": [
            [1, "amc", "amc hornet sportabout (sw)"],
            [2, "vw", "vw rabbit"],
            [3, "toyota", "toyota corolla"],
            [4, "fiat", "fiat 128"],
            [5, "amc", "amc gremlin"],
            [6, "toyota", "toyota mark ii"],
        ],
        "cars_data": [
            [1, 18.0, 8, 130, 3504, 12.0, 1970],
            [2, 26.0, 4, 46, 1835, 20.5, 1970],
            [3, 32.0, 4, 65, 1773, 19.0, 1971],
            [4, 28.0, 4, 49, 1867, 19.5, 1973],
            [5, 21.0, 6, 100, 2648, 15.0, 1970],
            [6, 19.0, 6, 108, 2930, 15.5, 1971],
        ],
    },
    "tv": {
        "tv_channel": [
            ["C1", "Sky Radio", "Italy", "Italian", "Free"],
            ["C2", "Canal 24", "Spain", "Spanish", "Premium"],
            ["C3", "Duna TV", "Hungary", "Hungarian", "Free"],
            ["C4", "Rai Uno", "Italy", "Italian", "Basic"],
            ["C5", "Nova", "Czechia", "Czech", None],
        ],
        "cartoon": [
            [1, "The Rise of the Blue Beetle!", "Ben Jones", "C1"],
            [2, "Terror on Dinosaur Island!", "Brandon Vietti", "C2"],
            [3, "Evil Under the Sea!", "Michael Chang", "C1"],
            [4, "Day of the Dark Knight!", "Ben Jones", "C3"],
            [5, "Invasion of the Secret Santas!", "Dan Riba", "C4"],
        ],
        "tv_series": [
            [1, "A Love of a Lifetime", 4.7, "C1"],
            [2, "Fathers and Sons", 3.9, "C2"],
            [3, "Meet the Parents", 4.2, "C2"],
            [4, "Bad Sons", None, "C5"],
        ],
    },
    "election": {
        "candidate": [
            [1, 1, "WNBC/Marist Poll", 0.25, 0.43],
            [2, 4, "WNBC/Marist Poll", 0.18, 0.44],
            [3, 2, "FOX News/Opinion Dynamics", 0.32, 0.30],
            [4, 5, "Newsweek Poll", 0.25, 0.51],
            [5, 3, "FOX News/Opinion Dynamics", 0.18, 0.25],
            [6, 6, "Newsweek Poll", None, 0.32],
        ],
        "people": [
            [1, "Tony Fernandes", "M", 89, 188],
            [2, "Gloria Macapagal", "F", 57, 152],
            [3, "Derek Bond", "M", 94, 195],
            [4, "Juliet Zhu", "F", 51, 160],
            [5, "Erik Larsen", "M", 89, 182],
            [6, "Simone Faye", "F", 62, 170],
        ],
    },
    "racing": {
        "circuits": [
            [1, "Albert Park", "Melbourne", "Australia"],
            [2, "Sepang", "Kuala Lumpur", "Malaysia"],
            [3, "Magny-Cours", "Nevers", "fraNce"],
            [4, "Spa", "Francorchamps", "belGium"],
            [5, "Monza", "Monza", "Italy"],
            [6, "Paul Ricard", "Le Castellet", "fraNce"],
        ],
        "races": [
            [1, 2007, 1, 1, "Australian GP"],
            [2, 2007, 2, 2, "Malaysian GP"],
            [3, 2008, 8, 3, "French GP"],
            [4, 2008, 12, 4, "Belgian GP"],
            [5, 2009, 13, 5, "Italian GP"],
            [6, 2010, 8, 6, "French GP"],
            [7, 2011, 1, 1, "Australian GP"],
        ],
    },
    "social": {
        "user_profiles": [
            [1, "Taylor Swift", "ts@example.com", 12000000],
            [2, "Old Swifty", "old.swift@example.com", 300],
            [3, "Bob Kahn", "bob@example.com", 4500],
            [4, "Nadia Swiftova", "nadia@example.com", 880],
            [5, "Chen Li", "chen@example.com", None],
        ],
        "user": [
            [1, "Taylor Swift", "ts@example.com", 7],
            [2, "Ian Swift", "ian.swift@example.com", 3],
            [3, "Bob Kahn", "bob@example.com", 7],
            [6, "Dara Ng", "dara@example.com", 1],
        ],
        "follows": [
            [2, 1],
            [3, 1],
            [4, 1],
            [3, 2],
            [5, 3],
        ],
    },
    "logistics": {
        "driver": [
            [1, "Zachery", "Hicks", "Bratislava"],
            [2, "Sue", "Newell", "Kosice"],
            [3, "Andrea", "Simm", "Praha"],
            [4, "Zachery", "Ortiz", "Brno"],
        ],
        "shipment": [
            [1, 10, 115.0, 1],
            [2, 11, 40.5, 1],
            [3, 10, 115.0, 2],
            [4, 12, 87.2, 3],
            [5, 13, 220.0, 1],
            [6, 14, 12.0, None],
        ],
    },
    "activity": {
        "activity": [
            [1, "Mountain Climbing"],
            [2, "Canoeing"],
            [3, "Kayaking"],
            [4, "Spelunking"],
            [5, "Extreme Canasta"],
        ],
        "participates_in": [
            [1001, 1],
            [1001, 2],
            [1002, 2],
            [1003, 5],
            [1004, 2],
            [1005, 4],
        ],
        "faculty": [
            [1, "Giuliano", "Mark", "Instructor"],
            [2, "Goodrich", "Michael", "Professor"],
            [3, "Masson", "Gerald", "AsstProf"],
            [4, "Irani", "Sandra", "Professor"],
        ],
    },
}


def corpus() -> list[dict]:
    """Statements across all schemas; every one must parse, lower, and run."""
    items: list[tuple[str, str]] = []

    def add(schema, *sqls):
        for sql in sqls:
            items.append((schema, sql))

    add(
        "music",
        "SELECT name FROM singer",
        "SELECT Name FROM singer WHERE Singer_ID NOT IN (SELECT Singer_ID FROM song)",
        "SELECT name FROM singer WHERE citizenship = 'US'",
        "SELECT DISTINCT citizenship FROM singer",
        "SELECT citizenship, count(*) FROM singer GROUP BY citizenship",
        "SELECT citizenship, count(*) AS n FROM singer GROUP BY citizenship HAVING count(*) > 1",
        "SELECT name FROM singer WHERE birth_year BETWEEN 1975 AND 1990",
        "SELECT name FROM singer WHERE birth_year IN (1981, 1990)",
        "SELECT name FROM singer WHERE birth_year = 1981 OR birth_year = 1990",
        "SELECT title FROM song WHERE sales > 50 ORDER BY sales DESC",
        "SELECT T1.name, T2.title FROM singer AS T1 JOIN song AS T2 ON T1.singer_id = T2.singer_id",
        "SELECT T1.name FROM singer AS T1 LEFT JOIN song AS T2 ON T1.singer_id = T2.singer_id WHERE T2.song_id IS NULL",
        "SELECT avg(sales) FROM song",
        "SELECT sum(sales), singer_id FROM song GROUP BY singer_id ORDER BY sum(sales) DESC LIMIT 2",
        "SELECT name FROM singer WHERE net_worth_millions IS NULL",
        "SELECT name FROM singer WHERE EXISTS (SELECT 1 FROM song WHERE song.singer_id = singer.singer_id AND song.sales > 100)",
        "SELECT max(highest_position) FROM song WHERE singer_id IN (SELECT singer_id FROM singer WHERE citizenship = 'US')",
        "SELECT name FROM singer WHERE singer_id IN (SELECT singer_id FROM song WHERE sales >= 60)",
        "SELECT title FROM song WHERE highest_position <= 10 UNION SELECT name FROM singer WHERE citizenship = 'DE'",
        "SELECT count(DISTINCT citizenship) FROM singer",
        "WITH top_sellers AS (SELECT singer_id, sum(sales) AS total FROM song GROUP BY singer_id) SELECT singer.name, top_sellers.total FROM singer JOIN top_sellers ON singer.singer_id = top_sellers.singer_id WHERE top_sellers.total > 100",
        "SELECT name, CASE WHEN birth_year < 1980 THEN 'early' ELSE 'late' END AS era FROM singer",
    )
    add(
        "world",
        "SELECT sum(Population), GovernmentForm FROM country GROUP BY GovernmentForm HAVING avg(LifeExpectancy) > 72",
        "SELECT name FROM country WHERE continent = 'Europe'",
        "SELECT name FROM country WHERE continent = 'Europe' AND population < 10000000",
        "SELECT avg(lifeexpectancy) FROM country WHERE continent = 'Africa'",
        "SELECT name, population FROM country ORDER BY population DESC LIMIT 3",
        "SELECT count(*) FROM city WHERE population > 1000000",
        "SELECT T1.name, T2.name FROM country AS T1 JOIN city AS T2 ON T1.code = T2.countrycode WHERE T2.population > 5000000",
        "SELECT name FROM country WHERE code IN (SELECT countrycode FROM countrylanguage WHERE language = 'English')",
        "SELECT name FROM country WHERE code NOT IN (SELECT countrycode FROM countrylanguage)",
        "SELECT language, count(*) FROM countrylanguage GROUP BY language HAVING count(*) >= 2",
        "SELECT continent, max(surfacearea) FROM country GROUP BY continent",
        "SELECT name FROM country WHERE lifeexpectancy IS NOT NULL ORDER BY lifeexpectancy LIMIT 5",
        "SELECT name FROM country WHERE surfacearea > 1000000 EXCEPT SELECT name FROM country WHERE continent = 'Asia'",
        "SELECT countrycode FROM countrylanguage WHERE isofficial = 'T' INTERSECT SELECT code FROM country WHERE population > 1000000",
        "SELECT DISTINCT continent FROM country WHERE population = 0 OR lifeexpectancy IS NULL",
        "SELECT name, gnp / 1000 AS gnp_bn FROM country WHERE gnp > 100000",
        "SELECT count(*) FROM country WHERE indepyear BETWEEN 1800 AND 1900",
        "WITH euro AS (SELECT code, name, population FROM country WHERE continent = 'Europe') SELECT name FROM euro WHERE population > 5000000",
        "SELECT city.name FROM city JOIN country ON city.countrycode = country.code WHERE country.governmentform = 'Republic' ORDER BY city.name",
        "SELECT governmentform, count(*) AS forms FROM country GROUP BY governmentform ORDER BY forms DESC, governmentform LIMIT 4",
    )
    add(
        "forum",
        "SELECT AVG(T2.Score) FROM users AS T1 INNER JOIN posts AS T2 ON T1.Id = T2.OwnerUserId WHERE T1.DisplayName = 'Stephen Turner'",
        "WITH UserInfo AS (SELECT id FROM users WHERE displayname = 'Stephen Turner'), PostInfo AS (SELECT score FROM posts WHERE owneruserid IN (SELECT id FROM UserInfo)) SELECT AVG(score) FROM PostInfo",
        "SELECT displayname FROM users WHERE reputation > 100",
        "SELECT title FROM posts WHERE score > 0 ORDER BY score DESC",
        "SELECT count(*) FROM posts WHERE score IS NULL",
        "SELECT owneruserid, count(*) FROM posts GROUP BY owneruserid",
        "SELECT u.displayname, count(c.id) AS n FROM users u LEFT JOIN comments c ON u.id = c.userid GROUP BY u.displayname ORDER BY n DESC, u.displayname",
        "SELECT title FROM posts WHERE owneruserid IN (SELECT id FROM users WHERE reputation > 500)",
        "SELECT displayname FROM users WHERE id NOT IN (SELECT owneruserid FROM posts WHERE owneruserid IS NOT NULL)",
        "SELECT avg(score) FROM comments WHERE postid = 10",
        "SELECT p.title FROM posts p WHERE EXISTS (SELECT 1 FROM comments c WHERE c.postid = p.id AND c.score > 0)",
        "SELECT displayname, reputation FROM users ORDER BY reputation DESC LIMIT 3",
        "SELECT DISTINCT displayname FROM users",
        "WITH hot AS (SELECT id, title, score FROM posts WHERE score >= 7) SELECT title FROM hot ORDER BY score DESC LIMIT 2",
        "SELECT count(DISTINCT owneruserid) FROM posts",
    )
    add(
        "workshop",
        "SELECT name FROM technician WHERE age > 34",
        "SELECT name FROM technician WHERE age >= 34",
        "SELECT Name FROM (SELECT Name, Age FROM technician) AS t WHERE Age IN (36, 37)",
        "SELECT Name FROM (SELECT Name, Age FROM technician) AS t WHERE Age = 36 OR Age = 37",
        "SELECT team, count(*) FROM technician GROUP BY team",
        "SELECT team, avg(age) AS mean_age FROM technician GROUP BY team HAVING avg(age) > 33",
        "SELECT name FROM technician WHERE age IS NULL",
        "SELECT t.name, m.value FROM technician t JOIN repairs r ON t.id = r.technician_id JOIN machine m ON m.machine_id = r.machine_id",
        "SELECT name FROM technician WHERE id IN (SELECT technician_id FROM repairs WHERE hours > 4)",
        "SELECT name FROM technician WHERE NOT age BETWEEN 30 AND 40",
        "SELECT machine_id, sum(hours) FROM repairs GROUP BY machine_id ORDER BY sum(hours) DESC",
        "SELECT name FROM technician WHERE team = 'Red' UNION ALL SELECT team FROM machine WHERE value > 100",
        "SELECT count(*) FROM machine WHERE value = 60",
        "SELECT name FROM technician ORDER BY age DESC LIMIT 2",
        "WITH red AS (SELECT id, name FROM technician WHERE team = 'Red') SELECT name FROM red",
    )
    add(
        "shop",
        "SELECT * FROM Products WHERE Price >= 60 AND Price <= 120",
        "SELECT * FROM Products WHERE Price >= 60 OR Price <= 120",
        "SELECT name FROM products WHERE price BETWEEN 60 AND 120",
        "SELECT name FROM products WHERE category = 'tech' AND price < 100",
        "SELECT category, min(price), max(price) FROM products GROUP BY category",
        "SELECT name FROM products WHERE price IS NULL",
        "SELECT p.name, o.quantity FROM products p JOIN orders o ON p.productid = o.productid WHERE o.customer = 'acme'",
        "SELECT customer, sum(quantity) FROM orders GROUP BY customer ORDER BY sum(quantity) DESC",
        "SELECT name FROM products WHERE productid IN (SELECT productid FROM orders GROUP BY productid HAVING count(*) > 1)",
        "SELECT name FROM products WHERE productid NOT IN (SELECT productid FROM orders)",
        "SELECT DISTINCT category FROM products WHERE price > 50",
        "SELECT name, price FROM products ORDER BY price DESC LIMIT 3",
        "SELECT count(*) FROM orders WHERE quantity BETWEEN 2 AND 5",
        "WITH big AS (SELECT productid, quantity FROM orders WHERE quantity >= 3) SELECT products.name FROM products JOIN big ON products.productid = big.productid",
        "SELECT avg(price) FROM products WHERE category = 'home'",
    )
    add(
        "school",
        "SELECT * FROM (SELECT dept_name, budget FROM department) AS t WHERE budget > (SELECT AVG(budget) FROM department)",
        "SELECT dept_name FROM department WHERE budget > 80000",
        "SELECT name FROM instructor WHERE salary BETWEEN 50000 AND 95000",
        "SELECT dept_name, count(*) FROM instructor GROUP BY dept_name",
        "SELECT i.name FROM instructor i JOIN department d ON i.dept_name = d.dept_name WHERE d.building = 'Watson'",
        "SELECT name FROM instructor WHERE dept_name IS NULL",
        "SELECT title FROM course WHERE credits >= 3 ORDER BY title",
        "SELECT dept_name FROM department EXCEPT SELECT dept_name FROM course",
        "SELECT avg(salary) FROM instructor WHERE dept_name = 'Physics'",
        "SELECT dept_name, sum(credits) FROM course GROUP BY dept_name HAVING sum(credits) > 3",
        "SELECT name FROM instructor WHERE salary > (SELECT avg(salary) FROM instructor)",
        "SELECT building, count(DISTINCT dept_name) FROM department GROUP BY building",
        "SELECT name FROM instructor WHERE dept_name IN (SELECT dept_name FROM department WHERE budget >= 120000)",
        "WITH rich AS (SELECT dept_name FROM department WHERE budget > 60000) SELECT course.title FROM course JOIN rich ON course.dept_name = rich.dept_name",
        "SELECT max(budget) - min(budget) FROM department",
    )
    add(
        "cars",
        "SELECT T1.Accelerate FROM CARS_DATA AS T1 JOIN CAR_NAMES AS T2 ON T1.Id = T2.MakeId WHERE T2.Make = 'amc hornet sportabout (sw)'",
        "SELECT T1.Model FROM CAR_NAMES AS T1 JOIN CARS_DATA AS T2 ON T1.MakeId = T2.Id ORDER BY T2.mpg DESC LIMIT 1",
        "SELECT model FROM model_list WHERE maker IN (SELECT id FROM car_makers WHERE country = 'usa')",
        "SELECT count(*) FROM cars_data WHERE cylinders = 4",
        "SELECT avg(weight) FROM cars_data WHERE year < 1972",
        "SELECT maker, count(*) FROM car_makers GROUP BY maker",
        "SELECT model FROM car_names WHERE makeid IN (SELECT id FROM cars_data WHERE mpg > 25)",
        "SELECT cylinders, avg(accelerate) FROM cars_data GROUP BY cylinders HAVING count(*) >= 2",
        "SELECT make FROM car_names WHERE model = 'amc' OR model = 'vw'",
        "SELECT max(horsepower) FROM cars_data WHERE cylinders < 8",
        "SELECT car_makers.maker FROM car_makers JOIN model_list ON car_makers.id = model_list.maker WHERE model_list.model != 'fiat'",
        "SELECT year, count(*) FROM cars_data GROUP BY year ORDER BY year",
    )
    add(
        "tv",
        "SELECT package_option FROM TV_Channel WHERE id NOT IN (SELECT channel FROM cartoon WHERE directed_by = 'Ben Jones')",
        "SELECT series_name FROM tv_channel WHERE country = 'Italy'",
        "SELECT title FROM cartoon WHERE directed_by = 'Ben Jones'",
        "SELECT count(*) FROM cartoon WHERE channel = 'C1'",
        "SELECT t.series_name, c.title FROM tv_channel t JOIN cartoon c ON t.id = c.channel",
        "SELECT episode FROM tv_series WHERE rating IS NOT NULL ORDER BY rating DESC LIMIT 2",
        "SELECT language, count(*) FROM tv_channel GROUP BY language",
        "SELECT series_name FROM tv_channel WHERE id IN (SELECT channel FROM tv_series WHERE rating > 4)",
        "SELECT DISTINCT directed_by FROM cartoon",
        "SELECT package_option FROM tv_channel WHERE package_option IS NOT NULL AND country != 'Spain'",
        "SELECT title FROM cartoon WHERE NOT channel IN (SELECT id FROM tv_channel WHERE language = 'Italian')",
    )
    add(
        "election",
        "SELECT candidate_id FROM candidate ORDER BY candidate_id DESC LIMIT 3",
        "SELECT poll_source, count(*) FROM candidate GROUP BY poll_source",
        "SELECT name FROM people WHERE sex = 'F' AND height > 155",
        "SELECT c.support_rate FROM candidate c JOIN people p ON c.people_id = p.people_id WHERE p.name = 'Tony Fernandes'",
        "SELECT avg(support_rate) FROM candidate WHERE poll_source = 'Newsweek Poll'",
        "SELECT name FROM people WHERE people_id IN (SELECT people_id FROM candidate WHERE oppose_rate > 0.4)",
        "SELECT name FROM people WHERE people_id NOT IN (SELECT people_id FROM candidate)",
        "SELECT sex, avg(weight) FROM people GROUP BY sex",
        "SELECT name, height FROM people ORDER BY height DESC LIMIT 2",
        "SELECT count(*) FROM candidate WHERE support_rate IS NULL",
        "SELECT max(support_rate) - min(oppose_rate) FROM candidate WHERE support_rate IS NOT NULL",
    )
    add(
        "racing",
        "SELECT circuitid, location FROM (SELECT circuitid, location, country FROM circuits) AS t WHERE country = 'fraNce' OR country = 'belGium'",
        "SELECT name FROM circuits WHERE country = 'Italy'",
        "SELECT count(*) FROM races WHERE year = 2007",
        "SELECT r.name FROM races r JOIN circuits c ON r.circuitid = c.circuitid WHERE c.country = 'Australia'",
        "SELECT year, count(*) FROM races GROUP BY year HAVING count(*) > 1",
        "SELECT name FROM circuits WHERE circuitid IN (SELECT circuitid FROM races WHERE year >= 2009)",
        "SELECT name FROM circuits WHERE circuitid NOT IN (SELECT circuitid FROM races WHERE year < 2009)",
        "SELECT location FROM circuits WHERE country LIKE '%France%'",
        "SELECT DISTINCT country FROM circuits ORDER BY country",
        "SELECT max(round) FROM races WHERE year BETWEEN 2007 AND 2009",
    )
    add(
        "social",
        "SELECT * FROM (SELECT name, email FROM user_profiles) AS t WHERE name LIKE '%Swift%'",
        "SELECT * FROM (SELECT name, email FROM user) AS t WHERE name LIKE '%Swift%'",
        "SELECT name FROM user_profiles WHERE followers > 1000",
        "SELECT count(*) FROM follows WHERE f2 = 1",
        "SELECT u.name FROM user_profiles u WHERE u.uid IN (SELECT f1 FROM follows WHERE f2 = 1)",
        "SELECT name FROM user_profiles WHERE followers IS NULL",
        "SELECT name, followers FROM user_profiles ORDER BY followers DESC LIMIT 2",
        "SELECT email FROM user WHERE partitionid = 7",
        "SELECT name FROM user_profiles WHERE uid NOT IN (SELECT f1 FROM follows)",
        "SELECT partitionid, count(*) FROM user GROUP BY partitionid",
    )
    add(
        "logistics",
        "SELECT T1.ship_id FROM shipment AS T1 INNER JOIN driver AS T2 ON T1.driver_id = T2.driver_id WHERE T2.first_name = 'Zachery' AND T2.last_name = 'Hicks' ORDER BY T1.weight DESC LIMIT 1",
        "WITH DriverShipments AS (SELECT T1.ship_id, T1.weight FROM shipment AS T1 INNER JOIN driver AS T2 ON T1.driver_id = T2.driver_id WHERE T2.first_name = 'Zachery' AND T2.last_name = 'Hicks'), HeaviestShipment AS (SELECT ship_id FROM DriverShipments ORDER BY weight DESC LIMIT 1) SELECT ship_id FROM HeaviestShipment",
        "SELECT first_name FROM driver WHERE city = 'Bratislava'",
        "SELECT count(*) FROM shipment WHERE weight > 100",
        "SELECT d.last_name, count(*) FROM driver d JOIN shipment s ON d.driver_id = s.driver_id GROUP BY d.last_name",
        "SELECT ship_id FROM shipment WHERE driver_id IS NULL",
        "SELECT avg(weight) FROM shipment WHERE cust_id = 10",
        "SELECT first_name, last_name FROM driver WHERE driver_id IN (SELECT driver_id FROM shipment WHERE weight > 200)",
        "SELECT DISTINCT cust_id FROM shipment ORDER BY cust_id",
        "SELECT last_name FROM driver WHERE first_name = 'Zachery' AND NOT city = 'Brno'",
    )
    add(
        "activity",
        "SELECT actid FROM activity",
        "SELECT activity_name FROM activity WHERE actid IN (SELECT actid FROM participates_in GROUP BY actid HAVING count(*) >= 2)",
        "SELECT count(*) FROM participates_in WHERE actid = 2",
        "SELECT a.activity_name FROM activity a LEFT JOIN participates_in p ON a.actid = p.actid WHERE p.stuid IS NULL",
        "SELECT lname FROM faculty WHERE rank = 'Professor'",
        "SELECT rank, count(*) FROM faculty GROUP BY rank",
        "SELECT activity_name FROM activity WHERE activity_name LIKE '%ing'",
        "SELECT stuid FROM participates_in WHERE actid IN (1, 2)",
        "SELECT stuid FROM participates_in WHERE actid = 1 OR actid = 2",
        "SELECT fname FROM faculty WHERE rank != 'Professor' ORDER BY lname",
    )
    add(
        "music",
        "SELECT name FROM singer WHERE NOT (citizenship = 'US' OR citizenship = 'ES')",
        "SELECT title, sales FROM song WHERE sales BETWEEN 40 AND 150 ORDER BY title",
        "SELECT singer_id, count(*) AS n, avg(sales) FROM song GROUP BY singer_id HAVING count(*) >= 2",
        "SELECT title FROM song ORDER BY sales DESC LIMIT 2 OFFSET 1",
        "SELECT name FROM singer WHERE citizenship LIKE '_S'",
        "SELECT 1",
        "SELECT count(*) FROM song WHERE highest_position IS NULL",
    )
    add(
        "world",
        "SELECT name FROM country WHERE population > 100000000 UNION ALL SELECT name FROM city WHERE population > 9000000",
        "SELECT name FROM country WHERE continent IN ('Europe', 'Asia') AND population >= 4478500",
        "SELECT continent, sum(population) AS pop FROM country GROUP BY continent ORDER BY pop DESC LIMIT 2",
        "SELECT name FROM city WHERE district = ''",
        "SELECT name FROM country WHERE surfacearea < 1000 OR population = 0",
        "SELECT count(*) FROM countrylanguage WHERE percentage >= 50 AND isofficial = 'T'",
        "SELECT name, CASE WHEN population > 100000000 THEN 'huge' WHEN population > 10000000 THEN 'big' ELSE 'small' END FROM country",
    )
    add(
        "forum",
        "SELECT displayname FROM users WHERE displayname LIKE 'stephen%'",
        "SELECT title FROM posts WHERE score < 0 UNION SELECT title FROM posts WHERE score IS NULL",
        "SELECT userid FROM comments GROUP BY userid HAVING sum(score) >= 2",
        "SELECT displayname, reputation FROM users WHERE reputation IS NOT NULL ORDER BY reputation DESC, displayname LIMIT 4",
        "SELECT count(*) FROM users WHERE reputation BETWEEN 10 AND 500",
    )
    add(
        "workshop",
        "SELECT name FROM technician WHERE age = 34 AND team != 'Blue'",
        "SELECT team FROM technician INTERSECT SELECT team FROM machine",
        "SELECT t.team, sum(r.hours) FROM technician t JOIN repairs r ON t.id = r.technician_id GROUP BY t.team",
        "SELECT name FROM technician WHERE id NOT IN (SELECT technician_id FROM repairs)",
        "SELECT avg(value) FROM machine WHERE team = 'Red' OR team = 'Blue'",
    )
    add(
        "shop",
        "SELECT name FROM products WHERE category = 'paper' AND price IS NOT NULL",
        "SELECT customer FROM orders GROUP BY customer HAVING count(*) >= 2",
        "SELECT name FROM products WHERE price > 100 UNION SELECT customer FROM orders WHERE quantity > 5",
        "SELECT sum(quantity * 2) FROM orders WHERE customer = 'acme'",
        "SELECT name FROM products WHERE name LIKE '%desk%'",
    )
    add(
        "school",
        "SELECT name FROM instructor WHERE salary >= 72000 AND salary <= 92000",
        "SELECT dept_name FROM department WHERE budget = (SELECT max(budget) FROM department)",
        "SELECT title FROM course WHERE dept_name = 'Physics' OR credits = 2",
        "SELECT count(*) FROM instructor WHERE name LIKE '%e%'",
        "SELECT dept_name, budget FROM department ORDER BY budget DESC, dept_name LIMIT 3",
    )
    add(
        "cars",
        "SELECT model FROM car_names WHERE make LIKE '%toyota%'",
        "SELECT count(DISTINCT model) FROM car_names",
        "SELECT id FROM cars_data WHERE mpg > 20 AND cylinders = 4 ORDER BY weight",
        "SELECT maker FROM car_makers WHERE country != 'usa' ORDER BY maker",
        "SELECT avg(mpg) FROM cars_data WHERE year BETWEEN 1970 AND 1971",
    )
    add(
        "tv",
        "SELECT series_name FROM tv_channel WHERE package_option IS NULL",
        "SELECT channel, count(*) FROM cartoon GROUP BY channel ORDER BY count(*) DESC",
        "SELECT title FROM cartoon WHERE directed_by = 'Ben Jones' OR directed_by = 'Dan Riba'",
        "SELECT country FROM tv_channel EXCEPT SELECT country FROM tv_channel WHERE language = 'Italian'",
    )
    add(
        "election",
        "SELECT people_id FROM candidate WHERE support_rate > oppose_rate",
        "SELECT name FROM people WHERE weight BETWEEN 55 AND 90 ORDER BY name",
        "SELECT poll_source FROM candidate GROUP BY poll_source HAVING avg(support_rate) >= 0.2",
        "SELECT count(*) FROM people WHERE sex = 'M' AND height >= 182",
    )
    add(
        "racing",
        "SELECT name FROM races WHERE year = 2007 OR year = 2008",
        "SELECT country, count(*) FROM circuits GROUP BY country HAVING count(*) >= 2",
        "SELECT name FROM circuits WHERE location LIKE '%M%'",
        "SELECT year FROM races GROUP BY year ORDER BY count(*) DESC LIMIT 1",
    )
    add(
        "social",
        "SELECT name FROM user_profiles WHERE email LIKE '%@example.com' AND followers > 500",
        "SELECT f2, count(*) FROM follows GROUP BY f2",
        "SELECT name FROM user_profiles WHERE uid IN (SELECT f2 FROM follows WHERE f1 = 3)",
        "SELECT name FROM user WHERE uid NOT IN (SELECT uid FROM user_profiles)",
    )
    add(
        "logistics",
        "SELECT last_name FROM driver WHERE city LIKE 'B%'",
        "SELECT cust_id, sum(weight) FROM shipment GROUP BY cust_id HAVING sum(weight) > 100",
        "SELECT first_name FROM driver WHERE driver_id NOT IN (SELECT driver_id FROM shipment WHERE driver_id IS NOT NULL)",
        "SELECT weight FROM shipment ORDER BY weight DESC LIMIT 3",
    )
    add(
        "activity",
        "SELECT activity_name FROM activity WHERE actid NOT IN (SELECT actid FROM participates_in)",
        "SELECT count(DISTINCT stuid) FROM participates_in",
        "SELECT lname, fname FROM faculty WHERE rank = 'Professor' OR rank = 'Instructor' ORDER BY lname",
        "SELECT actid, count(*) FROM participates_in GROUP BY actid HAVING count(*) = 1",
    )
    add(
        "music",
        "SELECT title FROM song WHERE sales IN (60, 120)",
        "SELECT name FROM singer WHERE singer_id IN (1, 3, 5)",
        "SELECT title FROM song WHERE highest_position IN (1, 2, 3)",
        "SELECT name FROM singer WHERE net_worth_millions IN (5, 12)",
    )
    add(
        "world",
        "SELECT name FROM country WHERE indepyear IN (1776, 1821, 1963)",
        "SELECT name FROM city WHERE population IN (731200, 1234)",
        "SELECT language FROM countrylanguage WHERE percentage IN (52, 86)",
        "SELECT name FROM country WHERE capital IN (5, 211, 652)",
    )
    add(
        "forum",
        "SELECT displayname FROM users WHERE reputation IN (88, 420, 1200)",
        "SELECT title FROM posts WHERE score IN (12, 45)",
        "SELECT id FROM comments WHERE score IN (0, 1, 2, 3)",
    )
    add(
        "workshop",
        "SELECT name FROM technician WHERE age IN (28, 34)",
        "SELECT machine_id FROM machine WHERE value IN (60, 150)",
        "SELECT technician_id FROM repairs WHERE hours IN (2, 3, 5)",
    )
    add(
        "shop",
        "SELECT name FROM products WHERE price IN (60, 120)",
        "SELECT orderid FROM orders WHERE quantity IN (1, 2, 4)",
        "SELECT name FROM products WHERE productid IN (2, 4, 6, 8)",
    )
    add(
        "school",
        "SELECT name FROM instructor WHERE salary IN (72000, 92000)",
        "SELECT title FROM course WHERE credits IN (2, 4)",
        "SELECT dept_name FROM department WHERE budget IN (90000, 120000)",
    )
    add(
        "cars",
        "SELECT model FROM car_names WHERE makeid IN (1, 3, 5)",
        "SELECT id FROM cars_data WHERE cylinders IN (4, 8)",
        "SELECT id FROM cars_data WHERE year IN (1970, 1973)",
    )
    add(
        "tv",
        "SELECT title FROM cartoon WHERE id IN (1, 3, 5)",
        "SELECT episode FROM tv_series WHERE id IN (2, 4)",
    )
    add(
        "election",
        "SELECT poll_source FROM candidate WHERE candidate_id IN (1, 4, 6)",
        "SELECT name FROM people WHERE weight IN (57, 89)",
        "SELECT name FROM people WHERE height IN (152, 170, 188)",
    )
    add(
        "racing",
        "SELECT name FROM circuits WHERE circuitid IN (2, 4, 6)",
        "SELECT name FROM races WHERE round IN (1, 8, 12)",
        "SELECT raceid FROM races WHERE year IN (2007, 2010)",
    )
    add(
        "social",
        "SELECT name FROM user_profiles WHERE followers IN (300, 880, 4500)",
        "SELECT name FROM user WHERE partitionid IN (3, 7)",
        "SELECT f1 FROM follows WHERE f2 IN (1, 2)",
    )
    add(
        "logistics",
        "SELECT ship_id FROM shipment WHERE cust_id IN (10, 12, 14)",
        "SELECT first_name FROM driver WHERE driver_id IN (1, 4)",
    )
    add(
        "activity",
        "SELECT activity_name FROM activity WHERE actid IN (1, 4, 5)",
        "SELECT stuid FROM participates_in WHERE stuid IN (1001, 1003)",
    )
    return [{"schema_id": s, "sql": q} for s, q in items]


def main():
    schemas_dir = DATA / "schemas"
    db_dir = DATA / "databases"
    corpus_dir = DATA / "corpus"
    for directory in (schemas_dir, db_dir, corpus_dir, DATA / "pairs"):
        directory.mkdir(parents=True, exist_ok=True)
    for schema_id, tables in SCHEMAS.items():
        (schemas_dir / f"{schema_id}.json").write_text(
            json.dumps({"tables": tables}, indent=1) + "\n"
        )
        rows = ROWS[schema_id]
        db = {
            "tables": {
                t["name"]: {
                    "columns": [c["name"] for c in t["columns"]],
                    "rows": rows.get(t["name"], []),
                }
                for t in tables
            }
        }
        (db_dir / f"{schema_id}.json").write_text(json.dumps(db, indent=1) + "\n")
    statements = corpus()
    with open(corpus_dir / "statements.jsonl", "w") as handle:
        for item in statements:
            handle.write(json.dumps(item) + "\n")
    print(f"wrote {len(SCHEMAS)} schemas, {len(SCHEMAS)} databases, {len(statements)} statements")


if __name__ == "__main__":
    main()
