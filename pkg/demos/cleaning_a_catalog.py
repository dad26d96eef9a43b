"""Watch the measures fall while a small product catalog is cleaned one row at a time.

Run from the repository root:  python3 demos/cleaning_a_catalog.py
"""

from incmeter import conflict_hypergraph, load_database, measure_all, parse_constraints, parse_schema
from incmeter.hypergraph import Hypergraph, min_hitting_set
from incmeter.measures import decide
from incmeter.model import MeasureValue

schema = parse_schema("relation Product(Sku: int, Price: rational, Shelf: text)")
rows = [
    (1, "3.50", "A1"),
    (1, "3.75", "A1"),   # same sku, second price
    (2, "2", "B4"),
    (2, "2", "B5"),      # same sku, second shelf
    (3, "-1", "C2"),     # a negative price
    (4, "12", "A1"),
    (5, "12", "A1"),
    (6, "12", "A1"),     # a fourth product on shelf A1
]
db = load_database(schema, {"Product": rows})
cs = parse_constraints("""
fd price: Product: Sku -> Price
fd shelf: Product: Sku -> Shelf
denial positive: Product(s, p, l) -> p > 0
nd crowded: Product: Shelf -> 3 Sku
""", schema)

watch = "db:IM,db:IP,db:IH,db:IA,db:Ieta"

def show(db, label):
    r = measure_all(db, cs, watch)
    print(f"{label:30}" + "  ".join(f"{m}={v}" for m, v in r.values.items()))
    return r

show(db, "raw catalog")

# %% A smallest set of rows whose removal makes the catalog consistent is a
# minimum hitting set of the conflict hypergraph; IH is its size.
h = conflict_hypergraph(db, cs)
size, drop = min_hitting_set(Hypergraph.of(h.edges))
print("delete", size, "rows:", ", ".join(str(db[t]) for t in sorted(drop)))

current = db
for t in sorted(drop):
    current = current.without([t])
    show(current, f"without {db[t]}")

# %% Questions of the form "is the catalog at least this bad?"
r = measure_all(db, cs, "db:IH")
for op, v in (("lv", 2), ("uv", 2), ("ev", 4)):
    print(f"IH {op} {v}:", decide(r["db:IH"], op, MeasureValue(v)))
