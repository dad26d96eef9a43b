"""Flat-file formats: schema declarations, per-relation CSV files, run manifests."""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .model import Attribute, Database, RelationScheme, Schema, load_database, normalize_kind

_RELATION_RE = re.compile(r"^relation\s+([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$")
_ATTR_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*:\s*([A-Za-z]+)$")


def parse_schema(text: str) -> Schema:
    """Parse ``relation Name(Attr: type, ...)`` lines; ``#`` starts a comment."""
    relations = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _RELATION_RE.match(line)
        if not m:
            raise DataError(f"schema line {lineno}: expected 'relation Name(Attr: type, ...)'")
        attrs = []
        for part in m.group(2).split(","):
            am = _ATTR_RE.match(part.strip())
            if not am:
                raise DataError(f"schema line {lineno}: bad attribute declaration {part.strip()!r}")
            attrs.append(Attribute(am.group(1), normalize_kind(am.group(2))))
        relations.append(RelationScheme(m.group(1), tuple(attrs)))
    return Schema(relations)


def format_schema(schema: Schema) -> str:
    lines = []
    for r in schema:
        attrs = ", ".join(f"{a.name}: {a.kind}" for a in r.attributes)
        lines.append(f"relation {r.name}({attrs})")
    return "\n".join(lines) + "\n"


def read_csv_rows(text: str, rs: RelationScheme) -> list[list[str]]:
    """Rows of a relation's CSV file; the header must list the attributes in scheme order."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        return []
    header = [h.strip() for h in rows[0]]
    if tuple(header) != rs.attribute_names:
        raise DataError(f"CSV header {header} does not match {list(rs.attribute_names)}",
                        relation=rs.name)
    return [r for r in rows[1:] if r]


def format_csv(db: Database, relation: str) -> str:
    rs = db.schema[relation]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(rs.attribute_names)
    for _, t in db.relation(relation):
        w.writerow([str(v) for v in t.values])
    return buf.getvalue()


@dataclass
class Manifest:
    """Paths to schema, constraints and one CSV per relation, plus run options.

    File grammar: one ``key = value`` per line, ``#`` comments. Keys:
    ``schema``, ``constraints``, ``data.<Relation>`` and optionally
    ``measures`` (space-separated ids) and ``evidence`` (true/false).
    Relative paths resolve against the manifest's directory.
    """

    schema: Path
    constraints: Path
    data: dict[str, Path]
    measures: list[str] = field(default_factory=list)
    evidence: bool = False

    @classmethod
    def parse(cls, text: str, base: Path = Path(".")) -> "Manifest":
        entries: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DataError(f"manifest line {lineno}: expected 'key = value'")
            entries[key.strip()] = value.strip()
        for required in ("schema", "constraints"):
            if required not in entries:
                raise DataError(f"manifest is missing '{required}'")
        data = {k[5:]: base / v for k, v in entries.items() if k.startswith("data.")}
        unknown = set(entries) - {"schema", "constraints", "measures", "evidence"} - {
            "data." + k for k in data}
        if unknown:
            raise DataError(f"unknown manifest keys: {sorted(unknown)}")
        return cls(
            schema=base / entries["schema"],
            constraints=base / entries["constraints"],
            data=data,
            measures=entries.get("measures", "").split(),
            evidence=entries.get("evidence", "false").lower() in ("1", "true", "yes"),
        )

    @classmethod
    def load(cls, path) -> "Manifest":
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), path.parent)


def load_manifest(path):
    """Read a manifest and everything it references.

    Returns ``(manifest, database, constraint_set)``.
    """
    from .dsl import parse_constraints

    manifest = Manifest.load(path)
    schema = parse_schema(_read(manifest.schema))
    missing = [r.name for r in schema if r.name not in manifest.data]
    if missing:
        raise DataError(f"manifest has no data file for relations {missing}")
    extra = sorted(set(manifest.data) - {r.name for r in schema})
    if extra:
        raise DataError(f"manifest names data for unknown relations {extra}")
    rows = {name: read_csv_rows(_read(p), schema[name]) for name, p in manifest.data.items()}
    db = load_database(schema, rows)
    cs = parse_constraints(_read(manifest.constraints), schema)
    return manifest, db, cs


def _read(path: Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def write_bundle(directory, db: Database, constraints_text: str, extra_files=None) -> Path:
    """Write schema, constraints, CSVs and a manifest into ``directory``."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "schema.txt").write_text(format_schema(db.schema), encoding="utf-8")
    (d / "constraints.txt").write_text(constraints_text, encoding="utf-8")
    lines = ["schema = schema.txt", "constraints = constraints.txt"]
    for r in db.schema:
        (d / f"{r.name}.csv").write_text(format_csv(db, r.name), encoding="utf-8")
        lines.append(f"data.{r.name} = {r.name}.csv")
    (d / "manifest.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for name, content in (extra_files or {}).items():
        (d / name).write_text(content, encoding="utf-8")
    return d / "manifest.txt"
