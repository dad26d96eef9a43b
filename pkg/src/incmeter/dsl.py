"""Denial-constraint language: AST, parser, desugaring and pretty-printing.

A constraint ``denial name: R1(...), ..., Rk(...) -> phi`` is violated by any
binding of tuples to the atoms (repetition allowed) under which ``phi`` is
false. ``phi`` is a disjunction of conjunctions of comparisons; an empty
``phi`` is false, so the constraint forbids every match of the atoms.

Grammar::

    file        := { decl } ;
    decl        := denial | fd | nd ;
    denial      := "denial" NAME ":" atom { "," atom } "->" dnf_or_empty ;
    fd          := "fd" NAME ":" RNAME ":" attrlist "->" ANAME ;
    nd          := "nd" NAME ":" RNAME ":" attrlist "->" INT ANAME ;
    atom        := RNAME "(" term { "," term } ")" ;
    term        := VAR | constant ;
    dnf_or_empty:= [ conj { "|" conj } ] ;
    conj        := cmp { "&" cmp } ;
    cmp         := term OP term ;

Constants are integers (``-3``), rationals (``3/4``, ``1.5``), ISO dates
(``2018-12-13``) and double-quoted strings. ``denial``, ``fd`` and ``nd``
are reserved and cannot name variables. ``#`` comments run to end of line.
"""

from __future__ import annotations

import datetime
import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .errors import ConstraintError, ConstraintSyntaxError
from .model import COMPARISON_OPS, Schema, Value, compare

KEYWORDS = ("denial", "fd", "nd")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Value

    def __str__(self) -> str:
        return format_constant(self.value)


Term = Union[Var, Const]


@dataclass(frozen=True)
class RelationAtom:
    relation: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Comparison:
    left: Term
    op: str
    right: Term

    def __str__(self) -> str:
        return f"{self.left} {self.op} {self.right}"

    def variables(self) -> set[str]:
        return {t.name for t in (self.left, self.right) if isinstance(t, Var)}


@dataclass(frozen=True)
class DenialConstraint:
    name: str
    atoms: tuple[RelationAtom, ...]
    phi: tuple[tuple[Comparison, ...], ...] = ()

    @property
    def arity(self) -> int:
        return len(self.atoms)

    def atom_variables(self) -> set[str]:
        return {t.name for a in self.atoms for t in a.args if isinstance(t, Var)}

    def renamed(self, name: str) -> "DenialConstraint":
        return DenialConstraint(name, self.atoms, self.phi)

    def __str__(self) -> str:
        return format_constraint(self)


class ConstraintSet:
    """Ordered collection of uniquely named denial constraints."""

    def __init__(self, constraints=()):
        self.constraints: tuple[DenialConstraint, ...] = tuple(constraints)
        self._by_name = {}
        for c in self.constraints:
            if c.name in self._by_name:
                raise ConstraintError(f"duplicate constraint name {c.name!r}")
            self._by_name[c.name] = c

    def __iter__(self) -> Iterator[DenialConstraint]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def __contains__(self, name) -> bool:
        return name in self._by_name

    def __getitem__(self, name: str) -> DenialConstraint:
        try:
            return self._by_name[name]
        except KeyError:
            raise ConstraintError(f"unknown constraint {name!r}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, ConstraintSet) and self.constraints == other.constraints

    def __hash__(self) -> int:
        return hash(self.constraints)

    def __repr__(self) -> str:
        return f"ConstraintSet({', '.join(c.name for c in self.constraints)})"

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.constraints)

    def only(self, names) -> "ConstraintSet":
        keep = set(names)
        for n in keep:
            self[n]
        return ConstraintSet(c for c in self.constraints if c.name in keep)

    def without(self, names) -> "ConstraintSet":
        drop = {names} if isinstance(names, str) else set(names)
        return ConstraintSet(c for c in self.constraints if c.name not in drop)

    def union(self, other: "ConstraintSet") -> "ConstraintSet":
        """Union by name; a name bound to two different bodies is an error."""
        out = list(self.constraints)
        for c in other:
            if c.name in self._by_name:
                if self._by_name[c.name] != c:
                    raise ConstraintError(f"constraint {c.name!r} defined differently in the two sets")
                continue
            out.append(c)
        return ConstraintSet(out)


# -- formatting -------------------------------------------------------------

def format_constant(v: Value) -> str:
    if v.kind == "int":
        return str(v.v)
    if v.kind == "rational":
        q = v.v
        return f"{q.numerator}/{q.denominator}"
    if v.kind == "date":
        return v.v.isoformat()
    return json.dumps(v.v, ensure_ascii=False)


def format_constraint(c: DenialConstraint) -> str:
    atoms = ", ".join(map(str, c.atoms))
    phi = " | ".join(" & ".join(map(str, conj)) for conj in c.phi)
    return f"denial {c.name}: {atoms} -> {phi}".rstrip()


_LOGIC_OPS = {"=": "=", "!=": "≠", "<": "<", "<=": "≤", ">": ">", ">=": "≥"}


def format_logic_form(c: DenialConstraint) -> str:
    """The disjunctive reading ``[¬R1(..) ∨ ... ∨ φ]``."""
    parts = [f"¬{a}" for a in c.atoms]
    for conj in c.phi:
        text = " ∧ ".join(f"{cmp.left} {_LOGIC_OPS[cmp.op]} {cmp.right}" for cmp in conj)
        parts.append(f"({text})" if len(conj) > 1 and len(c.phi) > 1 else text)
    return f"{c.name} = [" + " ∨ ".join(parts) + "]"


def pretty_print(cs: ConstraintSet, logic_form: bool = False) -> str:
    fmt = format_logic_form if logic_form else format_constraint
    return "".join(fmt(c) + "\n" for c in cs)


# -- tokenizer --------------------------------------------------------------

_TOKEN_SPEC = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("ARROW", r"->"),
    ("DATE", r"\d{4}-\d{2}-\d{2}(?![0-9])"),
    ("RATIONAL", r"-?\d+/\d+"),
    ("DECIMAL", r"-?\d+\.\d+"),
    ("INT", r"-?\d+"),
    ("STRING", r'"(?:[^"\\\n]|\\.)*"'),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("OP", r"!=|<=|>=|=|<|>"),
    ("PUNCT", r"[(),:|&]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{n}>{p})" for n, p in _TOKEN_SPEC))


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ConstraintSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# -- parser -----------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ConstraintSyntaxError(f"{msg} (found {found!r})", tok.line, tok.col)

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind, text=None) -> Token:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            self.error(f"expected {text or kind}")
        return self.next()

    def at(self, kind, text=None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_decl_start(self) -> bool:
        return self.tok.kind == "EOF" or (self.tok.kind == "NAME" and self.tok.text in KEYWORDS)

    def name(self, what) -> Token:
        t = self.tok
        if t.kind != "NAME":
            self.error(f"expected {what}")
        if t.text in KEYWORDS:
            self.error(f"reserved word cannot be used as {what}")
        return self.next()

    def file(self):
        decls = []
        while not self.at("EOF"):
            t = self.tok
            if t.kind != "NAME" or t.text not in KEYWORDS:
                self.error("expected 'denial', 'fd' or 'nd'")
            self.next()
            decls.append((t, getattr(self, "decl_" + t.text)()))
        return decls

    def decl_denial(self):
        name = self.name("constraint name")
        self.expect("PUNCT", ":")
        atoms = [self.atom()]
        while self.at("PUNCT", ","):
            self.next()
            atoms.append(self.atom())
        self.expect("ARROW")
        phi = []
        if not self.at_decl_start():
            phi.append(self.conj())
            while self.at("PUNCT", "|"):
                self.next()
                phi.append(self.conj())
            if not self.at_decl_start():
                self.error("expected '|', '&' or a new declaration")
        return ("denial", name, atoms, phi)

    def decl_fd(self):
        name = self.name("constraint name")
        self.expect("PUNCT", ":")
        rel = self.name("relation name")
        self.expect("PUNCT", ":")
        lhs = self.attrlist()
        self.expect("ARROW")
        rhs = self.name("attribute name")
        return ("fd", name, rel, lhs, rhs)

    def decl_nd(self):
        name = self.name("constraint name")
        self.expect("PUNCT", ":")
        rel = self.name("relation name")
        self.expect("PUNCT", ":")
        lhs = self.attrlist()
        self.expect("ARROW")
        bound = self.expect("INT")
        rhs = self.name("attribute name")
        return ("nd", name, rel, lhs, (bound, rhs))

    def attrlist(self):
        attrs = []
        if self.at("NAME"):
            attrs.append(self.name("attribute name"))
            while self.at("PUNCT", ","):
                self.next()
                attrs.append(self.name("attribute name"))
        return attrs

    def atom(self):
        rel = self.name("relation name")
        self.expect("PUNCT", "(")
        args = [self.term()]
        while self.at("PUNCT", ","):
            self.next()
            args.append(self.term())
        self.expect("PUNCT", ")")
        return (rel, args)

    def conj(self):
        cmps = [self.cmp()]
        while self.at("PUNCT", "&"):
            self.next()
            cmps.append(self.cmp())
        return cmps

    def cmp(self):
        left = self.term()
        op = self.expect("OP")
        right = self.term()
        return (left, op, right)

    def term(self):
        t = self.tok
        if t.kind == "NAME":
            self.name("variable")
            return ("var", t)
        if t.kind in ("INT", "RATIONAL", "DECIMAL", "DATE", "STRING"):
            self.next()
            return ("const", t)
        self.error("expected a variable or constant")


def _literal(tok: Token) -> Value:
    if tok.kind == "INT":
        return Value("int", int(tok.text))
    if tok.kind in ("RATIONAL", "DECIMAL"):
        try:
            return Value("rational", Fraction(tok.text))
        except ZeroDivisionError:
            raise ConstraintSyntaxError("zero denominator", tok.line, tok.col) from None
    if tok.kind == "DATE":
        try:
            return Value("date", datetime.date.fromisoformat(tok.text))
        except ValueError:
            raise ConstraintSyntaxError(f"invalid date {tok.text}", tok.line, tok.col) from None
    return Value("text", json.loads(tok.text))


def _fit(value: Value, kind: str) -> Value | None:
    """The constant as a value of ``kind``, or None if it cannot be one."""
    if value.kind == kind:
        return value
    if value.kind == "int" and kind == "rational":
        return Value("rational", Fraction(value.v))
    return None


def parse_constraints(text: str, schema: Schema) -> ConstraintSet:
    """Parse and validate a constraint file against ``schema``."""
    decls = _Parser(text).file()
    out = []
    for kw, d in decls:
        where = f"line {kw.line}"
        if d[0] == "denial":
            _, name, atoms, phi = d
            out.append(_build_denial(name.text, atoms, phi, schema, where))
        elif d[0] == "fd":
            _, name, rel, lhs, rhs = d
            out.append(_wrap(where, desugar_fd, schema, rel.text, [a.text for a in lhs],
                             rhs.text, name=name.text))
        else:
            _, name, rel, lhs, (bound, rhs) = d
            out.append(_wrap(where, desugar_nd, schema, rel.text, [a.text for a in lhs],
                             rhs.text, int(bound.text), name=name.text))
    try:
        return ConstraintSet(out)
    except ConstraintError as exc:
        raise ConstraintError(str(exc)) from None


def _wrap(where, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except ConstraintError as exc:
        raise ConstraintError(f"{where}: {exc}") from None
    except Exception as exc:  # unknown relation / attribute from the schema
        raise ConstraintError(f"{where}: {exc}") from None


def _build_denial(name, raw_atoms, raw_phi, schema, where) -> DenialConstraint:
    def fail(msg, tok=None):
        loc = f"line {tok.line}, column {tok.col}" if tok else where
        raise ConstraintError(f"{loc}: {msg} in constraint {name}")

    atoms = []
    var_kinds: dict[str, str] = {}
    for rel_tok, args in raw_atoms:
        if rel_tok.text not in schema:
            fail(f"unknown relation {rel_tok.text!r}", rel_tok)
        rs = schema[rel_tok.text]
        if len(args) != rs.arity:
            fail(f"{rs.name} takes {rs.arity} arguments, got {len(args)}", rel_tok)
        terms = []
        for attr, (kind, tok) in zip(rs.attributes, args):
            if kind == "var":
                prev = var_kinds.setdefault(tok.text, attr.kind)
                if prev != attr.kind:
                    fail(f"variable {tok.text} used as both {prev} and {attr.kind}", tok)
                terms.append(Var(tok.text))
            else:
                v = _fit(_literal(tok), attr.kind)
                if v is None:
                    fail(f"constant {tok.text} does not fit {rs.name}.{attr.name} ({attr.kind})", tok)
                terms.append(Const(v))
        atoms.append(RelationAtom(rs.name, tuple(terms)))

    phi = []
    for conj in raw_phi:
        cmps = []
        for (lk, lt), op, (rk, rt) in conj:
            sides = []
            for kind, tok in ((lk, lt), (rk, rt)):
                if kind == "var":
                    if tok.text not in var_kinds:
                        fail(f"variable {tok.text} does not occur in any atom", tok)
                    sides.append((Var(tok.text), var_kinds[tok.text]))
                else:
                    lit = _literal(tok)
                    sides.append((Const(lit), lit.kind))
            (l, lkind), (r, rkind) = sides
            if lkind != rkind:
                # an integer literal may stand for a rational
                if isinstance(l, Const) and _fit(l.value, rkind) is not None:
                    l, lkind = Const(_fit(l.value, rkind)), rkind
                elif isinstance(r, Const) and _fit(r.value, lkind) is not None:
                    r, rkind = Const(_fit(r.value, lkind)), lkind
                else:
                    fail(f"cannot compare {lkind} with {rkind}", op)
            cmps.append(Comparison(l, op.text, r))
        phi.append(tuple(cmps))
    return DenialConstraint(name, tuple(atoms), tuple(phi))


def validate_constraint(c: DenialConstraint, schema: Schema) -> None:
    """Check a programmatically built constraint against the schema."""
    if not c.atoms:
        raise ConstraintError(f"{c.name}: a denial constraint needs at least one atom")
    kinds: dict[str, str] = {}
    for a in c.atoms:
        rs = schema[a.relation]
        if len(a.args) != rs.arity:
            raise ConstraintError(f"{c.name}: {rs.name} takes {rs.arity} arguments")
        for attr, t in zip(rs.attributes, a.args):
            if isinstance(t, Var):
                if kinds.setdefault(t.name, attr.kind) != attr.kind:
                    raise ConstraintError(f"{c.name}: variable {t.name} has two types")
            elif t.value.kind != attr.kind:
                raise ConstraintError(f"{c.name}: constant {t} does not fit {rs.name}.{attr.name}")
    for conj in c.phi:
        for cmp in conj:
            if cmp.op not in COMPARISON_OPS:
                raise ConstraintError(f"{c.name}: unknown operator {cmp.op}")
            ks = []
            for t in (cmp.left, cmp.right):
                if isinstance(t, Var):
                    if t.name not in kinds:
                        raise ConstraintError(f"{c.name}: variable {t.name} does not occur in any atom")
                    ks.append(kinds[t.name])
                else:
                    ks.append(t.value.kind)
            if ks[0] != ks[1]:
                raise ConstraintError(f"{c.name}: cannot compare {ks[0]} with {ks[1]}")


# -- sugar ------------------------------------------------------------------

def _shared_atoms(schema, relation, lhs, copies):
    """``copies`` atoms over ``relation`` sharing variables on ``lhs``.

    Variables are numbered x1, x2, ... left to right, as in the usual
    textbook rendering of functional dependencies.
    """
    rs = schema[relation]
    lhs_pos = {rs.position(a) for a in lhs}
    counter = 0
    shared: dict[int, Var] = {}
    atoms = []
    for _ in range(copies):
        args = []
        for i in range(rs.arity):
            if i in lhs_pos and i in shared:
                args.append(shared[i])
                continue
            counter += 1
            v = Var(f"x{counter}")
            if i in lhs_pos:
                shared[i] = v
            args.append(v)
        atoms.append(RelationAtom(rs.name, tuple(args)))
    return rs, atoms


def desugar_fd(schema: Schema, relation: str, lhs, rhs: str, name: str = "fd") -> DenialConstraint:
    """``relation: lhs -> rhs`` as a two-atom denial constraint."""
    return desugar_nd(schema, relation, lhs, rhs, 1, name=name)


def desugar_nd(schema: Schema, relation: str, lhs, rhs: str, bound: int,
               name: str = "nd") -> DenialConstraint:
    """At most ``bound`` distinct ``rhs`` values per ``lhs`` value.

    ``bound + 1`` atoms share the ``lhs`` variables; phi is the disjunction of
    pairwise equalities between their ``rhs`` variables. ``bound == 1`` is a
    functional dependency.
    """
    if bound < 1:
        raise ConstraintError(f"{name}: numerical dependency bound must be at least 1")
    lhs = list(lhs)
    if len(set(lhs)) != len(lhs):
        raise ConstraintError(f"{name}: repeated attribute on the left-hand side")
    rs = schema[relation]
    for a in lhs + [rhs]:
        rs.position(a)
    if rhs in lhs:
        raise ConstraintError(f"{name}: {rhs} appears on both sides")
    rs, atoms = _shared_atoms(schema, relation, lhs, bound + 1)
    y = rs.position(rhs)
    ys = [a.args[y] for a in atoms]
    phi = tuple((Comparison(ys[i], "=", ys[j]),)
                for i in range(len(ys)) for j in range(i + 1, len(ys)))
    return DenialConstraint(name, tuple(atoms), phi)


def evaluate_phi(phi, env) -> bool:
    """Truth of a DNF ``phi`` under a variable environment (name -> Value)."""
    for conj in phi:
        if all(compare(_val(c.left, env), _val(c.right, env), c.op) for c in conj):
            return True
    return False


def _val(term, env) -> Value:
    return env[term.name] if isinstance(term, Var) else term.value
