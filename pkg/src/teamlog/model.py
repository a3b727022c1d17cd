"""Finite relational structures and teams."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from .errors import ModelError


@dataclass(frozen=True)
class Structure:
    """Domain labels plus relations stored as sets of index tuples."""

    domain: tuple[str, ...]
    relations: dict[str, frozenset] = field(default_factory=dict)
    arities: dict[str, int | None] = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise ModelError("the domain must be nonempty")
        if len(set(self.domain)) != len(self.domain):
            raise ModelError("duplicate domain labels")
        for name, tuples in self.relations.items():
            arity = self.arities.get(name)
            for t in tuples:
                if arity is not None and len(t) != arity:
                    raise ModelError(f"relation {name}: tuple {t} has wrong arity")
                if any(not 0 <= a < len(self.domain) for a in t):
                    raise ModelError(f"relation {name}: index out of range in {t}")

    def __hash__(self):
        return hash((self.domain, tuple(sorted(self.relations))))

    @property
    def size(self) -> int:
        return len(self.domain)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ModelError(f"unknown element {label!r}") from None

    @property
    def _index(self):
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {a: i for i, a in enumerate(self.domain)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def holds(self, rel: str, args: tuple[int, ...]) -> bool:
        try:
            tuples = self.relations[rel]
        except KeyError:
            raise ModelError(f"unknown relation {rel!r}") from None
        arity = self.arities.get(rel)
        if arity is not None and arity != len(args):
            raise ModelError(f"relation {rel} has arity {arity}, used with {len(args)}")
        return args in tuples

    def to_json(self) -> dict:
        rels = {}
        for name in sorted(self.relations):
            rows = sorted(self.relations[name])
            rels[name] = [[self.domain[a] for a in t] for t in rows]
        return {"domain": list(self.domain), "relations": rels}


def make_structure(domain: Iterable, relations: dict | None = None) -> Structure:
    """Build a structure from labels; relation tuples are given by label."""
    labels = tuple(str(a) for a in domain)
    index = {a: i for i, a in enumerate(labels)}
    rels, arities = {}, {}
    for name, tuples in (relations or {}).items():
        rows = set()
        arity = None
        for t in tuples:
            t = tuple(t)
            if arity is None:
                arity = len(t)
            elif len(t) != arity:
                raise ModelError(f"relation {name}: arity mismatch in {list(t)}")
            try:
                rows.add(tuple(index[str(a)] for a in t))
            except KeyError as e:
                raise ModelError(f"relation {name}: unknown element {e.args[0]!r}") from None
        rels[name] = frozenset(rows)
        arities[name] = arity
    return Structure(labels, rels, arities)


def _read_json(source):
    if isinstance(source, dict):
        return source
    text = source
    if isinstance(source, os.PathLike) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelError(f"invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ModelError("expected a JSON object")
    return data


def load_structure(source) -> Structure:
    """Load ``{"domain": [...], "relations": {"E": [[..], ..]}}`` from text, a path or a dict."""
    data = _read_json(source)
    extra = set(data) - {"domain", "relations"}
    if extra:
        raise ModelError(f"unknown keys in structure: {sorted(extra)}")
    if "domain" not in data or not isinstance(data["domain"], list):
        raise ModelError("structure needs a domain list")
    rels = data.get("relations", {})
    if not isinstance(rels, dict):
        raise ModelError("relations must be an object")
    return make_structure(data["domain"], rels)


@dataclass(frozen=True)
class Team:
    """A set of assignments over ``vars``; rows are index tuples kept sorted."""

    vars: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(sorted(set(tuple(r) for r in self.rows)))
        for r in rows:
            if len(r) != len(self.vars):
                raise ModelError(f"row {r} does not match variables {self.vars}")
        if len(set(self.vars)) != len(self.vars):
            raise ModelError("duplicate team variables")
        object.__setattr__(self, "rows", rows)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def row_set(self) -> frozenset:
        return frozenset(self.rows)

    def to_json(self, structure: Structure) -> dict:
        return {"vars": list(self.vars),
                "rows": [[structure.domain[a] for a in r] for r in self.rows]}


def make_team(vars, rows) -> Team:
    return Team(tuple(vars), tuple(tuple(r) for r in rows))


def load_team(source, structure: Structure) -> Team:
    """Load ``{"vars": [...], "rows": [[..], ..]}`` with rows given by element label."""
    data = _read_json(source)
    extra = set(data) - {"vars", "rows"}
    if extra:
        raise ModelError(f"unknown keys in team: {sorted(extra)}")
    vars_ = data.get("vars", [])
    rows = data.get("rows", [])
    if not isinstance(vars_, list) or not isinstance(rows, list):
        raise ModelError("team needs vars and rows lists")
    out = []
    for row in rows:
        if not isinstance(row, list) or len(row) != len(vars_):
            raise ModelError(f"row {row} does not match variables {vars_}")
        out.append(tuple(structure.index(str(a)) for a in row))
    return make_team(vars_, out)


def full_team(structure: Structure, vars) -> Team:
    vars = tuple(vars)
    return Team(vars, tuple(product(range(structure.size), repeat=len(vars))))


def restrict_team(team: Team, keep) -> Team:
    keep = set(keep)
    missing = keep - set(team.vars)
    if missing:
        raise ModelError(f"variables {sorted(missing)} not in team")
    idx = [i for i, v in enumerate(team.vars) if v in keep]
    return Team(tuple(team.vars[i] for i in idx), tuple(tuple(r[i] for i in idx) for r in team.rows))


def team_order_key(rows, universe) -> tuple:
    """Lexicographic key over membership in ``universe`` order, members first.

    Two teams compare by the first universe row on which they differ; the
    team containing that row comes first.
    """
    rows = set(rows)
    return tuple(0 if s in rows else 1 for s in universe)
