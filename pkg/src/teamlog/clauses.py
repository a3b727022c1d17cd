"""Clause classes: per-clause tags, the starred rule table and class summaries."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

COLUMNS = ("U", "I2C", "2C", "H", "DH", "DH1")
ALL = frozenset(COLUMNS)


class ClauseClass(Enum):
    UNIT = "Unit"
    I2C = "Implicative2CNF"
    TWO_CNF = "TwoCNF"
    HORN = "Horn"
    DUAL_HORN = "DualHorn"
    ONE_EDH = "OneEDH"
    DNF_BLOCK = "DNFBlock"
    GENERAL = "General"


def clause_tags(lits) -> frozenset:
    """Syntactically verified tags of one clause.

    DH1 marks the clause shapes admitted in a 1-EDH formula (a unit, or one
    negative literal with at least one positive); whether a whole clause set
    is 1-EDH is decided separately by ``validate_1edh``.
    """
    return _shape_tags(len(lits), sum(1 for l in lits if l > 0))


@lru_cache(maxsize=None)
def _shape_tags(size: int, pos: int) -> frozenset:
    neg = size - pos
    tags = set()
    if size == 1:
        tags.add("U")
    if size <= 2:
        tags.add("2C")
    if pos <= 1:
        tags.add("H")
    if neg <= 1:
        tags.add("DH")
    if {"2C", "H", "DH"} <= tags:
        tags.add("I2C")
    if size == 1 or (neg == 1 and pos >= 1):
        tags.add("DH1")
    return frozenset(tags)


_S = frozenset
# Starred class columns of the rule table, keyed by rule tag.
STARRED = {
    "I.1": ALL,
    "I.2": ALL,
    "FO": ALL,
    "E": _S({"DH", "DH1"}),
    "A": _S({"I2C", "2C", "H", "DH"}),
    "and.1": _S({"I2C", "2C", "H", "DH"}),
    "and.2": _S({"I2C", "2C", "H", "DH", "DH1"}),
    "or.1": _S({"DH", "DH1"}),
    "or.2": _S({"I2C", "2C", "H", "DH", "DH1"}),
    "or.3": _S({"2C", "DH", "DH1"}),
    "or.4": ALL,
    "bor.1": _S({"DH"}),
    "bor.2": _S({"2C", "DH"}),
    "inc": _S({"DH", "DH1"}),
    "anon": _S({"DH", "DH1"}),
    "dep": _S({"2C", "H"}),
    "indep": _S(),
    "excl": _S({"2C", "H"}),
    "const": ALL,
    "block": _S({"I2C", "2C", "H", "DH", "DH1"}),
}

# What the emitted blocks actually guarantee.  Two cells differ from the
# table above: (or.3) needs positive two-literal clauses, which no 1-EDH
# formula contains, and a sound (bor.1) needs three-literal Horn clauses for
# the x-block condition (a dual-Horn encoding would make the block
# disjunction of two FO formulas closed under unions, which it is not).
VERIFIED = dict(STARRED)
VERIFIED["or.3"] = _S({"2C", "DH"})
VERIFIED["bor.1"] = _S()

ALL_RULES = tuple(STARRED)

LABELS = {"U": "unit", "I2C": "implicative-2CNF", "2C": "2CNF", "H": "Horn",
          "DH": "dual-Horn", "DH1": "1-EDH"}


@dataclass(frozen=True)
class ClassSummary:
    """Tags shared by every clause of a set; DH1 only if the set is 1-EDH."""

    tags: frozenset
    dnf: bool = False

    @property
    def primary(self) -> ClauseClass:
        t = self.tags
        if self.dnf:
            return ClauseClass.DNF_BLOCK
        if "U" in t:
            return ClauseClass.UNIT
        if "I2C" in t:
            return ClauseClass.I2C
        if "DH1" in t:
            return ClauseClass.ONE_EDH
        if "DH" in t:
            return ClauseClass.DUAL_HORN
        if "2C" in t:
            return ClauseClass.TWO_CNF
        if "H" in t:
            return ClauseClass.HORN
        return ClauseClass.GENERAL

    @property
    def label(self) -> str:
        t = self.tags
        if "U" in t:
            names = ["unit"]
        elif "I2C" in t:
            names = ["implicative-2CNF"]
        else:
            names = []
            if "DH1" in t:
                names.append("1-EDH")
            elif "DH" in t:
                names.append("dual-Horn")
            if "2C" in t:
                names.append("2CNF")
            if "H" in t:
                names.append("Horn")
        if not names:
            names = ["general"]
        if self.dnf:
            names.append("DNF")
        return ",".join(names)

    def __str__(self):
        return self.label


def summarize(clause_lists, dnf=False) -> ClassSummary:
    """Summary of a clause set given as literal sequences."""
    from .sat.edh import NotOneEdh, validate_1edh
    from .sat.cnf import Cnf

    clause_lists = [tuple(c) for c in clause_lists]
    tags = set(ALL)
    for c in clause_lists:
        tags &= clause_tags(c)
        if not tags:
            break
    if "DH1" in tags:
        n = max((abs(l) for c in clause_lists for l in c), default=0)
        try:
            validate_1edh(Cnf(n, clause_lists))
        except NotOneEdh:
            tags.discard("DH1")
    return ClassSummary(frozenset(tags), dnf)
