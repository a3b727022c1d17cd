"""Team-logic formulas: AST, parser, printer and syntactic classification.

Concrete syntax::

    R(x,y)  !R(x,y)  x = y  x != y  true  false
    dep(x1,..,xk ; y)  const(y)  indep(x.. | u.. | z..)
    incl(x.. ; y..)  anon(x.. ; y..)  excl(x.. ; y..)
    f /\\ g   f \\/ g   f \\/b{x} g   f \\/s{x} g   exists x f   forall x f

``/\\`` binds tighter than every disjunction, disjunctions associate to the
left and quantifiers extend as far right as possible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError


@dataclass(frozen=True)
class RelLit:
    rel: str
    positive: bool
    args: tuple[str, ...]


@dataclass(frozen=True)
class EqLit:
    positive: bool
    left: str
    right: str


@dataclass(frozen=True)
class Truth:
    value: bool


@dataclass(frozen=True)
class Dep:
    xs: tuple[str, ...]
    y: str


@dataclass(frozen=True)
class Const:
    y: str


@dataclass(frozen=True)
class Indep:
    """``xs`` independent of ``zs`` given ``us``."""

    xs: tuple[str, ...]
    us: tuple[str, ...]
    zs: tuple[str, ...]


@dataclass(frozen=True)
class Incl:
    xs: tuple[str, ...]
    ys: tuple[str, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("incl needs tuples of equal length")


@dataclass(frozen=True)
class Anon:
    xs: tuple[str, ...]
    ys: tuple[str, ...]


@dataclass(frozen=True)
class Excl:
    xs: tuple[str, ...]
    ys: tuple[str, ...]

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("excl needs tuples of equal length")


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class BlockOr:
    var: str
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class StrictBlockOr:
    var: str
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[
    RelLit, EqLit, Truth, Dep, Const, Indep, Incl, Anon, Excl,
    And, Or, BlockOr, StrictBlockOr, Exists, Forall,
]

LITERALS = (RelLit, EqLit, Truth)
ATOMS = (Dep, Const, Indep, Incl, Anon, Excl)
BINARY = (And, Or, BlockOr, StrictBlockOr)
QUANTIFIERS = (Exists, Forall)
TRUE = Truth(True)
FALSE = Truth(False)


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, QUANTIFIERS):
        return (f.body,)
    return ()


def atom_vars(f: Formula) -> tuple[str, ...]:
    """Variables mentioned by a literal or atom, in order."""
    if isinstance(f, RelLit):
        return f.args
    if isinstance(f, EqLit):
        return (f.left, f.right)
    if isinstance(f, Dep):
        return f.xs + (f.y,)
    if isinstance(f, Const):
        return (f.y,)
    if isinstance(f, Indep):
        return f.xs + f.us + f.zs
    if isinstance(f, (Incl, Anon, Excl)):
        return f.xs + f.ys
    return ()


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<bor>\\/(?P<kind>[bs])\{\s*(?P<bvar>[a-z][a-z0-9_]*)\s*\})
  | (?P<or>\\/)
  | (?P<and>/\\)
  | (?P<neq>!=)
  | (?P<op>[(),;|=!])
  | (?P<var>[a-z][a-z0-9_]*)
  | (?P<rel>[A-Z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_ATOM_WORDS = {"dep", "const", "indep", "incl", "anon", "excl"}
_KEYWORDS = _ATOM_WORDS | {"exists", "forall", "true", "false"}


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int
    extra: tuple = ()


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if m.group("bor"):
            toks.append(_Tok("bor", m.group(0), line, col, (m.group("kind"), m.group("bvar"))))
        elif kind == "ws":
            chunk = m.group(0)
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rfind("\n") + 1
        elif kind == "op":
            toks.append(_Tok(m.group(0), m.group(0), line, col))
        elif kind == "var" and m.group(0) in _KEYWORDS:
            toks.append(_Tok(m.group(0), m.group(0), line, col))
        else:
            toks.append(_Tok(kind, m.group(0), line, col))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok.kind != kind:
            want = kind if kind != "eof" else "end of input"
            got = tok.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok.line, tok.col)
        self.i += 1
        return tok

    def parse(self):
        f = self.disjunction()
        self.take("eof")
        return f

    def disjunction(self):
        f = self.conjunction()
        while self.peek().kind in ("or", "bor"):
            tok = self.take()
            g = self.conjunction()
            if tok.kind == "or":
                f = Or(f, g)
            elif tok.extra[0] == "b":
                f = BlockOr(tok.extra[1], f, g)
            else:
                f = StrictBlockOr(tok.extra[1], f, g)
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek().kind == "and":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok = self.peek()
        if tok.kind in ("exists", "forall"):
            self.take()
            var = self.take("var").text
            body = self.disjunction()
            return Exists(var, body) if tok.kind == "exists" else Forall(var, body)
        if tok.kind == "(":
            self.take()
            f = self.disjunction()
            self.take(")")
            return f
        return self.atom()

    def varlist(self, stops):
        names = []
        if self.peek().kind in stops:
            return tuple(names)
        names.append(self.take("var").text)
        while self.peek().kind == ",":
            self.take()
            names.append(self.take("var").text)
        return tuple(names)

    def atom(self):
        tok = self.take()
        if tok.kind == "true":
            return TRUE
        if tok.kind == "false":
            return FALSE
        if tok.kind == "!":
            rel = self.take("rel").text
            return RelLit(rel, False, self.relargs())
        if tok.kind == "rel":
            return RelLit(tok.text, True, self.relargs())
        if tok.kind == "var":
            op = self.take()
            if op.kind not in ("=", "neq"):
                raise ParseError(f"expected '=' or '!=', found {op.text or 'end of input'!r}",
                                 op.line, op.col)
            right = self.take("var").text
            return EqLit(op.kind == "=", tok.text, right)
        if tok.kind in _ATOM_WORDS:
            return self.dependency_atom(tok)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.col)

    def relargs(self):
        self.take("(")
        args = self.varlist((")",))
        self.take(")")
        return args

    def dependency_atom(self, tok):
        self.take("(")
        if tok.kind == "const":
            y = self.take("var").text
            self.take(")")
            return Const(y)
        if tok.kind == "indep":
            xs = self.varlist(("|",))
            self.take("|")
            us = self.varlist(("|",))
            self.take("|")
            zs = self.varlist((")",))
            self.take(")")
            return Indep(xs, us, zs)
        xs = self.varlist((";",))
        self.take(";")
        if tok.kind == "dep":
            y = self.take("var").text
            self.take(")")
            return Dep(xs, y)
        ys = self.varlist((")",))
        end = self.take(")")
        if tok.kind in ("incl", "excl") and len(xs) != len(ys):
            raise ParseError(f"{tok.kind} needs tuples of equal length", end.line, end.col)
        return {"incl": Incl, "anon": Anon, "excl": Excl}[tok.kind](xs, ys)


def parse_formula(text: str) -> Formula:
    """Parse concrete syntax into an AST; raises ParseError with a position."""
    return _Parser(text).parse()


# -- printing --------------------------------------------------------------

def _vars(names):
    return ",".join(names)


def format_formula(f: Formula) -> str:
    """Render ``f`` so that ``parse_formula(format_formula(f)) == f``."""
    if isinstance(f, RelLit):
        return f"{'' if f.positive else '!'}{f.rel}({_vars(f.args)})"
    if isinstance(f, EqLit):
        return f"{f.left} {'=' if f.positive else '!='} {f.right}"
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Dep):
        return f"dep({_vars(f.xs)} ; {f.y})"
    if isinstance(f, Const):
        return f"const({f.y})"
    if isinstance(f, Indep):
        return f"indep({_vars(f.xs)} | {_vars(f.us)} | {_vars(f.zs)})"
    if isinstance(f, (Incl, Anon, Excl)):
        word = {Incl: "incl", Anon: "anon", Excl: "excl"}[type(f)]
        return f"{word}({_vars(f.xs)} ; {_vars(f.ys)})"
    if isinstance(f, BINARY):
        op = {And: "/\\", Or: "\\/"}.get(type(f))
        if op is None:
            op = ("\\/b{%s}" if isinstance(f, BlockOr) else "\\/s{%s}") % f.var
        return f"{_wrap(f.left)} {op} {_wrap(f.right)}"
    word = "exists" if isinstance(f, Exists) else "forall"
    body = format_formula(f.body)
    if isinstance(f.body, BINARY):
        body = f"({body})"
    return f"{word} {f.var} {body}"


def _wrap(f):
    text = format_formula(f)
    return f"({text})" if isinstance(f, BINARY + QUANTIFIERS) else text


# -- structure -------------------------------------------------------------

def free_variables(f: Formula) -> tuple[str, ...]:
    """Free variables in order of first occurrence."""
    out: dict[str, None] = {}

    def walk(g, bound):
        if isinstance(g, QUANTIFIERS):
            walk(g.body, bound | {g.var})
            return
        if isinstance(g, (BlockOr, StrictBlockOr)) and g.var not in bound:
            out.setdefault(g.var)
        for v in atom_vars(g):
            if v not in bound:
                out.setdefault(v)
        for c in children(g):
            walk(c, bound)

    walk(f, frozenset())
    return tuple(out)


def subformulas(f: Formula) -> list[tuple[int, Formula]]:
    """Pre-order occurrence list; a subformula always follows its parents."""
    out = []

    def walk(g):
        out.append((len(out), g))
        for c in children(g):
            walk(c)

    walk(f)
    return out


def iter_nodes(f: Formula) -> Iterator[Formula]:
    for _, g in subformulas(f):
        yield g


def depth(f: Formula) -> int:
    cs = children(f)
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def is_fo(f: Formula) -> bool:
    if isinstance(f, LITERALS):
        return True
    if isinstance(f, (And, Or)):
        return is_fo(f.left) and is_fo(f.right)
    if isinstance(f, QUANTIFIERS):
        return is_fo(f.body)
    return False


def disjunction_width(f: Formula) -> float:
    """Width for FO(dep,|); any other construct counts as infinite."""
    if is_fo(f):
        return 0
    if isinstance(f, (Dep, Excl)):
        return 1
    if isinstance(f, And):
        return max(disjunction_width(f.left), disjunction_width(f.right))
    if isinstance(f, Or):
        return disjunction_width(f.left) + disjunction_width(f.right)
    if isinstance(f, Forall):
        return disjunction_width(f.body)
    return math.inf


def is_downward_closed(f: Formula) -> bool:
    """Sound syntactic test: dependence/exclusion/constancy logic plus block disjunctions."""
    if isinstance(f, LITERALS + (Dep, Const, Excl)):
        return True
    if isinstance(f, BINARY):
        return is_downward_closed(f.left) and is_downward_closed(f.right)
    if isinstance(f, QUANTIFIERS):
        return is_downward_closed(f.body)
    return False


def is_union_closed(f: Formula) -> bool:
    """Sound syntactic test: inclusion/anonymity logic."""
    if isinstance(f, LITERALS + (Incl, Anon)):
        return True
    if isinstance(f, (And, Or)):
        return is_union_closed(f.left) and is_union_closed(f.right)
    if isinstance(f, QUANTIFIERS):
        return is_union_closed(f.body)
    return False


def in_dual_horn_fragment(f: Formula) -> bool:
    """FO extended with block disjunction, inclusion, anonymity and constancy."""
    if isinstance(f, LITERALS + (Incl, Anon, Const)):
        return True
    if isinstance(f, (And, Or, BlockOr)):
        return in_dual_horn_fragment(f.left) and in_dual_horn_fragment(f.right)
    if isinstance(f, QUANTIFIERS):
        return in_dual_horn_fragment(f.body)
    return False


def in_weak_incl_fragment(f: Formula) -> bool:
    """phi ::= a | incl | anon | const | phi \\/ phi | phi /\\ a | exists x phi."""
    if isinstance(f, LITERALS + (Incl, Anon, Const)):
        return True
    if is_fo(f):
        return True
    if isinstance(f, Or):
        return in_weak_incl_fragment(f.left) and in_weak_incl_fragment(f.right)
    if isinstance(f, And):
        if is_fo(f.right):
            return in_weak_incl_fragment(f.left)
        if is_fo(f.left):
            return in_weak_incl_fragment(f.right)
        return False
    if isinstance(f, Exists):
        return in_weak_incl_fragment(f.body)
    return False


def in_weak_dep_excl_fragment(f: Formula) -> bool:
    """phi ::= a | dep | excl | phi /\\ phi | phi \\/ a | forall x phi."""
    if is_fo(f) or isinstance(f, (Dep, Excl)):
        return True
    if isinstance(f, And):
        return in_weak_dep_excl_fragment(f.left) and in_weak_dep_excl_fragment(f.right)
    if isinstance(f, Or):
        if is_fo(f.right):
            return in_weak_dep_excl_fragment(f.left)
        if is_fo(f.left):
            return in_weak_dep_excl_fragment(f.right)
        return False
    if isinstance(f, Forall):
        return in_weak_dep_excl_fragment(f.body)
    return False


def in_bc_indep(f: Formula) -> bool:
    """One independence atom closed under conjunction and disjunction with FO."""
    if isinstance(f, Indep):
        return True
    if isinstance(f, (And, Or)):
        if is_fo(f.left):
            return in_bc_indep(f.right)
        if is_fo(f.right):
            return in_bc_indep(f.left)
    return False


def in_fo_anon(f: Formula) -> bool:
    """FO extended with anonymity atoms."""
    if isinstance(f, LITERALS + (Anon,)):
        return True
    if isinstance(f, (And, Or)):
        return in_fo_anon(f.left) and in_fo_anon(f.right)
    if isinstance(f, QUANTIFIERS):
        return in_fo_anon(f.body)
    return False


@dataclass(frozen=True)
class FragmentLabel:
    is_fo: bool
    in_dual_horn_fragment: bool
    in_weak_incl_fragment: bool
    in_weak_dep_excl_fragment: bool
    in_bc_indep: bool
    disjunction_width: float
    downward_closed: bool
    union_closed: bool
    predicted_class: object

    @property
    def name(self) -> str:
        if self.is_fo:
            return "FO"
        if self.in_weak_dep_excl_fragment:
            return "FO(dep,|)_w"
        if self.disjunction_width <= 2:
            return "FO(dep,|)_dw2"
        if self.in_weak_incl_fragment:
            return "FO(incl,anon,const)_w"
        if self.in_dual_horn_fragment:
            return "FO(bor,incl,anon,const)"
        if self.in_bc_indep:
            return "BC(indep,FO)"
        return "general"

    def as_dict(self) -> dict:
        width = self.disjunction_width
        return {
            "fragment": self.name,
            "isFO": self.is_fo,
            "inDualHornFragment": self.in_dual_horn_fragment,
            "inWeakInclFragment": self.in_weak_incl_fragment,
            "inWeakDepExclFragment": self.in_weak_dep_excl_fragment,
            "inBCIndep": self.in_bc_indep,
            "disjunctionWidth": "inf" if width == math.inf else int(width),
            "downwardClosed": self.downward_closed,
            "unionClosed": self.union_closed,
            "predictedClass": self.predicted_class.label,
        }


def classify_fragment(f: Formula) -> FragmentLabel:
    from .compiler import predicted_summary

    return FragmentLabel(
        is_fo=is_fo(f),
        in_dual_horn_fragment=in_dual_horn_fragment(f),
        in_weak_incl_fragment=in_weak_incl_fragment(f),
        in_weak_dep_excl_fragment=in_weak_dep_excl_fragment(f),
        in_bc_indep=in_bc_indep(f),
        disjunction_width=disjunction_width(f),
        downward_closed=is_downward_closed(f),
        union_closed=is_union_closed(f),
        predicted_class=predicted_summary(f),
    )


def rewrite_block_disjunction(f: Formula, fresh=("u", "v", "w")) -> Formula:
    """Express a block disjunction of downward-closed formulas in dependence logic.

    phi \\/b{x} psi becomes
    exists u exists v exists w (dep(x;u) /\\ dep(x;v) /\\ dep(x;w)
        /\\ (u != v \\/ phi) /\\ (u != w \\/ psi) /\\ (u = v \\/ u = w));
    the strict variant also requires v != w.
    """
    if not isinstance(f, (BlockOr, StrictBlockOr)):
        raise ValueError("expected a block disjunction")
    if not (is_downward_closed(f.left) and is_downward_closed(f.right)):
        raise ValueError("both disjuncts must be downward closed")
    taken = set(free_variables(f)) | {g.var for g in iter_nodes(f) if isinstance(g, QUANTIFIERS)}
    u, v, w = (_fresh(name, taken) for name in fresh)
    x = f.var
    parts = [
        Dep((x,), u), Dep((x,), v), Dep((x,), w),
        Or(EqLit(False, u, v), f.left),
        Or(EqLit(False, u, w), f.right),
        Or(EqLit(True, u, v), EqLit(True, u, w)),
    ]
    if isinstance(f, StrictBlockOr):
        parts.append(EqLit(False, v, w))
    body = parts[0]
    for p in parts[1:]:
        body = And(body, p)
    return Exists(u, Exists(v, Exists(w, body)))


def _fresh(name, taken):
    cand, k = name, 0
    while cand in taken:
        k += 1
        cand = f"{name}{k}"
    taken.add(cand)
    return cand
