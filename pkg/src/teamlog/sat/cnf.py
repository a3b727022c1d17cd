"""CNF container and DIMACS reading/writing."""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from ..errors import ParseError


@dataclass(frozen=True, init=False)
class Cnf:
    """Clauses over variables 1..num_vars; ``free`` lists the projection block."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    free: tuple[int, ...] = ()
    _flat: list = field(default_factory=list, repr=False, compare=False)

    def __init__(self, num_vars, clauses, free=()):
        clauses = tuple(tuple(int(l) for l in c) for c in clauses)
        for c in clauses:
            for l in c:
                if l == 0 or abs(l) > num_vars:
                    raise ValueError(f"literal {l} out of range for {num_vars} variables")
        object.__setattr__(self, "num_vars", int(num_vars))
        object.__setattr__(self, "clauses", clauses)
        object.__setattr__(self, "free", tuple(free))
        object.__setattr__(self, "_flat", [])

    def flat(self) -> tuple[array, array]:
        """Literals and clause start offsets as C int arrays (cached)."""
        if not self._flat:
            lits, starts = array("i"), array("i", [0])
            for c in self.clauses:
                lits.extend(c)
                starts.append(len(lits))
            self._flat.append((lits, starts))
        return self._flat[0]

    def with_units(self, lits) -> "Cnf":
        """A copy with unit clauses appended; only the new literals are checked."""
        units = tuple((int(l),) for l in lits)
        for (l,) in units:
            if l == 0 or abs(l) > self.num_vars:
                raise ValueError(f"literal {l} out of range for {self.num_vars} variables")
        out = object.__new__(Cnf)
        object.__setattr__(out, "num_vars", self.num_vars)
        object.__setattr__(out, "clauses", self.clauses + units)
        object.__setattr__(out, "free", self.free)
        flat = []
        if self._flat:
            lits_, starts = self._flat[0]
            lits_, starts = array("i", lits_), array("i", starts)
            for (l,) in units:
                lits_.append(l)
                starts.append(len(lits_))
            flat.append((lits_, starts))
        object.__setattr__(out, "_flat", flat)
        return out

    def satisfied_by(self, true_vars) -> bool:
        true_vars = set(true_vars)
        return all(any((l > 0) == (abs(l) in true_vars) for l in c) for c in self.clauses)


def parse_dimacs(text: str) -> Cnf:
    """Read DIMACS CNF; a ``c free`` comment line sets the projection block."""
    num_vars = num_clauses = None
    clauses, current, free = [], [], ()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 2 and parts[0] == "c" and parts[1] == "free":
                try:
                    free = tuple(int(p) for p in parts[2:])
                except ValueError:
                    raise ParseError("bad free-variable list", lineno, 1) from None
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError("expected 'p cnf <vars> <clauses>'", lineno, 1)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer problem line", lineno, 1) from None
            continue
        if num_vars is None:
            raise ParseError("clause before problem line", lineno, 1)
        for tok in line.split():
            try:
                l = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno, raw.find(tok) + 1) from None
            if l == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(l) > num_vars:
                    raise ParseError(f"literal {l} exceeds {num_vars} variables", lineno, raw.find(tok) + 1)
                current.append(l)
    if num_vars is None:
        raise ParseError("missing problem line", 1, 1)
    if current:
        clauses.append(tuple(current))
    if num_clauses is not None and len(clauses) != num_clauses:
        raise ParseError(f"expected {num_clauses} clauses, found {len(clauses)}", 1, 1)
    return Cnf(num_vars, clauses, free)


def write_dimacs(cnf: Cnf, comments=()) -> str:
    lines = [f"c {c}" if c else "c" for c in comments]
    if cnf.free:
        lines.append("c free " + " ".join(map(str, cnf.free)))
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" if c else "0" for c in cnf.clauses)
    return "\n".join(lines) + "\n"
