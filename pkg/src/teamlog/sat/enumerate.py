"""Flashlight enumeration of the projections of models onto a free block."""

from __future__ import annotations

from array import array
from typing import Iterator, Sequence

from ..clauses import clause_tags
from ..errors import ClassMismatch
from .. import kernels
from .cnf import Cnf


class FreeModelEnumerator:
    """Projections onto ``free`` of the models of a disjunction of CNFs.

    Free variables are branched in the given order, true first, so outputs
    come in lexicographic order with true before false.  Every extendability
    check (one test of the whole disjunction) counts as one call; ``gaps``
    records the calls spent before each output.
    """

    def __init__(self, disjuncts: Cnf | Sequence[Cnf], free=None, *, allow_general=False):
        if isinstance(disjuncts, Cnf):
            disjuncts = [disjuncts]
        self.disjuncts = list(disjuncts)
        if free is None:
            free = self.disjuncts[0].free if self.disjuncts else ()
        self.free = tuple(free)
        dual_horn = all("DH" in clause_tags(c) for d in self.disjuncts for c in d.clauses)
        if not dual_horn and not allow_general:
            raise ClassMismatch("enumeration needs dual-Horn disjuncts")
        self._kernel = kernels.dual_horn if dual_horn else kernels.dpll
        self.solver = "dualHorn" if dual_horn else "dpll"
        self._flat = [d.flat() for d in self.disjuncts]
        self.calls = 0
        self.gaps: list[int] = []

    def extendable(self, lits) -> bool:
        self.calls += 1
        for d, (base, starts) in zip(self.disjuncts, self._flat):
            extra_lits = array("i", lits)
            extra_starts = array("i", range(len(base) + 1, len(base) + len(lits) + 1))
            if self._kernel(d.num_vars, base + extra_lits, starts + extra_starts) is not None:
                return True
        return False

    def __iter__(self) -> Iterator[tuple[bool, ...]]:
        free, k = self.free, len(self.free)
        last = 0
        if not self.disjuncts or not self.extendable([]):
            return
        lits: list[int] = []
        while True:
            while len(lits) < k:
                v = free[len(lits)]
                lits.append(v)
                if not self.extendable(lits):
                    lits[-1] = -v
            yield tuple(l > 0 for l in lits)
            self.gaps.append(self.calls - last)
            last = self.calls
            found = False
            while lits:
                l = lits.pop()
                if l > 0:
                    lits.append(-l)
                    if self.extendable(lits):
                        found = True
                        break
                    lits.pop()
            if not found:
                return


def enumerate_free_models(c: Cnf | Sequence[Cnf], free=None, *, allow_general=False):
    """Yield each projection (a tuple of booleans aligned with ``free``) once."""
    return iter(FreeModelEnumerator(c, free, allow_general=allow_general))
