"""Contraction rank, pseudointersections, pseudomodularity and modularity.

With r(A/B) = r(A∪B) - r(B), a flat B0 ⊆ B is the pseudointersection of A and
B when, for every flat B1 ⊆ B, r(A/B1) = r(A/B) holds exactly when B0 ⊆ B1.
A matroid is pseudomodular when every ordered pair of flats has one.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernels as K
from .core import Matroid
from .errors import GuardExceeded, InternalConsistencyError, InvalidArgumentError

MAX_PAIR_FLATS = 5000


def contraction_rank(m: Matroid, a, b) -> int:
    a, b = m.ground.mask(a), m.ground.mask(b)
    return int(m.table[a | b]) - int(m.table[b])


@dataclass(frozen=True)
class PseudoResult:
    exists: bool
    pseudointersection: int | None = None
    violation: tuple | None = None

    def __bool__(self):
        return self.exists


def _require_flat(m, b, what="B"):
    if not m.is_flat(b):
        raise InvalidArgumentError(f"{what}={m.ground.format(b)} is not a flat")


def _flats_below(m: Matroid, b: int):
    f = m.flats()
    return f[(f & ~b) == 0]


def pseudointersection(m: Matroid, a, b) -> PseudoResult:
    """Pseudointersection of ``a`` (any subset) and the flat ``b``.

    T is the family of flats B1 ⊆ B with r(A/B1) = r(A/B); its intersection
    B0 is the only candidate.  If B0 is not in T, the first pair of T (in
    mask order) whose intersection leaves T is returned as the violation.
    """
    a, b = m.ground.mask(a), m.ground.mask(b)
    _require_flat(m, b)
    t = m.table
    target = int(t[a | b]) - int(t[b])
    down = _flats_below(m, b)
    in_t = (t[a | down].astype(int) - t[down]) == target
    fam = [int(x) for x in down[in_t]]
    b0 = b
    for x in fam:
        b0 &= x
    if int(t[a | b0]) - int(t[b0]) == target:
        return PseudoResult(True, pseudointersection=b0)
    members = set(fam)
    for i, b1 in enumerate(fam):
        for b2 in fam[i + 1:]:
            if b1 & b2 not in members:
                return PseudoResult(False, violation=(b1, b2))
    raise InternalConsistencyError("T is not closed under intersection but no violating pair was found")


@dataclass(frozen=True)
class PseudomodularityReport:
    """On failure, ``a``/``b`` is the first failing ordered flat pair and
    ``b1``/``b2`` the violating flats below ``b``; ``ranks`` holds
    r(A/B), r(A/B1), r(A/B2) and r(A/B1∩B2)."""

    pseudomodular: bool
    a: int | None = None
    b: int | None = None
    b1: int | None = None
    b2: int | None = None
    ranks: tuple | None = None

    def __bool__(self):
        return self.pseudomodular

    def describe(self, ground):
        if self.pseudomodular:
            return "pseudomodular"
        f = ground.format
        return (
            f"not pseudomodular: A={f(self.a)}, B={f(self.b)}, B1={f(self.b1)}, B2={f(self.b2)}; "
            f"r(A/B)={self.ranks[0]}, r(A/B1)={self.ranks[1]}, r(A/B2)={self.ranks[2]}, "
            f"r(A/B1∩B2)={self.ranks[3]}"
        )

    def to_json(self, ground):
        if self.pseudomodular:
            return {"pseudomodular": True, "witness": None}
        lab = ground.labels_of
        return {
            "pseudomodular": False,
            "witness": {
                "A": lab(self.a), "B": lab(self.b), "B1": lab(self.b1), "B2": lab(self.b2),
                "r(A/B)": self.ranks[0], "r(A/B1)": self.ranks[1],
                "r(A/B2)": self.ranks[2], "r(A/B1∩B2)": self.ranks[3],
            },
        }


def violation_report(m: Matroid, a: int, b: int, b1: int, b2: int) -> PseudomodularityReport:
    ranks = tuple(contraction_rank(m, a, x) for x in (b, b1, b2, b1 & b2))
    return PseudomodularityReport(False, a, b, b1, b2, ranks)


def _guard(m, max_flats):
    nf = len(m.flats())
    if nf > max_flats:
        raise GuardExceeded(f"{nf} flats exceeds the pair-scan guard of {max_flats}")


def is_pseudomodular(m: Matroid, max_flats=MAX_PAIR_FLATS, backend=None) -> PseudomodularityReport:
    """Scan ordered flat pairs (A outer, both in mask order) for the first
    pair without a pseudointersection."""
    _guard(m, max_flats)
    flats = m.flats()
    ai, bi = K.pseudomodular_scan(m.table, flats, backend)
    if ai < 0:
        return PseudomodularityReport(True)
    a, b = int(flats[ai]), int(flats[bi])
    res = pseudointersection(m, a, b)
    if res.exists:
        raise InternalConsistencyError("scan and pseudointersection disagree")
    return violation_report(m, a, b, *res.violation)


@dataclass(frozen=True)
class TripleWitness:
    a: int
    b: int
    c: int


def triple_form_check(m: Matroid, max_flats=MAX_PAIR_FLATS, backend=None):
    """Check that r(A/B) = r(A/C) = r(A/B∪C) forces r(A/B∩C) = r(A/B) for
    all flats A, B, C.  Returns ``(holds, witness)``."""
    _guard(m, max_flats)
    flats = m.flats()
    ai, bi, ci = K.triple_form_scan(m.table, flats, backend)
    if ai < 0:
        return True, None
    return False, TripleWitness(int(flats[ai]), int(flats[bi]), int(flats[ci]))


def reduce_to_rank_one(m: Matroid, a, b, max_steps=None):
    """From A ⋪ B, produce (A', B') with r(A'/B') = 1 and A' ⋪ B'.

    At contraction rank k > 1 with violation (B1, B2) and x the smallest
    element of A∖B, let C = (cl(B1+x) ∩ cl(B2+x)) ∖ (B1∩B2).  If C fails
    against B the pair (C, B) is returned; otherwise A is kept and B is
    replaced by cl(B+x), which lowers the contraction rank by one.
    """
    a, b = m.ground.mask(a), m.ground.mask(b)
    _require_flat(m, b)
    res = pseudointersection(m, a, b)
    if res.exists:
        raise InvalidArgumentError(
            f"A={m.ground.format(a)} has a pseudointersection with B={m.ground.format(b)}"
        )
    steps = max_steps if max_steps is not None else m.full_rank + 1
    for _ in range(steps):
        k = contraction_rank(m, a, b)
        if k == 1:
            break
        b1, b2 = res.violation
        rest = a & ~b
        x = rest & -rest
        c = (m.closure(b1 | x) & m.closure(b2 | x)) & ~(b1 & b2)
        cres = pseudointersection(m, c, b)
        if not cres.exists and contraction_rank(m, c, b) == 1:
            a, res = c, cres
            break
        b = m.closure(b | x)
        res = pseudointersection(m, a, b)
        if res.exists:
            raise InternalConsistencyError(
                f"reduction step lost the violation at B={m.ground.format(b)}"
            )
    if contraction_rank(m, a, b) != 1 or res.exists:
        raise InternalConsistencyError("rank-one reduction did not reach its postcondition")
    return a, b


def violating_triple(m: Matroid, a, b):
    """The three flats cl(A∪B1), cl(A∪B2), B built from a rank-one violation.

    ``(a, b)`` is first reduced with :func:`reduce_to_rank_one`; the returned
    members form a collection with positive Δ.
    """
    a, b = reduce_to_rank_one(m, a, b)
    b1, b2 = pseudointersection(m, a, b).violation
    return (m.closure(a | b1), m.closure(a | b2), b)


@dataclass(frozen=True)
class ModularityReport:
    modular: bool
    a: int | None = None
    b: int | None = None

    def __bool__(self):
        return self.modular

    def to_json(self, ground):
        if self.modular:
            return {"modular": True, "witness": None}
        return {"modular": False, "witness": {"A": ground.labels_of(self.a), "B": ground.labels_of(self.b)}}


def is_modular(m: Matroid, max_flats=MAX_PAIR_FLATS, backend=None) -> ModularityReport:
    """r(A) + r(B) = r(A∪B) + r(A∩B) for every pair of flats."""
    _guard(m, max_flats)
    flats = m.flats()
    ai, bi = K.modular_scan(m.table, flats, backend)
    if ai < 0:
        return ModularityReport(True)
    return ModularityReport(False, int(flats[ai]), int(flats[bi]))
