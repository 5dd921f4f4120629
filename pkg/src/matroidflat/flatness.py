"""The Δ function on collections of flats, n-flatness and flatness degree.

For a collection C = (F_i : i in I) of flats,

    Δ(C) = sum over S ⊆ I of (-1)^|S| r(F_S),

with F_S the intersection of the members indexed by S and F_∅ their union.
A matroid is n-flat when every collection of at most n flats has Δ <= 0; its
flatness degree is the largest such n (``math.inf`` when there is none).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels as K
from .core import Matroid
from .errors import GuardExceeded, InternalConsistencyError, InvalidArgumentError

OMEGA = math.inf
DELTA_GUARD = 20
DEFAULT_BUDGET = 10_000_000
SEARCH_SPACE = "antichains of distinct cyclic flats"


class NonFlatMember(InvalidArgumentError):
    def __init__(self, ground, mask):
        self.mask = mask
        super().__init__(f"collection member {ground.format(mask)} is not a flat")


@dataclass(frozen=True)
class FlatCollection:
    """An indexed multiset of flats of ``matroid`` (duplicates are kept)."""

    matroid: Matroid
    members: tuple

    def __post_init__(self):
        m = self.matroid
        masks = tuple(m.ground.mask(x) for x in self.members)
        for x in masks:
            if not m.is_flat(x):
                raise NonFlatMember(m.ground, x)
        object.__setattr__(self, "members", masks)

    @classmethod
    def of(cls, matroid, *members):
        return cls(matroid, tuple(members))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def with_members(self, members):
        return FlatCollection(self.matroid, tuple(members))

    @property
    def union(self):
        u = 0
        for f in self.members:
            u |= f
        return u

    def labels(self):
        return [self.matroid.ground.labels_of(f) for f in self.members]


def delta(c: FlatCollection, max_size=DELTA_GUARD) -> int:
    """Exact Δ(C) by the full signed sum over all 2^|C| index subsets."""
    k = len(c)
    if k > max_size:
        raise GuardExceeded(f"Δ over {k} flats needs 2^{k} terms; guard is {max_size}")
    inter = np.array([-1], dtype=np.int64)
    odd = np.array([False])
    for f in c.members:
        inter = np.concatenate([inter, inter & np.int64(f)])
        odd = np.concatenate([odd, ~odd])
    inter[0] = c.union
    r = c.matroid.table[inter].astype(np.int64)
    return int(np.where(odd, -r, r).sum())


@dataclass(frozen=True)
class FlatnessWitness:
    collection: FlatCollection
    delta_value: int

    def to_json(self):
        return {"members": self.collection.labels(), "delta": self.delta_value}


@dataclass(frozen=True)
class FlatnessDegreeResult:
    """``degree`` is an int, :data:`OMEGA`, or None when the search was cut
    short; ``checked_up_to`` is the largest size for which every collection in
    the search space was examined."""

    degree: float | int | None
    witness: FlatnessWitness | None
    certified: bool
    checked_up_to: int
    scope: dict = field(default_factory=dict)

    @property
    def is_omega(self):
        return self.degree == OMEGA

    def display(self):
        if self.degree is None:
            return f">= {self.checked_up_to} (guard-truncated, uncertified)"
        if self.is_omega:
            return "ω (certified)"
        return str(self.degree)

    def to_json(self):
        if self.degree is None:
            deg = None
        elif self.is_omega:
            deg = "omega"
        else:
            deg = int(self.degree)
        return {
            "degree": deg,
            "certified": self.certified,
            "lower_bound": self.checked_up_to,
            "witness": self.witness.to_json() if self.witness else None,
            "certificate_scope": self.scope,
        }


class _Search(NamedTuple):
    outcome: str  # "violation" | "exhausted" | "budget" | "bounded"
    checked: int
    witness: FlatnessWitness | None
    nodes: int


def _cyclic_layout(m: Matroid):
    flats = m.flats()
    cm = m.cyclic_flats()
    cyc = np.searchsorted(flats, cm).astype(np.int64)
    sub = (cm[:, None] & ~cm[None, :]) == 0
    return flats, cyc, cm, sub | sub.T


def _search(m: Matroid, max_size=None, budget=DEFAULT_BUDGET, backend=None) -> _Search:
    flats, cyc, cm, comparable = _cyclic_layout(m)
    used = 0
    k = 1
    while max_size is None or k <= max_size:
        status, chosen, nodes = K.antichain_level(
            m.table, flats, cyc, comparable, k, max(budget - used, 0), backend
        )
        used += nodes
        if status == 1:
            coll = FlatCollection(m, tuple(int(cm[i]) for i in chosen))
            return _Search("violation", k - 1, FlatnessWitness(coll, delta(coll)), used)
        if status == 2:
            return _Search("exhausted", k - 1, None, used)
        if status == 3:
            return _Search("budget", k - 1, None, used)
        k += 1
    return _Search("bounded", max_size, None, used)


def _scope(s: _Search, budget, n_cyclic):
    return {
        "search_space": SEARCH_SPACE,
        "cyclic_flats": n_cyclic,
        "max_size_checked": s.checked,
        "nodes": s.nodes,
        "budget": budget,
        "complete": s.outcome in ("violation", "exhausted"),
    }


@dataclass(frozen=True)
class NFlatResult:
    holds: bool
    n: int
    witness: FlatnessWitness | None = None

    def __bool__(self):
        return self.holds


def is_n_flat(m: Matroid, n: int, budget=DEFAULT_BUDGET, backend=None) -> NFlatResult:
    """Decide whether every collection of at most ``n`` flats has Δ <= 0.

    Only antichains of distinct cyclic flats are searched: nested members
    and duplicates can be dropped without changing Δ, and every member can be
    replaced by a cyclic flat without lowering Δ or the collection size.  A
    failing answer carries a smallest, lexicographically first witness.
    """
    if n < 1:
        raise InvalidArgumentError("n must be at least 1")
    s = _search(m, max_size=n, budget=budget, backend=backend)
    if s.outcome == "budget":
        raise GuardExceeded(f"n-flat search exhausted its budget of {budget} nodes after size {s.checked}")
    if s.outcome == "violation":
        return NFlatResult(False, n, s.witness)
    return NFlatResult(True, n)


def flatness_degree(m: Matroid, budget=DEFAULT_BUDGET, max_size=None, backend=None) -> FlatnessDegreeResult:
    """φ(M) by iterative deepening over collection size.

    The result is certified when a violation is found or when no antichain
    of the next size exists.  Running out of ``budget`` nodes or reaching
    ``max_size`` gives an uncertified lower bound instead of ω.
    """
    s = _search(m, max_size=max_size, budget=budget, backend=backend)
    scope = _scope(s, budget, len(m.cyclic_flats()))
    if s.outcome == "violation":
        return FlatnessDegreeResult(len(s.witness.collection) - 1, s.witness, True, s.checked, scope)
    if s.outcome == "exhausted":
        return FlatnessDegreeResult(OMEGA, None, True, s.checked, scope)
    return FlatnessDegreeResult(None, None, False, s.checked, scope)


def is_totally_flat(m: Matroid, budget=DEFAULT_BUDGET, backend=None) -> bool:
    res = flatness_degree(m, budget=budget, backend=backend)
    if not res.certified:
        raise GuardExceeded(f"totally-flat search truncated after size {res.checked_up_to}")
    return res.is_omega


# ---------------------------------------------------------------------------
# reductions

def reduce_nested(c: FlatCollection) -> FlatCollection:
    """Drop members contained in another member (duplicates included) until
    the collection is an antichain.  Δ is unchanged by each removal."""
    members = list(c.members)
    changed = True
    while changed:
        changed = False
        for i, f in enumerate(members):
            if any(j != i and f & ~g == 0 for j, g in enumerate(members)):
                del members[i]
                changed = True
                break
    return c.with_members(members)


def _first_local_coloop(m: Matroid, f: int):
    rf = m.table[f]
    x = f
    while x:
        low = x & -x
        if m.table[f ^ low] < rf:
            return low
        x ^= low
    return 0


def cyclify(c: FlatCollection) -> FlatCollection:
    """Replace members by cyclic flats without lowering Δ or changing size.

    While some member F has a coloop e of its restriction: if e is also a
    coloop of the union, remove e from every member containing it; otherwise
    remove e from F alone.
    """
    m = c.matroid
    members = list(c.members)
    while True:
        hit = None
        for i, f in enumerate(members):
            e = _first_local_coloop(m, f)
            if e:
                hit = (i, e)
                break
        if hit is None:
            break
        i, e = hit
        u = 0
        for f in members:
            u |= f
        if m.table[u ^ e] < m.table[u]:
            touched = [j for j, f in enumerate(members) if f & e]
        else:
            touched = [i]
        for j in touched:
            members[j] &= ~e
            if not m.is_flat(members[j]):
                raise InternalConsistencyError(
                    f"removing coloop {m.ground.format(e)} produced non-flat {m.ground.format(members[j])}"
                )
    return c.with_members(members)


def saturate(c: FlatCollection) -> FlatCollection:
    """Grow members until each lies in the closure of the union of the others.

    While some F_i has an element x outside cl(union of the rest), the first
    other member F_j is replaced by cl(F_j + x).  Each step raises the total
    rank of the members, so the loop terminates; Δ never decreases.
    """
    if len(c) < 2:
        raise InvalidArgumentError("saturate needs at least two members")
    m = c.matroid
    members = list(c.members)
    limit = len(members) * m.full_rank + 1
    for _ in range(limit + 1):
        step = None
        for i, f in enumerate(members):
            rest = 0
            for j, g in enumerate(members):
                if j != i:
                    rest |= g
            outside = f & ~m.closure(rest)
            if outside:
                step = (i, outside & -outside)
                break
        if step is None:
            return c.with_members(members)
        i, x = step
        j = 0 if i != 0 else 1
        members[j] = m.closure(members[j] | x)
    raise InternalConsistencyError("saturate did not terminate within its rank bound")


# ---------------------------------------------------------------------------

def binom(a, b):
    """C(a, b) with C(a, b) = 0 whenever b < 0, a < 0 or b > a."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


class IdentityCheck(NamedTuple):
    holds: bool
    lhs: int
    rhs: int


def binomial_identity_check(n, l, m) -> IdentityCheck:
    """Compare sum_{k=0..m} (-1)^k C(n-k, l) C(m, k) with C(n-m, l-m)."""
    lhs = sum((-1) ** k * binom(n - k, l) * binom(m, k) for k in range(m + 1))
    rhs = binom(n - m, l - m)
    return IdentityCheck(lhs == rhs, lhs, rhs)
