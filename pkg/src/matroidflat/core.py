"""Ground sets, subsets-as-bitmasks and the table-backed :class:`Matroid`."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

import numpy as np

from . import _kernels as K
from .errors import AxiomViolation, GuardExceeded, InvalidArgumentError

DEFAULT_CAP = 24

SubsetLike = Union[int, np.integer, Iterable]


@dataclass(frozen=True)
class GroundSet:
    """Finite labelled ground set; element ``i`` is bit ``1 << i`` of a mask."""

    labels: tuple
    cap: int = field(default=DEFAULT_CAP, compare=False)

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            raise InvalidArgumentError(f"duplicate labels in ground set: {list(labels)}")
        if len(labels) > self.cap:
            raise GuardExceeded(
                f"ground set has {len(labels)} elements; enumeration cap is {self.cap}"
            )

    @classmethod
    def of_size(cls, n, cap=DEFAULT_CAP):
        return cls(tuple(str(i) for i in range(n)), cap=cap)

    @property
    def size(self):
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    @property
    def full(self):
        return (1 << len(self.labels)) - 1

    @cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label):
        try:
            return self._index[str(label)]
        except KeyError:
            raise InvalidArgumentError(f"unknown element label {label!r}") from None

    def mask(self, items: SubsetLike) -> int:
        """Bitmask for ``items``: an int mask (validated) or an iterable of labels."""
        if isinstance(items, (int, np.integer)) and not isinstance(items, bool):
            m = int(items)
            if m < 0 or m & ~self.full:
                raise InvalidArgumentError(f"mask {m:#x} is outside the ground set of size {self.size}")
            return m
        if isinstance(items, str):
            items = [items]
        m = 0
        for x in items:
            m |= 1 << self.index(x)
        return m

    def labels_of(self, mask: int) -> list:
        return [lab for i, lab in enumerate(self.labels) if (mask >> i) & 1]

    def indices_of(self, mask: int) -> list:
        return [i for i in range(self.size) if (mask >> i) & 1]

    def format(self, mask: int) -> str:
        return "{" + ",".join(self.labels_of(mask)) + "}"


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of :meth:`Matroid.check_axioms`; falsy when an axiom fails."""

    ok: bool
    axiom: str | None = None
    a: int | None = None
    b: int | None = None
    values: dict | None = None

    def __bool__(self):
        return self.ok

    def describe(self, ground: GroundSet | None = None):
        if self.ok:
            return "rank axioms R1-R3 hold"
        fmt = ground.format if ground is not None else (lambda m: f"{m:#x}")
        return f"{self.axiom} violated by A={fmt(self.a)}, B={fmt(self.b)}: {self.values}"


def _report(table, code, a, b):
    if code == 0:
        return AxiomReport(True)
    r = lambda m: int(table[m])  # noqa: E731
    if code == 1:
        return AxiomReport(False, "R1", a, b, {"r(A)": r(a), "|A|": bin(a).count("1")})
    if code == 2:
        return AxiomReport(False, "R2", a, b, {"r(A)": r(a), "r(B)": r(b)})
    return AxiomReport(
        False, "R3", a, b,
        {"r(A)": r(a), "r(B)": r(b), "r(A|B)": r(a | b), "r(A&B)": r(a & b)},
    )


class Matroid:
    """A matroid given by its full rank table.

    ``table[mask]`` is the rank of the subset encoded by ``mask``.  The table
    is copied and frozen; derived data (flats, closures, ...) is computed
    lazily and cached, so two queries of the same value always agree.

    Subset arguments may be int masks or iterables of element labels.
    """

    def __init__(self, ground: GroundSet, table, *, validate=False, name=None):
        if not isinstance(ground, GroundSet):
            ground = GroundSet(tuple(ground))
        table = np.array(table, dtype=K.RANK_DTYPE).reshape(-1)
        if table.shape[0] != 1 << ground.size:
            raise InvalidArgumentError(
                f"rank table has {table.shape[0]} entries, expected 2^{ground.size}"
            )
        table.flags.writeable = False
        self.ground = ground
        self.table = table
        self.name = name
        if validate:
            report = self.check_axioms()
            if not report:
                raise AxiomViolation(report)

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Matroid{tag} n={self.size} rank={self.full_rank}>"

    @property
    def size(self):
        return self.ground.size

    @property
    def full_rank(self):
        return int(self.table[-1])

    def _m(self, a):
        return self.ground.mask(a)

    # -- primitive queries ------------------------------------------------

    def rank(self, a: SubsetLike) -> int:
        return int(self.table[self._m(a)])

    def closure(self, a: SubsetLike) -> int:
        a = self._m(a)
        ra = self.table[a]
        out = a
        for e in range(self.size):
            b = 1 << e
            if not a & b and self.table[a | b] == ra:
                out |= b
        return out

    def is_independent(self, a: SubsetLike) -> bool:
        a = self._m(a)
        return int(self.table[a]) == bin(a).count("1")

    def is_flat(self, a: SubsetLike) -> bool:
        return bool(self._flag_tables[0][self._m(a)])

    def is_cyclic(self, s: SubsetLike) -> bool:
        return bool(self._flag_tables[1][self._m(s)])

    def is_circuit(self, c: SubsetLike) -> bool:
        c = self._m(c)
        if c == 0 or self.is_independent(c):
            return False
        return all(self.is_independent(c ^ (1 << e)) for e in self.ground.indices_of(c))

    def loops(self) -> int:
        return self.closure(0)

    def coloops(self) -> int:
        full = self.ground.full
        rn = self.table[full]
        return sum(1 << e for e in range(self.size) if self.table[full ^ (1 << e)] < rn)

    # -- enumerations -----------------------------------------------------

    @cached_property
    def _flag_tables(self):
        flat, cyclic = K.flag_tables(self.table, self.size)
        flat.flags.writeable = False
        cyclic.flags.writeable = False
        return flat, cyclic

    @cached_property
    def closures(self) -> np.ndarray:
        """Closure of every mask, as an int64 table."""
        cl = K.closure_table(self.table, self.size)
        cl.flags.writeable = False
        return cl

    def flats(self) -> np.ndarray:
        """All flats as an ascending int64 mask array."""
        return self._flats

    @cached_property
    def _flats(self):
        out = np.flatnonzero(self._flag_tables[0]).astype(np.int64)
        out.flags.writeable = False
        return out

    def cyclic_flats(self) -> np.ndarray:
        return self._cyclic_flats

    @cached_property
    def _cyclic_flats(self):
        flat, cyclic = self._flag_tables
        out = np.flatnonzero(flat & cyclic).astype(np.int64)
        out.flags.writeable = False
        return out

    def circuits(self) -> list:
        pc = K.popcounts(self.size)
        dependent = self.table != pc
        masks = np.flatnonzero(dependent)
        out = []
        for m in masks:
            m = int(m)
            if all(not dependent[m ^ (1 << e)] for e in self.ground.indices_of(m)):
                out.append(m)
        return out

    def bases(self) -> list:
        pc = K.popcounts(self.size)
        return np.flatnonzero((pc == self.table) & (self.table == self.full_rank)).tolist()

    # -- derived matroids -------------------------------------------------

    def dual(self) -> "Matroid":
        # r*(A) = |A| + r(N \ A) - r(N); complement of mask m is index full - m
        pc = K.popcounts(self.size).astype(np.int64)
        t = pc + self.table[::-1].astype(np.int64) - self.full_rank
        return Matroid(self.ground, t, name=f"{self.name}*" if self.name else None)

    def _embed(self, keep):
        """For each mask over the kept elements, the mask over the old ground."""
        old = np.zeros(1, dtype=np.int64)
        for e in keep:
            old = np.concatenate([old, old | (1 << e)])
        return old

    def _minor_ground(self, removed):
        keep = [i for i in range(self.size) if not (removed >> i) & 1]
        ground = GroundSet(tuple(self.ground.labels[i] for i in keep), cap=self.ground.cap)
        return keep, ground

    def restrict(self, d: SubsetLike) -> "Matroid":
        """Deletion M \\ D: the restriction to the complement of ``d``."""
        d = self._m(d)
        keep, ground = self._minor_ground(d)
        return Matroid(ground, self.table[self._embed(keep)])

    delete = restrict

    def restrict_to(self, s: SubsetLike) -> "Matroid":
        return self.restrict(self.ground.full & ~self._m(s))

    def contract(self, a: SubsetLike) -> "Matroid":
        a = self._m(a)
        keep, ground = self._minor_ground(a)
        t = self.table[self._embed(keep) | a].astype(np.int64) - int(self.table[a])
        return Matroid(ground, t)

    # -- validation -------------------------------------------------------

    def check_axioms(self, exhaustive=False, backend=None) -> AxiomReport:
        """Check (R1)-(R3) over every subset.

        The default form checks R2 and R3 on single-element extensions, which
        is equivalent to the pairwise statements.  ``exhaustive=True`` runs the
        literal O(4^n) pairwise check instead (refused above 12 elements).
        """
        if exhaustive:
            return self._check_axioms_pairwise()
        code, a, b = K.check_axioms_local(self.table, self.size, backend)
        return _report(self.table, code, a, b)

    def _check_axioms_pairwise(self):
        n = self.size
        if n > 12:
            raise GuardExceeded("pairwise axiom check is limited to 12 elements")
        t = self.table.astype(np.int64)
        masks = np.arange(1 << n, dtype=np.int64)
        pc = K.popcounts(n)
        bad = np.flatnonzero((t < 0) | (t > pc))
        if bad.size:
            return _report(self.table, 1, int(bad[0]), int(bad[0]))
        for a in range(1 << n):
            sup = masks[(masks & a) == a]
            hit = np.flatnonzero(t[a] > t[sup])
            if hit.size:
                return _report(self.table, 2, a, int(sup[hit[0]]))
        for a in range(1 << n):
            hit = np.flatnonzero(t[a] + t < t[a | masks] + t[a & masks])
            if hit.size:
                return _report(self.table, 3, a, int(hit[0]))
        return AxiomReport(True)

    def same_rank_function(self, other: "Matroid") -> bool:
        return self.size == other.size and bool(np.array_equal(self.table, other.table))


def rank(m: Matroid, a) -> int:
    return m.rank(a)


def closure(m: Matroid, a) -> int:
    return m.closure(a)
