"""Builders for every matroid representation used in the package.

Each builder returns a validated :class:`~matroidflat.core.Matroid`; invalid
inputs raise :class:`InvalidArgumentError` and rank functions that break an
axiom raise :class:`AxiomViolation` carrying the witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import _kernels as K
from .core import DEFAULT_CAP, GroundSet, Matroid
from .errors import (
    AxiomViolation,
    FlatFamilyMismatch,
    GuardExceeded,
    InvalidArgumentError,
    UnsupportedParameterError,
)


def _ground(labels, cap=DEFAULT_CAP):
    if isinstance(labels, GroundSet):
        return labels
    if isinstance(labels, int):
        return GroundSet.of_size(labels, cap=cap)
    return GroundSet(tuple(labels), cap=cap)


def _validated(ground, table, name=None, backend=None):
    m = Matroid(ground, table, name=name)
    report = m.check_axioms(backend=backend)
    if not report:
        raise AxiomViolation(report)
    return m


# ---------------------------------------------------------------------------
# presentations

@dataclass(frozen=True)
class SetSystemPresentation:
    """A ground set together with an ordered list of subsets (repeats allowed)."""

    ground: GroundSet
    sets: tuple

    @classmethod
    def from_labels(cls, labels, sets, cap=DEFAULT_CAP):
        ground = _ground(labels, cap)
        return cls(ground, tuple(ground.mask(s) for s in sets))

    def __post_init__(self):
        for s in self.sets:
            self.ground.mask(int(s))


@dataclass(frozen=True)
class DigraphPresentation:
    """Directed graph with ground vertices ``n1`` and terminal vertices ``n2``.

    ``vertices`` are labels; ``edges`` are (tail, head) label pairs.  The
    induced gammoid lives on ``n1`` in the order given.
    """

    vertices: tuple
    edges: tuple
    n1: tuple
    n2: tuple

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        if len(set(vs)) != len(vs):
            raise InvalidArgumentError("duplicate vertex labels")
        object.__setattr__(self, "vertices", vs)
        known = set(vs)
        edges = tuple((str(u), str(w)) for u, w in self.edges)
        for u, w in edges:
            if u not in known or w not in known:
                raise InvalidArgumentError(f"edge ({u},{w}) has an unknown endpoint")
        object.__setattr__(self, "edges", edges)
        for attr in ("n1", "n2"):
            vals = tuple(str(v) for v in getattr(self, attr))
            missing = [v for v in vals if v not in known]
            if missing:
                raise InvalidArgumentError(f"{attr} contains unknown vertices {missing}")
            if len(set(vals)) != len(vals):
                raise InvalidArgumentError(f"{attr} has repeated vertices")
            object.__setattr__(self, attr, vals)


@dataclass(frozen=True)
class UndirectedGraphInput:
    vertices: tuple
    edges: tuple
    edge_labels: tuple | None = None

    def __post_init__(self):
        vs = tuple(str(v) for v in self.vertices)
        if len(set(vs)) != len(vs):
            raise InvalidArgumentError("duplicate vertex labels")
        object.__setattr__(self, "vertices", vs)
        edges = tuple((str(u), str(w)) for u, w in self.edges)
        for u, w in edges:
            if u not in vs or w not in vs:
                raise InvalidArgumentError(f"edge ({u},{w}) has an unknown endpoint")
        object.__setattr__(self, "edges", edges)
        if self.edge_labels is not None and len(self.edge_labels) != len(edges):
            raise InvalidArgumentError("edge_labels must match the number of edges")


# ---------------------------------------------------------------------------
# builders

def uniform(k, n, labels=None, cap=DEFAULT_CAP):
    if not (0 <= k <= n):
        raise InvalidArgumentError(f"uniform matroid needs 0 <= k <= n, got k={k}, n={n}")
    ground = _ground(labels if labels is not None else n, cap)
    if ground.size != n:
        raise InvalidArgumentError("label count does not match n")
    table = np.minimum(K.popcounts(n), k)
    return Matroid(ground, table, name=f"U{k},{n}")


def from_rank_table(table, labels=None, cap=DEFAULT_CAP, name=None):
    """Wrap an explicit rank table (indexed by mask) after checking the axioms."""
    table = np.asarray(table)
    size = table.shape[0]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise InvalidArgumentError(f"rank table length {size} is not a power of two")
    if np.any(table != np.round(table)):
        raise InvalidArgumentError("rank table entries must be integers")
    ground = _ground(labels if labels is not None else n, cap)
    if ground.size != n:
        raise InvalidArgumentError(f"{ground.size} labels for a table over {n} elements")
    return _validated(ground, table.astype(np.int64), name=name)


def transversal(p: SetSystemPresentation, name=None, backend=None):
    """Transversal matroid: r(A) is the size of a maximum matching of A into the sets."""
    table = K.transversal_table(p.ground.size, list(p.sets), backend)
    return _validated(p.ground, table, name=name)


def gammoid(d: DigraphPresentation, name=None, backend=None, cap=DEFAULT_CAP):
    """Gammoid on ``d.n1``: r(I) = max number of vertex-disjoint paths from I to n2.

    A vertex of I that is also a terminal links to itself with a one-vertex path.
    """
    index = {v: i for i, v in enumerate(d.vertices)}
    arcs = np.array([(index[u], index[w]) for u, w in d.edges], dtype=np.int64).reshape(-1, 2)
    sinks = np.zeros(len(d.vertices), dtype=bool)
    for v in d.n2:
        sinks[index[v]] = True
    ground = GroundSet(d.n1, cap=cap)
    table = K.gammoid_table(len(d.vertices), arcs, [index[v] for v in d.n1], sinks, backend)
    return _validated(ground, table, name=name)


def strict_gammoid(vertices, edges, n2, name=None, backend=None, cap=DEFAULT_CAP):
    d = DigraphPresentation(tuple(vertices), tuple(edges), tuple(vertices), tuple(n2))
    return gammoid(d, name=name, backend=backend, cap=cap)


def from_circuits(labels, circuits, name=None, backend=None, cap=DEFAULT_CAP):
    """Matroid whose independent sets are the sets containing no given circuit.

    The family must be a nonempty-member antichain; if the resulting rank
    function is not submodular the construction fails with the witness.
    """
    ground = _ground(labels, cap)
    masks = [ground.mask(c) for c in circuits]
    for i, c in enumerate(masks):
        if c == 0:
            raise InvalidArgumentError("circuits must be nonempty")
        for j, d in enumerate(masks):
            if i != j and c & d == c:
                what = "repeated" if c == d else "not an antichain"
                raise InvalidArgumentError(
                    f"circuit family is {what}: {ground.format(c)} within {ground.format(d)}"
                )
    table = K.circuit_table(ground.size, masks, backend)
    return _validated(ground, table, name=name)


def graphic(g: UndirectedGraphInput, name=None, backend=None, cap=DEFAULT_CAP):
    """Cycle matroid: ground set = edges, r(A) = #touched vertices - #components."""
    labels = g.edge_labels
    if labels is None:
        labels = tuple(f"{u}{w}" for u, w in g.edges)
        if len(set(labels)) != len(labels):
            labels = tuple(f"e{i}" for i in range(len(g.edges)))
    ground = _ground(labels, cap)
    index = {v: i for i, v in enumerate(g.vertices)}
    ends = np.array([(index[u], index[w]) for u, w in g.edges], dtype=np.int64).reshape(-1, 2)
    table = K.graphic_table(ground.size, len(g.vertices), ends, backend)
    return _validated(ground, table, name=name)


def complete_graph(k, name=None):
    vs = tuple(str(i) for i in range(1, k + 1))
    return graphic(UndirectedGraphInput(vs, tuple(itertools.combinations(vs, 2))),
                   name=name or f"K{k}")


def from_flat_list(labels, flats, name=None, cap=DEFAULT_CAP):
    """Matroid with the given flat family.

    Flat ranks are longest-chain heights above the smallest flat; a set's
    rank is the height of the smallest flat containing it.  The family must
    contain the ground set and be closed under intersection, and the result
    must reproduce exactly the input family.
    """
    ground = _ground(labels, cap)
    n = ground.size
    family = np.unique(np.array([ground.mask(f) for f in flats], dtype=np.int64))
    if family.size == 0 or family[-1] != ground.full:
        raise InvalidArgumentError("flat family must contain the whole ground set")
    for i, f in enumerate(family):
        meets = family[i + 1:] & f
        if meets.size and not np.isin(meets, family).all():
            bad = int(meets[~np.isin(meets, family)][0])
            raise InvalidArgumentError(
                f"flat family is not closed under intersection: {ground.format(int(f))} "
                f"meets another flat in {ground.format(bad)}"
            )
    order = np.argsort(np.bitwise_count(family), kind="stable")
    height = np.zeros(family.size, dtype=np.int64)
    by_size = family[order]
    h_sorted = np.zeros(family.size, dtype=np.int64)
    for pos in range(1, by_size.size):
        f = by_size[pos]
        below = (by_size[:pos] & ~f) == 0
        if below.any():
            h_sorted[pos] = h_sorted[:pos][below].max() + 1
    height[order] = h_sorted
    big = np.int64(n + 1)
    values = np.full(1 << n, big, dtype=np.int64)
    values[family] = height
    table = K.superset_min(values, n)
    m = _validated(ground, table, name=name)
    if not np.array_equal(m.flats(), family):
        extra = np.setdiff1d(m.flats(), family)
        missing = np.setdiff1d(family, m.flats())
        raise FlatFamilyMismatch(
            f"induced matroid has {extra.size} flats not in the input and lacks {missing.size} input flats"
        )
    return m


def from_cyclic_flats(labels, cyclic_flats, name=None, cap=DEFAULT_CAP):
    """Matroid from its cyclic flats and their ranks, via
    r(X) = min over cyclic flats Z of r(Z) + |X \\ Z|.

    ``cyclic_flats`` is a list of ``(subset, rank)`` pairs; the ground set
    must be included.  The result is validated and its cyclic flats must be
    exactly the input sets.
    """
    ground = _ground(labels, cap)
    n = ground.size
    masks = np.arange(1 << n, dtype=np.int64)
    table = np.full(1 << n, n, dtype=np.int64)
    given = []
    for s, rk in cyclic_flats:
        z = ground.mask(s)
        given.append(z)
        table = np.minimum(table, int(rk) + np.bitwise_count(masks & ~np.int64(z)))
    if ground.full not in given:
        raise InvalidArgumentError("cyclic flat list must contain the ground set")
    m = _validated(ground, table, name=name)
    if set(m.cyclic_flats().tolist()) - {0} != set(given) - {0}:
        raise FlatFamilyMismatch("the given sets are not exactly the cyclic flats of the induced matroid")
    return m


def mn_presentation(n):
    """Set-system presentation of the flatness-degree family on the 2-subsets of [n]."""
    if n < 5:
        raise UnsupportedParameterError(
            f"family_Mn needs n >= 5 (copy count C(n-1,2)-n is negative for n={n}); "
            "use corpus 'k4' (graphic K4) or 'matroidY' / 'twelve' for smaller degrees"
        )
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    labels = tuple(f"{a}{b}" if n < 10 else f"{a}-{b}" for a, b in pairs)
    ground = GroundSet(labels)
    full = ground.full
    sets = [sum(1 << j for j, p in enumerate(pairs) if i in p) for i in range(1, n + 1)]
    sets += [full] * (comb(n - 1, 2) - n)
    return SetSystemPresentation(ground, tuple(sets))


def family_Mn(n, backend=None):
    """Transversal matroid on C([n], 2) presented by (A_1..A_n, N, ..., N) with
    C(n-1, 2) - n copies of N, where A_i holds the pairs containing i."""
    p = mn_presentation(n)
    if p.ground.size > p.ground.cap:
        raise GuardExceeded(f"family_Mn({n}) has {p.ground.size} elements")
    return transversal(p, name=f"M{n}", backend=backend)


def mn_circuits(n) -> list:
    """Masks of F_1..F_n (F_i = the pairs avoiding i) in the family_Mn ground set."""
    pairs = list(itertools.combinations(range(1, n + 1), 2))
    return [sum(1 << j for j, p in enumerate(pairs) if i not in p) for i in range(1, n + 1)]
