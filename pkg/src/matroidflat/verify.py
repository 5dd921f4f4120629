"""Brute-force oracles, random generators and the regression corpus.

The oracles read the definitions literally and share no search code with
:mod:`matroidflat.flatness` or :mod:`matroidflat.pseudomod`; they only use
rank-table lookups from :mod:`matroidflat.core`.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import constructions as C
from ._jit import njit, resolve_backend
from .core import Matroid
from .errors import GuardExceeded, MatroidError
from .flatness import OMEGA, FlatCollection, FlatnessDegreeResult, FlatnessWitness
from .pseudomod import PseudomodularityReport

ORACLE_BUDGET = 10_000_000
ORACLE_MAX_FLATS = 50


# ---------------------------------------------------------------------------
# flatness oracle: every set of distinct flats, literal 2^k signed sum

@njit
def _parity(x):
    p = 0
    while x:
        x &= x - 1
        p ^= 1
    return p


@njit
def _bf_level(table, flats, k, budget):
    """Scan k-subsets of ``flats`` in lexicographic order.

    Status 0 = no violation, 1 = violation at ``idx``, 3 = budget spent.
    """
    nf = flats.shape[0]
    idx = np.arange(k)
    if k > nf:
        return 0, idx, 0
    # level t holds the intersections of every subset of the first t members;
    # slot 0 is the empty intersection (all ones)
    inter = np.empty((k + 1, 1 << k), dtype=np.int64)
    acc = np.zeros(k + 1, dtype=np.int64)
    uni = np.zeros(k + 1, dtype=np.int64)
    inter[0, 0] = -1
    evals = 0
    d = 0
    while True:
        for t in range(d, k):
            f = flats[idx[t]]
            size = 1 << t
            s = acc[t]
            for j in range(size):
                v = inter[t, j]
                inter[t + 1, j] = v
                w = v & f
                inter[t + 1, size + j] = w
                # subset j plus the new member has |j|+1 elements
                if _parity(j) == 0:
                    s -= table[w]
                else:
                    s += table[w]
            acc[t + 1] = s
            uni[t + 1] = uni[t] | f
        evals += 1
        if table[uni[k]] + acc[k] > 0:
            return 1, idx, evals
        if evals >= budget:
            return 3, idx, evals
        i = k - 1
        while i >= 0 and idx[i] == nf - k + i:
            i -= 1
        if i < 0:
            return 0, idx, evals
        idx[i] += 1
        for j in range(i + 1, k):
            idx[j] = idx[j - 1] + 1
        d = i


def brute_force_flatness_degree(m: Matroid, cap: int, budget=ORACLE_BUDGET, backend=None) -> FlatnessDegreeResult:
    """Smallest violating size minus one over all sets of at most ``cap``
    distinct flats.  When nothing violates, the result is ω if ``cap`` covers
    every flat and an uncertified ``>= cap`` otherwise."""
    fn = _bf_level if resolve_backend(backend) == "numba" else _bf_level.py_func
    flats = np.ascontiguousarray(m.flats())
    table = m.table.astype(np.int64)
    used = 0
    for k in range(1, cap + 1):
        status, idx, evals = fn(table, flats, k, budget - used)
        used += evals
        if status == 1:
            coll = FlatCollection(m, tuple(int(flats[i]) for i in idx))
            wit = FlatnessWitness(coll, _literal_delta(m, coll.members))
            return FlatnessDegreeResult(k - 1, wit, True, k - 1, _oracle_scope(k - 1, used, budget, True))
        if status == 3:
            raise GuardExceeded(f"brute-force flatness oracle spent its budget of {budget} at size {k}")
    if cap >= len(flats):
        return FlatnessDegreeResult(OMEGA, None, True, cap, _oracle_scope(cap, used, budget, True))
    return FlatnessDegreeResult(None, None, False, cap, _oracle_scope(cap, used, budget, False))


def _oracle_scope(k, used, budget, complete):
    return {
        "search_space": "all sets of distinct flats",
        "max_size_checked": k,
        "evaluations": used,
        "budget": budget,
        "complete": complete,
    }


def _literal_delta(m: Matroid, members) -> int:
    total = 0
    for r in range(len(members) + 1):
        for sub in itertools.combinations(members, r):
            if r == 0:
                x = 0
                for f in members:
                    x |= f
            else:
                x = m.ground.full
                for f in sub:
                    x &= f
            total += (-1) ** r * m.rank(x)
    return total


# ---------------------------------------------------------------------------
# pseudomodularity oracle: explicit T and every candidate B0

@njit
def _bf_pseudo(table, flats, ptr, idx, n):
    nf = flats.shape[0]
    cand = np.empty(nf, dtype=np.int64)
    for ai in range(nf):
        a = flats[ai]
        for bi in range(nf):
            b = flats[bi]
            target = table[a | b] - table[b]
            nt = 0
            for t in range(ptr[bi], ptr[bi + 1]):
                x = flats[idx[t]]
                if table[a | x] - table[x] == target:
                    cand[nt] = x
                    nt += 1
            found = False
            for card in range(n + 1):
                for ci in range(nt):
                    b0 = cand[ci]
                    c = 0
                    y = b0
                    while y:
                        y &= y - 1
                        c += 1
                    if c != card:
                        continue
                    ok = True
                    for t in range(ptr[bi], ptr[bi + 1]):
                        x = flats[idx[t]]
                        lhs = table[a | x] - table[x] == target
                        rhs = (b0 & ~x) == 0
                        if lhs != rhs:
                            ok = False
                            break
                    if ok:
                        found = True
                        break
                if found:
                    break
            if not found:
                return ai, bi
    return -1, -1


def _below_lists(flats):
    ptr = [0]
    parts = []
    for b in flats:
        sub = np.flatnonzero((flats & ~b) == 0)
        parts.append(sub)
        ptr.append(ptr[-1] + sub.size)
    idx = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    return np.asarray(ptr, dtype=np.int64), idx.astype(np.int64)


def brute_force_pseudomodularity(m: Matroid, backend=None) -> PseudomodularityReport:
    """For each ordered flat pair, try every member of T as B0 against the
    biconditional over all flats below B."""
    fn = _bf_pseudo if resolve_backend(backend) == "numba" else _bf_pseudo.py_func
    flats = np.ascontiguousarray(m.flats())
    ptr, idx = _below_lists(flats)
    ai, bi = fn(m.table.astype(np.int64), flats, ptr, idx, m.size)
    if ai < 0:
        return PseudomodularityReport(True)
    a, b = int(flats[ai]), int(flats[bi])

    def cr(x):
        return m.rank(a | x) - m.rank(x)

    fam = [int(flats[i]) for i in idx[ptr[bi]: ptr[bi + 1]] if cr(int(flats[i])) == cr(b)]
    for b1, b2 in itertools.combinations(fam, 2):
        if cr(b1 & b2) != cr(b):
            return PseudomodularityReport(False, a, b, b1, b2, (cr(b), cr(b1), cr(b2), cr(b1 & b2)))
    raise MatroidError("no pseudointersection found yet T is intersection-closed")


# ---------------------------------------------------------------------------
# random generators

def random_strict_gammoid(rng: random.Random, max_vertices=9) -> Matroid:
    nv = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(nv)]
    p = rng.choice([0.15, 0.25, 0.4])
    edges = [(u, w) for u in vs for w in vs if u != w and rng.random() < p]
    sinks = [v for v in vs if rng.random() < 0.4]
    return C.strict_gammoid(vs, edges, sinks)


def random_transversal(rng: random.Random, max_elements=8) -> Matroid:
    # non-pseudomodular examples are rare; this mix yields roughly 1.5% of them
    n = rng.randint(min(6, max_elements), max_elements)
    k = rng.randint(4, 5)
    sets = [rng.sample(range(n), min(n, rng.choice((2, 3, 4)))) for _ in range(k)]
    return C.transversal(C.SetSystemPresentation.from_labels(range(n), sets))


# ---------------------------------------------------------------------------
# corpus

def twelve_element_flats(completed=True) -> list:
    """Flat family of the 12-element example on {1..12}.

    The listed family (sets of size <= 4, S1, S2, S3, 5-sets inside no S_i,
    F1, F2, F3, N) is not the flat family of any matroid.  With
    ``completed=True`` the missing flats of the freest matroid having cyclic
    flats S_i (rank 5), F_i (rank 6) and N (rank 7) are added: 6-sets inside
    no F_i meeting each S_i in at most 4 elements, and S_i + e for e outside F_i.
    """
    elems = range(1, 13)
    s = [{1, 3, 4, 6, 7, 8}, {2, 3, 4, 9, 11, 12}, {5, 7, 8, 10, 11, 12}]
    f = [set(range(1, 9)), {1, 2, 3, 4, 9, 10, 11, 12}, set(range(5, 13))]
    out = [set(c) for r in range(5) for c in itertools.combinations(elems, r)]
    out += s
    out += [set(c) for c in itertools.combinations(elems, 5) if not any(set(c) <= x for x in s)]
    out += f + [set(elems)]
    if completed:
        for c in itertools.combinations(elems, 6):
            c = set(c)
            if not any(c <= x for x in f) and all(len(c & x) <= 4 for x in s):
                out.append(c)
        for si, fi in zip(s, f):
            out += [si | {e} for e in elems if e not in fi]
    return [sorted(x) for x in out]


TWELVE_F = ([1, 2, 3, 4, 5, 6, 7, 8], [1, 2, 3, 4, 9, 10, 11, 12], [5, 6, 7, 8, 9, 10, 11, 12])


def build_matroid_y():
    p = C.SetSystemPresentation.from_labels(range(1, 7), [[1, 2], [3, 4], [5, 6], [1, 3, 5]])
    return C.transversal(p, name="matroidY")


def build_twelve():
    return C.from_flat_list(range(1, 13), twelve_element_flats(), name="twelve")


@dataclass(frozen=True)
class Expectation:
    """One expected value; ``source`` is "literature", "trivial" or "derived"."""

    key: str
    value: object
    source: str
    members: tuple | None = None
    note: str = ""


@dataclass
class CorpusEntry:
    name: str
    build: Callable[[], Matroid]
    expected: tuple
    description: str = ""

    @cached_property
    def matroid(self) -> Matroid:
        return self.build()


def _mn_labels(n):
    return [C.mn_presentation(n).ground.labels_of(f) for f in C.mn_circuits(n)]


def corpus_entries() -> list:
    from .flatness import OMEGA as W
    E = Expectation
    return [
        CorpusEntry("matroidY", build_matroid_y, (
            E("rank", 4, "literature"),
            E("rank_of", 3, "literature", ([1, 2, 3, 4],)),
            E("n_flats", 34, "derived"),
            E("flatness_degree", 2, "literature"),
            E("delta", 1, "literature", ([1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 5, 6])),
            E("pseudomodular", False, "literature"),
            E("pseudomodular_witness", {"A": ["1", "2"], "B1": ["3", "4"], "B2": ["5", "6"],
                                        "ranks": [1, 1, 1, 2]}, "literature"),
            E("modular", False, "derived"),
        ), "transversal matroid of the set system ({1,2},{3,4},{5,6},{1,3,5})"),
        CorpusEntry("twelve", build_twelve, (
            E("rank", 7, "literature"),
            E("n_flats", 2355, "derived", note="completed flat family"),
            E("flatness_degree", 2, "literature"),
            E("delta", 1, "literature", TWELVE_F),
            E("pseudomodular", True, "literature"),
            E("modular", False, "derived"),
        ), "12-element gammoid with the completed flat family"),
        CorpusEntry("mn5", lambda: C.family_Mn(5), (
            E("rank", 6, "literature"),
            E("n_flats", 614, "derived"),
            E("flatness_degree", 4, "derived", note="Δ over all five F_i is 1"),
            E("delta", 1, "literature", tuple(_mn_labels(5))),
            E("delta", -1, "literature", tuple(_mn_labels(5)[:3])),
            E("pseudomodular", True, "derived"),
            E("modular", False, "derived"),
        ), "family_Mn(5)"),
        CorpusEntry("mn6", lambda: C.family_Mn(6), (
            E("rank", 10, "literature"),
            E("n_flats", 27771, "derived"),
            E("flatness_degree", 5, "derived", note="Δ over all six F_i is 1"),
            E("delta", 1, "literature", tuple(_mn_labels(6))),
        ), "family_Mn(6); pair scans exceed the flat guard"),
        CorpusEntry("k4", lambda: C.complete_graph(4), (
            E("rank", 3, "trivial"),
            E("n_flats", 15, "derived"),
            E("n_circuits", 7, "derived"),
            E("flatness_degree", 3, "literature"),
            E("pseudomodular", True, "derived"),
            E("modular", False, "derived"),
        ), "cycle matroid of K4"),
        CorpusEntry("u24", lambda: C.uniform(2, 4), (
            E("rank", 2, "trivial"),
            E("n_flats", 6, "trivial"),
            E("flatness_degree", W, "derived"),
            E("pseudomodular", True, "derived"),
            E("modular", True, "derived"),
        ), "uniform U(2,4)"),
        CorpusEntry("u35", lambda: C.uniform(3, 5), (
            E("rank", 3, "trivial"),
            E("n_flats", 17, "trivial"),
            E("flatness_degree", W, "derived"),
            E("pseudomodular", True, "derived"),
            E("modular", False, "derived"),
        ), "uniform U(3,5)"),
        CorpusEntry("u03", lambda: C.uniform(0, 3), (
            E("rank", 0, "trivial"),
            E("n_flats", 1, "trivial"),
            E("flatness_degree", W, "trivial"),
            E("pseudomodular", True, "trivial"),
            E("modular", True, "trivial"),
        ), "three loops"),
        CorpusEntry("u33", lambda: C.uniform(3, 3), (
            E("rank", 3, "trivial"),
            E("n_flats", 8, "trivial"),
            E("flatness_degree", W, "derived"),
            E("pseudomodular", True, "trivial"),
            E("modular", True, "trivial"),
        ), "free matroid on three elements"),
    ]


def corpus_names() -> list:
    return [e.name for e in corpus_entries()]


def get_entry(name) -> CorpusEntry:
    for e in corpus_entries():
        if e.name == name:
            return e
    from .errors import InvalidArgumentError
    raise InvalidArgumentError(f"unknown corpus entry {name!r}; known: {', '.join(corpus_names())}")


def evaluate(m: Matroid, exp: Expectation):
    """Compute the actual value for an expectation key."""
    from . import flatness as FL
    from . import pseudomod as P
    key = exp.key
    if key == "rank":
        return m.full_rank
    if key == "rank_of":
        return m.rank([str(x) for x in exp.members[0]])
    if key == "n_flats":
        return len(m.flats())
    if key == "n_circuits":
        return len(m.circuits())
    if key == "flatness_degree":
        return FL.flatness_degree(m).degree
    if key == "delta":
        members = tuple(m.ground.mask([str(x) for x in s]) for s in exp.members)
        return FL.delta(FL.FlatCollection(m, members))
    if key == "pseudomodular":
        return P.is_pseudomodular(m).pseudomodular
    if key == "pseudomodular_witness":
        r = P.is_pseudomodular(m)
        if r.pseudomodular:
            return None
        lab = m.ground.labels_of
        return {"A": lab(r.a), "B1": lab(r.b1), "B2": lab(r.b2), "ranks": list(r.ranks)}
    if key == "modular":
        return P.is_modular(m).modular
    raise KeyError(key)


@dataclass
class CheckRow:
    entry: str
    key: str
    expected: object
    actual: object
    source: str
    passed: bool
    error: str = ""


@dataclass
class BatchResult:
    name: str
    seed: int
    count: int
    failures: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.failures


@dataclass
class CorpusReport:
    seed: int
    rows: list
    batches: list

    @property
    def passed(self):
        return all(r.passed for r in self.rows) and all(b.passed for b in self.batches)

    def to_json(self):
        def enc(v):
            if isinstance(v, float) and math.isinf(v):
                return "omega"
            return v
        return {
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"entry": r.entry, "key": r.key, "expected": enc(r.expected), "actual": enc(r.actual),
                 "source": r.source, "passed": r.passed, "error": r.error or None}
                for r in self.rows
            ],
            "batches": [
                {"name": b.name, "seed": b.seed, "count": b.count, "passed": b.passed,
                 "failures": b.failures, "stats": b.stats}
                for b in self.batches
            ],
        }

    def table(self):
        def fmt(v):
            if isinstance(v, float) and math.isinf(v):
                return "ω"
            return str(v)
        lines = []
        for r in self.rows:
            mark = "PASS" if r.passed else "FAIL"
            extra = f"  ({r.error})" if r.error else ""
            lines.append(f"{mark}  {r.entry:<9} {r.key:<22} expected={fmt(r.expected)} "
                         f"actual={fmt(r.actual)} [{r.source}]{extra}")
        for b in self.batches:
            mark = "PASS" if b.passed else "FAIL"
            stats = " ".join(f"{k}={v}" for k, v in b.stats.items())
            lines.append(f"{mark}  batch {b.name} seed={b.seed} n={b.count} {stats}")
            for f in b.failures[:5]:
                lines.append(f"      {f}")
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def strict_gammoid_batch(seed, count, max_vertices=9) -> BatchResult:
    """Every random strict gammoid should be totally flat and pseudomodular."""
    from . import flatness as FL
    from . import pseudomod as P
    rng = random.Random(seed)
    res = BatchResult("strict_gammoids", seed, count)
    flat = pm = 0
    for i in range(count):
        try:
            m = random_strict_gammoid(rng, max_vertices)
            tf = FL.is_totally_flat(m)
            p = bool(P.is_pseudomodular(m))
        except MatroidError as exc:
            res.failures.append(f"#{i}: {exc}")
            continue
        flat += tf
        pm += p
        if not (tf and p):
            res.failures.append(f"#{i}: totally_flat={tf} pseudomodular={p}")
    res.stats = {"totally_flat": flat, "pseudomodular": pm}
    return res


def transversal_batch(seed, count, max_elements=8) -> BatchResult:
    """Every 3-flat random transversal matroid should be pseudomodular, and
    every failing pair should give a three-flat collection with positive Δ."""
    from . import flatness as FL
    from . import pseudomod as P
    rng = random.Random(seed)
    res = BatchResult("transversals", seed, count)
    three_flat = non_pm = triples = 0
    for i in range(count):
        try:
            m = random_transversal(rng, max_elements)
            is3 = bool(FL.is_n_flat(m, 3))
            rep = P.is_pseudomodular(m)
        except MatroidError as exc:
            res.failures.append(f"#{i}: {exc}")
            continue
        three_flat += is3
        if is3 and not rep:
            res.failures.append(f"#{i}: 3-flat but not pseudomodular")
        if not rep:
            non_pm += 1
            try:
                tri = P.violating_triple(m, rep.a, rep.b)
                d = FL.delta(FL.FlatCollection(m, tri))
            except MatroidError as exc:
                res.failures.append(f"#{i}: triple construction failed: {exc}")
                continue
            if d <= 0:
                res.failures.append(f"#{i}: constructed triple has Δ={d}")
            else:
                triples += 1
    res.stats = {"three_flat": three_flat, "non_pseudomodular": non_pm, "positive_triples": triples}
    return res


def run_corpus(seed=0, random_count=20, names=None) -> CorpusReport:
    """Evaluate every corpus expectation plus the seeded random batches.
    Failures, including exceptions, are reported and never raised."""
    rows = []
    for entry in corpus_entries():
        if names is not None and entry.name not in names:
            continue
        try:
            m = entry.matroid
        except Exception as exc:  # noqa: BLE001 - reported, not raised
            rows.append(CheckRow(entry.name, "build", None, None, "", False, f"{type(exc).__name__}: {exc}"))
            continue
        for exp in entry.expected:
            try:
                actual = evaluate(m, exp)
                rows.append(CheckRow(entry.name, exp.key, exp.value, actual, exp.source, actual == exp.value))
            except Exception as exc:  # noqa: BLE001
                rows.append(CheckRow(entry.name, exp.key, exp.value, None, exp.source, False,
                                     f"{type(exc).__name__}: {exc}"))
    batches = []
    if random_count and names is None:
        batches.append(strict_gammoid_batch(seed, random_count))
        batches.append(transversal_batch(seed, random_count))
    return CorpusReport(seed, rows, batches)
