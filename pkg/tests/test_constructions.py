import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import digraphs, set_systems

from matroidflat import constructions as C
from matroidflat import flatness as FL
from matroidflat import verify as V
from matroidflat._kernels import gammoid_table, graphic_table, transversal_table
from matroidflat.errors import (
    AxiomViolation,
    FlatFamilyMismatch,
    InvalidArgumentError,
    UnsupportedParameterError,
)


def test_uniform_examples():
    assert C.uniform(0, 3).loops() == 7
    assert C.uniform(3, 3).is_independent(7)
    assert C.uniform(2, 4).flats().tolist() == [0, 1, 2, 4, 8, 15]
    with pytest.raises(InvalidArgumentError):
        C.uniform(3, 2)


def test_from_rank_table_round_trip(k4):
    m = C.from_rank_table(np.array(k4.table), labels=k4.ground.labels)
    assert m.same_rank_function(k4)
    assert C.from_rank_table(C.uniform(2, 4).table).same_rank_function(C.uniform(2, 4))


def test_from_rank_table_rejects():
    with pytest.raises(AxiomViolation) as info:
        C.from_rank_table([1, 1])
    assert info.value.report.axiom == "R1"
    with pytest.raises(InvalidArgumentError):
        C.from_rank_table([0, 1, 1])


def test_transversal_examples(matroid_y):
    assert matroid_y.full_rank == 4
    assert matroid_y.rank(["1", "2", "3", "4"]) == 3
    empty = C.transversal(C.SetSystemPresentation.from_labels(range(3), []))
    assert empty.full_rank == 0 and empty.loops() == 7


def _brute_matching_rank(n, sets):
    best = np.zeros(1 << n, dtype=np.int64)
    for x in range(1 << n):
        elems = [i for i in range(n) if x >> i & 1]
        r = 0
        for k in range(len(elems), 0, -1):
            if any(
                any(all(e in sets[j] for e, j in zip(sub, perm))
                    for perm in itertools.permutations(range(len(sets)), k))
                for sub in itertools.combinations(elems, k)
            ):
                r = k
                break
        best[x] = r
    return best


@given(set_systems(max_elements=5, max_sets=4))
def test_transversal_rank_is_max_matching(system):
    n, sets = system
    m = C.transversal(C.SetSystemPresentation.from_labels(range(n), sets))
    assert m.table.tolist() == _brute_matching_rank(n, [set(s) for s in sets]).tolist()


@given(set_systems(max_elements=8, max_sets=6))
def test_transversal_backends_agree(system):
    n, sets = system
    masks = [sum(1 << i for i in s) for s in sets]
    a = transversal_table(n, masks, "numba")
    b = transversal_table(n, masks, "numpy")
    assert np.array_equal(a, b)


# -- gammoids -----------------------------------------------------------------

def _simple_paths(nv, arcs, start, sinks):
    out = [[w for u, w in arcs if u == v] for v in range(nv)]
    paths = []

    def walk(path, seen):
        if path[-1] in sinks:
            paths.append(seen)
        for w in out[path[-1]]:
            if not seen >> w & 1:
                walk(path + [w], seen | 1 << w)

    walk([start], 1 << start)
    return paths


def _brute_gammoid_rank(nv, arcs, ground, sinks):
    """Rank from an exhaustive search over families of vertex-disjoint paths."""
    paths = {v: _simple_paths(nv, arcs, v, set(sinks)) for v in ground}
    linkable = set()

    def extend(i, used, starts):
        if i == len(ground):
            linkable.add(starts)
            return
        extend(i + 1, used, starts)
        for p in paths[ground[i]]:
            if not p & used:
                extend(i + 1, used | p, starts | 1 << i)

    extend(0, 0, 0)
    n = len(ground)
    return [max(bin(j).count("1") for j in linkable if j & ~x == 0) for x in range(1 << n)]


@given(digraphs(max_vertices=7))
def test_gammoid_rank_matches_path_oracle(graph):
    nv, arcs, sinks = graph
    m = C.strict_gammoid([str(i) for i in range(nv)], [(str(u), str(w)) for u, w in arcs],
                         [str(s) for s in sinks])
    assert m.table.tolist() == _brute_gammoid_rank(nv, arcs, list(range(nv)), sinks)


@given(digraphs(max_vertices=7), st.data())
def test_nonstrict_gammoid_matches_path_oracle(graph, data):
    nv, arcs, sinks = graph
    ground = sorted(data.draw(st.sets(st.integers(0, nv - 1), min_size=1)))
    d = C.DigraphPresentation([str(i) for i in range(nv)], [(str(u), str(w)) for u, w in arcs],
                              [str(g) for g in ground], [str(s) for s in sinks])
    m = C.gammoid(d)
    assert m.table.tolist() == _brute_gammoid_rank(nv, arcs, ground, sinks)


@given(digraphs(max_vertices=8))
def test_gammoid_backends_agree(graph):
    nv, arcs, sinks = graph
    a = np.array(arcs, dtype=np.int64).reshape(-1, 2)
    s = np.zeros(nv, dtype=bool)
    s[list(sinks)] = True
    ground = list(range(nv))
    assert np.array_equal(gammoid_table(nv, a, ground, s, "numba"), gammoid_table(nv, a, ground, s, "numpy"))


def test_gammoid_small_examples():
    vs = ["a", "b", "c"]
    assert C.strict_gammoid(vs, [], vs).is_independent(7)
    assert C.strict_gammoid(vs, [], []).full_rank == 0
    one = C.strict_gammoid(["v"], [], ["v"])
    assert one.full_rank == 1 and one.size == 1


def test_digraph_validation():
    with pytest.raises(InvalidArgumentError):
        C.DigraphPresentation(["a"], [("a", "b")], ["a"], ["a"])
    with pytest.raises(InvalidArgumentError):
        C.DigraphPresentation(["a"], [], ["z"], [])


# -- circuits and graphs ------------------------------------------------------

def test_from_circuits_matches_m5(m5):
    circuits = m5.circuits()
    assert set(C.mn_circuits(5)) <= set(circuits)
    circ = C.from_circuits(m5.ground.labels, [m5.ground.labels_of(c) for c in circuits])
    assert circ.same_rank_function(m5)


def test_from_circuits_examples():
    threes = [c for c in itertools.combinations("abcd", 3)]
    assert C.from_circuits("abcd", threes).same_rank_function(C.uniform(2, 4, labels="abcd"))
    with pytest.raises(InvalidArgumentError):
        C.from_circuits("ab", [["a"], ["a", "b"]])
    with pytest.raises(InvalidArgumentError):
        C.from_circuits("ab", [[]])


def test_from_circuits_not_a_matroid():
    # {a,b} and {b,c} as the only circuits breaks circuit elimination
    with pytest.raises(AxiomViolation):
        C.from_circuits("abc", [["a", "b"], ["b", "c"]])


def test_k4_circuits(k4):
    circ = k4.circuits()
    sizes = sorted(bin(c).count("1") for c in circ)
    assert sizes == [3, 3, 3, 3, 4, 4, 4]
    assert k4.full_rank == 3


def test_graphic_forest_and_loop():
    forest = C.graphic(C.UndirectedGraphInput(("1", "2", "3", "4"), (("1", "2"), ("2", "3"), ("2", "4"))))
    assert forest.is_independent(forest.ground.full)
    loop = C.graphic(C.UndirectedGraphInput(("1",), (("1", "1"),)))
    assert loop.full_rank == 0


def test_graphic_parallel_edges_get_index_labels():
    g = C.graphic(C.UndirectedGraphInput(("1", "2"), (("1", "2"), ("1", "2"))))
    assert g.ground.labels == ("e0", "e1")
    assert g.full_rank == 1


@given(st.integers(1, 5), st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=8))
def test_graphic_backends_agree(nv, edges):
    ends = np.array([(u % nv, w % nv) for u, w in edges], dtype=np.int64)
    n = len(edges)
    assert np.array_equal(graphic_table(n, nv, ends, "numba"), graphic_table(n, nv, ends, "numpy"))


# -- flat lists ---------------------------------------------------------------

def test_flat_list_round_trip():
    u = C.uniform(2, 4)
    flats = [u.ground.labels_of(int(f)) for f in u.flats()]
    assert C.from_flat_list(u.ground.labels, flats).same_rank_function(u)


def test_flat_list_errors():
    with pytest.raises(InvalidArgumentError):
        C.from_flat_list("ab", [[], ["a"]])
    with pytest.raises(InvalidArgumentError):
        C.from_flat_list("abc", [["a", "b"], ["b", "c"], ["a", "b", "c"]])


def test_twelve_literal_list_is_not_a_matroid():
    literal = V.twelve_element_flats(completed=False)
    assert len({tuple(x) for x in literal}) == 1575
    with pytest.raises((AxiomViolation, FlatFamilyMismatch)):
        C.from_flat_list(range(1, 13), literal)


def test_twelve_completed(twelve):
    assert twelve.full_rank == 7
    assert len(twelve.flats()) == 2355
    for f in V.TWELVE_F:
        assert twelve.rank([str(x) for x in f]) == 6
    literal = {twelve.ground.mask([str(x) for x in s]) for s in V.twelve_element_flats(completed=False)}
    assert literal <= set(twelve.flats().tolist())
    cyc = [twelve.ground.labels_of(int(x)) for x in twelve.cyclic_flats()]
    assert len(cyc) == 8


def test_from_cyclic_flats_matroid_y(matroid_y):
    data = [(matroid_y.ground.labels_of(int(z)), matroid_y.rank(int(z))) for z in matroid_y.cyclic_flats()]
    assert C.from_cyclic_flats(matroid_y.ground.labels, data).same_rank_function(matroid_y)


# -- family M_n ---------------------------------------------------------------

def test_family_mn_guard():
    with pytest.raises(UnsupportedParameterError) as info:
        C.family_Mn(4)
    assert "k4" in str(info.value)


@pytest.mark.parametrize("n", [5, 6])
def test_family_mn_structure(n, m5, m6):
    m = m5 if n == 5 else m6
    assert m.size == comb(n, 2)
    assert m.full_rank == comb(n - 1, 2)
    fs = C.mn_circuits(n)
    for f in fs:
        assert bin(f).count("1") == comb(n - 1, 2)
        assert m.is_circuit(f)
        assert m.is_flat(f) and m.is_cyclic(f)
        assert m.rank(f) == comb(n - 1, 2) - 1
    # F_B is independent with rank C(n-|B|, 2) for |B| >= 2
    for k in range(2, n + 1):
        for b in itertools.combinations(fs, k):
            x = m.ground.full
            for f in b:
                x &= f
            assert m.is_independent(x)
            assert m.rank(x) == comb(n - k, 2)


def test_m5_delta_formula(m5):
    fs = C.mn_circuits(5)
    for k in range(3, 6):
        for sub in itertools.combinations(fs, k):
            assert FL.delta(FL.FlatCollection(m5, sub)) == k - 5 + 1


@given(st.lists(st.integers(0, 5), min_size=3, max_size=6, unique=True))
def test_m6_delta_formula_sampled(m6, idx):
    fs = C.mn_circuits(6)
    sub = [fs[i] for i in idx]
    assert FL.delta(FL.FlatCollection(m6, sub)) == len(sub) - 6 + 1


@given(set_systems(max_elements=6, max_sets=4))
def test_dual_of_transversal_is_totally_flat(system):
    n, sets = system
    m = C.transversal(C.SetSystemPresentation.from_labels(range(n), sets))
    assert FL.is_totally_flat(m.dual())
