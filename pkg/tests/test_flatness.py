import itertools
import math

import numpy as np
import pytest
from conftest import mask
from hypothesis import given
from hypothesis import strategies as st
from strategies import matroid_and_flats, small_matroids

from matroidflat import constructions as C
from matroidflat import flatness as FL
from matroidflat import verify as V
from matroidflat.errors import GuardExceeded, InvalidArgumentError


def _coll(m, *sets):
    return FL.FlatCollection(m, tuple(mask(m, *s) for s in sets))


def _literal(m, members):
    # 2^k intersections written out directly
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
            total += (-1) ** r * int(m.table[x])
    return total


def test_delta_matroid_y(matroid_y):
    c = _coll(matroid_y, [1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 5, 6])
    assert FL.delta(c) == 1


def test_delta_twelve(twelve):
    c = _coll(twelve, *V.TWELVE_F)
    assert FL.delta(c) == 1


def test_delta_small_cases(k4):
    assert FL.delta(FL.FlatCollection(k4, ())) == 0
    f = mask(k4, "12", "13", "23")
    assert FL.delta(FL.FlatCollection.of(k4, f)) == 0
    assert FL.delta(FL.FlatCollection.of(k4, f, f)) == 0


def test_non_flat_member_rejected(matroid_y):
    with pytest.raises(FL.NonFlatMember):
        _coll(matroid_y, [1, 2, 3])
    with pytest.raises(InvalidArgumentError):
        _coll(matroid_y, [1, 2, 3])


def test_delta_guard(k4):
    c = FL.FlatCollection(k4, (0,) * 21)
    with pytest.raises(GuardExceeded):
        FL.delta(c)
    assert FL.delta(c, max_size=21) == 0


@given(matroid_and_flats(6, 5))
def test_delta_matches_literal_sum(mf):
    m, members = mf
    assert FL.delta(FL.FlatCollection(m, members)) == _literal(m, members)


@given(matroid_and_flats(6, 2))
def test_pairs_are_submodular(mf):
    m, members = mf
    if len(members) == 2:
        assert FL.delta(FL.FlatCollection(m, members)) <= 0


@given(matroid_and_flats(6, 5), st.randoms())
def test_delta_permutation_invariant(mf, rnd):
    m, members = mf
    shuffled = list(members)
    rnd.shuffle(shuffled)
    assert FL.delta(FL.FlatCollection(m, members)) == FL.delta(FL.FlatCollection(m, shuffled))


# -- reductions ---------------------------------------------------------------

@given(matroid_and_flats(6, 5))
def test_reduce_nested_keeps_delta(mf):
    m, members = mf
    c = FL.FlatCollection(m, members)
    r = FL.reduce_nested(c)
    assert FL.delta(r) == FL.delta(c)
    for f, g in itertools.permutations(r.members, 2):
        assert f & ~g
    assert r.union == c.union


@given(matroid_and_flats(6, 4))
def test_cyclify_does_not_lower_delta(mf):
    m, members = mf
    c = FL.FlatCollection(m, members)
    r = FL.cyclify(c)
    assert len(r) == len(c)
    assert all(m.is_cyclic(f) for f in r.members)
    assert FL.delta(r) >= FL.delta(c)


@given(matroid_and_flats(6, 4))
def test_saturate_does_not_lower_delta(mf):
    m, members = mf
    if len(members) < 2:
        return
    c = FL.FlatCollection(m, members)
    r = FL.saturate(c)
    assert len(r) == len(c)
    assert FL.delta(r) >= FL.delta(c)
    for i, f in enumerate(r.members):
        rest = 0
        for j, g in enumerate(r.members):
            if j != i:
                rest |= g
        assert f & ~m.closure(rest) == 0


def test_saturate_needs_two(k4):
    with pytest.raises(InvalidArgumentError):
        FL.saturate(FL.FlatCollection.of(k4, 0))


# -- flatness degree ----------------------------------------------------------

def test_flatness_degree_matroid_y(matroid_y):
    res = FL.flatness_degree(matroid_y)
    assert res.degree == 2 and res.certified
    assert res.witness.delta_value > 0
    assert len(res.witness.collection) == 3
    assert res.display() == "2"


def test_flatness_degree_twelve(twelve):
    res = FL.flatness_degree(twelve)
    assert res.degree == 2 and res.certified
    assert FL.delta(res.witness.collection) > 0


def test_flatness_degree_k4(k4):
    res = FL.flatness_degree(k4)
    assert res.degree == 3
    assert FL.is_n_flat(k4, 3)
    assert not FL.is_n_flat(k4, 4)


@pytest.mark.parametrize("n, degree", [(5, 4), (6, 5)])
def test_flatness_degree_mn(n, degree, m5, m6):
    m = m5 if n == 5 else m6
    res = FL.flatness_degree(m)
    assert res.certified
    assert res.degree == degree
    assert res.witness.delta_value == 1


def test_uniform_is_totally_flat():
    res = FL.flatness_degree(C.uniform(3, 5))
    assert res.is_omega and res.certified
    assert res.display() == "ω (certified)"
    assert res.to_json()["degree"] == "omega"
    assert FL.is_totally_flat(C.uniform(2, 4))


def test_budget_gives_uncertified_lower_bound(twelve):
    res = FL.flatness_degree(twelve, budget=1)
    assert res.degree is None and not res.certified
    assert "uncertified" in res.display()
    assert res.to_json()["degree"] is None
    with pytest.raises(GuardExceeded):
        FL.is_n_flat(twelve, 3, budget=1)


def test_max_size_bound(matroid_y):
    res = FL.flatness_degree(matroid_y, max_size=2)
    assert not res.certified and res.checked_up_to == 2


def test_n_flat_argument(k4):
    with pytest.raises(InvalidArgumentError):
        FL.is_n_flat(k4, 0)


@given(small_matroids(6))
def test_search_backends_agree(m):
    a = FL.flatness_degree(m, backend="numba")
    b = FL.flatness_degree(m, backend="numpy")
    assert a.degree == b.degree
    if a.witness:
        assert a.witness.collection.members == b.witness.collection.members


@given(small_matroids(6))
def test_n_flat_is_monotone(m):
    res = FL.flatness_degree(m)
    for n in range(1, 5):
        expected = res.is_omega or n <= res.degree
        assert bool(FL.is_n_flat(m, n)) == expected


@given(small_matroids(6))
def test_witness_is_minimal(m):
    res = FL.flatness_degree(m)
    if res.witness is None:
        return
    members = res.witness.collection.members
    assert FL.delta(res.witness.collection) > 0
    for k in range(1, len(members)):
        for sub in itertools.combinations(members, k):
            assert FL.delta(FL.FlatCollection(m, sub)) <= 0


# -- binomial identity --------------------------------------------------------

def test_binom_conventions():
    assert FL.binom(3, -1) == 0 and FL.binom(-1, 0) == 0 and FL.binom(2, 3) == 0
    assert FL.binom(5, 2) == 10


def test_binomial_identity_exhaustive():
    for n in range(13):
        for l in range(n + 1):
            for m in range(l + 1):
                assert FL.binomial_identity_check(n, l, m).holds, (n, l, m)


@given(st.integers(0, 40), st.data())
def test_binomial_identity_random(n, data):
    l = data.draw(st.integers(0, n))
    m = data.draw(st.integers(0, l))
    chk = FL.binomial_identity_check(n, l, m)
    assert chk.holds and chk.lhs == math.comb(n - m, l - m)


def test_mn_delta_agrees_with_identity():
    # Δ over all n circuits is 1; a pair gives the submodularity gap instead
    for n, pair in ((5, -1), (6, -2)):
        m = C.family_Mn(n)
        fs = C.mn_circuits(n)
        assert FL.delta(FL.FlatCollection(m, fs)) == 1
        assert FL.delta(FL.FlatCollection(m, fs[:2])) == pair


def test_delta_dtype_independent(matroid_y):
    c = _coll(matroid_y, [1, 2, 3, 4], [1, 2, 5, 6], [3, 4, 5, 6])
    assert isinstance(FL.delta(c), int)
    assert np.int64(FL.delta(c)) == 1
