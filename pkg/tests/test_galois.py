import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linclass.galois import (
    NotPrimePower,
    enumerate_hyperplanes,
    enumerate_points,
    field_make,
    incidence,
    incidence_matrix,
    normalize,
    point_coords,
    point_count,
    point_index,
    point_indices,
    points_array,
    row_reduce,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9]


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms(q):
    f = field_make(q)
    els = range(q)
    for a, b, c in itertools.product(els, repeat=3):
        assert f.add[f.add[a, b], c] == f.add[a, f.add[b, c]]
        assert f.mul[f.mul[a, b], c] == f.mul[a, f.mul[b, c]]
        assert f.mul[a, f.add[b, c]] == f.add[f.mul[a, b], f.mul[a, c]]
    for a in els:
        assert f.add[a, 0] == a and f.mul[a, 1] == a
        assert f.add[a, f.neg[a]] == 0
        if a:
            assert f.mul[a, f.inv[a]] == 1
    # characteristic p
    for a in els:
        acc = 0
        for _ in range(f.p):
            acc = f.add[acc, a]
        assert acc == 0


@pytest.mark.parametrize("q", ORDERS)
def test_frobenius_maps_are_automorphisms(q):
    f = field_make(q)
    assert len(f.automorphisms) == f.e
    for sigma in f.automorphisms:
        assert sorted(sigma.tolist()) == list(range(q))
        for a, b in itertools.product(range(q), repeat=2):
            assert sigma[f.add[a, b]] == f.add[sigma[a], sigma[b]]
            assert sigma[f.mul[a, b]] == f.mul[sigma[a], sigma[b]]


def test_prime_field_indices_are_residues():
    f = field_make(7)
    assert all(f.add[a, b] == (a + b) % 7 and f.mul[a, b] == (a * b) % 7 for a in range(7) for b in range(7))


@pytest.mark.parametrize("q", [1, 6, 10, 11, 16])
def test_unsupported_orders(q):
    with pytest.raises(NotPrimePower):
        field_make(q)


@pytest.mark.parametrize("q,k", [(2, 1), (2, 4), (3, 3), (4, 3), (5, 2), (8, 2), (9, 3)])
def test_point_enumeration(q, k):
    pts = points_array(q, k)
    assert pts.shape == (point_count(q, k), k)
    f = field_make(q)
    assert len({tuple(r) for r in pts.tolist()}) == pts.shape[0]
    for i, row in enumerate(pts.tolist()):
        assert normalize(f, row) == tuple(row)
        assert point_index(q, row) == i
        assert point_coords(q, k, i) == tuple(row)
    assert point_indices(q, pts).tolist() == list(range(pts.shape[0]))
    # lexicographic order of coordinate tuples
    assert [tuple(r) for r in pts.tolist()] == sorted(tuple(r) for r in pts.tolist())


@pytest.mark.parametrize("q,k", [(2, 3), (3, 3), (4, 3), (3, 4), (5, 3)])
def test_incidence_counts(q, k):
    f = field_make(q)
    pts = points_array(q, k)
    inc = incidence_matrix(f, pts, pts)
    on_hyperplane = point_count(q, k - 1)
    assert (inc.sum(axis=1) == on_hyperplane).all()
    assert (inc.sum(axis=0) == on_hyperplane).all()
    P, H = enumerate_points(f, k), enumerate_hyperplanes(f, k)
    for h in range(0, len(H), max(1, len(H) // 5)):
        for p in range(0, len(P), max(1, len(P) // 7)):
            assert incidence(f, P[p], H[h]) == inc[h, p]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ORDERS), st.integers(1, 4), st.integers(1, 5), st.data())
def test_row_reduce(q, m, n, data):
    f = field_make(q)
    rows = np.array(data.draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=m, max_size=m)))
    red, piv = row_reduce(f, rows)
    assert len(piv) <= min(m, n)
    for r, c in enumerate(piv):
        assert red[r, c] == 1
        assert all(red[i, c] == 0 for i in range(m) if i != r)
    assert not red[len(piv) :].any()
    # same row space: every original row reduces to zero against the echelon rows
    both = np.vstack([red[: len(piv)], rows])
    assert f.rank(both) == len(piv)
