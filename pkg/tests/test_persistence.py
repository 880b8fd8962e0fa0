import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_filtration
from oracles import brute_betti
from toporecon import alpha_filtration, betti_numbers, compute_persistence
from toporecon import _kernels_py
from toporecon._accel import kernels
from toporecon.filtration import Filtration


def test_two_points():
    f = Filtration([(0,), (1,), (0, 1)], [0.0, 0.0, 0.5])
    pd = compute_persistence(f)
    zero = pd.in_dim(0)
    assert len(zero) == 2
    finite = [p for p in zero if p.is_finite]
    assert [(p.birth, p.death) for p in finite] == [(0.0, 0.5)]
    assert [(p.birth, p.death) for p in pd.essential(0)] == [(0.0, math.inf)]


def test_tetrahedron_boundary_then_interior():
    s = [c for k in (1, 2, 3) for c in itertools.combinations(range(4), k)]
    vals = [0.0 if len(c) < 3 else 1.0 + 0.1 * i for i, c in enumerate(s)]
    f = Filtration(s + [(0, 1, 2, 3)], vals + [5.0])
    pd = compute_persistence(f)
    twos = pd.finite(2)
    assert len(twos) == 1
    assert twos[0].birth == max(vals)
    assert twos[0].death == 5.0
    assert f.simplices[twos[0].neg_simplex] == (0, 1, 2, 3)


def test_abcde_pairs(abcde):
    pd = compute_persistence(abcde)
    twos = {(p.birth, p.death): p for p in pd.finite(2)}
    assert set(twos) == {(1.0, 4.0), (2.0, 3.0)}
    p = twos[(1.0, 4.0)]
    assert abcde.simplices[p.pos_simplex] == (0, 1, 2)
    assert abcde.simplices[p.neg_simplex] == (1, 2, 3, 4)


def test_octahedron_surface():
    faces = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    s = {}
    for t in faces:
        for k in (1, 2, 3):
            for c in itertools.combinations(t, k):
                s[c] = 0.0
    f = Filtration.from_complex(s)
    assert betti_numbers(f, 0.0) == (1, 0, 1)
    assert brute_betti(f, 0.0) == (1, 0, 1)


def test_vertices_only_at_zero():
    pts = np.random.default_rng(0).normal(size=(9, 3))
    f = alpha_filtration(pts)
    assert betti_numbers(f, 0.0) == (9, 0, 0)


@pytest.mark.parametrize("seed", range(5))
def test_full_delaunay_complex_is_contractible(seed):
    pts = np.random.default_rng(seed).normal(size=(12, 3))
    f = alpha_filtration(pts)
    top = float(f.values[-1])
    assert betti_numbers(f, top) == (1, 0, 0)
    assert brute_betti(f, top) == (1, 0, 0)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(6, 12))
def test_pairs_match_rank_oracle(seed, n):
    rng = np.random.default_rng(seed)
    f = alpha_filtration(rng.normal(size=(n, 3)))
    pd = compute_persistence(f)
    for r in np.unique(f.values)[:: max(1, len(f) // 25)]:
        assert betti_numbers(f, r, pd) == brute_betti(f, r)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_random_monotone_filtration_matches_oracle(seed):
    f = random_filtration(np.random.default_rng(seed), n_points=7, max_tets=30)
    pd = compute_persistence(f)
    for r in np.unique(f.values):
        assert betti_numbers(f, r, pd) == brute_betti(f, r)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_each_simplex_in_one_pair(seed):
    f = alpha_filtration(np.random.default_rng(seed).normal(size=(15, 3)))
    pd = compute_persistence(f)
    seen = []
    for p in pd:
        assert p.death >= p.birth
        seen.append(p.pos_simplex)
        if p.neg_simplex is not None:
            seen.append(p.neg_simplex)
            assert f.dims[p.neg_simplex] == p.dim + 1
        assert f.dims[p.pos_simplex] == p.dim
    assert sorted(seen) == list(range(len(f)))


def test_reduction_without_clearing_gives_same_pairs():
    # plain left-to-right reduction as an independent reference
    f = alpha_filtration(np.random.default_rng(5).normal(size=(40, 3)))
    cols = [set(f.boundary(j).tolist()) for j in range(len(f))]
    low_of = {}
    low = [-1] * len(f)
    for j in range(len(f)):
        c = cols[j]
        while c and max(c) in low_of:
            c ^= cols[low_of[max(c)]]
        if c:
            low_of[max(c)] = j
            low[j] = max(c)
    assert list(kernels.reduce_boundary(f.indptr, f.indices, f.dims)) == low
    assert list(_kernels_py.reduce_boundary(f.indptr, f.indices, f.dims)) == low


def test_negative_radius_rejected():
    f = Filtration([(0,)], [0.0])
    with pytest.raises(ValueError):
        betti_numbers(f, -1.0)
