"""Spread and model isomorphism checks."""

import numpy as np
import pytest

from blockcone import pg
from blockcone.model import make_model
from blockcone.pg import GeometryError, Subspace, meet, span, span_in


@pytest.fixture(scope="module")
def tiny():
    return make_model(2, 2, 2)  # PG(2,4) inside PG(4,2)


@pytest.fixture(scope="module")
def big():
    return make_model(4, 3, 3)  # PG(3,64) inside PG(9,4)


def test_spread_partitions_sigma_exhaustive(tiny):
    sp = tiny.spread
    seen = []
    for i in range(sp.n_elements):
        ranks = pg.rank_batch(sp.sigma_space, sp.element_point_vecs(i))
        seen.append(ranks)
        assert len(ranks) == (tiny.q1**tiny.n - 1) // (tiny.q1 - 1)
    allr = np.concatenate(seen)
    assert len(np.unique(allr)) == len(allr) == sp.sigma_space.n_points


def test_spread_partitions_sigma_q3(tiny):
    m = make_model(3, 2, 2)
    sp = m.spread
    allr = np.concatenate([pg.rank_batch(sp.sigma_space,
                                         sp.element_point_vecs(i))
                           for i in range(sp.n_elements)])
    assert len(np.unique(allr)) == len(allr) == sp.sigma_space.n_points


def test_spread_elements_pairwise_disjoint_sampled(big):
    rng = np.random.default_rng(0)
    for _ in range(30):
        i, j = rng.integers(0, big.spread.n_elements, size=2)
        if i == j:
            continue
        A = big.element_subspace(int(i))
        B = big.element_subspace(int(j))
        assert A.dim == B.dim == big.n - 1
        assert meet(A, B).dim == -1


def test_element_of_vec_inverts_enumeration(big):
    rng = np.random.default_rng(1)
    for i in rng.integers(0, big.spread.n_elements, size=25):
        vecs = big.spread.element_point_vecs(int(i))
        for v in vecs[:: max(1, len(vecs) // 4)]:
            assert big.spread.element_of_vec(v) == i


@pytest.mark.parametrize("fix", ["tiny", "big"])
def test_point_map_roundtrip(fix, request):
    model = request.getfixturevalue(fix)
    rng = np.random.default_rng(2)
    pi = model.pi_space
    for r in rng.integers(0, pi.n_points, size=200):
        v = pg.unrank(pi, int(r))
        back = model.pg_to_bc(v)
        if isinstance(back, tuple):
            assert back[0] == "spread"
            assert np.array_equal(model.spread_to_pg_vec(back[1]), v)
        else:
            assert np.array_equal(model.bc_to_pg_vec(back), v)


@pytest.mark.parametrize("fix,n_pairs", [("tiny", 10_000), ("big", 500)])
def test_incidence_isomorphism(fix, n_pairs, request):
    """Incidence in PG(r, q1^n) iff representation is inside the blow-up."""
    model = request.getfixturevalue(fix)
    rng = np.random.default_rng(3)
    pi = model.pi_space
    pts = rng.integers(0, pi.n_points, size=n_pairs)
    hyps = rng.integers(0, pi.n_points, size=n_pairs)
    for pr, hr in zip(pts, hyps):
        v = pg.unrank(pi, int(pr))
        a = pg.unrank(pi, int(hr))
        inc = pg.incident(v, a, pi)
        blow = model.hyperplane_blowup(a)
        rep = model.pg_to_bc(v)
        if isinstance(rep, tuple):
            inside = blow.contains_sub(model.element_subspace(rep[1]))
        else:
            inside = blow.contains(rep)
        assert inc == inside


def test_blowup_dimension(big):
    rng = np.random.default_rng(4)
    for r in rng.integers(0, big.pi_space.n_points, size=20):
        blow = big.hyperplane_blowup(pg.unrank(big.pi_space, int(r)))
        assert blow.dim == (big.r - 1) * big.n  # hyperplane blows to this


@pytest.mark.parametrize("fix", ["tiny", "big"])
def test_pi_lines_blow_to_n_subspaces(fix, request):
    model = request.getfixturevalue(fix)
    pi = model.pi_space
    rng = np.random.default_rng(5)
    done = 0
    while done < 10:
        a, b = rng.integers(0, pi.n_points, size=2)
        if a == b:
            continue
        line = span_in(pi, [pg.unrank(pi, int(a)), pg.unrank(pi, int(b))])
        if line.dim != 1:
            continue
        parts = []
        for v in line.point_vecs():
            rep = model.pg_to_bc(v)
            if isinstance(rep, tuple):
                parts.append(model.element_subspace(rep[1]))
            else:
                parts.append(span_in(model.sigma_prime, [rep]))
        S = span(parts)
        assert model.is_pi_line(S)
        for part in parts:
            assert S.contains_sub(part)
        done += 1


def test_regulus_of_line(tiny):
    # a line of Sigma not inside one element meets q1+1 elements
    sp = tiny.sigma_prime
    t = tiny.Xprime.point_vecs()[0]
    p = tiny.vertex_p
    line = span_in(sp, [p, t])
    reg = tiny.regulus_of_line(line)
    assert len(reg) == tiny.q1 + 1
    with pytest.raises(GeometryError):
        tiny.regulus_of_line(Subspace(sp, tiny.X.mat[:2]))


def test_sigma_and_frame_choices(big):
    assert big.sigma.dim == big.r * big.n - 1
    assert big.X.dim == big.Xprime.dim == big.n - 1
    assert meet(big.X, big.Xprime).dim == -1
    assert big.X.contains(big.vertex_p)
    # X is the element through the rank-0 big point, p its least point
    assert big.spread_element_of(big.X.point_vecs()[0]) == 0
    man = big.manifest()
    for key in ("q1", "n", "r", "small_modulus", "big_modulus", "basis",
                "x_index", "xprime_index", "vertex_p"):
        assert key in man


def test_make_model_rejects_non_prime_power():
    with pytest.raises(GeometryError):
        make_model(6, 2, 2)
