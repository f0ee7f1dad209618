import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rank_mod_p, tits
from pureres.complexes import split_bundle
from pureres.errors import NotInjective, PreconditionViolated, RankTooSmall
from pureres.field import Field
from pureres.homext import exceptionality_check, hom_dim
from pureres.kronecker import (ALWAYS_DECOMPOSABLE, GENERIC_SIMPLE, KroneckerRep,
                               global_injectivity, is_schur_root, random_rep, realize,
                               rep_direct_sum, rep_hom_ext, sigma_basis, simplicity_verdict,
                               tits_form)
from pureres.ring import RingDesc

F = Field()


def steiner_sigma(n):
    ring = RingDesc(n)
    return sigma_basis(split_bundle(ring, [-1], "O(-1)"), split_bundle(ring, [0], "O"))


def hom_oracle(r1, r2):
    """dim Hom by solving f2 A_i = B_i f1 entrywise, in row-major unknowns."""
    a1, b1, a2, b2 = r1.a, r1.b, r2.a, r2.b
    nf1, nf2 = a2 * a1, b2 * b1
    rows = []
    for A, B in zip(r1.mats, r2.mats):
        A, B = A.tolist(), B.tolist()
        for i in range(b2):
            for j in range(a1):
                row = [0] * (nf1 + nf2)
                # (f2 A)[i, j] = sum_k f2[i, k] A[k, j]
                for k in range(b1):
                    row[nf1 + i * b1 + k] += A[k][j]
                # (B f1)[i, j] = sum_k B[i, k] f1[k, j]
                for k in range(a2):
                    row[k * a1 + j] -= B[i][k]
                rows.append(row)
    n = nf1 + nf2
    return n - (rank_mod_p(rows, F.p) if rows and n else 0)


def test_tits_examples():
    assert tits_form(35, 1, 35) == 1
    assert tits_form(5, 1, 0) == 1 and tits_form(3, 0, 1) == 1
    assert tits_form(3, 1, 5) == 11
    assert tits_form(4, 2, 5) == tits(4, 2, 5) == -11


def test_schur_roots():
    assert is_schur_root(3, 2, 2) and is_schur_root(4, 1, 4)
    assert not is_schur_root(3, 1, 5)
    assert simplicity_verdict(4, 1, 4) == GENERIC_SIMPLE
    assert simplicity_verdict(3, 1, 5) == ALWAYS_DECOMPOSABLE
    for w in (1, 2):
        with pytest.raises(PreconditionViolated):
            is_schur_root(w, 1, 1)
        with pytest.raises(PreconditionViolated):
            simplicity_verdict(w, 1, 1)


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 5), st.integers(0, 6), st.integers(0, 6), st.integers(0, 10**6))
def test_hom_minus_ext_is_tits_form(w, a, b, seed):
    r = random_rep(w, a, b, np.random.default_rng(seed))
    h, e = rep_hom_ext(r, r)
    assert h - e == tits(w, a, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 4), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
       st.integers(0, 3), st.integers(0, 10**6))
def test_hom_matches_oracle(w, a1, b1, a2, b2, seed):
    rng = np.random.default_rng(seed)
    r1, r2 = random_rep(w, a1, b1, rng), random_rep(w, a2, b2, rng)
    assert rep_hom_ext(r1, r2)[0] == hom_oracle(r1, r2)


def test_direct_sum_additivity():
    rng = np.random.default_rng(1)
    r1, r2, s = random_rep(4, 1, 4, rng), random_rep(4, 2, 5, rng), random_rep(4, 1, 3, rng)
    ds = rep_direct_sum(r1, r2)
    assert ds.dim == (3, 9)
    assert rep_hom_ext(ds, s)[0] == rep_hom_ext(r1, s)[0] + rep_hom_ext(r2, s)[0]
    assert rep_hom_ext(s, ds)[1] == rep_hom_ext(s, r1)[1] + rep_hom_ext(s, r2)[1]
    # a direct sum has at least the two projections as endomorphisms
    assert rep_hom_ext(ds, ds)[0] >= 2


def test_large_tits_form_forces_decomposable():
    rng = np.random.default_rng(2)
    for w, a, b in [(3, 1, 6), (4, 1, 7), (3, 2, 9)]:
        assert tits_form(w, a, b) > 1
        r = random_rep(w, a, b, rng)
        assert rep_hom_ext(r, r)[0] >= 2


def test_json_roundtrip():
    r = random_rep(4, 2, 5, np.random.default_rng(3))
    back = KroneckerRep.from_json(json.loads(r.dumps()))
    assert back.dumps() == r.dumps() and all(np.array_equal(x, y) for x, y in zip(r.mats, back.mats))
    with pytest.raises(ValueError):
        KroneckerRep.from_json({"w": 3, "a": 1, "b": 1})
    with pytest.raises(ValueError):
        KroneckerRep(3, 1, 1, [[1], [2]])


def test_global_injectivity():
    sig = steiner_sigma(2)
    assert sig.w == 3
    rng = np.random.default_rng(0)
    assert global_injectivity(random_rep(3, 1, 3, rng), sig, 20, rng).passed
    # equal columns make alpha(P) drop rank everywhere
    A = [np.array([[x], [x]]) for x in (1, 2, 3)]
    bad = KroneckerRep(3, 2, 2, [np.hstack([m, m]) for m in A])
    v = global_injectivity(bad, sig, 5, rng)
    assert not v.passed and "witness" in v.provenance
    assert global_injectivity(random_rep(3, 0, 4, rng), sig, 5, rng).passed
    with pytest.raises(ValueError):
        global_injectivity(random_rep(4, 1, 4, rng), sig, 5, rng)


def test_realize_errors_and_split_case():
    sig = steiner_sigma(2)
    rng = np.random.default_rng(4)
    with pytest.raises(RankTooSmall):
        realize(random_rep(3, 1, 2, rng), sig, rng)
    A = [np.array([[1, 1], [2, 2], [0, 0], [5, 5]]) * k for k in (1, 2, 3)]
    with pytest.raises(NotInjective):
        realize(KroneckerRep(3, 2, 4, A), sig, rng)
    C = realize(random_rep(3, 0, 3, rng), sig, rng)
    assert C.is_split() and C.terms == [(0, 0, 0)]


def test_exceptional_tangent_on_p2():
    rng = np.random.default_rng(5)
    C = realize(random_rep(3, 1, 3, rng), steiner_sigma(2), rng)
    assert C.rank == 2 and exceptionality_check(C).passed


@pytest.mark.parametrize("n,dims", [(2, [(1, 3), (1, 4), (2, 6), (0, 2)]),
                                    (3, [(1, 4), (1, 5), (2, 5), (0, 3)])])
def test_hom_agreement_rep_and_bundle(n, dims):
    sig = steiner_sigma(n)
    rng = np.random.default_rng(n)
    reps = [random_rep(n + 1, a, b, rng) for a, b in dims]
    bundles = [realize(r, sig, rng) for r in reps]
    for r1, C1 in zip(reps, bundles):
        for r2, C2 in zip(reps, bundles):
            assert rep_hom_ext(r1, r2)[0] == hom_dim(C1, C2)
