import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import rank_mod_p
from pureres.field import (Field, _row_reduce_dense, is_zero, kernel_basis, product, rank,
                           row_reduce, transpose)

F = Field()
Q = Field(0)


def test_examples():
    assert rank(F.identity(3), F) == 3
    assert rank(F.zeros((4, 7)), F) == 0
    f5 = Field(5)
    m = f5.asarray([[1, 2], [2, 4]])
    assert rank(m, f5) == 1
    k = kernel_basis(m, f5)
    assert k.shape == (2, 1) and is_zero(product(m, k, f5))
    assert kernel_basis(F.identity(2), F).shape == (2, 0)
    k = kernel_basis(F.asarray([[1, 1]]), F)
    assert k.shape == (2, 1) and (k[0, 0] + k[1, 0]) % F.p == 0 and k[0, 0]


def test_field_validation():
    for bad in (2, 9, 1, -3):
        with pytest.raises(ValueError):
            Field(bad)
    assert str(Q) == "QQ" and Q.is_rational


def test_product_transpose():
    rng = np.random.default_rng(1)
    a, b = F.random(rng, (3, 4)), F.random(rng, (4, 2))
    assert np.array_equal(product(a, F.identity(4), F), a)
    assert np.array_equal(transpose(product(a, b, F)), product(transpose(b), transpose(a), F))


matrices = st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(0, 8), st.integers(0, 10**6))


def _lowrank(rows, cols, r, seed, field):
    rng = np.random.default_rng(seed)
    return product(field.random(rng, (rows, r)), field.random(rng, (r, cols)), field)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_nullity_and_annihilation(spec):
    rows, cols, r, seed = spec
    for field in (F, Q):
        m = _lowrank(rows, cols, r, seed, field) if r else field.zeros((rows, cols))
        k = kernel_basis(m, field)
        assert rank(m, field) + k.shape[1] == cols
        assert is_zero(product(m, k, field))
        assert rank(k, field) == k.shape[1]


@settings(max_examples=40, deadline=None)
@given(matrices)
def test_rank_matches_oracle(spec):
    rows, cols, r, seed = spec
    m = _lowrank(rows, cols, r, seed, F) if r else F.zeros((rows, cols))
    assert rank(m, F) == rank_mod_p(m.tolist(), F.p)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_rank_of_product_bounded(seed):
    rng = np.random.default_rng(seed)
    a = _lowrank(5, 6, int(rng.integers(0, 6)), seed, F)
    b = _lowrank(6, 4, int(rng.integers(0, 5)), seed + 1, F)
    assert rank(product(a, b, F), F) <= min(rank(a, F), rank(b, F))


@pytest.mark.parametrize("shape,r", [((300, 200), 150), ((200, 300), 120), ((700, 450), 333)])
def test_blocked_elimination_agrees_with_dense(shape, r):
    m = _lowrank(shape[0], shape[1], r, 7, F)
    red, piv = row_reduce(m, F)
    red2, piv2 = _row_reduce_dense(m, F)
    assert piv == piv2 and len(piv) == r
    assert np.array_equal(red[:len(piv)], red2[:len(piv2)])
    k = kernel_basis(m, F)
    assert k.shape[1] == shape[1] - r and is_zero(product(m, k, F))


def test_two_primes_agree_on_integer_matrices():
    rng = np.random.default_rng(3)
    for _ in range(20):
        a = rng.integers(-3, 4, size=(4, 3)) @ rng.integers(-3, 4, size=(3, 6))
        ranks = {rank(Field(p).asarray(a.tolist()), Field(p)) for p in (32003, 65521)}
        assert ranks == {rank_mod_p(a.tolist(), 0)}
