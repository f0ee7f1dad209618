import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_monomials, poly_mul
from pureres.errors import RetriesExhausted
from pureres.field import Field, product, rank
from pureres.ring import (Form, RingDesc, complete_intersection_series, dim_forms,
                          is_regular_sequence, monomial_basis, mult_matrix,
                          quotient_hilbert_function, random_form, random_regular_sequence)

R2 = RingDesc(2)


def test_dim_forms_examples():
    assert dim_forms(2, 0) == 1
    assert dim_forms(2, 2) == 6
    assert dim_forms(3, -1) == 0


@given(st.integers(1, 4), st.integers(-3, 9))
def test_dim_forms_against_enumeration_and_pascal(n, d):
    assert dim_forms(n, d) == count_monomials(n + 1, d)
    if d >= 1:
        assert dim_forms(n, d) == dim_forms(n - 1, d) + dim_forms(n, d - 1)


def test_monomial_basis():
    assert monomial_basis(1, 1) == ((1, 0), (0, 1))
    b = monomial_basis(2, 2)
    assert len(b) == 6 and b[0] == (2, 0, 0)
    assert monomial_basis(3, 0) == ((0, 0, 0, 0),)
    # grevlex: x1^2 before x0 x2
    assert b.index((0, 2, 0)) < b.index((1, 0, 1))


def test_mult_matrix_examples():
    assert np.array_equal(mult_matrix(Form.one(R2), 3), R2.field.identity(10))
    R1 = RingDesc(1)
    m = mult_matrix(Form.variable(R1, 0), 1)
    # columns x0, x1 -> rows x0^2, x0 x1, x1^2
    assert m.tolist() == [[1, 0], [0, 1], [0, 0]]
    assert not mult_matrix(Form.zero(R2, 2), 1).any()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3),
       st.integers(0, 10**6))
def test_mult_matrix_composes_and_matches_polynomial_product(n, a, b, d, seed):
    ring = RingDesc(n)
    rng = np.random.default_rng(seed)
    f, g = random_form(ring, a, rng), random_form(ring, b, rng)
    fg = f * g
    assert fg.terms == poly_mul(f.terms, g.terms, ring.field.p)
    lhs = mult_matrix(fg, d)
    rhs = product(mult_matrix(f, d + b), mult_matrix(g, d), ring.field)
    assert np.array_equal(lhs, rhs)
    if f:
        assert rank(mult_matrix(f, d), ring.field) == dim_forms(n, d)


def test_random_form_determinism():
    f1 = random_form(R2, 3, np.random.default_rng(5))
    f2 = random_form(R2, 3, np.random.default_rng(5))
    f3 = random_form(R2, 3, np.random.default_rng(6))
    assert f1 == f2 and f1.degree == 3 and f1 != f3


def test_form_vector_roundtrip_and_json():
    f = random_form(R2, 4, np.random.default_rng(0))
    assert Form.from_vector(R2, 4, f.to_vector()) == f
    assert Form.from_json(R2, 4, f.to_json()) == f
    with pytest.raises(ValueError):
        Form(R2, 2, {(1, 0, 0): 1})


def test_regular_sequences():
    rng = np.random.default_rng(0)
    lin = random_regular_sequence(R2, 1, 3, rng)
    assert quotient_hilbert_function(lin, 2) == [1, 0, 0]
    quad = random_regular_sequence(R2, 2, 3, rng)
    assert quotient_hilbert_function(quad, 4) == [1, 3, 3, 1, 0]
    assert complete_intersection_series(2, 2, 3, 4) == [1, 3, 3, 1, 0]
    for n, d in [(2, 3), (3, 2)]:
        forms = random_regular_sequence(RingDesc(n), d, n + 1, rng)
        top = (n + 1) * (d - 1)
        hf = quotient_hilbert_function(forms, top + 2)
        assert hf[top] == 1 and hf[top + 1:] == [0, 0]


def test_non_regular_sequence_detected():
    x = [Form.variable(R2, i) for i in range(3)]
    assert not is_regular_sequence([x[0], x[1], x[0]], 2)
    with pytest.raises(RetriesExhausted):
        # a generator that only produces zero forms never yields a regular sequence
        random_regular_sequence(RingDesc(1, Field(3)), 1, 2, _AlwaysZero(), retries=1)


class _AlwaysZero:
    def integers(self, lo, hi, size=None, dtype=None):
        return np.zeros(size, dtype=np.int64)
