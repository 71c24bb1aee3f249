from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valuta.errors import DimensionMismatch
from valuta.symtensor import (
    RMatrix,
    SymTensor,
    gl_action,
    multi_indices,
    sym_product,
    tensor_dim,
    vector_power,
)

F = Fraction


def t(dim, rank, coeffs):
    return SymTensor(dim, rank, coeffs)


e1 = t(2, 1, {(1, 0): 1})
e2 = t(2, 1, {(0, 1): 1})


class TestSymProduct:
    def test_basis_square(self):
        assert sym_product(e1, e1) == t(2, 2, {(2, 0): 1})

    def test_basis_mixed(self):
        assert sym_product(e1, e2) == t(2, 2, {(1, 1): 1})

    def test_bilinear(self):
        a = t(2, 1, {(1, 0): 2})
        b = t(2, 1, {(0, 1): 3})
        assert sym_product(a, b) == t(2, 2, {(1, 1): 6})

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatch):
            sym_product(e1, t(3, 1, {(1, 0, 0): 1}))


class TestVectorPower:
    def test_binomial(self):
        assert vector_power((F(1), F(1)), 2) == t(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})

    def test_single_axis(self):
        assert vector_power((F(2), F(0)), 3) == t(2, 3, {(3, 0): 8})

    def test_weighted(self):
        assert vector_power((F(1), F(2)), 2) == t(2, 2, {(2, 0): 1, (1, 1): 4, (0, 2): 4})

    def test_zeroth_power_is_one(self):
        assert vector_power((F(5), F(7)), 0) == SymTensor.scalar(2, F(1))


class TestGlAction:
    def test_identity(self):
        x = t(2, 2, {(2, 0): F(1, 3), (1, 1): -2})
        assert gl_action(RMatrix.identity(2), x) == x

    def test_diagonal_scaling(self):
        phi = RMatrix.diag([2, 1])
        assert gl_action(phi, e1) == t(2, 1, {(1, 0): 2})

    def test_shear_on_square(self):
        phi = RMatrix.from_rows([[1, 1], [0, 1]])
        sq = t(2, 2, {(0, 2): 1})
        assert gl_action(phi, sq) == t(2, 2, {(2, 0): 1, (1, 1): 2, (0, 2): 1})


class TestTensorDim:
    @pytest.mark.parametrize("n,r,expected", [(4, 2, 10), (7, 0, 1), (4, 3, 20)])
    def test_values(self, n, r, expected):
        assert tensor_dim(n, r) == expected

    @pytest.mark.parametrize("n,r", [(2, 3), (4, 2), (5, 4)])
    def test_counts_monomials(self, n, r):
        assert len(list(multi_indices(n, r))) == tensor_dim(n, r)


# -- property tests -----------------------------------------------------------

rationals = st.builds(
    Fraction, st.integers(min_value=-6, max_value=6), st.integers(min_value=1, max_value=4)
)


def tensors(dim, max_rank=3):
    def build(rank_and_vals):
        rank, vals = rank_and_vals
        keys = sorted(multi_indices(dim, rank))
        return SymTensor(dim, rank, dict(zip(keys, vals)))

    return st.integers(min_value=0, max_value=max_rank).flatmap(
        lambda r: st.tuples(
            st.just(r),
            st.lists(rationals, min_size=tensor_dim(dim, r), max_size=tensor_dim(dim, r)),
        )
    ).map(build)


def matrices(dim):
    return st.lists(
        st.lists(rationals, min_size=dim, max_size=dim), min_size=dim, max_size=dim
    ).map(RMatrix.from_rows)


@settings(max_examples=40, deadline=None)
@given(a=tensors(3), b=tensors(3))
def test_product_commutes(a, b):
    assert sym_product(a, b) == sym_product(b, a)


@settings(max_examples=25, deadline=None)
@given(a=tensors(3, 2), b=tensors(3, 2), c=tensors(3, 2))
def test_product_associates(a, b, c):
    assert sym_product(sym_product(a, b), c) == sym_product(a, sym_product(b, c))


@settings(max_examples=30, deadline=None)
@given(
    x=st.lists(rationals, min_size=3, max_size=3),
    r=st.integers(min_value=0, max_value=2),
    s=st.integers(min_value=0, max_value=2),
)
def test_vector_power_additive(x, r, s):
    assert sym_product(vector_power(x, r), vector_power(x, s)) == vector_power(x, r + s)


@settings(max_examples=20, deadline=None)
@given(phi=matrices(3), psi=matrices(3), a=tensors(3, 2))
def test_action_respects_composition(phi, psi, a):
    assert gl_action(phi @ psi, a) == gl_action(phi, gl_action(psi, a))


def test_zero_coeffs_dropped():
    assert t(2, 2, {(2, 0): 0, (1, 1): 1}) == t(2, 2, {(1, 1): 1})


def test_json_round_trip():
    x = t(2, 2, {(2, 0): F(1, 3), (0, 2): F(-5, 7)})
    data = x.to_json_dict()
    assert data == {"dim": 2, "rank": 2, "coeffs": {"0,2": "-5/7", "2,0": "1/3"}}
    assert SymTensor.from_json_dict(data) == x


def test_scalar_json_uses_empty_key():
    s = SymTensor.scalar(4, F(1, 2))
    data = s.to_json_dict()
    assert data["coeffs"] == {"": "1/2"}
    assert SymTensor.from_json_dict(data) == s
