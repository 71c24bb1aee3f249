import random
from fractions import Fraction

import numpy as np
import pytest

from valuta.cplx import (
    CMatrix,
    Subspace,
    adapted_basis,
    complex_rank,
    det_identity_check,
    j_apply,
    j_matrix,
    realify,
    sample_subspace,
    sl_mc_element,
)
from valuta.linalg import cabs2, dot
from valuta.symtensor import RMatrix

F = Fraction

E1 = (1, 0, 0, 0)
E2 = (0, 1, 0, 0)
JE1 = (0, 0, 1, 0)


def rand_cmatrix(rng, m):
    return CMatrix.from_rows(
        [[(F(rng.randint(-4, 4), rng.randint(1, 3)), F(rng.randint(-4, 4), rng.randint(1, 3)))
          for _ in range(m)] for _ in range(m)])


class TestRealify:
    def test_identity(self):
        assert realify(CMatrix.identity(3)).entries == RMatrix.identity(6).entries

    def test_i_times_identity_is_j(self):
        a = CMatrix.diag([(0, 1), (0, 1)])
        real = realify(a)
        assert real.entries == j_matrix(2).entries
        assert real.det == 1

    def test_block_determinant(self):
        a = CMatrix.diag([(0, 1), (1, 0)])
        assert realify(a).det == 1
        assert cabs2(a.det_c) == 1

    def test_homomorphism(self):
        rng = random.Random(7)
        for _ in range(20):
            a, b = rand_cmatrix(rng, 2), rand_cmatrix(rng, 2)
            assert realify(a @ b).entries == (realify(a) @ realify(b)).entries

    def test_commutes_with_j(self):
        rng = random.Random(8)
        for m in (2, 3):
            a = rand_cmatrix(rng, m)
            jm = j_matrix(m)
            assert (jm @ realify(a)).entries == (realify(a) @ jm).entries


class TestDetIdentity:
    def test_real_diag(self):
        assert det_identity_check(CMatrix.diag([2, F(1, 2)]))

    def test_complex_diag(self):
        a = CMatrix.diag([(1, 1), (1, 0)])
        assert realify(a).det == 2
        assert det_identity_check(a)

    @pytest.mark.parametrize("m", [2, 3])
    def test_random_exact(self, m):
        rng = random.Random(m)
        for _ in range(50):
            assert det_identity_check(rand_cmatrix(rng, m))


class TestComplexRank:
    def test_complex_line(self):
        assert complex_rank(Subspace.span([E1, JE1])) == 1

    def test_totally_real_plane(self):
        assert complex_rank(Subspace.span([E1, E2])) == 2

    def test_three_dims_cap_at_m(self):
        assert complex_rank(Subspace.span([E1, JE1, E2])) == 2

    def test_float_matches_exact(self):
        exact = Subspace.span([E1, JE1, E2])
        floaty = Subspace.from_orthonormal(
            [tuple(float(x) for x in b) for b in exact.basis], exact=False)
        assert complex_rank(floaty) == 2


def assert_adapted_invariants(original, adapted, tol=None):
    j = original.dim
    d = adapted.complex_rank
    assert adapted.adapted
    assert adapted.dim == j
    for l in range(j - d):
        expected = j_apply(adapted.basis[l])
        got = adapted.basis[d + l]
        if tol is None:
            assert got == expected
        else:
            assert max(abs(a - b) for a, b in zip(got, expected)) <= tol
    for i, u in enumerate(adapted.basis):
        for k, v in enumerate(adapted.basis):
            expected = 1 if i == k else 0
            inner = dot(u, v)
            if tol is None:
                assert inner == expected
            else:
                assert abs(inner - expected) <= tol
    # span preservation: each new vector is its own projection onto the old basis
    for v in adapted.basis:
        proj = [sum(dot(v, b) * b[i] for b in original.basis)
                for i in range(original.ambient)]
        if tol is None:
            assert tuple(proj) == tuple(v)
        else:
            assert max(abs(a - b) for a, b in zip(proj, v)) <= tol


class TestAdaptedBasis:
    def test_complex_line_is_whole(self):
        l = Subspace.span([E1, JE1])
        out = adapted_basis(l)
        assert out.complex_rank == 1
        assert_adapted_invariants(l, out)

    def test_totally_real(self):
        l = Subspace.span([E1, E2])
        out = adapted_basis(l)
        assert out.complex_rank == 2
        assert out.basis == ((F(1), 0, 0, 0), (0, F(1), 0, 0))

    def test_mixed(self):
        l = Subspace.span([E1, JE1, E2])
        out = adapted_basis(l)
        assert out.complex_rank == 2
        assert_adapted_invariants(l, out)

    def test_preserves_complex_rank(self):
        for vectors in ([E1, JE1], [E1, E2], [E1, JE1, E2]):
            l = Subspace.span(vectors)
            assert adapted_basis(l).complex_rank == complex_rank(l)

    @pytest.mark.parametrize("m,j", [(2, 1), (2, 2), (2, 3), (3, 2), (3, 4), (3, 5)])
    def test_float_sampled(self, m, j):
        rng = np.random.default_rng(100 * m + j)
        for _ in range(5):
            l = sample_subspace(m, j, rng)
            out = adapted_basis(l)
            assert_adapted_invariants(l, out, tol=1e-10)
            assert out.complex_rank == min(j, m)


class TestSampling:
    def test_line_never_retries(self):
        assert sample_subspace(2, 1, 0).retries == 0

    def test_plane_samples_maximal(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            s = sample_subspace(2, 2, rng)
            assert s.retries == 0
            assert s.complex_rank == 2

    def test_hyperplane_rank(self):
        assert sample_subspace(2, 3, 5).complex_rank == 2


class TestSlmcElements:
    def test_imaginary_shear(self):
        a = sl_mc_element("shear", 2, params={"p": 0, "q": 1, "im": 1})
        assert a.det_c == (1, 0)
        assert a.entries[0][1] == (0, 1)

    def test_diag(self):
        a = sl_mc_element("diag", 2, params={"values": [F(3, 2), F(2, 3)]})
        assert a.det_c == (1, 0)

    def test_diag_rejects_bad_product(self):
        with pytest.raises(ValueError):
            sl_mc_element("diag", 2, params={"values": [2, 2]})

    def test_shear_product(self):
        a = sl_mc_element("shear", 3, params={"count": 6}, seed=11)
        assert a.det_c == (1, 0)
        assert realify(a).det == 1

    def test_unitary_float(self):
        a = sl_mc_element("unitary-float", 3, seed=3)
        d = a.det_c
        assert d[0] == pytest.approx(1, abs=1e-9)
        assert d[1] == pytest.approx(0, abs=1e-9)

    def test_json_round_trip(self):
        a = sl_mc_element("shear", 2, params={"count": 3}, seed=9)
        assert CMatrix.from_json_dict(a.to_json_dict()).entries == a.entries
