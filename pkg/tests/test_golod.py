import itertools
import random

import pytest

from transverse.errors import DomainError
from transverse.exterior import k_is_zero, k_wedge, k_with_ring
from transverse.golod import (
    golod_basis,
    golod_poincare,
    golod_resolution,
    koszul_homology,
    kunneth_map,
    massey_identity_residual,
    massey_mu,
    tor_dims,
    tor_independence,
    verify_golod,
)
from transverse.ideals import MonomialIdeal, ideal_product, is_transverse
from transverse.poly import Monomial, Ring

from conftest import ideal


def expand_series(num, den, n):
    """Oracle: power-series coefficients of num/den by naive long division."""
    coeffs = []
    for k in range(n + 1):
        c = num[k] if k < len(num) else 0
        for j in range(1, k + 1):
            d = den[j] if j < len(den) else 0
            c -= d * coeffs[k - j]
        coeffs.append(c)
    return coeffs


class TestKoszulHomology:
    def test_complete_intersection(self, R4):
        H = koszul_homology(ideal(R4, "x1", "x2"))
        assert H.dims() == {1: 2, 2: 1}
        # representatives: e1, e2 in degree 1 and e1^e2 in degree 2
        reps = [c.rep for c in H.classes_at(1)]
        assert [set(r.keys()) for r in reps] == [{(0,)}, {(1,)}]
        assert [set(c.rep.keys()) for c in H.classes_at(2)] == [{(0, 1)}]

    def test_principal_xy(self, Rxy):
        H = koszul_homology(ideal(Rxy, "x*y"))
        assert H.dims() == {1: 1}

    def test_flagship_product(self, R4, flagship):
        H = koszul_homology(ideal_product(*flagship))
        assert H.dims() == {1: 4, 2: 4, 3: 1}
        assert H.graded_dims() == {(1, 2): 4, (2, 3): 4, (3, 4): 1}

    def test_total_dims_equal_betti(self, R4):
        from transverse.complexes import betti_table
        from transverse.resolutions import minimize_complex, taylor_complex

        rng = random.Random(360)
        for _ in range(6):
            gens = [
                Monomial(tuple(rng.randint(0, 2) for _ in range(4)))
                for _ in range(rng.randint(1, 3))
            ]
            I = MonomialIdeal(R4, tuple(gens))
            if I.is_unit or I.is_zero:
                continue
            H = koszul_homology(I)
            table = betti_table(minimize_complex(taylor_complex(I), certify=False))
            for i in range(1, 5):
                want = sum(v for (ii, _), v in table.entries.items() if ii == i)
                assert H.dims().get(i, 0) == want


class TestKunneth:
    def test_principal_pair(self, Rxy):
        cert = kunneth_map(ideal(Rxy, "x"), ideal(Rxy, "y"))
        assert cert.ok
        assert [(r.n, r.dim_target) for r in cert.rows] == [(1, 1)]

    def test_principal_image_is_not_a_boundary(self, Rxy):
        # the image z1 ^ d(z2) of the generator pair is a multiple of y*e1
        # (up to sign), and it generates H_1(R/(xy))
        from transverse.exterior import k_diff, k_wedge, k_with_ring

        I, J = ideal(Rxy, "x"), ideal(Rxy, "y")
        HI, HJ = koszul_homology(I), koszul_homology(J)
        HIJ = koszul_homology(ideal_product(I, J))
        quotient = ideal_product(I, J).quotient_ring()
        z1 = k_with_ring(HI.classes[0].rep, quotient)
        z2 = k_with_ring(HJ.classes[0].rep, quotient)
        image = k_wedge(z1, k_diff(quotient, z2))
        assert set(image) == {(0,)}
        assert str(image[(0,)]) in ("y", "-y")
        assert not HIJ.is_boundary(1, 2, k_with_ring(image, Rxy))

    def test_flagship(self, R4, flagship):
        cert = kunneth_map(*flagship)
        assert cert.ok
        assert cert.dims() == {1: 4, 2: 4, 3: 1}

    def test_symmetry(self, R4, flagship):
        I, J = flagship
        a = kunneth_map(I, J)
        b = kunneth_map(J, I)
        assert a.dims() == b.dims()

    def test_dimension_identity_random_pairs(self, R4):
        rng = random.Random(314)
        tested = 0
        while tested < 6:
            gens1 = [
                Monomial((rng.randint(0, 2), rng.randint(0, 2), 0, 0))
                for _ in range(rng.randint(1, 2))
            ]
            gens2 = [
                Monomial((0, 0, rng.randint(0, 2), rng.randint(0, 2)))
                for _ in range(rng.randint(1, 2))
            ]
            I = MonomialIdeal(R4, tuple(gens1))
            J = MonomialIdeal(R4, tuple(gens2))
            if I.is_zero or I.is_unit or J.is_zero or J.is_unit:
                continue
            tested += 1
            HI, HJ = koszul_homology(I), koszul_homology(J)
            HIJ = koszul_homology(ideal_product(I, J))
            for n in range(1, 8):
                want = sum(
                    HI.dims().get(i, 0) * HJ.dims().get(n + 1 - i, 0)
                    for i in range(1, n + 1)
                )
                assert HIJ.dims().get(n, 0) == want
            assert kunneth_map(I, J, HI=HI, HJ=HJ, HIJ=HIJ).ok

    def test_requires_transverse(self, R4):
        with pytest.raises(DomainError):
            kunneth_map(ideal(R4, "x1", "x2"), ideal(R4, "x2", "x3"))


class TestTorIndependence:
    def test_transverse_pair(self, flagship):
        assert tor_independence(*flagship)

    def test_non_transverse_pair(self, R4):
        assert not tor_independence(ideal(R4, "x1", "x2"), ideal(R4, "x2", "x3"))

    def test_self_principal(self, Rxy):
        I = ideal(Rxy, "x")
        assert not tor_independence(I, I)
        assert (1, 1) in tor_dims(I, I)

    def test_matches_transversality(self, R4):
        rng = random.Random(2718)
        tested = 0
        while tested < 8:
            gens1 = [
                Monomial(tuple(rng.randint(0, 1) for _ in range(4)))
                for _ in range(rng.randint(1, 2))
            ]
            gens2 = [
                Monomial(tuple(rng.randint(0, 1) for _ in range(4)))
                for _ in range(rng.randint(1, 2))
            ]
            I = MonomialIdeal(R4, tuple(gens1))
            J = MonomialIdeal(R4, tuple(gens2))
            if I.is_zero or I.is_unit or J.is_zero or J.is_unit:
                continue
            tested += 1
            # rigidity: transversality (Tor_1 = 0) decides everything
            assert tor_independence(I, J) == is_transverse(I, J)


class TestMassey:
    def test_singleton_is_representative(self, R4, flagship):
        basis = golod_basis(*flagship)
        for k in range(len(basis.pairs)):
            mu = massey_mu(basis, (k,))
            diff = {
                S: p - basis.h[k].get(S, p * 0) for S, p in mu.items()
            }
            assert all(p.is_zero for p in diff.values())
            assert set(mu) == set(basis.h[k])

    def test_repeated_factor_vanishes(self, Rxy):
        basis = golod_basis(ideal(Rxy, "x"), ideal(Rxy, "y"))
        assert len(basis.pairs) == 1
        assert k_is_zero(massey_mu(basis, (0, 0)))

    def test_identity_exhaustive_small(self, Rxy):
        basis = golod_basis(ideal(Rxy, "x"), ideal(Rxy, "y"))
        for p in range(1, 4):
            for word in itertools.product(range(len(basis.pairs)), repeat=p):
                assert k_is_zero(massey_identity_residual(basis, word))

    def test_identity_flagship_pairs(self, R4, flagship):
        basis = golod_basis(*flagship)
        for p in range(1, 3):
            for word in itertools.product(range(len(basis.pairs)), repeat=p):
                assert k_is_zero(massey_identity_residual(basis, word))


class TestGolodResolution:
    def test_principal_pair_ranks(self, Rxy):
        C = golod_resolution(ideal(Rxy, "x"), ideal(Rxy, "y"), 4)
        assert C.total_ranks() == (1, 2, 2, 2, 2)

    def test_flagship_ranks(self, R4, flagship):
        C = golod_resolution(*flagship, n_max=5)
        assert C.total_ranks() == (1, 4, 10, 24, 58, 140)

    def test_certificate_attached(self, Rxy):
        C = golod_resolution(ideal(Rxy, "x"), ideal(Rxy, "y"), 3)
        cert = C.meta["certificate"]
        assert cert.valid and cert.minimal
        assert not cert.strand_failures and not cert.coker_failures

    def test_requires_transverse(self, R4):
        with pytest.raises(DomainError):
            golod_resolution(ideal(R4, "x1", "x2"), ideal(R4, "x2", "x3"), 3)


class TestPoincare:
    def test_flagship_series(self, R4, flagship):
        ps = golod_poincare(*flagship, n_max=6)
        assert ps.numerator == (1, 4, 6, 4, 1)
        assert ps.denominator == (1, 0, -4, -4, -1)
        assert list(ps.coefficients) == expand_series(
            list(ps.numerator), list(ps.denominator), 6
        )
        assert ps.coefficients == (1, 4, 10, 24, 58, 140, 338)

    def test_principal_series(self, Rxy):
        ps = golod_poincare(ideal(Rxy, "x"), ideal(Rxy, "y"), 6)
        assert ps.numerator == (1, 2, 1)
        assert ps.denominator == (1, 0, -1)
        # (1+t)^2/(1-t^2) = (1+t)/(1-t): all later coefficients are 2
        assert ps.coefficients == (1, 2, 2, 2, 2, 2, 2)

    def test_oracle_expansion(self, R4, flagship):
        ps = golod_poincare(*flagship, n_max=8)
        assert list(ps.coefficients) == expand_series(
            list(ps.numerator), list(ps.denominator), 8
        )


class TestVerifyGolod:
    def test_flagship(self, R4, flagship):
        cert = verify_golod(*flagship, n_max=5)
        assert cert.ok
        assert cert.ranks == (1, 4, 10, 24, 58, 140)
        assert cert.ranks == cert.series_coeffs[:6]

    def test_principal(self, Rxy):
        cert = verify_golod(ideal(Rxy, "x"), ideal(Rxy, "y"), n_max=6)
        assert cert.ok

    def test_triviality_of_products(self, R4, flagship):
        # every pairwise product of positive-degree classes bounds
        cert = verify_golod(*flagship, n_max=2)
        assert not cert.triviality_failures


def test_multi_ideal_kunneth_dims(R4):
    # iterated formula for a sequentially transverse triple in 6 variables
    R6 = Ring(("x1", "x2", "x3", "x4", "x5", "x6"))
    fam = [
        ideal(R6, "x1", "x2"),
        ideal(R6, "x3", "x4"),
        ideal(R6, "x5", "x6"),
    ]
    from transverse.ideals import is_sequentially_transverse, product_of

    assert is_sequentially_transverse(fam)
    Hs = [koszul_homology(I) for I in fam]
    H = koszul_homology(product_of(fam))
    for ell in range(1, 8):
        want = 0
        for j1 in range(1, ell + 3):
            for j2 in range(1, ell + 3):
                j3 = ell + 2 - j1 - j2
                if j3 < 1:
                    continue
                want += (
                    Hs[0].dims().get(j1, 0)
                    * Hs[1].dims().get(j2, 0)
                    * Hs[2].dims().get(j3, 0)
                )
        assert H.dims().get(ell, 0) == want


def test_three_fold_star_resolves_triple_product():
    from transverse.complexes import star_product, verify_resolution
    from transverse.ideals import product_of
    from transverse.resolutions import minimize_complex, taylor_complex

    R6 = Ring(tuple(f"x{i + 1}" for i in range(6)))
    fam = [
        ideal(R6, "x1", "x2"),
        ideal(R6, "x3", "x4"),
        ideal(R6, "x5", "x6"),
    ]
    F = [minimize_complex(taylor_complex(I), certify=False) for I in fam]
    S = star_product(star_product(F[0], F[1]), F[2])
    assert S.total_ranks() == (1, 8, 12, 6, 1)
    assert verify_resolution(S, product_of(fam)).ok


def test_golod_with_non_ci_factor(R4):
    I = ideal(R4, "x1^2", "x1*x2")
    J = ideal(R4, "x3", "x4")
    cert = verify_golod(I, J, n_max=4)
    assert cert.ok
    assert cert.ranks == (1, 4, 10, 24, 58)


def test_golod_three_by_two_complete_intersections():
    R5 = Ring(tuple(f"x{i + 1}" for i in range(5)))
    I = ideal(R5, "x1", "x2", "x3")
    J = ideal(R5, "x4", "x5")
    cert = verify_golod(I, J, n_max=4)
    assert cert.ok
    # oracle: (1+t)^5 / (1 - 6t^2 - 9t^3 - 5t^4 - t^5)
    assert list(cert.ranks) == expand_series(
        [1, 5, 10, 10, 5, 1], [1, 0, -6, -9, -5, -1], 4
    )
    assert cert.ranks == (1, 5, 16, 49, 151)
