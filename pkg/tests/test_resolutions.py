import random

import pytest

from transverse.complexes import (
    betti_table,
    is_minimal,
    strand_homology_dim,
    validate_complex,
    verify_resolution,
)
from transverse.errors import DomainError, ExactnessError
from transverse.ideals import MonomialIdeal, ideal_product
from transverse.poly import Polynomial
from transverse.resolutions import (
    koszul_complex,
    lift_comparison_map,
    minimize_complex,
    taylor_complex,
)

from conftest import ideal
from test_complexes import random_monomial_ideal


def _vars(ring, *idx):
    return [ring.variable(i) for i in idx]


class TestKoszul:
    def test_two_variables(self, Rxy):
        K = koszul_complex(_vars(Rxy, 0, 1))
        assert K.total_ranks() == (1, 2, 1)
        col = K.diff(2).column(0)
        assert str(col[0]) == "-y" and str(col[1]) == "x"

    def test_binomial_ranks(self, R4):
        K = koszul_complex(_vars(R4, 0, 1, 2, 3))
        assert K.total_ranks() == (1, 4, 6, 4, 1)
        assert validate_complex(K).ok

    def test_single_monomial(self, R4):
        p = Polynomial.from_monomial(R4, R4.parse_monomial("x1*x3"))
        K = koszul_complex([p])
        assert K.total_ranks() == (1, 1)
        assert K.diff(1).entry(0, 0) == p

    def test_general_homogeneous_elements(self, Rxy):
        x, y = Rxy.variable(0), Rxy.variable(1)
        K = koszul_complex([x + y, x * y])
        assert validate_complex(K).ok

    def test_rejects_inhomogeneous(self, Rxy):
        x, y = Rxy.variable(0), Rxy.variable(1)
        with pytest.raises(DomainError):
            koszul_complex([x + y * y])


class TestTaylor:
    def test_flagship_binomial_ranks(self, R4, flagship):
        IJ = ideal_product(*flagship)
        T = taylor_complex(IJ)
        assert T.total_ranks() == (1, 4, 6, 4, 1)

    def test_coprime_equals_koszul(self, Rxy):
        T = taylor_complex(ideal(Rxy, "x", "y"))
        K = koszul_complex(_vars(Rxy, 0, 1))
        assert T.degrees == K.degrees
        for i in (1, 2):
            assert T.diff(i).entries == K.diff(i).entries

    def test_random_taylor_valid_and_resolves(self, R4):
        rng = random.Random(2024)
        count = 0
        for _ in range(25):
            I = random_monomial_ideal(R4, rng)
            if I.is_unit:
                continue
            count += 1
            T = taylor_complex(I)
            assert validate_complex(T).ok
            cert = verify_resolution(T, I)
            assert cert.exactness_ok and cert.coker_ok
        assert count >= 20

    def test_rejects_zero_and_unit(self, R4):
        with pytest.raises(DomainError):
            taylor_complex(MonomialIdeal(R4, ()))
        with pytest.raises(DomainError):
            taylor_complex(ideal(R4, "1"))


class TestMinimize:
    def test_flagship(self, R4, flagship):
        IJ = ideal_product(*flagship)
        M = minimize_complex(taylor_complex(IJ))
        assert M.total_ranks() == (1, 4, 4, 1)
        assert is_minimal(M)

    def test_fixpoint_on_minimal(self, R4):
        K = koszul_complex(_vars(R4, 0, 1))
        M = minimize_complex(K)
        assert M.total_ranks() == K.total_ranks()
        for i in (1, 2):
            assert M.diff(i).entries == K.diff(i).entries

    def test_collapse_to_principal(self, Rxy):
        T = taylor_complex(
            ideal(Rxy, "x"),
            gens=[Rxy.parse_monomial("x"), Rxy.parse_monomial("x*y")],
        )
        M = minimize_complex(T)
        assert M.total_ranks() == (1, 1)
        assert str(M.diff(1).entry(0, 0)) == "x"

    def test_strand_homology_preserved(self, R4):
        rng = random.Random(8)
        for _ in range(8):
            I = random_monomial_ideal(R4, rng)
            if I.is_unit:
                continue
            T = taylor_complex(I)
            M = minimize_complex(T, certify=True)  # certification is the test
            assert is_minimal(M)

    def test_betti_agrees_with_koszul_homology(self, R4, flagship):
        # Tor via minimized Taylor == Tor via Koszul strand dims
        IJ = ideal_product(*flagship)
        M = minimize_complex(taylor_complex(IJ))
        table = betti_table(M)
        K = koszul_complex(_vars(R4, 0, 1, 2, 3))
        for i in range(1, 4):
            total = sum(v for (ii, _), v in table.entries.items() if ii == i)
            strands = sum(
                strand_homology_dim(K, IJ, t, i) for t in range(0, 9)
            )
            assert total == strands


class TestLift:
    def test_lift_to_self_satisfies_chain_identity(self, R4):
        K = koszul_complex(_vars(R4, 0, 1))
        phis = lift_comparison_map(K, K)
        for i in range(1, K.length + 1):
            lhs = K.diff(i) @ phis[i]
            rhs = phis[i - 1] @ K.diff(i)
            assert lhs.entries == rhs.entries

    def test_lift_principal_into_star_resolution(self, R4, flagship):
        IJ = ideal_product(*flagship)
        target = minimize_complex(taylor_complex(IJ))
        src = koszul_complex(
            [Polynomial.from_monomial(R4, R4.parse_monomial("x1*x3"))]
        )
        phis = lift_comparison_map(src, target)
        # phi_1(e) has degree-0 coefficients and d(phi_1(e)) = x1*x3
        col = [phis[1].entry(r, 0) for r in range(target.rank(1))]
        img = target.diff(1).apply(col)
        assert str(img[0]) == "x1*x3"
        for p in col:
            assert p.is_zero or p.homogeneous_degree == 0

    def test_lift_ci_into_avramov_resolution(self, R4):
        M = ideal(R4, "x1^2", "x1*x2", "x2*x3", "x3*x4", "x4^2")
        target = minimize_complex(taylor_complex(M))
        src = koszul_complex(
            [
                Polynomial.from_monomial(R4, R4.parse_monomial("x1^2")),
                Polynomial.from_monomial(R4, R4.parse_monomial("x4^2")),
            ]
        )
        phis = lift_comparison_map(src, target)
        for i in range(1, src.length + 1):
            lhs = target.diff(i) @ phis[i]
            rhs = phis[i - 1] @ src.diff(i)
            assert lhs.entries == rhs.entries

    def test_lift_fails_into_non_resolution(self, R4):
        # target with H_1 != 0: Koszul complex of (x1, x2) truncated badly
        from transverse.complexes import GradedFreeComplex
        from transverse.poly import PolyMatrix

        x1x2 = Polynomial.from_monomial(R4, R4.parse_monomial("x1*x2"))
        target = GradedFreeComplex(
            R4, [(0,), (2,)], [PolyMatrix(R4, 1, 1, {(0, 0): x1x2})]
        )
        src = koszul_complex(_vars(R4, 0, 1))
        with pytest.raises(ExactnessError):
            lift_comparison_map(src, target)
