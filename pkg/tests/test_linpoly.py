import unittest

import hypothesis
import hypothesis.strategies as hs
import numpy as np

from algebra import fieldtower as ft
from algebra import linalg
from algebra import linpoly as lp
from algebra.errors import BadStep, BadSupport, DependentBasis, NonBijectiveComponent, TowerMismatch
from algebra.linpoly import LinearizedPoly


def get_f81():
    return ft.build_tower(3, 1, 2)


def get_random_poly(seed, support=None):
    tower = get_f81()
    rng = np.random.default_rng(seed)
    return LinearizedPoly(tower, lp.random_polys(tower, 1, rng, support)[0])


def get_frobenius_minus_identity():
    tower = get_f81()
    return LinearizedPoly(tower, [2, 1, 0, 0])


class TestLinearizedPoly(unittest.TestCase):
    def test_str_and_support(self) -> None:
        tower = get_f81()
        f = LinearizedPoly(tower, [1, 0, ft.to_int(tower.power(36)), 0])
        self.assertEqual(str(f), "w^0*X^(q^0) + w^36*X^(q^2)")
        self.assertEqual(f.support, [0, 2])
        self.assertEqual(str(lp.lp_zero(tower)), "0")

    def test_monomial_evaluation(self) -> None:
        tower = get_f81()
        x = tower.GF.elements
        f = lp.lp_monomial(tower, tower.power(7), 3)
        self.assertTrue(np.all(f(x) == tower.power(7) * x**27))

    def test_identity(self) -> None:
        tower = get_f81()
        x = tower.GF.elements
        self.assertTrue(np.all(lp.lp_identity(tower)(x) == x))

    @hypothesis.settings(max_examples=40, deadline=None)
    @hypothesis.given(hs.integers(min_value=0, max_value=2**32), hs.integers(min_value=0, max_value=2**32))
    def test_compose_is_pointwise_composition(self, seed_f, seed_g) -> None:
        tower = get_f81()
        f = get_random_poly(seed_f)
        g = get_random_poly(seed_g)
        x = tower.GF.elements
        self.assertTrue(np.all(lp.lp_compose(f, g)(x) == f(g(x))))

    @hypothesis.settings(max_examples=40, deadline=None)
    @hypothesis.given(hs.integers(min_value=0, max_value=2**32))
    def test_additive(self, seed) -> None:
        tower = get_f81()
        f = get_random_poly(seed)
        x = tower.GF.elements
        self.assertTrue(np.all(f(x + tower.generator) == f(x) + f(tower.generator)))

    def test_add_and_scale(self) -> None:
        tower = get_f81()
        f = get_random_poly(1)
        g = get_random_poly(2)
        x = tower.GF.elements
        self.assertTrue(np.all(lp.lp_add(f, g)(x) == f(x) + g(x)))
        self.assertTrue(np.all(lp.lp_scale(tower.power(5), f)(x) == tower.power(5) * f(x)))

    def test_tower_mismatch(self) -> None:
        other = ft.build_tower(3, 1, 2, [2, 0, 0, 2, 1])
        with self.assertRaises(TowerMismatch):
            lp.lp_compose(get_random_poly(1), lp.lp_identity(other))


class TestAdjointAndTwist(unittest.TestCase):
    @hypothesis.settings(max_examples=30, deadline=None)
    @hypothesis.given(hs.integers(min_value=0, max_value=2**32))
    def test_adjoint_involution(self, seed) -> None:
        f = get_random_poly(seed)
        self.assertEqual(lp.lp_adjoint(lp.lp_adjoint(f)), f)

    def test_adjoint_is_transpose_under_trace(self) -> None:
        tower = get_f81()
        f = get_random_poly(3)
        f_hat = lp.lp_adjoint(f)
        x = tower.GF.elements[:, None]
        y = tower.GF.elements[None, :]
        left = ft.trace_to_base(tower, f(x) * y)
        right = ft.trace_to_base(tower, x * f_hat(y))
        self.assertTrue(np.all(left == right))

    def test_twist(self) -> None:
        tower = get_f81()
        f = get_random_poly(4)
        self.assertEqual(lp.lp_twist(f, tower.degree), f)
        twisted = lp.lp_twist(f, 1)
        self.assertTrue(np.all(twisted.coefficients == f.coefficients**3))

    def test_shift(self) -> None:
        tower = get_f81()
        f = get_random_poly(5)
        shifted = LinearizedPoly(tower, lp.shift_arrays(tower, f.coefficients, 1))
        self.assertEqual(shifted, lp.lp_compose(f, lp.lp_monomial(tower, 1, 1)))


class TestRank(unittest.TestCase):
    def test_frobenius_minus_identity(self) -> None:
        f = get_frobenius_minus_identity()
        self.assertEqual(lp.lp_rank(f), 3)
        self.assertEqual(lp.lp_root_count(f), 3)
        self.assertFalse(lp.lp_is_bijective(f))

    def test_zero_polynomial(self) -> None:
        tower = get_f81()
        self.assertEqual(lp.lp_rank(lp.lp_zero(tower)), 0)
        self.assertEqual(lp.lp_root_count(lp.lp_zero(tower)), 81)

    @hypothesis.settings(max_examples=60, deadline=None)
    @hypothesis.given(
        hs.integers(min_value=0, max_value=2**32),
        hs.sampled_from([None, [0], [0, 1], [0, 2], [1, 3]]),
    )
    def test_root_count_oracle(self, seed, support) -> None:
        f = get_random_poly(seed, support)
        self.assertEqual(lp.lp_root_count(f), lp.lp_root_count_exhaustive(f))

    def test_matrix_of_composition(self) -> None:
        f = get_random_poly(6)
        g = get_random_poly(7)
        self.assertEqual(lp.lp_matrix(lp.lp_compose(f, g)), lp.lp_matrix(g) @ lp.lp_matrix(f))
        self.assertEqual(lp.lp_matrix(lp.lp_add(f, g)), lp.lp_matrix(f) + lp.lp_matrix(g))

    def test_matrix_in_other_basis(self) -> None:
        tower = get_f81()
        f = get_frobenius_minus_identity()
        basis = tower.power(5) * ft.prime_basis(tower)
        self.assertEqual(lp.lp_matrix(f, list(basis)).rank, 3)
        with self.assertRaises(DependentBasis):
            lp.lp_matrix(f, [tower.GF(1)] * 4)

    def test_inverse(self) -> None:
        tower = get_f81()
        f = LinearizedPoly(tower, [1, 0, ft.to_int(tower.power(36)), 0])
        g = lp.lp_inverse(f)
        self.assertEqual(lp.lp_compose(f, g), lp.lp_identity(tower))
        self.assertEqual(lp.lp_compose(g, f), lp.lp_identity(tower))
        with self.assertRaises(NonBijectiveComponent):
            lp.lp_inverse(get_frobenius_minus_identity())


class TestNormCriterion(unittest.TestCase):
    def test_sweep_has_no_violations(self) -> None:
        tower = get_f81()
        rng = np.random.default_rng(0)
        for s in (1, 3):
            result = lp.gow_norm_sweep(tower, s, 2, 10000, rng)
            self.assertEqual(result["samples"], 10000)
            self.assertEqual(result["violations"], 0)

    def test_check(self) -> None:
        tower = get_f81()
        # X^(q^2) - X has q^2 roots, f_0 = -1, f_2 = 1
        f = LinearizedPoly(tower, [2, 0, 1, 0])
        result = lp.gow_norm_check(f, 1)
        self.assertEqual(result["k"], 2)
        self.assertEqual(result["root_count"], 9)
        self.assertTrue(result["norms_equal"])
        self.assertFalse(result["violation"])

    def test_preconditions(self) -> None:
        f = get_frobenius_minus_identity()
        with self.assertRaises(BadStep):
            lp.gow_norm_check(f, 2)
        with self.assertRaises(BadSupport):
            lp.gow_norm_check(f, 1, k=0)


class TestLinalg(unittest.TestCase):
    @hypothesis.settings(max_examples=30, deadline=None)
    @hypothesis.given(hs.integers(min_value=0, max_value=2**32), hs.sampled_from([2, 3, 5]))
    def test_batch_rank(self, seed, p) -> None:
        rng = np.random.default_rng(seed)
        A = rng.integers(0, p, size=(8, 4, 5))
        A[0] = 0
        A[1, 3] = (A[1, 0] + 2 * A[1, 1]) % p
        ranks = linalg.batch_rank(A, p)
        self.assertEqual(int(ranks[0]), 0)
        for i in range(8):
            self.assertEqual(int(ranks[i]), linalg.rank_mod(A[i], p))

    def test_null_space_and_solve(self) -> None:
        A = np.array([[1, 2, 0], [0, 1, 1]])
        null = linalg.null_space_mod(A, 3)
        self.assertEqual(null.shape, (1, 3))
        self.assertTrue(np.all((A @ null.T) % 3 == 0))
        x = linalg.solve_consistent(A, np.array([1, 2]), 3)
        self.assertTrue(np.array_equal((A @ x) % 3, [1, 2]))
        self.assertIsNone(linalg.solve_consistent(np.array([[1, 1], [2, 2]]), np.array([1, 1]), 3))

    def test_in_row_space(self) -> None:
        basis = np.array([[1, 0, 1], [0, 1, 1]])
        vectors = np.array([[1, 1, 2], [1, 1, 1]])
        self.assertEqual(list(linalg.in_row_space(basis, vectors, 3)), [True, False])

    def test_odometer(self) -> None:
        digits = linalg.odometer_digits(0, 9, 2, 3)
        self.assertEqual(digits[5].tolist(), [1, 2])
        self.assertEqual(list(linalg.chunk_ranges(5, 2)), [(0, 2), (2, 4), (4, 5)])


if __name__ == "__main__":
    unittest.main()
