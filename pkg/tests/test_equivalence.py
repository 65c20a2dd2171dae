import unittest

from algebra import fieldtower as ft
from algebra import linpoly as lp
from algebra.errors import BudgetExceeded, NonBijectiveComponent, OutOfRegime
from algebra.linpoly import LinearizedPoly
from codes import codes as cd
from codes import dualnuc as dn
from codes import equivalence as eq

# X^4 + 2X^3 + 2 over F_3, constant term first
PRIMITIVE_QUARTIC = [2, 0, 0, 2, 1]


def get_f81():
    return ft.build_tower(3, 1, 2)


def get_quartic_tower():
    return ft.build_tower(3, 1, 2, PRIMITIVE_QUARTIC)


def get_d_code(tower, k=2, s=1, t=1):
    return cd.make_D(tower, k, s, tower.power(t))


def get_quartic_automorphism():
    """phi1 = X + w^36 X^(q^2), phi2 = w^2 X^(q^3) + w^54 X^q on D_{2,1}(w)."""
    tower = get_quartic_tower()
    phi1 = LinearizedPoly(tower, [1, 0, ft.to_int(tower.power(36)), 0])
    phi2 = LinearizedPoly(tower, [0, ft.to_int(tower.power(54)), 0, ft.to_int(tower.power(2))])
    return eq.EquivalenceMap(phi1, phi2, 0, eq.BINOMIAL)


class TestMaps(unittest.TestCase):
    def test_binomial_automorphism(self) -> None:
        tower = get_quartic_tower()
        code = get_d_code(tower)
        m = get_quartic_automorphism()
        self.assertTrue(eq.verify_map(m, code, code))
        self.assertTrue(cd.codes_equal(eq.apply_map(m, code), code))

    def test_wrong_phi2_exponent_fails(self) -> None:
        tower = get_quartic_tower()
        code = get_d_code(tower)
        m = get_quartic_automorphism()
        # same coefficients with phi2 supported on X and X^(q^2)
        phi2 = LinearizedPoly(tower, [ft.to_int(tower.power(2)), 0, ft.to_int(tower.power(54)), 0])
        wrong = eq.EquivalenceMap(m.phi1, phi2, 0, eq.BINOMIAL)
        self.assertFalse(eq.verify_map(wrong, code, code))

    def test_invert_and_compose(self) -> None:
        tower = get_quartic_tower()
        code = get_d_code(tower)
        m = get_quartic_automorphism()
        inverse = eq.invert_map(m)
        self.assertTrue(eq.verify_map(inverse, code, code))
        both = eq.compose_maps(m, inverse)
        self.assertTrue(eq.verify_map(both, code, code))
        f = LinearizedPoly(tower, code.generators[5])
        image = lp.lp_compose(both.phi1, lp.lp_compose(lp.lp_twist(f, both.rho), both.phi2))
        self.assertEqual(image, f)

    def test_identity(self) -> None:
        tower = get_f81()
        code = get_d_code(tower)
        self.assertTrue(eq.verify_map(eq.identity_map(tower), code, code))

    def test_non_bijective_component(self) -> None:
        tower = get_f81()
        singular = LinearizedPoly(tower, [2, 1, 0, 0])
        m = eq.EquivalenceMap(singular, lp.lp_identity(tower))
        with self.assertRaises(NonBijectiveComponent):
            eq.apply_map(m, get_d_code(tower))
        self.assertFalse(eq.verify_map(m, get_d_code(tower), get_d_code(tower)))

    def test_json(self) -> None:
        data = get_quartic_automorphism().to_json()
        self.assertEqual(sorted(data.keys()), ["phi1", "phi2", "rho"])
        self.assertEqual(data["rho"], 0)


class TestSearch(unittest.TestCase):
    def test_self_equivalence(self) -> None:
        tower = get_f81()
        code = get_d_code(tower)
        certificate = eq.equivalence_search(code, code)
        self.assertTrue(certificate.equivalent)
        self.assertTrue(eq.verify_map(certificate.witness, code, code))
        self.assertEqual(certificate.to_json()["verdict"], eq.EQUIVALENT)

    def test_adjoint_equivalent_to_inverse_parameter(self) -> None:
        tower = get_f81()
        adjoint = dn.adjoint_code(get_d_code(tower))
        target = get_d_code(tower, t=79)
        certificate = eq.monomial_equiv_search(adjoint, target)
        self.assertTrue(certificate.equivalent)
        self.assertTrue(eq.verify_map(certificate.witness, adjoint, target))

    def test_gabidulin_obstructed_by_nuclei(self) -> None:
        tower = get_f81()
        certificate = eq.equivalence_search(cd.make_gabidulin(tower, 2, 1), get_d_code(tower))
        self.assertEqual(certificate.verdict, eq.INEQUIVALENT)
        self.assertEqual(certificate.prunes, ["nucleus-sizes"])

    def test_twisted_h2_obstructed_by_nuclei(self) -> None:
        tower = get_f81()
        twisted = cd.make_twisted(tower, 2, 1, tower.generator, 2)
        certificate = eq.equivalence_search(get_d_code(tower), twisted)
        self.assertEqual(certificate.verdict, eq.INEQUIVALENT)
        self.assertEqual(certificate.prunes, ["nucleus-sizes"])

    def test_dimension_mismatch(self) -> None:
        tower = get_f81()
        certificate = eq.equivalence_search(get_d_code(tower, k=1), get_d_code(tower))
        self.assertEqual(certificate.verdict, eq.INEQUIVALENT)
        self.assertEqual(certificate.prunes, ["dimension"])

    def test_d_against_twisted(self) -> None:
        tower = get_f81()
        code = get_d_code(tower)
        for t in (1, 3, 5, 7, 9):
            twisted = cd.make_twisted(tower, 2, 1, tower.power(t), 2)
            monomial = eq.monomial_equiv_search(code, twisted)
            self.assertEqual(monomial.verdict, eq.INEQUIVALENT)
            self.assertEqual(monomial.shapes_exhausted, [eq.MONOMIAL])
            binomial = eq.binomial_equiv_search(code, twisted)
            self.assertEqual(binomial.verdict, eq.INEQUIVALENT)
            self.assertIn("phi1-scalar-normalized", binomial.prunes)
            self.assertEqual(eq.equivalence_search(code, twisted).verdict, eq.INEQUIVALENT)

    def test_binomial_search_finds_quartic_automorphism_class(self) -> None:
        tower = get_quartic_tower()
        code = get_d_code(tower)
        certificate = eq.binomial_equiv_search(code, code)
        self.assertTrue(certificate.equivalent)
        self.assertEqual(certificate.witness.shape, eq.BINOMIAL)
        self.assertIn(get_quartic_automorphism(), eq.automorphisms(code, eq.BINOMIAL))

    def test_binomial_search_finds_gabidulin_and_twisted_self_maps(self) -> None:
        tower = get_f81()
        gabidulin = cd.make_gabidulin(tower, 2, 1)
        twisted = cd.make_twisted(tower, 2, 1, tower.power(3), 1)
        for code in (gabidulin, twisted):
            certificate = eq.binomial_equiv_search(code, code)
            self.assertTrue(certificate.equivalent)
            self.assertTrue(eq.verify_map(certificate.witness, code, code))
            self.assertTrue(eq.equivalence_search(code, code, eq.BINOMIAL).equivalent)

    def test_binomial_needs_quartic_extension(self) -> None:
        tower = ft.build_tower(3, 1, 3)
        code = get_d_code(tower)
        with self.assertRaises(BudgetExceeded):
            eq.binomial_equiv_search(code, code)

    def test_automorphisms(self) -> None:
        tower = get_f81()
        code = get_d_code(tower)
        maps = eq.automorphisms(code)
        self.assertIn(eq.identity_map(tower), maps)
        for m in maps[:50]:
            self.assertTrue(eq.verify_map(m, code, code))

    def test_isometric(self) -> None:
        tower = get_f81()
        C1 = get_d_code(tower)
        C2 = get_d_code(tower, 2, 3, 9)
        certificate = eq.isometric_equivalence(C1, C2, eq.MONOMIAL)
        self.assertTrue(certificate.equivalent)


class TestDualSubstitution(unittest.TestCase):
    def test_closed_form(self) -> None:
        tower = get_f81()
        for k in (1, 2, 3):
            result = eq.dual_substitution_check(get_d_code(tower, k))
            self.assertTrue(result["equivalent"])
            self.assertEqual(result["method"], "closed-form")
            self.assertEqual(result["substitution"], (4 - k) % 4)

    def test_set_equality(self) -> None:
        tower = get_f81()
        # w^5 satisfies gamma^(q^2) = -gamma, w does not
        self.assertTrue(eq.dual_substitution_check(get_d_code(tower, t=5))["set_equal"])
        self.assertFalse(eq.dual_substitution_check(get_d_code(tower))["set_equal"])

    def test_out_of_regime(self) -> None:
        tower = get_f81()
        with self.assertRaises(OutOfRegime):
            eq.dual_substitution_check(cd.make_gabidulin(tower, 2, 1))


class TestMonomialCondition(unittest.TestCase):
    def test_cubic_extension_over_f3(self) -> None:
        tower = ft.build_tower(3, 1, 3)
        for t in (1, 3, 5):
            verdict = eq.condition_theorem5(tower, 2, 1, 1, tower.generator, tower.power(t))
            self.assertTrue(verdict.holds)
            self.assertEqual(verdict.condition, "a")
            C1 = get_d_code(tower)
            C2 = get_d_code(tower, t=t)
            self.assertTrue(eq.verify_map(verdict.witness, C1, C2))
        verdict = eq.condition_theorem5(tower, 2, 1, 5, tower.generator, tower.power(3))
        self.assertTrue(verdict.holds)
        self.assertEqual(verdict.condition, "b")

    def test_cubic_extension_over_f5(self) -> None:
        tower = ft.build_tower(5, 1, 3)
        gamma = tower.generator
        for t in (3, 9, 15):
            self.assertFalse(eq.condition_theorem5(tower, 2, 1, 1, gamma, tower.power(t)).holds)
        for t in (5, 7):
            self.assertTrue(eq.condition_theorem5(tower, 2, 1, 1, gamma, tower.power(t)).holds)

    def test_agrees_with_search(self) -> None:
        tower = ft.build_tower(5, 1, 3)
        C1 = get_d_code(tower)
        for t, expected in (
            (3, eq.INEQUIVALENT),
            (9, eq.INEQUIVALENT),
            (15, eq.INEQUIVALENT),
            (1, eq.EQUIVALENT),
            (7, eq.EQUIVALENT),
            (11, eq.EQUIVALENT),
        ):
            C2 = get_d_code(tower, t=t)
            certificate = eq.equivalence_search(C1, C2)
            self.assertEqual(certificate.verdict, expected)
            verdict = eq.condition_theorem5(tower, 2, 1, 1, tower.generator, tower.power(t))
            self.assertEqual(verdict.holds, certificate.equivalent)

    def test_out_of_regime(self) -> None:
        tower = get_f81()
        with self.assertRaises(OutOfRegime):
            eq.condition_theorem5(tower, 2, 1, 1, tower.generator, tower.generator)
        cubic = ft.build_tower(3, 1, 3)
        with self.assertRaises(OutOfRegime):
            eq.condition_theorem5(cubic, 1, 1, 1, cubic.generator, cubic.generator)
        with self.assertRaises(OutOfRegime):
            eq.condition_theorem6(cubic, 1, 1, cubic.generator, cubic.generator)


class TestBinomialCondition(unittest.TestCase):
    def test_quartic_solutions(self) -> None:
        tower = get_quartic_tower()
        omega = tower.generator
        solutions = eq.theorem6_solutions(tower, 1, omega, omega, 0, 0, 1, tower.power(36))
        pairs = {(ft.to_int(g), ft.to_int(h)) for g, h in solutions}
        self.assertIn((ft.to_int(tower.power(2)), ft.to_int(tower.power(54))), pairs)

    def test_quadratic_extension_pairs(self) -> None:
        tower = get_f81()
        omega = tower.generator
        for s, t, theta in ((1, 1, 3), (1, 3, 1), (3, 1, 7)):
            verdict = eq.condition_theorem6(tower, s, t, omega, tower.power(theta))
            self.assertTrue(verdict.holds)
            C1 = get_d_code(tower, 2, s)
            C2 = get_d_code(tower, 2, t, theta)
            self.assertTrue(eq.verify_map(verdict.witness, C1, C2))
            expected = ("a", "b") if s == t else ("c", "d")
            self.assertIn(verdict.condition, expected)
            self.assertEqual(verdict.to_json()["holds"], True)


if __name__ == "__main__":
    unittest.main()
