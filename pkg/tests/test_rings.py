import unittest

import numpy as np
from hypothesis import given, settings, strategies as st

from modlie.error_handlers import NotRestrictedError
from modlie.ffla import PrimeField
from modlie.rings import (binomial_mod, base_p_digits, DividedPowerAlgebra, TruncatedPolyRing, VectorFields,
                          FieldRealization, rescaling_factors)

F5 = PrimeField(5)


class TestCombinatorics(unittest.TestCase):
    def test_binomial_mod_lucas(self):
        self.assertEqual(binomial_mod(5, 1, 5), 0)
        self.assertEqual(binomial_mod(6, 1, 5), 1)
        self.assertEqual(binomial_mod(4, 2, 5), 1)
        self.assertEqual(binomial_mod(3, 5, 5), 0)

    def test_base_p_digits(self):
        self.assertEqual(list(base_p_digits(7, 5, 2)), [2, 1])
        self.assertEqual(list(base_p_digits(0, 5, 3)), [0, 0, 0])


class TestDividedPowerAlgebra(unittest.TestCase):
    def setUp(self):
        self.A = DividedPowerAlgebra(F5, (2,))

    def test_shape_and_restrictedness(self):
        self.assertEqual(self.A.dim, 25)
        self.assertFalse(self.A.is_restricted())
        self.assertTrue(DividedPowerAlgebra(F5, (1, 1)).is_restricted())

    def test_divided_power_product(self):
        coeff, e = self.A.monomial_product((1,), (1,))
        self.assertEqual((coeff, e), (2, (2,)))
        # binom(5, 1) vanishes mod 5
        self.assertEqual(self.A.monomial_product((4,), (1,)), (0, None))
        self.assertEqual(self.A.monomial_product((20,), (5,)), (0, None))

    def test_derivative_lowers_the_exponent(self):
        self.assertEqual(self.A.monomial_partial((7,), 0), (1, (6,)))
        self.assertEqual(self.A.monomial_partial((0,), 0), (0, None))

    def test_labels(self):
        self.assertEqual(self.A.label((0,)), "1")
        self.assertEqual(self.A.label((3,)), "x^(3)")

    def test_nonpositive_height(self):
        with self.assertRaises(ValueError):
            DividedPowerAlgebra(F5, (0,))


class TestTruncatedPolyRing(unittest.TestCase):
    def setUp(self):
        self.B = TruncatedPolyRing(F5, 2)

    def test_truncation(self):
        x1 = self.B.generator(0)
        self.assertFalse(self.B.power(x1, 5).any())
        self.assertTrue(self.B.power(x1, 4).any())

    def test_multiply(self):
        x1, x2 = self.B.generator(0), self.B.generator(1)
        f = self.B.multiply(self.B.one() + x1, self.B.one() + x2)
        self.assertEqual(f[0, 0], 1)
        self.assertEqual(f[1, 1], 1)
        self.assertEqual(int(f.sum()), 4)

    def test_partial(self):
        f = self.B.monomial((3, 2), 2)
        self.assertEqual(self.B.partial(f, 0)[2, 2], 1)
        self.assertEqual(self.B.partial(f, 1)[3, 1], 4)

    def test_multiplication_matrix(self):
        x1 = self.B.generator(0)
        M = self.B.multiplication_matrix(x1)
        self.assertEqual(M.shape, (25, 25))
        column = M[:, self.B.index((1, 0))]
        self.assertEqual(int(column[self.B.index((2, 0))]), 1)

    def test_labels(self):
        self.assertEqual(self.B.label((2, 1)), "x1^2*x2")
        self.assertEqual(self.B.label((0, 0)), "1")

    def test_rescaling_factors(self):
        factors = rescaling_factors(TruncatedPolyRing(F5, 1))
        # 1/a! for a = 0..4 over F_5
        self.assertEqual(factors.tolist(), [1, 1, 3, 1, 4])


class TestVectorFields(unittest.TestCase):
    def setUp(self):
        self.W = VectorFields(TruncatedPolyRing(F5, 1))

    def field(self, coefficients):
        return self.W.from_components([np.asarray(coefficients, dtype=np.int64)])

    def test_labels(self):
        self.assertEqual(self.W.labels(), ["D1", "x1*D1", "x1^2*D1", "x1^3*D1", "x1^4*D1"])

    def test_bracket(self):
        d = self.field([1, 0, 0, 0, 0])
        xd = self.field([0, 1, 0, 0, 0])
        self.assertEqual(self.W.bracket(d, xd).tolist(), d.tolist())

    def test_p_power(self):
        d = self.field([1, 0, 0, 0, 0])
        xd = self.field([0, 1, 0, 0, 0])
        self.assertFalse(self.W.p_power(d).any())
        self.assertEqual(self.W.p_power(xd).tolist(), xd.tolist())

    def test_p_power_needs_height_one(self):
        fields = VectorFields(DividedPowerAlgebra(F5, (2,)))
        with self.assertRaises(NotRestrictedError):
            fields.p_power(fields.monomial_field(0, (0,)))

    def test_degree(self):
        self.assertEqual(self.W.degree(0), -1)
        self.assertEqual(self.W.degree(4), 3)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 49), st.integers(0, 49))
    def test_closed_form_bracket_matches_fields(self, k1, k2):
        fields = VectorFields(TruncatedPolyRing(F5, 2))
        unit = np.eye(fields.dim, dtype=np.int64)
        expected = fields.to_vector(fields.bracket(fields.from_vector(unit[k1]), fields.from_vector(unit[k2])))
        closed = np.zeros(fields.dim, dtype=np.int64)
        for k, c in fields.monomial_bracket(k1, k2):
            closed[k] = c
        self.assertEqual(closed.tolist(), expected.tolist())


class TestFieldRealization(unittest.TestCase):
    def test_sub_basis_coordinates(self):
        fields = VectorFields(TruncatedPolyRing(F5, 1))
        # span{D1, x1*D1, x1^2*D1} is sl_2 inside W(1;1)
        basis = np.eye(5, dtype=np.int64)[:3]
        realization = FieldRealization(fields, basis)
        self.assertEqual(realization.dim, 3)
        self.assertEqual(realization.bracket(np.array([1, 0, 0]), np.array([0, 0, 1])).tolist(), [0, 2, 0])


if __name__ == '__main__':
    unittest.main()
