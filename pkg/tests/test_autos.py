import unittest

import mock
import numpy as np

from modlie.autos import (RingEndo, substitute, compose_endos, invert_endo, random_endo, LieAuto, induced_lie_auto,
                          demushkin_endo, demushkin_lift, restriction_to_torus, normalizes_torus, stabilizes_subspace,
                          conjugation_auto, unitriangular_group, ToralStabilizerCertificate, weyl_certificate,
                          classical_weyl_certificate)
from modlie.cartan import standard_generic_torus, standard_torus
from modlie.enumerations import VerificationModeEnum
from modlie.error_handlers import NotAnAutomorphism, DoesNotNormalize, DimensionMismatchError
from modlie.ffla import PrimeFieldMatrix, inverse, random_invertible
from tests.modlie_unit_test_case import ModLieUnitTestCase


class TestRingEndo(ModLieUnitTestCase):
    def setUp(self):
        self.ring = self.witt(1)[1]
        self.x = self.ring.generator(0)

    def test_substitution(self):
        doubling = RingEndo.linear(self.ring, [[2]])
        self.assertVectorEqual(substitute(doubling, self.ring.monomial((2,))), self.ring.monomial((2,), 4))
        self.assertVectorEqual(substitute(doubling, self.ring.one()), self.ring.one())

    def test_inverse_of_a_scaling(self):
        inverse_endo = invert_endo(RingEndo.linear(self.ring, [[2]]))
        self.assertEqual(inverse_endo, RingEndo.linear(self.ring, [[3]]))

    def test_inverse_with_higher_terms(self):
        e = RingEndo(self.ring, [self.x + self.ring.monomial((2,))])
        inverse_endo = invert_endo(e)
        # x - x^2 + 2x^3 - 5x^4 over F_5
        self.assertEqual(inverse_endo.images[0].tolist(), [0, 1, 4, 2, 0])
        self.assertEqual(compose_endos(e, inverse_endo), RingEndo.identity(self.ring))
        self.assertEqual(compose_endos(inverse_endo, e), RingEndo.identity(self.ring))

    def test_singular_linear_part(self):
        e = RingEndo(self.ring, [self.ring.monomial((2,))])
        self.assertFalse(e.is_invertible())
        with self.assertRaises(NotAnAutomorphism):
            invert_endo(e)

    def test_constant_term_is_rejected(self):
        with self.assertRaises(NotAnAutomorphism):
            RingEndo(self.ring, [self.ring.one() + self.x])

    def test_image_count(self):
        with self.assertRaises(DimensionMismatchError):
            RingEndo(self.ring, [self.x, self.x])

    def test_random_endos_are_invertible(self):
        ring = self.witt(2)[1]
        rng = np.random.default_rng(2)
        for _ in range(5):
            e = random_endo(ring, rng)
            self.assertTrue(e.is_invertible())
            self.assertEqual(compose_endos(e, invert_endo(e)), RingEndo.identity(ring))

    def test_demushkin_endo(self):
        ring = self.witt(2)[1]
        e = demushkin_endo(ring, [[1, 1], [0, 1]])
        # x2 -> (1 + x1)(1 + x2) - 1
        expected = ring.generator(0) + ring.generator(1) + ring.monomial((1, 1))
        self.assertVectorEqual(e.images[1], expected)
        self.assertVectorEqual(e.images[0], ring.generator(0))
        with self.assertRaises(NotAnAutomorphism):
            demushkin_endo(ring, [[1, 2], [2, 4]])
        with self.assertRaises(DimensionMismatchError):
            demushkin_endo(ring, [[1]])


class TestInducedAutomorphisms(ModLieUnitTestCase):
    def test_identity(self):
        ring = self.witt(1)[1]
        a = induced_lie_auto(self.w11, RingEndo.identity(ring))
        self.assertEqual(a.matrix, PrimeFieldMatrix.identity(self.field, 5))

    def test_scaling_rescales_by_degree(self):
        L = self.w11
        a = induced_lie_auto(L, RingEndo.linear(self.witt(1)[1], [[2]]), verify=VerificationModeEnum.FULL)
        self.assertVectorEqual(a.apply(L.element(D1=1)), L.element(D1=3))
        self.assertVectorEqual(a.apply(L.element(**{"x1*D1": 1})), L.element(**{"x1*D1": 1}))
        self.assertVectorEqual(a.apply(L.element(**{"x1^2*D1": 1})), L.element(**{"x1^2*D1": 2}))

    def test_composition_is_multiplicative(self):
        L = self.w21
        ring = self.witt(2)[1]
        rng = np.random.default_rng(9)
        e1, e2 = random_endo(ring, rng), random_endo(ring, rng)
        composite = induced_lie_auto(L, compose_endos(e1, e2), verify=VerificationModeEnum.NONE)
        first = induced_lie_auto(L, e1, verify=VerificationModeEnum.NONE)
        second = induced_lie_auto(L, e2, verify=VerificationModeEnum.NONE)
        self.assertEqual(composite, first.compose(second))

    def test_random_automorphisms_verify(self):
        L = self.w21
        rng = np.random.default_rng(4)
        a = induced_lie_auto(L, random_endo(self.witt(2)[1], rng), verify=VerificationModeEnum.NONE)
        report = a.verify(VerificationModeEnum.FULL)
        self.assertTrue(report["valid"], report)
        self.assertEqual(a.compose(a.inverse()).matrix, PrimeFieldMatrix.identity(self.field, 50))

    def test_broken_matrix_fails_verification(self):
        L = self.w11
        broken = LieAuto(L, PrimeFieldMatrix(self.field, np.diag([1, 1, 1, 1, 2])))
        report = broken.verify(VerificationModeEnum.FULL)
        self.assertFalse(report["valid"])
        self.assertGreater(report["bracket_failures"], 0)

    def test_needs_a_jacobson_witt_algebra(self):
        with self.assertRaises(ValueError):
            induced_lie_auto(self.w1_2, RingEndo.identity(self.witt(1)[1]))
        with self.assertRaises(DimensionMismatchError):
            induced_lie_auto(self.w21, RingEndo.identity(self.witt(1)[1]))


class TestToralRestrictions(ModLieUnitTestCase):
    def test_one_variable_lift(self):
        L = self.w11
        restriction = restriction_to_torus(demushkin_lift(L, [[2]]), standard_generic_torus(L))
        self.assertEqual(restriction.matrix.tolist(), [[3]])

    def test_restriction_is_inverse_transpose(self):
        rng = np.random.default_rng(17)
        for _ in range(4):
            g = random_invertible(self.field, 2, rng)
            restriction = restriction_to_torus(demushkin_lift(self.w21, g), self.t0)
            self.assertEqual(restriction.matrix, inverse(g).transpose())

    def test_lift_is_a_restricted_automorphism(self):
        g = PrimeFieldMatrix(self.field, [[2, 1], [3, 3]])
        a = demushkin_lift(self.w21, g, verify=VerificationModeEnum.NONE)
        self.assertTrue(a.verify(VerificationModeEnum.FULL)["valid"])
        self.assertEqual(restriction_to_torus(a, self.t0).matrix, inverse(g).transpose())
        self.assertEqual(restriction_to_torus(a, self.t0).matrix.tolist(), [[1, 4], [3, 4]])

    def test_endomorphism_that_does_not_normalize(self):
        L = self.w21
        ring = self.witt(2)[1]
        e = RingEndo(ring, [ring.generator(0) + ring.monomial((1, 1)), ring.generator(1)])
        a = induced_lie_auto(L, e)
        self.assertFalse(normalizes_torus(a, self.t0))
        with self.assertRaises(DoesNotNormalize) as context:
            restriction_to_torus(a, self.t0)
        self.assertEqual(context.exception.witness["generator"], 0)

    def test_unitriangular_lifts_stabilize_c(self):
        group = unitriangular_group(self.field, 2)
        self.assertEqual(len(group), 5)
        for g in group:
            self.assertTrue(stabilizes_subspace(demushkin_lift(self.w21, g, VerificationModeEnum.NONE), self.c))

    def test_other_lifts_move_c(self):
        for g in ([[0, 1], [1, 0]], [[1, 0], [1, 1]]):
            a = demushkin_lift(self.w21, g, VerificationModeEnum.NONE)
            self.assertFalse(stabilizes_subspace(a, self.c))


class TestCertificates(ModLieUnitTestCase):
    def test_one_variable_certificate(self):
        result = weyl_certificate(self.w11, standard_generic_torus(self.w11))
        self.assertEqual(result["lifts"], 4)
        self.assertTrue(result["bijective"])
        self.assertTrue(result["inverse_transpose"])
        self.assertTrue(result["certificate"].is_group())

    def test_lifts_moving_the_torus_are_not_counted_as_normalizing(self):
        calls = []

        def restriction(a, t):
            calls.append(a)
            if len(calls) == 1:
                raise DoesNotNormalize("Moved.", witness={"generator": 0})
            return restriction_to_torus(a, t)

        with mock.patch("modlie.autos.restriction_to_torus", side_effect=restriction):
            result = weyl_certificate(self.w11, standard_generic_torus(self.w11))
        self.assertEqual(result["lifts"], 4)
        self.assertEqual(result["normalizing"], 3)
        self.assertEqual(result["distinct_restrictions"], 3)
        self.assertFalse(result["bijective"])
        self.assertTrue(result["inverse_transpose"])

    def test_two_variable_certificate(self):
        result = weyl_certificate(self.w21, self.t0, jobs=2)
        self.assertEqual(result["lifts"], 480)
        self.assertEqual(result["distinct_restrictions"], 480)
        self.assertTrue(result["bijective"])
        self.assertTrue(result["inverse_transpose"])
        self.assertFalse(result["certificate"].is_p_group())

    def test_classical_certificate(self):
        L = self.sl2
        certificate = classical_weyl_certificate(L, standard_torus(L))
        self.assertEqual(certificate.order, 2)
        self.assertTrue(certificate.is_group())
        self.assertFalse(certificate.is_p_group())
        self.assertTrue(conjugation_auto(L, [[0, 1], [4, 0]]).verify(VerificationModeEnum.FULL)["valid"])

    def test_certificate_algebra(self):
        matrices = [PrimeFieldMatrix(self.field, [[1, k], [0, 1]]) for k in range(5)]
        certificate = ToralStabilizerCertificate(self.field, matrices + matrices[:2])
        self.assertEqual(certificate.order, 5)
        self.assertTrue(certificate.is_group())
        self.assertTrue(certificate.is_p_group())
        self.assertFalse(certificate.is_general_linear())
        embedded = certificate.block_embedding(1)
        self.assertEqual((embedded.degree, embedded.order), (3, 5))
        self.assertTrue(embedded.is_group())

    def test_conjugation_needs_a_matrix_algebra(self):
        with self.assertRaises(ValueError):
            conjugation_auto(self.w11, [[1, 0], [0, 1]])


if __name__ == '__main__':
    unittest.main()
