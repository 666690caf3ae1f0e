import unittest

import mock
import numpy as np

from modlie.config import Config
from modlie.error_handlers import NotClosedError, NotRestrictedError, TorusError
from modlie.liecore import Subspace, center, bracket
from modlie.restrict import (Torus, p_envelope, is_toral, p_power_iterates, semisimple_part, toral_fixed_points,
                             torus_generated, extend_torus, max_torus_search, iterate_rank)
from tests.modlie_unit_test_case import ModLieUnitTestCase

SEARCH_CONFIG = Config(restarts=8)


class TestTorus(ModLieUnitTestCase):
    def test_standard_torus_verifies(self):
        report = self.t0.verify()
        self.assertTrue(report["valid"])
        self.assertTrue(report["diagonalizable"])

    def test_nilpotent_element_is_not_toral(self):
        with self.assertRaises(TorusError) as context:
            Torus(self.sl2, [self.sl2.element(e=1)])
        self.assertFalse(context.exception.witness["toral"])

    def test_unverified_torus(self):
        torus = Torus(self.sl2, [self.sl2.element(e=1)], verify=False)
        self.assertEqual(torus.dim, 1)
        self.assertFalse(torus.verify()["valid"])

    def test_noncommuting_toral_elements(self):
        L = self.w11
        # x1*D1 and (1 + x1)*D1 are both toral but do not commute
        with self.assertRaises(TorusError):
            Torus(L, [L.element(**{"x1*D1": 1}), L.element(D1=1, **{"x1*D1": 1})])

    def test_coordinates(self):
        L = self.w21
        t = L.element(D1=2, **{"x1*D1": 2})
        self.assertEqual(self.t0.coordinates(t).tolist(), [2, 0])


class TestPElements(ModLieUnitTestCase):
    def test_is_toral(self):
        L = self.w11
        self.assertTrue(is_toral(L, L.element(**{"x1*D1": 1})))
        self.assertFalse(is_toral(L, L.element(D1=1)))
        with self.assertRaises(NotRestrictedError):
            is_toral(self.w1_2, self.w1_2.basis_vector(0))

    def test_p_power_orbit_of_a_nilpotent(self):
        L = self.w11
        iterates, preperiod, period = p_power_iterates(L, L.element(D1=1))
        self.assertEqual((preperiod, period), (1, 1))
        self.assertFalse(iterates[1].any())

    def test_semisimple_parts(self):
        L = self.w11
        self.assertFalse(semisimple_part(L, L.element(D1=1)).any())
        xd = L.element(**{"x1*D1": 1})
        self.assertVectorEqual(semisimple_part(L, xd), xd)

    def test_semisimple_part_is_semisimple(self):
        L = self.w21
        rng = np.random.default_rng(3)
        for _ in range(5):
            s = semisimple_part(L, L.random_element(rng))
            iterates, preperiod, _ = p_power_iterates(L, s)
            self.assertEqual(preperiod, 0)

    def test_orbit_cap(self):
        L = self.gl2
        # [[0, 2], [1, 0]] squares to 2, so its p-power orbit is u, 4u, u
        u = L.element(E12=2, E21=1)
        _, preperiod, period = p_power_iterates(L, u)
        self.assertEqual((preperiod, period), (0, 2))
        with self.assertRaises(TorusError):
            p_power_iterates(L, u, Config(period_cap=1))

    def test_iterate_rank(self):
        L = self.w21
        self.assertEqual(iterate_rank(L, self.t0.gens[0], 3), 1)
        self.assertEqual(iterate_rank(L, L.element(D1=1), 2), 1)


class TestToralSpans(ModLieUnitTestCase):
    def test_toral_fixed_points_of_the_center(self):
        L = self.gl2
        points = toral_fixed_points(L, center(L))
        self.assertEqual(len(points), 1)
        self.assertVectorEqual(points[0], L.element(E11=1, E22=1))
        self.assertEqual(toral_fixed_points(L, Subspace.zero(L)), [])

    def test_torus_generated(self):
        L = self.w11
        self.assertEqual(torus_generated(L, L.element(**{"x1*D1": 1})).dim, 1)
        with self.assertRaises(TorusError):
            torus_generated(L, L.element(D1=1))

    def test_torus_generated_needs_a_toral_basis(self):
        L = self.w11
        with mock.patch("modlie.restrict.toral_fixed_points", return_value=[]):
            with self.assertRaises(TorusError) as context:
                torus_generated(L, L.element(**{"x1*D1": 1}))
        self.assertEqual(context.exception.witness, {"toral": 0, "span": 1})

    def test_extend_torus(self):
        L = self.gl2
        torus = Torus(L, [L.element(E11=1)])
        extended = extend_torus(L, torus, L.element(E22=1))
        self.assertEqual(extended.dim, 2)
        self.assertFalse(bracket(L, extended.gens[0], extended.gens[1]).any())


class TestPEnvelope(ModLieUnitTestCase):
    def test_restricted_subalgebra_is_its_own_envelope(self):
        L = self.w11
        sl2 = Subspace.spanned_by_labels(L, ["D1", "x1*D1", "x1^2*D1"])
        self.assertEqual(p_envelope(L, sl2).dim, 3)

    def test_minimal_envelope_of_the_embedded_witt_algebra(self):
        self.assertEqual(self.envelope.inner.dim, 25)
        self.assertEqual(self.envelope.dim, 26)

    def test_promoted_envelope(self):
        algebra, inner = self.promoted_envelope
        self.assertEqual(algebra.dim, 26)
        self.assertEqual(inner.dim, 25)
        self.assertIsNotNone(algebra.pmap)

    def test_envelope_of_a_non_subalgebra(self):
        L = self.w11
        with self.assertRaises(NotClosedError):
            p_envelope(L, Subspace.spanned_by_labels(L, ["D1", "x1^2*D1"]))


class TestTorusSearch(ModLieUnitTestCase):
    def test_classical_algebras(self):
        self.assertEqual(max_torus_search(self.sl2, seed=1, config=SEARCH_CONFIG).dim, 1)
        self.assertEqual(max_torus_search(self.gl2, seed=1, config=SEARCH_CONFIG).dim, 2)

    def test_jacobson_witt_algebras(self):
        self.assertEqual(max_torus_search(self.w11, seed=1, config=SEARCH_CONFIG, target_dim=1).dim, 1)
        torus = max_torus_search(self.w21, seed=1, config=SEARCH_CONFIG, target_dim=2)
        self.assertEqual(torus.dim, 2)
        self.assertTrue(torus.verify()["valid"])

    def test_parallel_restarts_agree(self):
        first = max_torus_search(self.gl2, seed=5, restarts=4, jobs=2)
        second = max_torus_search(self.gl2, seed=5, restarts=4, jobs=1)
        self.assertEqual(first.span, second.span)

    def test_needs_a_restricted_algebra(self):
        with self.assertRaises(NotRestrictedError):
            max_torus_search(self.w1_2)


if __name__ == '__main__':
    unittest.main()
