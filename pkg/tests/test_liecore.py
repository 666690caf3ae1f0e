import unittest
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from hypothesis import given, settings, strategies as st

from modlie.cartan import build_abelian, build_classical
from modlie.enumerations import AlgebraFamilyEnum
from modlie.error_handlers import NotRestrictedError, NotClosedError, DimensionMismatchError
from modlie.liecore import (LieAlgebra, Subspace, structure_constants, bracket, ad_matrix, is_subalgebra, is_ideal,
                            is_abelian, derived_series, is_solvable, lower_central_series, is_nilpotent, centralizer,
                            center, normalizer, subalgebra_closure, quotient, jacobson_p_power, p_power,
                            validate_algebra, is_lie_homomorphism, simultaneous_kernel, is_elementary_abelian_ideal,
                            is_centerless)
from modlie.ffla import PrimeFieldMatrix
from tests.modlie_unit_test_case import ModLieUnitTestCase

elements_of_w11 = st.lists(st.integers(0, 4), min_size=5, max_size=5)


class TestLieAlgebra(ModLieUnitTestCase):
    def test_sl2_brackets(self):
        L = self.sl2
        e, h, f = (L.element(**{label: 1}) for label in ("e", "h", "f"))
        self.assertVectorEqual(bracket(L, e, f), h)
        self.assertVectorEqual(bracket(L, h, e), 2 * e)
        self.assertVectorEqual(bracket(L, h, f), -2 * f)

    def test_lazy_caches_agree_across_threads(self):
        L = build_classical(AlgebraFamilyEnum.SPECIAL_LINEAR, 2, self.p)
        with ThreadPoolExecutor(max_workers=4) as executor:
            tensors = list(executor.map(lambda _: L.basis_ad.copy(), range(8)))
            centerless = list(executor.map(lambda _: is_centerless(L), range(8)))
        for T in tensors:
            self.assertTrue(np.array_equal(T, L.basis_ad))
        self.assertEqual(centerless, [True] * 8)
        self.assertIs(L.tensor, L.tensor)

    def test_stacked_bracket(self):
        L = self.sl2
        h = L.element(h=1)
        stacked = bracket(L, h, np.eye(3, dtype=np.int64))
        self.assertEqual(stacked.shape, (3, 3))
        self.assertVectorEqual(stacked[0], 2 * L.element(e=1))

    def test_bracket_length_mismatch(self):
        with self.assertRaises(DimensionMismatchError):
            bracket(self.sl2, np.zeros(3, dtype=np.int64), np.zeros(4, dtype=np.int64))

    def test_ad_matrix_columns(self):
        L = self.sl2
        ad_h = ad_matrix(L, L.element(h=1))
        self.assertEqual(ad_h, PrimeFieldMatrix(L.field, np.diag([2, 0, 3])))

    def test_structure_constants_store_both_orders(self):
        sc = structure_constants(2, lambda i, j: [(0, 1)])
        self.assertEqual(sc, {(0, 1): [(0, 1)], (1, 0): [(0, -1)]})

    def test_equality_ignores_realization(self):
        L = self.sl2
        copy = LieAlgebra(L.field, L.labels, L.sc, pmap=L.pmap)
        self.assertEqual(copy, L)
        self.assertNotEqual(LieAlgebra(L.field, L.labels, L.sc), L)

    def test_validate_catalog_members(self):
        for L in (self.w11, self.w21, self.w1_2, self.sl2, self.gl2, self.h2):
            report = validate_algebra(L)
            self.assertTrue(report["valid"], "{!r}: {}".format(L, report))
            self.assertEqual(report["jacobi_mode"], "full")

    def test_validate_detects_broken_jacobi(self):
        L = self.sl2
        sc = dict(L.sc)
        e, h = L.labels.index("e"), L.labels.index("h")
        sc[(h, e)] = [(e, 1)]
        sc[(e, h)] = [(e, -1)]
        report = validate_algebra(LieAlgebra(L.field, L.labels, sc))
        self.assertFalse(report["valid"])
        self.assertTrue(report["jacobi"])


class TestSubspaces(ModLieUnitTestCase):
    def test_subspace_is_canonical(self):
        L = self.sl2
        first = Subspace(L, [L.element(e=1, h=1), L.element(h=2)])
        second = Subspace.spanned_by_labels(L, ["e", "h"])
        self.assertEqual(first, second)
        self.assertEqual(first.dim, 2)

    def test_sum_and_intersection(self):
        L = self.sl2
        A = Subspace.spanned_by_labels(L, ["e", "h"])
        B = Subspace.spanned_by_labels(L, ["h", "f"])
        self.assertEqual(A.sum(B).dim, 3)
        self.assertEqual(A.intersect(B), Subspace.spanned_by_labels(L, ["h"]))

    def test_subalgebras_and_ideals(self):
        L = self.sl2
        borel = Subspace.spanned_by_labels(L, ["e", "h"])
        self.assertTrue(is_subalgebra(L, borel))
        self.assertFalse(is_ideal(L, borel))
        self.assertFalse(is_subalgebra(L, Subspace.spanned_by_labels(L, ["e", "f"])))
        self.assertTrue(is_abelian(L, Subspace.spanned_by_labels(L, ["e"])))

    def test_closure(self):
        L = self.w11
        closure = subalgebra_closure(L, [L.element(D1=1), L.element(**{"x1^2*D1": 1})])
        self.assertEqual(closure.dim, 3)


class TestSeries(ModLieUnitTestCase):
    def test_solvability(self):
        L = self.sl2
        borel = Subspace.spanned_by_labels(L, ["e", "h"])
        self.assertEqual([S.dim for S in derived_series(L, borel)], [2, 1, 0])
        self.assertTrue(is_solvable(L, borel))
        self.assertFalse(is_solvable(L))
        self.assertFalse(is_solvable(self.w11))
        self.assertTrue(is_solvable(build_abelian(3, 5)))

    def test_derived_series_of_a_non_subalgebra(self):
        L = self.sl2
        with self.assertRaises(NotClosedError):
            derived_series(L, Subspace.spanned_by_labels(L, ["e", "f"]))

    def test_nilpotency(self):
        L = self.sl2
        borel = Subspace.spanned_by_labels(L, ["e", "h"])
        self.assertEqual(lower_central_series(L, borel)[-1].dim, 1)
        self.assertFalse(is_nilpotent(L, borel))
        self.assertTrue(is_nilpotent(L, Subspace.spanned_by_labels(L, ["e"])))


class TestCentralizersAndQuotients(ModLieUnitTestCase):
    def test_centralizer_and_normalizer(self):
        L = self.sl2
        self.assertEqual(centralizer(L, Subspace.spanned_by_labels(L, ["h"])), Subspace.spanned_by_labels(L, ["h"]))
        self.assertEqual(normalizer(L, Subspace.spanned_by_labels(L, ["e"])),
                         Subspace.spanned_by_labels(L, ["e", "h"]))

    def test_center_of_gl2(self):
        L = self.gl2
        Z = center(L)
        self.assertEqual(Z.dim, 1)
        self.assertTrue(Z.contains(L.element(E11=1, E22=1)))
        self.assertEqual(center(self.sl2).dim, 0)

    def test_quotient_by_center(self):
        L = self.gl2
        Q = quotient(L, center(L))
        self.assertEqual(Q.dim, 3)
        self.assertIsNotNone(Q.pmap)
        self.assertTrue(validate_algebra(Q)["valid"])

    def test_quotient_by_non_ideal(self):
        L = self.sl2
        with self.assertRaises(NotClosedError):
            quotient(L, Subspace.spanned_by_labels(L, ["e"]))

    def test_simultaneous_kernel(self):
        L = self.sl2
        ad_h = ad_matrix(L, L.element(h=1))
        self.assertEqual(simultaneous_kernel(L, [ad_h]), Subspace.spanned_by_labels(L, ["h"]))
        self.assertEqual(simultaneous_kernel(L, [ad_h], lam=2), Subspace.spanned_by_labels(L, ["e"]))

    def test_elementary_abelian_ideal(self):
        A = build_abelian(2, 5)
        self.assertTrue(is_elementary_abelian_ideal(A, Subspace.full(A)))
        self.assertFalse(is_elementary_abelian_ideal(self.gl2, center(self.gl2)))


class TestPromotion(ModLieUnitTestCase):
    def test_from_basis_of_sl2_inside_w11(self):
        L = self.w11
        vectors = [L.element(D1=1), L.element(**{"x1*D1": 1}), L.element(**{"x1^2*D1": 1})]
        S = LieAlgebra.from_basis(L, vectors)
        self.assertEqual(S.dim, 3)
        self.assertIsNotNone(S.pmap)
        self.assertTrue(validate_algebra(S)["valid"])
        self.assertTrue(is_lie_homomorphism(np.stack(vectors, axis=1), S, L))

    def test_from_basis_of_a_non_subalgebra(self):
        L = self.w11
        with self.assertRaises(NotClosedError):
            LieAlgebra.from_basis(L, [L.element(D1=1), L.element(**{"x1^2*D1": 1})])


class TestPMap(ModLieUnitTestCase):
    def test_non_restricted_algebra(self):
        with self.assertRaises(NotRestrictedError):
            p_power(self.w1_2, self.w1_2.basis_vector(0))
        with self.assertRaises(NotRestrictedError):
            jacobson_p_power(self.w1_2, self.w1_2.basis_vector(0))

    def test_toral_and_nilpotent_basis_elements(self):
        L = self.w11
        self.assertVectorEqual(p_power(L, L.element(**{"x1*D1": 1})), L.element(**{"x1*D1": 1}))
        self.assertFalse(p_power(L, L.element(D1=1)).any())

    def test_gl2_goes_through_jacobson(self):
        L = self.gl2
        u = L.element(E11=1, E12=1)
        # the matrix [[1, 1], [0, 0]] is idempotent
        self.assertVectorEqual(p_power(L, u), u)

    @settings(max_examples=30, deadline=None)
    @given(elements_of_w11)
    def test_jacobson_matches_derivation_powers(self, coords):
        L = self.w11
        u = L.vector(coords)
        self.assertVectorEqual(jacobson_p_power(L, u), L.realization.p_power(u))
        self.assertVectorEqual(p_power(L, u), L.realization.p_power(u))

    def test_jacobson_on_w21(self):
        L = self.w21
        rng = np.random.default_rng(11)
        for _ in range(10):
            u = L.random_element(rng)
            self.assertVectorEqual(jacobson_p_power(L, u), L.realization.p_power(u))


if __name__ == '__main__':
    unittest.main()
