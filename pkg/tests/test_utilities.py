import json
import unittest

import numpy as np

from modlie import utilities


class TestUtilities(unittest.TestCase):

    def test_decorate_all_methods(self):
        # reducing every output mod 5; __init__ is left alone
        def reduce_mod_5(function):
            def function_wrapper(*args, **kwargs):
                return function(*args, **kwargs) % 5

            return function_wrapper

        @utilities.decorate_all_methods(reduce_mod_5)
        class Residues(object):
            def __init__(self, value):
                self.value = value

            def square(self):
                return self.value ** 2

            def cube(self):
                return self.value ** 3

        residues = Residues(3)
        self.assertEqual(residues.value, 3)
        self.assertEqual(residues.square(), 4)
        self.assertEqual(residues.cube(), 2)

    def test_decorate_all_methods_with_prefix(self):
        def negate(function):
            def function_wrapper(*args, **kwargs):
                return -function(*args, **kwargs)

            return function_wrapper

        @utilities.decorate_all_methods(negate, prefix="check_")
        class Checks(object):
            def check_one(self):
                return 1

            def helper(self):
                return 2

        self.assertEqual(Checks().check_one(), -1)
        self.assertEqual(Checks().helper(), 2)

    def test_parse_int_list(self):
        self.assertEqual(utilities.parse_int_list("2,1"), [2, 1])
        self.assertEqual(utilities.parse_int_list(" 2 1 3 "), [2, 1, 3])

    def test_parse_matrix(self):
        self.assertEqual(utilities.parse_matrix("1,0;2,1"), [[1, 0], [2, 1]])
        self.assertEqual(utilities.parse_matrix("2"), [[2]])
        with self.assertRaises(ValueError):
            utilities.parse_matrix("1,0;2")

    def test_monomial_label(self):
        self.assertEqual(utilities.monomial_label((2, 0, 1)), "x1^2*x3")
        self.assertEqual(utilities.monomial_label((0, 0)), "1")
        self.assertEqual(utilities.monomial_label((1,), variable="y"), "y1")

    def test_character_key(self):
        self.assertEqual(utilities.character_key((1, 0)), "1,0")
        self.assertEqual(utilities.character_key(()), "")

    def test_to_plain(self):
        value = {(1, 2): np.array([1, 2]), "flag": np.bool_(True), "n": np.int64(4), "pairs": [(1, 2)], 3: None}
        plain = utilities.to_plain(value)
        self.assertEqual(plain, {"1,2": [1, 2], "flag": True, "n": 4, "pairs": [[1, 2]], "3": None})
        json.dumps(plain)


if __name__ == '__main__':
    unittest.main()
