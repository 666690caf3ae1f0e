import unittest

import mock

from modlie.config import Config, DEFAULT_CONFIG


class TestConfig(unittest.TestCase):
    def test_defaults(self):
        self.assertEqual(DEFAULT_CONFIG.dim_cap, 400)
        self.assertEqual(DEFAULT_CONFIG.restarts, 32)
        self.assertFalse(DEFAULT_CONFIG.allow_small_primes)

    def test_from_env(self):
        config = Config.from_env({"MODLIE_SEED": "7", "MODLIE_DIM_CAP": "100"})
        self.assertEqual((config.seed, config.dim_cap), (7, 100))

    def test_explicit_arguments_win(self):
        config = Config.from_env({"MODLIE_SEED": "7"}, seed=11)
        self.assertEqual(config.seed, 11)

    def test_from_process_environment(self):
        with mock.patch.dict("os.environ", {"MODLIE_SEED": "3"}):
            self.assertEqual(Config.from_env().seed, 3)

    def test_replace(self):
        config = DEFAULT_CONFIG.replace(restarts=4)
        self.assertEqual(config.restarts, 4)
        self.assertEqual(config.seed, DEFAULT_CONFIG.seed)
        self.assertEqual(DEFAULT_CONFIG.restarts, 32)


if __name__ == '__main__':
    unittest.main()
