import unittest

import mock

from modlie.autos import demushkin_lift, LieAuto
from modlie.ffla import PrimeFieldMatrix
from modlie.enumerations import CheckStatusEnum, ExitCodeEnum
from modlie.error_handlers import CheckFailure, handle_check_failure
from modlie.suites import (expect, VerificationSuite, VerificationReport, AxiomSuite, EmbeddingSuite, FiberSuite,
                           SkryabinSuite, SylowSuite, SolvabilitySuite, WeylCertificateSuite, SUITES, run_suite)
from modlie.utilities import decorate_all_methods


@decorate_all_methods(handle_check_failure, prefix="check_")
class MixedSuite(VerificationSuite):
    name = "mixed"

    def check_passes(self):
        return expect(True, "Unreachable.", value=1)

    def check_skips(self):
        return {"skip": True, "reason": "not applicable"}

    def check_fails(self):
        return expect(False, "Broken.", value=2)


class TestVerificationFramework(unittest.TestCase):
    def test_expect(self):
        self.assertEqual(expect(True, "Unused.", dim=3), {"dim": 3})
        with self.assertRaises(CheckFailure) as context:
            expect(False, "Wrong dimension.", dim=4)
        self.assertEqual(context.exception.witness, {"dim": 4})

    def test_statuses_in_definition_order(self):
        report = MixedSuite(seed=1).run()
        self.assertEqual([c["id"] for c in report.checks], ["passes", "skips", "fails"])
        self.assertEqual([c["status"] for c in report.checks],
                         [CheckStatusEnum.PASS, CheckStatusEnum.SKIP, CheckStatusEnum.FAIL])
        self.assertEqual(report.failures(), ["fails"])
        self.assertFalse(report.passed)
        self.assertEqual(report.exit_code, ExitCodeEnum.CHECK_FAILED)

    def test_parallel_run_keeps_order(self):
        report = MixedSuite(seed=1, jobs=3).run()
        self.assertEqual([c["id"] for c in report.checks], ["passes", "skips", "fails"])

    def test_report_document(self):
        report = VerificationReport("mixed", 7, {"p": 5}, [{"id": "a", "status": CheckStatusEnum.SKIP}])
        document = report.to_dict()
        self.assertEqual(document["schema_version"], 1)
        self.assertEqual((document["suite"], document["seed"]), ("mixed", 7))
        self.assertTrue(document["passed"])
        self.assertEqual(report.exit_code, ExitCodeEnum.OK)

    def test_defaults(self):
        suite = MixedSuite(m=2)
        self.assertEqual(suite.params, {"p": 5, "n": 2, "m": 2, "n_vec": [2, 2]})
        self.assertEqual(suite.seed, suite.config.seed)

    def test_cached_builds_once(self):
        suite = MixedSuite()
        build = mock.Mock(return_value=42)
        self.assertEqual(suite.cached("answer", build), 42)
        self.assertEqual(suite.cached("answer", build), 42)
        self.assertEqual(build.call_count, 1)

    def test_cached_builds_can_nest(self):
        suite = MixedSuite()
        self.assertEqual(suite.cached("outer", lambda: suite.cached("inner", lambda: 1) + 1), 2)

    def test_registry(self):
        self.assertEqual(sorted(SUITES), ["axioms", "embedding", "fibers", "jacobson-oracle", "skryabin",
                                          "solvability", "sylow", "torus", "transport", "weyl-certificate"])
        with self.assertRaises(KeyError):
            run_suite("unknown")


class TestSuites(unittest.TestCase):
    def assertPassed(self, report):
        self.assertTrue(report.passed, report.to_dict())

    def test_axioms(self):
        self.assertPassed(AxiomSuite().run())

    def test_embedding(self):
        report = EmbeddingSuite().run()
        self.assertPassed(report)
        envelope = [c for c in report.checks if c["id"] == "envelope_dimension"][0]
        self.assertEqual(envelope["witness"]["dim"], 26)

    def test_fibers(self):
        report = run_suite("fibers", n=2)
        self.assertPassed(report)
        self.assertEqual(report.checks[0]["witness"]["expected_nonzero"], 5)

    def test_skryabin(self):
        self.assertPassed(SkryabinSuite(jobs=2).run())

    def test_sylow(self):
        self.assertPassed(SylowSuite(n=2).run())
        with self.assertRaises(ValueError):
            SylowSuite(n=1)

    def test_solvability(self):
        self.assertPassed(SolvabilitySuite().run())

    def test_fibers_with_one_variable(self):
        self.assertPassed(FiberSuite(n=1).run())

    def test_lifts_are_sampled_per_element(self):
        record = WeylCertificateSuite(n=1).check_lifts_are_automorphisms()
        self.assertEqual(record["status"], CheckStatusEnum.PASS)
        self.assertEqual(record["witness"]["lifts"], 4)
        self.assertEqual(record["witness"]["samples_per_lift"], 100)

    def test_corrupted_lift_fails_the_automorphism_check(self):
        def scaled_lift(L, g, **kwargs):
            lift = demushkin_lift(L, g, **kwargs)
            if g.tolist() == [[2]]:
                return LieAuto(L, PrimeFieldMatrix(L.field, 2 * lift.matrix.entries))
            return lift

        with mock.patch("modlie.suites.demushkin_lift", side_effect=scaled_lift):
            record = WeylCertificateSuite(n=1).check_lifts_are_automorphisms()
        self.assertEqual(record["status"], CheckStatusEnum.FAIL)
        self.assertEqual(record["witness"]["failures"], [[[2]]])

    def test_library_errors_fail_the_check(self):
        with mock.patch("modlie.suites.build_hamiltonian_H", side_effect=CheckFailure("Boom.")):
            report = AxiomSuite().run()
        failed = dict((c["id"], c) for c in report.checks if c["status"] == CheckStatusEnum.FAIL)
        self.assertEqual(list(failed), ["h_2_1"])
        self.assertEqual(failed["h_2_1"]["witness"]["message"], "Boom.")


if __name__ == '__main__':
    unittest.main()
