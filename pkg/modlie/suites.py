"""
Named verification suites. Every ``check_*`` method of a suite returns a witness dictionary when it passes and raises
:py:class:`~modlie.error_handlers.CheckFailure` when it does not; :py:func:`~modlie.error_handlers.handle_check_failure`
turns either outcome into a check record.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from modlie.autos import (demushkin_lift, restriction_to_torus, stabilizes_subspace, unitriangular_group,
                          weyl_certificate, classical_weyl_certificate, ToralStabilizerCertificate)
from modlie.cartan import (build_jacobson_witt, build_witt, build_classical, build_hamiltonian_H, build_abelian,
                           standard_torus, standard_maximal_solvable, borel_of_sl2)
from modlie.config import DEFAULT_CONFIG
from modlie.enumerations import AlgebraFamilyEnum, CoverageEnum, CheckStatusEnum, ExitCodeEnum, VerificationModeEnum
from modlie.error_handlers import handle_check_failure, CheckFailure
from modlie.ffla import general_linear_group, gl_order
from modlie.liecore import validate_algebra, jacobson_p_power, is_solvable, derived_series
from modlie.restrict import Torus, max_torus_search
from modlie.utilities import decorate_all_methods, character_key
from modlie.weights import (decompose, coverage_check, equal_dims_check, dimension_identity_check,
                            fiber_count_check, transport_check, bracket_additivity_check)
from modlie.wittemb import build_iota, check_D_i_expansion, check_coefficient_identity, envelope_in_target

logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1


def expect(condition, message, **witness):
    """
    :raises CheckFailure: Raised with ``witness`` when ``condition`` is false.
    :return: ``witness``.
    """
    if not condition:
        raise CheckFailure(message, witness=witness)
    return witness


class VerificationReport(object):
    """Outcome of one suite run."""

    def __init__(self, suite, seed, params, checks):
        self.suite = suite
        self.seed = seed
        self.params = params
        self.checks = checks

        super(VerificationReport, self).__init__()

    @property
    def passed(self):
        return all(c["status"] != CheckStatusEnum.FAIL for c in self.checks)

    @property
    def exit_code(self):
        return ExitCodeEnum.OK if self.passed else ExitCodeEnum.CHECK_FAILED

    def failures(self):
        return [c["id"] for c in self.checks if c["status"] == CheckStatusEnum.FAIL]

    def to_dict(self):
        return {"schema_version": REPORT_SCHEMA_VERSION, "suite": self.suite, "seed": self.seed,
                "params": self.params, "passed": self.passed, "checks": self.checks}


class VerificationSuite(object):
    """
    Base class of the suites. Subclasses set ``name`` and define ``check_*`` methods, which run in definition order
    (concurrently with ``jobs > 1``). Expensive objects shared between checks go through :py:meth:`cached`.
    """
    name = None

    def __init__(self, p=5, n=2, m=1, n_vec=None, seed=None, config=None, jobs=1):
        """
        :param int p: Characteristic.
        :param int n: Number of variables of the Jacobson-Witt algebra under test.
        :param int m: Number of variables of the generalized Witt algebra embedded.
        :param n_vec: Truncation heights of the generalized Witt algebra (defaults to ``(2,) * m``).
        :type n_vec: list of int
        :param int seed: Seed of every random choice (defaults to ``config.seed``).
        :param config: Settings (optional).
        :type config: :py:class:`~modlie.config.Config`
        :param int jobs: Worker threads for independent checks.
        """
        self.config = config or DEFAULT_CONFIG
        self.p = p
        self.n = n
        self.m = m
        self.n_vec = list(n_vec) if n_vec else [2] * m
        self.seed = self.config.seed if seed is None else seed
        self.jobs = jobs
        self._cache = {}
        self._lock = threading.RLock()

        super(VerificationSuite, self).__init__()

    @property
    def params(self):
        return {"p": self.p, "n": self.n, "m": self.m, "n_vec": self.n_vec}

    def cached(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    def witt(self, n):
        return self.cached(("witt", n), lambda: build_jacobson_witt(n, self.p, self.config)[0])

    def check_names(self):
        return [name for name in type(self).__dict__ if name.startswith("check_")]

    def run(self):
        """
        :rtype: :py:class:`VerificationReport`
        """
        names = self.check_names()
        logger.info("running suite %s (%d checks, seed %d)", self.name, len(names), self.seed)
        if self.jobs and self.jobs > 1:
            with ThreadPoolExecutor(max_workers=self.jobs) as executor:
                checks = list(executor.map(lambda name: getattr(self, name)(), names))
        else:
            checks = [getattr(self, name)() for name in names]
        return VerificationReport(self.name, self.seed, self.params, checks)


def _validated(L, config):
    report = validate_algebra(L, config)
    return expect(report["valid"], "{!r} violates the axioms.".format(L), dim=L.dim,
                  jacobi_mode=report["jacobi_mode"], antisymmetry=report["antisymmetry"], jacobi=report["jacobi"],
                  restrictedness=report["restrictedness"], restricted=L.pmap is not None)


@decorate_all_methods(handle_check_failure, prefix="check_")
class AxiomSuite(VerificationSuite):
    name = "axioms"

    def check_w_1_1(self):
        L = self.witt(1)
        expect(L.dim == self.p, "W(1;1) has the wrong dimension.", dim=L.dim)
        return _validated(L, self.config)

    def check_w_n_1(self):
        L = self.witt(self.n)
        expected = self.n * self.p ** self.n
        expect(L.dim == expected, "W(n;1) has the wrong dimension.", dim=L.dim, expected=expected)
        return _validated(L, self.config)

    def check_w_m_n(self):
        L = build_witt(self.m, self.n_vec, self.p, self.config)
        expected = self.m * self.p ** sum(self.n_vec)
        expect(L.dim == expected, "W(m;n) has the wrong dimension.", dim=L.dim, expected=expected)
        expect(L.pmap is None, "W(m;n) with a truncation above 1 must not be restricted.")
        return _validated(L, self.config)

    def check_sl_2(self):
        L = build_classical(AlgebraFamilyEnum.SPECIAL_LINEAR, 2, self.p, config=self.config)
        expect(L.dim == 3, "sl_2 has the wrong dimension.", dim=L.dim)
        return _validated(L, self.config)

    def check_gl_2(self):
        L = build_classical(AlgebraFamilyEnum.GENERAL_LINEAR, 2, self.p, config=self.config)
        expect(L.dim == 4, "gl_2 has the wrong dimension.", dim=L.dim)
        return _validated(L, self.config)

    def check_h_2_1(self):
        L = build_hamiltonian_H(2, self.p, self.config)
        expect(L.dim == self.p ** 2 - 2, "H(2;1)^(2) has the wrong dimension.", dim=L.dim)
        return _validated(L, self.config)


@decorate_all_methods(handle_check_failure, prefix="check_")
class JacobsonOracleSuite(VerificationSuite):
    """Jacobson's formula against p-fold composition of derivations."""
    name = "jacobson-oracle"

    samples = 100

    def check_basis_p_powers(self):
        L = self.witt(self.n)
        bad = [L.labels[k] for k in range(L.dim)
               if not np.array_equal(L.pmap[k], L.realization.p_power(L.basis_vector(k)))]
        return expect(not bad, "Stored p-th powers disagree with derivation powers.", mismatches=bad, dim=L.dim)

    def check_random_elements(self):
        L = self.witt(self.n)
        rng = np.random.default_rng(self.seed)
        bad = 0
        for _ in range(self.samples):
            u = L.random_element(rng)
            if not np.array_equal(jacobson_p_power(L, u), L.realization.p_power(u)):
                bad += 1
        return expect(not bad, "Jacobson's formula disagrees with derivation powers.", samples=self.samples,
                      mismatches=bad)


@decorate_all_methods(handle_check_failure, prefix="check_")
class EmbeddingSuite(VerificationSuite):
    name = "embedding"

    def embedding(self):
        return self.cached("iota", lambda: build_iota(self.m, self.n_vec, self.p, self.config, verify=False))

    def envelope(self):
        return self.cached("envelope", lambda: envelope_in_target(self.embedding()))

    def check_injective_homomorphism(self):
        emb = self.embedding()
        bad = emb.bracket_violations()
        return expect(emb.is_injective() and not bad, "Embedding is not an injective homomorphism.",
                      source_dim=emb.source.dim, target_dim=emb.target.dim, bracket_violations=bad,
                      pairs_checked=emb.source.dim * (emb.source.dim - 1) // 2)

    def check_derivation_expansion(self):
        report = check_D_i_expansion(self.embedding())
        return expect(report["matches"], "Images of the partial derivatives differ from their expansion.",
                      variables=report["variables"])

    def check_coefficient_identity(self):
        report = check_coefficient_identity(self.embedding(), self.envelope())
        return expect(report["holds"], "Coefficient identity fails.", checked=report["checked"],
                      violations=report["violations"], exempt=report["exempt"])

    def check_envelope_dimension(self):
        envelope = self.envelope()
        expected = self.m * self.p ** sum(self.n_vec) + sum(n - 1 for n in self.n_vec)
        return expect(envelope.dim == expected, "p-envelope has the wrong dimension.", dim=envelope.dim,
                      expected=expected, image_dim=envelope.inner.dim)


def _envelope_algebra(suite):
    """The minimal p-envelope of W(m;n) as a standalone algebra with W(m;n) inside it."""
    def build():
        emb = build_iota(suite.m, suite.n_vec, suite.p, suite.config, verify=False)
        return envelope_in_target(emb).promoted()
    return suite.cached("promoted-envelope", build)


def _searched_torus(suite, L, key, seed=None, target_dim=None):
    return suite.cached(("torus", key, seed), lambda: max_torus_search(
        L, seed=suite.seed if seed is None else seed, config=suite.config, target_dim=target_dim))


@decorate_all_methods(handle_check_failure, prefix="check_")
class TorusSuite(VerificationSuite):
    """Randomized maximal torus search against the known toral ranks."""
    name = "torus"

    def _check(self, L, key, expected):
        torus = _searched_torus(self, L, key, target_dim=expected)
        report = torus.verify(diagonalizable=True)
        return expect(torus.dim == expected and report["valid"], "Searched torus is wrong.", dim=torus.dim,
                      expected=expected, commuting=report["commuting"], toral=report["toral"],
                      diagonalizable=report["diagonalizable"])

    def check_w_1_1(self):
        return self._check(self.witt(1), "w-1-1", 1)

    def check_w_n_1(self):
        return self._check(self.witt(self.n), "w-n-1", self.n)

    def check_envelope(self):
        algebra, _ = _envelope_algebra(self)
        return self._check(algebra, "envelope", sum(self.n_vec))


def _decomposition_witness(L, wd, sub=None):
    coverage = coverage_check(wd)
    dims = equal_dims_check(wd)
    identity = dimension_identity_check(L, wd, sub)
    return {"dim": wd.module_dim, "zero": wd.zero_space.dim, "mu": wd.mu, "coverage": coverage["verdict"],
            "missing": [character_key(c) for c in coverage["missing"]], "common": dims["common"],
            "identity": identity.get("holds"), "torus_intersection": identity.get("torus_intersection"),
            "self_centralizing": identity.get("self_centralizing")}


@decorate_all_methods(handle_check_failure, prefix="check_")
class SkryabinSuite(VerificationSuite):
    """Every nonzero character occurs, with equal multiplicities, on the catalog's nonclassical members."""
    name = "skryabin"

    def _full(self, L, torus, module=None):
        wd = decompose(L, torus, module)
        witness = _decomposition_witness(L, wd)
        expect(witness["coverage"] == CoverageEnum.FULL and witness["common"] is not None and witness["identity"],
               "Coverage, equal dimensions or the dimension identity fails.", **witness)
        return witness

    def check_w_1_1(self):
        L = self.witt(1)
        return self._full(L, standard_torus(L))

    def check_w_n_1(self):
        L = self.witt(self.n)
        return self._full(L, standard_torus(L))

    def check_h_2_1(self):
        L = build_hamiltonian_H(2, self.p, self.config)
        return self._full(L, standard_torus(L))

    def check_envelope(self):
        algebra, _ = _envelope_algebra(self)
        torus = _searched_torus(self, algebra, "envelope", target_dim=sum(self.n_vec))
        witness = self._full(algebra, torus)
        return expect(witness["self_centralizing"], "Torus of the envelope is not self-centralizing.", **witness)

    def check_inner_algebra(self):
        algebra, inner = _envelope_algebra(self)
        torus = _searched_torus(self, algebra, "envelope", target_dim=sum(self.n_vec))
        witness = self._full(algebra, torus, inner)
        return expect(witness["torus_intersection"] == 1, "The algebra does not meet the torus in a line.",
                      **witness)

    def check_sl_2_partial(self):
        L = build_classical(AlgebraFamilyEnum.SPECIAL_LINEAR, 2, self.p, config=self.config)
        wd = decompose(L, standard_torus(L))
        coverage = coverage_check(wd)
        expected = [(c,) for c in range(1, self.p) if c not in (2, self.p - 2)]
        return expect(coverage["verdict"] == CoverageEnum.PARTIAL and coverage["missing"] == expected,
                      "sl_2 should miss exactly the characters other than +-2.",
                      coverage=coverage["verdict"], missing=[character_key(c) for c in coverage["missing"]],
                      expected=[character_key(c) for c in expected])


@decorate_all_methods(handle_check_failure, prefix="check_")
class FiberSuite(VerificationSuite):
    """Characters of t_0 restricted to each coordinate subtorus of W(n;1)."""
    name = "fibers"

    def _check(self, k):
        L = self.witt(self.n)
        t0 = standard_torus(L)
        wd = self.cached("wd", lambda: decompose(L, t0))
        report = fiber_count_check(wd, Torus(L, [t0.gens[k]]))
        return expect(report["holds"] and report["coverage_full"], "Fiber counts over a coordinate subtorus fail.",
                      subtorus=k + 1, expected_nonzero=report["expected_nonzero"], zero_fiber=report["zero_fiber"],
                      counts=report["counts"], bad_fibers=report["bad_fibers"], inconsistent=report["inconsistent"])

    def check_coordinate_subtori(self):
        witnesses = [self._check(k) for k in range(self.n)]
        return {"subtori": len(witnesses), "expected_nonzero": witnesses[0]["expected_nonzero"],
                "counts": [w["counts"] for w in witnesses]}

    def check_whole_torus(self):
        L = self.witt(self.n)
        t0 = standard_torus(L)
        wd = self.cached("wd", lambda: decompose(L, t0))
        report = fiber_count_check(wd, t0)
        return expect(report["holds"] and report["expected_nonzero"] == 1, "Fibers over the whole torus are not "
                      "singletons.", bad_fibers=report["bad_fibers"], zero_fiber=report["zero_fiber"])


@decorate_all_methods(handle_check_failure, prefix="check_")
class WeylCertificateSuite(VerificationSuite):
    """Lifts of all of GL_n(F_p) normalizing t_0, with restriction map onto GL_n(F_p)."""
    name = "weyl-certificate"
    samples_per_lift = 100

    def certificate(self):
        L = self.witt(self.n)
        return self.cached("certificate", lambda: weyl_certificate(
            L, standard_torus(L), jobs=self.jobs, verify=VerificationModeEnum.NONE))

    def check_lifts(self):
        result = self.certificate()
        order = gl_order(self.n, self.p)
        return expect(result["lifts"] == order and result["normalizing"] == order, "Not every element lifts.",
                      lifts=result["lifts"], expected=order)

    def check_lifts_are_automorphisms(self):
        L = self.witt(self.n)
        rng = np.random.default_rng(self.seed)
        group = general_linear_group(L.field, self.n)
        failures = []
        for g in group:
            report = demushkin_lift(L, g, verify=VerificationModeEnum.NONE).verify(
                mode=VerificationModeEnum.SAMPLE, rng=rng, samples=self.samples_per_lift, config=self.config)
            if not report["valid"]:
                failures.append(g.tolist())
        return expect(not failures, "Some lifts are not restricted automorphisms.", lifts=len(group),
                      samples_per_lift=self.samples_per_lift, failures=failures[:10])

    def check_restriction_bijective(self):
        result = self.certificate()
        return expect(result["bijective"], "Restriction map is not a bijection onto GL_n(F_p).",
                      distinct_restrictions=result["distinct_restrictions"], lifts=result["lifts"])

    def check_inverse_transpose(self):
        result = self.certificate()
        return expect(result["inverse_transpose"], "Restrictions are not the inverse transposes.",
                      convention="restriction(lift(g)) = (g^-1)^T")

    def check_not_p_group(self):
        certificate = self.certificate()["certificate"]
        return expect(certificate.is_group() and not certificate.is_p_group(),
                      "Weyl certificate of W(n;1) should be a group that is not a p-group.",
                      order=certificate.order)


@decorate_all_methods(handle_check_failure, prefix="check_")
class SylowSuite(VerificationSuite):
    """The standard maximal solvable subalgebra c of W(n;1) and its stabilizing lifts."""
    name = "sylow"

    def __init__(self, **kwargs):
        """
        :raises ValueError: Raised for n < 2, where c is not defined.
        """
        super(SylowSuite, self).__init__(**kwargs)
        if self.n < 2:
            raise ValueError("The sylow suite needs n >= 2, got {}.".format(self.n))

    def c(self):
        return self.cached("c", lambda: standard_maximal_solvable(self.witt(self.n)))

    def check_dimension(self):
        expected = 2 * (self.p ** self.n - 1) // (self.p - 1)
        return expect(self.c().dim == expected, "c has the wrong dimension.", dim=self.c().dim, expected=expected)

    def check_contains_torus(self):
        t0 = standard_torus(self.witt(self.n))
        return expect(self.c().contains_subspace(t0.span), "c does not contain t_0.", torus_dim=t0.dim)

    def check_solvable(self):
        L = self.witt(self.n)
        series = derived_series(L, self.c())
        return expect(series[-1].dim == 0, "c is not solvable.", derived_dims=[S.dim for S in series])

    def check_unitriangular_lifts(self):
        L = self.witt(self.n)
        t0 = standard_torus(L)
        group = unitriangular_group(L.field, self.n)
        restrictions = []
        for g in group:
            a = demushkin_lift(L, g, verify=VerificationModeEnum.NONE)
            expect(stabilizes_subspace(a, self.c()), "A unitriangular lift does not stabilize c.", g=g.tolist())
            restrictions.append(restriction_to_torus(a, t0).matrix)
        certificate = ToralStabilizerCertificate(L.field, restrictions)
        return expect(certificate.is_group() and certificate.is_p_group(),
                      "Restrictions of the unitriangular lifts do not form a p-group.",
                      stabilizing_lifts=len(group), order=certificate.order)

    def check_non_unitriangular_witness(self):
        L = self.witt(self.n)
        swap = np.eye(self.n, dtype=np.int64)[::-1]
        lower = np.eye(self.n, dtype=np.int64)
        lower[1, 0] = 1
        stabilizes = dict((name, stabilizes_subspace(demushkin_lift(L, g, verify=VerificationModeEnum.NONE), self.c()))
                          for name, g in (("swap", swap), ("lower", lower)))
        return expect(not any(stabilizes.values()), "A lift outside U stabilizes c.", stabilizes=stabilizes,
                      witnesses={"swap": swap.tolist(), "lower": lower.tolist()})

    def check_uncapped_span_not_solvable(self):
        L = self.witt(self.n)
        literal = standard_maximal_solvable(L, last_exponent_cap=None)
        return expect(not is_solvable(L, literal), "The uncapped span is unexpectedly solvable.", dim=literal.dim)


@decorate_all_methods(handle_check_failure, prefix="check_")
class SolvabilitySuite(VerificationSuite):
    """Solvable members against simple members, with p-group and non-p-group certificates."""
    name = "solvability"

    def check_solvable_members(self):
        sl2 = build_classical(AlgebraFamilyEnum.SPECIAL_LINEAR, 2, self.p, config=self.config)
        abelian = build_abelian(3, self.p, self.config)
        W = self.witt(self.n)
        verdicts = {"borel_sl2": is_solvable(sl2, borel_of_sl2(sl2)),
                    "abelian": is_solvable(abelian),
                    "c": is_solvable(W, standard_maximal_solvable(W))}
        return expect(all(verdicts.values()), "A solvable member reports non-solvable.", verdicts=verdicts)

    def check_simple_members(self):
        verdicts = {"w_1_1": is_solvable(self.witt(1)),
                    "w_n_1": is_solvable(self.witt(self.n)),
                    "h_2_1": is_solvable(build_hamiltonian_H(2, self.p, self.config)),
                    "sl_2": is_solvable(build_classical(AlgebraFamilyEnum.SPECIAL_LINEAR, 2, self.p,
                                                        config=self.config))}
        return expect(not any(verdicts.values()), "A simple member reports solvable.", verdicts=verdicts)

    def check_classical_certificate(self):
        L = build_classical(AlgebraFamilyEnum.SPECIAL_LINEAR, 2, self.p, config=self.config)
        certificate = classical_weyl_certificate(L, standard_torus(L))
        return expect(certificate.order == 2 and certificate.is_group() and not certificate.is_p_group(),
                      "sl_2 should carry the certificate {+1, -1}.", order=certificate.order)

    def check_witt_certificate(self):
        W = self.witt(1)
        result = weyl_certificate(W, standard_torus(W), verify=VerificationModeEnum.NONE)
        certificate = result["certificate"]
        return expect(result["bijective"] and not certificate.is_p_group(),
                      "W(1;1) should carry a certificate of order p - 1.", order=certificate.order)


@decorate_all_methods(handle_check_failure, prefix="check_")
class TransportSuite(VerificationSuite):
    """Two independently searched maximal tori of W(n;1) give the same multiplicities."""
    name = "transport"

    def _decomposition(self, seed):
        L = self.witt(self.n)
        torus = _searched_torus(self, L, "w-n-1", seed=seed, target_dim=self.n)
        return self.cached(("wd", seed), lambda: decompose(L, torus))

    def check_two_searches(self):
        first, second = self._decomposition(self.seed), self._decomposition(self.seed + 1)
        report = transport_check(first, second)
        return expect(report["holds"] and first.mu == second.mu == self.n,
                      "Searched tori give different multiplicities.", mu=[first.mu, second.mu],
                      zero=report["zero"], multiset_a=report["multiset_a"], multiset_b=report["multiset_b"])

    def check_bracket_additivity(self):
        L = self.witt(self.n)
        report = bracket_additivity_check(L, self._decomposition(self.seed))
        return expect(report["holds"], "Brackets of weight spaces land outside the sum weight.",
                      pairs=report["pairs"], violations=report["violations"][:10])


SUITES = dict((cls.name, cls) for cls in (AxiomSuite, JacobsonOracleSuite, EmbeddingSuite, TorusSuite, SkryabinSuite,
                                          FiberSuite, WeylCertificateSuite, SylowSuite, SolvabilitySuite,
                                          TransportSuite))


def run_suite(name, **kwargs):
    """
    :raises KeyError: Raised for an unknown suite name.
    :rtype: :py:class:`VerificationReport`
    """
    return SUITES[name](**kwargs).run()
