"""
p-structure services on restricted algebras: p-envelopes, toral elements, semisimple parts, tori and the randomized
search for tori of maximal dimension.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from modlie.config import DEFAULT_CONFIG
from modlie.enumerations import AlgebraFamilyEnum
from modlie.error_handlers import require_pmap, NotClosedError, TorusError
from modlie.ffla import PrimeFieldMatrix, kernel_basis, matmul, rank
from modlie.liecore import (LieAlgebra, Subspace, p_power, bracket, ad_matrix, centralizer, is_subalgebra,
                            subalgebra_closure)

logger = logging.getLogger(__name__)


class Torus(object):
    """
    A torus of a restricted algebra, stored by an echelonized basis of toral elements (``t^[p] = t`` for every basis
    vector, hence for every F_p-combination).
    """

    def __init__(self, parent, gens, verify=True):
        """
        :param parent: Ambient restricted algebra.
        :type parent: :py:class:`~modlie.liecore.LieAlgebra`
        :param gens: Toral spanning vectors.
        :type gens: list of numpy.ndarray
        :param bool verify: Check commutation and torality of the basis.
        :raises TorusError: Raised if ``verify`` is set and the basis is not a commuting toral family.
        """
        self.parent = parent
        self.span = Subspace(parent, list(gens))

        super(Torus, self).__init__()

        if verify:
            report = self.verify(diagonalizable=False)
            if not report["valid"]:
                raise TorusError("Generators do not form a torus.", witness=report)

    @property
    def gens(self):
        return self.span.vectors

    @property
    def dim(self):
        return self.span.dim

    def contains(self, v):
        return self.span.contains(v)

    def coordinates(self, v):
        return self.span.coordinates(v)

    def verify(self, diagonalizable=True):
        """
        :param bool diagonalizable: Also check that each ``ad(t)`` is diagonalizable over F_p.
        :return: ``{"valid", "commuting", "toral", "diagonalizable"}``.
        :rtype: dict
        """
        L = self.parent
        gens = self.gens
        commuting = all(not bracket(L, gens[a], gens[b]).any()
                        for a in range(len(gens)) for b in range(a + 1, len(gens)))
        toral = all(np.array_equal(p_power(L, t), t) for t in gens)
        report = {"commuting": commuting, "toral": toral}
        if diagonalizable:
            report["diagonalizable"] = all(_is_diagonalizable(ad_matrix(L, t)) for t in gens)
        report["valid"] = all(report.values())
        return report

    def __repr__(self):
        return "Torus(dim={} in {!r})".format(self.dim, self.parent)


def _is_diagonalizable(M):
    """``M`` is diagonalizable with spectrum in F_p exactly when ``M^p = M``."""
    return M.power(M.field.p) == M


class PEnvelope(object):
    """The closure of a subalgebra ``inner`` under the p-map of ``ambient``."""

    def __init__(self, ambient, inner, closure):
        self.ambient = ambient
        self.inner = inner
        self.closure = closure

        super(PEnvelope, self).__init__()

    @property
    def dim(self):
        return self.closure.dim

    def promoted(self):
        """
        The closure as a standalone restricted algebra, together with the inner algebra as a subspace of it.

        :rtype: tuple
        """
        algebra = LieAlgebra.from_basis(self.ambient, self.closure.basis,
                                        meta={"family": AlgebraFamilyEnum.PROMOTED,
                                              "params": {"parent": self.ambient.meta.get("family"),
                                                         "envelope_of": self.inner.dim}})
        inner = Subspace(algebra, [self.closure.coordinates(v) for v in self.inner.basis])
        return algebra, inner


@require_pmap
def p_envelope(ambient, S):
    """
    Smallest restricted subalgebra of ``ambient`` containing the subalgebra ``S``: p-th powers of the current basis
    are added until the dimension stabilizes.

    :raises NotClosedError: Raised if ``S`` is not a subalgebra.
    """
    if not is_subalgebra(ambient, S):
        raise NotClosedError("p-envelope of a subspace that is not a subalgebra.")
    closure = S
    while True:
        grown = Subspace(ambient, closure.vectors + [p_power(ambient, v) for v in closure.basis])
        if grown.dim > closure.dim:
            grown = subalgebra_closure(ambient, grown.vectors)
        if grown.dim == closure.dim:
            break
        logger.debug("p-envelope grew from %d to %d", closure.dim, grown.dim)
        closure = grown
    return PEnvelope(ambient, S, closure)


@require_pmap
def is_toral(L, u):
    return np.array_equal(p_power(L, u), L.vector(u))


@require_pmap
def p_power_iterates(L, u, config=None):
    """
    ``u, u^[p], u^[p^2], ...`` up to the first repetition.

    :return: ``(iterates, preperiod, period)``.
    :raises TorusError: Raised if no repetition appears within ``config.period_cap`` steps.
    """
    config = config or DEFAULT_CONFIG
    seen = {}
    iterates = []
    current = L.vector(u)
    while True:
        key = current.tobytes()
        if key in seen:
            preperiod = seen[key]
            return iterates, preperiod, len(iterates) - preperiod
        if len(iterates) >= config.period_cap:
            raise TorusError("p-power orbit longer than {} steps.".format(config.period_cap))
        seen[key] = len(iterates)
        iterates.append(current)
        current = p_power(L, current)


@require_pmap
def semisimple_part(L, u, config=None):
    """
    ``u^[p^k]`` for the smallest ``k`` at or past the preperiod of the p-power orbit of ``u`` that is a multiple of
    its period.
    """
    iterates, preperiod, period = p_power_iterates(L, u, config)
    k = -(-preperiod // period) * period
    return iterates[k]


@require_pmap
def toral_fixed_points(L, S):
    """
    Toral elements of an abelian span closed under the p-map. The p-map is F_p-linear there, so these are
    ``ker([p] - 1)``.

    :rtype: list of numpy.ndarray
    """
    if not S.dim:
        return []
    columns = [S.coordinates(p_power(L, v)) for v in S.basis]
    P = np.stack(columns, axis=1) - np.eye(S.dim, dtype=np.int64)
    return [matmul(k, S.basis, L.p) for k in kernel_basis(PrimeFieldMatrix(L.field, P))]


def _p_closed_span(L, vectors):
    """Span of ``vectors`` and all their iterated p-th powers."""
    span = Subspace(L, list(vectors))
    frontier = list(span.basis)
    while frontier:
        images = [p_power(L, v) for v in frontier]
        grown = Subspace(L, span.vectors + images)
        if grown.dim == span.dim:
            break
        span = grown
        frontier = images
    return span


@require_pmap
def torus_generated(L, s):
    """
    Torus spanned by ``s, s^[p], s^[p^2], ...``.

    :raises TorusError: Raised if ``s`` is not semisimple, i.e. not in the span of its own p-th powers, or if the
        toral elements of its p-power span do not fill that span.
    """
    span = _p_closed_span(L, [s])
    higher = Subspace(L, [p_power(L, v) for v in span.basis])
    if not higher.contains(s):
        raise TorusError("Element is not semisimple.")
    gens = toral_fixed_points(L, span)
    if len(gens) != span.dim:
        raise TorusError("Only {} of {} directions of the p-power span are toral over F_{}.".format(
            len(gens), span.dim, L.p), witness={"toral": len(gens), "span": span.dim})
    return Torus(L, gens)


@require_pmap
def extend_torus(L, torus, s):
    """Torus spanned by ``torus`` and the p-th powers of a semisimple ``s`` centralizing it."""
    span = _p_closed_span(L, torus.gens + [s])
    return Torus(L, toral_fixed_points(L, span))


def _search_once(L, seed, restart, config):
    rng = np.random.default_rng([seed, restart])
    torus = Torus(L, [])
    while True:
        C = centralizer(L, torus.span)
        grown = None
        for _ in range(config.samples_per_step):
            s = semisimple_part(L, C.random_element(rng), config)
            if not s.any() or torus.contains(s):
                continue
            grown = extend_torus(L, torus, s)
            if grown.dim > torus.dim:
                break
            grown = None
        if grown is None:
            logger.debug("restart %d stalled at torus dim %d", restart, torus.dim)
            return torus
        torus = grown


@require_pmap
def max_torus_search(L, seed=None, restarts=None, config=None, jobs=1, target_dim=None):
    """
    Greedy randomized search for a torus of maximal dimension. Each restart grows a torus inside the centralizer of
    the current one by semisimple parts of random elements; the largest torus over all restarts is returned (ties go
    to the earliest restart). The dimension found is a lower bound for the maximal torus dimension.

    :param L: Restricted algebra.
    :type L: :py:class:`~modlie.liecore.LieAlgebra`
    :param int seed: RNG seed (defaults to ``config.seed``).
    :param int restarts: Number of restarts (defaults to ``config.restarts``).
    :param config: Settings (optional).
    :type config: :py:class:`~modlie.config.Config`
    :param int jobs: Worker threads for independent restarts.
    :param int target_dim: Stop as soon as a restart reaches this dimension (sequential runs only).
    :rtype: :py:class:`Torus`
    """
    config = config or DEFAULT_CONFIG
    seed = config.seed if seed is None else seed
    restarts = config.restarts if restarts is None else restarts

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            found = list(executor.map(lambda r: _search_once(L, seed, r, config), range(restarts)))
    else:
        found = []
        for r in range(restarts):
            found.append(_search_once(L, seed, r, config))
            if target_dim is not None and found[-1].dim >= target_dim:
                break

    best = found[0]
    for torus in found[1:]:
        if torus.dim > best.dim:
            best = torus
    logger.info("torus search on %r: dim %d after %d restarts", L, best.dim, len(found))
    return best


def iterate_rank(L, s, steps):
    """Rank of ``s, s^[p], ..., s^[p^(steps-1)]``."""
    iterates = [L.vector(s)]
    for _ in range(steps - 1):
        iterates.append(p_power(L, iterates[-1]))
    return rank(PrimeFieldMatrix(L.field, np.stack(iterates)))
