"""
Weight-space decompositions of the adjoint module (or of a t-stable subspace of it) relative to a torus, and the
checks run on them: coverage of all nonzero characters, equal dimensions, the dimension identity, fiber counts over a
subtorus, transport between tori and additivity of brackets.

Characters are tuples of values in F_p on the toral basis of the torus; the zero tuple is the zero weight.
"""
import itertools
import logging

import numpy as np

from modlie.enumerations import CoverageEnum
from modlie.error_handlers import NotStableError, TorusError, NotInSpanError
from modlie.ffla import PrimeFieldMatrix, kernel_basis, matmul
from modlie.liecore import Subspace, bracket
from modlie.utilities import character_key

logger = logging.getLogger(__name__)


def all_characters(p, mu):
    """Every element of F_p^mu, zero first."""
    return [tuple(c) for c in itertools.product(range(p), repeat=mu)]


class WeightDecomposition(object):
    """
    ``M = M_0 ⊕ ⊕_λ M_λ``. ``table`` maps each nonzero character that occurs to its multiplicity, ``spaces`` maps
    every occurring character (zero included) to its weight space as a subspace of the torus' parent algebra.
    """

    def __init__(self, torus, module, zero_space, table, spaces):
        """
        :param torus: Torus acting.
        :type torus: :py:class:`~modlie.restrict.Torus`
        :param module: The module as a subspace of the parent algebra.
        :type module: :py:class:`~modlie.liecore.Subspace`
        :param zero_space: Weight space of the zero character.
        :type zero_space: :py:class:`~modlie.liecore.Subspace`
        :param dict table: ``{character: dim}`` over the nonzero characters that occur.
        :param dict spaces: ``{character: Subspace}`` over all characters that occur.
        """
        self.torus = torus
        self.module = module
        self.zero_space = zero_space
        self.table = table
        self.spaces = spaces

        super(WeightDecomposition, self).__init__()

    @property
    def module_dim(self):
        return self.module.dim

    @property
    def mu(self):
        return self.torus.dim

    @property
    def p(self):
        return self.torus.parent.p

    def dimension(self, character):
        character = tuple(int(c) % self.p for c in character)
        if not any(character):
            return self.zero_space.dim
        return self.table.get(character, 0)

    def multiset(self):
        """Sorted multiplicities of the nonzero characters."""
        return sorted(self.table.values())

    def verify(self):
        """
        Re-checks that the spaces partition the module and that ``[t_i, u] = λ_i u`` on every weight vector.

        :rtype: dict
        """
        L = self.torus.parent
        partition = sum(s.dim for s in self.spaces.values()) == self.module_dim
        independent = Subspace(L, [v for s in self.spaces.values() for v in s.basis]).dim == self.module_dim
        eigen = True
        for character, space in self.spaces.items():
            if not space.dim:
                continue
            for t, value in zip(self.torus.gens, character):
                if not np.array_equal(bracket(L, t, space.basis), np.mod(value * space.basis, L.p)):
                    eigen = False
        return {"valid": partition and independent and eigen, "partition": partition, "independent": independent,
                "eigen": eigen}

    def records(self):
        """``[{"character", "dim"}]``, zero character first."""
        rows = [{"character": character_key((0,) * self.mu), "dim": self.zero_space.dim}]
        rows.extend({"character": character_key(c), "dim": d} for c, d in sorted(self.table.items()))
        return rows

    def __repr__(self):
        return "WeightDecomposition(mu={}, module_dim={}, zero={}, nonzero={})".format(
            self.mu, self.module_dim, self.zero_space.dim, len(self.table))


def _restricted_action(L, t, module):
    """Matrix of ``ad(t)`` on ``module`` in the module's echelon basis."""
    images = bracket(L, t, module.basis)
    try:
        columns = [module.coordinates(v) for v in images]
    except NotInSpanError:
        raise NotStableError("Module is not stable under the torus.", witness={"module_dim": module.dim})
    return PrimeFieldMatrix(L.field, np.stack(columns, axis=1))


def decompose(L, t, module=None):
    """
    Simultaneous eigenspaces of ``ad(t_1), ..., ad(t_mu)`` on ``module``, refined one toral basis element at a time
    over all values in F_p.

    :param L: Ambient algebra.
    :type L: :py:class:`~modlie.liecore.LieAlgebra`
    :param t: Torus of ``L``.
    :type t: :py:class:`~modlie.restrict.Torus`
    :param module: t-stable subspace; the adjoint module when omitted.
    :type module: :py:class:`~modlie.liecore.Subspace`
    :raises NotStableError: Raised if ``module`` is not t-stable.
    :raises TorusError: Raised if the eigenspaces do not exhaust the module.
    :rtype: :py:class:`WeightDecomposition`
    """
    module = module if module is not None else Subspace.full(L)
    p = L.p
    m = module.dim
    actions = [_restricted_action(L, g, module) for g in t.gens] if m else []

    # (partial character, basis of the joint eigenspace as columns in module coordinates)
    blocks = [((), np.eye(m, dtype=np.int64))]
    for A in actions:
        refined = []
        for prefix, B in blocks:
            image = matmul(A.entries, B, p)
            for lam in range(p):
                system = PrimeFieldMatrix(L.field, np.mod(image - lam * B, p))
                kernel = kernel_basis(system)
                if kernel:
                    refined.append((prefix + (lam,), matmul(B, np.stack(kernel, axis=1), p)))
        blocks = refined

    total = sum(B.shape[1] for _, B in blocks)
    if total != m:
        raise TorusError("Torus does not act diagonalizably on the module: eigenspaces cover {} of {} "
                         "dimensions.".format(total, m))

    zero = (0,) * t.dim
    spaces = {}
    for character, B in blocks:
        vectors = matmul(B.T, module.basis, p) if m else []
        spaces[character] = Subspace(L, list(vectors))
    zero_space = spaces.get(zero, Subspace.zero(L))
    spaces[zero] = zero_space
    table = dict((c, s.dim) for c, s in spaces.items() if any(c))
    logger.debug("decomposed %d-dimensional module under a %d-dimensional torus: %d nonzero weights",
                 m, t.dim, len(table))
    return WeightDecomposition(t, module, zero_space, table, spaces)


def coverage_check(wd):
    """
    :return: ``{"verdict", "missing", "present", "expected"}``; ``verdict`` is ``full`` when every nonzero character
        occurs.
    :rtype: dict
    """
    expected = wd.p ** wd.mu - 1
    missing = [c for c in all_characters(wd.p, wd.mu) if any(c) and c not in wd.table]
    verdict = CoverageEnum.FULL if not missing else CoverageEnum.PARTIAL
    return {"verdict": verdict, "missing": missing, "present": len(wd.table), "expected": expected}


def equal_dims_check(wd):
    """
    :return: ``{"equal", "common", "violation"}`` where ``violation`` names two characters of different multiplicity.
    :rtype: dict
    """
    items = sorted(wd.table.items())
    if not items:
        return {"equal": True, "common": None, "violation": None}
    first_character, common = items[0]
    for character, d in items[1:]:
        if d != common:
            return {"equal": False, "common": None,
                    "violation": [[character_key(first_character), common], [character_key(character), d]]}
    return {"equal": True, "common": common, "violation": None}


def dimension_identity_check(L, wd, sub=None):
    """
    ``dim M = dim M_0 + (p^mu - 1) d`` once coverage is full and the nonzero multiplicities share the value ``d``.
    Also reports ``dim(M ∩ t)`` and whether the zero space is exactly ``M ∩ t`` (for the adjoint module: whether the
    torus is self-centralizing).

    :param sub: Module the identity is stated for; defaults to the module of ``wd``.
    :type sub: :py:class:`~modlie.liecore.Subspace`
    :rtype: dict
    """
    module = sub if sub is not None else wd.module
    coverage = coverage_check(wd)
    dims = equal_dims_check(wd)
    if coverage["verdict"] != CoverageEnum.FULL or not dims["equal"]:
        return {"applicable": False, "holds": None, "coverage": coverage["verdict"], "equal": dims["equal"]}
    d = dims["common"] or 0
    rhs = wd.zero_space.dim + (wd.p ** wd.mu - 1) * d
    torus_part = module.intersect(wd.torus.span)
    return {"applicable": True, "holds": module.dim == rhs, "dim": module.dim, "zero": wd.zero_space.dim,
            "common": d, "rhs": rhs, "torus_intersection": torus_part.dim,
            "self_centralizing": wd.zero_space == torus_part}


def _restriction_matrix(t, sub):
    """Row ``k`` holds the coordinates of the ``k``-th toral basis vector of ``sub`` in ``t``."""
    try:
        return np.stack([t.coordinates(s) for s in sub.gens]) if sub.dim else np.zeros((0, t.dim), dtype=np.int64)
    except NotInSpanError:
        raise TorusError("Subtorus is not contained in the torus.")


def fiber_count_check(wd_big, sub):
    """
    Restricts the characters of ``wd_big`` to the subtorus ``sub`` and counts, for every character β of ``sub``, the
    characters α with ``α|sub = β``. With full coverage each nonzero β has ``p^{dim t'}`` preimages and β = 0 has
    ``p^{dim t'} - 1`` nonzero ones, where ``t'`` is a complement of ``sub`` in the torus. The decomposition under
    ``sub`` is recomputed and compared with the fiber sums.

    :raises TorusError: Raised if ``sub`` does not lie in the torus of ``wd_big``.
    :rtype: dict
    """
    t = wd_big.torus
    L = t.parent
    p = L.p
    R = _restriction_matrix(t, sub)
    complement_dim = t.dim - sub.dim
    full = coverage_check(wd_big)["verdict"] == CoverageEnum.FULL

    counts = dict((beta, 0) for beta in all_characters(p, sub.dim))
    sums = dict((beta, 0) for beta in counts)
    zero_beta = (0,) * sub.dim
    sums[zero_beta] = wd_big.zero_space.dim
    for alpha, d in wd_big.table.items():
        beta = tuple(int(x) for x in matmul(R, np.asarray(alpha, dtype=np.int64), p)) if sub.dim else ()
        counts[beta] += 1
        sums[beta] += d

    bad_fibers = []
    for beta, count in counts.items():
        expected = p ** complement_dim - (0 if any(beta) else 1)
        if count != expected:
            bad_fibers.append({"beta": character_key(beta), "count": count, "expected": expected})

    small = decompose(L, sub, module=wd_big.module)
    inconsistent = [{"beta": character_key(beta), "restricted": small.dimension(beta), "fiber_sum": total}
                    for beta, total in sums.items() if small.dimension(beta) != total]

    return {"holds": (not full or not bad_fibers) and not inconsistent, "coverage_full": full,
            "complement_dim": complement_dim, "expected_nonzero": p ** complement_dim,
            "counts": dict((character_key(b), c) for b, c in counts.items() if any(b)),
            "zero_fiber": counts.get(zero_beta, 0), "bad_fibers": bad_fibers, "inconsistent": inconsistent}


def transport_check(wd_a, wd_b):
    """Weak transport: both decompositions have the same zero-space dimension and multiset of multiplicities."""
    holds = wd_a.zero_space.dim == wd_b.zero_space.dim and wd_a.multiset() == wd_b.multiset()
    return {"holds": holds, "zero": [wd_a.zero_space.dim, wd_b.zero_space.dim],
            "multiset_a": wd_a.multiset(), "multiset_b": wd_b.multiset()}


def bracket_additivity_check(L, wd):
    """
    ``[M_λ, M_μ] ⊆ M_{λ+μ}`` over every pair of occurring characters; a bracket landing on a character that does not
    occur has to vanish.

    :rtype: dict
    """
    p = L.p
    violations = []
    pairs = 0
    for (lam, A), (mu, B) in itertools.product(wd.spaces.items(), repeat=2):
        if not A.dim or not B.dim:
            continue
        pairs += 1
        target = wd.spaces.get(tuple((a + b) % p for a, b in zip(lam, mu)))
        for u in A.basis:
            images = bracket(L, u, B.basis)
            if target is None:
                ok = not images.any()
            else:
                ok = all(target.contains(v) for v in images)
            if not ok:
                violations.append([character_key(lam), character_key(mu)])
                break
    return {"holds": not violations, "pairs": pairs, "violations": violations}
