"""
Lie algebras given by structure constants over F_p, subspaces of them, and the series/centralizer/closure
computations built on top. Restricted algebras carry the p-th powers of their basis vectors; general p-th powers come
from Jacobson's formula.
"""
import logging

import numpy as np

from modlie.config import DEFAULT_CONFIG
from modlie.enumerations import AlgebraFamilyEnum
from modlie.error_handlers import require_pmap, DimensionMismatchError, NotClosedError, NotInSpanError
from modlie.rings import FieldRealization
from modlie.ffla import (PrimeFieldMatrix, BasisSolver, matmul, echelon_basis, kernel_basis, intersect_subspaces,
                         eigenspace)

logger = logging.getLogger(__name__)

# above this dimension a realized algebra brackets through its vector fields instead of a dense tensor
DENSE_TENSOR_LIMIT = 160


def structure_constants(dim, bracket_of_basis):
    """
    Collects structure constants from a function of basis indices, storing both orders.

    :param int dim: Number of basis elements.
    :param bracket_of_basis: ``f(i, j) -> [(k, c)]`` for ``i < j``.
    :return: ``{(i, j): [(k, c)]}``.
    :rtype: dict
    """
    sc = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            terms = [(int(k), int(c)) for k, c in bracket_of_basis(i, j) if c]
            if terms:
                sc[(i, j)] = terms
                sc[(j, i)] = [(k, -c) for k, c in terms]
    return sc


class LieAlgebra(object):
    """
    A finite-dimensional Lie algebra over F_p, ``[b_i, b_j] = Σ c b_k`` for ``(k, c)`` in ``sc[(i, j)]``.

    ``pmap[i]`` is the coordinate vector of ``b_i^[p]`` for restricted algebras and ``None`` otherwise. The optional
    ``realization`` (a :py:class:`~modlie.rings.FieldRealization`) ties the basis to vector fields and is not part
    of equality or serialization.
    """

    def __init__(self, field, labels, sc, pmap=None, meta=None, realization=None):
        """
        :param field: Coefficient field.
        :type field: :py:class:`~modlie.ffla.PrimeField`
        :param labels: Basis names.
        :type labels: list of str
        :param sc: Structure constants ``{(i, j): [(k, c)]}``; entries absent are zero.
        :type sc: dict
        :param pmap: Basis p-th powers, shape ``(dim, dim)`` (optional).
        :type pmap: numpy.ndarray
        :param meta: ``{"family": ..., "params": {...}}`` (optional).
        :type meta: dict
        """
        self.field = field
        self.labels = list(labels)
        self.dim = len(self.labels)
        p = field.p
        self.sc = {}
        for (i, j), terms in sc.items():
            reduced = [(int(k), int(c) % p) for k, c in terms if int(c) % p]
            if reduced:
                self.sc[(int(i), int(j))] = reduced
        self.pmap = None if pmap is None else np.mod(np.asarray(pmap, dtype=np.int64).reshape(self.dim, self.dim), p)
        self.meta = meta or {"family": None, "params": {}}
        self.realization = realization
        # lazy caches, filled without a lock: every fill is deterministic, so a concurrent fill stores an equal value
        self._tensor = None
        self._basis_ad = None
        self._ad_solver = None
        self._centerless = None
        self.embedding = None

        super(LieAlgebra, self).__init__()

    @classmethod
    def from_basis(cls, parent, vectors, labels=None, meta=None):
        """
        Promotes a bracket-closed span inside ``parent`` to a standalone algebra whose basis is ``vectors`` (order
        kept). The p-map is inherited when the span is closed under the parent's p-map.

        :raises NotClosedError: Raised if the span is not closed under the bracket.
        """
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        labels = labels or ["b{}".format(k + 1) for k in range(vectors.shape[0])]
        realization = None
        if isinstance(parent.realization, FieldRealization):
            ambient = parent.realization
            field_basis = vectors if ambient.basis is None else matmul(vectors, ambient.basis, parent.field.p)
            realization = FieldRealization(ambient.fields, field_basis)
        return algebra_from_span(
            parent.field, labels, vectors,
            bracket=lambda u, v: bracket(parent, u, v),
            p_power=(lambda u: p_power(parent, u)) if parent.pmap is not None else None,
            meta=meta or {"family": AlgebraFamilyEnum.PROMOTED, "params": {"parent": parent.meta.get("family")}},
            realization=realization
        )

    @property
    def p(self):
        return self.field.p

    @property
    def tensor(self):
        """Dense structure-constant tensor ``T[i, j, k]``."""
        if self._tensor is None:
            T = np.zeros((self.dim, self.dim, self.dim), dtype=np.int64)
            for (i, j), terms in self.sc.items():
                for k, c in terms:
                    T[i, j, k] = c
            self._tensor = T
        return self._tensor

    @property
    def basis_ad(self):
        """``basis_ad[i]`` is the matrix of ``ad(b_i)``."""
        if self._basis_ad is None:
            self._basis_ad = np.ascontiguousarray(np.transpose(self.tensor, (0, 2, 1)))
        return self._basis_ad

    def uses_fields(self):
        return self.realization is not None and self.dim > DENSE_TENSOR_LIMIT and self._tensor is None

    def vector(self, coords):
        v = self.field.vector(coords)
        if v.shape != (self.dim,):
            raise DimensionMismatchError("Expected {} coordinates, got {}.".format(self.dim, v.shape))
        return v

    def basis_vector(self, i):
        return self.field.unit(self.dim, i)

    def element(self, **coefficients):
        """Vector from label coefficients, e.g. ``sl2.element(e=1, h=2)``."""
        v = np.zeros(self.dim, dtype=np.int64)
        for label, c in coefficients.items():
            v[self.labels.index(label)] = c
        return self.field.reduce(v)

    def random_element(self, rng):
        return self.field.random_vector(self.dim, rng)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return False
        if other.field != self.field or other.labels != self.labels or other.sc != self.sc:
            return False
        if (self.pmap is None) != (other.pmap is None):
            return False
        return self.pmap is None or np.array_equal(self.pmap, other.pmap)

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return "LieAlgebra({}, dim={}, p={})".format(self.meta.get("family"), self.dim, self.p)


def algebra_from_span(field, labels, vectors, bracket, p_power=None, meta=None, realization=None):
    """
    Builds a :py:class:`LieAlgebra` on the basis ``vectors`` of a bracket-closed span, given a bracket (and
    optionally a p-map) on the ambient coordinates.

    :raises NotClosedError: Raised if some bracket leaves the span.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
    solver = BasisSolver(field, vectors)
    r = vectors.shape[0]
    pairs = [(a, b) for a in range(r) for b in range(a + 1, r)]
    sc = {}
    if pairs:
        images = np.stack([bracket(vectors[a], vectors[b]) for a, b in pairs])
        try:
            coords = solver.coordinates(images)
        except NotInSpanError:
            raise NotClosedError("Span of {} vectors is not closed under the bracket.".format(r))
        for (a, b), c in zip(pairs, coords):
            nonzero = np.nonzero(c)[0]
            if nonzero.size:
                sc[(a, b)] = [(int(k), int(c[k])) for k in nonzero]
                sc[(b, a)] = [(int(k), int(-c[k])) for k in nonzero]
    pmap = None
    if p_power is not None:
        powers = np.stack([p_power(vectors[a]) for a in range(r)])
        try:
            pmap = solver.coordinates(powers)
        except NotInSpanError:
            logger.debug("span is not closed under the p-map; promoted algebra is unrestricted")
    algebra = LieAlgebra(field, labels, sc, pmap=pmap, meta=meta, realization=realization)
    algebra.embedding = vectors
    return algebra


class Subspace(object):
    """
    Subspace of a Lie algebra stored by its reduced echelon basis, so two subspaces of the same parent are equal
    exactly when their bases are.
    """

    def __init__(self, parent, vectors=()):
        """
        :param parent: Ambient algebra.
        :type parent: :py:class:`LieAlgebra`
        :param vectors: Spanning vectors (any number, possibly dependent).
        :type vectors: list of numpy.ndarray
        """
        self.parent = parent
        vectors = list(vectors) if not isinstance(vectors, np.ndarray) else list(np.atleast_2d(vectors))
        self.basis = echelon_basis(parent.field, vectors, parent.dim)
        self._solver = None

        super(Subspace, self).__init__()

    @classmethod
    def full(cls, L):
        return cls(L, list(np.eye(L.dim, dtype=np.int64)))

    @classmethod
    def zero(cls, L):
        return cls(L, [])

    @classmethod
    def spanned_by_labels(cls, L, labels):
        return cls(L, [L.basis_vector(L.labels.index(label)) for label in labels])

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def vectors(self):
        return list(self.basis)

    @property
    def solver(self):
        if self._solver is None and self.dim:
            self._solver = BasisSolver(self.parent.field, self.basis)
        return self._solver

    def coordinates(self, v):
        """
        :raises NotInSpanError: Raised if ``v`` is not in the subspace.
        """
        if not self.dim:
            if np.any(np.mod(v, self.parent.p)):
                raise NotInSpanError("Only the zero vector lies in the zero subspace.")
            return np.zeros(0, dtype=np.int64)
        return self.solver.coordinates(v)

    def contains(self, v):
        v = np.mod(np.asarray(v, dtype=np.int64), self.parent.p)
        if not self.dim:
            return not v.any()
        return self.solver.contains(v)

    def contains_subspace(self, other):
        return all(self.contains(v) for v in other.basis)

    def sum(self, other):
        return Subspace(self.parent, self.vectors + other.vectors)

    def intersect(self, other):
        return Subspace(self.parent, intersect_subspaces(self.parent.field, self.vectors, other.vectors))

    def random_element(self, rng):
        if not self.dim:
            return np.zeros(self.parent.dim, dtype=np.int64)
        return matmul(self.parent.field.random_vector(self.dim, rng), self.basis, self.parent.p)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and other.parent.dim == self.parent.dim
                and np.array_equal(other.basis, self.basis))

    def __ne__(self, other):
        return not self == other

    def __len__(self):
        return self.dim

    def __repr__(self):
        return "Subspace(dim={} of {})".format(self.dim, self.parent.dim)


def bracket(L, u, v):
    """
    :param L: Algebra.
    :type L: :py:class:`LieAlgebra`
    :param numpy.ndarray u: Left argument.
    :param numpy.ndarray v: Right argument, or a stack of them (one per row).
    :return: ``[u, v]`` in coordinates.
    :rtype: numpy.ndarray
    :raises DimensionMismatchError: Raised if either vector has the wrong length.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape[-1] != L.dim or v.shape[-1] != L.dim:
        raise DimensionMismatchError("Bracket in a {}-dimensional algebra got vectors of length {} and {}.".format(
            L.dim, u.shape[-1], v.shape[-1]))
    if L.uses_fields():
        if v.ndim == 2:
            return np.stack([L.realization.bracket(u, w) for w in v]) if len(v) else np.zeros_like(v)
        return L.realization.bracket(u, v)
    return matmul(v, _ad_rows(L, u), L.p)


def _ad_rows(L, u):
    """Matrix ``M[j, k]`` = coefficient of ``b_k`` in ``[u, b_j]``."""
    d = L.dim
    return matmul(u, L.tensor.reshape(d, d * d), L.p).reshape(d, d)


def ad_matrix(L, u):
    """
    Matrix of ``v -> [u, v]`` in the basis (column ``j`` is ``[u, b_j]``).

    :rtype: :py:class:`~modlie.ffla.PrimeFieldMatrix`
    """
    if L.uses_fields():
        columns = [L.realization.bracket(u, L.basis_vector(j)) for j in range(L.dim)]
        return PrimeFieldMatrix(L.field, np.stack(columns, axis=1))
    return PrimeFieldMatrix(L.field, _ad_rows(L, u).T)


def bracket_subspaces(L, A, B):
    """``[A, B]`` as a subspace."""
    if not A.dim or not B.dim:
        return Subspace.zero(L)
    images = [matmul(B.basis, _ad_rows(L, a), L.p) for a in A.basis] if not L.uses_fields() else \
        [np.stack([bracket(L, a, b) for b in B.basis]) for a in A.basis]
    return Subspace(L, list(np.concatenate(images)))


def is_subalgebra(L, S):
    return S.contains_subspace(bracket_subspaces(L, S, S))


def is_ideal(L, S):
    return S.contains_subspace(bracket_subspaces(L, Subspace.full(L), S))


def is_abelian(L, S):
    return bracket_subspaces(L, S, S).dim == 0


def derived_series(L, S=None):
    """
    ``S ⊇ [S, S] ⊇ ...`` until it reaches zero or stops shrinking; the last entry repeats the stable term when the
    series does not reach zero.

    :raises NotClosedError: Raised if ``S`` is not a subalgebra.
    """
    S = Subspace.full(L) if S is None else S
    if not is_subalgebra(L, S):
        raise NotClosedError("Derived series of a subspace that is not a subalgebra.")
    series = [S]
    current = S
    while current.dim:
        following = bracket_subspaces(L, current, current)
        series.append(following)
        if following.dim == current.dim:
            break
        current = following
    return series


def is_solvable(L, S=None):
    return derived_series(L, S)[-1].dim == 0


def lower_central_series(L, S=None):
    S = Subspace.full(L) if S is None else S
    series = [S]
    current = S
    while current.dim:
        following = bracket_subspaces(L, S, current)
        series.append(following)
        if following.dim == current.dim:
            break
        current = following
    return series


def is_nilpotent(L, S=None):
    return lower_central_series(L, S)[-1].dim == 0


def centralizer(L, S):
    """``{x : [x, s] = 0 for every s in S}`` through the kernel of the stacked ``ad(s_i)``."""
    if not S.dim:
        return Subspace.full(L)
    stacked = np.concatenate([ad_matrix(L, s).entries for s in S.basis])
    return Subspace(L, kernel_basis(PrimeFieldMatrix(L.field, stacked)))


def center(L):
    return centralizer(L, Subspace.full(L))


def normalizer(L, S):
    """``{x : [x, S] ⊆ S}``."""
    if not S.dim:
        return Subspace.full(L)
    # x is in the normalizer iff the image of ad(s) x vanishes modulo S for every s
    complement = [c for c in range(L.dim) if c not in set(_pivots(S))]
    reduction = _reduction_matrix(S, complement)
    stacked = np.concatenate([matmul(reduction, -ad_matrix(L, s).entries, L.p) for s in S.basis])
    return Subspace(L, kernel_basis(PrimeFieldMatrix(L.field, stacked)))


def _pivots(S):
    return [int(np.nonzero(row)[0][0]) for row in S.basis]


def _reduction_matrix(S, complement):
    """Matrix sending ``v`` to the complement coordinates of ``v`` reduced modulo ``S``."""
    # v - Σ v[pc] row_pc has zero pivot coordinates
    projector = np.eye(S.parent.dim, dtype=np.int64)
    for row, pc in zip(S.basis, _pivots(S)):
        projector[:, pc] = np.mod(projector[:, pc] - row, S.parent.p)
    return np.mod(projector[complement], S.parent.p)


def subalgebra_closure(L, gens):
    """Smallest subalgebra containing ``gens``."""
    S = Subspace(L, list(gens))
    while True:
        grown = S.sum(bracket_subspaces(L, S, S))
        if grown.dim == S.dim:
            return S
        S = grown


def quotient(L, ideal):
    """
    ``L / ideal`` on the complement of the ideal's pivot coordinates. The p-map is carried over when the ideal is
    closed under it.

    :raises NotClosedError: Raised if ``ideal`` is not an ideal.
    """
    if not is_ideal(L, ideal):
        raise NotClosedError("Quotient by a subspace that is not an ideal.")
    pivots = set(_pivots(ideal))
    complement = [c for c in range(L.dim) if c not in pivots]
    reduction = _reduction_matrix(ideal, complement)
    d = len(complement)
    lifts = np.eye(L.dim, dtype=np.int64)[complement]
    sc = structure_constants(d, lambda a, b: [
        (k, c) for k, c in enumerate(matmul(reduction, bracket(L, lifts[a], lifts[b]), L.p)) if c])
    pmap = None
    if L.pmap is not None and all(ideal.contains(p_power(L, v)) for v in ideal.basis):
        pmap = np.stack([matmul(reduction, p_power(L, lifts[a]), L.p) for a in range(d)]) if d else None
    labels = ["[{}]".format(L.labels[c]) for c in complement]
    return LieAlgebra(L.field, labels, sc, pmap=pmap,
                      meta={"family": AlgebraFamilyEnum.QUOTIENT, "params": {"parent": L.meta.get("family")}})


@require_pmap
def jacobson_p_power(L, u):
    """
    ``u^[p]`` from the basis p-th powers, adding one basis term at a time with

    ``(x + y)^[p] = x^[p] + y^[p] + Σ_{i=1}^{p-1} s_i(x, y)``, where ``i s_i(x, y)`` is the coefficient of
    ``λ^{i-1}`` in ``ad(λx + y)^{p-1}(x)``, and ``(a b)^[p] = a b^[p]`` for ``a`` in F_p.

    :raises NotRestrictedError: Raised if ``L`` carries no p-map.
    """
    p = L.p
    u = L.vector(u)
    terms = [(i, int(c)) for i, c in enumerate(u) if c]
    if not terms:
        return np.zeros(L.dim, dtype=np.int64)
    i, c = terms[0]
    x = np.zeros(L.dim, dtype=np.int64)
    x[i] = c
    power = np.mod(c * L.pmap[i], p)
    for i, c in terms[1:]:
        y = np.zeros(L.dim, dtype=np.int64)
        y[i] = c
        ad_x = _ad_rows(L, x)
        ad_y = _ad_rows(L, y)
        # row k of W holds the λ^k coefficient of ad(λx + y)^j (x)
        W = np.zeros((p, L.dim), dtype=np.int64)
        W[0] = x
        for _ in range(p - 1):
            shifted = np.zeros_like(W)
            shifted[1:] = W[:-1]
            W = np.mod(matmul(W, ad_y, p) + matmul(shifted, ad_x, p), p)
        correction = np.zeros(L.dim, dtype=np.int64)
        for k in range(1, p):
            correction += L.field.inv(k) * W[k - 1]
        power = np.mod(power + c * L.pmap[i] + correction, p)
        x = np.mod(x + y, p)
    return power


def _ad_solver(L):
    if L._ad_solver is None:
        d = L.dim
        rows = L.basis_ad.reshape(d, d * d)
        L._ad_solver = BasisSolver(L.field, rows)
    return L._ad_solver


def is_centerless(L):
    if L._centerless is None:
        L._centerless = center(L).dim == 0
    return L._centerless


@require_pmap
def p_power(L, u):
    """
    ``u^[p]``. Realized algebras above the dense limit use their vector fields; centerless algebras solve
    ``ad(v) = ad(u)^p`` for the unique ``v``; everything else goes through :py:func:`jacobson_p_power`.

    :raises NotRestrictedError: Raised if ``L`` carries no p-map.
    """
    u = L.vector(u)
    if L.uses_fields():
        return L.realization.p_power(u)
    if is_centerless(L):
        # ad is injective, so u^[p] is the unique v with ad(v) = ad(u)^p
        return _ad_solver(L).coordinates(ad_matrix(L, u).power(L.p).entries.reshape(-1))
    return jacobson_p_power(L, u)


def validate_algebra(L, config=None, rng=None):
    """
    Checks antisymmetry, the Jacobi identity and (when present) ``ad(b_i^[p]) = ad(b_i)^p``. Jacobi is checked on
    every triple up to ``config.dense_jacobi_limit`` and on ``config.jacobi_samples`` random triples above it.

    :return: Report ``{"valid", "antisymmetry", "jacobi", "restrictedness", "jacobi_mode"}``; each list holds
        violating index tuples (at most ten are kept).
    :rtype: dict
    """
    config = config or DEFAULT_CONFIG
    p = L.p
    d = L.dim
    report = {"valid": True, "antisymmetry": [], "jacobi": [], "restrictedness": [], "dim": d}
    T = L.tensor

    for i in range(d):
        if T[i, i].any():
            report["antisymmetry"].append((i, i))
    asym = np.argwhere(np.mod(T + np.transpose(T, (1, 0, 2)), p).any(axis=2))
    for i, j in asym:
        if i < j:
            report["antisymmetry"].append((int(i), int(j)))

    AD = L.basis_ad.astype(np.float64)
    if d <= config.dense_jacobi_limit:
        report["jacobi_mode"] = "full"
        for i in range(d):
            # [ad b_i, ad b_j] - ad [b_i, b_j] for every j at once
            left = np.rint(AD[i] @ AD) - np.rint(AD @ AD[i])
            right = np.tensordot(T[i].astype(np.float64), AD, axes=(1, 0))
            diff = np.mod((left - right).astype(np.int64), p)
            for j, k in np.argwhere(diff.any(axis=1)):
                if len(report["jacobi"]) < 10:
                    report["jacobi"].append((i, int(j), int(k)))
            if len(report["jacobi"]) >= 10:
                break
    else:
        report["jacobi_mode"] = "sample"
        rng = rng or np.random.default_rng(config.seed)
        for i, j, k in rng.integers(0, d, size=(config.jacobi_samples, 3)):
            bi, bj, bk = (L.basis_vector(int(t)) for t in (i, j, k))
            total = (bracket(L, bi, bracket(L, bj, bk)) + bracket(L, bj, bracket(L, bk, bi))
                     + bracket(L, bk, bracket(L, bi, bj)))
            if np.mod(total, p).any():
                report["jacobi"].append((int(i), int(j), int(k)))
                if len(report["jacobi"]) >= 10:
                    break

    if L.pmap is not None:
        indices = range(d) if d <= config.dense_jacobi_limit else \
            (rng or np.random.default_rng(config.seed)).choice(d, size=16, replace=False)
        for i in indices:
            expected = PrimeFieldMatrix(L.field, L.basis_ad[i]).power(p)
            if ad_matrix(L, L.pmap[i]) != expected:
                report["restrictedness"].append(int(i))

    report["valid"] = not (report["antisymmetry"] or report["jacobi"] or report["restrictedness"])
    logger.info("validated %r: %s", L, "valid" if report["valid"] else "violations found")
    return report


def is_lie_homomorphism(M, source, target, pairs=None):
    """
    Whether the matrix ``M`` (target coordinates per source column) preserves brackets on the given basis index
    pairs (all pairs by default).
    """
    M = M.entries if isinstance(M, PrimeFieldMatrix) else np.asarray(M, dtype=np.int64)
    pairs = pairs or [(i, j) for i in range(source.dim) for j in range(i + 1, source.dim)]
    for i, j in pairs:
        left = matmul(M, bracket(source, source.basis_vector(i), source.basis_vector(j)), source.p)
        right = bracket(target, M[:, i], M[:, j])
        if not np.array_equal(left, right):
            return False
    return True


def simultaneous_kernel(L, matrices, lam=0):
    """Intersection of ``ker(M - lam)`` over the given matrices."""
    spaces = None
    for M in matrices:
        space = Subspace(L, eigenspace(M, lam))
        spaces = space if spaces is None else spaces.intersect(space)
    return spaces if spaces is not None else Subspace.full(L)


@require_pmap
def is_elementary_abelian_ideal(L, S):
    """An ideal ``S`` with ``[S, S] = 0`` and ``S^[p] = 0``."""
    if not is_ideal(L, S) or not is_abelian(L, S):
        return False
    return all(not p_power(L, v).any() for v in S.basis)
