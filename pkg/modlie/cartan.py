"""
Constructors for the algebra catalog: generalized Witt algebras W(m;n) over divided powers, Jacobson-Witt algebras
W(n;1) over truncated polynomials, the special and Hamiltonian algebras S(n;1)^(1) and H(2r;1)^(2), sl_n and gl_n,
abelian algebras, plus gradings, standard tori and the standard maximal solvable subalgebra.
"""
import logging
import itertools

import numpy as np

from modlie.config import DEFAULT_CONFIG
from modlie.enumerations import AlgebraFamilyEnum, BorelConventionEnum
from modlie.error_handlers import DimensionCapError, NotInSpanError, UnknownFamilyError
from modlie.ffla import PrimeField, PrimeFieldMatrix, independent_columns
from modlie.liecore import LieAlgebra, Subspace, structure_constants, algebra_from_span
from modlie.restrict import Torus
from modlie.rings import (DividedPowerAlgebra, TruncatedPolyRing, VectorFields, FieldRealization,
                          rescaling_factors)

logger = logging.getLogger(__name__)


def prime_field(p, config):
    return PrimeField(p, allow_small=config.allow_small_primes)


def _check_dim(dim, config, what):
    if dim > config.dim_cap:
        raise DimensionCapError("{} has dimension {}, above the configured cap of {}.".format(
            what, dim, config.dim_cap), witness={"dim": dim, "cap": config.dim_cap})


def _witt_from_fields(fields, restricted, meta):
    realization = FieldRealization(fields)
    sc = structure_constants(fields.dim, fields.monomial_bracket)
    pmap = None
    if restricted:
        pmap = np.stack([fields.to_vector(fields.p_power(realization.basis_field(k))) for k in range(fields.dim)])
    algebra = LieAlgebra(fields.field, fields.labels(), sc, pmap=pmap, meta=meta, realization=realization)
    logger.info("built %r", algebra)
    return algebra


def build_witt(m, n_vec, p, config=None):
    """
    The generalized Witt algebra W(m; n) of special derivations of A(m; n), basis ``x^(a) ∂_i``. It is restricted
    (and gets a p-map) only when every height is one.

    :param int m: Number of variables.
    :param n_vec: Heights, one per variable.
    :type n_vec: tuple of int
    :param int p: Characteristic.
    :param config: Settings (optional).
    :type config: :py:class:`~modlie.config.Config`
    :return: Algebra of dimension ``m * p^{n_1 + ... + n_m}``.
    :rtype: :py:class:`~modlie.liecore.LieAlgebra`
    :raises DimensionCapError: Raised if the dimension exceeds ``config.dim_cap``.
    """
    config = config or DEFAULT_CONFIG
    n_vec = tuple(int(n) for n in n_vec)
    if len(n_vec) != m:
        raise ValueError("W(m;n) needs {} heights, got {}.".format(m, n_vec))
    field = prime_field(p, config)
    _check_dim(m * p ** sum(n_vec), config, "W({};{})".format(m, n_vec))
    ring = DividedPowerAlgebra(field, n_vec)
    meta = {"family": AlgebraFamilyEnum.WITT_M_N, "params": {"m": m, "n_vec": list(n_vec), "p": p}}
    return _witt_from_fields(VectorFields(ring), ring.is_restricted(), meta)


def build_jacobson_witt(n, p, config=None):
    """
    The Jacobson-Witt algebra W(n;1) = Der(B_n) with basis ``x^a D_i`` and p-map the p-fold composition.

    :return: ``(algebra, ring)``.
    :rtype: tuple
    """
    config = config or DEFAULT_CONFIG
    if n < 1:
        raise ValueError("W(n;1) needs n >= 1, got {}.".format(n))
    field = prime_field(p, config)
    _check_dim(n * p ** n, config, "W({};1)".format(n))
    ring = TruncatedPolyRing(field, n)
    family = AlgebraFamilyEnum.WITT_1_1 if n == 1 else AlgebraFamilyEnum.WITT_N_1
    meta = {"family": family, "params": {"n": n, "p": p}}
    return _witt_from_fields(VectorFields(ring), True, meta), ring


class MatrixRealization(object):
    """Basis of sl_n or gl_n as explicit n x n matrices."""

    def __init__(self, field, kind, n):
        self.field = field
        self.kind = kind
        self.n = n
        self.labels, self.matrices = self._basis()
        self.dim = len(self.labels)

        super(MatrixRealization, self).__init__()

    def _basis(self):
        n = self.n
        labels, matrices = [], []

        def unit(i, j):
            E = np.zeros((n, n), dtype=np.int64)
            E[i, j] = 1
            return E

        if self.kind == AlgebraFamilyEnum.GENERAL_LINEAR:
            for i, j in itertools.product(range(n), range(n)):
                labels.append("E{}{}".format(i + 1, j + 1))
                matrices.append(unit(i, j))
            return labels, matrices

        short = n == 2
        for i, j in itertools.combinations(range(n), 2):
            labels.append("e" if short else "E{}{}".format(i + 1, j + 1))
            matrices.append(unit(i, j))
        for k in range(n - 1):
            labels.append("h" if short else "H{}".format(k + 1))
            matrices.append(unit(k, k) - unit(k + 1, k + 1))
        for i, j in itertools.combinations(range(n), 2):
            labels.append("f" if short else "E{}{}".format(j + 1, i + 1))
            matrices.append(unit(j, i))
        return labels, matrices

    def to_matrix(self, v):
        return np.mod(np.tensordot(np.asarray(v, dtype=np.int64), np.stack(self.matrices), axes=1), self.field.p)

    def from_matrix(self, M):
        """
        :raises NotInSpanError: Raised for a matrix of nonzero trace in the sl_n realization.
        """
        p = self.field.p
        M = np.mod(np.asarray(M, dtype=np.int64), p)
        n = self.n
        if self.kind == AlgebraFamilyEnum.GENERAL_LINEAR:
            return M.reshape(-1)
        if np.trace(M) % p:
            raise NotInSpanError("Matrix of nonzero trace is not in sl_{}.".format(n))
        upper = [M[i, j] for i, j in itertools.combinations(range(n), 2)]
        lower = [M[j, i] for i, j in itertools.combinations(range(n), 2)]
        # Σ c_k h_k has diagonal (c_1, c_2 - c_1, ...), so c_k is a prefix sum of the diagonal
        diagonal = np.cumsum(np.diag(M))[:n - 1]
        return np.mod(np.concatenate([upper, diagonal, lower]).astype(np.int64), p)

    def bracket(self, u, v):
        X, Y = self.to_matrix(u), self.to_matrix(v)
        return self.from_matrix(X @ Y - Y @ X)

    def p_power(self, u):
        return self.from_matrix(PrimeFieldMatrix(self.field, self.to_matrix(u)).power(self.field.p).entries)


def build_classical(kind, n, p, allow_center=False, config=None):
    """
    sl_n (basis: upper ``E_ij``, then ``h_k = E_kk - E_{k+1,k+1}``, then lower ``E_ji``; ``(e, h, f)`` for n = 2) or
    gl_n (row-major ``E_ij``), with the matrix p-th power as p-map.

    :param str kind: ``"sl"`` or ``"gl"``.
    :param bool allow_center: Accept sl_n with p | n, which has the scalars as center.
    :raises ValueError: Raised for an unknown kind, n < 2, or p | n for sl_n without ``allow_center``.
    """
    config = config or DEFAULT_CONFIG
    if kind not in (AlgebraFamilyEnum.SPECIAL_LINEAR, AlgebraFamilyEnum.GENERAL_LINEAR):
        raise ValueError("Classical kind must be 'sl' or 'gl', got {}.".format(kind))
    if n < 2:
        raise ValueError("{}_n needs n >= 2, got {}.".format(kind, n))
    if kind == AlgebraFamilyEnum.SPECIAL_LINEAR and n % p == 0 and not allow_center:
        raise ValueError("sl_{} has a center in characteristic {}; pass allow_center=True to build it.".format(n, p))
    field = prime_field(p, config)
    realization = MatrixRealization(field, kind, n)
    _check_dim(realization.dim, config, "{}_{}".format(kind, n))
    basis = np.eye(realization.dim, dtype=np.int64)
    sc = structure_constants(realization.dim, lambda i, j: list(enumerate(realization.bracket(basis[i], basis[j]))))
    pmap = np.stack([realization.p_power(basis[i]) for i in range(realization.dim)])
    meta = {"family": kind, "params": {"n": n, "p": p, "has_center": kind == AlgebraFamilyEnum.GENERAL_LINEAR or
                                       n % p == 0}}
    return LieAlgebra(field, realization.labels, sc, pmap=pmap, meta=meta, realization=realization)


def build_abelian(dim, p, config=None):
    """Abelian algebra of the given dimension with zero p-map."""
    config = config or DEFAULT_CONFIG
    field = prime_field(p, config)
    _check_dim(dim, config, "abelian algebra")
    return LieAlgebra(field, ["a{}".format(k + 1) for k in range(dim)], {},
                      pmap=np.zeros((dim, dim), dtype=np.int64),
                      meta={"family": AlgebraFamilyEnum.ABELIAN, "params": {"dim": dim, "p": p}})


def _promote_fields(fields, labels, vectors, meta):
    """Re-bases a bracket- and p-closed span of vector fields as a standalone restricted algebra."""
    ambient = FieldRealization(fields)
    vectors = np.stack(vectors)
    algebra = algebra_from_span(fields.field, labels, vectors, bracket=ambient.bracket, p_power=ambient.p_power,
                                meta=meta, realization=FieldRealization(fields, vectors))
    logger.info("built %r", algebra)
    return algebra


def _special_generator(fields, i, j, f):
    """``D_ij(f) = ∂_j(f) ∂_i - ∂_i(f) ∂_j``."""
    D = fields.zero()
    D[i] = fields.ring.partial(f, j)
    D[j] = np.mod(-fields.ring.partial(f, i), fields.field.p)
    return D


def _hamiltonian_generator(fields, r, f):
    """``D_H(f) = Σ_{i<r} (∂_i(f) ∂_{i+r} - ∂_{i+r}(f) ∂_i)``."""
    D = fields.zero()
    for i in range(r):
        D[i + r] = np.mod(D[i + r] + fields.ring.partial(f, i), fields.field.p)
        D[i] = np.mod(D[i] - fields.ring.partial(f, i + r), fields.field.p)
    return D


def build_special_S(n, p, config=None):
    """
    S(n;1)^(1), spanned inside W(n;1) by the ``D_ij(x^a)`` over all monomials; dimension ``(n-1)(p^n - 1)``.

    :raises ValueError: Raised for n < 3.
    """
    config = config or DEFAULT_CONFIG
    if n < 3:
        raise ValueError("S(n;1)^(1) needs n >= 3, got {}.".format(n))
    field = prime_field(p, config)
    _check_dim((n - 1) * (p ** n - 1), config, "S({};1)^(1)".format(n))
    ring = TruncatedPolyRing(field, n)
    fields = VectorFields(ring)
    candidates, labels = [], []
    for i, j in itertools.combinations(range(n), 2):
        for a in ring.exponents():
            D = _special_generator(fields, i, j, ring.monomial(a))
            if D.any():
                candidates.append(fields.to_vector(D))
                labels.append("D{}{}({})".format(i + 1, j + 1, ring.label(a)))
    keep = independent_columns(field, candidates)
    meta = {"family": AlgebraFamilyEnum.SPECIAL, "params": {"n": n, "p": p}}
    return _promote_fields(fields, [labels[k] for k in keep], [candidates[k] for k in keep], meta)


def build_hamiltonian_H(two_r, p, config=None):
    """
    H(2r;1)^(2), spanned by ``D_H(x^a)`` over the monomials other than 1 and the top monomial; dimension
    ``p^{2r} - 2``.

    :raises ValueError: Raised for an odd or non-positive argument.
    """
    config = config or DEFAULT_CONFIG
    if two_r < 2 or two_r % 2:
        raise ValueError("H(2r;1)^(2) needs an even number of variables >= 2, got {}.".format(two_r))
    field = prime_field(p, config)
    _check_dim(p ** two_r - 2, config, "H({};1)^(2)".format(two_r))
    r = two_r // 2
    ring = TruncatedPolyRing(field, two_r)
    fields = VectorFields(ring)
    top = (p - 1,) * two_r
    candidates, labels = [], []
    for a in ring.exponents():
        if not any(a) or a == top:
            continue
        candidates.append(fields.to_vector(_hamiltonian_generator(fields, r, ring.monomial(a))))
        labels.append("DH({})".format(ring.label(a)))
    keep = independent_columns(field, candidates)
    meta = {"family": AlgebraFamilyEnum.HAMILTONIAN, "params": {"two_r": two_r, "p": p}}
    return _promote_fields(fields, [labels[k] for k in keep], [candidates[k] for k in keep], meta)


def build_from_family(family, params, config=None):
    """
    Catalog dispatch used by the CLI and the algebra file loader.

    :param str family: One of :py:attr:`~modlie.enumerations.AlgebraFamilyEnum.ALL`.
    :param dict params: Constructor parameters (``p`` plus ``n``, ``m``, ``n_vec``, ``two_r`` or ``dim``).
    :raises UnknownFamilyError: Raised for a family outside the catalog.
    """
    p = int(params.get("p", 5))
    if family == AlgebraFamilyEnum.WITT_1_1:
        return build_jacobson_witt(1, p, config)[0]
    if family == AlgebraFamilyEnum.WITT_N_1:
        return build_jacobson_witt(int(params["n"]), p, config)[0]
    if family == AlgebraFamilyEnum.WITT_M_N:
        n_vec = [int(n) for n in params["n_vec"]]
        return build_witt(int(params.get("m", len(n_vec))), n_vec, p, config)
    if family in (AlgebraFamilyEnum.SPECIAL_LINEAR, AlgebraFamilyEnum.GENERAL_LINEAR):
        return build_classical(family, int(params["n"]), p, allow_center=bool(params.get("allow_center")),
                               config=config)
    if family == AlgebraFamilyEnum.SPECIAL:
        return build_special_S(int(params["n"]), p, config)
    if family == AlgebraFamilyEnum.HAMILTONIAN:
        return build_hamiltonian_H(int(params.get("two_r", params.get("n", 2))), p, config)
    if family == AlgebraFamilyEnum.ABELIAN:
        return build_abelian(int(params["dim"]), p, config)
    raise UnknownFamilyError("Unknown algebra family '{}'; expected one of {}.".format(
        family, ", ".join(AlgebraFamilyEnum.ALL)))


class GradedTag(object):
    """Degree of every basis element of a graded algebra."""

    def __init__(self, degrees):
        self.degrees = list(degrees)

        super(GradedTag, self).__init__()

    @property
    def range(self):
        return min(self.degrees), max(self.degrees)

    def degree(self, k):
        return self.degrees[k]

    def component(self, degree):
        return [k for k, d in enumerate(self.degrees) if d == degree]

    def dimensions(self):
        low, high = self.range
        return {d: len(self.component(d)) for d in range(low, high + 1)}

    def violations(self, L):
        """Basis pairs whose bracket leaves ``g_{i+j}``."""
        bad = []
        for (i, j), terms in L.sc.items():
            if any(self.degrees[k] != self.degrees[i] + self.degrees[j] for k, _ in terms):
                bad.append((i, j))
        return bad


def witt_grading(L):
    """
    Standard grading ``deg x^a ∂_i = |a| - 1`` of a realized Witt-type algebra. Basis vectors of promoted S and H
    algebras are homogeneous, so each takes the degree of its leading monomial.

    :rtype: :py:class:`GradedTag`
    """
    realization = L.realization
    if not isinstance(realization, FieldRealization):
        raise ValueError("{!r} has no vector field realization to grade.".format(L))
    fields = realization.fields
    if realization.basis is None:
        return GradedTag(fields.degree(k) for k in range(fields.dim))
    return GradedTag(fields.degree(int(np.nonzero(row)[0][0])) for row in realization.basis)


def witt_rescaling_isomorphism(divided, truncated):
    """
    The diagonal isomorphism W(m;1) -> W(m;1) from the divided power basis to the truncated one,
    ``x^(a) ∂_i -> (1/a!) x^a ∂_i``.

    :rtype: :py:class:`~modlie.ffla.PrimeFieldMatrix`
    """
    ring = truncated.realization.fields.ring
    if divided.dim != truncated.dim or divided.p != truncated.p:
        raise ValueError("Rescaling needs W(m;1) in both realizations over the same field.")
    factors = np.tile(rescaling_factors(ring), ring.nvars)
    return PrimeFieldMatrix(truncated.field, np.diag(factors))


def borel_of_sl2(L):
    """``span{e, h}`` in sl_2."""
    return Subspace.spanned_by_labels(L, ["e", "h"])


def _witt_fields(W):
    realization = W.realization
    if not isinstance(realization, FieldRealization) or realization.basis is not None:
        raise ValueError("{!r} is not a Witt algebra built by this module.".format(W))
    fields = realization.fields
    if any(n != W.p for n in fields.ring.shape):
        raise ValueError("{!r} is not restricted.".format(W))
    return fields


def standard_generic_torus(W):
    """
    ``t_0 = <(1 + x_1) D_1, ..., (1 + x_n) D_n>``; torality of the generators is verified on construction.

    :rtype: :py:class:`~modlie.restrict.Torus`
    """
    fields = _witt_fields(W)
    n = fields.nvars
    gens = []
    for i in range(n):
        unit = tuple(1 if k == i else 0 for k in range(n))
        t = np.zeros(W.dim, dtype=np.int64)
        t[fields.basis_index(i, (0,) * n)] = 1
        t[fields.basis_index(i, unit)] = 1
        gens.append(t)
    return Torus(W, gens)


def standard_maximal_solvable(W, borel_convention=BorelConventionEnum.UPPER, last_exponent_cap=1):
    """
    ``c = g_{-1} + b + span{x_1^{a_1} ... x_i^{a_i} D_i : |a| > 1, a_i <= last_exponent_cap}`` in W(n;1), where ``b``
    is the Borel subalgebra of ``g_0 = gl_n`` in the chosen orientation. With the default cap this is the triangular
    subalgebra of dimension ``2(p^n - 1)/(p - 1)`` (12 for n = 2, p = 5). ``last_exponent_cap=None`` drops the cap,
    giving the literal span (30-dimensional for n = 2, p = 5); it contains ``D_1``, ``x_1 D_1`` and ``x_1^2 D_1``, which
    span a copy of sl_2, so it is not solvable in either orientation.

    :raises ValueError: Raised for n = 1 or an unknown convention.
    """
    fields = _witt_fields(W)
    n = fields.nvars
    if n < 2:
        raise ValueError("The standard maximal solvable subalgebra is only defined here for n >= 2.")
    if borel_convention not in (BorelConventionEnum.UPPER, BorelConventionEnum.LOWER):
        raise ValueError("Unknown Borel convention '{}'.".format(borel_convention))
    zero = (0,) * n

    def unit(i):
        return tuple(1 if k == i else 0 for k in range(n))

    indices = [fields.basis_index(i, zero) for i in range(n)]
    for i, j in itertools.product(range(n), range(n)):
        if (i <= j) if borel_convention == BorelConventionEnum.UPPER else (i >= j):
            indices.append(fields.basis_index(j, unit(i)))
    for i in range(n):
        for a in fields.ring.exponents():
            if any(a[i + 1:]) or sum(a) <= 1:
                continue
            if last_exponent_cap is not None and a[i] > last_exponent_cap:
                continue
            indices.append(fields.basis_index(i, a))
    return Subspace(W, [W.basis_vector(k) for k in sorted(set(indices))])


def standard_torus(L):
    """
    Standard torus of a catalog algebra: ``t_0`` for Witt algebras, ``<x_i ∂_i - x_j ∂_j>`` for S and H, the
    diagonal for sl_n/gl_n and the zero torus for abelian algebras.

    :raises UnknownFamilyError: Raised when the family has no standard torus.
    """
    family = L.meta.get("family")
    if family in (AlgebraFamilyEnum.WITT_1_1, AlgebraFamilyEnum.WITT_N_1, AlgebraFamilyEnum.WITT_M_N):
        return standard_generic_torus(L)
    if family in (AlgebraFamilyEnum.SPECIAL, AlgebraFamilyEnum.HAMILTONIAN):
        return _diagonal_field_torus(L)
    if family in (AlgebraFamilyEnum.SPECIAL_LINEAR, AlgebraFamilyEnum.GENERAL_LINEAR):
        realization = L.realization
        gens = [realization.from_matrix(np.diag(np.eye(1, realization.n, k, dtype=np.int64)[0]) -
                                        np.diag(np.eye(1, realization.n, k + 1, dtype=np.int64)[0]))
                for k in range(realization.n - 1)]
        if family == AlgebraFamilyEnum.GENERAL_LINEAR:
            gens = [realization.from_matrix(np.diag(np.eye(1, realization.n, k, dtype=np.int64)[0]))
                    for k in range(realization.n)]
        return Torus(L, gens)
    if family == AlgebraFamilyEnum.ABELIAN:
        return Torus(L, [])
    raise UnknownFamilyError("No standard torus for family '{}'.".format(family))


def _diagonal_field_torus(L):
    """``x_i ∂_i - x_j ∂_j`` for the pairs ``(i, i+1)`` of S, or ``(i, i+r)`` of H."""
    realization = L.realization
    fields = realization.fields
    n = fields.nvars
    if L.meta["family"] == AlgebraFamilyEnum.SPECIAL:
        pairs = [(i, i + 1) for i in range(n - 1)]
    else:
        pairs = [(i, i + n // 2) for i in range(n // 2)]
    gens = []
    for i, j in pairs:
        D = fields.zero()
        D[(i,) + tuple(1 if k == i else 0 for k in range(n))] = 1
        D[(j,) + tuple(1 if k == j else 0 for k in range(n))] = L.p - 1
        gens.append(realization.from_field(D))
    return Torus(L, gens)
