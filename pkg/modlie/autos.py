"""
Automorphisms of the truncated polynomial ring B_n and the automorphisms of W(n;1) they induce, the lift of
GL_n(F_p) through products of powers of ``1 + x_j``, torus restrictions and the certificates built from them.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from modlie.config import DEFAULT_CONFIG
from modlie.enumerations import VerificationModeEnum
from modlie.error_handlers import (NotAnAutomorphism, DoesNotNormalize, NotInSpanError, FieldError,
                                   DimensionMismatchError)
from modlie.ffla import (PrimeFieldMatrix, matmul, inverse, is_invertible, random_invertible, general_linear_group,
                         gl_order)
from modlie.liecore import Subspace, bracket, p_power
from modlie.rings import TruncatedPolyRing
from modlie.cartan import MatrixRealization

logger = logging.getLogger(__name__)


class RingEndo(object):
    """
    The endomorphism of B_n with ``x_i -> f_i``. The ``f_i`` have zero constant term, so ``f_i^p = 0`` and
    substitution is well defined.
    """

    def __init__(self, ring, images):
        """
        :param ring: Carrier ring.
        :type ring: :py:class:`~modlie.rings.TruncatedPolyRing`
        :param images: One element of ``ring`` per generator.
        :type images: list of numpy.ndarray
        :raises NotAnAutomorphism: Raised if some image has a nonzero constant term.
        """
        if len(images) != ring.nvars:
            raise DimensionMismatchError("Endomorphism of B_{} needs {} images, got {}.".format(
                ring.nvars, ring.nvars, len(images)))
        self.ring = ring
        self.images = [np.mod(np.asarray(f, dtype=np.int64).reshape(ring.shape), ring.field.p) for f in images]
        for i, f in enumerate(self.images):
            if ring.constant_term(f):
                raise NotAnAutomorphism("Image of x{} has a nonzero constant term.".format(i + 1))
        self._substitution = None

        super(RingEndo, self).__init__()

    @classmethod
    def identity(cls, ring):
        return cls(ring, [ring.generator(i) for i in range(ring.nvars)])

    @classmethod
    def linear(cls, ring, A):
        """``x_i -> Σ_k A[i, k] x_k``."""
        A = A.entries if isinstance(A, PrimeFieldMatrix) else np.asarray(A, dtype=np.int64)
        images = []
        for i in range(ring.nvars):
            f = ring.zero()
            for k in range(ring.nvars):
                f = f + A[i, k] * ring.generator(k)
            images.append(f)
        return cls(ring, images)

    def linear_part(self):
        """Row ``i`` holds the coefficients of ``x_1..x_n`` in ``f_i``."""
        n = self.ring.nvars
        rows = [[int(f[tuple(1 if t == k else 0 for t in range(n))]) for k in range(n)] for f in self.images]
        return PrimeFieldMatrix(self.ring.field, rows)

    def is_invertible(self):
        return is_invertible(self.linear_part())

    @property
    def substitution_matrix(self):
        """Column ``α`` holds ``∏ f_i^{α_i}``."""
        if self._substitution is None:
            ring = self.ring
            columns = []
            exponents = ring.exponents()
            for a in exponents:
                nonzero = [k for k, x in enumerate(a) if x]
                if not nonzero:
                    columns.append(ring.one().reshape(-1))
                    continue
                k = nonzero[0]
                lower = list(a)
                lower[k] -= 1
                previous = ring.element(columns[ring.index(lower)])
                columns.append(ring.multiply(previous, self.images[k]).reshape(-1))
            self._substitution = np.stack(columns, axis=1)
        return self._substitution

    def __eq__(self, other):
        return (isinstance(other, RingEndo) and other.ring.shape == self.ring.shape
                and all(np.array_equal(f, g) for f, g in zip(self.images, other.images)))

    def __ne__(self, other):
        return not self == other


def substitute(e, f):
    """``f(f_1, ..., f_n)`` in B_n."""
    return e.ring.element(matmul(e.substitution_matrix, np.asarray(f).reshape(-1), e.ring.field.p))


def compose_endos(e1, e2):
    """``e1 ∘ e2``: ``x_i -> e1(e2(x_i))``."""
    return RingEndo(e1.ring, [substitute(e1, f) for f in e2.images])


def _homogeneous_part(ring, f, degree):
    degrees = np.indices(ring.shape).sum(axis=0)
    return np.where(degrees == degree, f, 0)


def _lowest_degree(ring, f):
    degrees = np.indices(ring.shape).sum(axis=0)
    nonzero = degrees[f != 0]
    return int(nonzero.min()) if nonzero.size else None


def invert_endo(e):
    """
    Compositional inverse, corrected one total degree at a time: starting from the inverse of the linear part, the
    lowest-degree part ``r`` of the residual ``e(h_i) - x_i`` is removed by ``h_i -= r(A^{-1} x)``.

    :raises NotAnAutomorphism: Raised if the linear part is singular.
    :rtype: :py:class:`RingEndo`
    """
    ring = e.ring
    try:
        linear_inverse = RingEndo.linear(ring, inverse(e.linear_part()))
    except FieldError:
        raise NotAnAutomorphism("Linear part of the endomorphism is singular.",
                                witness={"linear_part": e.linear_part().tolist()})
    h = list(linear_inverse.images)
    for _ in range(ring.nvars * (ring.field.p - 1) + 1):
        residuals = [np.mod(substitute(e, h[i]) - ring.generator(i), ring.field.p) for i in range(ring.nvars)]
        lowest = [d for d in (_lowest_degree(ring, r) for r in residuals) if d is not None]
        if not lowest:
            return RingEndo(ring, h)
        degree = min(lowest)
        for i, r in enumerate(residuals):
            h[i] = np.mod(h[i] - substitute(linear_inverse, _homogeneous_part(ring, r, degree)), ring.field.p)
    raise NotAnAutomorphism("Inverse did not converge.")


def random_endo(ring, rng, higher_terms=3):
    """Random automorphism: a random invertible linear part plus a few random terms of degree at least two."""
    e = RingEndo.linear(ring, random_invertible(ring.field, ring.nvars, rng))
    images = []
    exponents = [a for a in ring.exponents() if sum(a) >= 2]
    for f in e.images:
        f = f.copy()
        for k in rng.choice(len(exponents), size=min(higher_terms, len(exponents)), replace=False):
            f[exponents[k]] = rng.integers(0, ring.field.p)
        images.append(f)
    return RingEndo(ring, images)


class LieAuto(object):
    """Automorphism of a Lie algebra given by its matrix (column ``k`` is the image of ``b_k``)."""

    def __init__(self, algebra, matrix, source=None):
        self.algebra = algebra
        self.matrix = matrix
        self.source = source

        super(LieAuto, self).__init__()

    def apply(self, v):
        return self.matrix @ v

    def image(self, S):
        return Subspace(S.parent, [self.apply(v) for v in S.basis])

    def compose(self, other):
        """``self ∘ other``."""
        return LieAuto(self.algebra, self.matrix @ other.matrix)

    def inverse(self):
        return LieAuto(self.algebra, inverse(self.matrix))

    def verify(self, mode=VerificationModeEnum.SAMPLE, rng=None, samples=100, config=None):
        """
        Checks ``A[u, v] = [Au, Av]`` (on all basis pairs in full mode, on random pairs otherwise), ``A(u^[p]) =
        (Au)^[p]`` when the algebra is restricted, and invertibility.

        :return: ``{"valid", "bracket_failures", "pmap_failures", "invertible"}``.
        :rtype: dict
        """
        config = config or DEFAULT_CONFIG
        L = self.algebra
        rng = rng or np.random.default_rng(config.seed)
        if mode == VerificationModeEnum.FULL:
            pairs = [(L.basis_vector(i), L.basis_vector(j)) for i in range(L.dim) for j in range(i + 1, L.dim)]
            singles = [L.basis_vector(i) for i in range(L.dim)]
        else:
            pairs = [(L.random_element(rng), L.random_element(rng)) for _ in range(samples)]
            singles = [u for u, _ in pairs[:max(1, samples // 10)]]
        bracket_failures = sum(1 for u, v in pairs
                               if not np.array_equal(self.apply(bracket(L, u, v)),
                                                     bracket(L, self.apply(u), self.apply(v))))
        pmap_failures = 0
        if L.pmap is not None:
            pmap_failures = sum(1 for u in singles
                                if not np.array_equal(self.apply(p_power(L, u)), p_power(L, self.apply(u))))
        invertible = is_invertible(self.matrix)
        return {"valid": not bracket_failures and not pmap_failures and invertible,
                "bracket_failures": bracket_failures, "pmap_failures": pmap_failures, "invertible": invertible}

    def __eq__(self, other):
        return isinstance(other, LieAuto) and other.matrix == self.matrix

    def __ne__(self, other):
        return not self == other


def _ring_of(W):
    realization = W.realization
    ring = getattr(getattr(realization, "fields", None), "ring", None)
    if not isinstance(ring, TruncatedPolyRing) or getattr(realization, "basis", None) is not None:
        raise ValueError("{!r} is not a Jacobson-Witt algebra W(n;1).".format(W))
    return ring


def _check(auto, verify, rng):
    if verify == VerificationModeEnum.NONE:
        return auto
    report = auto.verify(mode=verify, rng=rng)
    if not report["valid"]:
        raise NotAnAutomorphism("Induced map is not a restricted automorphism.", witness=report)
    return auto


def induced_lie_auto(W, e, verify=VerificationModeEnum.SAMPLE, rng=None):
    """
    ``D -> e ∘ D ∘ e^{-1}`` on W(n;1). For ``D = Σ q_i ∂_i`` and ``h_j = e^{-1}(x_j)``, the ``j``-th component of the
    image is ``Σ_i e(∂_i h_j) e(q_i)``, so block ``(j, i)`` of the matrix is ``mult(e(∂_i h_j)) · Sub(e)``.

    :param W: Algebra built by :py:func:`~modlie.cartan.build_jacobson_witt`.
    :type W: :py:class:`~modlie.liecore.LieAlgebra`
    :param e: Invertible ring endomorphism.
    :type e: :py:class:`RingEndo`
    :param str verify: One of :py:class:`~modlie.enumerations.VerificationModeEnum`.
    :raises NotAnAutomorphism: Raised if ``e`` is not invertible or verification fails.
    :rtype: :py:class:`LieAuto`
    """
    ring = _ring_of(W)
    if e.ring.shape != ring.shape:
        raise DimensionMismatchError("Endomorphism of B_{} cannot act on {!r}.".format(e.ring.nvars, W))
    p = ring.field.p
    inverse_endo = invert_endo(e)
    sub = e.substitution_matrix
    n = ring.nvars
    blocks = [[None] * n for _ in range(n)]
    for j in range(n):
        for i in range(n):
            factor = substitute(e, ring.partial(inverse_endo.images[j], i))
            blocks[j][i] = matmul(ring.multiplication_matrix(factor), sub, p)
    matrix = PrimeFieldMatrix(W.field, np.block(blocks))
    return _check(LieAuto(W, matrix, source=e), verify, rng)


def demushkin_endo(ring, g):
    """
    ``x_i -> ∏_j (1 + x_j)^{g_ji} - 1``, exponents the representatives ``0..p-1`` (``(1 + x_j)^p = 1`` in B_n).

    :raises NotAnAutomorphism: Raised if ``g`` is singular.
    """
    g = g if isinstance(g, PrimeFieldMatrix) else PrimeFieldMatrix(ring.field, g)
    if g.shape != (ring.nvars, ring.nvars):
        raise DimensionMismatchError("Lift to B_{} needs a {}x{} matrix, got {}.".format(
            ring.nvars, ring.nvars, ring.nvars, g.shape))
    if not is_invertible(g):
        raise NotAnAutomorphism("Matrix is singular over F_{}.".format(ring.field.p), witness={"g": g.tolist()})
    images = []
    for i in range(ring.nvars):
        f = ring.one()
        for j in range(ring.nvars):
            f = ring.multiply(f, ring.power(ring.one() + ring.generator(j), int(g.entries[j, i])))
        images.append(f - ring.one())
    return RingEndo(ring, images)


def demushkin_lift(W, g, verify=VerificationModeEnum.SAMPLE, rng=None):
    """
    Lift of ``g`` in GL_n(F_p) to an automorphism of W(n;1) normalizing ``t_0``; its restriction to ``t_0`` in the
    basis ``(1 + x_i) D_i`` is ``(g^{-1})^T``.

    :rtype: :py:class:`LieAuto`
    """
    return induced_lie_auto(W, demushkin_endo(_ring_of(W), g), verify=verify, rng=rng)


class ToralRestriction(object):
    """Matrix of an automorphism on the toral basis of a torus it normalizes."""

    def __init__(self, matrix, torus, auto=None):
        self.matrix = matrix
        self.torus = torus
        self.auto = auto

        super(ToralRestriction, self).__init__()

    def key(self):
        return self.matrix.entries.tobytes()


def restriction_to_torus(a, t):
    """
    :raises DoesNotNormalize: Raised if ``a`` moves some element of ``t`` out of ``t``.
    :rtype: :py:class:`ToralRestriction`
    """
    columns = []
    for k, v in enumerate(t.gens):
        try:
            columns.append(t.coordinates(a.apply(v)))
        except NotInSpanError:
            raise DoesNotNormalize("Automorphism moves torus generator {} out of the torus.".format(k + 1),
                                   witness={"generator": k})
    matrix = PrimeFieldMatrix(t.parent.field, np.stack(columns, axis=1) if columns else np.zeros((0, 0)))
    return ToralRestriction(matrix, t, auto=a)


def normalizes_torus(a, t):
    try:
        restriction_to_torus(a, t)
    except DoesNotNormalize:
        return False
    return True


def stabilizes_subspace(a, S):
    return a.image(S) == S


def conjugation_auto(L, g):
    """``X -> g X g^{-1}`` on sl_n or gl_n."""
    realization = L.realization
    if not isinstance(realization, MatrixRealization):
        raise ValueError("{!r} is not a matrix algebra.".format(L))
    g = g if isinstance(g, PrimeFieldMatrix) else PrimeFieldMatrix(L.field, g)
    g_inv = inverse(g).entries
    columns = [realization.from_matrix(g.entries @ E @ g_inv) for E in realization.matrices]
    return LieAuto(L, PrimeFieldMatrix(L.field, np.stack(columns, axis=1)), source=g)


def unitriangular_group(field, n):
    """Unitriangular ``g`` with ``g_ij = 0`` for ``i > j``."""
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    group = []
    for code in range(field.p ** len(positions)):
        g = np.eye(n, dtype=np.int64)
        for i, j in positions:
            code, g[i, j] = divmod(code, field.p)
        group.append(PrimeFieldMatrix(field, g))
    return group


class ToralStabilizerCertificate(object):
    """
    A finite set of restriction matrices in GL_mu(F_p) realized by explicit automorphisms normalizing a torus: a
    certified subgroup of the toral stabilizer.
    """

    def __init__(self, field, matrices):
        self.field = field
        unique = {}
        for M in matrices:
            unique.setdefault(M.entries.tobytes(), M)
        self.elements = list(unique.values())
        self._keys = set(unique)

        super(ToralStabilizerCertificate, self).__init__()

    @property
    def order(self):
        return len(self.elements)

    @property
    def degree(self):
        return self.elements[0].rows if self.elements else 0

    def contains(self, M):
        return M.entries.tobytes() in self._keys

    def is_group(self):
        """Contains the identity and is closed under products."""
        if not self.elements or not self.contains(PrimeFieldMatrix.identity(self.field, self.degree)):
            return False
        return all(self.contains(A @ B) for A in self.elements for B in self.elements)

    def is_p_group(self):
        order = self.order
        while order % self.field.p == 0:
            order //= self.field.p
        return order == 1

    def is_general_linear(self):
        return self.order == gl_order(self.degree, self.field.p) and all(is_invertible(M) for M in self.elements)

    def block_embedding(self, extra):
        """``g -> g ⊕ id_extra``: the certificate of a torus extended by ``extra`` fixed directions."""
        embedded = []
        for M in self.elements:
            block = np.eye(self.degree + extra, dtype=np.int64)
            block[:self.degree, :self.degree] = M.entries
            embedded.append(PrimeFieldMatrix(self.field, block))
        return ToralStabilizerCertificate(self.field, embedded)


def weyl_certificate(W, torus, jobs=1, verify=VerificationModeEnum.NONE):
    """
    Lifts every g in GL_n(F_p) to W(n;1) and restricts it to ``torus``. Lifts that move ``torus`` are counted in
    ``"lifts"`` but not in ``"normalizing"``, and are left out of the certificate.

    :return: ``{"lifts", "normalizing", "distinct_restrictions", "bijective", "inverse_transpose", "certificate"}``.
    :rtype: dict
    """
    field = W.field
    group = general_linear_group(field, _ring_of(W).nvars)

    def restrict(g):
        try:
            return g, restriction_to_torus(demushkin_lift(W, g, verify=verify), torus)
        except DoesNotNormalize as e:
            logger.warning("lift of %s does not normalize the torus: %s", g.tolist(), e)
            return g, None

    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            results = list(executor.map(restrict, group))
    else:
        results = [restrict(g) for g in group]

    normalizing = [(g, r) for g, r in results if r is not None]
    certificate = ToralStabilizerCertificate(field, [r.matrix for _, r in normalizing])
    inverse_transpose = all(r.matrix == inverse(g).transpose() for g, r in normalizing)
    logger.info("lifted %d elements of GL_%d(F_%d); %d distinct restrictions",
                len(results), certificate.degree, field.p, certificate.order)
    return {"lifts": len(results), "normalizing": len(normalizing), "distinct_restrictions": certificate.order,
            "bijective": (len(normalizing) == len(group) and certificate.order == len(group)
                          and certificate.is_general_linear()),
            "inverse_transpose": inverse_transpose, "certificate": certificate}


def classical_weyl_certificate(L, torus):
    """Restrictions to ``torus`` of the conjugations by all of GL_n(F_p) that normalize it."""
    n = L.realization.n
    matrices = []
    for g in general_linear_group(L.field, n):
        a = conjugation_auto(L, g)
        if normalizes_torus(a, torus):
            matrices.append(restriction_to_torus(a, torus).matrix)
    return ToralStabilizerCertificate(L.field, matrices)
