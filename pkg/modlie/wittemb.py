"""
Embedding of the generalized Witt algebra W(m;n) into the Jacobson-Witt algebra W(|n|;1).

The divided power algebra A(m;n) is isomorphic to A(|n|;1) through ``y_{i,j} -> x^(p^j e_i)``; transporting special
derivations along that isomorphism embeds W(m;n) into W(|n|;1), and the p-envelope of the image is the minimal
p-envelope of W(m;n).
"""
import logging
from math import factorial

import numpy as np

from modlie.config import DEFAULT_CONFIG
from modlie.error_handlers import NotAnAutomorphism
from modlie.ffla import PrimeFieldMatrix, rank, inverse
from modlie.liecore import Subspace
from modlie.restrict import p_envelope
from modlie.rings import DividedPowerAlgebra, TruncatedPolyRing, base_p_digits
from modlie.cartan import build_witt, build_jacobson_witt, prime_field

logger = logging.getLogger(__name__)


class VariableSplit(object):
    """
    Flat numbering of the variables ``y_{i,j}``, ``0 <= j < n_i``: ``flat(i, j) = n_1 + ... + n_{i-1} + j``
    (``i`` counted from zero).
    """

    def __init__(self, n_vec):
        self.n_vec = tuple(int(n) for n in n_vec)
        self.m = len(self.n_vec)
        self.total = sum(self.n_vec)
        self._offsets = [sum(self.n_vec[:i]) for i in range(self.m)]

        super(VariableSplit, self).__init__()

    def flat(self, i, j):
        if not 0 <= j < self.n_vec[i]:
            raise IndexError("y_({},{}) does not exist for heights {}.".format(i, j, self.n_vec))
        return self._offsets[i] + j

    def pair(self, k):
        for i in reversed(range(self.m)):
            if k >= self._offsets[i]:
                return i, k - self._offsets[i]
        raise IndexError(k)

    def pairs(self):
        return [(i, j) for i in range(self.m) for j in range(self.n_vec[i])]

    def variable_label(self, k):
        i, j = self.pair(k)
        return "y[{},{}]".format(i + 1, j)

    def derivation_label(self, k):
        i, j = self.pair(k)
        return "D[{},{}]".format(i + 1, j)

    def monomial_label(self, c):
        factors = []
        for k, e in enumerate(c):
            if e:
                factors.append(self.variable_label(k) + ("^{}".format(e) if e > 1 else ""))
        return "*".join(factors) if factors else "1"


class DividedPowerIsomorphism(object):
    """
    The algebra isomorphism ``φ: A(m;n) -> B_{|n|}`` with ``φ(x^(a)) = u^{-1} ∏ y_{i,j}^{c_{i,j}}``, where
    ``a_i = Σ_j c_{i,j} p^j`` and ``u = ∏ c_{i,j}!``. ``matrix`` has one column per divided power monomial.
    """

    def __init__(self, source, target, split, matrix):
        self.source = source
        self.target = target
        self.split = split
        self.matrix = matrix
        self._inverse = None

        super(DividedPowerIsomorphism, self).__init__()

    def apply(self, f):
        return self.target.element(self.matrix @ np.asarray(f).reshape(-1))

    def inverse_apply(self, g):
        if self._inverse is None:
            self._inverse = inverse(self.matrix)
        return self.source.element(self._inverse @ np.asarray(g).reshape(-1))

    def generator_image(self, i, j):
        """``φ(x^(p^j e_i))``."""
        a = [0] * self.split.m
        a[i] = self.source.field.p ** j
        return self.apply(self.source.monomial(a))

    def is_multiplicative(self):
        """``φ(fg) = φ(f)φ(g)`` on every pair of basis monomials."""
        exponents = self.source.exponents()
        images = [self.apply(self.source.monomial(a)) for a in exponents]
        for x, a in enumerate(exponents):
            for y in range(x, len(exponents)):
                b = exponents[y]
                coeff, e = self.source.monomial_product(a, b)
                left = self.apply(self.source.monomial(e, coeff)) if coeff else self.target.zero()
                if not np.array_equal(left, self.target.multiply(images[x], images[y])):
                    return False
        return True


def build_phi(m, n_vec, p, config=None):
    """
    :raises NotAnAutomorphism: Raised if some ``x^(a)`` is not ``u`` times the product of its digit generators,
        which would make the map non-multiplicative.
    :rtype: :py:class:`DividedPowerIsomorphism`
    """
    config = config or DEFAULT_CONFIG
    n_vec = tuple(int(n) for n in n_vec)
    if len(n_vec) != m:
        raise ValueError("A(m;n) needs {} heights, got {}.".format(m, n_vec))
    field = prime_field(p, config)
    source = DividedPowerAlgebra(field, n_vec)
    split = VariableSplit(n_vec)
    target = TruncatedPolyRing(field, split.total)

    generators = {}
    for i, j in split.pairs():
        a = [0] * m
        a[i] = p ** j
        generators[(i, j)] = source.monomial(a)

    columns = []
    for a in source.exponents():
        c = [0] * split.total
        unit = 1
        product = source.one()
        for i in range(m):
            for j, digit in enumerate(base_p_digits(a[i], p, n_vec[i])):
                c[split.flat(i, j)] = digit
                unit = unit * factorial(digit) % p
                product = source.multiply(product, source.power(generators[(i, j)], digit))
        if not np.array_equal(product, source.monomial(a, unit)):
            raise NotAnAutomorphism("Digit factorization of x^({}) does not have unit {}.".format(a, unit),
                                    witness={"exponent": list(a), "unit": unit})
        columns.append(target.monomial(c, field.inv(unit)).reshape(-1))
    matrix = PrimeFieldMatrix(field, np.stack(columns, axis=1))
    return DividedPowerIsomorphism(source, target, split, matrix)


class EmbeddingMap(object):
    """
    ``ι: W(m;n) -> W(|n|;1)``, ``Φ(D) = φ ∘ D ∘ φ^{-1}``. Column ``k`` of ``matrix`` holds the target coordinates of
    the image of the ``k``-th source basis element.
    """

    def __init__(self, source, target, phi, matrix):
        self.source = source
        self.target = target
        self.phi = phi
        self.matrix = matrix
        self.split = phi.split

        super(EmbeddingMap, self).__init__()

    @property
    def fields(self):
        return self.target.realization.fields

    def apply(self, v):
        return self.matrix @ v

    def image(self):
        return Subspace(self.target, [self.matrix.column(k) for k in range(self.source.dim)])

    def image_field(self, k):
        return self.fields.from_vector(self.matrix.column(k))

    def is_injective(self):
        return rank(self.matrix) == self.source.dim

    def bracket_violations(self, limit=10):
        """Source basis pairs ``(k, l)`` with ``ι[b_k, b_l] != [ι b_k, ι b_l]``."""
        p = self.source.p
        fields = self.fields
        images = [self.image_field(k) for k in range(self.source.dim)]
        bad = []
        for k in range(self.source.dim):
            for l in range(k + 1, self.source.dim):
                left = np.zeros(self.target.dim, dtype=np.int64)
                for t, c in self.source.sc.get((k, l), []):
                    left = left + c * self.matrix.entries[:, t]
                right = fields.to_vector(fields.bracket(images[k], images[l]))
                if not np.array_equal(np.mod(left, p), right):
                    bad.append((k, l))
                    if len(bad) >= limit:
                        return bad
        return bad

    def field_terms(self, D):
        """Readable terms ``[coefficient, monomial, derivation]`` of a target field."""
        terms = []
        for k in range(self.split.total):
            for a in zip(*np.nonzero(D[k])):
                terms.append([int(D[(k,) + a]), self.split.monomial_label(a), self.split.derivation_label(k)])
        return terms


def build_iota(m, n_vec, p, config=None, verify=True):
    """
    Builds ``ι`` one source basis element at a time: ``Φ(x^(a) ∂_i) = Σ_j φ(x^(a) x^((p^j - 1) e_i)) D_{i,j}``, the
    values of ``Φ(D)`` on the generators ``y_{i,j}``.

    :param bool verify: Check injectivity and bracket preservation on every source basis pair.
    :raises NotAnAutomorphism: Raised if verification fails.
    :rtype: :py:class:`EmbeddingMap`
    """
    config = config or DEFAULT_CONFIG
    phi = build_phi(m, n_vec, p, config)
    source = build_witt(m, n_vec, p, config)
    target, _ = build_jacobson_witt(phi.split.total, p, config)
    source_fields = source.realization.fields
    target_fields = target.realization.fields
    A = phi.source

    columns = []
    for k in range(source.dim):
        i, a = source_fields.basis_key(k)
        D = target_fields.zero()
        for j in range(phi.split.n_vec[i]):
            shift = [0] * m
            shift[i] = p ** j - 1
            coeff, e = A.monomial_product(a, shift)
            if coeff:
                D[phi.split.flat(i, j)] = phi.apply(A.monomial(e, coeff))
        columns.append(target_fields.to_vector(D))
    emb = EmbeddingMap(source, target, phi, PrimeFieldMatrix(source.field, np.stack(columns, axis=1)))

    if verify:
        if not emb.is_injective():
            raise NotAnAutomorphism("Embedding of W({};{}) is not injective.".format(m, n_vec))
        bad = emb.bracket_violations()
        if bad:
            raise NotAnAutomorphism("Embedding does not preserve brackets.", witness={"pairs": bad})
    logger.info("built embedding W(%d;%s) -> W(%d;1)", m, tuple(n_vec), phi.split.total)
    return emb


def _expected_D_i(emb, i):
    """``D_{i,0} + Σ_{j>=1} (-1)^j y_{i,0}^{p-1} ... y_{i,j-1}^{p-1} D_{i,j}``."""
    p = emb.source.p
    split = emb.split
    D = emb.fields.zero()
    for j in range(split.n_vec[i]):
        c = [0] * split.total
        for l in range(j):
            c[split.flat(i, l)] = p - 1
        D[(split.flat(i, j),) + tuple(c)] = (-1) ** j % p
    return D


def check_D_i_expansion(emb):
    """
    Compares ``ι(∂_i)`` with the closed-form expansion for every source variable.

    :return: ``{"matches", "variables": [{"i", "computed", "expected", "mismatches"}]}``.
    :rtype: dict
    """
    source_fields = emb.source.realization.fields
    report = {"matches": True, "variables": []}
    for i in range(emb.split.m):
        computed = emb.image_field(source_fields.basis_index(i, (0,) * emb.split.m))
        expected = _expected_D_i(emb, i)
        mismatches = [emb.split.derivation_label(k) for k in range(emb.split.total)
                      if not np.array_equal(computed[k], expected[k])]
        report["variables"].append({"i": i + 1, "computed": emb.field_terms(computed),
                                    "expected": emb.field_terms(expected), "mismatches": mismatches})
        if mismatches:
            report["matches"] = False
    return report


def _satisfies_coefficient_identity(emb, D):
    """``a_{s,j} = (-1)^j y_{s,0}^{p-1} ... y_{s,j-1}^{p-1} a_{s,0}`` for every block ``s``."""
    p = emb.source.p
    split = emb.split
    ring = emb.phi.target
    for s in range(split.m):
        base = D[split.flat(s, 0)]
        for j in range(1, split.n_vec[s]):
            c = [0] * split.total
            for l in range(j):
                c[split.flat(s, l)] = p - 1
            expected = np.mod((-1) ** j * ring.multiply(ring.monomial(c), base), p)
            if not np.array_equal(D[split.flat(s, j)], expected):
                return False
    return True


def check_coefficient_identity(emb, envelope=None):
    """
    Checks the coefficient identity on every basis element of ``ι(W(m;n))``. Directions of the envelope beyond the
    image are p-th powers, not of the form ``φ(f) ι(∂_s)``, and are reported as exempt.

    :return: ``{"holds", "checked", "violations", "exempt"}``.
    :rtype: dict
    """
    violations = [emb.source.labels[k] for k in range(emb.source.dim)
                  if not _satisfies_coefficient_identity(emb, emb.image_field(k))]
    report = {"holds": not violations, "checked": emb.source.dim, "violations": violations, "exempt": 0}
    if envelope is not None:
        report["exempt"] = envelope.dim - envelope.inner.dim
    return report


def envelope_in_target(emb):
    """
    p-envelope of ``ι(W(m;n))`` inside ``W(|n|;1)``; of dimension ``m p^{|n|} + Σ (n_i - 1)`` for the minimal
    envelope.

    :rtype: :py:class:`~modlie.restrict.PEnvelope`
    """
    envelope = p_envelope(emb.target, emb.image())
    logger.info("p-envelope of the image has dimension %d (image %d)", envelope.dim, envelope.inner.dim)
    return envelope
