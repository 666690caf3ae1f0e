"""
Commutative monomial algebras (divided powers A(m;n) and truncated polynomials B_n) and the Lie algebras of special
derivations over them. Elements are ``numpy.int64`` arrays of shape ``ring.shape`` indexed by exponent tuples; vector
fields ``Σ f_i ∂_i`` are arrays of shape ``(nvars,) + ring.shape``.
"""
import logging
from math import comb, factorial

import numpy as np

from modlie.ffla import BasisSolver
from modlie.utilities import monomial_label
from modlie.error_handlers import DimensionMismatchError, NotRestrictedError

logger = logging.getLogger(__name__)


def binomial_mod(n, k, p):
    """``binom(n, k) mod p`` through the base-p digits of ``n`` and ``k`` (Lucas)."""
    if k < 0 or k > n:
        return 0
    result = 1
    while n or k:
        n_digit, k_digit = n % p, k % p
        if k_digit > n_digit:
            return 0
        result = result * comb(n_digit, k_digit) % p
        n //= p
        k //= p
    return result


def base_p_digits(a, p, length):
    digits = []
    for _ in range(length):
        digits.append(a % p)
        a //= p
    return digits


class MonomialAlgebra(object):
    """
    Base class for commutative algebras with basis ``x^a``, ``0 <= a_i < shape[i]``, and a product
    ``x^a x^b = (∏_i B_i[a_i, b_i]) x^(a+b)`` that vanishes once some ``a_i + b_i`` leaves the box. Subclasses supply
    the per-axis tables ``B_i`` and the weights of the partial derivatives.
    """

    def __init__(self, field, shape):
        self.field = field
        self.shape = tuple(int(s) for s in shape)
        self.nvars = len(self.shape)
        self.dim = int(np.prod(self.shape)) if self.shape else 1
        self._tables = [self._product_table(axis) for axis in range(self.nvars)]
        self._derivative_weights = [self._derivative_table(axis) for axis in range(self.nvars)]

        super(MonomialAlgebra, self).__init__()

    def _product_table(self, axis):
        raise NotImplementedError

    def _derivative_table(self, axis):
        raise NotImplementedError

    def label(self, a):
        raise NotImplementedError

    def exponents(self):
        """Basis exponents in storage (C) order."""
        return [tuple(int(x) for x in a) for a in np.ndindex(*self.shape)]

    def index(self, a):
        return int(np.ravel_multi_index(tuple(a), self.shape))

    def exponent(self, k):
        return tuple(int(x) for x in np.unravel_index(k, self.shape))

    def zero(self):
        return np.zeros(self.shape, dtype=np.int64)

    def one(self):
        return self.monomial((0,) * self.nvars)

    def monomial(self, a, coeff=1):
        f = self.zero()
        f[tuple(a)] = coeff % self.field.p
        return f

    def generator(self, i):
        """The degree-one element along axis ``i``."""
        a = [0] * self.nvars
        a[i] = 1
        return self.monomial(a)

    def element(self, vector):
        return np.mod(np.asarray(vector, dtype=np.int64).reshape(self.shape), self.field.p)

    def constant_term(self, f):
        return int(f[(0,) * self.nvars])

    def total_degree(self, a):
        return int(sum(a))

    def monomial_product(self, a, b):
        """
        :return: ``(coefficient, exponent)``; the coefficient is 0 (and the exponent ``None``) off the box.
        """
        coeff = 1
        for axis, (x, y) in enumerate(zip(a, b)):
            if x + y >= self.shape[axis]:
                return 0, None
            coeff = coeff * int(self._tables[axis][x, y]) % self.field.p
            if not coeff:
                return 0, None
        return coeff, tuple(x + y for x, y in zip(a, b))

    def monomial_partial(self, a, i):
        """
        :return: ``(weight, exponent)`` with ``∂_i x^a = weight * x^exponent``.
        """
        if a[i] == 0:
            return 0, None
        weight = int(self._derivative_weights[i][a[i]])
        if not weight:
            return 0, None
        b = list(a)
        b[i] -= 1
        return weight, tuple(b)

    def multiply(self, f, g):
        p = self.field.p
        result = self.zero()
        for idx in zip(*np.nonzero(f)):
            source = tuple(slice(0, n - a) for a, n in zip(idx, self.shape))
            target = tuple(slice(a, n) for a, n in zip(idx, self.shape))
            term = g[source]
            if not term.any():
                continue
            for axis, a in enumerate(idx):
                if a:
                    weights = self._tables[axis][a, :self.shape[axis] - a]
                    term = term * weights.reshape([-1 if k == axis else 1 for k in range(self.nvars)])
            result[target] += int(f[idx]) * term
            result[target] %= p
        return result

    def power(self, f, k):
        result = self.one()
        for _ in range(k):
            result = self.multiply(result, f)
        return result

    def partial(self, f, i):
        n = self.shape[i]
        result = self.zero()
        source = [slice(None)] * self.nvars
        target = [slice(None)] * self.nvars
        source[i] = slice(1, n)
        target[i] = slice(0, n - 1)
        weights = self._derivative_weights[i][1:].reshape([-1 if k == i else 1 for k in range(self.nvars)])
        result[tuple(target)] = np.mod(f[tuple(source)] * weights, self.field.p)
        return result

    def multiplication_matrix(self, q):
        """Matrix of ``f -> q f`` on the flattened monomial basis."""
        columns = [self.multiply(q, self.monomial(a)).ravel() for a in self.exponents()]
        return np.stack(columns, axis=1)


class DividedPowerAlgebra(MonomialAlgebra):
    """
    The divided power algebra A(m; n) with basis ``x^(a)``, ``a_i < p^{n_i}``, and product
    ``x^(a) x^(b) = ∏ binom(a_i + b_i, a_i) x^(a+b)``.
    """

    def __init__(self, field, n_vec):
        """
        :param field: Coefficient field.
        :type field: :py:class:`~modlie.ffla.PrimeField`
        :param n_vec: Heights ``(n_1, ..., n_m)``, each at least 1.
        :type n_vec: tuple of int
        """
        n_vec = tuple(int(n) for n in n_vec)
        if not n_vec or min(n_vec) < 1:
            raise ValueError("Divided power heights must be positive, got {}.".format(n_vec))
        self.n_vec = n_vec
        super(DividedPowerAlgebra, self).__init__(field, [field.p ** n for n in n_vec])

    def _product_table(self, axis):
        bound = self.shape[axis]
        p = self.field.p
        table = np.zeros((bound, bound), dtype=np.int64)
        for a in range(bound):
            for b in range(bound - a):
                table[a, b] = binomial_mod(a + b, a, p)
        return table

    def _derivative_table(self, axis):
        return np.ones(self.shape[axis], dtype=np.int64)

    def is_restricted(self):
        return all(n == 1 for n in self.n_vec)

    def label(self, a):
        if not any(a):
            return "1"
        return "x^({})".format(",".join(str(x) for x in a))


class TruncatedPolyRing(MonomialAlgebra):
    """The truncated polynomial ring ``B_n = F_p[x_1..x_n] / (x_i^p)``."""

    def __init__(self, field, n):
        if n < 1:
            raise ValueError("A truncated polynomial ring needs at least one variable.")
        self.n = int(n)
        super(TruncatedPolyRing, self).__init__(field, [field.p] * self.n)

    def _product_table(self, axis):
        return np.ones((self.field.p, self.field.p), dtype=np.int64)

    def _derivative_table(self, axis):
        return np.arange(self.field.p, dtype=np.int64)

    def label(self, a):
        return monomial_label(a)


class VectorFields(object):
    """
    Special derivations ``Σ f_i ∂_i`` of a monomial algebra, i.e. the Witt algebra W over that carrier. The basis
    element ``x^a ∂_i`` has flat index ``i * ring.dim + ravel(a)``.
    """

    def __init__(self, ring):
        self.ring = ring
        self.field = ring.field
        self.nvars = ring.nvars
        self.shape = (ring.nvars,) + ring.shape
        self.dim = ring.nvars * ring.dim

        super(VectorFields, self).__init__()

    def basis_index(self, i, a):
        return i * self.ring.dim + self.ring.index(a)

    def basis_key(self, k):
        i, rest = divmod(k, self.ring.dim)
        return i, self.ring.exponent(rest)

    def labels(self):
        labels = []
        for k in range(self.dim):
            i, a = self.basis_key(k)
            coefficient = self.ring.label(a)
            labels.append("D{}".format(i + 1) if coefficient == "1" else "{}*D{}".format(coefficient, i + 1))
        return labels

    def zero(self):
        return np.zeros(self.shape, dtype=np.int64)

    def monomial_field(self, i, a, coeff=1):
        D = self.zero()
        D[(i,) + tuple(a)] = coeff % self.field.p
        return D

    def from_components(self, components):
        return np.mod(np.stack([np.asarray(c, dtype=np.int64) for c in components]), self.field.p)

    def to_vector(self, D):
        return D.reshape(-1).copy()

    def from_vector(self, v):
        v = np.asarray(v, dtype=np.int64)
        if v.shape[-1] != self.dim:
            raise DimensionMismatchError("Vector of length {} is not a field on {} coordinates.".format(
                v.shape[-1], self.dim))
        return np.mod(v.reshape(self.shape), self.field.p)

    def apply(self, D, f):
        """``D(f) = Σ_i d_i ∂_i f``."""
        result = self.ring.zero()
        for i in range(self.nvars):
            if D[i].any():
                result = result + self.ring.multiply(D[i], self.ring.partial(f, i))
        return np.mod(result, self.field.p)

    def bracket(self, D, E):
        """``[D, E]_j = D(e_j) - E(d_j)``."""
        components = [self.apply(D, E[j]) - self.apply(E, D[j]) for j in range(self.nvars)]
        return np.mod(np.stack(components), self.field.p)

    def multiply(self, f, D):
        """The module action ``f * D``."""
        return np.stack([self.ring.multiply(f, D[i]) for i in range(self.nvars)])

    def p_power(self, D):
        """
        The p-th power of ``D`` as a derivation, read off from ``D^p(x_j)``. Only defined when every generator is
        truncated at ``p``.

        :raises NotRestrictedError: Raised for divided power carriers of height above one.
        """
        if any(n != self.field.p for n in self.ring.shape):
            raise NotRestrictedError("Derivations of {} have no p-th power in the algebra.".format(self.ring.shape))
        components = []
        for j in range(self.nvars):
            f = self.ring.generator(j)
            for _ in range(self.field.p):
                f = self.apply(D, f)
                if not f.any():
                    break
            components.append(f)
        return np.stack(components)

    def monomial_bracket(self, k1, k2):
        """
        Bracket of two basis fields in closed form,
        ``[x^a ∂_i, x^b ∂_j] = x^a ∂_i(x^b) ∂_j - x^b ∂_j(x^a) ∂_i``.

        :return: Sparse result as ``[(index, coefficient)]``.
        :rtype: list of tuple
        """
        p = self.field.p
        i, a = self.basis_key(k1)
        j, b = self.basis_key(k2)
        terms = {}
        weight, c = self.ring.monomial_partial(b, i)
        if weight:
            coeff, e = self.ring.monomial_product(a, c)
            if coeff:
                k = self.basis_index(j, e)
                terms[k] = (terms.get(k, 0) + weight * coeff) % p
        weight, c = self.ring.monomial_partial(a, j)
        if weight:
            coeff, e = self.ring.monomial_product(b, c)
            if coeff:
                k = self.basis_index(i, e)
                terms[k] = (terms.get(k, 0) - weight * coeff) % p
        return [(k, c) for k, c in sorted(terms.items()) if c]

    def degree(self, k):
        """Standard grading degree ``|a| - 1`` of the basis field ``x^a ∂_i``."""
        return self.ring.total_degree(self.basis_key(k)[1]) - 1


class FieldRealization(object):
    """
    Faithful realization of a Lie algebra by vector fields: basis element ``b_k`` is the field whose flat coordinates
    are row ``k`` of ``basis`` (the identity when omitted). Brackets and p-th powers computed here are the oracle
    for the structure-constant side.
    """

    def __init__(self, fields, basis=None):
        """
        :param fields: Ambient vector fields.
        :type fields: :py:class:`VectorFields`
        :param basis: Array of shape ``(dim, fields.dim)``, rows linearly independent (optional).
        :type basis: numpy.ndarray
        """
        self.fields = fields
        self.basis = None if basis is None else np.asarray(basis, dtype=np.int64)
        self._solver = None

        super(FieldRealization, self).__init__()

    @property
    def dim(self):
        return self.fields.dim if self.basis is None else self.basis.shape[0]

    @property
    def solver(self):
        if self._solver is None and self.basis is not None:
            self._solver = BasisSolver(self.fields.field, self.basis)
        return self._solver

    def to_field(self, v):
        v = np.asarray(v, dtype=np.int64)
        flat = v if self.basis is None else np.mod(v @ self.basis, self.fields.field.p)
        return self.fields.from_vector(flat)

    def from_field(self, D):
        flat = self.fields.to_vector(D)
        if self.basis is None:
            return flat
        return self.solver.coordinates(flat)

    def bracket(self, u, v):
        return self.from_field(self.fields.bracket(self.to_field(u), self.to_field(v)))

    def p_power(self, u):
        return self.from_field(self.fields.p_power(self.to_field(u)))

    def basis_field(self, k):
        if self.basis is None:
            return self.fields.from_vector(np.eye(1, self.fields.dim, k, dtype=np.int64)[0])
        return self.fields.from_vector(self.basis[k])


def rescaling_factors(ring):
    """``1 / a!`` for every exponent of a carrier whose generators are truncated at p, in storage order."""
    field = ring.field
    factors = []
    for a in ring.exponents():
        u = 1
        for x in a:
            u = u * factorial(x) % field.p
        factors.append(field.inv(u))
    return np.asarray(factors, dtype=np.int64)
