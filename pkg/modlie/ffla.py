"""
Exact linear algebra over a prime field F_p.

Vectors (``FVector``) are one-dimensional ``numpy.int64`` arrays holding canonical representatives ``0..p-1``; matrices
are wrapped in :py:class:`PrimeFieldMatrix`. Every routine here is a pure function of its inputs.
"""
import logging
import numpy as np
from sympy import isprime

from modlie.error_handlers import FieldError, DimensionMismatchError, NotInSpanError

logger = logging.getLogger(__name__)

# largest integer a float64 represents exactly
_FLOAT_EXACT = 2 ** 53


class PrimeField(object):
    """
    The prime field F_p. Instances compare equal when their moduli agree.
    """

    def __init__(self, p, allow_small=False):
        """
        :param int p: Prime modulus.
        :param bool allow_small: Permit p = 2, 3 (the catalog assumes p >= 5).
        :raises FieldError: Raised if ``p`` is not prime, or is smaller than 5 without ``allow_small``.
        """
        p = int(p)
        if not isprime(p):
            raise FieldError("{} is not prime.".format(p))
        if p < 5 and not allow_small:
            raise FieldError("Characteristic {} is below 5; pass allow_small=True to override.".format(p))
        self.p = p

        super(PrimeField, self).__init__()

    def reduce(self, x):
        """Canonical representative(s) of ``x`` (an int or an integer array)."""
        if isinstance(x, np.ndarray):
            return np.mod(x, self.p).astype(np.int64)
        return int(x) % self.p

    def inv(self, a):
        """
        :raises ZeroDivisionError: Raised for ``a = 0``.
        """
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in F_{}".format(self.p))
        return pow(a, self.p - 2, self.p)

    def elements(self):
        return range(self.p)

    def vector(self, coords):
        """FVector with the given coordinates, reduced mod p."""
        return np.mod(np.asarray(coords, dtype=np.int64), self.p)

    def zero(self, n):
        return np.zeros(n, dtype=np.int64)

    def unit(self, n, i):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return v

    def random_vector(self, n, rng):
        return rng.integers(0, self.p, size=n, dtype=np.int64)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return "PrimeField({})".format(self.p)


def matmul(a, b, p):
    """
    Exact product of two integer arrays reduced mod p. Uses float64 BLAS when every partial sum is below 2^53, which
    holds for every size this package builds; otherwise falls back to Python integers.
    """
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        product = np.rint(np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64))
        return np.mod(product.astype(np.int64), p)
    return np.mod(np.asarray(a, dtype=object) @ np.asarray(b, dtype=object), p).astype(np.int64)


class PrimeFieldMatrix(object):
    """
    Dense matrix over F_p with row-major semantics. Entries are always reduced mod p; instances are treated as
    immutable.
    """

    def __init__(self, field, entries):
        """
        :param field: Field of the entries.
        :type field: :py:class:`PrimeField`
        :param entries: Anything ``numpy.asarray`` turns into a two-dimensional integer array.
        """
        self.field = field
        entries = np.asarray(entries, dtype=np.int64)
        if entries.ndim == 1 and entries.size == 0:
            entries = entries.reshape(0, 0)
        if entries.ndim != 2:
            raise DimensionMismatchError("Matrix entries must be two-dimensional, got shape {}.".format(entries.shape))
        self.entries = np.mod(entries, field.p)

        super(PrimeFieldMatrix, self).__init__()

    @classmethod
    def identity(cls, field, n):
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def _check_field(self, other):
        if other.field != self.field:
            raise FieldError("Cannot combine matrices over {} and {}.".format(self.field, other.field))

    def __matmul__(self, other):
        if isinstance(other, PrimeFieldMatrix):
            self._check_field(other)
            if self.cols != other.rows:
                raise DimensionMismatchError("Cannot multiply {} by {}.".format(self.shape, other.shape))
            return PrimeFieldMatrix(self.field, matmul(self.entries, other.entries, self.field.p))
        other = np.asarray(other, dtype=np.int64)
        if other.shape[0] != self.cols:
            raise DimensionMismatchError("Cannot apply {} matrix to a vector of length {}.".format(
                self.shape, other.shape[0]))
        return matmul(self.entries, other, self.field.p)

    def apply(self, v):
        return self @ v

    def __add__(self, other):
        self._check_field(other)
        return PrimeFieldMatrix(self.field, self.entries + other.entries)

    def __sub__(self, other):
        self._check_field(other)
        return PrimeFieldMatrix(self.field, self.entries - other.entries)

    def __neg__(self):
        return PrimeFieldMatrix(self.field, -self.entries)

    def power(self, k):
        """``self ** k`` by repeated squaring (k >= 0, square matrices only)."""
        if self.rows != self.cols:
            raise DimensionMismatchError("Only square matrices have powers, got {}.".format(self.shape))
        result = np.eye(self.rows, dtype=np.int64)
        base = self.entries
        while k:
            if k & 1:
                result = matmul(result, base, self.field.p)
            k >>= 1
            if k:
                base = matmul(base, base, self.field.p)
        return PrimeFieldMatrix(self.field, result)

    def transpose(self):
        return PrimeFieldMatrix(self.field, self.entries.T)

    def column(self, j):
        return self.entries[:, j].copy()

    def tolist(self):
        return self.entries.tolist()

    def __eq__(self, other):
        return (isinstance(other, PrimeFieldMatrix) and other.field == self.field
                and other.shape == self.shape and np.array_equal(other.entries, self.entries))

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.field.p, self.shape, self.entries.tobytes()))

    def __repr__(self):
        return "PrimeFieldMatrix(F_{}, {})".format(self.field.p, self.entries.tolist())


def _rref_array(a, p):
    """
    Reduced row echelon form of an integer array over F_p.

    :return: ``(reduced array, pivot column list)``.
    """
    a = np.mod(np.array(a, dtype=np.int64), p)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nonzero = np.nonzero(a[r:, c])[0]
        if nonzero.size == 0:
            continue
        k = r + nonzero[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = np.mod(a[r] * pow(int(a[r, c]), p - 2, p), p)
        column = a[:, c].copy()
        column[r] = 0
        hit = np.nonzero(column)[0]
        if hit.size:
            a[hit] = np.mod(a[hit] - np.outer(column[hit], a[r]), p)
        pivots.append(c)
        r += 1
    return a, pivots


def rref(M):
    """
    Reduced row echelon form.

    :param M: Matrix to reduce.
    :type M: :py:class:`PrimeFieldMatrix`
    :return: ``(R, pivots)`` with ``rank(M) == len(pivots)``.
    :rtype: tuple
    """
    reduced, pivots = _rref_array(M.entries, M.field.p)
    return PrimeFieldMatrix(M.field, reduced), pivots


def rank(M):
    return len(rref(M)[1])


def kernel_basis(M):
    """
    Basis of the null space ``{v : M v = 0}``; one vector per non-pivot column.

    :rtype: list of numpy.ndarray
    """
    p = M.field.p
    reduced, pivots = _rref_array(M.entries, p)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = np.zeros(M.cols, dtype=np.int64)
        v[free] = 1
        for row, pc in enumerate(pivots):
            v[pc] = (-reduced[row, free]) % p
        basis.append(v)
    return basis


def eigenspace(M, lam):
    """
    Basis of ``ker(M - lam I)``.

    :param M: Square matrix.
    :type M: :py:class:`PrimeFieldMatrix`
    :param int lam: Eigenvalue candidate in F_p.
    :rtype: list of numpy.ndarray
    """
    if M.rows != M.cols:
        raise DimensionMismatchError("eigenspace needs a square matrix, got {}.".format(M.shape))
    shifted = PrimeFieldMatrix(M.field, M.entries - int(lam) * np.eye(M.rows, dtype=np.int64))
    return kernel_basis(shifted)


def echelon_basis(field, vectors, length=None):
    """
    Canonical (reduced echelon) basis of the span of ``vectors``.

    :param field: Coefficient field.
    :type field: :py:class:`PrimeField`
    :param vectors: Vectors, all of the same length.
    :type vectors: list of numpy.ndarray
    :param int length: Ambient dimension, required when ``vectors`` may be empty.
    :return: Array of shape ``(rank, length)``.
    :rtype: numpy.ndarray
    """
    vectors = [np.asarray(v, dtype=np.int64) for v in vectors]
    if not vectors:
        return np.zeros((0, length or 0), dtype=np.int64)
    if len(set(v.shape[0] for v in vectors)) > 1:
        raise DimensionMismatchError("Vectors of different lengths cannot span a subspace.")
    reduced, pivots = _rref_array(np.stack(vectors), field.p)
    return reduced[:len(pivots)]


def independent_columns(field, vectors):
    """
    Indices of a maximal linearly independent sub-list of ``vectors``, greedily from the front.

    :rtype: list of int
    """
    if not vectors:
        return []
    _, pivots = _rref_array(np.stack(vectors, axis=1), field.p)
    return list(pivots)


def intersect_subspaces(field, A, B):
    """
    Basis of ``span(A) ∩ span(B)``, computed from the kernel of the stacked system ``Σ x_i a_i - Σ y_j b_j = 0``.

    :param field: Coefficient field.
    :type field: :py:class:`PrimeField`
    :param A: Basis of the first subspace.
    :type A: list of numpy.ndarray
    :param B: Basis of the second subspace.
    :type B: list of numpy.ndarray
    :return: Echelonized basis of the intersection.
    :rtype: list of numpy.ndarray
    """
    A = [np.asarray(a, dtype=np.int64) for a in A]
    B = [np.asarray(b, dtype=np.int64) for b in B]
    if not A or not B:
        return []
    if A[0].shape != B[0].shape:
        raise DimensionMismatchError("Subspaces live in different ambient spaces.")
    p = field.p
    system = PrimeFieldMatrix(field, np.concatenate([np.stack(A, axis=1), -np.stack(B, axis=1)], axis=1))
    a = np.stack(A)
    vectors = [matmul(k[:len(A)], a, p) for k in kernel_basis(system)]
    return list(echelon_basis(field, vectors, A[0].shape[0]))


def inverse(M):
    """
    :raises FieldError: Raised if ``M`` is singular.
    """
    n = M.rows
    if n != M.cols:
        raise DimensionMismatchError("Only square matrices are invertible, got {}.".format(M.shape))
    reduced, pivots = _rref_array(np.concatenate([M.entries, np.eye(n, dtype=np.int64)], axis=1), M.field.p)
    if pivots[:n] != list(range(n)):
        raise FieldError("Matrix is singular over F_{}.".format(M.field.p))
    return PrimeFieldMatrix(M.field, reduced[:, n:])


def is_invertible(M):
    return M.rows == M.cols and rank(M) == M.rows


class BasisSolver(object):
    """
    Coordinates relative to a fixed linearly independent list of vectors ``b_1..b_r`` (the rows of ``basis``). The
    list need not be echelonized; the solver row-reduces ``[B | I]`` once and afterwards reads coordinates off the
    pivot columns.
    """

    def __init__(self, field, basis):
        """
        :param field: Coefficient field.
        :type field: :py:class:`PrimeField`
        :param basis: Array of shape ``(r, N)`` or list of vectors.
        :raises DimensionMismatchError: Raised if the rows are linearly dependent.
        """
        self.field = field
        basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
        r, n = basis.shape
        augmented, pivots = _rref_array(np.concatenate([basis, np.eye(r, dtype=np.int64)], axis=1), field.p)
        if len(pivots) < r or pivots[r - 1] >= n:
            raise DimensionMismatchError("Basis vectors are linearly dependent.")
        self.size = r
        self.length = n
        self.pivots = np.asarray(pivots[:r], dtype=np.int64)
        self._reduced = augmented[:r, :n]
        self._transition = augmented[:r, n:]

        super(BasisSolver, self).__init__()

    def coordinates(self, v, check=True):
        """
        :param v: Vector in the span.
        :type v: numpy.ndarray
        :param bool check: Verify membership (default); disable only when membership is guaranteed.
        :return: ``c`` with ``v = Σ c_i b_i``.
        :rtype: numpy.ndarray
        :raises NotInSpanError: Raised if ``v`` is not in the span.
        """
        v = np.mod(np.asarray(v, dtype=np.int64), self.field.p)
        if v.shape[-1] != self.length:
            raise DimensionMismatchError("Vector of length {} in a space of length {}.".format(v.shape[-1],
                                                                                               self.length))
        c = v[..., self.pivots]
        if check and not np.array_equal(matmul(c, self._reduced, self.field.p), v):
            raise NotInSpanError("Vector is not in the span of the basis.")
        return matmul(c, self._transition, self.field.p)

    def contains(self, v):
        try:
            self.coordinates(v)
        except NotInSpanError:
            return False
        return True


def gl_order(n, p):
    """``|GL_n(F_p)| = ∏_{i<n} (p^n - p^i)``."""
    order = 1
    for i in range(n):
        order *= p ** n - p ** i
    return order


def random_invertible(field, n, rng):
    """Uniformly random element of GL_n(F_p) by rejection."""
    while True:
        M = PrimeFieldMatrix(field, rng.integers(0, field.p, size=(n, n)))
        if is_invertible(M):
            return M


def all_matrices(field, n):
    """Every n x n matrix over F_p, row-major enumeration order."""
    p = field.p
    for code in range(p ** (n * n)):
        digits = []
        for _ in range(n * n):
            digits.append(code % p)
            code //= p
        yield PrimeFieldMatrix(field, np.asarray(digits[::-1], dtype=np.int64).reshape(n, n))


def general_linear_group(field, n):
    """Every element of GL_n(F_p)."""
    return [M for M in all_matrices(field, n) if is_invertible(M)]
