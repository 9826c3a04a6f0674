"""Dense graded matrices and the odot product.

A :class:`GradedMatrix` in ``M_{n,n'}(p, p')`` has rows indexed by the
degree-``p`` slice of I_n and columns by the degree-``p'`` slice of I_{n'},
both in the order produced by :func:`~odotseries.multiindex.enumerate_slice`.

The odot product of ``A in M(p, p')`` and ``B in M(q, q')`` lands in
``M(p+q, p'+q')`` with::

    C[alpha, alpha'] = sum  binom(alpha, beta) * A[beta, beta'] * B[alpha-beta, alpha'-beta']

over ``beta << alpha`` with ``|beta| = p`` and ``beta' << alpha'`` with
``|beta'| = p'``.  Only the row index carries a binomial weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from numbers import Number

import numpy as np

from . import multiindex as mi
from .multiindex import DimensionError

__all__ = [
    "FieldError",
    "GradedMatrix",
    "zeros",
    "identity",
    "unit",
    "row_vector",
    "column_vector",
    "random_graded",
    "add",
    "scale",
    "ordinary_mul",
    "odot",
    "odot_power",
    "odot_operator",
    "h_power_closed",
    "v_power_closed",
    "allclose",
]

FIELDS = ("real", "complex")


class FieldError(TypeError):
    """Real and complex operands were mixed."""


def _field_of(arr: np.ndarray) -> str:
    return "complex" if np.iscomplexobj(arr) else "real"


def _dtype(field: str):
    if field not in FIELDS:
        raise ValueError(f"unknown field {field!r}")
    return np.complex128 if field == "complex" else np.float64


@dataclass(frozen=True, eq=False)
class GradedMatrix:
    """Immutable dense matrix over a pair of graded multi-index slices."""

    entries: np.ndarray
    n: int
    n_prime: int
    p: int
    p_prime: int
    field: str = "real"

    def __post_init__(self):
        if self.field == "real" and np.iscomplexobj(self.entries):
            raise FieldError("complex entries in a real matrix")
        arr = np.array(self.entries, dtype=_dtype(self.field))
        shape = (mi.slice_dim(self.n, self.p), mi.slice_dim(self.n_prime, self.p_prime))
        if arr.ndim == 1 and arr.size == shape[0] * shape[1]:
            arr = arr.reshape(shape)
        if arr.shape != shape:
            raise DimensionError(
                f"entries of shape {arr.shape} do not fit M_{{{self.n},{self.n_prime}}}"
                f"({self.p},{self.p_prime}) of shape {shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def grading(self) -> tuple[int, int, int, int]:
        return (self.n, self.n_prime, self.p, self.p_prime)

    def row_indices(self):
        return mi.enumerate_slice(self.n, self.p)

    def col_indices(self):
        return mi.enumerate_slice(self.n_prime, self.p_prime)

    def __getitem__(self, key):
        """Look up ``A[alpha, alpha']`` by multi-indices; zero outside I_n."""
        alpha, alpha_p = key
        if sum(alpha) != self.p or sum(alpha_p) != self.p_prime:
            return 0.0
        if min(alpha, default=0) < 0 or min(alpha_p, default=0) < 0:
            return 0.0
        return self.entries[mi.rank(alpha), mi.rank(alpha_p)]

    def is_zero(self) -> bool:
        return not np.any(self.entries)

    def astype(self, field: str) -> "GradedMatrix":
        if field == self.field:
            return self
        if field == "real":
            raise FieldError("refusing to drop imaginary parts")
        return GradedMatrix(self.entries.astype(np.complex128), *self.grading, field="complex")

    def retag(self, n: int | None = None, n_prime: int | None = None) -> "GradedMatrix":
        """Reinterpret a matrix whose degree-0 side makes that dimension notional."""
        n = self.n if n is None else n
        n_prime = self.n_prime if n_prime is None else n_prime
        if n != self.n and self.p != 0:
            raise DimensionError("row dimension is only notional when p = 0")
        if n_prime != self.n_prime and self.p_prime != 0:
            raise DimensionError("column dimension is only notional when p' = 0")
        return GradedMatrix(self.entries, n, n_prime, self.p, self.p_prime, self.field)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __rmul__(self, lam):
        if isinstance(lam, Number):
            return scale(lam, self)
        return NotImplemented

    def __matmul__(self, other):
        return ordinary_mul(self, other)

    def __repr__(self):
        return (
            f"GradedMatrix(n={self.n}, n_prime={self.n_prime}, p={self.p}, "
            f"p_prime={self.p_prime}, field={self.field!r}, entries={self.entries.tolist()})"
        )


def zeros(n, n_prime, p, p_prime, field="real") -> GradedMatrix:
    shape = (mi.slice_dim(n, p), mi.slice_dim(n_prime, p_prime))
    return GradedMatrix(np.zeros(shape, dtype=_dtype(field)), n, n_prime, p, p_prime, field)


def identity(n: int, k: int, field: str = "real") -> GradedMatrix:
    """Unit matrix ``E_k`` over the degree-``k`` slice of I_n."""
    d = mi.slice_dim(n, k)
    return GradedMatrix(np.eye(d, dtype=_dtype(field)), n, n, k, k, field)


def unit(n: int = 1, n_prime: int = 1, field: str = "real") -> GradedMatrix:
    """Multiplicative unit for odot: the 1x1 matrix ``[1]`` in ``M(0, 0)``."""
    return GradedMatrix(np.ones((1, 1), dtype=_dtype(field)), n, n_prime, 0, 0, field)


def row_vector(h, n_prime: int | None = None, n: int | None = None) -> GradedMatrix:
    """The point ``h`` as an element of ``M_{n,n'}(0, 1)`` (default ``n = n' = len(h)``)."""
    h = np.asarray(h)
    n_prime = len(h) if n_prime is None else n_prime
    n = n_prime if n is None else n
    return GradedMatrix(h.reshape(1, -1), n, n_prime, 0, 1, _field_of(h))


def column_vector(v, n: int | None = None, n_prime: int | None = None) -> GradedMatrix:
    """``v`` as an element of ``M_{n,n'}(1, 0)``."""
    v = np.asarray(v)
    n = len(v) if n is None else n
    n_prime = n if n_prime is None else n_prime
    return GradedMatrix(v.reshape(-1, 1), n, n_prime, 1, 0, _field_of(v))


def random_graded(rng: np.random.Generator, n, n_prime, p, p_prime, field="real") -> GradedMatrix:
    """Entries uniform in [-1, 1] (real and imaginary parts independently)."""
    shape = (mi.slice_dim(n, p), mi.slice_dim(n_prime, p_prime))
    arr = rng.uniform(-1.0, 1.0, shape)
    if field == "complex":
        arr = arr + 1j * rng.uniform(-1.0, 1.0, shape)
    return GradedMatrix(arr, n, n_prime, p, p_prime, field)


def _common_field(A: GradedMatrix, B: GradedMatrix) -> str:
    if A.field != B.field:
        raise FieldError(f"cannot combine {A.field} and {B.field} matrices")
    return A.field


def add(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    if A.grading != B.grading:
        raise DimensionError(f"cannot add {A.grading} and {B.grading}")
    field = _common_field(A, B)
    return GradedMatrix(A.entries + B.entries, *A.grading, field=field)


def scale(lam, A: GradedMatrix) -> GradedMatrix:
    if isinstance(lam, complex) and lam.imag != 0 and A.field == "real":
        raise FieldError("complex scalar applied to a real matrix")
    if A.field == "real":
        lam = float(np.real(lam))
    return GradedMatrix(lam * A.entries, *A.grading, field=A.field)


def ordinary_mul(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """Ordinary matrix product; ``A``'s column slice must be ``B``'s row slice."""
    if (A.n_prime, A.p_prime) != (B.n, B.p):
        raise DimensionError(
            f"inner index spaces differ: ({A.n_prime}, {A.p_prime}) vs ({B.n}, {B.p})"
        )
    field = _common_field(A, B)
    return GradedMatrix(A.entries @ B.entries, A.n, B.n_prime, A.p, B.p_prime, field)


@lru_cache(maxsize=None)
def _splits(n: int, p: int, q: int, weighted: bool):
    """Index table of all ways to write ``alpha`` (degree p+q) as ``beta + gamma``.

    Returns arrays ``(i_alpha, i_beta, i_gamma, coef)`` with ranks in the
    respective slices; ``coef`` is ``binom(alpha, beta)`` when ``weighted``
    and 1 otherwise.
    """
    ia, ib, ig, coef = [], [], [], []
    for i, alpha in enumerate(mi.enumerate_slice(n, p + q)):
        for j, beta in enumerate(mi.enumerate_slice(n, p)):
            if not all(b <= a for a, b in zip(alpha, beta)):
                continue
            gamma = tuple(a - b for a, b in zip(alpha, beta))
            ia.append(i)
            ib.append(j)
            ig.append(mi.rank(gamma))
            coef.append(float(mi.multibinomial(alpha, beta)) if weighted else 1.0)
    out = tuple(np.array(x, dtype=int) for x in (ia, ib, ig)) + (np.array(coef),)
    for arr in out:
        arr.setflags(write=False)
    return out


def _check_odot(A: GradedMatrix, B: GradedMatrix) -> str:
    if (A.n, A.n_prime) != (B.n, B.n_prime):
        raise DimensionError(
            f"odot needs equal index dimensions, got {(A.n, A.n_prime)} and {(B.n, B.n_prime)}"
        )
    return _common_field(A, B)


def odot(A: GradedMatrix, B: GradedMatrix) -> GradedMatrix:
    """The graded odot product ``A (.) B``."""
    field = _check_odot(A, B)
    ra, rb, rg, rc = _splits(A.n, A.p, B.p, True)
    ca, cb, cg, _ = _splits(A.n_prime, A.p_prime, B.p_prime, False)
    terms = rc[:, None] * A.entries[np.ix_(rb, cb)] * B.entries[np.ix_(rg, cg)]
    out = zeros(A.n, A.n_prime, A.p + B.p, A.p_prime + B.p_prime, field).entries.copy()
    np.add.at(out, (ra[:, None], ca[None, :]), terms)
    return GradedMatrix(out, A.n, A.n_prime, A.p + B.p, A.p_prime + B.p_prime, field)


def odot_operator(B: GradedMatrix, p: int, p_prime: int) -> np.ndarray:
    """Matrix of the linear map ``A -> A (.) B`` on ``M(p, p')``.

    Acts on row-major flattened entries: ``(A (.) B).entries.ravel() ==
    odot_operator(B, p, p') @ A.entries.ravel()``.
    """
    ra, rb, rg, rc = _splits(B.n, p, B.p, True)
    ca, cb, cg, _ = _splits(B.n_prime, p_prime, B.p_prime, False)
    out_cols = mi.slice_dim(B.n_prime, p_prime + B.p_prime)
    in_cols = mi.slice_dim(B.n_prime, p_prime)
    out_rows = mi.slice_dim(B.n, p + B.p)
    in_rows = mi.slice_dim(B.n, p)
    L = np.zeros((out_rows * out_cols, in_rows * in_cols), dtype=B.entries.dtype)
    vals = rc[:, None] * B.entries[np.ix_(rg, cg)]
    rows = ra[:, None] * out_cols + ca[None, :]
    cols = rb[:, None] * in_cols + cb[None, :]
    np.add.at(L, (rows, cols), vals)
    return L


def odot_power(A: GradedMatrix, m: int) -> GradedMatrix:
    """``A^{(m)}``; ``m = 0`` gives the unit ``[1]`` of degree (0, 0)."""
    if m < 0:
        raise ValueError("odot powers need m >= 0")
    out = unit(A.n, A.n_prime, A.field)
    for _ in range(m):
        out = odot(out, A)
    return out


def h_power_closed(h: GradedMatrix, m: int) -> GradedMatrix:
    """``h^{(m)}`` for a row ``h`` in ``M(0, 1)``: entries ``(m! / alpha'!) h^alpha'``."""
    if (h.p, h.p_prime) != (0, 1):
        raise DimensionError("h must lie in M(0, 1)")
    cols = mi.enumerate_slice(h.n_prime, m)
    vec = h.entries[0]
    vals = [mi.multinomial(m, a) * np.prod(vec ** np.array(a)) for a in cols]
    return GradedMatrix(np.array(vals).reshape(1, -1), h.n, h.n_prime, 0, m, h.field)


def v_power_closed(v: GradedMatrix, m: int) -> GradedMatrix:
    """``v^{(m)}`` for a column ``v`` in ``M(1, 0)``: entries ``m! v^alpha``."""
    if (v.p, v.p_prime) != (1, 0):
        raise DimensionError("v must lie in M(1, 0)")
    rows = mi.enumerate_slice(v.n, m)
    vec = v.entries[:, 0]
    fact = float(mi.multifactorial((m,)))
    vals = [fact * np.prod(vec ** np.array(a)) for a in rows]
    return GradedMatrix(np.array(vals).reshape(-1, 1), v.n, v.n_prime, m, 0, v.field)


def allclose(A: GradedMatrix, B: GradedMatrix, rtol: float = 1e-9, atol: float = 1e-12) -> bool:
    """Tolerance equality: ``|A - B| <= atol + rtol * max|B|`` entrywise, same grading."""
    if A.grading != B.grading:
        return False
    scale_ = max(np.max(np.abs(B.entries), initial=0.0), np.max(np.abs(A.entries), initial=0.0))
    return bool(np.all(np.abs(A.entries - B.entries) <= atol + rtol * scale_))
