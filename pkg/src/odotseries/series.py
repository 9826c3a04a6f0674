"""Truncated power series in n variables stored as homogeneous blocks.

A series ``sum_alpha x^alpha a_alpha`` with ``a_alpha`` in ``M(0, q')`` is
rewritten as ``sum_m x^{(m)}/m! A(m)`` with ``A(m)`` in ``M(m, q')``.
Because ``(x^{(m)}/m!)_alpha = x^alpha / alpha!``, the blocks are
``A(m)[alpha, alpha'] = alpha! * a[alpha, alpha']``.

The radius ``R = 1 / limsup ||A(m)||_rho^{1/m}`` guarantees absolute
convergence for ``||h||_conj < R``; above ``R * n**((rho-1)/rho)`` some
point of each sphere diverges.  Between the two sits a layer where neither
is guaranteed, and :func:`converges_at` says ``unknown`` there unless the
terms themselves give a witness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from . import multiindex as mi
from .graded_matrix import GradedMatrix, h_power_closed, ordinary_mul, row_vector, zeros
from .norms import as_rho, log_rho_norm, point_norm

__all__ = [
    "CoefficientMap",
    "BlockSeries",
    "RadiusEstimate",
    "ConvergenceVerdict",
    "WitnessReport",
    "from_coefficients",
    "to_coefficients",
    "geometric_coefficients",
    "one_variable_coefficients",
    "evaluate",
    "block_norms",
    "radius_estimate",
    "term_sums",
    "converges_at",
    "layer_factor",
    "indeterminacy_layer",
    "layer_witness_scan",
    "sphere_point",
]

CONVERGED = "converged_certified"
DIVERGED = "diverged_certified"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class CoefficientMap:
    """Sparse monomial coefficients ``(alpha, alpha') -> a``."""

    n: int
    n_prime: int
    q_prime: int
    terms: Mapping[tuple[tuple[int, ...], tuple[int, ...]], complex]
    field: str = "real"

    def __post_init__(self):
        clean = {}
        for (alpha, alpha_p), value in self.terms.items():
            alpha = mi.multi_index(alpha)
            alpha_p = mi.multi_index(alpha_p)
            if len(alpha) != self.n:
                raise mi.DimensionError(f"alpha {alpha} does not have length n={self.n}")
            if len(alpha_p) != self.n_prime:
                raise mi.DimensionError(f"alpha' {alpha_p} does not have length n'={self.n_prime}")
            if sum(alpha_p) != self.q_prime:
                raise ValueError(f"alpha' {alpha_p} does not have degree q'={self.q_prime}")
            if (alpha, alpha_p) in clean:
                raise KeyError(f"duplicate term {(alpha, alpha_p)}")
            if self.field == "real":
                if np.imag(value) != 0:
                    raise ValueError(f"complex coefficient for {(alpha, alpha_p)} in a real series")
                value = float(np.real(value))
            else:
                value = complex(value)
            clean[(alpha, alpha_p)] = value
        object.__setattr__(self, "terms", clean)

    @property
    def max_degree(self) -> int:
        return max((sum(a) for a, _ in self.terms), default=0)


@dataclass(frozen=True)
class BlockSeries:
    """Blocks ``A(0), ..., A(M)`` with ``A(m)`` in ``M_{n,n'}(m, q')``."""

    n: int
    n_prime: int
    q_prime: int
    blocks: tuple[GradedMatrix, ...]
    field: str = "real"

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise ValueError("a series needs at least the block A(0)")
        for m, A in enumerate(self.blocks):
            if A.grading != (self.n, self.n_prime, m, self.q_prime):
                raise mi.DimensionError(f"block {m} has grading {A.grading}")
            if A.field != self.field:
                raise ValueError(f"block {m} is {A.field}, series is {self.field}")

    @property
    def M(self) -> int:
        return len(self.blocks) - 1


def from_coefficients(c: CoefficientMap, M: int | None = None) -> BlockSeries:
    """Homogeneous blocks of the monomial series, truncated at degree ``M``."""
    M = c.max_degree if M is None else M
    if c.max_degree > M:
        raise ValueError(f"coefficients reach degree {c.max_degree} > truncation {M}")
    arrays = [zeros(c.n, c.n_prime, m, c.q_prime, c.field).entries.copy() for m in range(M + 1)]
    for (alpha, alpha_p), value in c.terms.items():
        arrays[sum(alpha)][mi.rank(alpha), mi.rank(alpha_p)] = mi.multifactorial(alpha) * value
    blocks = [GradedMatrix(a, c.n, c.n_prime, m, c.q_prime, c.field) for m, a in enumerate(arrays)]
    return BlockSeries(c.n, c.n_prime, c.q_prime, tuple(blocks), c.field)


def to_coefficients(s: BlockSeries) -> CoefficientMap:
    """Inverse of :func:`from_coefficients`; zero entries are dropped."""
    terms = {}
    for A in s.blocks:
        for i, alpha in enumerate(A.row_indices()):
            fact = mi.multifactorial(alpha)
            for j, alpha_p in enumerate(A.col_indices()):
                if A.entries[i, j] != 0:
                    terms[(alpha, alpha_p)] = A.entries[i, j] / fact
    return CoefficientMap(s.n, s.n_prime, s.q_prime, terms, s.field)


def geometric_coefficients(n: int, M: int) -> CoefficientMap:
    """``a_alpha = |alpha|! / alpha!``, i.e. ``sum_m (x_1 + ... + x_n)^m``, up to degree M."""
    terms = {}
    for m in range(M + 1):
        for alpha in mi.enumerate_slice(n, m):
            terms[(alpha, (0,))] = float(mi.multinomial(m, alpha))
    return CoefficientMap(n, 1, 0, terms)


def one_variable_coefficients(coeffs, field: str = "real") -> CoefficientMap:
    """``sum_m coeffs[m] x^m`` as a scalar series in one variable."""
    terms = {((m,), (0,)): c for m, c in enumerate(coeffs) if c != 0}
    return CoefficientMap(1, 1, 0, terms, field)


def _point(s: BlockSeries, h) -> GradedMatrix:
    h = np.asarray(h)
    if h.ndim != 1 or len(h) != s.n:
        raise mi.DimensionError(f"point has shape {h.shape}, expected ({s.n},)")
    if np.iscomplexobj(h) and s.field == "real":
        h = h.astype(np.complex128)
    elif s.field == "complex":
        h = h.astype(np.complex128)
    else:
        h = h.astype(np.float64)
    return row_vector(h, n_prime=s.n, n=s.n)


def _blocks_in(s: BlockSeries, field: str):
    return [A.astype(field) for A in s.blocks]


def evaluate(s: BlockSeries, h) -> GradedMatrix:
    """Value of the truncated series at ``h``: ``sum_m (h^{(m)}/m!) A(m)`` in ``M(0, q')``."""
    x = _point(s, h)
    total = zeros(s.n, s.n_prime, 0, s.q_prime, x.field).entries.copy()
    for m, A in enumerate(_blocks_in(s, x.field)):
        hm = h_power_closed(x, m)
        hm = GradedMatrix(hm.entries / math.factorial(m), s.n, s.n, 0, m, x.field)
        total += ordinary_mul(hm, A).entries
    return GradedMatrix(total, s.n, s.n_prime, 0, s.q_prime, x.field)


def block_norms(s: BlockSeries, rho) -> list[float]:
    rho = as_rho(rho)
    return [math.exp(v) for v in (log_rho_norm(A, rho) for A in s.blocks)]


@dataclass(frozen=True)
class RadiusEstimate:
    """Finite-data estimate of ``r = limsup ||A(m)||^{1/m}`` and ``R = 1/r``.

    ``per_block_roots[m]`` is ``||A(m)||^{1/m}`` (``nan`` at m = 0) and
    ``window`` lists the degrees the maximum was taken over.
    """

    r_hat: float
    R_hat: float
    per_block_roots: tuple[float, ...]
    window: tuple[int, ...]
    rho: float


def radius_estimate(s: BlockSeries, rho, window: int | None = None) -> RadiusEstimate:
    """Estimate the radius from the trailing nonzero blocks.

    By default the window is the last half of the nonzero blocks of degree
    ``>= 1``, but at least 3 of them (or all, if fewer exist).
    """
    rho = as_rho(rho)
    if window is not None and not 1 <= window <= max(s.M, 1):
        raise ValueError(f"window must lie in [1, M={s.M}], got {window}")
    logs = [log_rho_norm(A, rho) for A in s.blocks]
    roots = [math.nan] + [math.exp(logs[m] / m) for m in range(1, len(logs))]
    nonzero = [m for m in range(1, len(logs)) if logs[m] > -math.inf]
    if not nonzero:
        return RadiusEstimate(0.0, math.inf, tuple(roots), (), rho.value)
    w = max(3, len(nonzero) // 2) if window is None else window
    tail = tuple(nonzero[-w:])
    r = max(roots[m] for m in tail)
    R = math.inf if r == 0 else 1.0 / r
    return RadiusEstimate(r, R, tuple(roots), tail, rho.value)


def term_sums(s: BlockSeries, h) -> tuple[np.ndarray, np.ndarray]:
    """Per-degree sums at ``h`` for every output component.

    Returns ``(absolute, grouped)``, both of shape ``(M+1, dim(n', q'))``:
    ``absolute[m, j] = sum_{|alpha|=m} |h^alpha a[alpha, j]|`` is the
    multi-index absolute series, while ``grouped[m, j] = |H_m(h)_j|`` is the
    modulus of the whole homogeneous part.
    """
    h = np.asarray(h)
    absolute = np.zeros((s.M + 1, s.blocks[0].shape[1]))
    grouped = np.zeros_like(absolute)
    for m, A in enumerate(s.blocks):
        alphas = np.array(mi.enumerate_slice(s.n, m))
        mono = np.prod(h[None, :] ** alphas, axis=1)
        inv_fact = np.array([1.0 / mi.multifactorial(a) for a in mi.enumerate_slice(s.n, m)])
        weighted = (mono * inv_fact)[:, None] * A.entries
        absolute[m] = np.abs(weighted).sum(axis=0)
        grouped[m] = np.abs(weighted.sum(axis=0))
    return absolute, grouped


@dataclass
class ConvergenceVerdict:
    """Outcome of :func:`converges_at`.

    ``status`` is one of ``converged_certified``, ``diverged_certified`` or
    ``unknown``.  ``certificate`` holds the numbers behind it: the ratio
    and tail bound for convergence, the witness component and its term
    sums for divergence.  ``components`` are the partial sums of the
    absolute series per output component; ``grouped_components`` the same
    for the degree-grouped series, kept apart so the two notions can be
    compared.
    """

    status: str
    certificate: dict
    components: list[float]
    grouped_components: list[float]
    grouped_status: str = UNKNOWN
    point_norm: float = math.nan


def _growth_witness(sums: np.ndarray, window: int):
    """First component whose last ``window`` degree sums are positive and non-decreasing."""
    if sums.shape[0] < window:
        return None
    tail = sums[-window:]
    for j in range(sums.shape[1]):
        col = tail[:, j]
        if col[0] > 0 and np.all(np.diff(col) >= 0):
            return j, col
    return None


def converges_at(
    s: BlockSeries,
    h,
    rho,
    *,
    margin: float = 1e-6,
    divergence_window: int = 8,
    window: int | None = None,
    estimate: RadiusEstimate | None = None,
) -> ConvergenceVerdict:
    """Classify absolute convergence of the series at ``h``.

    Convergence is certified when ``||h||_conj * r_hat < 1 - margin``.  The
    tail beyond the stored blocks is bounded by assuming
    ``||A(m)|| <= K r_hat^m`` with ``K`` fitted to the stored blocks, so the
    certificate is only as good as the radius estimate.  Divergence is
    certified only by a direct witness: a component whose per-degree
    absolute sums stay positive and non-decreasing over the last
    ``divergence_window`` degrees.  Anything else is ``unknown``.
    """
    rho = as_rho(rho)
    conj = rho.conjugate()
    x = _point(s, h).entries[0]
    est = estimate if estimate is not None else radius_estimate(s, rho, window)
    hn = point_norm(x, conj)
    absolute, grouped = term_sums(s, x)
    partial = absolute.sum(axis=0)
    grouped_partial = grouped.sum(axis=0)
    t = hn * est.r_hat

    grouped_status = UNKNOWN
    if _growth_witness(grouped, divergence_window) is not None:
        grouped_status = DIVERGED

    if t < 1.0 - margin:
        # each component of |h^{(m)}/m! A(m)| is bounded by q'!^{1-1/rho} ||h||^m ||A(m)||
        norms = block_norms(s, rho)
        comp = math.exp((1.0 - 1.0 / rho.value) * math.lgamma(s.q_prime + 1)) if not rho.is_inf \
            else math.factorial(s.q_prime)
        K = max(
            (norms[m] / est.r_hat**m for m in range(1, len(norms)) if norms[m] > 0),
            default=0.0,
        ) if est.r_hat > 0 else 0.0
        tail = comp * K * t ** (s.M + 1) / (1.0 - t) if t > 0 else 0.0
        cert = {
            "ratio": t,
            "r_hat": est.r_hat,
            "point_norm": hn,
            "tail_bound": tail,
            "total_bound": [float(v + tail) for v in partial],
        }
        return ConvergenceVerdict(
            CONVERGED, cert, partial.tolist(), grouped_partial.tolist(), CONVERGED, hn
        )

    witness = _growth_witness(absolute, divergence_window)
    if witness is not None:
        j, col = witness
        cert = {
            "component": list(mi.unrank(s.n_prime, s.q_prime, j)),
            "degrees": list(range(s.M + 1 - divergence_window, s.M + 1)),
            "term_sums": col.tolist(),
            "ratio": t,
            "point_norm": hn,
        }
        return ConvergenceVerdict(
            DIVERGED, cert, partial.tolist(), grouped_partial.tolist(), grouped_status, hn
        )

    cert = {"ratio": t, "point_norm": hn, "last_term_sums": absolute[-1].tolist()}
    return ConvergenceVerdict(
        UNKNOWN, cert, partial.tolist(), grouped_partial.tolist(), grouped_status, hn
    )


def layer_factor(n: int, rho) -> float:
    """``n**((rho-1)/rho)``, which is ``n`` at rho = inf and 1 at rho = 1."""
    rho = as_rho(rho)
    if rho.is_inf:
        return float(n)
    return float(n) ** ((rho.value - 1.0) / rho.value)


def indeterminacy_layer(s: BlockSeries, rho, window: int | None = None) -> tuple[float, float]:
    """The shell ``[R_hat, R_hat * n**((rho-1)/rho)]`` of conj-norms with no guarantee."""
    est = radius_estimate(s, rho, window)
    return est.R_hat, est.R_hat * layer_factor(s.n, rho)


def sphere_point(direction, radius: float, rho) -> np.ndarray:
    """Rescale ``direction`` to l_rho norm ``radius``."""
    direction = np.asarray(direction)
    nrm = point_norm(direction, rho)
    if nrm == 0:
        raise ValueError("zero direction")
    return direction * (radius / nrm)


@dataclass
class WitnessReport:
    R1: float
    layer: tuple[float, float]
    diagonal: np.ndarray
    diagonal_verdict: ConvergenceVerdict
    samples: list[np.ndarray] = dc_field(default_factory=list)
    sample_verdicts: list[ConvergenceVerdict] = dc_field(default_factory=list)

    @property
    def beyond_layer(self) -> bool:
        return self.R1 > self.layer[1]


def layer_witness_scan(
    s: BlockSeries,
    rho,
    R1: float,
    k: int = 16,
    *,
    seed: int | None = 0,
    window: int | None = None,
    **verdict_opts,
) -> WitnessReport:
    """Verdicts on the conj-sphere of radius ``R1``.

    Checks the diagonal point ``R1 * n**(-1/conj) * (1, ..., 1)`` and ``k``
    random points of the same conj-norm.
    """
    if R1 <= 0:
        raise ValueError("R1 must be positive")
    rho = as_rho(rho)
    conj = rho.conjugate()
    est = radius_estimate(s, rho, window)
    layer = (est.R_hat, est.R_hat * layer_factor(s.n, rho))
    diag = sphere_point(np.ones(s.n), R1, conj)
    diag_v = converges_at(s, diag, rho, estimate=est, **verdict_opts)
    rng = np.random.default_rng(seed)
    samples, verdicts = [], []
    for _ in range(k):
        d = rng.standard_normal(s.n)
        if s.field == "complex":
            d = d + 1j * rng.standard_normal(s.n)
        pt = sphere_point(d, R1, conj)
        samples.append(pt)
        verdicts.append(converges_at(s, pt, rho, estimate=est, **verdict_opts))
    return WitnessReport(R1, layer, diag, diag_v, samples, verdicts)
