"""Numerical estimates of two extremal constants.

``lambda(p, p', q, q')`` is the infimum of ``||A (.) B||_rho`` over unit
``A`` in ``M(p, p')`` and ``B`` in ``M(q, q')``; no closed form is known
beyond the one-variable case.  The multilinear operator norm of a block
``A(m)`` is the supremum of ``||(h^1 (.) ... (.) h^m)/m! A(m)||_rho`` over
points with unit conjugate norm.

Both are searched by multi-start derivative-free coordinate perturbation.
The objective is bilinear (resp. multilinear), so each sweep freezes all
factors but one and works with the explicit matrix of the remaining linear
map.  Every restart draws from its own spawned seed stream, so a result
depends only on ``(seed, restarts, iterations)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import multiindex as mi
from .graded_matrix import GradedMatrix, odot, odot_operator, row_vector, unit
from .norms import as_rho, flat_norm, flat_weights, rho_norm

__all__ = [
    "ExtremalProblem",
    "ExtremalResult",
    "lambda_estimate",
    "lambda_scalar_closed_form",
    "refine_lambda",
    "opnorm_estimate",
    "opnorm_value",
    "opnorm_root_sequence",
]


@dataclass(frozen=True)
class ExtremalProblem:
    n: int
    n_prime: int
    p: int
    p_prime: int
    q: int
    q_prime: int
    rho: float = 2.0
    field: str = "real"
    restarts: int = 64
    iterations: int = 2000
    seed: int = 0
    shrink: float = 0.7
    initial_step: float = 0.5
    min_step: float = 1e-10

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise ValueError("budget must be positive")
        if self.field not in ("real", "complex"):
            raise ValueError(f"unknown field {self.field!r}")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink factor must lie in (0, 1)")


@dataclass
class ExtremalResult:
    """Best value found and where.

    ``per_field`` keeps the optimum found on each searched field separately;
    ``value`` is the one for the problem's own field.
    """

    value: float
    argument: tuple
    trace: list[float]
    converged: bool
    field: str
    per_field: dict = dc_field(default_factory=dict)


def lambda_scalar_closed_form(p_prime: int, q_prime: int, rho) -> float:
    """``lambda`` for ``n = n' = 1``: ``binom(p'+q', p')**((1-rho)/rho)``.

    All matrices are 1x1 there, so the ratio ``||A (.) B|| / (||A|| ||B||)``
    does not depend on ``A`` or ``B``.
    """
    rho = as_rho(rho)
    b = math.comb(p_prime + q_prime, p_prime)
    if rho.is_inf:
        return 1.0 / b
    return b ** ((1.0 - rho.value) / rho.value)


def _random_vec(rng, size, field):
    x = rng.standard_normal(size)
    if field == "complex":
        x = x + 1j * rng.standard_normal(size)
    return x


class _Descent:
    """Coordinate perturbation with one shrinking step per factor.

    ``sign`` is +1 to minimise and -1 to maximise.  A factor's step grows by
    ``1/shrink`` on success (capped at 1) and shrinks by ``shrink`` on
    failure; the search is done once every step is below ``min_step``.
    """

    def __init__(self, rng, field, sign, shrink, step, min_step, factors):
        self.rng = rng
        self.field = field
        self.sign = sign
        self.shrink = shrink
        self.steps = [step] * factors
        self.min_step = min_step

    @property
    def done(self) -> bool:
        return max(self.steps) < self.min_step

    def stalled(self, i) -> bool:
        return self.steps[i] < self.min_step

    def propose(self, x, i):
        k = self.rng.integers(x.size)
        delta = self.steps[i] * (1.0 if self.rng.random() < 0.5 else -1.0)
        if self.field == "complex" and self.rng.random() < 0.5:
            delta = 1j * delta
        y = x.copy()
        y[k] += delta * max(np.abs(x).max(), 1e-300)
        return y

    def accept(self, new, old, i) -> bool:
        if self.sign * (new - old) < 0:
            self.steps[i] = min(self.steps[i] / self.shrink, 1.0)
            return True
        self.steps[i] *= self.shrink
        return False


def _lambda_restart(prob: ExtremalProblem, rng, field):
    rho = as_rho(prob.rho)
    wa = flat_weights(prob.n, prob.n_prime, prob.p, prob.p_prime, rho)
    wb = flat_weights(prob.n, prob.n_prime, prob.q, prob.q_prime, rho)
    wc = flat_weights(prob.n, prob.n_prime, prob.p + prob.q, prob.p_prime + prob.q_prime, rho)
    shape_a = (mi.slice_dim(prob.n, prob.p), mi.slice_dim(prob.n_prime, prob.p_prime))
    shape_b = (mi.slice_dim(prob.n, prob.q), mi.slice_dim(prob.n_prime, prob.q_prime))

    def wrap(x, shape, p, pp):
        return GradedMatrix(x.reshape(shape), prob.n, prob.n_prime, p, pp, field)

    a = _random_vec(rng, wa.size, field)
    b = _random_vec(rng, wb.size, field)
    a /= flat_norm(a, wa, rho)
    b /= flat_norm(b, wb, rho)

    def objective(L, x, wx):
        return flat_norm(L @ x, wc, rho) / flat_norm(x, wx, rho)

    desc = _Descent(rng, field, +1, prob.shrink, prob.initial_step, prob.min_step, 2)
    L_b = odot_operator(wrap(b, shape_b, prob.q, prob.q_prime), prob.p, prob.p_prime)
    best = objective(L_b, a, wa)
    it = 0
    turn = 0
    while it < prob.iterations and not desc.done:
        # one sweep on a with b frozen, then one on b with a frozen
        if turn == 0:
            L = odot_operator(wrap(b, shape_b, prob.q, prob.q_prime), prob.p, prob.p_prime)
            x, wx = a, wa
        else:
            L = odot_operator(wrap(a, shape_a, prob.p, prob.p_prime), prob.q, prob.q_prime)
            x, wx = b, wb
        for _ in range(max(2 * x.size, 4)):
            if it >= prob.iterations or desc.stalled(turn):
                break
            it += 1
            y = desc.propose(x, turn)
            ny = flat_norm(y, wx, rho)
            if ny == 0:
                desc.accept(best, best, turn)
                continue
            y /= ny
            val = objective(L, y, wx)
            if desc.accept(val, best, turn):
                x, best = y, val
        if turn == 0:
            a = x
        else:
            b = x
        turn ^= 1
    A = wrap(a, shape_a, prob.p, prob.p_prime)
    B = wrap(b, shape_b, prob.q, prob.q_prime)
    return best, (A, B), desc.done


def _run(restart_fn, prob, field, sign):
    streams = np.random.SeedSequence(prob.seed).spawn(prob.restarts)
    trace, best_val, best_arg, conv = [], None, None, True
    for ss in streams:
        val, arg, done = restart_fn(np.random.default_rng(ss), field)
        trace.append(val)
        if best_val is None or sign * (val - best_val) < 0:
            best_val, best_arg, conv = val, arg, done
    return best_val, best_arg, trace, conv


def lambda_estimate(prob: ExtremalProblem) -> ExtremalResult:
    """Upper estimate of ``lambda(p, p', q, q')`` from feasible unit pairs.

    For a complex problem the real sphere is searched as well; both optima
    are kept in ``per_field``.
    """
    fields = ["real"] if prob.field == "real" else ["real", "complex"]
    per_field = {}
    for fld in fields:
        val, arg, trace, conv = _run(
            lambda rng, f: _lambda_restart(prob, rng, f), prob, fld, +1
        )
        A, B = arg
        # report the value the returned pair actually attains
        val = rho_norm(odot(A, B), prob.rho) / (rho_norm(A, prob.rho) * rho_norm(B, prob.rho))
        per_field[fld] = ExtremalResult(val, (A, B), trace, conv, fld)
    res = per_field[prob.field]
    return ExtremalResult(
        res.value, res.argument, res.trace, res.converged, prob.field,
        {k: float(v.value) for k, v in per_field.items()},
    )


def refine_lambda(result: ExtremalResult, pairs, rho) -> ExtremalResult:
    """Lower the estimate if any of ``pairs`` attains a smaller ratio."""
    value, arg = result.value, result.argument
    for A, B in pairs:
        ratio = rho_norm(odot(A, B), rho) / (rho_norm(A, rho) * rho_norm(B, rho))
        if ratio < value:
            value, arg = ratio, (A, B)
    per_field = dict(result.per_field)
    per_field[result.field] = value
    return ExtremalResult(value, arg, result.trace, result.converged, result.field, per_field)


def _point_rows(hs, n, field):
    return [row_vector(np.asarray(h, dtype=complex if field == "complex" else float), n_prime=n, n=n)
            for h in hs]


def opnorm_value(A: GradedMatrix, hs, rho) -> float:
    """``||(h^1 (.) ... (.) h^m)/m! A||_rho`` for the points ``hs``."""
    m = A.p
    if len(hs) != m:
        raise ValueError(f"need {m} points, got {len(hs)}")
    rows = _point_rows(hs, A.n, A.field)
    P = unit(A.n, A.n, A.field)
    for r in rows:
        P = odot(P, r)
    out = GradedMatrix(P.entries / math.factorial(m), A.n, A.n, 0, m, A.field)
    return rho_norm(out @ A, rho)


def _opnorm_restart(A: GradedMatrix, prob: ExtremalProblem, rng, field):
    rho = as_rho(prob.rho)
    conj = rho.conjugate()
    m, n = A.p, A.n
    Af = A.astype(field)
    w_out = flat_weights(n, A.n_prime, 0, A.p_prime, rho)
    w_pt = np.ones(n)
    # the map is symmetric in its arguments, so every restart starts on the diagonal
    h = _random_vec(rng, n, field)
    h /= flat_norm(h, w_pt, conj)
    hs = [h.copy() for _ in range(m)]

    def linear_map(i):
        # h -> ((prod_{j != i} h^j) (.) h) A / m!
        P = unit(n, n, field)
        for j, h in enumerate(hs):
            if j != i:
                P = odot(P, row_vector(h, n_prime=n, n=n))
        L_P = odot_operator(P, 0, 1)
        return (Af.entries.T @ L_P) / math.factorial(m)

    desc = _Descent(rng, field, -1, prob.shrink, prob.initial_step, prob.min_step, m)
    L = linear_map(0)
    best = flat_norm(L @ hs[0], w_out, rho)
    it, i = 0, 0
    while it < prob.iterations and not desc.done:
        L = linear_map(i)
        x = hs[i]
        for _ in range(max(2 * n, 4)):
            if it >= prob.iterations or desc.stalled(i):
                break
            it += 1
            y = desc.propose(x, i)
            ny = flat_norm(y, w_pt, conj)
            if ny == 0:
                desc.accept(best, best, i)
                continue
            y /= ny
            val = flat_norm(L @ y, w_out, rho)
            if desc.accept(val, best, i):
                x, best = y, val
        hs[i] = x
        i = (i + 1) % m
    return best, tuple(h.copy() for h in hs), desc.done


def opnorm_estimate(prob: ExtremalProblem, A: GradedMatrix) -> ExtremalResult:
    """Certified lower bound on the multilinear operator norm of the block ``A``.

    ``A`` lies in ``M(m, q')``; the points live in F^n with the conjugate
    norm.  For ``m = 0`` the map is constant and the value is ``||A||_rho``.
    """
    rho = as_rho(prob.rho)
    if A.p == 0:
        v = rho_norm(A, rho)
        return ExtremalResult(v, (), [v], True, A.field, {A.field: v})
    if A.is_zero():
        return ExtremalResult(0.0, (), [0.0], True, A.field, {A.field: 0.0})
    fields = ["real"] if A.field == "real" else ["real", "complex"]
    per_field = {}
    for fld in fields:
        val, arg, trace, conv = _run(
            lambda rng, f: _opnorm_restart(A, prob, rng, f), prob, fld, -1
        )
        val = opnorm_value(A.astype(fld), arg, rho)
        per_field[fld] = ExtremalResult(val, arg, trace, conv, fld)
    res = per_field[A.field]
    return ExtremalResult(
        res.value, res.argument, res.trace, res.converged, A.field,
        {k: float(v.value) for k, v in per_field.items()},
    )


def opnorm_root_sequence(s, rho, restarts: int = 8, iterations: int = 400, seed: int = 0):
    """Rows ``(m, op_norm^{1/m}, rho_norm^{1/m})`` for ``m = 1 .. M``.

    Data for comparing the two root sequences; nothing about their limits
    is asserted here.
    """
    rho = as_rho(rho)
    rows = []
    for m in range(1, len(s.blocks)):
        A = s.blocks[m]
        prob = ExtremalProblem(
            s.n, s.n_prime, m, s.q_prime, 0, 0, rho=rho.value, field=s.field,
            restarts=restarts, iterations=iterations, seed=seed + m,
        )
        op = opnorm_estimate(prob, A).value
        rows.append((m, op ** (1.0 / m), rho_norm(A, rho) ** (1.0 / m)))
    return rows
