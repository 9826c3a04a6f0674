"""The weighted rho-norms on graded matrices.

For ``A`` in ``M(p, p')`` and ``1 <= rho < inf``::

    ||A||_rho = ( sum |A[alpha, alpha']|**rho / (alpha! * (p! p'!)**(rho - 1)) )**(1/rho)

and ``||A||_inf = max |A[alpha, alpha']| / (p! p'!)``.  The row factorial
``alpha!`` enters the weight, the column factorial ``alpha'!`` does not.
Points ``h`` in F^n are rows in ``M(0, 1)`` where every weight is 1, so
their norm is the plain l_rho norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import multiindex as mi
from .graded_matrix import GradedMatrix

__all__ = [
    "Rho",
    "as_rho",
    "conjugate",
    "rho_norm",
    "log_rho_norm",
    "log_weights",
    "flat_weights",
    "flat_norm",
    "point_norm",
]

INF = math.inf


@dataclass(frozen=True)
class Rho:
    """An exponent in [1, inf] stored together with its Hoelder conjugate.

    Keeping both values makes ``conjugate`` an exact involution.
    """

    value: float
    conj: float

    def __init__(self, value, conj=None):
        value = _parse(value)
        if conj is None:
            conj = INF if value == 1 else (1.0 if value == INF else value / (value - 1.0))
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "conj", float(conj))

    def conjugate(self) -> "Rho":
        return Rho(self.conj, self.value)

    @property
    def is_inf(self) -> bool:
        return self.value == INF

    def __float__(self):
        return self.value

    def __str__(self):
        return "inf" if self.is_inf else f"{self.value:g}"


def _parse(value) -> float:
    if isinstance(value, Rho):
        return value.value
    if isinstance(value, str):
        value = value.strip().lower()
        value = INF if value in ("inf", "infinity", "oo") else float(value)
    value = float(value)
    if math.isnan(value) or value < 1:
        raise ValueError(f"rho must lie in [1, inf], got {value}")
    return value


def as_rho(rho) -> Rho:
    return rho if isinstance(rho, Rho) else Rho(rho)


def conjugate(rho) -> Rho:
    """Hoelder conjugate: ``1/rho + 1/conj = 1``, with 1 and inf swapped."""
    return as_rho(rho).conjugate()


@lru_cache(maxsize=None)
def _log_row_factorials(n: int, p: int) -> np.ndarray:
    out = np.array([mi.log_multifactorial(a) for a in mi.enumerate_slice(n, p)])
    out.setflags(write=False)
    return out


def log_weights(n: int, n_prime: int, p: int, p_prime: int, rho) -> np.ndarray:
    """``log`` of the per-entry weights, broadcastable to the matrix shape.

    For finite rho the weight of entry (alpha, alpha') is
    ``1 / (alpha! (p! p'!)**(rho-1))``; for rho = inf every entry has
    weight ``1 / (p! p'!)`` applied to the absolute value rather than its power.
    """
    rho = as_rho(rho)
    lpp = math.lgamma(p + 1) + math.lgamma(p_prime + 1)
    if rho.is_inf:
        return np.full((1, 1), -lpp)
    return (-_log_row_factorials(n, p) - (rho.value - 1.0) * lpp)[:, None]


def log_rho_norm(A: GradedMatrix, rho) -> float:
    """Natural log of ``||A||_rho``; ``-inf`` for the zero matrix."""
    rho = as_rho(rho)
    mag = np.abs(A.entries)
    if not np.any(mag):
        return -INF
    lw = log_weights(*A.grading, rho)
    if rho.is_inf:
        return float(np.log(mag.max()) + lw[0, 0])
    with np.errstate(divide="ignore"):
        logs = rho.value * np.log(mag) + lw
    top = logs.max()
    return float((top + np.log(np.exp(logs - top).sum())) / rho.value)


def rho_norm(A: GradedMatrix, rho) -> float:
    """``||A||_rho``, computed directly when the weights fit a double, else in log space."""
    rho = as_rho(rho)
    mag = np.abs(A.entries)
    top = mag.max(initial=0.0)
    if top == 0.0:
        return 0.0
    lw = log_weights(*A.grading, rho)
    if rho.is_inf:
        return float(top * math.exp(lw[0, 0])) if lw[0, 0] > -700 else math.exp(log_rho_norm(A, rho))
    if lw.min() < -700 or lw.max() > 700:
        return math.exp(log_rho_norm(A, rho))
    s = float(((mag / top) ** rho.value * np.exp(lw)).sum())
    return top * s ** (1.0 / rho.value)


def flat_weights(n: int, n_prime: int, p: int, p_prime: int, rho) -> np.ndarray:
    """Linear weights for every entry of ``M(p, p')``, raveled row-major."""
    shape = (mi.slice_dim(n, p), mi.slice_dim(n_prime, p_prime))
    return np.broadcast_to(np.exp(log_weights(n, n_prime, p, p_prime, rho)), shape).ravel()


def flat_norm(x: np.ndarray, weights: np.ndarray, rho) -> float:
    """Norm of a flattened matrix given its flattened linear weights.

    Used by the optimizers, which work on raveled entries.  ``weights``
    comes from :func:`flat_weights`.
    """
    rho = as_rho(rho)
    mag = np.abs(x)
    if rho.is_inf:
        return float((mag * weights).max(initial=0.0))
    top = mag.max(initial=0.0)
    if top == 0.0:
        return 0.0
    return top * float(((mag / top) ** rho.value * weights).sum()) ** (1.0 / rho.value)


def point_norm(h, rho) -> float:
    """Plain l_rho norm of a point of F^n."""
    rho = as_rho(rho)
    h = np.abs(np.asarray(h).ravel())
    if rho.is_inf:
        return float(h.max(initial=0.0))
    top = h.max(initial=0.0)
    if top == 0.0:
        return 0.0
    return top * float(((h / top) ** rho.value).sum()) ** (1.0 / rho.value)
