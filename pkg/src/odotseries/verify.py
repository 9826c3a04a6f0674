"""Randomized checks of the algebraic laws and norm inequalities.

Each check draws random instances, evaluates both sides and records the
worst relative excess.  Used by the ``verify`` command and the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import graded_matrix as gm
from . import multiindex as mi
from .norms import as_rho, point_norm, rho_norm

RHOS = (1.0, 1.5, 2.0, 3.0, math.inf)


@dataclass
class CheckResult:
    name: str
    instances: int
    violations: int
    worst: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def line(self) -> str:
        mark = "PASS" if self.ok else "FAIL"
        return (
            f"[{mark}] {self.name}: {self.instances} instances, "
            f"{self.violations} violations, worst excess {self.worst:.3e} (tol {self.tolerance:g})"
        )


class _Tally:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.count = self.bad = 0
        self.worst = 0.0

    def close(self, lhs: gm.GradedMatrix, rhs: gm.GradedMatrix):
        """Record a tolerance equality ``lhs == rhs``."""
        self.count += 1
        scale = max(np.abs(lhs.entries).max(initial=0), np.abs(rhs.entries).max(initial=0), 1e-300)
        exc = float(np.abs(lhs.entries - rhs.entries).max(initial=0)) / scale
        if lhs.grading != rhs.grading:
            exc = math.inf
        self.worst = max(self.worst, exc)
        if exc > self.tol:
            self.bad += 1

    def leq(self, lhs: float, rhs: float):
        """Record ``lhs <= rhs`` up to relative tolerance."""
        self.count += 1
        exc = (lhs - rhs) / max(abs(rhs), 1e-300) if lhs > rhs else 0.0
        self.worst = max(self.worst, exc)
        if exc > self.tol:
            self.bad += 1

    def result(self) -> CheckResult:
        return CheckResult(self.name, self.count, self.bad, self.worst, self.tol)


def _dims(rng, max_dim=3, max_deg=3):
    return (int(rng.integers(1, max_dim + 1)), int(rng.integers(1, max_dim + 1)),
            int(rng.integers(0, max_deg + 1)), int(rng.integers(0, max_deg + 1)))


def _nonzero(rng, *grading, field="real"):
    while True:
        A = gm.random_graded(rng, *grading, field=field)
        if not A.is_zero():
            return A


def check_algebra(rng, count=200, field="real", tol=1e-9) -> list[CheckResult]:
    """Commutativity, distributivity, associativity, scalars and the two mixed laws."""
    t = {k: _Tally(f"{k} ({field})", tol) for k in
         ("commutativity", "distributivity", "associativity", "scalar", "mixed A(B.H)", "mixed (E.V)A")}
    for _ in range(count):
        n, n2, p, pp = _dims(rng)
        q, qq, r, rr = (int(x) for x in rng.integers(0, 4, 4))
        A = gm.random_graded(rng, n, n2, p, pp, field)
        A2 = gm.random_graded(rng, n, n2, p, pp, field)
        B = gm.random_graded(rng, n, n2, q, qq, field)
        C = gm.random_graded(rng, n, n2, r, rr, field)
        lam = rng.uniform(-2, 2) + (1j * rng.uniform(-2, 2) if field == "complex" else 0)
        t["commutativity"].close(gm.odot(A, B), gm.odot(B, A))
        t["distributivity"].close(gm.odot(A + A2, C), gm.odot(A, C) + gm.odot(A2, C))
        t["associativity"].close(gm.odot(gm.odot(A, B), C), gm.odot(A, gm.odot(B, C)))
        t["scalar"].close(gm.odot(lam * A, B), lam * gm.odot(A, B))

        # A(B (.) H) = (AB) (.) H with H in M(0, s)
        n0, s_ = int(rng.integers(1, 4)), int(rng.integers(0, 4))
        Al = gm.random_graded(rng, n0, n, pp, q, field)
        H = gm.random_graded(rng, n, n2, 0, s_, field)
        lhs = Al @ gm.odot(B, H)
        rhs = gm.odot(Al @ B, H.retag(n=n0))
        t["mixed A(B.H)"].close(lhs, rhs)

        # (E_k (.) V) A = A (.) V with V in M(p, 0)
        k, pv = int(rng.integers(0, 4)), int(rng.integers(0, 4))
        V = gm.random_graded(rng, n, n, pv, 0, field)
        Ak = gm.random_graded(rng, n, n2, k, qq, field)
        lhs = gm.odot(gm.identity(n, k, field), V) @ Ak
        rhs = gm.odot(Ak, V.retag(n_prime=n2))
        t["mixed (E.V)A"].close(lhs, rhs)
    return [x.result() for x in t.values()]


def check_closed_powers(rng, max_m=6, max_n=3, tol=1e-12, field="real") -> list[CheckResult]:
    th = _Tally(f"closed form h^(m) ({field})", tol)
    tv = _Tally(f"closed form v^(m) ({field})", tol)
    for n in range(1, max_n + 1):
        h = gm.random_graded(rng, n, n, 0, 1, field)
        v = gm.random_graded(rng, n, n, 1, 0, field)
        for m in range(max_m + 1):
            th.close(gm.h_power_closed(h, m), gm.odot_power(h, m))
            tv.close(gm.v_power_closed(v, m), gm.odot_power(v, m))
    return [th.result(), tv.result()]


def check_norm_axioms(rng, count=200, tol=1e-9) -> list[CheckResult]:
    t_def = _Tally("norm definiteness", 0.0)
    t_hom = _Tally("norm homogeneity", tol)
    t_tri = _Tally("norm triangle inequality", tol)
    for i in range(count):
        rho = RHOS[i % len(RHOS)]
        field = "complex" if i % 2 else "real"
        g = _dims(rng)
        A = gm.random_graded(rng, *g, field=field)
        B = gm.random_graded(rng, *g, field=field)
        lam = rng.uniform(-3, 3) + (1j * rng.uniform(-3, 3) if field == "complex" else 0)
        t_def.leq(float(rho_norm(gm.zeros(*g, field=field), rho) != 0), 0.0)
        t_def.leq(float(rho_norm(A, rho) == 0), 0.0)
        na, nla = rho_norm(A, rho), rho_norm(lam * A, rho)
        t_hom.leq(abs(nla - abs(lam) * na), tol * abs(lam) * na)
        t_tri.leq(rho_norm(A + B, rho), rho_norm(A, rho) + rho_norm(B, rho))
    return [t_def.result(), t_hom.result(), t_tri.result()]


def check_submultiplicative(rng, count=1000, rhos=RHOS, tol=1e-12) -> CheckResult:
    t = _Tally("||A.B|| <= ||A|| ||B||", tol)
    for rho in rhos:
        for i in range(count):
            field = "complex" if i % 2 else "real"
            n, n2, p, pp = _dims(rng)
            q, qq = (int(x) for x in rng.integers(0, 4, 2))
            A = _nonzero(rng, n, n2, p, pp, field=field)
            B = _nonzero(rng, n, n2, q, qq, field=field)
            t.leq(rho_norm(gm.odot(A, B), rho), rho_norm(A, rho) * rho_norm(B, rho))
    return t.result()


def prop3_constant(q: int, q_prime: int, rho) -> float:
    """``(q!)^(2 - 1/rho) (q'!)^(2/rho - 1)``."""
    rho = as_rho(rho)
    inv = 0.0 if rho.is_inf else 1.0 / rho.value
    return math.factorial(q) ** (2 - inv) * math.factorial(q_prime) ** (2 * inv - 1)


def slice_factor(n_prime: int, q_prime: int, rho) -> float:
    """``dim(n', q')**max(0, 2/rho - 1)``: the extra factor the ordinary-product bound needs for rho < 2.

    Without it the bound fails for every rho < 2, e.g. rho = 1, ``A = [1]``
    in ``M(0, 0)`` and ``B = (1, 1)`` in ``M_{1,2}(0, 1)`` give
    ``||AB||_1 = 2`` against a right-hand side of 1.
    """
    rho = as_rho(rho)
    if rho.is_inf:
        return 1.0
    return mi.slice_dim(n_prime, q_prime) ** max(0.0, 2.0 / rho.value - 1.0)


def check_ordinary_product(rng, count=1000, rhos=RHOS, tol=1e-12, with_slice_factor=False) -> CheckResult:
    name = "||A(p,q)B(q,q')|| <= (q!)^(2-1/rho)(q'!)^(2/rho-1)||A|| ||B||_conj"
    if with_slice_factor:
        name += " * dim(n',q')^max(0,2/rho-1)"
    t = _Tally(name, tol)
    for rho in rhos:
        conj = as_rho(rho).conjugate()
        for i in range(count):
            field = "complex" if i % 2 else "real"
            n0, n1, n2 = (int(x) for x in rng.integers(1, 4, 3))
            p, q, qq = (int(x) for x in rng.integers(0, 4, 3))
            A = gm.random_graded(rng, n0, n1, p, q, field)
            B = gm.random_graded(rng, n1, n2, q, qq, field)
            rhs = prop3_constant(q, qq, rho) * rho_norm(A, rho) * rho_norm(B, conj)
            if with_slice_factor:
                rhs *= slice_factor(n2, qq, rho)
            t.leq(rho_norm(A @ B, rho), rhs)
    return t.result()


def h_power_over_factorial(h: gm.GradedMatrix, m: int) -> gm.GradedMatrix:
    P = gm.h_power_closed(h, m)
    return gm.GradedMatrix(P.entries / math.factorial(m), *P.grading, field=P.field)


def check_evaluation_bound(rng, count=1000, rhos=RHOS, tol=1e-12) -> CheckResult:
    t = _Tally("||(h^(m)/m! . E_k)A|| <= C(m+k,k)||h||_conj^m ||A||", tol)
    for rho in rhos:
        conj = as_rho(rho).conjugate()
        for i in range(count):
            field = "complex" if i % 2 else "real"
            n, n2 = (int(x) for x in rng.integers(1, 4, 2))
            m, k, qq = (int(x) for x in rng.integers(0, 5, 3))
            h = gm.random_graded(rng, n, n, 0, 1, field)
            A = gm.random_graded(rng, n, n2, m + k, qq, field)
            Mk = gm.odot(h_power_over_factorial(h, m), gm.identity(n, k, field))
            lhs = rho_norm(Mk @ A, rho)
            rhs = math.comb(m + k, k) * point_norm(h.entries, conj) ** m * rho_norm(A, rho)
            t.leq(lhs, rhs)
    return t.result()


def check_multilinear_bound(rng, count=1000, rhos=RHOS, tol=1e-12) -> CheckResult:
    t = _Tally("||(h1 . ... . hm)/m! A|| <= prod ||hi||_conj ||A||", tol)
    for rho in rhos:
        conj = as_rho(rho).conjugate()
        for i in range(count):
            field = "complex" if i % 2 else "real"
            n, n2 = (int(x) for x in rng.integers(1, 4, 2))
            m, qq = int(rng.integers(0, 5)), int(rng.integers(0, 4))
            P = gm.unit(n, n, field)
            bound = 1.0
            for _ in range(m):
                h = gm.random_graded(rng, n, n, 0, 1, field)
                P = gm.odot(P, h)
                bound *= point_norm(h.entries, conj)
            A = gm.random_graded(rng, n, n2, m, qq, field)
            lhs = rho_norm(gm.GradedMatrix(P.entries / math.factorial(m), *P.grading, field=field) @ A, rho)
            t.leq(lhs, bound * rho_norm(A, rho))
    return t.result()


def check_entry_formula(rng, max_m=4, max_k=4, tol=1e-12) -> CheckResult:
    """``(h^(m)/m! (.) E_k)[alpha, beta] = h^(beta-alpha) / (beta-alpha)!``."""
    t = _Tally("(h^(m)/m! . E_k) entry formula", tol)
    for n in (1, 2, 3):
        h = gm.random_graded(rng, n, n, 0, 1)
        hv = h.entries[0]
        for m in range(max_m + 1):
            for k in range(max_k + 1):
                got = gm.odot(h_power_over_factorial(h, m), gm.identity(n, k))
                want = np.zeros(got.shape)
                for i, a in enumerate(mi.enumerate_slice(n, k)):
                    for j, b in enumerate(mi.enumerate_slice(n, m + k)):
                        if mi.dominates(b, a):
                            d = mi.subtract(b, a)
                            want[i, j] = np.prod(hv ** np.array(d)) / mi.multifactorial(d)
                t.close(got, gm.GradedMatrix(want, *got.grading))
    return t.result()


def run_suite(seed: int = 7, algebra_count=200, inequality_count=1000) -> list[CheckResult]:
    """Every check above with independent seeded streams."""
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(11)]
    out = []
    out += check_algebra(streams[0], algebra_count, "real")
    out += check_algebra(streams[1], algebra_count, "complex")
    out += check_closed_powers(streams[2], field="real")
    out += check_closed_powers(streams[3], field="complex")
    out += check_norm_axioms(streams[4])
    out.append(check_submultiplicative(streams[5], inequality_count))
    out.append(check_ordinary_product(streams[6], inequality_count))
    out.append(check_evaluation_bound(streams[7], inequality_count))
    out.append(check_multilinear_bound(streams[8], inequality_count))
    out.append(check_entry_formula(streams[9]))
    out.append(check_ordinary_product(streams[10], inequality_count, with_slice_factor=True))
    return out
