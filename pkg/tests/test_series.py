import math

import numpy as np
import pytest

from odotseries import multiindex as mi
from odotseries import series as se
from odotseries.norms import conjugate, point_norm

CONVERGED, DIVERGED, UNKNOWN = "converged_certified", "diverged_certified", "unknown"


def monomial_sum(c: se.CoefficientMap, h):
    """Evaluate sum_alpha h^alpha a_alpha term by term."""
    cols = mi.enumerate_slice(c.n_prime, c.q_prime)
    out = np.zeros(len(cols), dtype=complex)
    for (alpha, alpha_p), a in c.terms.items():
        out[mi.rank(alpha_p)] += a * np.prod([x**k for x, k in zip(h, alpha)])
    return out


def random_map(rng, n, n_prime, q_prime, M, field="real", density=0.5):
    terms = {}
    for m in range(M + 1):
        for alpha in mi.enumerate_slice(n, m):
            for alpha_p in mi.enumerate_slice(n_prime, q_prime):
                if rng.random() < density:
                    v = rng.uniform(-1, 1)
                    if field == "complex":
                        v += 1j * rng.uniform(-1, 1)
                    terms[(alpha, alpha_p)] = v
    return se.CoefficientMap(n, n_prime, q_prime, terms, field)


@pytest.fixture(scope="module")
def geo2():
    return se.from_coefficients(se.geometric_coefficients(2, 20))


def test_from_coefficients_examples():
    s = se.from_coefficients(se.CoefficientMap(2, 1, 0, {((2, 0), (0,)): 5.0}))
    assert s.blocks[2][(2, 0), (0,)] == 10.0
    s = se.from_coefficients(se.CoefficientMap(2, 1, 0, {((0, 0), (0,)): 7.0}))
    assert s.blocks[0].entries.tolist() == [[7.0]]
    s = se.from_coefficients(se.CoefficientMap(2, 1, 0, {((1, 1), (0,)): 1.0}))
    assert s.blocks[2][(1, 1), (0,)] == 1.0


def test_coefficient_map_validation():
    with pytest.raises(ValueError):
        se.CoefficientMap(2, 1, 1, {((1, 0), (0,)): 1.0})
    with pytest.raises(mi.DimensionError):
        se.CoefficientMap(2, 1, 0, {((1,), (0,)): 1.0})
    with pytest.raises(ValueError):
        se.CoefficientMap(1, 1, 0, {((1,), (0,)): 1j})
    with pytest.raises(ValueError):
        se.from_coefficients(se.CoefficientMap(1, 1, 0, {((3,), (0,)): 1.0}), 2)


def test_representation_against_monomials():
    rng = np.random.default_rng(8)
    for trial in range(30):
        field = "complex" if trial % 3 == 0 else "real"
        n, n_prime, q_prime, M = int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(0, 3)), int(rng.integers(0, 7))
        c = random_map(rng, n, n_prime, q_prime, M, field)
        s = se.from_coefficients(c, M)
        for _ in range(20):
            h = rng.uniform(-1, 1, n)
            if field == "complex":
                h = h + 1j * rng.uniform(-1, 1, n)
            got = se.evaluate(s, h).entries[0]
            want = monomial_sum(c, h)
            assert np.max(np.abs(got - want)) <= 1e-10 * max(1.0, np.max(np.abs(want)))


def test_to_coefficients_roundtrip():
    rng = np.random.default_rng(3)
    c = random_map(rng, 2, 2, 1, 4)
    back = se.to_coefficients(se.from_coefficients(c))
    assert set(back.terms) == set(c.terms)
    for k, v in c.terms.items():
        assert back.terms[k] == pytest.approx(v, rel=1e-15)


def test_evaluate_examples():
    s = se.from_coefficients(se.geometric_coefficients(2, 2))
    assert se.evaluate(s, [0.1, 0.2]).entries[0, 0] == pytest.approx(1.39, rel=1e-14)
    z = se.from_coefficients(se.CoefficientMap(2, 1, 0, {}), 3)
    assert se.evaluate(z, [0.5, 0.5]).entries[0, 0] == 0
    s0 = se.from_coefficients(se.CoefficientMap(2, 1, 0, {((0, 0), (0,)): 4.0}))
    assert se.evaluate(s0, [9.0, 9.0]).entries[0, 0] == 4.0
    with pytest.raises(mi.DimensionError):
        se.evaluate(s, [1.0])


def test_geometric_block_norms_oracle(geo2):
    """||A(m)||_rho^rho = m! sum_{|alpha|=m} 1/alpha! = n^m, summed directly."""
    for rho in (1, 1.5, 2, 3):
        norms = se.block_norms(geo2, rho)
        for m in range(21):
            direct = sum(
                math.factorial(m) ** rho / (mi.multifactorial(a) * math.factorial(m) ** (rho - 1))
                for a in mi.enumerate_slice(2, m)
            ) ** (1 / rho)
            assert norms[m] == pytest.approx(direct, rel=1e-12)
            assert norms[m] == pytest.approx(2 ** (m / rho), rel=1e-12)
    assert se.block_norms(geo2, math.inf) == pytest.approx([1.0] * 21, rel=1e-12)


def test_radius_examples(geo2):
    assert se.radius_estimate(geo2, 1).R_hat == pytest.approx(0.5, abs=1e-12)
    assert se.radius_estimate(geo2, 2).R_hat == pytest.approx(2**-0.5, abs=1e-12)
    assert se.radius_estimate(geo2, math.inf).R_hat == pytest.approx(1.0, abs=1e-12)
    for M in (2, 3, 7):
        s = se.from_coefficients(se.geometric_coefficients(2, M))
        assert se.radius_estimate(s, 1).R_hat == pytest.approx(0.5, abs=1e-12)
    one = se.from_coefficients(se.one_variable_coefficients([3.0**m for m in range(21)]))
    for rho in (1, 2, math.inf):
        assert se.radius_estimate(one, rho).R_hat == pytest.approx(1 / 3, abs=1e-12)


def test_one_variable_partial_sums_bracket_radius():
    """Brute force: |h| = 0.34 gives growing partial sums, 0.33 gives bounded ones."""
    a = [3.0**m for m in range(400)]
    grow = np.cumsum([x * 0.34**m for m, x in enumerate(a)])
    stay = np.cumsum([x * 0.33**m for m, x in enumerate(a)])
    assert grow[-1] > 1e3 and stay[-1] < 100


def test_radius_window_and_zero_tail(geo2):
    est = se.radius_estimate(geo2, 2)
    assert est.window == tuple(range(11, 21))
    assert est.R_hat * est.r_hat == pytest.approx(1.0)
    assert se.radius_estimate(geo2, 2, window=3).window == (18, 19, 20)
    z = se.from_coefficients(se.CoefficientMap(2, 1, 0, {((0, 0), (0,)): 1.0}), 5)
    est = se.radius_estimate(z, 2)
    assert est.r_hat == 0 and est.R_hat == math.inf
    with pytest.raises(ValueError):
        se.radius_estimate(geo2, 2, window=0)
    with pytest.raises(ValueError):
        se.radius_estimate(geo2, 2, window=21)


def test_polynomial_has_infinite_radius():
    s = se.from_coefficients(se.geometric_coefficients(2, 4), 10)
    assert se.radius_estimate(s, 2).R_hat == pytest.approx(0.5**0.5)  # nonzero blocks only
    z = se.from_coefficients(se.CoefficientMap(1, 1, 0, {}), 4)
    assert se.radius_estimate(z, 2).R_hat == math.inf


def test_converges_examples(geo2):
    assert se.converges_at(geo2, [0.3, 0.3], 2).status == CONVERGED
    d = 0.9 / math.sqrt(2)
    v = se.converges_at(geo2, [d, d], 2)
    assert v.status == DIVERGED
    assert v.certificate["component"] == [0]
    assert se.converges_at(geo2, [0.9, 0.0], 2).status in (CONVERGED, UNKNOWN)


def test_convergence_certificate_bounds_partial_sums(geo2):
    v = se.converges_at(geo2, [0.2, -0.25], 2)
    assert v.status == CONVERGED
    exact = 1 / (1 - 0.45)  # sum of (|h1| + |h2|)^m
    assert v.components[0] <= exact <= v.certificate["total_bound"][0] + 1e-12


def test_degree_sums_dominated_by_norm_bound():
    """Each degree's absolute sum is at most q'!^(1-1/rho) ||h||_conj^m ||A(m)||_rho."""
    rng = np.random.default_rng(17)
    for _ in range(40):
        c = random_map(rng, 2, 2, int(rng.integers(0, 3)), 6)
        s = se.from_coefficients(c)
        h = rng.uniform(-1.5, 1.5, 2)
        absolute, grouped = se.term_sums(s, h)
        assert np.all(grouped <= absolute + 1e-14)
        for rho in (1, 2, 3, math.inf):
            hn = point_norm(h, conjugate(rho))
            norms = se.block_norms(s, rho)
            comp = math.factorial(s.q_prime) ** (1 if rho == math.inf else 1 - 1 / rho)
            for m in range(s.M + 1):
                assert absolute[m].max() <= comp * hn**m * norms[m] * (1 + 1e-12) + 1e-300


def test_indeterminacy_layer(geo2):
    lo, hi = se.indeterminacy_layer(geo2, 2)
    assert (lo, hi) == (pytest.approx(2**-0.5), pytest.approx(1.0))
    lo, hi = se.indeterminacy_layer(geo2, 1)
    assert lo == hi
    lo, hi = se.indeterminacy_layer(geo2, math.inf)
    assert hi == pytest.approx(2 * lo)
    one = se.from_coefficients(se.one_variable_coefficients([2.0**m for m in range(15)]))
    for rho in (1, 2, math.inf):
        lo, hi = se.indeterminacy_layer(one, rho)
        assert lo == hi == pytest.approx(0.5)


def test_witness_scan(geo2):
    rep = se.layer_witness_scan(geo2, 2, 1.05, 8)
    assert rep.beyond_layer
    assert rep.diagonal_verdict.status == DIVERGED
    assert point_norm(rep.diagonal, 2) == pytest.approx(1.05)
    rep = se.layer_witness_scan(geo2, 2, 0.5, 12)
    assert all(v.status == CONVERGED for v in rep.sample_verdicts + [rep.diagonal_verdict])
    one = se.from_coefficients(se.one_variable_coefficients([3.0**m for m in range(21)]))
    assert se.layer_witness_scan(one, 2, 0.4, 2).diagonal_verdict.status == DIVERGED
    for pt in rep.samples:
        assert point_norm(pt, 2) == pytest.approx(0.5)


@pytest.mark.parametrize("rho", [1, 1.5, 2, 3, math.inf])
def test_diagonal_beyond_layer_never_converged(rho):
    for n in (1, 2, 3):
        s = se.from_coefficients(se.geometric_coefficients(n, 16))
        hi = se.indeterminacy_layer(s, rho)[1]
        for f in (1.001, 1.05, 1.3, 2.0):
            rep = se.layer_witness_scan(s, rho, hi * f, 0)
            assert rep.diagonal_verdict.status != CONVERGED


def test_grouped_and_absolute_reported_separately():
    # x1 - x2 cancels on the diagonal: the grouped series vanishes while the absolute one grows
    terms = {}
    for m in range(13):
        for alpha in mi.enumerate_slice(2, m):
            terms[(alpha, (0,))] = mi.multinomial(m, alpha) * (-1.0) ** alpha[1]
    s = se.from_coefficients(se.CoefficientMap(2, 1, 0, terms))
    v = se.converges_at(s, [0.6, 0.6], 2)
    assert v.status == DIVERGED
    assert v.grouped_status != DIVERGED
    assert v.grouped_components[0] == pytest.approx(1.0)
