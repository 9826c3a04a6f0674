import json

import numpy as np
import pytest

from odotseries import multiindex as mi

# filled by test_acceptance.py: criterion number -> (passed, detail)
ACCEPTANCE = {}


def random_series_doc(rng, n, n_prime, q_prime, field, max_degree, density):
    terms = []
    for m in range(max_degree + 1):
        for alpha in mi.enumerate_slice(n, m):
            for alpha_p in mi.enumerate_slice(n_prime, q_prime):
                if rng.random() < density:
                    rec = {"alpha": list(alpha), "alpha_prime": list(alpha_p), "re": float(rng.normal())}
                    if field == "complex":
                        rec["im"] = float(rng.normal())
                    terms.append(rec)
    return {"n": n, "n_prime": n_prime, "q_prime": q_prime, "field": field, "terms": terms}


def build_corpus(directory, count=50, seed=2024):
    """Series files with the degenerate shapes first: no terms, q' = 0, n = 1."""
    rng = np.random.default_rng(seed)
    shapes = [
        (2, 1, 0, "real", 3, 0.0),
        (1, 1, 0, "real", 6, 1.0),
        (1, 2, 2, "complex", 3, 0.7),
        (3, 1, 0, "complex", 0, 1.0),
        (1, 1, 0, "complex", 0, 0.0),
    ]
    while len(shapes) < count:
        shapes.append((
            int(rng.integers(1, 4)), int(rng.integers(1, 3)), int(rng.integers(0, 3)),
            "complex" if rng.random() < 0.4 else "real", int(rng.integers(0, 5)), float(rng.uniform(0, 1)),
        ))
    paths = []
    for i, shape in enumerate(shapes):
        path = directory / f"series_{i:02d}.json"
        path.write_text(json.dumps(random_series_doc(rng, *shape)), encoding="utf-8")
        paths.append(path)
    return paths


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    return build_corpus(tmp_path_factory.mktemp("corpus"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}")
