import math
import os
import sys

for var in ("ENTNORMS_MODULE_DIR", "ENTNORMS_PY_SRC"):
    path = os.environ.get(var)
    if path and path not in sys.path:
        sys.path.insert(0, path)

import numpy as np
import pytest

import entnorms


def test_bell_schmidt_coefficients():
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    coeffs = entnorms.schmidt_coefficients(bell, [2, 2])
    assert np.allclose(sorted(coeffs, reverse=True), [1 / math.sqrt(2)] * 2)
    assert entnorms.schmidt_rank(bell, [2, 2]) == 2


def test_s_norm_closed_form():
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    assert entnorms.s_norm(bell, [2, 2], 1) == pytest.approx(1 / math.sqrt(2), abs=1e-12)
    assert entnorms.s_norm(bell, [2, 2], 2) == pytest.approx(1.0, abs=1e-12)


def test_S_norm_identity():
    res = entnorms.S_norm(np.eye(4, dtype=complex), [2, 2], [2, 2], 1, restarts=10, seed=3)
    assert res["value"] == pytest.approx(1.0, abs=1e-9)


def test_S_norm_matches_oracle():
    rng = np.random.default_rng(7)
    x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    seesaw = entnorms.S_norm(x, [2, 2], [2, 2], 1, restarts=20, seed=1)["value"]
    oracle = entnorms.brute_force_S_norm(x, [2, 2], [2, 2], 1, samples=20000, seed=2)
    assert seesaw == pytest.approx(oracle, abs=1e-4)


def test_gme_ghz():
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / math.sqrt(2)
    res = entnorms.gme(ghz, [2, 2, 2], restarts=10, seed=5)
    assert res["E"] == pytest.approx(0.5, abs=1e-8)


def test_classify_and_recover():
    p = np.array([[1, 1], [0, 1]], dtype=complex)
    q = np.array([[2, 0], [1, 1]], dtype=complex)
    l = np.kron(p, q)
    rep = entnorms.classify_local_form(l, 2, 2)
    assert rep["verdict"] == "Product"
    assert rep["residual"] < 1e-9
    assert entnorms.check_preserver(l, 2, 2, 1)["verdict"]

    rec = entnorms.recover_local_form(np.kron(p, q), [2, 2])
    assert rec["status"] == "Recovered"
    assert rec["residual"] < 1e-8
