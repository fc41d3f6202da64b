import json
import math
import os
import subprocess

import numpy as np
import pytest

import fhlab


def test_special_functions():
    for x in (0.5, 3.0, 17.25):
        assert fhlab.log_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13)
    assert fhlab.trigamma(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-13)
    # G(5) = 1! 2! 3! = 12
    assert fhlab.log_barnes_g(5.0) == pytest.approx(math.log(12.0), rel=1e-13)


def test_origin_moment_matches_gamma_product():
    n, g = 20, 1.5
    # n|z_k|^2 are Gamma(k) variables.
    direct = sum(math.lgamma(k + g / 2) - math.lgamma(k) for k in range(1, n + 1)) - n * g / 2 * math.log(n)
    assert fhlab.origin_moment_exact(n, g) == pytest.approx(direct, rel=1e-12)
    assert fhlab.fh_rhs(None, 400, [(0j, g)]) == pytest.approx(fhlab.origin_moment_asymptotic(400, g))


def test_samplers_are_deterministic():
    a = fhlab.sample_ginibre(32, 7)
    b = fhlab.sample_ginibre(32, 7)
    assert a.shape == (32,)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, fhlab.sample_ginibre(32, 8))
    # Trace identity: mean |z|^2 is (n+1)/(2n) in expectation; check a loose bound.
    assert 0.2 < np.mean(np.abs(a) ** 2) < 0.9
    r = fhlab.sample_kostlan_moduli(32, 1)
    assert np.all(r > 0)
    h = fhlab.sample_ginibre_hessenberg(40, 3)
    assert h.shape == (40,)


def test_kernel_diagonal():
    n, z = 8, 0.1
    t = n * z * z
    exact = n / math.pi * math.exp(-t) * sum(t**k / math.factorial(k) for k in range(n))
    assert fhlab.kernel_eval(None, n, z, z).real == pytest.approx(exact, rel=1e-10)


def test_capacity_and_errors():
    assert fhlab.capacity({"shape": "disk", "radius": 2.0}) == pytest.approx(math.log(2.0))
    assert fhlab.capacity({"shape": "ellipse", "a": 2.0, "b": 1.0}) == pytest.approx(math.log(1.5))
    with pytest.raises(fhlab.HypothesisViolation):
        fhlab.fh_rhs(None, 100, [(0.97 + 0j, 1.0)])
    with pytest.raises(fhlab.DomainError):
        fhlab.log_mean_exp([])


def test_field_on_grid_shape():
    pts = fhlab.sample_ginibre(64, 2)
    f = fhlab.field_on_grid(pts, 6)
    assert f.shape == (6, 6)
    assert np.all(np.isfinite(f))


def test_run_experiment(tmp_path):
    res = fhlab.run_experiment({"experiment": "moments", "n": 16, "samples": 1, "singularities": []}, str(tmp_path))
    assert res["records"][0]["log_mc"] == 0.0
    assert (tmp_path / "results.json").exists()


@pytest.mark.skipif("FHLAB_CLI" not in os.environ, reason="command line tool not configured")
def test_cli_round_trip(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "ward", "n": 32, "samples": 20, "seed": 5}))
    out = tmp_path / "out"
    p = subprocess.run([os.environ["FHLAB_CLI"], "ward", "--config", str(cfg), "--out", str(out)],
                       capture_output=True, text=True)
    assert p.returncode == 0, p.stderr
    r = json.loads((out / "results.json").read_text())
    assert r["experiment"] == "ward"
    assert r["config"]["seed"] == 5
