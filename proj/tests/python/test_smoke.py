import json
import math
import os
import subprocess

import numpy as np
import pytest

import pointcontact as pc


def reference_system():
    return pc.CoupledSystem(pc.point_interaction([0.0]), pc.point_interaction([0.0]), alpha=-1.0, beta=-2.0)


def test_linear_algebra():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert abs(pc.det(m) - (-2.0)) < 1e-14
    assert np.allclose(pc.adjugate(m), [[4.0, -2.0], [-3.0, 1.0]])
    assert np.allclose(pc.inverse(m) @ m, np.eye(2))
    assert np.allclose(pc.adjugate(np.zeros((1, 1))), [[1.0]])
    s = pc.hermitian_sqrt([0.0, 1.0], -3.0)
    assert np.allclose(s @ s, np.diag([3.0, 4.0]))


def test_reference_coefficients():
    sys = reference_system()
    lam0 = pc.find_isolated_eigenvalue(pc.point_interaction([0.0]), -2.0, (-10.0, -1.0))
    assert lam0 == pytest.approx(-4.0, abs=1e-12)
    res = pc.expansion(sys, lam0)
    assert res.order == 2
    assert res.a == pytest.approx(-4.0, abs=1e-12)
    assert res.b == pytest.approx(3.0, abs=1e-12)
    assert res(1e-3) == pytest.approx(-4.0 - 4e-3 + 3e-6, abs=1e-15)


def test_branch_and_fit():
    sys = reference_system()
    res = pc.expansion(sys, -4.0)
    trace = pc.track_branch(sys, -4.0, pc.geometric_grid(1e-6, 1e-3, 8), seed_slope=res.a)
    assert len(trace.samples) == 25
    fit = pc.fit_coefficients(trace, 2, res)
    assert abs(fit.a_hat - res.a) <= 1e-4
    assert abs(fit.b_hat - res.b) <= 1e-2
    assert 2.7 <= fit.remainder_slope <= 3.3


def test_toy_against_exact_root():
    ident = pc.scalar_rational([0.0, 1.0], [1.0], (-math.inf, math.inf))
    sys = pc.CoupledSystem(ident, ident, alpha=0.0, beta=1.0)
    trace = pc.track_branch(sys, 1.0, [1e-4, 1e-3, 1e-2, 1e-1])
    for x, lam in zip(trace.xs, trace.lambdas):
        assert abs(lam - 0.5 * (1 + math.sqrt(1 + 4 * x))) < 1e-10


def test_block_det_identity():
    rng = np.random.default_rng(7)
    for _ in range(10):
        q1 = rng.normal(size=3)
        q2 = rng.normal(size=3)
        omega = complex(*rng.normal(size=2))
        sys = pc.CoupledSystem(pc.point_interaction(q1), pc.point_interaction(q2), -1.0, -0.5, omega)
        lam = sys.working_interval[1] - 1.0
        assert abs(pc.block_det(sys, lam) - pc.char_fn(sys, lam, abs(omega) ** 2)) < 1e-9


def test_errors_carry_kind():
    sys = pc.CoupledSystem(pc.point_interaction([0.0]), pc.point_interaction([0.0]), alpha=-2.0, beta=-2.0)
    with pytest.raises(pc.Error) as info:
        pc.expansion(sys, -4.0)
    assert info.value.kind == "NotResolventPoint"
    with pytest.raises(pc.Error) as info:
        pc.scalar_rational([0.0, -1.0], [1.0], (-1.0, 1.0))
    assert info.value.kind == "NotHerglotz"


def test_cli_in_process(tmp_path):
    cfg = tmp_path / "ref.json"
    cfg.write_text(json.dumps({
        "model_tilde": {"kind": "point_interaction", "q_eigenvalues": [0]},
        "model_hat": {"kind": "point_interaction", "q_eigenvalues": [0]},
        "alpha": -1, "beta": -2, "lambda0": -4,
    }))
    code, out, _ = pc.run_cli(["coeffs", "--config", str(cfg)])
    assert code == 0
    assert json.loads(out)["b"] == pytest.approx(3.0)
    code, out, _ = pc.run_cli(["verify", "--config", str(cfg), "--format", "csv"])
    assert code == 0
    assert ",fail," not in out


@pytest.mark.skipif("PCONTACT_CLI" not in os.environ, reason="CLI binary path not provided")
def test_cli_binary(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({
        "model_tilde": {"kind": "point_interaction", "q_eigenvalues": [0]},
        "model_hat": {"kind": "point_interaction", "q_eigenvalues": [0]},
        "alpha": -2, "beta": -2, "lambda0": -4,
    }))
    proc = subprocess.run([os.environ["PCONTACT_CLI"], "coeffs", "--config", str(cfg)], capture_output=True, text=True)
    assert proc.returncode == 2
    assert proc.stdout == ""
    assert "NotResolventPoint" in proc.stderr
