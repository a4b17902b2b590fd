import json

import numpy as np
import pytest

import madm


def test_graph_and_weights():
    g = madm.erdos_renyi(20, madm.default_edge_probability(20), 3)
    assert madm.is_connected(g)
    w = madm.metropolis_weights(g)
    assert w.shape == (20, 20)
    np.testing.assert_allclose(w.sum(axis=1), 1.0, atol=1e-12)
    with pytest.raises(ValueError):
        madm.CommGraph(3, [(0, 1), (1, 0)])


def test_prox_tie_and_bound():
    inst = madm.PhaseRetrievalInstance(np.array([[1.0, 0.0]]), np.array([1.0]), np.zeros(2))
    np.testing.assert_array_equal(inst.prox(0, np.zeros(2), 1.0), [1.0, 0.0])
    assert inst.weak_convexity_bound(0) == 2.0
    assert madm.phase_retrieval_prox_scalar(0.0, 1.0, 1.0, 1.0) == 1.0


def test_quadratic_run_reaches_mean():
    g = madm.erdos_renyi(10, madm.default_edge_probability(10), 1)
    q = madm.QuadraticConsensusInstance.generate(10, 5, 1.0, 1)
    p = madm.MadmParams()
    p.max_iters = 2000
    p.tol = 1e-9
    r = madm.run(g, q, p, madm.MadmState.from_common_init(g, np.zeros(5)), x_true=q.optimum())
    assert r.failure == ""
    assert r.gate.overall
    np.testing.assert_allclose(r.state.x.mean(axis=0), q.optimum(), atol=1e-6)
    assert r.trace["mse"][-1] < 1e-12
    assert r.trace_csv.startswith("k,mse,mse_raw,psi,")


def test_dpsm_and_trial():
    cfg = json.loads(madm.default_config())
    cfg.update(num_agents=12, dimension=3, num_trials=2)
    cfg["madm"]["max_iters"] = 30
    cfg["dpsm"]["max_iters"] = 30
    text = json.dumps(cfg)
    a = madm.run_trial(text, 5)
    b = madm.run_trial(text, 5)
    assert a["error"] == ""
    assert len(a["madm"]["k"]) == 30
    np.testing.assert_array_equal(a["dpsm"]["mse"], b["dpsm"]["mse"])
    with pytest.raises(madm.ConfigError):
        madm.normalize_config('{"bogus": 1}')


def test_gate_report():
    g = madm.CommGraph(3, [(0, 1), (1, 2), (0, 2)])
    p = madm.MadmParams()
    p.eta = 1.9
    rep = madm.theorem1_gate(p, g)
    assert not rep.cond_eta.satisfied
    assert "VIOLATED" in str(rep)
