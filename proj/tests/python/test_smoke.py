import math

import pytest

import lanegraph as lg


def diamond():
    return lg.LaneGraph(
        nodes=[(0, 50, 100), (1, 30, 60), (2, 70, 60), (3, 50, 20)],
        edges=[(0, 1), (0, 2), (1, 3), (2, 3)],
        root=0,
        extent=(100, 100),
    )


def test_graph_basics():
    g = diamond()
    assert len(g) == 4
    assert g.successors(0) == [1, 2]
    assert g.is_valid()
    assert lg.LaneGraph.from_json(g.to_json()) == g
    assert lg.split_nodes(g) == [0]


def test_validation_reports_cycles():
    g = lg.LaneGraph(nodes=[(0, 0, 0), (1, 1, 0)], edges=[(0, 1), (1, 0)])
    kinds = [kind for kind, severity, _ in g.validate() if severity == "error"]
    assert "Cycle" in kinds or any("cycle" in k.lower() for k in kinds)
    with pytest.raises(lg.LaneGraphError, match="cycle"):
        lg.decompose(g)


def test_decompose_and_aggregate_round_trip():
    g = lg.generate_synthetic(3, n_splits=2, depth=3)
    paths = lg.decompose(g)
    assert len(paths) == 4 == lg.count_paths(g)
    pos = {i: (x, y) for i, x, y in g.nodes}
    w, h = g.extent
    proposals = [(1.0, [(pos[i][0] / w, pos[i][1] / h) for i in p]) for p in paths]
    agg, _warnings = lg.aggregate(proposals, "polyline", extent=(w, h), p_min=0.5, d_max=1e-6)
    assert lg.geometrically_equal(agg, g, 1e-9)


def test_bezier_round_trip():
    cps = [(0.0, 0.0), (0.2, 0.9), (0.7, 0.1), (1.0, 1.0)]
    assert sum(lg.bernstein(i, 3, 0.3) for i in range(4)) == pytest.approx(1.0, abs=1e-12)
    samples = lg.bezier_sample(cps, 20)
    fitted, rmse = lg.fit_bezier(samples, 3, parametrization="uniform")
    assert rmse < 1e-9
    for a, b in zip(fitted, cps):
        assert math.dist(a, b) < 1e-9
    assert lg.bezier_eval(cps, 0.0) == cps[0]
    assert len(lg.resample_polyline(samples, 5)) == 5


def test_matching_and_loss():
    costs = [[4.0, 1.0, 3.0], [2.0, 0.0, 5.0], [3.0, 2.0, 2.0]]
    a = lg.hungarian(costs)
    assert a["total_cost"] == lg.brute_force_assignment(costs)["total_cost"] == 5.0
    gt = [[(0.1, 0.2), (0.3, 0.4)]]
    loss = lg.set_loss(gt, [(0.0, [(0.9, 0.9), (0.8, 0.8)]), (1.0, gt[0])])
    assert loss["total"] == 0.0
    assert loss["assignment"]["pairs"] == [(0, 1)]


def test_evaluate_identity_and_empty():
    g = lg.generate_synthetic(1, n_splits=1, depth=3)
    r = lg.evaluate(g, g)
    for key in ("topo_precision", "topo_recall", "geo_precision", "geo_recall", "apls", "graph_iou"):
        assert r[key] == pytest.approx(1.0)
    assert r["sda"] == {20.0: 1.0, 50.0: 1.0}
    empty = lg.LaneGraph(nodes=[], edges=[], root=None)
    e = lg.evaluate(empty, g)
    assert e["geo_recall"] == 0.0 and e["apls"] == 0.0 and e["graph_iou"] == 0.0


def test_cli_entry_point(tmp_path):
    out = tmp_path / "g.json"
    code, _, _ = lg.run_cli(["generate", "--seed", "5", "--out", str(out)])
    assert code == 0 and out.exists()
    code, _, err = lg.run_cli(["decompose"])
    assert code == 1 and err
