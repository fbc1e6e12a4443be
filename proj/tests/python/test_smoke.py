import json

import pytest

import qxx


@pytest.fixture
def aspen():
    return qxx.Device.load("aspen16")


def test_circuit_round_trip():
    c = qxx.Circuit(3, [(0, 1), (1, 2)])
    assert len(c) == 2
    assert qxx.depth(c) == 2
    assert qxx.Circuit.parse(c.emit()) == c
    with pytest.raises(qxx.CircuitParseError):
        qxx.Circuit.parse('{"qubits": 2, "gates": [[0, 0]]}')


def test_device(aspen):
    assert aspen.num_registers == 16
    chain = qxx.Device.load("chain:4")
    assert chain.hop(0, 3) == 3
    assert chain.dist(0, 3, 0.2) == pytest.approx(0.6)
    with pytest.raises(qxx.DeviceError):
        qxx.Device(3, [(0, 1)])


def test_params():
    p = qxx.Params.parse("9,9,1.5,0.32,10,0.8")
    assert p == qxx.Params(max_depth=9, max_children=9, b=1.5, c=0.32,
                           movement_factor=10, edge_cost=0.8)
    assert str(p) == "9,9,1.5,0.32,10,0.8"
    with pytest.raises(ValueError):
        qxx.Params(c=2.0)


def test_known_optimal_pipeline(aspen):
    circuit, mapping, depth = qxx.generate(aspen, 10, seed=3)
    assert qxx.depth(circuit) == depth == 10
    assert qxx.gdepth(circuit, mapping, aspen, qxx.Params()) == 0.0
    routed = qxx.route(circuit, aspen, mapping, seed=1)
    assert qxx.ratio(circuit, routed) == 1.0
    ok, index, _ = qxx.verify(routed, circuit, aspen, mapping)
    assert ok and index is None


def test_place_and_route(aspen):
    circuit, _, _ = qxx.generate(aspen, 5, seed=1)
    placed = qxx.place(circuit, aspen, qxx.Params(max_depth=1, max_children=1))
    assert placed is not None
    assert sorted(placed["mapping"]) == sorted(set(placed["mapping"]))
    assert placed["cost"] == pytest.approx(
        qxx.gdepth(circuit, placed["mapping"], aspen, qxx.Params(max_depth=1)))
    routed = qxx.route(circuit, aspen, placed["mapping"])
    assert qxx.verify(routed, circuit, aspen, placed["mapping"])[0]
    assert qxx.place(circuit, aspen, qxx.Params(max_depth=9, max_children=9),
                     max_expansions=10) is None


def test_features():
    f = qxx.features(qxx.Circuit(3, [(0, 1), (1, 2), (0, 2)]))
    assert f["smetric"] == 12.0
    assert f["nodes"] == 3.0


def test_probabilities():
    got = qxx.probabilities([9.35, 8.00, 7.76, 15.06, 3.52, 10.59])
    assert [round(x, 2) for x in got] == [0.62, 0.53, 0.52, 1.0, 0.23, 0.7]


def test_search_with_python_objective():
    def objective(p):
        return (p.b - 8.0) ** 2 + (p.c - 0.5) ** 2

    assert qxx.space_size("table3") == 4455
    result = qxx.wrs(objective, n0=20, n_total=60, seed=2)
    assert len(result["history"]) == 60
    trace = result["incumbent_trace"]
    assert all(b <= a for a, b in zip(trace, trace[1:]))
    assert max(result["probabilities"]) == 1.0
    again = qxx.wrs(objective, n0=20, n_total=60, seed=2)
    assert again["best_index"] == result["best_index"]
    rs = qxx.random_search(lambda p: None, n_total=5)
    assert rs["best_index"] is None


def test_surrogate(tmp_path):
    model = {
        "format": "qxx-surrogate", "version": 1, "family": "knn",
        "scaler": {"min": [0.0] * 12, "max": [1.0] * 12},
        "k": 1, "p": 2, "train_x": [[0.0] * 12], "train_y": [1.75],
        "training": {"rows": 1},
    }
    path = tmp_path / "model.json"
    path.write_text(json.dumps(model))
    s = qxx.Surrogate.load(str(path))
    assert "k" in s.description
    assert s.predict(qxx.Circuit(2, [(0, 1)]), qxx.Params()) == 1.75
