import json
import math
import pathlib

import pytest

import pursuit

SCENARIOS = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def test_free_plane_region():
    region = pursuit.DominanceRegion(pursuit.World.free_plane(), (0, 0), (1, 0), 2.0)
    assert region.phi((2, 0)) == 0.0
    x = region.ray_boundary_intersection((-1, 0))
    assert abs(x[0] - 2 / 3) < 1e-12 and abs(x[1]) < 1e-12


def test_corner_example():
    world = pursuit.World.corner(5)
    assert world.kind == "corner"
    region = pursuit.DominanceRegion(world, (4, 5), (2, -1), 1.5)
    assert abs(region.phi((0, 0)) - (math.sqrt(41) - 1.5 * math.sqrt(5))) < 1e-12
    boundary = region.boundary()
    assert [a["curve"]["type"] for a in boundary["arcs"]] == ["oval", "apollonius", "oval"]
    with pytest.raises(pursuit.OutsideWorld):
        region.phi((1, 0))


def test_shortest_path_bends_at_vertex():
    world = pursuit.World.corner(45)
    points, length = pursuit.shortest_path(world, (1, 1), (1, -1))
    assert len(points) == 3
    assert abs(length - 2 * math.sqrt(2)) < 1e-12
    g1, g2 = pursuit.metric_gradients(pursuit.World.free_plane(), (0, 0), (3, 4))
    assert g1 == pytest.approx((-0.6, -0.8)) and g2 == pytest.approx((0.6, 0.8))


def test_simulate_collinear_chase():
    out = pursuit.simulate((SCENARIOS / "collinear_chase.json").read_text())
    assert out["outcome"] == "captured"
    assert abs(out["t_f"] - 1.0) < 5e-3
    assert len(out["trajectory"]) == 1001
    assert out["trajectory"][0][1] == (0.0, 0.0)


def test_bad_scenario_names_field():
    doc = json.loads((SCENARIOS / "collinear_chase.json").read_text())
    doc["alpha"] = 0.5
    with pytest.raises(pursuit.ParseError, match="alpha"):
        pursuit.parse_scenario(json.dumps(doc))


def test_suite_reports():
    reports = pursuit.run_suite("counterexample", 7)
    assert all(r["pass"] for r in reports)
    assert "metric" in pursuit.suite_names()
