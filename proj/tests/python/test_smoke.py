import math

import numpy as np
import pytest

import hbsurf


def test_nodes_and_surface_map():
    v = hbsurf.nodes("sphere", 100)
    assert v.shape == (100, 2)
    x = hbsurf.to_surface("sphere", v)
    assert np.allclose(np.linalg.norm(x, axis=1), 1.0)
    assert (x[:, 2] > 0.5).all()


def test_cylinder_distance_unrolls():
    d = hbsurf.distance("cylinder", (2.2, 0.0), (2.2 + math.pi / 2, 1.0))
    assert d == pytest.approx(math.hypot(math.pi / 2, 1.0), rel=1e-14)


def test_torus_bvp_is_symmetric():
    ab = hbsurf.geodesic_bvp("torus", (0.1, 0.1), (0.2, 0.3))
    ba = hbsurf.geodesic_bvp("torus", (0.2, 0.3), (0.1, 0.1))
    assert ab["length"] == pytest.approx(ba["length"], abs=1e-9)
    assert ab["points"].shape[1] == 2


def test_test_function_at_origin():
    value, gradient, hessian = hbsurf.test_function("f1", (0.0, 0.0, 0.0))
    assert value == pytest.approx(0.3)
    assert np.allclose(gradient, [0.1, 0.2, 0.2])
    assert hessian.shape == (3, 3)


def test_interpolant_is_exact_at_nodes_and_accurate_between():
    v = hbsurf.nodes("cone", 500)
    h = hbsurf.interpolate("cone", v, "f1", 2, v[:20])
    exact = [hbsurf.test_function("f1", x)[0] for x in hbsurf.to_surface("cone", v[:20])]
    assert np.array_equal(h, exact)
    e = hbsurf.eval_points("cone", 30)
    h = hbsurf.interpolate("cone", v, "f1", 2, e)
    exact = np.array([hbsurf.test_function("f1", x)[0] for x in hbsurf.to_surface("cone", e)])
    assert np.max(np.abs(h - exact)) < 1e-3


def test_run_table_report():
    report = hbsurf.run_table({"n": [200, 400], "n_eval": 10, "taylor_order": ["T0", "T2"]})
    assert len(report["rows"]) == 4
    rmse = {(r["n"], r["order"]): r["rmse"] for r in report["rows"]}
    assert rmse[(400, "T2")] < rmse[(400, "T0")]


def test_errors_map_to_python_exceptions():
    with pytest.raises(hbsurf.OutOfChart):
        hbsurf.distance("cylinder", (0.0, 0.0), (1.0, 1.0))
    with pytest.raises(hbsurf.InvalidConfig):
        hbsurf.run_table({"colour": 1})
    with pytest.raises(hbsurf.Error):
        hbsurf.test_function("f9", (0.0, 0.0, 0.0))
