import coxdl
import pytest


def test_points_match_group_order():
    # X_h over F_{q^n} is a G_h-torsor: the count is #G_h.
    assert coxdl.points(2, 2, 0, 1, 2) == 6
    assert coxdl.points(2, 2, 0, 2, 2) == int(coxdl.group_order(2, 2, 0, 2)) == 96


def test_identity_row_of_s_table():
    P = coxdl.Pipeline(2, 2, 0, 2)
    row = P.s_table()[P.identity_class]
    assert row[0] == P.group_order
    assert not any(row[1:])


def test_gl2_cuspidal_degree():
    P = coxdl.Pipeline(3, 2)
    thetas = P.characters(gp_only=True)
    assert len(thetas) == 6
    for th in thetas:
        rep = P.extract(th)
        assert rep["concentrated"]
        assert rep["values"][P.identity_class] == "2"
        assert rep["degree_ok"] and rep["very_regular_ok"]


def test_mackey_small():
    P = coxdl.Pipeline(2, 2, 1, 2)
    assert P.mackey(P.characters())["pass"]


def test_lemmas():
    assert coxdl.verify_norm_image(3, 2, 1, 2)["pass"]
    rh = coxdl.verify_rh_fibers(2, 3, 2, 2, 2)
    assert rh["skipped"]
    assert coxdl.verify_curve_reduction(2, 1, 1, 1, 2, 2)["pass"]
    assert coxdl.verify_turnbull(20, 5)["pass"]


def test_sigma_w_predicate():
    assert coxdl.sigma_w_empty_predicate([0, 1]) is False
    assert coxdl.macdonald_volume(2, 2, 1) == "1/2"


def test_capacity_error():
    with pytest.raises(coxdl.CapacityError):
        coxdl.Pipeline(5, 3, 0, 3)
