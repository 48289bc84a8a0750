import cmath

import pytest

import gkztoric

EXAMPLE_2 = '{"r":1,"n":1,"weights":[[[0],[1],[2],[-1]]],"beta":["-1/2"]}'


def test_example_ranks_match_volumes():
    for weights, rank in [([0, 1, -1], 2), ([0, 1, 2, -1], 3), ([0, 1, 2, -1, -2], 4)]:
        system = gkztoric.System([[[w] for w in weights]], ["-1/2"])
        assert system.hypothesis()
        assert system.solution_rank() == rank
        assert system.volume() == rank


def test_box_operator_of_example_1():
    system = gkztoric.System([[[0], [1], [-1]]], ["-1/2"])
    assert system.box_operators(2) == ["D1^2 - D2*D3"]
    assert len(system.euler_operators()) == 2


def test_integral_beta_raises():
    with pytest.raises(gkztoric.GkzError, match="IntegralBeta"):
        gkztoric.System([[[0], [1], [-1]]], ["1"])


def test_smith_normal_form_big_integers():
    big = 10**30
    s, u, v = gkztoric.smith_normal_form([[2 * big, 0], [0, 3]])
    assert s[0][0] * s[1][1] == 6 * big
    assert s[1][1] % s[0][0] == 0


def test_normalized_volume():
    assert gkztoric.normalized_volume([[0, 0], [1, 0], [0, 1], [1, 1]]) == 2


def test_run_matches_cli_report():
    report = gkztoric.run("rank", EXAMPLE_2)
    assert report["schema_version"] == gkztoric.schema_version
    assert report["rank"] == 3
    assert report["I"] == ["rho_inf"]


def test_periods():
    system = gkztoric.System([[[0], [1], [-1]]], ["-1/2"])
    x = [[3, 1, 1]]
    a = system.twisted_period(x, radius=0.9)
    b = system.twisted_period(x, radius=1.1)
    assert abs(a - b) < 1e-10
    assert abs(a) > 1e-3 and cmath.isfinite(a)
    assert system.period_rank(x) == 2
