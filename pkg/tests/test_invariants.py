from fractions import Fraction

import pytest

from delpezzo import cli
from delpezzo.corenum import pw_integrate
from delpezzo.invariants import (
    InvariantError,
    flag_log_discrepancy,
    flag_result,
    point_discrepancy,
    s_value,
    s_wq,
    volume_fn,
)


def test_s_values_sample():
    expected = {
        "s1_flag_f": Fraction(13, 12),
        "s1_flag_e": Fraction(7, 6),
        "s1_c_ftangent_12": Fraction(3),
        "s2_cab_ord": Fraction(16, 7),
    }
    for name, s in expected.items():
        model = cli.load_config(name)
        assert s_value(model, model.polarization, model.flag_class) == s


def test_volume_fn_endpoints():
    model = cli.load_config("s1_flag_f")
    vol = volume_fn(model, model.polarization, model.flag_class)
    assert vol(0) == 8
    assert vol(vol.hi) == 0
    assert pw_integrate(vol, 0, vol.hi) == Fraction(26, 3)


def test_point_discrepancies():
    model = cli.load_config("s1_c_notflex_12")
    a_sing = point_discrepancy(model.point("q_F"))
    assert a_sing(Fraction(1)) == Fraction(1, 2)
    a_boundary = point_discrepancy(model.point("q_C"))
    assert a_boundary(Fraction(1, 3)) == Fraction(1, 3)
    a_flag = flag_log_discrepancy(model)
    assert a_flag(Fraction(1, 2)) == 2


def test_s_wq_matches_flag_result():
    model = cli.load_config("s2_ca_ord")
    fr = flag_result(model)
    for q in model.marked_points:
        direct = s_wq(model, model.polarization, model.flag_class, q)
        assert fr.per_point[q.name][0] == direct


def test_flag_result_requires_flag():
    model = cli.load_config("s1_base")
    with pytest.raises(InvariantError):
        flag_result(model)


def test_homogeneity_single_case():
    model = cli.load_config("s1_ce_ord")
    lam = Fraction(2, 3)
    scaled = flag_result(model, lam)
    unit = flag_result(model)
    assert scaled.tau == unit.tau * lam
    assert scaled.s_value == unit.s_value * lam
    for name, (value, _) in unit.per_point.items():
        assert scaled.per_point[name][0] == value * lam
