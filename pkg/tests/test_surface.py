import json
from dataclasses import replace
from fractions import Fraction

import pytest

from delpezzo import cli
from delpezzo.surface import (
    DivisorClass,
    IntersectionForm,
    ModelError,
    model_from_dict,
    validate,
)


def test_load_and_validate_all_configs():
    for name in cli.list_names("configs"):
        model = cli.load_config(name, validated=False)
        report = validate(model)
        assert report.ok, f"{name}: {report}"


def test_intersection_pairing():
    model = cli.load_config("s1_base")
    e = model.generator("E")
    f = model.generator("F")
    assert model.intersect(e, e) == -1
    assert model.intersect(e, f) == 1
    assert model.intersect(model.polarization, model.polarization) == 8


def test_flag_class_resolution():
    # flag named after a generator uses the generator's class
    m1 = cli.load_config("s1_flag_f")
    assert m1.flag_class == m1.generator("F")
    # flag not among the generators uses the explicit class
    m2 = cli.load_config("s1_flag_l")
    assert m2.flag_class == DivisorClass.of(["1", "1"])


def test_validate_rejects_wrong_signature():
    model = cli.load_config("s1_base")
    bad = replace(
        model,
        form=IntersectionForm.of([["1", "0"], ["0", "1"]]),
    )
    assert not validate(bad).ok


def test_validate_rejects_bad_local_mults():
    model = cli.load_config("s1_flag_f")
    bad = replace(model, unmarked_remainder={"E": Fraction(2)})
    report = validate(bad)
    assert any("E" in p for p in report.problems)


def test_validate_rejects_bad_boundary_mults():
    model = cli.load_config("s1_flag_f")
    bad = replace(model, boundary_remainder=Fraction(7))
    report = validate(bad)
    assert any("boundary" in p for p in report.problems)


def test_malformed_config_raises():
    with pytest.raises(ModelError):
        model_from_dict({"name": "x"})


def test_scaled_polarization():
    model = cli.load_config("s1_flag_f")
    half = model.scaled(Fraction(1, 2))
    assert half.polarization == model.polarization.scale(Fraction(1, 2))
    assert half.flag_class == model.flag_class


def test_config_json_round_trip():
    path = cli._resolve("configs", "s2_cab_ord")
    with open(path) as handle:
        data = json.load(handle)
    model = model_from_dict(data)
    assert model.name == "s2_cab_ord"
    assert model.rank == 4
