from fractions import Fraction

import pytest

from delpezzo import cli
from delpezzo.cone import is_nef, pseff_threshold
from delpezzo.corenum import is_negative_definite
from delpezzo.zariski import (
    NotPseudoeffectiveError,
    zariski_fixed,
    zariski_oracle,
    zariski_sweep,
)


def check_decomposition(model, d, dec):
    assert is_nef(model, dec.p)
    for name, coeff in dec.n.items():
        assert coeff > 0
        # P orthogonal to every component of N
        assert model.intersect(dec.p, model.mori_generators[name]) == 0
    if dec.n:
        gens = [model.mori_generators[n] for n in dec.n]
        gram = [[model.intersect(a, b) for b in gens] for a in gens]
        assert is_negative_definite(gram)
    assert dec.p + dec.n_class(model) == d


def test_fixed_decomposition_properties():
    samples = {
        "s1_c_notflex_12": ["0", "2", "7/2", "9/2", "5"],
        "s2_c_flex_13": ["1", "7/2", "11/2", "6"],
        "s2_cab_ord": ["1/2", "2", "4", "5"],
    }
    for name, ts in samples.items():
        model = cli.load_config(name)
        for t in ts:
            d = model.polarization - model.flag_class.scale(Fraction(t))
            dec = zariski_fixed(model, d)
            check_decomposition(model, d, dec)


def test_fixed_known_values():
    model = cli.load_config("s1_c_notflex_12")
    d = model.polarization - model.flag_class.scale(Fraction(7, 2))
    dec = zariski_fixed(model, d)
    assert dec.n == {"L": Fraction(1, 2)}
    assert dec.p.coords == (Fraction(3, 2), Fraction(5, 2), Fraction(0))


def test_not_pseudoeffective_raises():
    model = cli.load_config("s1_c_notflex_12")
    d = model.polarization - model.flag_class.scale(Fraction(6))
    with pytest.raises(NotPseudoeffectiveError):
        zariski_fixed(model, d)


def test_oracle_agrees_at_breakpoint_neighbourhoods():
    for name in ("s1_ce_ord", "s2_ca_flex_12"):
        model = cli.load_config(name)
        tau = pseff_threshold(model, model.polarization, model.flag_class)
        for k in range(13):
            t = tau * Fraction(k, 13)
            d = model.polarization - model.flag_class.scale(t)
            assert zariski_fixed(model, d) == zariski_oracle(model, d)


def test_sweep_matches_fixed():
    model = cli.load_config("s2_c_notflex_12")
    pieces = zariski_sweep(model, model.polarization, model.flag_class)
    assert pieces[0].t_lo == 0
    assert pieces[-1].t_hi == pseff_threshold(
        model, model.polarization, model.flag_class
    )
    for piece in pieces:
        mid = (piece.t_lo + piece.t_hi) / 2
        d = model.polarization - model.flag_class.scale(mid)
        dec = zariski_fixed(model, d)
        assert piece.p_at(mid) == dec.p
        assert {k: v for k, v in piece.n_at(mid).items() if v != 0} == dec.n
        assert piece.vol(mid) == model.intersect(dec.p, dec.p)


def test_sweep_intervals_contiguous():
    for name in cli.list_names("configs"):
        if name.endswith("_base"):
            continue
        model = cli.load_config(name)
        pieces = zariski_sweep(model, model.polarization, model.flag_class)
        for left, right in zip(pieces, pieces[1:]):
            assert left.t_hi == right.t_lo
