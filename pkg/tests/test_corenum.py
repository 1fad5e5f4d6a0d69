from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from delpezzo.corenum import (
    LinearFraction,
    NotRepresentableError,
    PiecewiseFn,
    Poly,
    fmt,
    is_negative_definite,
    pw_integrate,
    pw_min,
    rat,
    solve_linear_system,
    symmetric_signature,
)

rationals = st.fractions(
    min_value=-10, max_value=10, max_denominator=12
)


def test_rat_parsing():
    assert rat("3/4") == Fraction(3, 4)
    assert rat(-2) == Fraction(-2)
    assert rat(Fraction(1, 3)) == Fraction(1, 3)
    assert fmt(Fraction(3, 4)) == "3/4"
    assert fmt(Fraction(5)) == "5"


def test_poly_basics():
    p = Poly.of(9, -6, 1)  # (3-t)^2
    assert p(3) == 0
    assert p(1) == 4
    q = Poly.of(3, -1) * Poly.of(3, -1)
    assert q == p
    assert Poly.of(1, 0, 0) == Poly.of(1)  # trailing zeros trimmed
    assert p.integral(0, 3) == 9


def test_linear_fraction_canonical():
    # common factor of lam cancelled, then leading denominator coeff 1
    f = LinearFraction.of(0, 3, 0, 5)
    assert (f.p0, f.p1, f.q0, f.q1) == (
        Fraction(3, 5), Fraction(0), Fraction(1), Fraction(0),
    )
    g = LinearFraction.of(12, 0, 0, 13)
    assert (g.p0, g.q1) == (Fraction(12, 13), Fraction(1))
    assert g(Fraction(1)) == Fraction(12, 13)


def test_piecewise_continuity_enforced():
    with pytest.raises(Exception):
        PiecewiseFn((Fraction(0), Fraction(1), Fraction(2)),
                    (Poly.of(0), Poly.of(5)))


VOL = PiecewiseFn(
    (Fraction(0), Fraction(1), Fraction(3)),
    (Poly.of(8, -4), Poly.of(9, -6, 1)),
)


def test_pw_integrate():
    assert pw_integrate(VOL, 0, 3) == Fraction(6) + Fraction(8, 3)


@given(
    a=st.fractions(min_value=0, max_value=3, max_denominator=8),
    c=st.fractions(min_value=0, max_value=3, max_denominator=8),
    b=st.fractions(min_value=0, max_value=3, max_denominator=8),
)
@settings(max_examples=50, deadline=None)
def test_pw_integrate_additive(a, c, b):
    a, c, b = sorted([a, c, b])
    assert pw_integrate(VOL, a, b) == (
        pw_integrate(VOL, a, c) + pw_integrate(VOL, c, b)
    )


FNS = [
    LinearFraction.of(1, 2, 0, 3),    # (1+2lam)/(3lam)
    LinearFraction.of(12, 0, 0, 5),   # 12/(5lam)
    LinearFraction.of(12, 0, 5, 0),   # 12/5
]


def test_pw_min_below_inputs():
    m = pw_min(FNS, Fraction(0), Fraction(1))
    for k in range(1, 11):
        x = Fraction(k, 11)
        assert m(x) == min(f(x) for f in FNS)


def test_pw_min_idempotent():
    m = pw_min(FNS, Fraction(0), Fraction(1))
    again = pw_min(list(m.pieces), m.lo, m.hi)
    assert again.breakpoints == m.breakpoints
    assert again.pieces == m.pieces


def test_pw_min_labels():
    m = pw_min(FNS, Fraction(0), Fraction(1), labels=["a", "b", "c"])
    assert len(m.labels) == len(m.pieces)
    assert set(m.labels) <= {"a", "b", "c"}


def test_pw_min_irrational_crossing_rejected():
    # lam and 2/lam cross at sqrt(2), inside (0, 2)
    fns = [LinearFraction.of(0, 1, 1, 0), LinearFraction.of(2, 0, 0, 1)]
    with pytest.raises(NotRepresentableError):
        pw_min(fns, Fraction(0), Fraction(2))


def test_solve_linear_system():
    x = solve_linear_system(
        [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]],
        [Fraction(5), Fraction(10)],
    )
    assert x == [Fraction(1), Fraction(3)]


def test_signature_and_definiteness():
    m = [[Fraction(-1), Fraction(1)], [Fraction(1), Fraction(0)]]
    assert symmetric_signature(m) == (1, 1, 0)
    assert not is_negative_definite(m)
    assert is_negative_definite(
        [[Fraction(-2), Fraction(1)], [Fraction(1), Fraction(-2)]]
    )
