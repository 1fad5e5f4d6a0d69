"""Stability-threshold bounds assembled from flag invariants.

Every bound is a linear-fractional function of the boundary parameter lam
on (0, 1]: a flag G through a point p gives the two-sided bound
A_G(lam)/(S_G * lam), and each marked point q of the flag contributes the
lower bound A(q)/(S(W;q) * lam).  Case lists combine the bounds of whole
point strata into a global lower/upper envelope for delta(lam), with the
regions where the two envelopes agree certified as exact values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .corenum import LinearFraction, PiecewiseFn, Rat, pw_min
from .invariants import FlagResult


class DeltaError(Exception):
    pass


@dataclass(frozen=True)
class BoundFn:
    """One bound on delta with a record of where it came from."""

    expr: LinearFraction
    provenance: str


def flag_bound(fr: FlagResult) -> BoundFn:
    """A_G(lam) / (S_G * lam); valid as both a lower and an upper bound."""
    a = fr.a_flag
    expr = LinearFraction.of(a.p0, a.p1, 0, fr.s_value)
    return BoundFn(expr=expr, provenance=f"{fr.name}:flag")


def point_bound(fr: FlagResult, point: str) -> BoundFn:
    """A(q) / (S(W;q) * lam); a lower bound only."""
    try:
        s_wq, a_q = fr.per_point[point]
    except KeyError as exc:
        raise DeltaError(f"{fr.name}: unknown marked point {point!r}") from exc
    expr = LinearFraction.of(a_q.p0, a_q.p1, 0, s_wq)
    return BoundFn(expr=expr, provenance=f"{fr.name}:{point}")


def az_bounds(fr: FlagResult) -> list[BoundFn]:
    """The full lower-bound list of one flag: the flag itself plus every
    marked point."""
    bounds = [flag_bound(fr)]
    for name in fr.per_point:
        bounds.append(point_bound(fr, name))
    return bounds


def az_lower_bound(fr: FlagResult) -> PiecewiseFn:
    """Pointwise minimum of the flag's lower bounds on (0, 1]."""
    bounds = az_bounds(fr)
    return pw_min(
        [b.expr for b in bounds],
        Fraction(0),
        Fraction(1),
        labels=[b.provenance for b in bounds],
    )


@dataclass(frozen=True)
class DeltaCase:
    """Bounds for one stratum of points (one case of the analysis)."""

    name: str
    lower: tuple[BoundFn, ...]
    upper: tuple[BoundFn, ...]


@dataclass(frozen=True)
class GlobalDelta:
    """Envelopes of delta(lam) over all cases.

    exact lists the maximal subintervals of (0, 1] on which the lower and
    upper envelopes coincide, i.e. where delta is known exactly.
    """

    lower: PiecewiseFn
    upper: PiecewiseFn
    exact: tuple[tuple[Rat, Rat], ...]

    def is_exact_at(self, lam: Rat) -> bool:
        return any(lo <= lam <= hi for lo, hi in self.exact)


def assemble_global(cases) -> GlobalDelta:
    """Combine the per-stratum bounds into global envelopes.

    The global delta is the infimum over strata, so the lower envelope is
    the minimum of every stratum's lower bounds and the upper envelope the
    minimum of the declared upper bounds.
    """
    lower_bounds: list[BoundFn] = []
    upper_bounds: list[BoundFn] = []
    for case in cases:
        lower_bounds.extend(case.lower)
        upper_bounds.extend(case.upper)
    if not lower_bounds or not upper_bounds:
        raise DeltaError("need at least one lower and one upper bound")
    lo, hi = Fraction(0), Fraction(1)
    lower = pw_min(
        [b.expr for b in lower_bounds],
        lo,
        hi,
        labels=[b.provenance for b in lower_bounds],
    )
    upper = pw_min(
        [b.expr for b in upper_bounds],
        lo,
        hi,
        labels=[b.provenance for b in upper_bounds],
    )
    exact = _equal_intervals(lower, upper)
    return GlobalDelta(lower=lower, upper=upper, exact=exact)


def _equal_intervals(f: PiecewiseFn, g: PiecewiseFn):
    """Maximal intervals where two piecewise linear-fractional functions
    are identical, found on the common refinement of their breakpoints."""
    points = sorted(set(f.breakpoints) | set(g.breakpoints))
    intervals: list[list[Rat]] = []
    for a, b in zip(points, points[1:]):
        if b <= f.lo or a >= f.hi:
            continue
        fp = f.piece_at((a + b) / 2)
        gp = g.piece_at((a + b) / 2)
        if fp != gp:
            continue
        if intervals and intervals[-1][1] == a:
            intervals[-1][1] = b
        else:
            intervals.append([a, b])
    return tuple((a, b) for a, b in intervals)


def r_threshold(delta: PiecewiseFn) -> Rat:
    """sup of the set where delta(lam) > 1, capped at 1.

    Returns 0 when delta never exceeds 1 (the caller should treat that as
    "no positive threshold certified").
    """
    best = Fraction(0)
    for i, piece in enumerate(delta.pieces):
        a, b = delta.breakpoints[i], delta.breakpoints[i + 1]
        # delta - 1 has sign given by the affine numerator
        # (p0 - q0) + (p1 - q1) lam over a positive denominator
        c0 = piece.p0 - piece.q0
        c1 = piece.p1 - piece.q1
        lo, hi = a, b
        if c1 == 0:
            if c0 <= 0:
                continue
        else:
            root = Fraction(-c0, c1)
            if c1 > 0:
                lo = max(lo, root)
            else:
                hi = min(hi, root)
            if lo >= hi:
                continue
        best = max(best, hi)
    return min(best, Fraction(1))
