"""Volume, S-invariant, refined point invariants and log discrepancies.

Everything is computed for the normalized polarization (the boundary
parameter lam scaled out).  For the anticanonical boundaries treated here
the divisor at parameter lam is exactly lam times the normalized one, so
tau, S and every S(W;q) are linear in lam: the stored rational is the
coefficient c in S = c*lam.  A verification mode recomputes the pipeline
with the polarization scaled by a fixed rational lam to guard the
normalization (see SurfaceModel.scaled).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import cone, zariski
from .corenum import LinearFraction, PiecewiseFn, Poly, Rat, pw_integrate, rat
from .surface import DivisorClass, MarkedPoint, SurfaceModel


class InvariantError(Exception):
    pass


@dataclass(frozen=True)
class FlagResult:
    """All invariants of one flag on one surface model."""

    name: str
    tau: Rat
    vol_fn: PiecewiseFn
    s_value: Rat  # S = s_value * lam
    a_flag: LinearFraction  # log discrepancy of the flag, linear in lam
    per_point: dict[str, tuple[Rat, LinearFraction]]  # name -> (s_wq, A(q))


def _sweep(model: SurfaceModel, a: DivisorClass, g: DivisorClass):
    return zariski.zariski_sweep(model, a, g)


def volume_fn(model: SurfaceModel, a: DivisorClass, g: DivisorClass) -> PiecewiseFn:
    """vol(a - t*g) as an exact piecewise polynomial on [0, tau]."""
    pieces = _sweep(model, a, g)
    breakpoints = [pieces[0].t_lo] + [p.t_hi for p in pieces]
    return PiecewiseFn(tuple(breakpoints), tuple(p.vol for p in pieces))


def s_value(model: SurfaceModel, a: DivisorClass, g: DivisorClass) -> Rat:
    """Normalized S-invariant: (1/a^2) * integral of vol over [0, tau]."""
    vol = volume_fn(model, a, g)
    return pw_integrate(vol, vol.lo, vol.hi) / model.intersect(a, a)


def point_discrepancy(q: MarkedPoint) -> LinearFraction:
    """Log discrepancy of a marked point on the flag: 1/n - (1-lam)*mult."""
    n = Fraction(1, q.sing_order)
    return LinearFraction.of(n - q.boundary_mult, q.boundary_mult, 1, 0)


def flag_log_discrepancy(model: SurfaceModel) -> LinearFraction:
    """A(lam) = 1 + c_K - (1-lam)*c_C for the model's flag."""
    c_k, c_c = model.flag_c_k, model.flag_c_c
    return LinearFraction.of(1 + c_k - c_c, c_c, 1, 0)


def _s_wq_from_pieces(model, pieces, g: DivisorClass, q: MarkedPoint) -> Rat:
    total = Fraction(0)
    for piece in pieces:
        pg0 = model.intersect(piece.p0, g)
        pg1 = model.intersect(piece.p1, g)
        pg = Poly.of(pg0, pg1)
        ord0 = ord1 = Fraction(0)
        for name, (n0, n1) in piece.n_affine.items():
            mult = q.local_mults.get(name, Fraction(0))
            ord0 += n0 * mult
            ord1 += n1 * mult
        h = pg * Poly.of(ord0, ord1) + (pg * pg).scale(Fraction(1, 2))
        total += h.integral(piece.t_lo, piece.t_hi)
    return total


def s_wq(
    model: SurfaceModel, a: DivisorClass, g: DivisorClass, q: MarkedPoint
) -> Rat:
    """Refined invariant S(W;q) = (2/a^2) * integral of h(q, t).

    h = (P(t).G) * ord_q(N(t)|_G) + (P(t).G)^2 / 2, with the local order
    assembled from the declared local multiplicities at q.
    """
    total = _s_wq_from_pieces(model, _sweep(model, a, g), g, q)
    return 2 * total / model.intersect(a, a)


def flag_result(model: SurfaceModel, lam: Rat = Fraction(1)) -> FlagResult:
    """Compute every invariant of the model's flag.

    With lam = 1 this produces the normalized coefficients; any other
    rational lam in (0, 1] runs the verification mode on the scaled
    polarization (log discrepancies are then evaluated at that lam).
    """
    if model.flag is None or model.flag_class is None:
        raise InvariantError("model declares no flag")
    lam = rat(lam)
    work = model if lam == 1 else model.scaled(lam)
    a, g = work.polarization, work.flag_class
    tau = cone.pseff_threshold(work, a, g)
    pieces = _sweep(work, a, g)
    breakpoints = [pieces[0].t_lo] + [p.t_hi for p in pieces]
    vol = PiecewiseFn(tuple(breakpoints), tuple(p.vol for p in pieces))
    if vol.hi != tau:
        raise InvariantError("sweep does not reach the threshold")
    deg = work.intersect(a, a)
    s = pw_integrate(vol, vol.lo, vol.hi) / deg
    a_flag = flag_log_discrepancy(model)
    per_point: dict[str, tuple[Rat, LinearFraction]] = {}
    for q in model.marked_points:
        value = 2 * _s_wq_from_pieces(work, pieces, g, q) / deg
        per_point[q.name] = (value, point_discrepancy(q))
    return FlagResult(
        name=model.name,
        tau=tau,
        vol_fn=vol,
        s_value=s,
        a_flag=a_flag,
        per_point=per_point,
    )
