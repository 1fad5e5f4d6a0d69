"""Zariski decomposition at fixed t and the exact parametric sweep.

The decomposition D = P + N is computed by the standard iterative
algorithm: keep adding every generator that pairs negatively with the
candidate positive part and re-solve the Gram orthogonality system.  An
independent brute-force oracle enumerates all negative-definite generator
subsets and certifies uniqueness; the two routes are compared in tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import cone
from .corenum import (
    Poly,
    Rat,
    SingularMatrixError,
    fmt,
    is_negative_definite,
    rat,
    solve_linear_system,
)
from .surface import DivisorClass, SurfaceModel


class ZariskiError(Exception):
    pass


class NotPseudoeffectiveError(ZariskiError):
    pass


class OracleInconsistencyError(ZariskiError):
    pass


@dataclass(frozen=True)
class Decomposition:
    p: DivisorClass
    n: dict[str, Rat]

    def n_class(self, model: SurfaceModel) -> DivisorClass:
        total = DivisorClass.zero(model.rank)
        for name, coeff in self.n.items():
            total = total + model.mori_generators[name].scale(coeff)
        return total


@dataclass(frozen=True)
class ZariskiPiece:
    """One t-interval of the sweep: support constant, coefficients affine."""

    t_lo: Rat
    t_hi: Rat
    p0: DivisorClass
    p1: DivisorClass  # P(t) = p0 + t*p1
    n_affine: dict[str, tuple[Rat, Rat]]  # name -> (n0, n1)
    vol: Poly  # P(t)^2

    def p_at(self, t: Rat) -> DivisorClass:
        return self.p0 + self.p1.scale(t)

    def n_at(self, t: Rat) -> dict[str, Rat]:
        return {name: n0 + t * n1 for name, (n0, n1) in self.n_affine.items()}


def _gram(model: SurfaceModel, names: list[str]):
    gens = [model.mori_generators[n] for n in names]
    return [[model.intersect(a, b) for b in gens] for a in gens]


def _solve_support(model: SurfaceModel, names: list[str], d: DivisorClass):
    """Coefficients n with (d - sum n_C C).C = 0 for C in the support."""
    gram = _gram(model, names)
    rhs = [model.intersect(d, model.mori_generators[n]) for n in names]
    return solve_linear_system(gram, rhs)


def zariski_fixed(model: SurfaceModel, d: DivisorClass) -> Decomposition:
    """Unique Zariski decomposition of a pseudoeffective class.

    Termination also serves as a pseudoeffectivity certificate: a class
    outside the effective cone cannot produce a nef positive part together
    with a nonnegative, negative-definite negative part.
    """
    support: list[str] = []
    generators = sorted(model.mori_generators)
    for _ in range(len(generators) + 1):
        if support:
            try:
                coeffs = _solve_support(model, support, d)
            except SingularMatrixError as exc:
                raise NotPseudoeffectiveError(
                    f"degenerate Gram system for support {support}"
                ) from exc
        else:
            coeffs = []
        p = d
        for name, c in zip(support, coeffs):
            p = p - model.mori_generators[name].scale(c)
        violated = [
            name
            for name in generators
            if name not in support
            and model.intersect(p, model.mori_generators[name]) < 0
        ]
        if not violated:
            if any(c < 0 for c in coeffs):
                raise NotPseudoeffectiveError(
                    "negative coefficient in the negative part"
                )
            if support and not is_negative_definite(_gram(model, support)):
                raise NotPseudoeffectiveError(
                    "support Gram matrix not negative definite"
                )
            n = {
                name: c for name, c in zip(support, coeffs) if c != 0
            }
            return Decomposition(p=p, n=n)
        support = sorted(set(support) | set(violated))
    raise ZariskiError("iteration failed to terminate")


# --- brute-force oracle ----------------------------------------------------

_subset_cache: dict[tuple, list[tuple[str, ...]]] = {}


def _neg_def_subsets(model: SurfaceModel) -> list[tuple[str, ...]]:
    # The admissible supports depend only on the intersection form and
    # the generator classes, so key the cache on exactly that data.
    key = (
        model.form.matrix,
        tuple(sorted(
            (name, g.coords) for name, g in model.mori_generators.items()
        )),
    )
    cached = _subset_cache.get(key)
    if cached is not None:
        return cached
    names = sorted(model.mori_generators)
    subsets: list[tuple[str, ...]] = [()]
    for size in range(1, len(names) + 1):
        for combo in combinations(names, size):
            if is_negative_definite(_gram(model, list(combo))):
                subsets.append(combo)
    _subset_cache[key] = subsets
    return subsets


def zariski_oracle(model: SurfaceModel, d: DivisorClass) -> Decomposition:
    """Enumerate every negative-definite support and certify uniqueness."""
    if len(model.mori_generators) > 12:
        raise ZariskiError("oracle limited to at most 12 generators")
    candidates: dict[tuple, Decomposition] = {}
    for subset in _neg_def_subsets(model):
        try:
            coeffs = _solve_support(model, list(subset), d) if subset else []
        except SingularMatrixError:
            continue
        if any(c < 0 for c in coeffs):
            continue
        p = d
        for name, c in zip(subset, coeffs):
            p = p - model.mori_generators[name].scale(c)
        if not cone.is_nef(model, p):
            continue
        n = {name: c for name, c in zip(subset, coeffs) if c != 0}
        key = (p.coords, tuple(sorted(n.items())))
        candidates[key] = Decomposition(p=p, n=n)
    if len(candidates) != 1:
        raise OracleInconsistencyError(
            f"{len(candidates)} Zariski candidates found (expected exactly 1)"
        )
    return next(iter(candidates.values()))


# --- parametric sweep ------------------------------------------------------


def _affine_solution(model: SurfaceModel, support: list[str], a, g):
    """Affine coefficient curves n(t) = n0 + t*n1 for fixed support."""
    if not support:
        return [], []
    gram = _gram(model, support)
    rhs0 = [model.intersect(a, model.mori_generators[n]) for n in support]
    rhs1 = [-model.intersect(g, model.mori_generators[n]) for n in support]
    return solve_linear_system(gram, rhs0), solve_linear_system(gram, rhs1)


def _piece_data(model: SurfaceModel, support: list[str], a, g):
    n0, n1 = _affine_solution(model, support, a, g)
    p0, p1 = a, g.scale(-1)
    for name, c0, c1 in zip(support, n0, n1):
        gen = model.mori_generators[name]
        p0 = p0 - gen.scale(c0)
        p1 = p1 - gen.scale(c1)
    return p0, p1, dict(zip(support, zip(n0, n1)))


def _constraints(model: SurfaceModel, support: list[str], p0, p1, n_affine):
    """Affine validity constraints c0 + c1*t >= 0 for a candidate support."""
    cons = []
    for name, (c0, c1) in n_affine.items():
        cons.append((c0, c1))
    for name in sorted(model.mori_generators):
        if name in support:
            continue
        gen = model.mori_generators[name]
        cons.append((model.intersect(p0, gen), model.intersect(p1, gen)))
    return cons


def _validity_interval(cons, lo, hi):
    """Largest subinterval of [lo, hi] where all affine constraints hold."""
    for c0, c1 in cons:
        if c1 > 0:
            lo = max(lo, -c0 / c1)
        elif c1 < 0:
            hi = min(hi, -c0 / c1)
        elif c0 < 0:
            return None
    return (lo, hi) if lo <= hi else None


def zariski_sweep(model: SurfaceModel, a: DivisorClass, g: DivisorClass):
    """Exact piecewise-affine Zariski decomposition of a - t*g on [0, tau]."""
    if not cone.is_nef(model, a):
        raise ZariskiError("polarization must be nef")
    if model.intersect(a, a) <= 0:
        raise ZariskiError("polarization must be big")
    if g.is_zero():
        raise ZariskiError("flag class must be nonzero")
    tau = cone.pseff_threshold(model, a, g)
    pieces: list[ZariskiPiece] = []
    t = Fraction(0)
    support = sorted(zariski_fixed(model, a).n)
    while t < tau:
        p0, p1, n_affine = _piece_data(model, support, a, g)
        interval = _validity_interval(
            _constraints(model, support, p0, p1, n_affine), t, tau
        )
        if interval is None or interval[0] > t:
            raise ZariskiError(
                f"support {support} invalid at t={fmt(t)} (modeling bug)"
            )
        t_hi = interval[1]
        vol = _expand_vol(model, p0, p1)
        pieces.append(
            ZariskiPiece(
                t_lo=t,
                t_hi=t_hi,
                p0=p0,
                p1=p1,
                n_affine=n_affine,
                vol=vol,
            )
        )
        if t_hi >= tau:
            break
        # find the support valid immediately to the right of t_hi by
        # probing with the fixed-t algorithm and bisecting toward t_hi
        # until the probe's validity interval connects to the breakpoint
        t, probe_hi = t_hi, tau
        for _ in range(64):
            probe = (t + probe_hi) / 2
            candidate = sorted(zariski_fixed(model, a - g.scale(probe)).n)
            q0, q1, qn = _piece_data(model, candidate, a, g)
            interval = _validity_interval(
                _constraints(model, candidate, q0, q1, qn), Fraction(0), tau
            )
            if interval is not None and interval[0] <= t <= interval[1]:
                support = candidate
                break
            probe_hi = probe
        else:
            raise ZariskiError("support bisection failed to converge")
    return pieces


def _expand_vol(model: SurfaceModel, p0, p1) -> Poly:
    return Poly.of(
        model.intersect(p0, p0),
        2 * model.intersect(p0, p1),
        model.intersect(p1, p1),
    )
