"""Effective-cone and nef-cone tests against the declared Mori generators.

The effective cone is taken to be the cone spanned by the model's Mori
generators; membership and the pseudoeffective threshold are decided by
exact Fourier-Motzkin elimination over the rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .corenum import Rat, fmt, rat
from .surface import DivisorClass, SurfaceModel


class ConeError(Exception):
    pass


class UnboundedError(ConeError):
    """The pseudoeffective threshold is not finite."""


# A constraint is (coeffs, const) meaning sum(coeffs[i]*x[i]) + const >= 0.
_Constraint = tuple[tuple[Fraction, ...], Fraction]


def _normalize(con: _Constraint) -> _Constraint:
    coeffs, const = con
    lead = next((c for c in coeffs if c != 0), None)
    if lead is None:
        return con
    scale = 1 / abs(lead)
    return tuple(c * scale for c in coeffs), const * scale


def _eliminate(constraints: list[_Constraint], var: int) -> list[_Constraint]:
    """Fourier-Motzkin elimination of variable `var`."""
    pos, neg, free = [], [], []
    for coeffs, const in constraints:
        c = coeffs[var]
        if c > 0:
            pos.append((coeffs, const))
        elif c < 0:
            neg.append((coeffs, const))
        else:
            free.append((coeffs, const))
    out = {_normalize(con) for con in free}
    for pc, pk in pos:
        for nc, nk in neg:
            # scale so the eliminated coefficients cancel
            a, b = -nc[var], pc[var]
            coeffs = tuple(a * p + b * n for p, n in zip(pc, nc))
            out.add(_normalize((coeffs, a * pk + b * nk)))
    return list(out)


def _feasible(constraints: list[_Constraint], nvars: int) -> bool:
    for var in range(nvars):
        constraints = _eliminate(constraints, var)
    return all(const >= 0 for _, const in constraints)


def _membership_constraints(
    model: SurfaceModel, target: DivisorClass, extra_vars: int = 0
) -> tuple[list[_Constraint], list[str]]:
    """Constraints expressing target = sum x_i * C_i with x >= 0.

    Trailing extra_vars slots are appended to every coefficient vector for
    the caller to fill in (used for the parametric threshold).
    """
    names = sorted(model.mori_generators)
    n = len(names) + extra_vars
    constraints: list[_Constraint] = []
    for j in range(model.rank):
        row = [model.mori_generators[name].coords[j] for name in names]
        row += [Fraction(0)] * extra_vars
        constraints.append((tuple(row), -target.coords[j]))
        constraints.append((tuple(-c for c in row), target.coords[j]))
    for i in range(len(names)):
        unit = tuple(
            Fraction(1 if k == i else 0) for k in range(n)
        )
        constraints.append((unit, Fraction(0)))
    return constraints, names


def is_nef(model: SurfaceModel, d: DivisorClass) -> bool:
    """True iff d pairs nonnegatively with every Mori generator."""
    return all(
        model.intersect(d, cls) >= 0 for cls in model.mori_generators.values()
    )


def is_pseudoeffective(model: SurfaceModel, d: DivisorClass) -> bool:
    """True iff d is a nonnegative combination of the Mori generators."""
    constraints, names = _membership_constraints(model, d)
    return _feasible(constraints, len(names))


def pseff_threshold(model: SurfaceModel, a: DivisorClass, g: DivisorClass) -> Rat:
    """Largest t >= 0 with a - t*g pseudoeffective.

    Solved as a parametric feasibility problem: eliminate the combination
    coefficients, leaving exact rational bounds on t.
    """
    names = sorted(model.mori_generators)
    nvars = len(names)
    constraints, _ = _membership_constraints(model, a, extra_vars=1)
    # fold "- t*g" into the equality rows: row.x - t*g_j - a_j in both signs
    folded: list[_Constraint] = []
    for idx, (coeffs, const) in enumerate(constraints):
        if idx < 2 * model.rank:
            j = idx // 2
            sign = 1 if idx % 2 == 0 else -1
            coeffs = coeffs[:nvars] + (sign * g.coords[j],)
        folded.append((coeffs, const))
    for var in range(nvars):
        folded = _eliminate(folded, var)
    upper, lower = None, Fraction(0)
    for coeffs, const in folded:
        c = coeffs[nvars]
        if c == 0:
            if const < 0:
                raise ConeError("infeasible threshold problem (A not effective)")
        elif c > 0:
            lower = max(lower, -const / c)
        else:
            bound = -const / c
            upper = bound if upper is None else min(upper, bound)
    if upper is None:
        raise UnboundedError("A - tG stays pseudoeffective for all t")
    if upper < lower:
        raise ConeError(
            f"empty threshold interval [{fmt(lower)}, {fmt(upper)}]"
        )
    return upper
