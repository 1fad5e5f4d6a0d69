"""Exact rational arithmetic building blocks.

Everything downstream (cone tests, Zariski sweeps, invariant integrals,
delta-bound assembly) works over the rationals with no rounding anywhere:
this module provides the shared number type, degree-<=2 polynomials in the
sweep parameter t, linear-fractional functions of the boundary parameter
lam, piecewise functions built from either, and small dense linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction


class CoreError(Exception):
    """Base class for exact-arithmetic errors."""


class DomainError(CoreError):
    """An argument lies outside the declared domain."""


class PoleError(CoreError):
    """A denominator vanishes inside the working domain."""


class NotRepresentableError(CoreError):
    """A required breakpoint is irrational and cannot be stored."""


class SingularMatrixError(CoreError):
    """Linear system has no unique solution."""


def rat(value: Union[int, str, Fraction]) -> Rat:
    """Parse a rational from an int, a Fraction, or a "p/q" string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value).strip())


def fmt(value: Rat) -> str:
    """Serialize a rational as "p/q" ("p" when the denominator is 1)."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# polynomials in t
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Poly:
    """Polynomial with rational coefficients, stored low degree first."""

    coeffs: tuple[Rat, ...]

    @staticmethod
    def of(*coeffs: Union[int, str, Fraction]) -> "Poly":
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return Poly(tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def __call__(self, x: Rat) -> Rat:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return Poly.of(*[x + y for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(Fraction(-1))

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly.of(*out)

    def scale(self, c: Rat) -> "Poly":
        return Poly.of(*[a * c for a in self.coeffs])

    def integral(self, a: Rat, b: Rat) -> Rat:
        """Exact definite integral over [a, b]."""
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            total += c * (b ** (k + 1) - a ** (k + 1)) / (k + 1)
        return total


def affine(c0: Rat, c1: Rat) -> Poly:
    return Poly.of(c0, c1)


# ---------------------------------------------------------------------------
# linear-fractional functions of lam
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearFraction:
    """lam |-> (p0 + p1*lam) / (q0 + q1*lam), canonicalized.

    Canonical form: if the numerator and denominator share a factor of lam
    (p0 == q0 == 0) it is cancelled; then the leading nonzero denominator
    coefficient is normalized to 1.
    """

    p0: Rat
    p1: Rat
    q0: Rat
    q1: Rat

    @staticmethod
    def of(p0, p1, q0, q1) -> "LinearFraction":
        p0, p1, q0, q1 = rat(p0), rat(p1), rat(q0), rat(q1)
        if q0 == 0 and q1 == 0:
            raise PoleError("zero denominator")
        if p0 == 0 and q0 == 0:
            p0, p1, q0, q1 = p1, Fraction(0), q1, Fraction(0)
        lead = q0 if q0 != 0 else q1
        return LinearFraction(p0 / lead, p1 / lead, q0 / lead, q1 / lead)

    @staticmethod
    def const(c) -> "LinearFraction":
        return LinearFraction.of(c, 0, 1, 0)

    def __call__(self, lam: Rat) -> Rat:
        den = self.q0 + self.q1 * lam
        if den == 0:
            raise PoleError(f"pole at lam={fmt(lam)}")
        return (self.p0 + self.p1 * lam) / den

    def is_constant(self) -> bool:
        return self.p1 == 0 and self.q1 == 0

    def __str__(self) -> str:
        def lin(c0, c1):
            if c1 == 0:
                return fmt(c0)
            if c0 == 0:
                return "lam" if c1 == 1 else f"{fmt(c1)}*lam"
            return f"({fmt(c0)}+{fmt(c1)}*lam)"

        num = lin(self.p0, self.p1)
        if self.q0 == 1 and self.q1 == 0:
            return num
        return f"{num}/{lin(self.q0, self.q1)}"


Piece = Union[Poly, LinearFraction]


def _sqrt_exact(x: Rat):
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _quad_roots(a: Rat, b: Rat, c: Rat, lo: Rat, hi: Rat) -> list[Rat]:
    """Rational roots of a*x^2+b*x+c inside the open interval (lo, hi).

    Raises NotRepresentableError if an irrational root falls inside.
    """
    if a == 0:
        if b == 0:
            return []
        r = -c / b
        return [r] if lo < r < hi else []
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    sq = _sqrt_exact(disc)
    if sq is None:
        # bracket sqrt(disc) with integers scaled by the denominator
        scale = disc.denominator
        num = disc.numerator * scale  # disc = num / scale^2
        root_lo = Fraction(math.isqrt(num), scale)
        root_hi = root_lo + Fraction(1, scale)
        for s in (1, -1):
            r_lo = (-b + s * (root_lo if s > 0 else root_hi)) / (2 * a)
            r_hi = (-b + s * (root_hi if s > 0 else root_lo)) / (2 * a)
            r_lo, r_hi = min(r_lo, r_hi), max(r_lo, r_hi)
            if r_hi > lo and r_lo < hi:
                raise NotRepresentableError(
                    "irrational crossing inside the working domain"
                )
        return []
    roots = {(-b + sq) / (2 * a), (-b - sq) / (2 * a)}
    return [r for r in roots if lo < r < hi]


# ---------------------------------------------------------------------------
# piecewise functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseFn:
    """Continuous piecewise function over a closed rational interval.

    breakpoints are strictly increasing; piece i lives on
    [breakpoints[i], breakpoints[i+1]].  labels optionally record, per
    piece, which input produced it (used by pw_min and delta assembly).
    Continuity at interior breakpoints is checked exactly on construction.
    """

    breakpoints: tuple[Rat, ...]
    pieces: tuple[Piece, ...]
    labels: tuple = ()

    def __post_init__(self):
        if len(self.pieces) != len(self.breakpoints) - 1:
            raise DomainError("piece count must be breakpoint count - 1")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise DomainError("breakpoints must strictly increase")
        for i in range(1, len(self.pieces)):
            x = self.breakpoints[i]
            left, right = self.pieces[i - 1](x), self.pieces[i](x)
            if left != right:
                raise DomainError(
                    f"discontinuity at {fmt(x)}: {fmt(left)} != {fmt(right)}"
                )

    @staticmethod
    def single(piece: Piece, lo, hi) -> "PiecewiseFn":
        return PiecewiseFn((rat(lo), rat(hi)), (piece,))

    @property
    def lo(self) -> Rat:
        return self.breakpoints[0]

    @property
    def hi(self) -> Rat:
        return self.breakpoints[-1]

    def piece_at(self, x: Rat) -> Piece:
        if not self.lo <= x <= self.hi:
            raise DomainError(f"{fmt(x)} outside [{fmt(self.lo)}, {fmt(self.hi)}]")
        for i in range(len(self.pieces)):
            if x <= self.breakpoints[i + 1]:
                return self.pieces[i]
        return self.pieces[-1]

    def __call__(self, x: Rat) -> Rat:
        return self.piece_at(x)(x)


def pw_integrate(f: PiecewiseFn, a: Rat, b: Rat) -> Rat:
    """Exact integral of a piecewise polynomial over [a, b] within its domain."""
    a, b = rat(a), rat(b)
    if not (f.lo <= a <= b <= f.hi):
        raise DomainError("integration interval outside the function domain")
    total = Fraction(0)
    for i, piece in enumerate(f.pieces):
        if not isinstance(piece, Poly):
            raise DomainError("pw_integrate requires polynomial pieces")
        lo = max(a, f.breakpoints[i])
        hi = min(b, f.breakpoints[i + 1])
        if lo < hi:
            total += piece.integral(lo, hi)
    return total


def pw_min(fns: Sequence[LinearFraction], lo=0, hi=1, labels=None) -> PiecewiseFn:
    """Exact pointwise minimum of linear-fractional functions on [lo, hi].

    The left endpoint may be a pole of some inputs (the minimum is taken on
    the open interior and extended by the piece formula); every denominator
    must be positive on the interior.  Breakpoints are the rational pairwise
    crossings; each piece is labeled with the active input (its index, or
    the caller-supplied label for it).
    """
    lo, hi = rat(lo), rat(hi)
    if labels is not None and len(labels) != len(fns):
        raise DomainError("labels must match the function list")
    if not fns:
        raise DomainError("pw_min of an empty list")
    for f in fns:
        d_lo, d_hi = f.q0 + f.q1 * lo, f.q0 + f.q1 * hi
        if d_lo < 0 or d_hi <= 0 or (d_lo == 0 and f.q1 <= 0):
            raise PoleError(f"denominator of {f} not positive on the domain")
    cuts = {lo, hi}
    for i in range(len(fns)):
        for j in range(i + 1, len(fns)):
            f, g = fns[i], fns[j]
            # (p + p'lam)(r + r'lam) = (s + s'lam)(q + q'lam)
            a = f.p1 * g.q1 - g.p1 * f.q1
            b = f.p0 * g.q1 + f.p1 * g.q0 - g.p0 * f.q1 - g.p1 * f.q0
            c = f.p0 * g.q0 - g.p0 * f.q0
            cuts.update(_quad_roots(a, b, c, lo, hi))
    points = sorted(cuts)
    breakpoints = [points[0]]
    pieces: list[Piece] = []
    active: list[int] = []
    for a, b in zip(points, points[1:]):
        mid = (a + b) / 2
        values = [f(mid) for f in fns]
        best = min(range(len(fns)), key=lambda k: (values[k], k))
        if pieces and active[-1] == best:
            breakpoints[-1] = b
        else:
            breakpoints.append(b)
            pieces.append(fns[best])
            active.append(best)
    out_labels = tuple(
        labels[k] if labels is not None else k for k in active
    )
    return PiecewiseFn(tuple(breakpoints), tuple(pieces), out_labels)


# ---------------------------------------------------------------------------
# dense linear algebra over the rationals
# ---------------------------------------------------------------------------

Matrix = Sequence[Sequence[Rat]]


def solve_linear_system(matrix: Matrix, rhs: Sequence[Rat]) -> list[Rat]:
    """Solve M x = rhs exactly by Gaussian elimination.

    Raises SingularMatrixError when M is singular.
    """
    n = len(rhs)
    aug = [[Fraction(matrix[i][j]) for j in range(n)] + [Fraction(rhs[i])]
           for i in range(n)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError("singular matrix")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def symmetric_signature(matrix: Matrix) -> tuple[int, int, int]:
    """Signature (positive, negative, zero) of a symmetric rational matrix.

    Computed by exact congruence diagonalization.
    """
    n = len(matrix)
    m = [[Fraction(matrix[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if m[i][j] != m[j][i]:
                raise DomainError("matrix is not symmetric")
    pos = neg = zero = 0
    for k in range(n):
        if m[k][k] == 0:
            swap = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if swap is not None:
                m[k], m[swap] = m[swap], m[k]
                for row in m:
                    row[k], row[swap] = row[swap], row[k]
            else:
                other = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if other is None:
                    zero += 1
                    continue
                for j in range(n):
                    m[k][j] += m[other][j]
                for i in range(n):
                    m[i][k] += m[i][other]
        d = m[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if m[i][k] != 0:
                factor = m[i][k] / d
                for j in range(n):
                    m[i][j] -= factor * m[k][j]
        for j in range(k + 1, n):
            m[k][j] = Fraction(0)
            m[j][k] = Fraction(0)
    return pos, neg, zero


def is_negative_definite(matrix: Matrix) -> bool:
    n = len(matrix)
    pos, neg, zero = symmetric_signature(matrix)
    return neg == n and pos == 0 and zero == 0
