"""Data model for a polarized surface given by intersection data.

A SurfaceModel records a Neron-Severi basis, the intersection form, the
Mori-cone generators, the normalized polarization (the boundary parameter
lam is factored out; see the invariants module for the scaling contract),
an optional flag curve with its log-discrepancy data, and marked points on
the flag with local intersection multiplicities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .corenum import Rat, fmt, rat, symmetric_signature


class ModelError(Exception):
    """Invalid or inconsistent surface data."""


@dataclass(frozen=True)
class DivisorClass:
    """Rational divisor class as coordinates in the declared basis."""

    coords: tuple[Rat, ...]

    @staticmethod
    def of(values) -> "DivisorClass":
        return DivisorClass(tuple(rat(v) for v in values))

    @staticmethod
    def zero(rank: int) -> "DivisorClass":
        return DivisorClass(tuple(Fraction(0) for _ in range(rank)))

    @staticmethod
    def unit(rank: int, index: int) -> "DivisorClass":
        return DivisorClass(
            tuple(Fraction(1 if i == index else 0) for i in range(rank))
        )

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: Rat) -> "DivisorClass":
        c = rat(c)
        return DivisorClass(tuple(c * a for a in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(fmt(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class IntersectionForm:
    """Symmetric bilinear form on the divisor lattice."""

    matrix: tuple[tuple[Rat, ...], ...]

    @staticmethod
    def of(rows) -> "IntersectionForm":
        return IntersectionForm(tuple(tuple(rat(v) for v in row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def pair(self, d1: DivisorClass, d2: DivisorClass) -> Rat:
        if len(d1) != self.rank or len(d2) != self.rank:
            raise ModelError("divisor class length does not match the lattice rank")
        total = Fraction(0)
        for i, a in enumerate(d1.coords):
            if a == 0:
                continue
            row = self.matrix[i]
            for j, b in enumerate(d2.coords):
                if b != 0:
                    total += a * row[j] * b
        return total

    def is_symmetric(self) -> bool:
        n = self.rank
        return all(
            self.matrix[i][j] == self.matrix[j][i]
            for i in range(n)
            for j in range(i + 1, n)
        )

    def signature(self) -> tuple[int, int, int]:
        return symmetric_signature(self.matrix)


@dataclass(frozen=True)
class MarkedPoint:
    """A point on the flag curve with local intersection data.

    sing_order is n for a quotient singularity of order n at the point
    (1 at a smooth point).  local_mults maps curve names to the local
    intersection number with the flag at this point; boundary_mult is the
    local intersection of the boundary strict transform with the flag.
    """

    name: str
    sing_order: int
    local_mults: dict[str, Rat]
    boundary_mult: Rat


@dataclass(frozen=True)
class SurfaceModel:
    name: str
    basis_names: tuple[str, ...]
    form: IntersectionForm
    mori_generators: dict[str, DivisorClass]
    polarization: DivisorClass
    boundary: Optional[DivisorClass] = None
    flag: Optional[str] = None
    flag_class: Optional[DivisorClass] = None
    flag_c_k: Rat = Fraction(0)
    flag_c_c: Rat = Fraction(0)
    marked_points: tuple[MarkedPoint, ...] = ()
    unmarked_remainder: dict[str, Rat] = field(default_factory=dict)
    boundary_remainder: Rat = Fraction(0)
    extra_curves: dict[str, DivisorClass] = field(default_factory=dict)
    description: str = ""

    @property
    def rank(self) -> int:
        return self.form.rank

    def intersect(self, d1: DivisorClass, d2: DivisorClass) -> Rat:
        return self.form.pair(d1, d2)

    def generator(self, name: str) -> DivisorClass:
        if name in self.mori_generators:
            return self.mori_generators[name]
        raise ModelError(f"unknown generator {name!r}")

    def curve_class(self, name: str) -> DivisorClass:
        if name in self.mori_generators:
            return self.mori_generators[name]
        if name in self.extra_curves:
            return self.extra_curves[name]
        raise ModelError(f"unknown curve {name!r}")

    def point(self, name: str) -> MarkedPoint:
        for q in self.marked_points:
            if q.name == name:
                return q
        raise ModelError(f"unknown marked point {name!r}")

    def scaled(self, lam: Rat) -> "SurfaceModel":
        """The same surface with the polarization scaled by lam.

        Used by the fixed-lam verification mode to confirm that every
        result is homogeneous of degree one in the boundary parameter.
        """
        return SurfaceModel(
            name=self.name,
            basis_names=self.basis_names,
            form=self.form,
            mori_generators=self.mori_generators,
            polarization=self.polarization.scale(lam),
            boundary=self.boundary,
            flag=self.flag,
            flag_class=self.flag_class,
            flag_c_k=self.flag_c_k,
            flag_c_c=self.flag_c_c,
            marked_points=self.marked_points,
            unmarked_remainder=self.unmarked_remainder,
            boundary_remainder=self.boundary_remainder,
            extra_curves=self.extra_curves,
            description=self.description,
        )


@dataclass
class ValidationReport:
    problems: list[str] = field(default_factory=list)

    def add(self, message: str) -> None:
        self.problems.append(message)

    @property
    def ok(self) -> bool:
        return not self.problems

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.problems)


def validate(model: SurfaceModel) -> ValidationReport:
    """Check every structural invariant of a surface model."""
    report = ValidationReport()
    rank = model.rank
    if len(model.basis_names) != rank:
        report.add("basis name count does not match the form rank")
    if not model.form.is_symmetric():
        report.add("intersection form is not symmetric")
        return report
    pos, neg, zero = model.form.signature()
    if (pos, neg, zero) != (1, rank - 1, 0):
        report.add(
            f"form signature is ({pos},{neg},{zero}); expected (1,{rank - 1},0)"
        )
    if not model.mori_generators:
        report.add("no Mori-cone generators declared")
    for name, cls in list(model.mori_generators.items()) + list(
        model.extra_curves.items()
    ):
        if len(cls) != rank:
            report.add(f"curve {name!r} has wrong coordinate length")
    if len(model.polarization) != rank:
        report.add("polarization has wrong coordinate length")
        return report
    deg = model.intersect(model.polarization, model.polarization)
    if deg <= 0:
        report.add(f"polarization is not big: self-intersection {fmt(deg)}")
    from . import cone  # local import: cone depends on this module

    if model.mori_generators and not cone.is_pseudoeffective(
        model, model.polarization
    ):
        report.add("polarization is not in the effective cone")
    if model.flag is not None:
        if model.flag_class is None or len(model.flag_class) != rank:
            report.add("flag class missing or wrong length")
            return report
        for q in model.marked_points:
            if q.sing_order < 1:
                report.add(f"point {q.name!r}: singularity order must be >= 1")
            if q.boundary_mult < 0:
                report.add(f"point {q.name!r}: negative boundary multiplicity")
            for cname, mult in q.local_mults.items():
                if mult < 0:
                    report.add(f"point {q.name!r}: negative local multiplicity")
                if cname not in model.mori_generators and cname not in model.extra_curves:
                    report.add(f"point {q.name!r}: unknown curve {cname!r}")
        # local multiplicities must account for the full global products
        names = set(model.unmarked_remainder)
        for q in model.marked_points:
            names.update(q.local_mults)
        for cname in sorted(names):
            try:
                cls = model.curve_class(cname)
            except ModelError:
                continue
            total = model.unmarked_remainder.get(cname, Fraction(0))
            for q in model.marked_points:
                total += q.local_mults.get(cname, Fraction(0))
            global_product = model.intersect(cls, model.flag_class)
            if total != global_product:
                report.add(
                    f"curve {cname!r}: local multiplicities sum to {fmt(total)}"
                    f" but {cname}.G = {fmt(global_product)}"
                )
        if model.boundary is not None:
            total = model.boundary_remainder
            for q in model.marked_points:
                total += q.boundary_mult
            global_product = model.intersect(model.boundary, model.flag_class)
            if total != global_product:
                report.add(
                    "boundary: local multiplicities sum to "
                    f"{fmt(total)} but C.G = {fmt(global_product)}"
                )
    return report


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------


def _vec(values) -> DivisorClass:
    return DivisorClass.of(values)


def model_from_dict(data: dict) -> SurfaceModel:
    try:
        points = tuple(
            MarkedPoint(
                name=q["name"],
                sing_order=int(q.get("sing_order", 1)),
                local_mults={k: rat(v) for k, v in q.get("local_mults", {}).items()},
                boundary_mult=rat(q.get("boundary_mult", 0)),
            )
            for q in data.get("marked_points", [])
        )
        disc = data.get("flag_discrepancy", {})
        return SurfaceModel(
            name=data["name"],
            basis_names=tuple(data["basis"]),
            form=IntersectionForm.of(data["form"]),
            mori_generators={k: _vec(v) for k, v in data["mori_generators"].items()},
            polarization=_vec(data["polarization"]),
            boundary=_vec(data["boundary"]) if "boundary" in data else None,
            flag=data.get("flag"),
            flag_class=_vec(data["mori_generators"][data["flag"]])
            if data.get("flag") in data.get("mori_generators", {})
            else (_vec(data["flag_class"]) if "flag_class" in data else None),
            flag_c_k=rat(disc.get("c_k", 0)),
            flag_c_c=rat(disc.get("c_c", 0)),
            marked_points=points,
            unmarked_remainder={
                k: rat(v) for k, v in data.get("unmarked_remainder", {}).items()
            },
            boundary_remainder=rat(data.get("boundary_remainder", 0)),
            extra_curves={
                k: _vec(v) for k, v in data.get("extra_curves", {}).items()
            },
            description=data.get("description", ""),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed surface config: {exc}") from exc


def load_model(path: Union[str, Path]) -> SurfaceModel:
    with open(path) as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ModelError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return model_from_dict(data)
