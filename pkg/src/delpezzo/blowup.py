"""Derive surface models from blowup scripts.

A script starts from a base surface, performs an ordered chain of point
blowups (step j >= 2 is centered on the intersection of the previous
exceptional curve with the strict transforms listed for that step; this is
how tangency is encoded combinatorially), then contracts the intermediate
exceptional chain.  The result is the intersection table, pullback data
and flag log-discrepancy of the contracted surface -- an independent
derivation path for the hand-written configs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .corenum import (
    LinearFraction,
    Rat,
    fmt,
    is_negative_definite,
    rat,
    solve_linear_system,
)
from .surface import DivisorClass, IntersectionForm, SurfaceModel


class BlowupError(Exception):
    pass


@dataclass(frozen=True)
class BlowupStep:
    """One point blowup; incident maps curve names to multiplicities."""

    incident: dict[str, int]


@dataclass(frozen=True)
class BlowupScript:
    name: str
    base: str
    steps: tuple[BlowupStep, ...]
    basis: tuple[str, ...]  # basis names of the contracted surface
    generators: tuple[str, ...]  # Mori generators of the contracted surface
    flag: str = "G"  # name given to the surviving exceptional curve
    boundary: str = ""


@dataclass
class TowerModel:
    """The top of the blowup tower before the chain contraction.

    Classes live in the orthogonal lattice (base basis, e_1, ..., e_m)
    where e_j is the total transform of the j-th exceptional divisor.
    """

    base: SurfaceModel
    steps: int
    curves: dict[str, DivisorClass]  # strict transforms
    pullbacks: dict[str, DivisorClass]  # total transforms of base curves
    canonical: DivisorClass  # K of the tower
    canonical_pullback: DivisorClass  # pullback of the base K

    @property
    def rank(self) -> int:
        return self.base.rank + self.steps

    def form_matrix(self):
        r, m = self.base.rank, self.steps
        rows = []
        for i in range(r + m):
            row = []
            for j in range(r + m):
                if i < r and j < r:
                    row.append(self.base.form.matrix[i][j])
                elif i == j:
                    row.append(Fraction(-1))
                else:
                    row.append(Fraction(0))
            rows.append(row)
        return rows

    def pair(self, d1: DivisorClass, d2: DivisorClass) -> Rat:
        form = self.form_matrix()
        total = Fraction(0)
        for i, x in enumerate(d1.coords):
            if x == 0:
                continue
            for j, y in enumerate(d2.coords):
                if y != 0:
                    total += x * form[i][j] * y
        return total


def run_blowup_script(script: BlowupScript, base: SurfaceModel) -> TowerModel:
    """Perform the iterated point blowups of the script on the base."""
    rank = base.rank
    m = len(script.steps)

    def extend(d: DivisorClass) -> DivisorClass:
        return DivisorClass(d.coords + (Fraction(0),) * m)

    curves: dict[str, DivisorClass] = {}
    for name, cls in list(base.mori_generators.items()) + list(
        base.extra_curves.items()
    ):
        curves[name] = extend(cls)
    pullbacks = dict(curves)
    if base.boundary is not None and script.boundary:
        curves.setdefault(script.boundary, extend(base.boundary))
        pullbacks.setdefault(script.boundary, extend(base.boundary))
    canonical = extend(base.polarization.scale(-1))  # -K is the polarization
    canonical_pullback = canonical
    for j, step in enumerate(script.steps):
        e_j = DivisorClass.unit(rank + m, rank + j)
        for name, mult in step.incident.items():
            if name not in curves:
                raise BlowupError(f"step {j + 1}: unknown curve {name!r}")
            curves[name] = curves[name] - e_j.scale(mult)
        if j > 0:
            prev = f"exc{j}"
            curves[prev] = curves[prev] - e_j
        curves[f"exc{j + 1}"] = e_j
        canonical = canonical + e_j
    # the last exceptional survives the contraction; give it the name the
    # contracted surface uses for its flag curve
    curves[script.flag] = curves.pop(f"exc{m}")
    return TowerModel(
        base=base,
        steps=m,
        curves=curves,
        pullbacks=pullbacks,
        canonical=canonical,
        canonical_pullback=canonical_pullback,
    )


@dataclass
class ContractedModel:
    """Survivor classes and intersection data after the chain contraction."""

    tower: TowerModel
    chain: tuple[str, ...]
    starred: dict[str, DivisorClass]  # survivor pullbacks, chain-orthogonal
    sing_order: int

    def pair(self, name1: str, name2: str) -> Rat:
        return self.tower.pair(self.starred[name1], self.starred[name2])


def _orthogonalize(tower: TowerModel, chain_classes, d: DivisorClass):
    """d + sum c_i A_i with the result orthogonal to every chain curve."""
    if not chain_classes:
        return d
    gram = [[tower.pair(a, b) for b in chain_classes] for a in chain_classes]
    rhs = [-tower.pair(d, a) for a in chain_classes]
    coeffs = solve_linear_system(gram, rhs)
    for c, a in zip(coeffs, chain_classes):
        d = d + a.scale(c)
    return d


def contract_chain(tower: TowerModel, survivors=None) -> ContractedModel:
    """Contract the intermediate exceptional chain exc1..exc(m-1).

    Checks the chain has the expected Dynkin-chain dual graph of
    (-2)-curves with negative-definite Gram, then orthogonalizes every
    survivor against it.
    """
    m = tower.steps
    chain = tuple(f"exc{j}" for j in range(1, m))
    chain_classes = [tower.curves[c] for c in chain]
    for i, a in enumerate(chain_classes):
        if tower.pair(a, a) != -2:
            raise BlowupError("chain curve is not a (-2)-curve")
        for j in range(i + 1, len(chain_classes)):
            expected = 1 if j == i + 1 else 0
            if tower.pair(a, chain_classes[j]) != expected:
                raise BlowupError("chain dual graph is not a Dynkin chain")
    if chain_classes:
        gram = [
            [tower.pair(a, b) for b in chain_classes] for a in chain_classes
        ]
        if not is_negative_definite(gram):
            raise BlowupError("chain Gram matrix is not negative definite")
    if survivors is None:
        survivors = [n for n in tower.curves if n not in chain]
    starred = {
        name: _orthogonalize(tower, chain_classes, tower.curves[name])
        for name in survivors
    }
    return ContractedModel(
        tower=tower, chain=chain, starred=starred, sing_order=m
    )


def flag_discrepancy(
    contracted: ContractedModel, flag: str, boundary: str
) -> tuple[Rat, Rat, LinearFraction]:
    """Coefficients of the flag in the canonical and boundary pullbacks.

    Returns (c_K, c_C, A) where the pullback of K picks up -c_K copies of
    the flag, the boundary pullback picks up +c_C copies, and the log
    discrepancy of the flag for boundary coefficient (1-lam) is
    A(lam) = 1 + c_K - (1-lam)*c_C.
    """
    tower = contracted.tower
    chain_classes = [tower.curves[c] for c in contracted.chain]
    g_star = contracted.starred[flag]
    k_hat = _orthogonalize(tower, chain_classes, tower.canonical)

    def coefficient(diff: DivisorClass) -> Rat:
        ref = tower.pair(g_star, g_star)
        c = tower.pair(diff, g_star) / ref
        check = g_star.scale(c)
        if check.coords != diff.coords:
            raise BlowupError("pullback difference is not a flag multiple")
        return c

    # K_tower = pullback(K_base) + sum e_j and the chain is crepant, so
    # pullback(K_base) - K_hat = -c_K * G*
    c_k = coefficient(
        DivisorClass(
            tuple(
                a - b
                for a, b in zip(
                    k_hat.coords, tower.canonical_pullback.coords
                )
            )
        )
    )
    c_hat = contracted.starred[boundary]
    c_c = coefficient(tower.pullbacks[boundary] - c_hat)
    a_fn = LinearFraction.of(1 + c_k - c_c, c_c, 1, 0)
    return c_k, c_c, a_fn


def derive_model(
    script: BlowupScript, base: SurfaceModel
) -> SurfaceModel:
    """Full pipeline: blow up, contract, express everything in the declared
    basis, and package the result as a SurfaceModel for comparison with the
    hand-written config."""
    tower = run_blowup_script(script, base)
    survivors = set(script.generators) | set(script.basis) | {script.flag}
    if script.boundary:
        survivors.add(script.boundary)
    contracted = contract_chain(tower, sorted(survivors))
    basis_classes = [contracted.starred[n] for n in script.basis]

    def in_basis(d: DivisorClass) -> DivisorClass:
        # solve for coordinates using the (nondegenerate) Gram matrix of
        # the declared basis inside the chain-orthogonal sublattice
        gram = [
            [tower.pair(a, b) for b in basis_classes] for a in basis_classes
        ]
        rhs = [tower.pair(d, b) for b in basis_classes]
        coords = solve_linear_system(gram, rhs)
        # verify the class really lies in the span
        recon = DivisorClass.zero(tower.rank)
        for c, cls in zip(coords, basis_classes):
            recon = recon + cls.scale(c)
        if recon.coords != d.coords:
            raise BlowupError("class outside the span of the declared basis")
        return DivisorClass(tuple(coords))

    form = IntersectionForm.of(
        [
            [tower.pair(a, b) for b in basis_classes]
            for a in basis_classes
        ]
    )
    generators = {
        name: in_basis(contracted.starred[name]) for name in script.generators
    }
    polarization = in_basis(
        _orthogonalize(
            tower,
            [tower.curves[c] for c in contracted.chain],
            tower.canonical_pullback.scale(-1),
        )
    )
    boundary = None
    c_k = c_c = Fraction(0)
    if script.boundary:
        boundary = in_basis(contracted.starred[script.boundary])
        c_k, c_c, _ = flag_discrepancy(contracted, script.flag, script.boundary)
    return SurfaceModel(
        name=f"{script.name}:derived",
        basis_names=script.basis,
        form=form,
        mori_generators=generators,
        polarization=polarization,
        boundary=boundary,
        flag=script.flag,
        flag_class=generators.get(
            script.flag, in_basis(contracted.starred[script.flag])
        ),
        flag_c_k=c_k,
        flag_c_c=c_c,
    )


def script_from_dict(data: dict) -> BlowupScript:
    return BlowupScript(
        name=data["name"],
        base=data["base"],
        steps=tuple(
            BlowupStep(incident={k: int(v) for k, v in s.items()})
            for s in data["steps"]
        ),
        basis=tuple(data["basis"]),
        generators=tuple(data["generators"]),
        flag=data.get("flag", "G"),
        boundary=data.get("boundary", ""),
    )


def load_script(path: Union[str, Path]) -> BlowupScript:
    with open(path) as handle:
        return script_from_dict(json.load(handle))
