"""Command-line interface and bundled-data registry.

Subcommands cover the whole pipeline: Zariski decompositions (point and
parametric), S-invariants and their refinements at marked points, flag and
point bounds on delta, global assembly over case lists, stability-range
thresholds, derivation of surface data from blowup scripts, and a
`reproduce` harness that checks every computed quantity against the
bundled reference expectations.

Exit codes: 0 success, 2 malformed input or failed validation, 3 a
computation that raised (non-pseudoeffective class, irrational breakpoint,
inconsistent oracle, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import blowup, cone, delta, invariants, surface, zariski
from .corenum import (
    CoreError,
    LinearFraction,
    PiecewiseFn,
    Poly,
    Rat,
    fmt,
    rat,
)

ASSETS = Path(__file__).parent / "assets"

THEOREM_TARGETS = ("thm1_1", "thm1_2", "thm2_1", "thm2_2")


class CliInputError(Exception):
    """Bad user input: unknown name, malformed rational, invalid config."""


# ---------------------------------------------------------------------------
# bundled-data registry
# ---------------------------------------------------------------------------


def _resolve(kind: str, name: str) -> Path:
    candidate = Path(name)
    if candidate.suffix == ".json" and candidate.exists():
        return candidate
    path = ASSETS / kind / f"{name}.json"
    if not path.exists():
        raise CliInputError(f"unknown {kind[:-1]} {name!r}")
    return path


def list_names(kind: str) -> list[str]:
    return sorted(p.stem for p in (ASSETS / kind).glob("*.json"))


def load_config(name: str, validated: bool = True) -> surface.SurfaceModel:
    try:
        model = surface.load_model(_resolve("configs", name))
    except surface.ModelError as exc:
        raise CliInputError(str(exc)) from exc
    if validated:
        report = surface.validate(model)
        if not report.ok:
            raise CliInputError(f"invalid config {name!r}:\n{report}")
    return model


def load_golden(name: str) -> dict:
    with open(_resolve("golden", name)) as handle:
        return json.load(handle)


def load_script(name: str) -> blowup.BlowupScript:
    return blowup.load_script(_resolve("scripts", name))


def load_target(name: str) -> dict:
    with open(_resolve("targets", name)) as handle:
        return json.load(handle)


_results: dict[str, invariants.FlagResult] = {}


def flag_result_for(name: str) -> invariants.FlagResult:
    if name not in _results:
        _results[name] = invariants.flag_result(load_config(name))
    return _results[name]


def target_cases(target: dict) -> list[delta.DeltaCase]:
    """Expand a bundled case list into DeltaCase objects."""

    def expand(refs) -> list[delta.BoundFn]:
        bounds: list[delta.BoundFn] = []
        for ref in refs:
            fr = flag_result_for(ref["config"])
            kind = ref["kind"]
            if kind == "flag":
                bounds.append(delta.flag_bound(fr))
            elif kind == "point":
                bounds.append(delta.point_bound(fr, ref["point"]))
            elif kind == "az":
                bounds.extend(delta.az_bounds(fr))
            else:
                raise CliInputError(f"unknown bound kind {kind!r}")
        return bounds

    return [
        delta.DeltaCase(
            name=case["name"],
            lower=tuple(expand(case["lower"])),
            upper=tuple(expand(case["upper"])),
        )
        for case in target["cases"]
    ]


def assemble_target(name: str) -> delta.GlobalDelta:
    return delta.assemble_global(target_cases(load_target(name)))


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def ser_poly(p: Poly) -> list[str]:
    return [fmt(c) for c in p.coeffs]


def ser_linfrac(f: LinearFraction) -> dict:
    return {"num": [fmt(f.p0), fmt(f.p1)], "den": [fmt(f.q0), fmt(f.q1)]}


def ser_piecewise(f: PiecewiseFn) -> list[dict]:
    out = []
    for i, piece in enumerate(f.pieces):
        entry: dict = {
            "from": fmt(f.breakpoints[i]),
            "to": fmt(f.breakpoints[i + 1]),
        }
        if isinstance(piece, Poly):
            entry["poly"] = ser_poly(piece)
        else:
            entry.update(ser_linfrac(piece))
        if f.labels:
            entry["active"] = f.labels[i]
        out.append(entry)
    return out


def poly_str(p: Poly) -> str:
    if not p.coeffs:
        return "0"
    parts = []
    for k, c in enumerate(p.coeffs):
        if c == 0:
            continue
        term = fmt(c) if k == 0 else (f"{fmt(c)}*t" if k == 1 else f"{fmt(c)}*t^{k}")
        parts.append(term)
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _parse_rat(text: str) -> Rat:
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise CliInputError(f"malformed rational {text!r}") from exc


def cmd_zariski(args) -> int:
    model = load_config(args.config)
    t = _parse_rat(args.t)
    if t < 0:
        raise CliInputError("t must be nonnegative")
    if model.flag_class is None:
        raise CliInputError(f"config {model.name!r} declares no flag")
    d = model.polarization - model.flag_class.scale(t)
    dec = (
        zariski.zariski_oracle(model, d)
        if args.oracle
        else zariski.zariski_fixed(model, d)
    )
    if args.json:
        print(
            json.dumps(
                {
                    "config": model.name,
                    "t": fmt(t),
                    "p": [fmt(c) for c in dec.p.coords],
                    "n": {k: fmt(v) for k, v in sorted(dec.n.items())},
                },
                indent=2,
            )
        )
    else:
        print(f"P = {dec.p}")
        if dec.n:
            terms = " + ".join(f"{fmt(c)}*{k}" for k, c in sorted(dec.n.items()))
            print(f"N = {terms}")
        else:
            print("N = 0")
    return 0


def _require_flag(model: surface.SurfaceModel) -> None:
    if model.flag_class is None:
        raise CliInputError(f"config {model.name!r} declares no flag")


def cmd_sweep(args) -> int:
    model = load_config(args.config)
    _require_flag(model)
    pieces = zariski.zariski_sweep(model, model.polarization, model.flag_class)
    if args.json:
        out = []
        for piece in pieces:
            out.append(
                {
                    "from": fmt(piece.t_lo),
                    "to": fmt(piece.t_hi),
                    "support": sorted(piece.n_affine),
                    "n": {
                        k: [fmt(c0), fmt(c1)]
                        for k, (c0, c1) in sorted(piece.n_affine.items())
                    },
                    "vol": ser_poly(piece.vol),
                }
            )
        print(json.dumps({"config": model.name, "pieces": out}, indent=2))
    else:
        print(f"tau = {fmt(pieces[-1].t_hi)}")
        for piece in pieces:
            support = ", ".join(sorted(piece.n_affine)) or "-"
            print(
                f"[{fmt(piece.t_lo)}, {fmt(piece.t_hi)}] "
                f"support {{{support}}}  vol = {poly_str(piece.vol)}"
            )
    return 0


def cmd_svalue(args) -> int:
    model = load_config(args.config)
    _require_flag(model)
    lam = _parse_rat(args.lam) if args.lam else Fraction(1)
    if not 0 < lam <= 1:
        raise CliInputError("lambda must lie in (0, 1]")
    fr = invariants.flag_result(model, lam)
    if args.json:
        print(
            json.dumps(
                {
                    "config": model.name,
                    "lambda": fmt(lam),
                    "tau": fmt(fr.tau),
                    "s": fmt(fr.s_value),
                    "vol": ser_piecewise(fr.vol_fn),
                },
                indent=2,
            )
        )
    else:
        print(f"tau = {fmt(fr.tau)}")
        print(f"S = {fmt(fr.s_value)}" + ("" if args.lam else " * lam"))
    return 0


def cmd_swq(args) -> int:
    model = load_config(args.config)
    _require_flag(model)
    lam = _parse_rat(args.lam) if args.lam else Fraction(1)
    if not 0 < lam <= 1:
        raise CliInputError("lambda must lie in (0, 1]")
    fr = invariants.flag_result(model, lam)
    points = fr.per_point
    if args.point:
        if args.point not in points:
            raise CliInputError(f"unknown marked point {args.point!r}")
        points = {args.point: points[args.point]}
    if args.json:
        print(
            json.dumps(
                {
                    "config": model.name,
                    "lambda": fmt(lam),
                    "swq": {
                        name: {"value": fmt(v), "a": ser_linfrac(a)}
                        for name, (v, a) in sorted(points.items())
                    },
                },
                indent=2,
            )
        )
    else:
        suffix = "" if args.lam else " * lam"
        for name, (value, a_q) in sorted(points.items()):
            print(f"S(W;{name}) = {fmt(value)}{suffix}   A({name}) = {a_q}")
    return 0


def cmd_flagbound(args) -> int:
    fr = flag_result_for(args.config)
    bound = delta.flag_bound(fr)
    az = delta.az_lower_bound(fr)
    if args.json:
        print(
            json.dumps(
                {
                    "config": args.config,
                    "flag_bound": ser_linfrac(bound.expr),
                    "az": ser_piecewise(az),
                },
                indent=2,
            )
        )
    else:
        print(f"flag bound: {bound.expr}")
        print("lower envelope:")
        for i, piece in enumerate(az.pieces):
            print(
                f"  [{fmt(az.breakpoints[i])}, {fmt(az.breakpoints[i + 1])}] "
                f"{piece}   ({az.labels[i]})"
            )
    return 0


def cmd_delta(args) -> int:
    result = assemble_target(args.target)
    if args.lam:
        lam = _parse_rat(args.lam)
        if not 0 < lam <= 1:
            raise CliInputError("lambda must lie in (0, 1]")
        lower, upper = result.lower(lam), result.upper(lam)
        if args.json:
            print(
                json.dumps(
                    {
                        "target": args.target,
                        "lambda": fmt(lam),
                        "lower": fmt(lower),
                        "upper": fmt(upper),
                        "exact": result.is_exact_at(lam),
                    },
                    indent=2,
                )
            )
        elif result.is_exact_at(lam):
            print(f"delta = {fmt(lower)}")
        else:
            print(f"{fmt(lower)} <= delta <= {fmt(upper)}")
        return 0
    if args.json:
        print(
            json.dumps(
                {
                    "target": args.target,
                    "lower": ser_piecewise(result.lower),
                    "upper": ser_piecewise(result.upper),
                    "exact": [[fmt(a), fmt(b)] for a, b in result.exact],
                },
                indent=2,
            )
        )
    else:
        print("lower envelope:")
        for i, piece in enumerate(result.lower.pieces):
            a = result.lower.breakpoints[i]
            b = result.lower.breakpoints[i + 1]
            tag = "exact" if result.is_exact_at((a + b) / 2) else "lower bound"
            print(f"  [{fmt(a)}, {fmt(b)}] {piece}   ({tag})")
    return 0


def cmd_rthreshold(args) -> int:
    result = assemble_target(args.target)
    r = delta.r_threshold(result.lower)
    warning = ""
    if r == 0:
        warning = "no lambda with delta > 1 certified"
    elif not result.is_exact_at(r):
        warning = "threshold crossing lies outside the exact region"
    if args.json:
        out = {"target": args.target, "r": fmt(r)}
        if warning:
            out["warning"] = warning
        print(json.dumps(out, indent=2))
    else:
        print(f"R = {fmt(r)}")
        if warning:
            print(f"warning: {warning}", file=sys.stderr)
    return 0


def cmd_derive(args) -> int:
    script = load_script(args.script)
    base = load_config(script.base)
    derived = blowup.derive_model(script, base)
    mismatches = compare_derived(script.name, derived)
    if args.json:
        print(
            json.dumps(
                {
                    "script": script.name,
                    "basis": list(derived.basis_names),
                    "form": [[fmt(v) for v in row] for row in derived.form.matrix],
                    "mori_generators": {
                        k: [fmt(c) for c in v.coords]
                        for k, v in sorted(derived.mori_generators.items())
                    },
                    "polarization": [fmt(c) for c in derived.polarization.coords],
                    "flag_discrepancy": {
                        "c_k": fmt(derived.flag_c_k),
                        "c_c": fmt(derived.flag_c_c),
                    },
                    "matches_config": not mismatches,
                    "mismatches": mismatches,
                },
                indent=2,
            )
        )
    else:
        print(f"basis: {', '.join(derived.basis_names)}")
        for row in derived.form.matrix:
            print("  [" + ", ".join(fmt(v) for v in row) + "]")
        for name, cls in sorted(derived.mori_generators.items()):
            print(f"{name} = {cls}")
        print(f"polarization = {derived.polarization}")
        print(f"c_K = {fmt(derived.flag_c_k)}, c_C = {fmt(derived.flag_c_c)}")
        if mismatches:
            print("MISMATCH vs declared config:")
            for line in mismatches:
                print(f"  {line}")
        else:
            print("matches the declared config")
    return 0 if not mismatches else 3


def compare_derived(name: str, derived: surface.SurfaceModel) -> list[str]:
    """Diff a script-derived model against the hand-written config."""
    declared = load_config(name)
    problems: list[str] = []
    if derived.basis_names != declared.basis_names:
        problems.append("basis names differ")
        return problems
    if derived.form.matrix != declared.form.matrix:
        problems.append("intersection form differs")
    ours = set(derived.mori_generators)
    theirs = set(declared.mori_generators)
    if ours != theirs:
        problems.append(f"generator sets differ: {sorted(ours ^ theirs)}")
    for gen in sorted(ours & theirs):
        if derived.mori_generators[gen] != declared.mori_generators[gen]:
            problems.append(f"generator {gen} coordinates differ")
    if derived.polarization != declared.polarization:
        problems.append("polarization differs")
    if declared.boundary is not None and derived.boundary != declared.boundary:
        problems.append("boundary class differs")
    if (derived.flag_c_k, derived.flag_c_c) != (
        declared.flag_c_k,
        declared.flag_c_c,
    ):
        problems.append("flag discrepancy coefficients differ")
    return problems


# ---------------------------------------------------------------------------
# reproduce harness
# ---------------------------------------------------------------------------


def _check(lines, label, computed, expected):
    if computed == expected:
        lines.append(("PASS", f"{label}: {computed}"))
    else:
        lines.append(
            ("FAIL", f"{label}: computed {computed}, expected {expected}")
        )


def _golden_linfrac(entry: dict) -> LinearFraction:
    p0, p1 = (rat(v) for v in entry["num"])
    q0, q1 = (rat(v) for v in entry["den"])
    return LinearFraction.of(p0, p1, q0, q1)


def reproduce_config(name: str) -> list[tuple[str, str]]:
    lines: list[tuple[str, str]] = []
    golden = load_golden(name)
    model = load_config(name)
    fr = flag_result_for(name)
    _check(lines, f"{name} tau", fmt(fr.tau), golden["tau"])
    vol = [
        {
            "from": fmt(fr.vol_fn.breakpoints[i]),
            "to": fmt(fr.vol_fn.breakpoints[i + 1]),
            "poly": ser_poly(piece),
        }
        for i, piece in enumerate(fr.vol_fn.pieces)
    ]
    _check(lines, f"{name} vol pieces", vol, golden["vol"])
    _check(lines, f"{name} S", fmt(fr.s_value), golden["s"])
    for q, (value, a_q) in sorted(fr.per_point.items()):
        _check(lines, f"{name} S(W;{q})", fmt(value), golden["swq"][q])
        _check(
            lines,
            f"{name} A({q})",
            ser_linfrac(a_q),
            golden["a_points"][q],
        )
    _check(
        lines,
        f"{name} A(flag)",
        ser_linfrac(fr.a_flag),
        golden["a_flag"],
    )
    az = delta.az_lower_bound(fr)
    az_ser = [
        {
            "from": fmt(az.breakpoints[i]),
            "to": fmt(az.breakpoints[i + 1]),
            **ser_linfrac(piece),
        }
        for i, piece in enumerate(az.pieces)
    ]
    _check(lines, f"{name} lower envelope", az_ser, golden["az"])
    report = surface.validate(model)
    if report.ok:
        lines.append(("PASS", f"{name} config validation"))
    else:
        lines.append(("FAIL", f"{name} config validation: {report}"))
    for note in golden.get("notes", []):
        lines.append(("NOTE", f"{name}: {note}"))
    return lines


def reproduce_theorem(name: str) -> list[tuple[str, str]]:
    lines: list[tuple[str, str]] = []
    golden = load_golden(name)
    result = assemble_target(name)
    pieces = []
    for i, piece in enumerate(result.lower.pieces):
        a = result.lower.breakpoints[i]
        b = result.lower.breakpoints[i + 1]
        pieces.append(
            {
                "from": fmt(a),
                "to": fmt(b),
                **ser_linfrac(piece),
                "exact": result.is_exact_at((a + b) / 2),
            }
        )
    _check(lines, f"{name} delta pieces", pieces, golden["pieces"])
    r = delta.r_threshold(result.lower)
    _check(lines, f"{name} R", fmt(r), golden["r"])
    if r > 0 and not result.is_exact_at(r):
        lines.append(
            ("FAIL", f"{name}: threshold crossing outside the exact region")
        )
    for note in golden.get("notes", []):
        lines.append(("NOTE", f"{name}: {note}"))
    return lines


def reproduce_main() -> list[tuple[str, str]]:
    lines: list[tuple[str, str]] = []
    golden = load_golden("main")
    for target in THEOREM_TARGETS:
        result = assemble_target(target)
        r = delta.r_threshold(result.lower)
        _check(lines, f"main {target} R", fmt(r), golden[target])
    return lines


def cmd_reproduce(args) -> int:
    target = args.target
    configs = list_names("configs")
    configs = [c for c in configs if not c.endswith("_base")]
    if target == "all":
        jobs = configs + list(THEOREM_TARGETS) + ["main"]
    elif target == "thm1":
        jobs = ["thm1_1", "thm1_2"]
    elif target == "thm2":
        jobs = ["thm2_1", "thm2_2"]
    elif target in THEOREM_TARGETS or target in configs or target == "main":
        jobs = [target]
    else:
        raise CliInputError(f"unknown reproduce target {target!r}")
    lines: list[tuple[str, str]] = []
    for job in jobs:
        if job == "main":
            lines.extend(reproduce_main())
        elif job in THEOREM_TARGETS:
            lines.extend(reproduce_theorem(job))
        else:
            lines.extend(reproduce_config(job))
    failed = sum(1 for status, _ in lines if status == "FAIL")
    if args.json:
        print(
            json.dumps(
                {
                    "target": target,
                    "results": [
                        {"status": status, "message": msg}
                        for status, msg in lines
                    ],
                    "failed": failed,
                },
                indent=2,
            )
        )
    else:
        for status, msg in lines:
            print(f"{status} {msg}")
        passed = sum(1 for status, _ in lines if status == "PASS")
        notes = sum(1 for status, _ in lines if status == "NOTE")
        print(f"{passed} passed, {failed} failed, {notes} notes")
    return 0 if failed == 0 else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delpezzo",
        description=(
            "Exact delta-invariant bounds for two del Pezzo surfaces via "
            "parametric Zariski decomposition"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="JSON output")
        return p

    p = add("zariski", cmd_zariski, "Zariski decomposition of A - t*G")
    p.add_argument("config")
    p.add_argument("t", help="sweep parameter, as p/q")
    p.add_argument("--oracle", action="store_true",
                   help="use the brute-force subset oracle")

    p = add("sweep", cmd_sweep, "parametric Zariski decomposition on [0, tau]")
    p.add_argument("config")

    p = add("svalue", cmd_svalue, "S-invariant of the config's flag")
    p.add_argument("config")
    p.add_argument("--lambda", dest="lam", metavar="p/q",
                   help="evaluate at a fixed boundary parameter")

    p = add("swq", cmd_swq, "refined invariants at the marked points")
    p.add_argument("config")
    p.add_argument("--point", help="restrict to one marked point")
    p.add_argument("--lambda", dest="lam", metavar="p/q",
                   help="evaluate at a fixed boundary parameter")

    p = add("flagbound", cmd_flagbound,
            "flag bound and lower envelope of one config")
    p.add_argument("config")

    p = add("delta", cmd_delta, "global delta envelopes for a case list")
    p.add_argument("target")
    p.add_argument("--lambda", dest="lam", metavar="p/q",
                   help="evaluate at a fixed boundary parameter")

    p = add("rthreshold", cmd_rthreshold,
            "largest boundary parameter with delta > 1")
    p.add_argument("target")

    p = add("derive", cmd_derive,
            "derive surface data from a blowup script and diff it")
    p.add_argument("script")

    p = add("reproduce", cmd_reproduce,
            "check computed values against the bundled expectations")
    p.add_argument("target", help="config name, thm1, thm2, main, or all")

    return parser


COMPUTE_ERRORS = (
    CoreError,
    cone.ConeError,
    zariski.ZariskiError,
    blowup.BlowupError,
    invariants.InvariantError,
    delta.DeltaError,
)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except surface.ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except COMPUTE_ERRORS as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
