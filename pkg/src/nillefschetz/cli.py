"""Command line interface: ``validate``, ``analyze``, ``lefschetz`` and ``betti``.

Exit codes: 0 success, 1 validation failure / module error / MISMATCH,
2 unreadable or malformed problem file.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from .algebraic import classify_unit_circle
from .dynamics import lie_algebra_of, validate_endomorphism_map, validate_group
from .errors import EigenvalueOne, LefschetzError, SpecError, UnsupportedScalarTower
from .exact import char_poly
from .hyperbolic import AnosovClass, anosov_class, is_gamma_acceptable, split
from .lefschetz import DEFAULT_PRECISION, FoliationChoice, FoliationKind, Verdict, nomizu_check, verify
from .lie import lower_central_series, validate_algebra, validate_endomorphism
from .problem import ProblemSpec, load_problem
from .serialize import scalar_to_json

EXIT_OK, EXIT_FAIL, EXIT_SPEC = 0, 1, 2


def parse_precision(text: str) -> Fraction:
    """Accept ``p/q``, integers, decimals like ``1e-20`` and powers ``2^-64``."""
    m = re.fullmatch(r"\s*(\d+)\^(-?\d+)\s*", text)
    try:
        if m:
            value = Fraction(int(m.group(1))) ** int(m.group(2))
        else:
            value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid precision {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("precision must be positive")
    return value


def _emit(obj: dict, text: str, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text.rstrip("\n") + "\n")


def _error(exc: Exception, fmt: str, code: int) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    details = getattr(exc, "details", None)
    if details:
        payload.update(details)
    witness = getattr(exc, "witness", None)
    if witness is not None:
        payload["witness"] = list(witness) if isinstance(witness, tuple) else witness
    if fmt == "json":
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
    return code


def _vec(v) -> list:
    return [scalar_to_json(x) for x in v]


# ---------------------------------------------------------------------------
# validate

def cmd_validate(spec: ProblemSpec, args) -> int:
    out: dict = {"name": spec.name}
    ok = True
    alg = validate_algebra(spec.algebra())
    out["algebra"] = alg.to_json()
    ok &= alg.ok
    G = spec.resolved_group()
    grp = validate_group(G)
    out["group"] = dict(grp.to_json(), source="explicit" if spec.group_is_explicit else "bch")
    warns = list(G.warnings)
    if spec.group_is_explicit:
        ok &= grp.ok
        if spec.lie_algebra is not None and spec.lie_algebra != lie_algebra_of(G):
            ok = False
            out["group"]["failure"] = "group law does not induce the declared Lie algebra"
    else:
        # exponential coordinates: lattice closure only matters for fixed points
        structural = grp.identity and grp.inverse and grp.associative
        ok &= structural
        if not grp.integer_valued:
            warns.append("Z^n is not a subgroup in exponential coordinates; fixed points unavailable")
    f = spec.endomorphism()
    if f is not None and ok:
        try:
            endo = validate_endomorphism_map(G, f) if (spec.group_is_explicit or grp.integer_valued) else None
            if endo is None:
                validate_endomorphism(spec.algebra(), f.linear_part())
                lin = f.linear_part()
            else:
                lin = endo.linear_part
            out["endomorphism"] = {"ok": True, "linear_part": lin.to_json()}
        except LefschetzError as e:
            ok = False
            out["endomorphism"] = {"ok": False, "error": type(e).__name__, "message": str(e)}
            w = getattr(e, "witness", None)
            if w is not None:
                out["endomorphism"]["witness"] = list(w) if isinstance(w, tuple) else w
    out["warnings"] = warns
    out["ok"] = bool(ok)
    lines = [f"{spec.name}: {'valid' if ok else 'INVALID'}",
             f"  algebra: antisymmetric={alg.antisymmetric} jacobi={alg.jacobi} nilpotent={alg.nilpotent}"
             f" class={alg.nilpotency_class}" + (f"  [{alg.failure}]" if alg.failure else ""),
             f"  group ({out['group']['source']}): identity={grp.identity} inverse={grp.inverse}"
             f" associative={grp.associative} triangular={grp.triangular}"
             f" integer_valued={grp.integer_valued} layers={grp.layers}"
             + (f"  [{out['group']['failure']}]" if out['group']['failure'] else "")]
    if "endomorphism" in out:
        e = out["endomorphism"]
        lines.append("  endomorphism: ok" if e["ok"] else f"  endomorphism: {e['error']}: {e['message']}")
    lines += [f"  warning: {w}" for w in warns]
    _emit(out, "\n".join(lines), args.format)
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# analyze

def _require_endomorphism(spec: ProblemSpec):
    f = spec.endomorphism()
    if f is None:
        raise SpecError(f"{spec.name}: problem has no endomorphism")
    return f


def cmd_analyze(spec: ProblemSpec, args) -> int:
    L = spec.algebra()
    F = _require_endomorphism(spec).linear_part()
    validate_endomorphism(L, F, forbid_eigenvalue_one=False)
    cls = anosov_class(F)
    if cls is AnosovClass.NEITHER:
        raise EigenvalueOne("f_* has eigenvalue 1")
    chain = lower_central_series(L)
    chi = char_poly(F)
    counts = classify_unit_circle(chi)
    out = {
        "name": spec.name,
        "central_series": [{"j": j, "dim": c.dim, "basis": [_vec(b) for b in c.basis]} for j, c in enumerate(chain)],
        "nilpotency_class": len(chain) - 1,
        "char_poly": chi.to_json(),
        "unit_circle": {"inside": counts.inside, "on": counts.on, "outside": counts.outside},
        "anosov_class": cls.value,
    }
    try:
        S = split(F, L)
        out["splitting"] = {
            "dims": {"unstable": S.unstable.dim, "stable": S.stable.dim, "neutral": S.neutral.dim},
            "scalar_extension": S.scalar_extension.to_json() if S.scalar_extension else None,
            "unstable": [_vec(b) for b in S.unstable.basis],
            "stable": [_vec(b) for b in S.stable.basis],
            "neutral": [_vec(b) for b in S.neutral.basis],
        }
        acc_u = is_gamma_acceptable(S.unstable, L, chain)
        acc_s = is_gamma_acceptable(S.stable, L, chain)
        out["acceptability"] = {"unstable": acc_u.to_json(), "stable": acc_s.to_json()}
        out["acceptable"] = acc_u.overall
    except UnsupportedScalarTower as e:
        out["splitting"] = {"dims": {"unstable": counts.outside, "stable": counts.inside, "neutral": counts.on},
                            "unsupported": str(e)}
        out["acceptability"] = None
        out["acceptable"] = None
    d = out["splitting"]["dims"]
    lines = [f"{spec.name}",
             f"  central series dims: {[c['dim'] for c in out['central_series']]} (class {out['nilpotency_class']})",
             f"  char poly: {chi}",
             f"  roots inside/on/outside unit circle: {counts.inside}/{counts.on}/{counts.outside}",
             f"  class: {cls.value}",
             f"  dims (u, s, e) = ({d['unstable']}, {d['stable']}, {d['neutral']})"]
    if out["acceptability"] is None:
        lines.append(f"  splitting unavailable: {out['splitting']['unsupported']}")
    else:
        for side in ("unstable", "stable"):
            rep = out["acceptability"][side]
            lay = ", ".join(f"j={v['j']}:{'dense' if v['dense'] else 'not dense, witness ' + str(v['witness'])}"
                            for v in rep["layers"])
            lines.append(f"  {side} lattice-acceptable: {rep['overall']} ({lay})")
    _emit(out, "\n".join(lines), args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# lefschetz

def cmd_lefschetz(spec: ProblemSpec, args) -> int:
    if args.foliation is not None:
        choice = FoliationChoice.parse(args.foliation)
        if choice.kind is FoliationKind.CUSTOM:
            if spec.foliation is None or spec.foliation.kind is not FoliationKind.CUSTOM:
                raise SpecError("--foliation custom needs a custom basis in the problem file")
            choice = spec.foliation
    else:
        choice = spec.foliation or FoliationChoice(FoliationKind.UNSTABLE)
    precision = args.precision or spec.precision or DEFAULT_PRECISION
    f = _require_endomorphism(spec)
    G = spec.resolved_group()
    endo = validate_endomorphism_map(G, f)
    report = verify(G, endo, choice, precision)
    _emit(dict(report.to_json(), name=spec.name), f"{spec.name}\n{report.to_text()}", args.format)
    return EXIT_OK if report.verdict is not Verdict.MISMATCH else EXIT_FAIL


# ---------------------------------------------------------------------------
# betti

def cmd_betti(spec: ProblemSpec, args) -> int:
    expected = args.expected if args.expected is not None else spec.expected_betti
    rep = nomizu_check(spec.algebra(), expected)
    out = dict(rep.to_json(), name=spec.name)
    text = f"{spec.name}: betti {tuple(rep.betti)}, euler {rep.euler}"
    if rep.matches is not None:
        text += f", expected {tuple(rep.expected)}: {'match' if rep.matches else 'MISMATCH'}"
    _emit(out, text, args.format)
    return EXIT_OK if rep.matches is not False else EXIT_FAIL


COMMANDS = {"validate": cmd_validate, "analyze": cmd_analyze, "lefschetz": cmd_lefschetz, "betti": cmd_betti}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nillefschetz",
                                     description="Verify the dynamical Lefschetz formula on nilmanifolds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("spec", help="problem file (or the name of a bundled fixture)")
        p.add_argument("--format", choices=["json", "text"], default="json")

    common(sub.add_parser("validate", help="check the algebra, group law and endomorphism"))
    common(sub.add_parser("analyze", help="central series, Anosov class, splitting, acceptability"))
    lp = sub.add_parser("lefschetz", help="compute and compare both sides of the trace formula")
    common(lp)
    lp.add_argument("--foliation", choices=["unstable", "stable", "zero", "custom"], default=None)
    lp.add_argument("--precision", type=parse_precision, default=None,
                    help="interval width for the fallback mode (default 2^-64)")
    bp = sub.add_parser("betti", help="Betti numbers of the Lie algebra (Nomizu check)")
    common(bp)
    bp.add_argument("--expected", type=lambda s: [int(v) for v in s.split(",")], default=None,
                    help="comma separated expected Betti numbers")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_problem(args.spec)
    except SpecError as e:
        return _error(e, args.format, EXIT_SPEC)
    try:
        return COMMANDS[args.command](spec, args)
    except SpecError as e:
        return _error(e, args.format, EXIT_SPEC)
    except LefschetzError as e:
        return _error(e, args.format, EXIT_FAIL)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
