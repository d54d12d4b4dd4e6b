"""Command-line front end: every computation as a reproducible JSON report.

Exit codes: 0 when every asserted check passes, 1 when a mathematical
assertion fails, 2 on usage or build errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from math import prod
from pathlib import Path

from . import __version__
from .cherednik import (
    GramCapError,
    base_parameter,
    c_function,
    gram_and_dimension,
    sigma,
    singular_subspace,
)
from .exactnum import CycNumber, parse_rational, render_rational
from .group import (
    GroupBuildError,
    GroupSpec,
    build_group,
    builtin_rep,
    is_amenable,
    load_generator_file,
    stats,
)
from .oracle import OracleError, hilbert_table
from .parallel import set_threads
from .series import degree_data, koszul_det_multiplicity, koszul_graded_dim, numerology_report

EXIT_OK, EXIT_MATH, EXIT_USAGE = 0, 1, 2
EPSILON_RETRIES = (Fraction(0), Fraction(1, 97), Fraction(1, 101))


class UsageError(Exception):
    pass


def jsonable(obj):
    """Fractions become ints or "p/q"; tuples become lists; keys become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return render_rational(obj)
    if isinstance(obj, CycNumber):
        return render_rational(obj.to_rational()) if obj.is_rational() else obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# commands


def _load(args):
    if args.spec and args.gens:
        raise UsageError("give exactly one of --spec and --gens")
    if args.spec:
        spec = GroupSpec.parse(args.spec)
    elif args.gens:
        spec = load_generator_file(args.gens)
    else:
        raise UsageError("a group is required: --spec \"G(l,m,n)\" or --gens FILE")
    return build_group(spec)


def cmd_group(G, args) -> tuple[dict, int]:
    st = stats(G)
    dd = degree_data(G, args.trunc)
    amen = {}
    for name in ("V", "V*"):
        ok, cert = is_amenable(G, builtin_rep(G, name))
        amen[name] = {"amenable": ok, "C_H": [cert[o] for o in sorted(cert)]}
    report = {
        "order": st.order,
        "N": st.N,
        "Nstar": st.Nstar,
        "h": st.h,
        "g": st.g,
        "orbits": [{"size": len(o), "n_H": G.orbit_n_h(k)} for k, o in enumerate(G.orbits)],
        "degrees": dd.degrees,
        "exponents": dd.exponents_by_rep,
        "coexponents": dd.coexponents,
        "amenability": amen,
        "warnings": G.warnings + st.warnings,
    }
    return report, EXIT_OK


def cmd_numerology(G, args) -> tuple[dict, int]:
    report = numerology_report(G, args.trunc)
    return report, EXIT_OK if report["all_asserted_pass"] else EXIT_MATH


def cmd_koszul(G, args) -> tuple[dict, int]:
    st = stats(G)
    shift = args.shift if args.shift is not None else int(st.g) + 1
    out = {}
    for name in ("V", "V*"):
        res = koszul_det_multiplicity(G, builtin_rep(G, name), shift=shift, trunc=args.trunc)
        out[name] = {
            "coeffs": res.coeffs,
            "monomial": res.monomial,
            "degree": res.degree,
            "integral": res.integral,
        }
    poly, value = koszul_graded_dim(G, shift)
    report = {
        "shift": shift,
        "g": st.g,
        "det_series": out,
        "graded_dim": poly,
        "value": value,
        "single_monomial": [k for k in ("V", "V*") if out[k]["monomial"]],
    }
    return report, EXIT_OK


def cmd_lowest(G, args) -> tuple[dict, int]:
    st = stats(G)
    g = int(st.g)
    target = (g + 1) ** G.rank
    tries = [parse_rational(args.epsilon)] if args.epsilon is not None else list(EPSILON_RETRIES)
    attempts = []
    chosen = None
    for eps in tries:
        c0, base = base_parameter(G, eps)
        c = sigma(base)
        try:
            gram = gram_and_dimension(G, c)
        except GramCapError as exc:
            attempts.append({"epsilon": eps, "error": str(exc)})
            continue
        attempts.append({"epsilon": eps, "dim": gram.dimension, "det_mult": gram.det_multiplicity})
        if gram.dimension == target and gram.det_multiplicity == 1:
            chosen = (eps, c0, base, c, gram)
            break
    report = {"g": g, "target": target, "attempts": attempts}
    if chosen is None:
        report["passed"] = False
        return report, EXIT_MATH
    eps, c0, base, c, gram = chosen
    sing = singular_subspace(G, c, g + 1)
    has_reflection_type = any(sing.reflection_type.values())
    report.update(
        {
            "epsilon": eps,
            "c0": c0,
            "base_parameter": base,
            "sigma_parameter": c,
            "c_hstar_at_sigma": c_function(G, "V*", c),
            "c_V_at_sigma": c_function(G, "V", c),
            "dim": gram.dimension,
            "det_mult": gram.det_multiplicity,
            "det_inverse_mult": gram.det_inverse_multiplicity,
            "ranks": gram.ranks,
            "termination_degree": gram.termination_degree,
            "singular": sing.to_json(),
            "passed": has_reflection_type,
        }
    )
    return report, EXIT_OK if has_reflection_type else EXIT_MATH


def cmd_oracle(G, args) -> tuple[dict, int]:
    st = stats(G)
    g = int(st.g)
    table = hilbert_table(G)
    dd = degree_data(G, args.trunc)
    lower = prod(Fraction(g + c + 1, d) for c, d in zip(dd.coexponents, dd.degrees))
    px, py = table.margins()
    checks = {
        "dim_at_least_power": table.total >= (g + 1) ** G.rank,
        "det_at_least_catalan_bound": table.det_multiplicity >= lower,
        "symmetric": table.is_symmetric(),
        "margins_equal_order": px == G.order and py == G.order,
    }
    report = dict(table.to_json())
    report.update({"g": g, "power": (g + 1) ** G.rank, "catalan_lower_bound": lower, "checks": checks})
    report["csv"] = table.to_csv()
    return report, EXIT_OK if all(checks.values()) else EXIT_MATH


COMMANDS = {
    "group": cmd_group,
    "numerology": cmd_numerology,
    "koszul": cmd_koszul,
    "lowest": cmd_lowest,
    "oracle": cmd_oracle,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reflab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"reflab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--spec", help='family group, e.g. "G(3,1,2)"')
        sp.add_argument("--gens", help="generator file (JSON)")
        sp.add_argument("--trunc", type=int, help="series truncation order")
        sp.add_argument("--epsilon", help="perturbation p/q inside the c_h* = 1 locus (lowest)")
        sp.add_argument("--shift", type=int, help="Koszul shift (default g+1)")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")
    return p


def run(argv=None) -> tuple[str, int, str | None]:
    """Parse, compute and render; returns (text, exit code, output path)."""
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        raise UsageError("--threads must be positive")
    if args.format == "csv" and args.command != "oracle":
        raise UsageError("CSV output is only available for the oracle table")
    set_threads(args.threads)
    G = _load(args)
    report, code = COMMANDS[args.command](G, args)
    if args.format == "csv":
        return report["csv"], code, args.out
    report.pop("csv", None)
    params = {k: getattr(args, k) for k in ("trunc", "epsilon", "shift")}
    report.update(
        {
            "command": args.command,
            "spec": G.spec.to_json(),
            "parameters": {k: v for k, v in params.items() if v is not None},
            "version": __version__,
            "exit_code": code,
        }
    )
    return dumps(report), code, args.out


def main(argv=None) -> int:
    try:
        text, code, out = run(argv)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_USAGE if exc.code not in (0, None) else 0
    except (UsageError, GroupBuildError, OracleError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
