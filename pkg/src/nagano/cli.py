"""Command-line interface.

Every subcommand reads one JSON document (file path or ``-`` for stdin),
writes a report to stdout and exits 0; validation failures write
``{"code", "message", "context"}`` to stderr and exit 2.
"""

import argparse
import csv
import io
import json
import sys

from . import tables
from .domains import domain_from_json, photon_convexity_probe, r_proper_probe
from .errors import NaganoError, ValidationError
from .grassmann import GrassmannContext, Plane, arithmetic_distance, photon_collinearity_residual, photon_through
from .metrics import (
    SearchConfig,
    caratheodory_lower,
    geodesic_r_chain,
    hyperbolicity_probe,
    kobayashi_closed_form,
    kobayashi_upper,
    sample_duals,
    sandwich,
)
from .domains import SymmetricDomain
from .numerics import DEFAULT_TOL, make_rng, spawn_rngs

COMMANDS = ("kob", "carat", "chain", "check-photon", "probe", "hyperbolicity", "table")
CSV_COLUMNS = ("scale", "delta", "gap", "seed")


def _read_input(path):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise ValidationError(f"cannot read input: {exc}", path=path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input is not valid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from exc


def _field(doc, key):
    if not isinstance(doc, dict) or key not in doc:
        raise ValidationError(f"input is missing {key!r}", key=key)
    return doc[key]


def _tolerance(args):
    return DEFAULT_TOL.with_overrides(rank_rel=args.rank_rel, geom_abs=args.geom_abs, metric_abs=args.metric_abs)


def _config(args):
    return SearchConfig(
        max_segments=args.max_segments,
        restarts=args.restarts,
        dual_samples=args.dual_samples,
    )


def _domain_and_pair(args):
    doc = _read_input(args.input)
    tol = _tolerance(args)
    dom = domain_from_json(_field(doc, "domain"), tol)
    x = Plane.from_json(_field(doc, "x"), tol)
    y = Plane.from_json(_field(doc, "y"), tol)
    return dom, x, y


def cmd_kob(args):
    dom, x, y = _domain_and_pair(args)
    report = sandwich(dom, x, y, _config(args), args.seed).to_json()
    return report


def cmd_carat(args):
    dom, x, y = _domain_and_pair(args)
    rng_duals, rng_opt = spawn_rngs(args.seed, 2)
    if isinstance(dom, SymmetricDomain):
        duals = sample_duals(dom, args.dual_samples, rng_duals)
        value, witness = caratheodory_lower(dom, x, y, duals, optimize=not args.no_optimize, rng=rng_opt)
    else:
        duals = dom.duals
        value, witness = caratheodory_lower(dom, x, y, duals)
    return {
        "lower": value,
        "dual_witness": [xi.to_json() for xi in witness],
        "dual_count": len(duals),
        "seed": args.seed,
    }


def cmd_chain(args):
    dom, x, y = _domain_and_pair(args)
    if isinstance(dom, SymmetricDomain):
        chain = geodesic_r_chain(dom, x, y)
        return {
            "chain": chain.to_json(),
            "closed_form": kobayashi_closed_form(dom, x, y),
            "kind": "geodesic_r_chain",
            "seed": args.seed,
        }
    value, chain = kobayashi_upper(dom, x, y, _config(args), make_rng(args.seed))
    return {"chain": chain.to_json(), "upper": value, "kind": "searched_chain", "seed": args.seed}


def cmd_check_photon(args):
    doc = _read_input(args.input)
    tol = _tolerance(args)
    if isinstance(doc, dict) and "domain" in doc:
        d = doc["domain"]
        ctx = GrassmannContext(int(_field(d, "p")), int(_field(d, "q")), tol)
    else:
        ctx = GrassmannContext(int(_field(doc, "p")), int(_field(doc, "q")), tol)
    x = Plane.from_json(_field(doc, "x"), tol)
    y = Plane.from_json(_field(doc, "y"), tol)
    dist = arithmetic_distance(ctx, x, y)
    out = {"arithmetic_distance": dist, "residual": None, "photon": None, "seed": args.seed}
    if dist == 1:
        ph = photon_through(ctx, x, y)
        out["residual"] = photon_collinearity_residual(ctx, ph)
        out["photon"] = ph.to_json()
    return out


def cmd_probe(args):
    doc = _read_input(args.input)
    dom = domain_from_json(_field(doc, "domain"), _tolerance(args))
    return {
        "r_proper": r_proper_probe(dom, args.samples, args.seed),
        "photon_convexity": photon_convexity_probe(dom, args.samples, args.seed),
        "seed": args.seed,
    }


def cmd_hyperbolicity(args):
    doc = _read_input(args.input)
    dom = domain_from_json(_field(doc, "domain"), _tolerance(args))
    try:
        scales = [float(s) for s in args.scales.split(",") if s.strip()]
    except ValueError as exc:
        raise ValidationError(f"bad --scales value {args.scales!r}") from exc
    if not scales or any(s <= 0 for s in scales):
        raise ValidationError("scales must be positive", scales=args.scales)
    config = SearchConfig(max_segments=args.max_segments, restarts=1, budget=200, dual_samples=min(args.dual_samples, 200))
    rows = hyperbolicity_probe(dom, scales, args.quadruples, args.seed, config)
    return {"rows": rows, "seed": args.seed}


def _parse_bindings(text):
    out = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        name, _, value = part.partition("=")
        try:
            out[name.strip()] = int(value)
        except ValueError as exc:
            raise ValidationError(f"bad binding {part!r}") from exc
    return out


def cmd_table(args):
    if args.id:
        if args.bind:
            return {"row": tables.instantiate(args.id, _parse_bindings(args.bind))}
        return {"row": tables.lookup(args.id).to_json()}
    rows = tables.real_type_rows() if args.real_type else tables.all_rows()
    if args.format == "text":
        return tables.format_table(rows)
    return {"rows": [r.to_json() for r in rows], "count": len(rows)}


HANDLERS = {
    "kob": cmd_kob,
    "carat": cmd_carat,
    "chain": cmd_chain,
    "check-photon": cmd_check_photon,
    "probe": cmd_probe,
    "hyperbolicity": cmd_hyperbolicity,
    "table": cmd_table,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="nagano", description="Metrics on domains in real Grassmannians.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name != "table":
            sp.add_argument("input", nargs="?", default="-", help="JSON input file, or - for stdin")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=("json", "csv", "text"), default="json")
        sp.add_argument("--max-segments", type=int, default=4)
        sp.add_argument("--restarts", type=int, default=3)
        sp.add_argument("--dual-samples", type=int, default=1000)
        sp.add_argument("--scales", default="2,4,8,16")
        sp.add_argument("--quadruples", type=int, default=200)
        sp.add_argument("--samples", type=int, default=200, help="photons per probe")
        sp.add_argument("--no-optimize", action="store_true", help="skip local dual optimization")
        sp.add_argument("--rank-rel", type=float)
        sp.add_argument("--geom-abs", type=float)
        sp.add_argument("--metric-abs", type=float)
        if name == "table":
            sp.add_argument("--real-type", action="store_true")
            sp.add_argument("--id")
            sp.add_argument("--bind", help="parameter bindings, e.g. p=1,q=3")
    return parser


def _to_csv(result):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if isinstance(result, dict) and "rows" in result and result["rows"] and "scale" in result["rows"][0]:
        writer.writerow(CSV_COLUMNS)
        for row in result["rows"]:
            writer.writerow([f"{row[c]:.12g}" if isinstance(row[c], float) else row[c] for c in CSV_COLUMNS])
        return buf.getvalue()
    if isinstance(result, dict) and "rows" in result:
        cols = ("id", "algebra", "space", "dim_g_alpha", "rank", "real_type")
        writer.writerow(cols)
        for row in result["rows"]:
            writer.writerow([json.dumps(row[c]) if isinstance(row[c], list) else row[c] for c in cols])
        return buf.getvalue()
    flat = {k: v for k, v in result.items() if not isinstance(v, (dict, list))}
    writer.writerow(sorted(flat))
    writer.writerow([f"{flat[k]:.12g}" if isinstance(flat[k], float) else flat[k] for k in sorted(flat)])
    return buf.getvalue()


def run(argv=None, stdout=None, stderr=None):
    """Parse ``argv``, execute the command and return the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = HANDLERS[args.command](args)
    except NaganoError as exc:
        stderr.write(json.dumps(exc.to_dict(), sort_keys=True, default=str) + "\n")
        return 2
    if isinstance(result, str):
        stdout.write(result + "\n")
    elif args.format == "csv":
        stdout.write(_to_csv(result))
    else:
        stdout.write(json.dumps(result, sort_keys=True, allow_nan=False) + "\n")
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
