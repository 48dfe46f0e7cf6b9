"""Command line: goss, eisenstein, drinfeld, ring, hecke, dims and verify.

Exit status 0 when everything checked passes, 1 when a check fails or a budget runs
out, 2 for invalid parameters or malformed input files.
"""
import argparse
import asyncio
import csv
import io
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.dmf import activities, dim_formulas, hecke_engine, level_t_ring
from src.dmf.base_arith import CoeffField, FiniteField, PolyA, get_field, prime_power
from src.dmf.claims import all_passed, jsonable, ordered, render
from src.dmf.config import OUTPUT_FORMATS, SUITES, RunConfig, load_settings
from src.dmf.drinfeld_forms import psi_from_torsion
from src.dmf.eisenstein_eval import METHODS, EisensteinSpec, eval_eisenstein
from src.dmf.errors import BudgetExceeded, DmfError, FieldError, LatticeError, SpecError
from src.dmf.goss_poly import goss_json, goss_text
from src.dmf.lattice_geom import LatticeCoset, load_coset, standard_point

logger = logging.getLogger("dmf.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2

RING_GROUPS = ("GAMMA_T", "GL", "SL", "U1")


def run_suite(config: RunConfig) -> Tuple[int, List[dict]]:
    """Every selected suite group in order, in this process."""
    records: List[dict] = []
    for suite in config.suites:
        logger.info("suite %s", suite)
        records.extend(activities.SUITE_RUNNERS[suite](config))
    records = ordered(records)
    return (EXIT_OK if all_passed(records) else EXIT_FAILED), records


async def run_suite_remote(config: RunConfig, address: str) -> Tuple[int, List[dict]]:
    from temporalio.client import Client

    from src.dmf.workflows import VerifySuiteWorkflow

    settings = load_settings()
    client = await Client.connect(address)
    records = await client.execute_workflow(
        VerifySuiteWorkflow.run,
        json.loads(config.json()),
        id=f"dmf-verify-q{config.q}-r{config.r}-seed{config.seed}",
        task_queue=settings.task_queue,
    )
    records = ordered(records)
    return (EXIT_OK if all_passed(records) else EXIT_FAILED), records


def _field(q: int) -> FiniteField:
    return get_field(*prime_power(q))


def _config(args, **extra) -> RunConfig:
    values = {"q": args.q, "max_q": args.max_q, "cache_dir": load_settings().cache_dir}
    for name in ("r", "kmax", "seed"):
        if getattr(args, name, None) is not None:
            values[name] = getattr(args, name)
    if getattr(args, "prec", None) is not None:
        values["precision"] = args.prec
    values.update(extra)
    return RunConfig(**values)


def _poly(field: FiniteField, text: str) -> PolyA:
    try:
        a = PolyA.from_text(field, text)
    except FieldError as exc:
        raise SpecError(str(exc), location="polynomial argument")
    if not a:
        raise SpecError("must be nonzero", location=f"polynomial {text!r}")
    return a


def _precision_number(prec: Optional[Fraction]):
    """An int when whole, else a float; None for an exact value."""
    if prec is None:
        return None
    return prec.numerator if prec.denominator == 1 else float(prec)


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")


def _emit_csv(header: Sequence[str], rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


# subcommands

def cmd_goss(args) -> int:
    cfg = _config(args)
    if not 1 <= args.k <= cfg.goss_k_cap:
        raise SpecError(f"k must lie in 1..{cfg.goss_k_cap}", location="--k")
    if args.json:
        _emit(goss_json(args.k, cfg.q))
    else:
        sys.stdout.write(goss_text(args.k, cfg.q) + "\n")
    return EXIT_OK


def cmd_eisenstein(args) -> int:
    cfg = _config(args)
    field = _field(cfg.q)
    if args.coset:
        coset = load_coset(field, args.coset)
    else:
        coset = LatticeCoset.standard(field, cfg.r)
    omega = standard_point(cfg.q, coset.r, args.point)
    spec = EisensteinSpec(args.k, coset, cfg.precision)
    value = eval_eisenstein(spec, omega, args.method, cfg.enumeration_budget)
    _emit(
        {
            "value": value.value.to_text(),
            "certified_precision": _precision_number(value.value.prec),
            "terms_used": value.terms,
            "method": value.method,
            "certified": value.certified,
        }
    )
    return EXIT_OK


def cmd_drinfeld(args) -> int:
    cfg = _config(args)
    field = _field(cfg.q)
    N = _poly(field, args.N).monic()
    if N.degree < 1:
        raise SpecError("the level must have positive degree", location="--N")
    if args.mode == "numeric":
        psi = psi_from_torsion(N, LatticeCoset.standard(field, cfg.r), standard_point(cfg.q, cfg.r), cfg.precision)
        _emit({"q": cfg.q, "r": cfg.r, "N": N.to_text(), "mode": "numeric", "coefficients": [c.to_text() for c in psi.coeffs]})
        return EXIT_OK
    weight = cfg.q ** (cfg.r * N.degree) - 1
    ring = level_t_ring.symbolic_ring(cfg.q, cfg.r, weight, False, cfg.slice_budget, cfg.cache_dir, cfg.seed)
    payload = level_t_ring.psi_json(ring, N)
    payload["mode"] = "symbolic"
    _emit(payload)
    return EXIT_OK


def _ring_dim(ring: level_t_ring.LevelTRing, k: int, group: str, m: int) -> int:
    if group == "GAMMA_T":
        return ring.slice(k).dim
    return level_t_ring.invariants(ring, k, group, m if group == "GL" else 0).dim


def _formula_dim(q: int, r: int, k: int, group: str, m: int) -> int:
    return dict(dim_formulas.dim_table(q, r, k, group, m))[k]


def cmd_ring(args) -> int:
    cfg = _config(args)
    group = args.group.upper()
    m = args.type or 0
    if group == "GL" and not 0 <= m < cfg.q - 1:
        raise SpecError(f"type must satisfy 0 <= m < {cfg.q - 1}", location="--type")
    ring = level_t_ring.LevelTRing(cfg.q, cfg.r, CoeffField(cfg.q), cfg.slice_budget, cfg.cache_dir)
    rows = []
    for k in range(cfg.kmax + 1):
        formula = _formula_dim(cfg.q, cfg.r, k, group, m)
        computed = _ring_dim(ring, k, group, m)
        rows.append((k, formula, computed, str(formula == computed).lower()))
    _emit_csv(("k", "dim_formula", "dim_linear_algebra", "match"), rows)
    return EXIT_OK if all(row[3] == "true" for row in rows) else EXIT_FAILED


def cmd_dims(args) -> int:
    cfg = _config(args)
    if args.group == "GL" and not 0 <= (args.type or 0) < cfg.q - 1:
        raise SpecError(f"type must satisfy 0 <= m < {cfg.q - 1}", location="--type")
    rows = dim_formulas.dim_table(cfg.q, cfg.r, cfg.kmax, args.group, args.type or 0)
    _emit_csv(("k", "dim"), rows)
    return EXIT_OK


def _report(report) -> int:
    _emit(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_hecke(args) -> int:
    cfg = _config(args)
    field = _field(cfg.q)
    if args.hecke_command == "local":
        try:
            mu = tuple(int(m) for m in args.mu.split(","))
        except ValueError:
            raise SpecError(f"expected comma-separated integers, got {args.mu!r}", location="--mu")
        datum = hecke_engine.LocalDatum(_poly(field, args.pi).monic(), mu)
        return _report(hecke_engine.local_check(datum, cfg.group_budget))
    if args.hecke_command == "global":
        if args.spec:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
            try:
                data = json.loads(text)
            except json.JSONDecodeError as exc:
                raise SpecError(exc.msg, location=f"{args.spec}:{exc.lineno}:{exc.colno}")
            spec = hecke_engine.hecke_spec_from_json(data, cfg.q, args.spec)
        else:
            spec = hecke_engine.two_prime_example(cfg.q)
        return _report(hecke_engine.global_identity_check(spec, cfg.group_budget, cfg.enumeration_budget))
    pi = _poly(field, args.pi).monic()
    return _report(hecke_engine.rank2_eigenvalue_check(pi, args.k, cfg.precision))


def _verify_format(args) -> str:
    if args.format:
        return args.format
    return "csv" if args.suite and set(args.suite) == {"dims"} else "json"


def cmd_verify(args) -> int:
    extra = {"output_format": _verify_format(args)}
    if args.suite:
        extra["suites"] = tuple(args.suite)
    for name in ("enumeration_budget", "slice_budget", "group_budget"):
        if getattr(args, name) is not None:
            extra[name] = getattr(args, name)
    cfg = _config(args, **extra)
    if args.temporal_address:
        status, records = asyncio.run(run_suite_remote(cfg, args.temporal_address))
    else:
        status, records = run_suite(cfg)
    sys.stdout.write(render(records, cfg.output_format))
    for rec in records:
        if rec["status"] != "pass":
            logger.warning("%s %s [%s]", rec["status"], rec["claim_id"], rec["paper_ref"])
    return status


# parser

def _common(p: argparse.ArgumentParser, rank: bool = True) -> None:
    p.add_argument("--q", type=int, default=2, help="size of the constant field")
    p.add_argument("--max-q", type=int, default=4, help="largest accepted q")
    if rank:
        p.add_argument("--r", type=int, default=2, help="rank")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dmf", description="Exact checks for Drinfeld modular forms over F_q[t].")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("goss", help="print a Goss polynomial")
    _common(p, rank=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_goss)

    p = sub.add_parser("eisenstein", help="evaluate Eisenstein series")
    esub = p.add_subparsers(dest="eisenstein_command", required=True)
    e = esub.add_parser("eval", help="E_{k,v+L} at a standard point")
    _common(e)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--coset", help="JSON file {basis, v}; default the standard lattice")
    e.add_argument("--point", choices=("standard", "perturbed"), default="standard")
    e.add_argument("--prec", type=int, default=8)
    e.add_argument("--method", choices=METHODS, default="auto")
    p.set_defaults(func=cmd_eisenstein)

    p = sub.add_parser("drinfeld", help="Drinfeld module coefficients")
    dsub = p.add_subparsers(dest="drinfeld_command", required=True)
    d = dsub.add_parser("psi", help="coefficients of psi_N")
    _common(d)
    d.add_argument("--N", default="t", help="level, e.g. t or t^2+1")
    d.add_argument("--mode", choices=("symbolic", "numeric"), default="symbolic")
    d.add_argument("--prec", type=int, default=8)
    d.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_drinfeld)

    p = sub.add_parser("ring", help="the graded ring of level (t)")
    rsub = p.add_subparsers(dest="ring_command", required=True)
    r = rsub.add_parser("dims", help="dimensions by linear algebra against the formulas")
    _common(r)
    r.add_argument("--kmax", type=int, default=6)
    r.add_argument("--group", choices=RING_GROUPS, default="GAMMA_T", type=str.upper)
    r.add_argument("--type", type=int, default=None)
    p.set_defaults(func=cmd_ring)

    p = sub.add_parser("dims", help="closed dimension formulas")
    _common(p)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--group", choices=RING_GROUPS + ("CUSP",), default="GAMMA_T", type=str.upper)
    p.add_argument("--type", type=int, default=None)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("hecke", help="Hecke coset counts and eigenvalues")
    hsub = p.add_subparsers(dest="hecke_command", required=True)
    h = hsub.add_parser("local", help="exhaustive local coset check")
    _common(h, rank=False)
    h.add_argument("--pi", default="t")
    h.add_argument("--mu", required=True, help="e.g. 2,0")
    h.add_argument("--exhaustive", action="store_true", help="accepted for clarity; local checks are always exhaustive")
    h = hsub.add_parser("global", help="product and inclusion-exclusion identity")
    _common(h, rank=False)
    h.add_argument("--spec", help="JSON file {delta, source, target}; default a two-prime example")
    h = hsub.add_parser("rank2", help="T E_{k,L} = E_{k,L} over the index-pi sublattices")
    _common(h, rank=False)
    h.add_argument("--pi", default="t")
    h.add_argument("--k", type=int, required=True)
    h.add_argument("--prec", type=int, default=8)
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("verify", help="run the verification suite")
    _common(p)
    p.add_argument("--suite", action="append", choices=SUITES, help="repeatable; default all")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--prec", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=OUTPUT_FORMATS, help="default csv for --suite dims alone, json otherwise")
    p.add_argument("--enumeration-budget", type=int, dest="enumeration_budget")
    p.add_argument("--slice-budget", type=int, dest="slice_budget")
    p.add_argument("--group-budget", type=int, dest="group_budget")
    p.add_argument("--temporal-address", help="run through VerifySuiteWorkflow on this Temporal server")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO)
    try:
        return args.func(args)
    except ValidationError as exc:
        sys.stderr.write(f"invalid parameters:\n{exc}\n")
        return EXIT_INVALID
    except (SpecError, LatticeError, FieldError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except BudgetExceeded as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_FAILED
    except DmfError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
