"""Command-line front end: ``siclab {validate,build,sweep,pair,tomo}``.

Exit codes: 0 success, 1 invalid POVM or bound violation, 2 I/O or parse failure.
"""
from __future__ import annotations

import argparse
import contextlib
import csv
import json
import logging
import sys

import numpy as np

from . import bounds, io
from .errors import SicLabError
from .linalg import INF, purity
from .sic import (
    Povm,
    born_probabilities,
    depolarize_sic,
    dual_basis,
    measurement_condition_number,
    povm_diagnostics,
    rank_one_sic,
    reconstruct,
    sic_from_vectors,
    validate_general_sic,
    wh_orbit,
)

log = logging.getLogger("siclab")

EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text):
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        if not tok:
            continue
        out.append(INF if tok in ("inf", "infinity") else float(tok))
    return out


def _ints(text):
    return [int(t) for t in text.split(",") if t.strip()]


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _load_fiducials(paths):
    out = {}
    for p in paths or ():
        v = io.read_fiducial(p)
        out[v.size] = v
    return out


def _rank_one(d, fiducials):
    if d in fiducials:
        return sic_from_vectors(wh_orbit(fiducials[d]))
    return rank_one_sic(d)


def _load_sic(path):
    return validate_general_sic(Povm(io.read_povm(path)))


def cmd_validate(args) -> int:
    elements = io.read_povm(args.povm)
    diag = povm_diagnostics(elements)
    for key in ("dim", "count", "a", "b", "b_expected", "gram_spread", "completeness_residual",
                "min_eigenvalue", "max_trace_error"):
        print(f"{key}: {io.fmt(diag[key])}")
    try:
        sic = validate_general_sic(Povm(elements))
    except SicLabError as exc:
        print(f"invalid: {type(exc).__name__}: {exc}")
        return EXIT_FAIL
    print(f"valid general SIC-POVM: d={sic.dim} a={io.fmt(sic.a)} b={io.fmt(sic.b)}")
    return EXIT_OK


def cmd_build(args) -> int:
    fiducials = _load_fiducials(args.fiducial)
    d = args.dim[0] if len(args.dim) == 1 else None
    if d is None:
        raise UsageError("build takes a single --dim")
    lam = args.lam[0]
    if len(args.lam) != 1:
        raise UsageError("build takes a single --lambda")
    sic = depolarize_sic(_rank_one(d, fiducials), lam)
    if args.out in (None, "-"):
        print(json.dumps(io.povm_to_dict(sic.elements)))
    else:
        io.write_povm(args.out, sic.elements)
    print(f"a = {io.fmt(sic.a)}", file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def _write_reports(args, reports):
    with _output(args.out) as fh:
        if args.format == "csv":
            io.write_reports_csv(fh, reports)
        else:
            io.write_reports_jsonl(fh, reports)


def _summary(reports, extra=""):
    bad = bounds.violations(reports)
    sat = sum(r.saturated for r in reports)
    print(f"reports={len(reports)} violations={len(bad)} saturated={sat}{extra}", file=sys.stderr)
    for r in bad[:10]:
        print(f"  VIOLATION {r.bound_name} slack={r.slack:.3e} {r.context}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_sweep(args) -> int:
    fiducials = _load_fiducials(args.fiducial)
    sics, labels = [], []
    for d in args.dim:
        base = _rank_one(d, fiducials)
        for lam in args.lam:
            sics.append(depolarize_sic(base, lam))
            labels.append(lam)
    reports = bounds.check_bound_suite(sics, n_states=args.samples, orders=args.orders,
                                       etas=args.etas, seed=args.seed, labels=labels)
    _write_reports(args, reports)
    return _summary(reports)


def cmd_pair(args) -> int:
    m, n = _load_sic(args.povm1), _load_sic(args.povm2)
    reports = bounds.check_pair_suite([(m, n)], n_states=args.samples, s_values=args.s_values,
                                      seed=args.seed)
    _write_reports(args, reports)
    return _summary(reports)


def cmd_tomo(args) -> int:
    sic = _load_sic(args.povm)
    dual = dual_basis(sic)
    states = bounds.sample_states(sic.dim, args.samples, args.seed)
    probs = born_probabilities(sic, states)
    errors = []
    with _output(args.out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["state", "purity", "frobenius_error"])
        for k, (rho, p) in enumerate(zip(states, probs)):
            err = float(np.linalg.norm(reconstruct(sic, p, dual).matrix - rho))
            errors.append(err)
            w.writerow([k, io.fmt(purity(rho)), io.fmt(err)])
    cond = measurement_condition_number(sic)
    log.info("measurement condition number %.6g", cond)
    print(f"states={len(errors)} max_error={max(errors):.3e} a={sic.a:.17g} "
          f"dual_coefficient={sic.dim / (sic.a * sic.dim**3 - 1):.6g} condition_number={cond:.6g}",
          file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siclab", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, samples=True):
        if samples:
            p.add_argument("--samples", type=int, default=200)
            p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="-")

    p = sub.add_parser("validate", help="certify a POVM JSON file as a general SIC")
    p.add_argument("povm")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="write a (depolarized) SIC-POVM to JSON")
    p.add_argument("--dim", type=_ints, required=True)
    p.add_argument("--lambda", dest="lam", type=_floats, default=[1.0])
    p.add_argument("--fiducial", action="append", help="fiducial vector JSON for dimensions without a built-in")
    common(p, samples=False)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sweep", help="single-measurement bound suite over sampled states")
    p.add_argument("--dim", type=_ints, default=[2, 3])
    p.add_argument("--lambda", dest="lam", type=_floats, default=[0.2, 0.4, 0.6, 0.8, 1.0])
    p.add_argument("--orders", type=_floats, default=[0.3, 0.5, 1.0, 1.5, 2.0, 3.0, 10.0, INF])
    p.add_argument("--etas", type=_floats, default=[0.0, 0.25, 0.5, 0.9, 1.0])
    p.add_argument("--fiducial", action="append")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("pair", help="uncertainty relations for a pair of SIC-POVMs")
    p.add_argument("povm1")
    p.add_argument("povm2")
    p.add_argument("--s-values", dest="s_values", type=_floats, default=[0.0, 0.25, 0.5, 0.75])
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("tomo", help="linear-inversion round trip from exact probabilities")
    p.add_argument("povm")
    common(p)
    p.set_defaults(func=cmd_tomo)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (OSError, io.FormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SicLabError as exc:
        print(f"invalid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
