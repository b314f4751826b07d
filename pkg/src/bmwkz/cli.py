"""Command-line entry point: ``bmwkz {monodromy,phi,algebra,brauer,verify,report}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import io
from .coxeter import CoxeterMatrix, DihedralModel
from .engine import hecke_quotient, relation_residuals
from .lkrep import ParameterSet, sample_generic_parameters
from .monodromy import monodromy_generators
from .phi import PhiOracle, dump_table, parse_word
from .presentations import (
    build_brauer,
    build_dihedral_bmw,
    build_general_bmw,
    expected_dimension,
    derived_identity_residuals,
    monodromy_assignment,
)
from .suite import SuiteConfig, run_suite, suite_report


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerances must be positive")
    return v


def _m_list(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.replace(",", " ").split())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", type=Path, help="parameter file (JSON with kappa and per-class k, alpha)")
    common.add_argument("--seed", type=int, default=0, help="seed for generic parameter draws")
    common.add_argument("--kappa", type=complex, help="override kappa")
    common.add_argument("--tol", type=_positive, default=1e-6, help="relation residual tolerance")
    common.add_argument("--ode-tol", type=_positive, default=1e-12, help="integrator tolerance")
    common.add_argument("--rank-threshold", type=_positive, default=1e-6)
    common.add_argument("--out", type=Path, help="write the JSON result here instead of stdout")

    parser = argparse.ArgumentParser(prog="bmwkz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("monodromy", parents=[common], help="monodromy generators, projectors and diagnostics")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("phi", parents=[common], help="sandwich scalar of a word, or a table of them")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--index", type=int, default=0, choices=(0, 1))
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--word")
    g.add_argument("--dump", action="store_true")
    p.add_argument("--maxlen", type=int, default=None)

    p = sub.add_parser("algebra", parents=[common], help="build a BMW-type algebra and report on it")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--dihedral", type=int, metavar="M")
    g.add_argument("--coxeter", type=Path, metavar="FILE")
    p.add_argument("--report", type=Path, help="alias of --out")
    p.add_argument("--export", type=Path, help="write the structure constants tensor here")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identity)")

    p = sub.add_parser("brauer", parents=[common], help="Brauer-type algebra of D_m")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="run the verification matrix")
    p.add_argument("--m-list", type=_m_list, default=(3, 4, 5, 6))
    p.add_argument("--draws", type=int, default=5)
    p.add_argument("--with-a3", action="store_true")

    p = sub.add_parser("report", parents=[common], help="monodromy, sandwich anchors and algebra summary for one m")
    p.add_argument("--m", type=int, required=True)
    return parser


def _load_params(args, parser, m: int | None, n_classes: int | None = None) -> ParameterSet:
    if args.params is not None:
        if not args.params.is_file():
            parser.error(f"parameter file {args.params} does not exist")
        try:
            params = ParameterSet.from_json(args.params.read_text())
        except (ValueError, KeyError, TypeError) as exc:
            parser.error(f"malformed parameter file {args.params}: {exc}")
    elif m is not None:
        params = sample_generic_parameters(args.seed, m)
    else:
        rng = np.random.default_rng(args.seed)
        params = ParameterSet(tuple((complex(rng.uniform(0.5, 2)), complex(rng.uniform(0.5, 2)))
                                    for _ in range(n_classes)), 0.05)
    if args.kappa is not None:
        params = params.with_kappa(args.kappa)
    if m is not None and params.n_classes != DihedralModel(m).n_classes:
        parser.error(f"D_{m} needs {DihedralModel(m).n_classes} (k, alpha) pairs, file has {params.n_classes}")
    return params


def _emit(obj, path: Path | None):
    text = io.write_json(obj, path)
    if path is None:
        sys.stdout.write(text)


def _mono_dict(mono) -> dict:
    return {
        "m": mono.m,
        "params": mono.params.to_dict(),
        "derived": mono.params.derived(),
        "T": list(mono.T),
        "e": list(mono.e),
        "spectra": [np.sort_complex(s) for s in mono.spectra],
        "diagnostics": mono.diagnostics,
    }


def _algebra_summary(alg, pres_residuals: bool = True) -> dict:
    H = hecke_quotient(alg)
    out = {
        "dimension": alg.dim,
        "trace_rank": alg.diagnostics.get("trace_rank"),
        "hecke_dimension": H.dim,
        "basis": [" ".join(w) for w in alg.basis],
        "enumeration": {k: alg.diagnostics[k] for k in
                        ("vectors_defined", "coincidences", "max_discarded_residual", "min_accepted_residual")},
    }
    if pres_residuals:
        mats = {g: alg.generator_matrix((g,)) for g in alg.generators}
        out["relation_residuals"] = relation_residuals(alg.presentation, mats)
    return out


def cmd_monodromy(args, parser):
    params = _load_params(args, parser, args.m)
    mono = monodromy_generators(DihedralModel(args.m), params, tol=args.ode_tol)
    _emit(_mono_dict(mono), args.out)
    return 0


def cmd_phi(args, parser):
    params = _load_params(args, parser, args.m)
    mono = monodromy_generators(DihedralModel(args.m), params, tol=args.ode_tol)
    oracle = PhiOracle(mono, args.index)
    if args.dump:
        maxlen = args.maxlen if args.maxlen is not None else 2 * args.m
        _emit(dump_table(oracle, maxlen), args.out)
    else:
        value = oracle(parse_word(args.word))
        _emit({"word": args.word, "index": args.index, "phi": value}, args.out)
    return 0


def cmd_algebra(args, parser):
    out_path = args.out or args.report
    t0 = time.perf_counter()
    if args.dihedral is not None:
        params = _load_params(args, parser, args.dihedral)
        alg = build_dihedral_bmw(args.dihedral, params, tol=args.tol, ode_tol=args.ode_tol,
                                 rank_threshold=args.rank_threshold)
        report = {"type": f"I2({args.dihedral})", "params": params.to_dict(),
                  "expected_dimension": expected_dimension(args.dihedral)}
        report.update(_algebra_summary(alg))
        report["identity_residuals"] = alg.diagnostics["identity_residuals"]
        report["monodromy_residuals"] = relation_residuals(alg.presentation, monodromy_assignment(alg.spec.mono))
    else:
        if not args.coxeter.is_file():
            parser.error(f"Coxeter file {args.coxeter} does not exist")
        try:
            gamma = CoxeterMatrix.from_json(args.coxeter.read_text())
        except (ValueError, KeyError, TypeError) as exc:
            parser.error(f"malformed Coxeter file {args.coxeter}: {exc}")
        n_classes = max(gamma.reflection_classes()) + 1
        params = _load_params(args, parser, None, n_classes)
        alg = build_general_bmw(gamma, params, ode_tol=args.ode_tol, rank_threshold=args.rank_threshold)
        report = {"type": gamma.to_dict(), "params": params.to_dict(),
                  "incomplete": alg.diagnostics["incomplete"]}
        if alg.diagnostics["incomplete"]:
            report["message"] = alg.diagnostics["message"]
        else:
            report.update(_algebra_summary(alg))
            report["word_length_bound"] = alg.diagnostics["word_length_bound"]
    if args.export and alg.dim:
        io.export_structure(alg, args.export)
    if args.timing:
        report["seconds"] = time.perf_counter() - t0
    _emit(report, out_path)
    return 0


def cmd_brauer(args, parser):
    params = _load_params(args, parser, args.m).with_kappa(0)
    alg = build_brauer(args.m, params, rank_threshold=args.rank_threshold)
    report = {"m": args.m, "params": params.to_dict(), "dimension": alg.dim,
              "trace_rank": alg.diagnostics["trace_rank"], "formulas": alg.diagnostics["formulas"],
              "matches": alg.diagnostics["matches"], "basis": [" ".join(w) for w in alg.basis]}
    _emit(report, args.out)
    return 0


def cmd_verify(args, parser):
    params = None
    if args.params is not None:
        params = _load_params(args, parser, args.m_list[0])
        for m in args.m_list:
            if DihedralModel(m).n_classes != params.n_classes:
                parser.error("a parameter file fixes the class count; use an --m-list of one parity")
    cfg = SuiteConfig(m_list=args.m_list, seed=args.seed, draws=args.draws, params=params, ode_tol=args.ode_tol,
                      relation_tol=args.tol, rank_threshold=args.rank_threshold, with_a3=args.with_a3)
    checks = run_suite(cfg)
    report = suite_report(cfg, checks)
    _emit(report, args.out)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.name}: {c.residual:.3e} (threshold {c.threshold:.1e})",
              file=sys.stderr)
    if not report["passed"]:
        print(f"first failing check: {report['first_failure']}", file=sys.stderr)
        return 1
    return 0


def cmd_report(args, parser):
    params = _load_params(args, parser, args.m)
    mono = monodromy_generators(DihedralModel(args.m), params, tol=args.ode_tol)
    alg = build_dihedral_bmw(args.m, params, mono=mono, tol=args.tol, rank_threshold=args.rank_threshold)
    oracles = alg.spec.oracles
    report = {
        "monodromy": {k: v for k, v in _mono_dict(mono).items() if k not in ("T", "e")},
        "phi": {f"Phi{i}": {" ".join(w) or "1": oracles[i](w) for w in [(), ("x0",), ("x1",), ("E0",), ("E1",)]}
                for i in (0, 1)},
        "algebra": _algebra_summary(alg, pres_residuals=False),
        "identity_residuals": derived_identity_residuals(alg, mono, oracles),
    }
    _emit(report, args.out)
    return 0


COMMANDS = {
    "monodromy": cmd_monodromy,
    "phi": cmd_phi,
    "algebra": cmd_algebra,
    "brauer": cmd_brauer,
    "verify": cmd_verify,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("BMWKZ_THREADS")
    if threads:
        os.environ.setdefault("OMP_NUM_THREADS", threads)
    try:
        return COMMANDS[args.command](args, parser)
    except (ValueError, RuntimeError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
