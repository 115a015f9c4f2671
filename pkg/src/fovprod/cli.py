"""Command-line front end.

Exit codes: 0 affirmative, 1 negative finding, 2 inconclusive, 64 bad input,
70 numerical failure.
"""

from __future__ import annotations

import argparse
import inspect
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import svg
from .classify import theorem_hypotheses
from .errors import ConvergenceFailure, Inconclusive, InvalidMatrix
from .matcore import eigvals, read_matrix
from .numrange import compute_range, radii
from .productset import containment_check, sample_product_set
from .repro import REPRO, run_repro
from .witness import falsify

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_USAGE, EXIT_SOFTWARE = 64, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass
class CliConfig:
    command: str
    inputs: List[str]
    m: int = 720
    grid: int = 128
    tol: float = 1e-6
    seed: int = 0
    out: Optional[str] = None
    format: str = "json"

    def validate(self) -> None:
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.m < 8:
            raise UsageError("--angles must be at least 8")
        if self.grid < 32:
            raise UsageError("--grid must be at least 32")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--angles", type=int, default=720, help="support-function angles (default 720)")
    common.add_argument("--grid", type=int, default=128, help="product-set cell grid (default 128)")
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text", "svg"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")

    p = _Parser(prog="fovprod", description="Numerical ranges, product sets and rank-one witnesses.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    s = sub.add_parser("range", parents=[common], help="numerical range of a matrix")
    s.add_argument("matrix")
    s = sub.add_parser("check", parents=[common], help="is sigma(AB) inside W(A)W(B)?")
    s.add_argument("a")
    s.add_argument("b")
    s = sub.add_parser("classify", parents=[common], help="structural report for a matrix")
    s.add_argument("matrix")
    s = sub.add_parser("witness", parents=[common], help="rank-one B violating spectral containment")
    s.add_argument("matrix")
    s.add_argument("--trials", type=int, default=200)
    s = sub.add_parser("repro", parents=[common], help="reproduce a worked example")
    s.add_argument("example", choices=sorted(REPRO))
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=float)
    s.add_argument("--M", type=float)
    s.add_argument("--eps", type=float)
    s.add_argument("--trials", type=int)
    return p


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".fovprod-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: CliConfig, text: str) -> None:
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _cplx(z) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _load(path: str) -> np.ndarray:
    try:
        return read_matrix(path)
    except (OSError, ValueError) as exc:
        raise InvalidMatrix(f"{path}: {exc}") from exc


# ----------------------------------------------------------------- commands


def cmd_range(cfg: CliConfig) -> int:
    A = _load(cfg.inputs[0])
    R = compute_range(A, cfg.m)
    ev = eigvals(A)
    if cfg.format == "svg":
        _emit(cfg, svg.range_figure(R, ev, "numerical range"))
    elif cfg.format == "text":
        rr = radii(A, max(cfg.m, 64))
        _emit(cfg, f"n={A.shape[0]} m={R.m} hausdorff_gap={R.hausdorff_gap:.3e}\n"
                   f"w={rr.w:.10g} r={rr.r:.10g} norm={rr.norm:.10g} radialoid={rr.radialoid}\n"
                   f"inner vertices={R.inner_polygon.size}\n")
    else:
        d = R.to_dict()
        d["eigenvalues"] = [[z.real, z.imag] for z in ev]
        _emit(cfg, _json(d))
    return EXIT_OK


def cmd_check(cfg: CliConfig) -> int:
    A, B = _load(cfg.inputs[0]), _load(cfg.inputs[1])
    if A.shape != B.shape:
        raise InvalidMatrix(f"dimension mismatch: {A.shape[0]} vs {B.shape[0]}")
    rep = containment_check(A, B, cfg.tol, cfg.grid, cfg.m)
    if cfg.format == "svg":
        cloud = sample_product_set(A, B, 32, cfg.m)
        _emit(cfg, svg.product_figure(cloud, [(l, v.verdict.value) for l, v in rep.eigen_verdicts],
                                      "product set and spectrum of AB"))
    elif cfg.format == "text":
        lines = [f"overall: {rep.overall}  max_violation_distance={rep.max_violation_distance:.6g}"]
        for lam, v in rep.eigen_verdicts:
            lines.append(f"  {_cplx(lam)}: {v.verdict.value} dist~{v.distance_estimate:.6g} "
                         f"margin={v.certificate_margin:.3g}")
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, _json(rep.to_dict()))
    return {"Contained": EXIT_OK, "Violated": EXIT_NEGATIVE}.get(rep.overall, EXIT_INCONCLUSIVE)


def cmd_classify(cfg: CliConfig) -> int:
    A = _load(cfg.inputs[0])
    rep = theorem_hypotheses(A, cfg.m)
    if cfg.format == "text":
        r = rep.radii
        _emit(cfg, f"psd multiple: {rep.is_psd_multiple} (phase {rep.phase})\n"
                   f"normality residual: {rep.normality_residual:.3e}\n"
                   f"w={r.w:.10g} r={r.r:.10g} norm={r.norm:.10g} radialoid={r.radialoid}\n"
                   f"corner hypothesis: {rep.corner_hypothesis}\n"
                   f"polygon case: {rep.polygon_case}  isolated peak: {rep.isolated_peak_case}\n")
    elif cfg.format == "svg":
        _emit(cfg, svg.range_figure(compute_range(A, cfg.m), eigvals(A), "classification"))
    else:
        _emit(cfg, _json(rep.to_dict()))
    return EXIT_OK if rep.is_psd_multiple else EXIT_NEGATIVE


def cmd_witness(cfg: CliConfig, trials: int) -> int:
    A = _load(cfg.inputs[0])
    try:
        cert = falsify(A, trials=trials, seed=cfg.seed, grid=cfg.grid, m=cfg.m)
    except Inconclusive as exc:
        _emit(cfg, _json({"result": "Inconclusive", "detail": str(exc)}))
        return EXIT_INCONCLUSIVE
    if cert is None:
        _emit(cfg, _json({"result": "PsdMultiple", "detail": "no violating rank-one B exists"}))
        return EXIT_NEGATIVE
    if cfg.format == "text":
        _emit(cfg, f"{cert.construction}: lambda={_cplx(cert.lam)} margin={cert.margin:.6g}\n")
    elif cfg.format == "svg":
        cloud = sample_product_set(A, cert.B, 32, cfg.m)
        _emit(cfg, svg.product_figure(cloud, [(cert.lam, cert.verdict.verdict.value)], cert.construction))
    else:
        _emit(cfg, _json({"result": "Certificate", "seed": cfg.seed, **cert.to_dict()}))
    return EXIT_OK


def cmd_repro(cfg: CliConfig, args: argparse.Namespace) -> int:
    fn = REPRO[args.example]
    accepted = inspect.signature(fn).parameters
    kw = {k: v for k, v in (("n", args.n), ("d", args.d), ("M", args.M), ("eps", args.eps),
                             ("trials", args.trials), ("seed", cfg.seed)) if v is not None and k in accepted}
    res = run_repro(args.example, **kw)
    if cfg.format == "text":
        lines = [f"{res.example_id}: {'PASS' if res.overall_pass else 'FAIL'}"]
        lines += [f"  [{'ok' if c.passed else 'FAIL'}] {c.description}" for c in res.claims]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, _json(res.to_dict()))
    return EXIT_OK if res.overall_pass else EXIT_NEGATIVE


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    inputs = [getattr(args, k) for k in ("matrix", "a", "b") if getattr(args, k, None)]
    cfg = CliConfig(args.command, inputs, args.angles, args.grid, args.tol, args.seed, args.out, args.format)
    try:
        cfg.validate()
        if cfg.format == "svg" and cfg.command == "repro":
            raise UsageError("repro has no svg output")
        if args.command == "range":
            return cmd_range(cfg)
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "witness":
            return cmd_witness(cfg, args.trials)
        return cmd_repro(cfg, args)
    except (UsageError, InvalidMatrix) as exc:
        print(f"fovprod: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceFailure, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"fovprod: numerical failure: {exc}", file=sys.stderr)
        return EXIT_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
