"""Command-line front end.

Exit codes: 0 success, 2 validation failure, 3 input error, 4 numeric
degeneracy (ray on surface, exhausted retries, ...).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Optional

from . import __version__, chow, corpus, interp, rayshoot
from .errors import InputError, InterpMatError, ParseError, ValidationFailed
from .models import patch_text, read_model
from .polycore.poly import MultiPoly
from .polycore.roots import RealRoot
from .polycore.scalar import EXACT, FLOAT
from .supports import read_support, simplex_support


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, MultiPoly):
        return str(obj)
    if isinstance(obj, RealRoot):
        return {"lo": to_jsonable(obj.lo), "hi": to_jsonable(obj.hi),
                "multiplicity": obj.multiplicity}
    if isinstance(obj, rayshoot.HitRecord):
        return obj.to_dict()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, float) and obj != obj:
        return None
    if hasattr(obj, "item"):
        return obj.item()
    return obj


@dataclasses.dataclass
class RunReport:
    command: str
    seed: int
    mode: str
    timings: dict = dataclasses.field(default_factory=dict)
    outputs: dict = dataclasses.field(default_factory=dict)
    verification: dict = dataclasses.field(default_factory=dict)
    warnings: list = dataclasses.field(default_factory=list)

    def body(self) -> dict:
        return to_jsonable({"command": self.command, "seed": self.seed, "mode": self.mode,
                            "outputs": self.outputs, "verification": self.verification,
                            "warnings": self.warnings})

    def digest(self) -> str:
        """sha256 of the canonical JSON without timings."""
        text = json.dumps(self.body(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()

    def to_json(self) -> str:
        data = self.body()
        data["timings"] = to_jsonable(self.timings)
        data["digest"] = self.digest()
        return json.dumps(data, indent=2, sort_keys=True)


class _Timer:
    def __init__(self, report, stage):
        self.report, self.stage = report, stage

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.report.timings[self.stage] = time.perf_counter() - self.t0


# -- argument helpers --------------------------------------------------------

def _support(args, n, variables=None):
    if getattr(args, "support", None):
        return read_support(args.support, variables)
    if getattr(args, "delta", None) is None:
        raise InputError("give --support FILE or --delta D")
    return simplex_support(n, args.delta, variables)


def _source(args):
    if args.model and args.cloud:
        raise InputError("give either --model or --cloud, not both")
    if args.model:
        model, raw = read_model(args.model, args.mode)
        return model, raw
    if args.cloud:
        return interp.PointCloud.from_csv(Path(args.cloud).read_text(), args.mode or EXACT), {}
    raise InputError("give --model FILE or --cloud FILE")


def _point(text, mode):
    try:
        vals = [Fraction(v.strip()) for v in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad point {text!r}") from None
    return tuple(vals) if mode == EXACT else tuple(float(v) for v in vals)


# -- commands ----------------------------------------------------------------

def cmd_implicitize(args) -> RunReport:
    src, _ = _source(args)
    rep = RunReport("implicitize", args.seed, src.mode)
    support = _support(args, src.n, getattr(src, "variables", None))
    with _Timer(rep, "implicitize"):
        res = interp.implicitize(src, support, args.seed, args.mu, args.criterion)
    rep.outputs = {
        "support_size": len(support),
        "matrix_shape": list(res.matrix.shape),
        "kernel_dim": res.kernel_dim,
        "small": res.selection.small,
        "small_criterion": res.selection.values[:len(res.selection.small)],
        "reduced_degrees": sorted(p.total_degree() for p in res.selection.reduced),
        "attempts": res.attempts,
    }
    rep.verification = {"fresh_sample_vanishing": res.validated}
    if not res.validated:
        raise _Failed(rep, "kernel polynomials do not vanish on fresh samples")
    return rep


def cmd_rayshoot(args) -> RunReport:
    model, raw = read_model(args.model, args.mode)
    rep = RunReport("rayshoot", args.seed, model.mode)
    support = _support(args, model.n, model.variables)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        with _Timer(rep, "preprocess"):
            mp = interp.build_matrix(model, support, len(support) - 1, args.seed)
            pre = rayshoot.preprocess(mp, model, args.seed)
        ray = rayshoot.Ray.parse(args.ray, model.mode)
        patch = rayshoot.SurfacePatch.parse(model, args.patch or patch_text(raw))
        with _Timer(rep, "shoot"):
            p = rayshoot.ray_poly(pre, ray)
            hits = rayshoot.shoot(pre, patch, ray, strict=args.strict)
    rep.warnings = [str(w.message) for w in caught]
    rep.outputs = {"support_size": len(support), "ray_poly": str(p),
                   "ray_poly_degree": p.degree(), "condition": pre.condition, "hits": hits}
    return rep


def cmd_spacecurve(args) -> RunReport:
    model, _ = read_model(args.model, args.mode)
    rep = RunReport("spacecurve", args.seed, model.mode)
    with _Timer(rep, "implicitize"):
        if args.path == "resultant" and model.d == 1 and model.n == 3 and args.runs == 3:
            system = chow.space_curve_system(model, args.seed, args.box)
        else:
            system = chow.general_codim_implicitize(model, args.seed, args.runs, args.path,
                                                    args.delta, args.box)
    with _Timer(rep, "verify"):
        rep.verification = chow.verify_system(system, model, args.seed, args.on_count,
                                              args.off_count)
    entries = []
    for k, p in enumerate(system.polynomials):
        e = {"poly": p, "degree": p.total_degree()}
        if system.surfaces:
            s = system.surfaces[k]
            e.update(apex=s.config.G[0], extraneous=s.extraneous, exponent=s.exponent,
                     resultant_degree=s.resultant_degree)
        else:
            prov = system.provenance[k]
            e.update({key: v for key, v in prov.items() if key != "config"})
            if "config" in prov:
                e["apexes"] = prov["config"].G
        entries.append(e)
    rep.outputs = {"claimed_property": system.claimed_property, "polynomials": entries}
    if not rep.verification["passed"]:
        raise _Failed(rep, "system verification failed")
    return rep


def cmd_membership(args) -> RunReport:
    src, _ = _source(args)
    rep = RunReport("membership", args.seed, src.mode)
    support = _support(args, src.n, getattr(src, "variables", None))
    mu = args.mu if args.mu is not None else interp.default_mu(support, src.mode)
    if isinstance(src, interp.PointCloud):
        mu = min(mu, len(src.points))
    with _Timer(rep, "membership"):
        m = interp.build_matrix(src, support, mu, args.seed)
        q = _point(args.point, src.mode)
        result = interp.membership(m, q)
    key = "member" if src.mode == EXACT else "score"
    rep.outputs = {key: result, "point": q, "matrix_shape": list(m.shape)}
    return rep


def cmd_corpus(args) -> RunReport:
    rep = RunReport("corpus", args.seed, args.mode or EXACT)
    names = list(corpus.FIXTURES) if args.name == "all" else [args.name]
    results = []
    for name in names:
        with _Timer(rep, name):
            r = corpus.run_fixture(name, args.seed)
        r.pop("seconds")
        rep.warnings.extend(r["warnings"])
        results.append(r)
    rep.outputs = {"fixtures": results}
    rep.verification = {r["name"]: r["passed"] for r in results}
    if not all(r["passed"] for r in results):
        raise _Failed(rep, "fixture checks failed")
    return rep


class _Failed(ValidationFailed):
    def __init__(self, report, message):
        super().__init__(message)
        self.report = report


# -- parser ------------------------------------------------------------------

def _global_flags(p, suppress):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--mode", choices=[EXACT, FLOAT], default=d,
                   help="arithmetic mode (default: from the model, else exact)")
    p.add_argument("--seed", type=int, default=d if suppress else 0)
    p.add_argument("--out", default=d, help="write the JSON report here")
    p.add_argument("--quiet", action="store_true", default=d if suppress else False,
                   help="do not print the report")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="interpmat",
                                     description="Implicitization by interpolation matrices.")
    parser.add_argument("--version", action="version", version=__version__)
    _global_flags(parser, False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help):
        p = sub.add_parser(name, help=help)
        _global_flags(p, True)
        p.set_defaults(func=func)
        return p

    p = add("implicitize", cmd_implicitize, "kernel of the interpolation matrix")
    p.add_argument("--model")
    p.add_argument("--cloud", help="CSV point cloud")
    p.add_argument("--support", help="support file (one exponent vector per line)")
    p.add_argument("--delta", type=int, help="total-degree bound for a simplex support")
    p.add_argument("--mu", type=int, help="number of sample rows")
    p.add_argument("--criterion", choices=["degree", "terms"], default="degree")

    p = add("rayshoot", cmd_rayshoot, "intersect a ray with a parametric surface")
    p.add_argument("--model", required=True)
    p.add_argument("--support")
    p.add_argument("--delta", type=int)
    p.add_argument("--ray", required=True, help='"a1,b1;a2,b2;a3,b3" for x_i = a_i*rho + b_i')
    p.add_argument("--patch", help='"t1:lo,hi;t2:lo,hi"')
    p.add_argument("--strict", action="store_true", help="fail when a hit has no preimage")

    p = add("spacecurve", cmd_spacecurve, "implicit equations of a variety of codimension > 1")
    p.add_argument("--model", required=True)
    p.add_argument("--runs", type=int, default=3)
    p.add_argument("--box", type=int, default=chow.DEFAULT_BOX)
    p.add_argument("--path", choices=["resultant", "interp"], default="resultant")
    p.add_argument("--delta", type=int)
    p.add_argument("--on-count", type=int, default=100)
    p.add_argument("--off-count", type=int, default=100)

    p = add("membership", cmd_membership, "rank test for a point")
    p.add_argument("--model")
    p.add_argument("--cloud")
    p.add_argument("--support")
    p.add_argument("--delta", type=int)
    p.add_argument("--mu", type=int)
    p.add_argument("--point", required=True, help='"x1,x2,..."')

    p = add("corpus", cmd_corpus, "run a named regression fixture")
    p.add_argument("name", choices=sorted(corpus.FIXTURES) + ["all"])
    return parser


def _emit(report: RunReport, args):
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text + "\n")
    if not args.quiet:
        print(text)


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except _Failed as e:
        _emit(e.report, args)
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except InterpMatError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return InputError.exit_code
    _emit(report, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
