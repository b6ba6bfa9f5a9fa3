"""Command-line front end: ``finshape <group> <command> ...``."""
from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from . import io
from .approximation import EpsilonSchedule, build_finite_approximation, supported_elements
from .config import load_config
from .errors import FinShapeError, InputError, VerificationFailure
from .generators import (generate_circle, generate_interval, generate_sine_curve, limit_segment_indices,
                         sine_pipeline_space)
from .homology import homology_sequence, poset_betti, sequence_height
from .homotopy import UNKNOWN, homotopic
from .poset import core, hasse_export, height
from .sequences import restrict_sequence, sequence_core, verify_core_equivalence


def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InputError(f"expected comma separated integers, got {text!r}") from None


# gen

def cmd_gen(args, cfg):
    if args.kind == "sine-curve":
        if args.upto is not None:
            M, samples, radii = sine_pipeline_space(args.upto, args.allow_stage_4)
            d = io.cloud_to_dict(
                M, samples=samples,
                schedule={"values": [r.to_json() for r in radii], "variant": "p"},
                supports={"a_inf": limit_segment_indices(M)})
        else:
            if args.stage is None:
                raise InputError("sine-curve needs --stage or --upto")
            st = generate_sine_curve(args.stage, args.allow_stage_4)
            d = io.cloud_to_dict(st.space(), stage=st.stage, epsilon=st.epsilon.to_json())
    elif args.kind in ("circle", "interval"):
        if args.n is None:
            raise InputError(f"{args.kind} needs --n")
        M = generate_circle(args.n) if args.kind == "circle" else generate_interval(args.n)
        d = io.cloud_to_dict(M)
    else:  # file: validate and normalise an existing cloud
        if not args.input:
            raise InputError("file needs --input")
        raw = io.read_json(args.input)
        M = io.cloud_from_dict(raw, cfg.tolerance)
        if args.audit_triangle:
            M.audit_triangle()
        extra = {k: v for k, v in raw.items() if k not in ("points", "matrix", "dim")}
        d = io.cloud_to_dict(M, **extra)
    _emit(io.dumps(d), args.out)
    return 0


# approx

def _schedule(args, cloud: dict) -> EpsilonSchedule:
    if args.schedule:
        vals = [s.strip() for s in args.schedule.split(",") if s.strip()]
        return EpsilonSchedule(vals, args.variant or "q")
    if "schedule" in cloud:
        s = EpsilonSchedule.from_dict(cloud["schedule"])
        if args.variant and args.variant != s.variant:
            s = EpsilonSchedule(s.values, args.variant)
        return s
    raise InputError("no --schedule given and the input carries none")


def cmd_approx_build(args, cfg):
    cloud = io.read_json(args.input)
    M = io.cloud_from_dict(cloud, cfg.tolerance)
    sched = _schedule(args, cloud)
    samples = cloud.get("samples") if args.method is None else None
    method = args.method or "greedy"
    FA = build_finite_approximation(M, sched, args.stages, method=method, samples=samples, config=cfg)
    extra = {"samples": [list(a) for a in FA.samples]}
    if "supports" in cloud:
        extra["supports"] = cloud["supports"]
    path = io.write_sequence(FA.sequence(), args.out, sched, extra)
    sizes = [len(X) for X in FA.sequence().stages]
    print(f"wrote {path}; stage sizes {sizes}")
    return 0


# poset

def cmd_poset(args, cfg):
    X = io.load_poset(args.input)
    if args.sub == "core":
        R = core(X)
        doc = {
            "core": io.poset_to_dict(R.core),
            "removal_log": [list(e) for e in R.removal_log],
            "retraction": dict(R.retraction.assignment),
            "inclusion": dict(R.inclusion.assignment),
        }
        _emit(io.dumps(doc), args.out)
    elif args.sub == "height":
        _emit(f"height: {height(X)}\n", args.out)
    elif args.sub == "homology":
        b = poset_betti(X, args.p or cfg.p)
        _emit("betti: " + " ".join(str(v) for v in b) + "\n", args.out)
    else:
        if args.dot:
            _emit(hasse_export(X), args.out)
        else:
            _emit(io.dumps(io.poset_to_dict(X)), args.out)
    return 0


# seq

def cmd_seq(args, cfg):
    S, manifest = io.load_sequence(args.manifest)
    if args.sub == "core":
        R = sequence_core(S)
        extra = {"removal_logs": [[list(e) for e in c.removal_log] for c in R.cores],
                 "retractions": [dict(c.retraction.assignment) for c in R.cores]}
        path = io.write_sequence(R.core_sequence, args.out, extra=extra)
        print(f"wrote {path}; core sizes {[len(X) for X in R.core_sequence.stages]}")
        return 0
    if args.sub == "verify-core":
        R = sequence_core(S)
        rep = verify_core_equivalence(S, R, args.mode, cfg)
        for c in rep.checks:
            fl = "" if c.fence_length is None else f" fence {c.fence_length}"
            print(f"stage {c.stage} {c.diagram}: {c.verdict}{fl}")
        if args.out:
            io.write_json(args.out, rep.to_dict())
        if rep.failed:
            raise VerificationFailure(f"{len(rep.failed)} diagram(s) failed")
        if rep.inconclusive:
            print(f"warning: {len(rep.inconclusive)} diagram(s) inconclusive", file=sys.stderr)
        return 0
    if args.sub == "cech":
        p = args.p or cfg.p
        cache = {}
        reports = [homology_sequence(S, l, p, args.window, cache) for l in _int_list(args.degrees)]
        for r in reports:
            print(r.summary())
        if args.out:
            io.write_json(args.out, {"reports": [r.to_dict() for r in reports]})
        return 0
    if args.sub == "height":
        h, hs = sequence_height(S)
        print(f"height: {h}")
        print("stage heights: " + " ".join(map(str, hs)))
        return 0
    # restrict
    if args.selections:
        sel = io.read_json(args.selections)
    elif args.support:
        supports = manifest.get("supports", {})
        if args.support in supports:
            allowed = supports[args.support]
        else:
            allowed = _int_list(args.support)
        sel = [supported_elements(X, allowed) for X in S.stages]
    else:
        raise InputError("restrict needs --selections or --support")
    T = restrict_sequence(S, sel)
    path = io.write_sequence(T, args.out)
    print(f"wrote {path}; stage sizes {[len(X) for X in T.stages]}")
    return 0


# maps

def cmd_maps_homotopic(args, cfg):
    cache = {}
    f = io.load_map(args.f, cache)
    g = io.load_map(args.g, cache)
    res = homotopic(f, g, args.mode, config=cfg)
    if res.verdict == UNKNOWN:
        print("verdict: inconclusive")
        print("warning: no fence found within the search budget", file=sys.stderr)
        return 0
    print(f"verdict: {res.verdict}")
    if res.fence is not None:
        print(f"fence length: {res.fence_length}")
        for h in res.fence:
            print("  " + " ".join(f"{x}->{h(x)}" for x in h.source.ids))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="finshape", description="Finite-space models of compact metric spaces.")
    sub = ap.add_subparsers(dest="group", required=True)

    g = sub.add_parser("gen", help="generate point clouds")
    g.add_argument("kind", choices=["sine-curve", "circle", "interval", "file"])
    g.add_argument("--stage", type=int)
    g.add_argument("--upto", type=int, help="sine-curve: all stages 1..N in one cloud with samples")
    g.add_argument("--allow-stage-4", action="store_true")
    g.add_argument("--n", type=int)
    g.add_argument("--input")
    g.add_argument("--audit-triangle", action="store_true")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("approx", help="finite approximations")
    asub = a.add_subparsers(dest="sub", required=True)
    b = asub.add_parser("build")
    b.add_argument("--input", required=True)
    b.add_argument("--schedule", help="comma separated radii, e.g. 2,0.9 or sqrt(2)/8 forms")
    b.add_argument("--variant", choices=["q", "p"])
    b.add_argument("--stages", type=int)
    b.add_argument("--method", choices=["greedy", "grid"])
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_approx_build)

    p = sub.add_parser("poset", help="single-poset operations")
    p.add_argument("sub", choices=["core", "height", "homology", "hasse"])
    p.add_argument("input")
    p.add_argument("--p", type=int)
    p.add_argument("--dot", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_poset)

    s = sub.add_parser("seq", help="inverse-sequence operations")
    s.add_argument("sub", choices=["core", "verify-core", "cech", "height", "restrict"])
    s.add_argument("manifest")
    s.add_argument("--out")
    s.add_argument("--mode", choices=["exact", "witness"], default="witness")
    s.add_argument("--degrees", default="0,1")
    s.add_argument("--p", type=int)
    s.add_argument("--window", type=int, default=2)
    s.add_argument("--selections")
    s.add_argument("--support")
    s.set_defaults(func=cmd_seq)

    m = sub.add_parser("maps", help="maps between posets")
    msub = m.add_subparsers(dest="sub", required=True)
    h = msub.add_parser("homotopic")
    h.add_argument("f")
    h.add_argument("g")
    h.add_argument("--mode", choices=["exact", "witness"], default="exact")
    h.set_defaults(func=cmd_maps_homotopic)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config()
        if getattr(args, "p", None) is not None:
            cfg = cfg.updated(p=args.p)
        if args.group in ("seq",) and args.sub in ("core", "restrict") and not args.out:
            raise InputError(f"seq {args.sub} needs --out")
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args, cfg)
    except FinShapeError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
