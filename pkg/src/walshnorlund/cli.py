"""Command-line frontend.

Subcommands: kernel, mean, norm, criterion, decompose, experiment <id>,
list.  Output is JSON (full report) or CSV (series only).  Exit codes:
0 ok, 1 an --expect expectation failed, 2 usage error, 3 internal
invariant breach (e.g. the dual-route mean check).

Rational literals ("1/2", "0.1") parse exactly everywhere, so exactness
survives the flag parser; WALSHNORLUND_DPS sets the default precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__, experiments
from .kernels import decompose_kernel, dirichlet, fejer, fejer_shift_form, norlund_kernel
from .means import DualPathMismatch, norlund_mean
from .norms import hardy_norm, lp_quasinorm, weak_l1_norm
from .scalars import default_dps, format_scalar, parse_exact, set_default_dps
from .stepfunc import StepFunction
from .weights import criterion_h1, criterion_hp, load_custom, make_family

EXPERIMENTS = {
    "fejer-norm-scan": "exact L1 norms of the Fejer kernels up to 4096 against the sharp 17/15 bound",
    "kernel-norm-equivalence": "two-sided comparison of kernel L1 norms with the bit-boundary prefix-sum functional",
    "hardy1-unboundedness": "exact growth of mean norms on unit Hardy-space functions along sparse orders",
    "half-counterexample": "linear growth rate defeating any maximal-mean bound at exponent one half",
    "threshold-scan": "bracketing the boundedness threshold exponent over a p grid",
    "kernel-sup-scaling": "resolution scaling of the running sup of n|K_n|",
    "atom-quasilocality": "stability of complement integrals of maximal means on seeded random atoms",
}

PASS_VERDICTS = {"pass", "bounded-evidence"}


@dataclass
class RunConfig:
    """Validated invocation, echoed verbatim into report provenance."""

    command: str
    options: dict = field(default_factory=dict)
    fmt: str = "json"
    output: str | None = None
    expect: str | None = None
    precision: int | None = None
    seed: int = 0
    jobs: int = 1

    def echo(self) -> dict:
        return {k: str(v) for k, v in sorted(
            {**self.options, "command": self.command, "format": self.fmt,
             "precision": self.precision or default_dps(), "seed": self.seed,
             "jobs": self.jobs}.items())}


def _add_common(sp) -> None:
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", help="write the report here instead of stdout")
    sp.add_argument("--expect", choices=("pass", "fail"),
                    help="exit 1 unless the verdict matches")
    sp.add_argument("--precision", type=int, help="working decimal digits "
                    "(default 50, or WALSHNORLUND_DPS)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker processes for sweep experiments")


def _add_weights(sp) -> None:
    sp.add_argument("--weights", default="fejer",
                    choices=("fejer", "cesaro", "power", "logarithmic", "custom"))
    sp.add_argument("--alpha", type=parse_exact,
                    help="family exponent, exact literal like 1/2")
    sp.add_argument("--weights-file", help="two-column (index value) file for "
                    "--weights custom; 'a/b' literals accepted")
    sp.add_argument("--monotone", action="store_true",
                    help="declare a custom family non-increasing")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="walshnorlund",
        description="Exact kernels, means, norms and boundedness experiments "
                    "for Walsh-Fourier Norlund summability.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="dump a kernel as cell values")
    k.add_argument("--type", default="dirichlet",
                   choices=("dirichlet", "fejer", "norlund", "shift-form"))
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--resolution", type=int, required=True)
    _add_weights(k)
    _add_common(k)

    m = sub.add_parser("mean", help="apply the order-n mean to a step function")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--input", required=True, help="step-function text file")
    _add_weights(m)
    _add_common(m)

    n = sub.add_parser("norm", help="compute a (quasi-)norm of a step function")
    n.add_argument("--kind", default="lp", choices=("lp", "weak-l1", "hardy", "linf"))
    n.add_argument("--p", type=parse_exact, help="exponent (exact literal)")
    n.add_argument("--input", required=True)
    _add_common(n)

    c = sub.add_parser("criterion", help="evaluate a boundedness criterion")
    c.add_argument("--p", type=parse_exact, default=Fraction(1))
    c.add_argument("--nmax", type=int, default=40)
    c.add_argument("--which", default="hp", choices=("hp", "h1"))
    _add_weights(c)
    _add_common(c)

    d = sub.add_parser("decompose", help="two-stage kernel decomposition")
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--resolution", type=int, required=True)
    _add_weights(d)
    _add_common(d)

    e = sub.add_parser("experiment", help="run a named experiment")
    e.add_argument("id", choices=sorted(EXPERIMENTS))
    e.add_argument("--nmax", type=int)
    e.add_argument("--nmin", type=int)
    e.add_argument("--amax", type=int, default=5)
    e.add_argument("--p", type=parse_exact)
    e.add_argument("--levels", default="2-6", help="atom levels, e.g. 2-6")
    e.add_argument("--atoms", type=int, default=20)
    e.add_argument("--delta", type=int, default=4)
    e.add_argument("--spread-cap", type=float, default=20.0)
    _add_weights(e)
    _add_common(e)

    sub.add_parser("list", help="catalog of experiments")
    return ap


def _weights_from(args) -> "WeightSequence":
    if args.weights == "custom":
        if not args.weights_file:
            raise SystemExit2("--weights custom needs --weights-file")
        return load_custom(args.weights_file, non_increasing=args.monotone)
    return make_family(args.weights, alpha=args.alpha)


class SystemExit2(Exception):
    """Usage error discovered after argparse."""


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _values_csv(values) -> str:
    lines = ["index,value"]
    lines += [f"{i},{format_scalar(v)}" for i, v in enumerate(values)]
    return "\n".join(lines) + "\n"


def _values_json(kind: str, cfg: RunConfig, values, extra: dict | None = None) -> str:
    doc = {
        "kind": kind,
        "values": [format_scalar(v) for v in values],
        "provenance": {"version": __version__, "precision_dps": default_dps(),
                       "config": cfg.echo()},
    }
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _run_kernel(args, cfg: RunConfig) -> tuple[str, str]:
    if args.type == "dirichlet":
        fn = dirichlet(args.n, args.resolution)
    elif args.type == "fejer":
        fn = fejer(args.n, args.resolution)
    elif args.type == "shift-form":
        fn = fejer_shift_form(args.n, args.resolution)
    else:
        fn = norlund_kernel(_weights_from(args), args.n, args.resolution)
    if cfg.fmt == "csv":
        return _values_csv(fn.values), "pass"
    return _values_json(f"kernel-{args.type}", cfg, fn.values,
                        {"n": args.n, "resolution": args.resolution}), "pass"


def _run_mean(args, cfg: RunConfig) -> tuple[str, str]:
    f = StepFunction.load_text(args.input)
    t = norlund_mean(_weights_from(args), args.n, f)
    if cfg.fmt == "csv":
        return _values_csv(t.values), "pass"
    return _values_json("norlund-mean", cfg, t.values, {"n": args.n}), "pass"


def _run_norm(args, cfg: RunConfig) -> tuple[str, str]:
    f = StepFunction.load_text(args.input)
    if args.kind == "lp":
        nv = lp_quasinorm(f, args.p if args.p is not None else Fraction(1))
    elif args.kind == "linf":
        nv = lp_quasinorm(f, "inf")
    elif args.kind == "weak-l1":
        nv = weak_l1_norm(f)
    else:
        nv = hardy_norm(f, args.p if args.p is not None else Fraction(1))
    doc = {
        "kind": nv.kind,
        "p": format_scalar(nv.p) if nv.p is not None else None,
        "value": format_scalar(nv.value),
        "backend": nv.backend,
        "precision_dps": nv.dps,
        "provenance": {"version": __version__, "config": cfg.echo()},
    }
    if cfg.fmt == "csv":
        return f"index,value\n0,{format_scalar(nv.value)}\n", "pass"
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", "pass"


def _run_criterion(args, cfg: RunConfig) -> tuple[str, str]:
    q = _weights_from(args)
    if args.which == "h1":
        rep = criterion_h1(q, args.nmax)
    else:
        rep = criterion_hp(q, args.p, args.nmax)
    doc = rep.to_dict()
    doc["provenance"] = {"version": __version__, "precision_dps": default_dps(),
                         "config": cfg.echo()}
    if cfg.fmt == "csv":
        lines = ["index,value"] + [f"{r['index']},{r['value']}" for r in doc["series"]]
        return "\n".join(lines) + "\n", rep.verdict
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", rep.verdict


def _run_decompose(args, cfg: RunConfig) -> tuple[str, str]:
    q = _weights_from(args)
    dec = decompose_kernel(q, args.n, args.resolution)
    closed = dec.closed()
    parts = {"whole": dec.whole, "part1": dec.part1, "part2": dec.part2,
             "part2a": dec.part2a, "part2b": dec.part2b}
    if cfg.fmt == "csv":
        lines = ["index," + ",".join(parts)]
        for c in range(dec.whole.size):
            lines.append(",".join([str(c)] + [format_scalar(p.values[c])
                                              for p in parts.values()]))
        return "\n".join(lines) + "\n", "pass" if closed else "fail"
    doc = {
        "n": args.n,
        "weights": q.label,
        "closed": closed,
        "l1_norms": {name: format_scalar(p.integrate(absolute=True))
                     for name, p in parts.items()},
        "values": {name: [format_scalar(v) for v in p.values]
                   for name, p in parts.items()},
        "provenance": {"version": __version__, "config": cfg.echo()},
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", "pass" if closed else "fail"


def _parse_levels(text: str) -> range:
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def _run_experiment(args, cfg: RunConfig) -> tuple[str, str]:
    q = _weights_from(args)
    eid = args.id
    if eid == "fejer-norm-scan":
        rep = experiments.fejer_norm_scan(args.nmax or 4096)
    elif eid == "kernel-norm-equivalence":
        indices = range(max(args.nmin or 2, 2), (args.nmax or 256))
        rep = experiments.norm_equivalence_sweep(q, indices,
                                                 spread_cap=args.spread_cap,
                                                 jobs=cfg.jobs)
    elif eid == "hardy1-unboundedness":
        rep = experiments.hardy1_unboundedness(q, args.amax)
    elif eid == "half-counterexample":
        rep = experiments.half_counterexample(q, args.nmin or 4, args.nmax or 12)
    elif eid == "threshold-scan":
        rep = experiments.threshold_scan(q, n_max=args.nmax or 40)
    elif eid == "kernel-sup-scaling":
        rep = experiments.kernel_sup_scaling(n_max=args.nmax or 12)
    else:
        rep = experiments.atom_quasilocality(
            q, p=args.p if args.p is not None else Fraction(1),
            levels=_parse_levels(args.levels), atoms_per_level=args.atoms,
            delta=args.delta, seed=cfg.seed, jobs=cfg.jobs)
    rep.provenance["cli_config"] = cfg.echo()
    if cfg.fmt == "csv":
        return rep.to_csv(), rep.verdict
    return rep.to_json(), rep.verdict


def _run_list() -> str:
    width = max(len(k) for k in EXPERIMENTS)
    lines = [f"{k.ljust(width)}  {v}" for k, v in sorted(EXPERIMENTS.items())]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command == "list":
        sys.stdout.write(_run_list())
        return 0
    cfg = RunConfig(command=args.command,
                    options={k: v for k, v in vars(args).items()
                             if k not in ("command", "format", "output", "expect",
                                          "precision", "seed", "jobs") and v is not None},
                    fmt=args.format, output=args.output, expect=args.expect,
                    precision=args.precision, seed=args.seed, jobs=args.jobs)
    if args.precision:
        set_default_dps(args.precision)
    try:
        if args.command == "kernel":
            text, verdict = _run_kernel(args, cfg)
        elif args.command == "mean":
            text, verdict = _run_mean(args, cfg)
        elif args.command == "norm":
            text, verdict = _run_norm(args, cfg)
        elif args.command == "criterion":
            text, verdict = _run_criterion(args, cfg)
        elif args.command == "decompose":
            text, verdict = _run_decompose(args, cfg)
        else:
            text, verdict = _run_experiment(args, cfg)
    except (SystemExit2, experiments.ExperimentRefused, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DualPathMismatch, RuntimeError) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return 3
    _emit(text, cfg.output)
    if cfg.expect == "pass" and verdict not in PASS_VERDICTS:
        print(f"expectation failed: verdict {verdict}", file=sys.stderr)
        return 1
    if cfg.expect == "fail" and verdict in PASS_VERDICTS:
        print(f"expectation failed: verdict {verdict}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
