"""Command line interface.

Exit codes: 0 success, 1 invalid input (parse, validation, non-Killing
tensor, size cap), 2 failed internal self-check.
"""

import argparse
import os
import sys

import numpy as np

from . import catalog, flow, report
from .classify import classify, sufficient_decomposable
from .derivations import skew_derivations
from .errors import InternalError, NeedsFloatFallback, NilKillingError, ValidationError
from .killing import component_split, killing_space, killing_two_forms, parallel_space, random_killing
from .liealg import is_nonsingular, j_injective
from .linalg import eye
from .oracle import OracleSpan, decomposable_subspace
from .textio import parse, read

DEFAULT_ORACLE_CAP = 10


class UsageError(ValidationError):
    pass


def load_algebra(spec):
    """ALGEBRA argument: a file path, or a catalog name such as heisenberg-2."""
    if os.path.isfile(spec):
        af = read(spec)
    else:
        af = catalog.lookup(spec)
        if af is None:
            raise UsageError(f"{spec!r} is neither a file nor a catalog name (see 'examples list')")
        af = parse(catalog.emit(spec))
    alg, tensors = af.build()
    return af, alg, tensors


def select_tensors(args, alg, embedded):
    """Labelled tensors from --tensor / --all-killing-basis / the algebra file."""
    picked = []
    if getattr(args, "all_killing_basis", False):
        picked += [(f"killing_{i + 1}", t) for i, t in enumerate(killing_space(alg).tensors)]
    for spec in getattr(args, "tensor", None) or []:
        if os.path.isfile(spec):
            tf = read(spec)
            if tf.dim != alg.dim:
                raise UsageError(f"tensor file {spec} has dimension {tf.dim}, algebra has {alg.dim}")
            if not tf.tensors:
                raise UsageError(f"tensor file {spec} contains no tensor blocks")
            for name, t in tf.tensors.items():
                if alg.frame is not None:
                    t = alg.frame.T @ np.asarray(t, dtype=float) @ alg.frame
                picked.append((name, t))
        elif spec in embedded:
            picked.append((spec, embedded[spec]))
        elif spec == "metric":
            picked.append(("metric", eye(alg.dim, alg.exact)))
        else:
            raise UsageError(f"no tensor file or embedded tensor named {spec!r}")
    if not picked:
        picked = list(embedded.items())
    if not picked:
        raise UsageError("no tensors given: use --tensor FILE|NAME or --all-killing-basis")
    return picked


# ---------------------------------------------------------------- commands


def cmd_validate(args):
    af, alg, _ = load_algebra(args.algebra)
    doc = report.header("validate", alg.mode, algebra=args.algebra)
    doc["valid"] = True
    doc["dim"] = alg.dim
    doc["basis"] = alg.names
    return doc


def _ideals(alg):
    """Ideal decomposition, in float when the exact projectors are irrational."""
    try:
        return alg.ideals, alg.mode
    except NeedsFloatFallback:
        return alg.to_float().ideals, "float"


def cmd_analyze(args):
    _, alg, _ = load_algebra(args.algebra)
    split = alg.split
    ders = skew_derivations(alg)
    ks = killing_space(alg)
    par = parallel_space(alg)
    forms = killing_two_forms(alg)
    ns = is_nonsingular(alg, samples=args.samples, seed=args.seed)
    ideals, ideals_mode = _ideals(alg)
    doc = report.header("analyze", alg.mode, {"nonsingularity": args.seed}, algebra=args.algebra)
    doc["dim"] = alg.dim
    doc["basis"] = alg.names
    doc["invariants"] = {
        "dim_center": split.z.dim,
        "dim_v": split.v.dim,
        "dim_derived": split.derived.dim,
        "dim_abelian_factor": split.abelian_factor.dim,
        "dim_skew_derivations": ders.dim,
        "dim_killing_tensors": ks.dim,
        "dim_parallel_tensors": par.dim,
        "dim_killing_2forms": forms.dim,
        "j_injective": j_injective(alg),
        "irreducible": ideals.is_irreducible,
    }
    doc["center_split"] = {
        "center": report.subspace(split.z),
        "v": report.subspace(split.v),
        "derived": report.subspace(split.derived),
        "abelian_factor": report.subspace(split.abelian_factor),
    }
    doc["j_map"] = [{"z": report.vector(z), "j": report.matrix(j)} for z, j in zip(alg.jmap.basis, alg.jmap.matrices)]
    doc["ideals_mode"] = ideals_mode
    doc["ideals"] = [{"kind": c.kind, "basis": report.subspace(c.space)} for c in ideals.components]
    doc["skew_derivations"] = [report.matrix(d) for d in ders.basis]
    doc["killing_basis"] = [report.matrix(t) for t in ks.tensors]
    doc["parallel_basis"] = [report.matrix(t) for t in par.tensors]
    doc["killing_2forms"] = [report.matrix(t) for t in forms.forms]
    doc["nonsingularity"] = {
        "status": ns.label,
        "witness": None if ns.witness is None else report.vector(ns.witness),
        "method": ns.method,
        "samples": ns.samples,
    }
    doc["sufficient_decomposable"] = sufficient_decomposable(alg)
    # the oracle gives the decomposable subspace exactly, within its size cap
    if alg.exact and alg.dim <= args.oracle_cap:
        dec = decomposable_subspace(alg, killing=ks)
        doc["invariants"]["dim_decomposable_killing"] = dec.dim
        doc["decomposable_killing_coordinates"] = report.subspace(dec)
    else:
        doc["invariants"]["dim_decomposable_killing"] = None
    return doc


def cmd_classify(args):
    _, alg, embedded = load_algebra(args.algebra)
    tensors = select_tensors(args, alg, embedded)
    doc = report.header("classify", alg.mode, algebra=args.algebra)
    doc["verdicts"] = [report.verdict(label, classify(alg, s)) for label, s in tensors]
    return doc


def _check_cap(alg, cap):
    if alg.dim > cap:
        raise UsageError(f"oracle refused: dimension {alg.dim} exceeds the cap {cap} (raise it with --oracle-cap)")
    if not alg.exact:
        raise UsageError("oracle refused: it runs in exact mode only (identity metric)")


def cmd_oracle(args):
    _, alg, embedded = load_algebra(args.algebra)
    _check_cap(alg, args.oracle_cap)
    tensors = select_tensors(args, alg, embedded)
    span = OracleSpan(alg)
    doc = report.header("oracle", alg.mode, algebra=args.algebra)
    doc["generators"] = span.generator_count
    doc["span_rank"] = span.rank
    results = []
    for label, s in tensors:
        m = span.membership(s)
        entry = {"tensor": label, "member": m.member, "verdict": "Decomposable" if m.member else "Indecomposable"}
        if m.member:
            entry["expansion"] = {k: report.scalar(v) for k, v in m.coefficients.items()}
        results.append(entry)
    doc["results"] = results
    return doc


def cmd_flow(args):
    _, alg, embedded = load_algebra(args.algebra)
    if getattr(args, "tensor", None) or getattr(args, "all_killing_basis", False) or embedded:
        tensors = select_tensors(args, alg, embedded)
    else:
        tensors = [(f"killing_{i + 1}", t) for i, t in enumerate(killing_space(alg).tensors)]
    y0, w0 = flow.random_states(alg.dim, args.states, args.seed)
    traj = flow.integrate(alg, y0, w0, t_max=args.t_max, steps=args.steps)
    doc = report.header("flow", "float", {"initial_states": args.seed}, algebra=args.algebra)
    doc["kernel"] = flow.KERNEL
    doc["t_max"] = args.t_max
    doc["steps"] = args.steps
    doc["h"] = traj.h
    doc["states"] = args.states
    doc["energy_drift"] = flow.drift(alg, np.eye(alg.dim), traj)
    doc["velocity_error"] = flow.velocity_error(alg, traj)
    doc["drift"] = [{"tensor": label, "drift": flow.drift(alg, s, traj)} for label, s in tensors]
    return doc


def cmd_crosscheck(args):
    _, alg, embedded = load_algebra(args.algebra)
    _check_cap(alg, args.oracle_cap)
    ks = killing_space(alg)
    tensors = [(f"killing_{i + 1}", t) for i, t in enumerate(ks.tensors)]
    tensors += random_killing(ks, args.random, args.seed)
    tensors += list(embedded.items())
    span = OracleSpan(alg)
    doc = report.header("crosscheck", alg.mode, {"random_combinations": args.seed}, algebra=args.algebra)
    rows = []
    for label, s in tensors:
        v = classify(alg, s)
        m = span.membership(s)
        oracle = "Decomposable" if m.member else "Indecomposable"
        rows.append({"tensor": label, "classify": v.label, "oracle": oracle, "agree": v.label == oracle})
    doc["results"] = rows
    doc["agree"] = all(r["agree"] for r in rows)
    doc["mixed_parts_nonzero"] = sum(1 for _, s in tensors if any(x != 0 for x in component_split(s, alg.split).s_m.flat))
    return doc


def cmd_examples(args):
    if args.action == "list":
        width = max(len(k) for k in catalog.DESCRIPTIONS)
        return "".join(f"{k:<{width}}  {v}\n" for k, v in catalog.DESCRIPTIONS.items())
    if not args.name:
        raise UsageError("examples emit needs a NAME")
    try:
        return catalog.emit(args.name)
    except KeyError:
        raise UsageError(f"unknown example {args.name!r}") from None


# ------------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="nilkilling", description=__doc__.splitlines()[0])
    p.add_argument("-o", "--output", help="write the report to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_cmd(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("algebra", help="algebra file or catalog name")
        return sp

    algebra_cmd("validate", "check the structure constants")
    sp = algebra_cmd("analyze", "center split, j-maps, derivations, Killing and parallel tensors")
    sp.add_argument("--seed", type=int, default=0, help="seed for the nonsingularity sampler")
    sp.add_argument("--samples", type=int, default=64)
    sp.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)

    def tensor_args(sp):
        sp.add_argument("--tensor", action="append", metavar="FILE|NAME", help="tensor file, embedded tensor name or 'metric'")
        sp.add_argument("--all-killing-basis", action="store_true", help="use the Killing space basis")

    tensor_args(algebra_cmd("classify", "decomposable or indecomposable, with certificates"))
    sp = algebra_cmd("oracle", "polynomial span membership")
    tensor_args(sp)
    sp.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    sp = algebra_cmd("flow", "geodesic-flow drift of first integrals")
    tensor_args(sp)
    sp.add_argument("--t-max", type=float, default=20.0)
    sp.add_argument("--steps", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--states", type=int, default=10)
    sp = algebra_cmd("crosscheck", "compare classify with the oracle")
    sp.add_argument("--random", type=int, default=20, help="number of random Killing combinations")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle-cap", type=int, default=DEFAULT_ORACLE_CAP)
    sp = sub.add_parser("examples", help="list or emit catalog algebras")
    sp.add_argument("action", choices=["list", "emit"])
    sp.add_argument("name", nargs="?")
    return p


COMMANDS = {
    "validate": cmd_validate,
    "analyze": cmd_analyze,
    "classify": cmd_classify,
    "oracle": cmd_oracle,
    "flow": cmd_flow,
    "crosscheck": cmd_crosscheck,
    "examples": cmd_examples,
}


def _error_doc(args, exc):
    doc = report.header(args.command, None, algebra=getattr(args, "algebra", None))
    doc["error"] = {"type": type(exc).__name__, "message": str(exc)}
    violations = getattr(exc, "violations", None)
    if violations:
        doc["error"]["violations"] = [{"kind": k, "indices": list(idx)} for k, idx in violations]
    return doc


def run(argv=None):
    """Run a command; returns (exit code, output text)."""
    args = build_parser().parse_args(argv)
    try:
        out = COMMANDS[args.command](args)
        code = 0
        if isinstance(out, dict) and out.get("agree") is False:
            code = 2
    except ValidationError as exc:
        out, code = _error_doc(args, exc), 1
    except (InternalError, NilKillingError, ArithmeticError) as exc:
        out, code = _error_doc(args, exc), 2
    text = report.dumps(out) if isinstance(out, dict) else out
    return code, text, args


def main(argv=None):
    code, text, args = run(argv)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
