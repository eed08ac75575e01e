"""Command-line entry point: ``jsynth {synth,prepare,kron,bench}``.

Exit codes: 0 success, 1 input error, 2 success with at least one Kronecker
search that hit its cap (the reported budget is still true).
"""

import argparse
import ast
import csv
import io
import json
import math
import operator
import sys
import time

import numpy as np

from .circuit import Perm, evaluate
from .formats import (
    FormatError,
    format_complex,
    parse_matrix,
    parse_state,
    read_text,
    sequence_to_records,
    write_atomic,
)
from .gates import JGate
from .hypersphere import prepare_state
from .kronecker import DEFAULT_M_MAX, KroneckerQuery, default_constants, find_power, small_relation
from .numerics import haar_unitary, is_unitary, phase_aligned_dist
from .synthesis import expand_perms, synth_unitary

EXIT_OK, EXIT_INPUT, EXIT_DEGRADED = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi, "e": math.e, "tau": math.tau}
_FUNCS = {"sqrt": math.sqrt, "sin": math.sin, "cos": math.cos, "log": math.log, "exp": math.exp}


def parse_real(text):
    """A float or a small arithmetic expression such as ``sqrt(2)`` or ``pi/2``."""
    text = text.strip().replace("√", "sqrt")
    text = text.replace("π", "pi")
    # allow the shorthand sqrt2
    if text.startswith("sqrt") and text[4:].replace(".", "", 1).isdigit():
        text = f"sqrt({text[4:]})"

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)
                and node.func.id in _FUNCS and len(node.args) == 1):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError

    try:
        return float(ev(ast.parse(text, mode="eval")))
    except (SyntaxError, ValueError, TypeError, ZeroDivisionError, OverflowError):
        raise InputError(f"cannot parse real number {text!r}") from None


def parse_list(text, conv=parse_real):
    items = text.split(",")
    if not items or any(not t.strip() for t in items):
        raise InputError(f"malformed list {text!r}")
    return [conv(t) for t in items]


def _int(text):
    try:
        v = float(text)
    except ValueError:
        raise InputError(f"not an integer: {text!r}") from None
    if v != int(v) or v < 0:
        raise InputError(f"not a non-negative integer: {text!r}")
    return int(v)


def _jgate(args):
    alpha0, beta0 = default_constants()
    alpha = alpha0 if args.alpha is None else parse_real(args.alpha)
    beta = beta0 if args.beta is None else parse_real(args.beta)
    if (alpha, beta) != (alpha0, beta0):
        print("warning: alpha and beta must be rationally independent together with pi; "
              "this is the caller's responsibility", file=sys.stderr)
        coeffs, s, res = small_relation([alpha, beta, math.pi], 20, constant=False)
        if res < 1e-9:
            print(f"warning: near-exact relation {coeffs} holds to {res:.1e}; "
                  "powers of J will not be dense", file=sys.stderr)
    return JGate(alpha, beta)


def _emit(text, path):
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _positive(x, name):
    if not x > 0:
        raise InputError(f"{name} must be positive, got {x}")
    return x


def cmd_synth(args):
    g = _jgate(args)
    eps = _positive(parse_real(args.eps_step), "--eps-step")
    m_max = _int(args.m_max)
    target = parse_matrix(read_text(args.target))
    if target.shape != (4, 4):
        raise InputError(f"target must be 4x4, got {target.shape[0]}x{target.shape[1]}")
    if not is_unitary(target, 1e-8):
        raise InputError("target is not unitary within 1e-8")
    t0 = time.perf_counter()
    rep = synth_unitary(target, eps, g, m_max)
    seq, err, exhausted = rep.sequence, rep.measured_error, rep.exhausted_steps
    extra = {}
    if args.expand_perms:
        seq = expand_perms(seq, eps, m_max)
        exhausted += seq.exhausted_steps
        err = phase_aligned_dist(evaluate(seq), target, candidates=(seq.global_phase,))
        left = sum(1 for x in seq.gates if isinstance(x, Perm))
        extra["unexpanded_perms"] = left
        if left:
            print(f"warning: {left} permutation(s) move |11> and cannot be expressed "
                  "with J powers; kept as classical gates", file=sys.stderr)
    report = {
        "target_path": args.target,
        "alpha": g.alpha,
        "beta": g.beta,
        "eps_step": eps,
        "sequence": sequence_to_records(seq),
        "total_budget": seq.total_budget,
        "measured_error": err,
        "global_phase": seq.global_phase,
        "eigen_angles": rep.eigen_angles,
        "wall_time_ms": 1000 * (time.perf_counter() - t0),
        "exhausted_steps": exhausted,
        **extra,
    }
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_DEGRADED if exhausted else EXIT_OK


def cmd_prepare(args):
    g = _jgate(args)
    eps = _positive(parse_real(args.eps_step), "--eps-step")
    m_max = _int(args.m_max)
    v = parse_state(read_text(args.state))
    n = float(np.linalg.norm(v))
    if n == 0:
        raise InputError("state is the zero vector")
    if abs(n - 1) > 1e-8:
        print(f"warning: state has norm {n:.17g}; normalising", file=sys.stderr)
    v = v / n
    t0 = time.perf_counter()
    prep = prepare_state(v, eps, g, m_max)
    seq = prep.sequence
    report = {
        "state_path": args.state,
        "alpha": g.alpha,
        "beta": g.beta,
        "eps_step": eps,
        "sequence": sequence_to_records(seq),
        "total_budget": seq.total_budget,
        "fidelity": prep.fidelity,
        "global_phase": seq.global_phase,
        "achieved_state": [format_complex(z) for z in prep.state],
        "wall_time_ms": 1000 * (time.perf_counter() - t0),
        "exhausted_steps": seq.exhausted_steps,
    }
    _emit(json.dumps(report, indent=1) + "\n", args.out)
    return EXIT_DEGRADED if seq.exhausted_steps else EXIT_OK


def cmd_kron(args):
    alphas = parse_list(args.alphas)
    targets = parse_list(args.targets)
    eps = parse_real(args.eps)
    try:
        q = KroneckerQuery(alphas, targets, eps, _int(args.m_max))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    res = find_power(q)
    print(f"m = {res.m}")
    print("errors = " + " ".join(f"{e:.17g}" for e in res.achieved_errors))
    print(f"exhausted = {str(res.exhausted).lower()}")
    return EXIT_DEGRADED if res.exhausted else EXIT_OK


BENCH_COLUMNS = ["eps_step", "trial", "sequence_length", "total_budget", "measured_error",
                 "wall_time_ms"]


def bench_rows(trials, eps_steps, seed, g=None, m_max=DEFAULT_M_MAX, timing=False):
    for eps in eps_steps:
        for trial in range(trials):
            target = haar_unitary(np.random.default_rng([seed, trial]))
            rep = synth_unitary(target, eps, g, m_max)
            yield {
                "eps_step": f"{eps:.17g}",
                "trial": trial,
                "sequence_length": len(rep.sequence),
                "total_budget": f"{rep.total_budget:.17g}",
                "measured_error": f"{rep.measured_error:.17g}",
                "wall_time_ms": f"{1000 * rep.wall_time:.3f}" if timing else "",
            }


def cmd_bench(args):
    trials = _int(args.trials)
    eps_steps = [_positive(e, "--eps-step") for e in parse_list(args.eps_step)]
    seed = _int(args.seed)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in bench_rows(trials, eps_steps, seed, m_max=_int(args.m_max), timing=args.timing):
        w.writerow(row)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="jsynth", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def gate_opts(sp):
        sp.add_argument("--alpha", default=None, help="J rotation angle (default sqrt 2)")
        sp.add_argument("--beta", default=None, help="J phase angle (default sqrt 3)")
        sp.add_argument("--m-max", default=str(DEFAULT_M_MAX), help="Kronecker search cap")

    s = sub.add_parser("synth", help="compile a 4x4 unitary into J powers")
    s.add_argument("--target", required=True, help="matrix file")
    s.add_argument("--eps-step", default="5e-3", help="per-step Kronecker tolerance")
    gate_opts(s)
    s.add_argument("--expand-perms", action="store_true",
                   help="replace permutations by sigma-type J powers where possible")
    s.add_argument("--out", help="JSON report path (stdout if omitted)")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("prepare", help="prepare a pure state from |11>")
    s.add_argument("--state", required=True, help="file with 4 complex amplitudes")
    s.add_argument("--eps-step", default="5e-3")
    gate_opts(s)
    s.add_argument("--out")
    s.set_defaults(func=cmd_prepare)

    s = sub.add_parser("kron", help="find m with m*alpha_j close to x_j on the circle")
    s.add_argument("--alphas", required=True, help="comma-separated, e.g. sqrt(2),sqrt(3)")
    s.add_argument("--targets", required=True, help="comma-separated, e.g. pi/2,0")
    s.add_argument("--eps", required=True)
    s.add_argument("--m-max", default=str(DEFAULT_M_MAX))
    s.set_defaults(func=cmd_kron)

    s = sub.add_parser("bench", help="synthesise Haar-random targets and write a CSV")
    s.add_argument("--trials", default="10")
    s.add_argument("--eps-step", default="5e-3", help="comma-separated list")
    s.add_argument("--seed", default="0")
    s.add_argument("--m-max", default=str(DEFAULT_M_MAX))
    s.add_argument("--timing", action="store_true",
                   help="fill wall_time_ms (makes the CSV run-dependent)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code
    try:
        return args.func(args)
    except (InputError, FormatError, OSError) as exc:
        print(f"jsynth {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
