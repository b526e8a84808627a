"""Command-line front end.

One binary, one subcommand per job kind.  Every subcommand accepts
--job FILE with a JSON job document (or an array of them, run in
order), or inline flags for the common cases.  Output is stable JSON
on stdout: keys sorted, two-space indent, every number a decimal
string.  The report subcommand prints its table raw.

Exit codes: 0 success, 1 input error, 2 precondition violation,
3 internal invariant failure.  Batches exit with the worst code.
"""

import argparse
import json
import os
import sys

from .errors import InputError
from .jobs import (
    JobError,
    error_payload,
    job_from_obj,
    run_job,
    run_walls_oracle,
)
from .render import color_mode, render_report

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 means precondition here, so remap
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _parse_ints(text):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise JobError("expected comma-separated integers, got %r" % text)


def _parse_vector(text):
    vals = _parse_ints(text)
    if len(vals) < 3:
        raise JobError(
            "a vector needs at least r, one c1 entry, and a: got %r" % text
        )
    return {"r": vals[0], "c1": vals[1:-1], "a": vals[-1]}


def _parse_gram(text):
    if ";" in text:
        return [_parse_ints(row) for row in text.split(";")]
    vals = _parse_ints(text)
    if len(vals) == 1:
        return [vals]
    raise JobError(
        "a Gram matrix is one integer or ';'-separated rows, got %r" % text
    )


def _surface_obj(args):
    surface = {"kind": args.kind, "ns_gram": _parse_gram(args.gram)}
    if args.ample is not None:
        surface["ample_ray"] = _parse_ints(args.ample)
    return surface


def _opt(inputs, key, value):
    if value is not None:
        inputs[key] = value


def _isotropic_obj(args):
    params = {}
    for key in ("r0", "d0", "k", "d1", "l"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    return params or None


def _fibration_obj(args):
    fib = {}
    for key in ("sigma", "f", "tau"):
        val = getattr(args, key)
        if val is not None:
            fib[key] = _parse_ints(val)
    return fib or None


def _inline_inputs(args):
    command = args.command
    inputs = {}
    if command == "pair":
        _opt(inputs, "v", args.v and _parse_vector(args.v))
        _opt(inputs, "w", args.w and _parse_vector(args.w))
    elif command in ("perp", "kummer"):
        _opt(inputs, "v", args.v and _parse_vector(args.v))
    elif command == "fm":
        _opt(inputs, "map", args.map)
        _opt(inputs, "v", args.v and _parse_vector(args.v))
        _opt(inputs, "twist_class", args.twist_class and _parse_ints(args.twist_class))
        _opt(inputs, "isotropic", _isotropic_obj(args))
        _opt(inputs, "fibration", _fibration_obj(args))
        _opt(inputs, "v1", args.v1 and _parse_vector(args.v1))
        _opt(inputs, "w1", args.w1 and _parse_vector(args.w1))
    elif command == "walls":
        _opt(inputs, "c1", args.c1 and _parse_ints(args.c1))
        _opt(inputs, "chi", args.chi)
        _opt(inputs, "l0", args.l0 and _parse_ints(args.l0))
        _opt(inputs, "point", args.point and _parse_ints(args.point))
        if args.p0 is not None or args.p1 is not None:
            seg = {}
            _opt(seg, "p0", args.p0 and _parse_ints(args.p0))
            _opt(seg, "p1", args.p1 and _parse_ints(args.p1))
            inputs["segment"] = seg
    elif command == "classify":
        _opt(inputs, "v", args.v and _parse_vector(args.v))
        _opt(inputs, "isotropic", _isotropic_obj(args))
        _opt(inputs, "fibration", _fibration_obj(args))
        if args.v1 is not None or args.w1 is not None:
            ref = {}
            _opt(ref, "v1", args.v1 and _parse_vector(args.v1))
            _opt(ref, "w1", args.w1 and _parse_vector(args.w1))
            inputs["reflection"] = ref
        if args.star_asserted:
            inputs["star_asserted"] = True
    elif command == "deform":
        if args.v:
            vectors = [_parse_vector(text) for text in args.v]
            if len(vectors) == 1:
                inputs["v"] = vectors[0]
            else:
                inputs["vectors"] = vectors
    elif command == "albanese-check":
        _opt(inputs, "r", args.r)
        _opt(inputs, "a", args.a)
        _opt(inputs, "chi", args.chi)
    elif command == "fujiki":
        _opt(inputs, "n", args.n)
        _opt(inputs, "l2", args.l2)
        _opt(inputs, "lx", args.lx)
        _opt(inputs, "x2", args.x2)
    elif command == "report":
        if args.input is None:
            raise JobError("report needs --input FILE or --job")
        with open(args.input, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise JobError("malformed JSON in %s: %s" % (args.input, exc))
        if isinstance(data, dict) and "results" in data:
            data = data["results"]
        if not isinstance(data, list):
            raise JobError("--input must hold a JSON array of results")
        inputs["results"] = data
        inputs["format"] = args.format
    return inputs


def _jobs_from_args(args):
    """Decoded job objects, in input order."""
    if args.job is not None:
        with open(args.job, "r", encoding="utf-8") as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise JobError("malformed JSON: %s" % exc)
        if isinstance(data, dict):
            return [data], False
        if isinstance(data, list):
            return data, True
        raise JobError("a job file holds one job object or an array of them")
    obj = {
        "command": args.command,
        "surface": _surface_obj(args),
        "inputs": _inline_inputs(args),
    }
    return [obj], False


def _run_one(obj, oracle: bool):
    try:
        job = job_from_obj(obj)
    except (InputError, JobError) as exc:
        return error_payload(exc)
    if oracle and job.command == "walls":
        return run_walls_oracle(job)
    return run_job(job)


def _emit(text: str):
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _print_single(args, obj, payload):
    if payload.get("kind") == "report":
        text = payload["text"]
        color = color_mode(os.environ.get("MUKAI_COLOR", "auto"), sys.stdout.isatty())
        if color and payload.get("format", "table") == "table":
            try:
                text = render_report(
                    obj["inputs"]["results"], fmt="table", color=True
                )
            except InputError:
                pass
        _emit(text)
        return
    _emit(json.dumps(payload, indent=2, sort_keys=True))


def _surface_options(sub):
    sub.add_argument(
        "--kind", choices=["abelian", "K3"], default="abelian",
        help="surface kind (default abelian)",
    )
    sub.add_argument(
        "--gram", default="2",
        help="NS Gram matrix: one integer for rank 1, or rows 'a,b;c,d'",
    )
    sub.add_argument("--ample", help="ample ray, comma-separated")
    sub.add_argument("--job", help="JSON job file (object or array)")


def _vector_option(sub, name="--v", help_text="Mukai vector r,c1...,a"):
    sub.add_argument(name, help=help_text)


def _isotropic_options(sub):
    sub.add_argument("--r0", type=int, help="rank of the isotropic vector v0")
    sub.add_argument("--d0", type=int, help="degree coefficient of v0")
    sub.add_argument("--k", type=int, help="polarization scale: (H^2) = 2*r0*k")
    sub.add_argument("--d1", type=int, help="unimodularity witness (optional)")
    sub.add_argument("--l", type=int, help="unimodularity cofactor (optional)")


def _fibration_options(sub):
    sub.add_argument("--sigma", help="section class, comma-separated")
    sub.add_argument("--f", help="fiber class, comma-separated")
    sub.add_argument("--tau", help="second section-type class")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mukai", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("pair", help="Mukai pairing and vector invariants")
    _surface_options(sub)
    _vector_option(sub)
    _vector_option(sub, "--w", "second vector (defaults to v: square mode)")

    sub = subs.add_parser("perp", help="orthogonal complement lattice")
    _surface_options(sub)
    _vector_option(sub)

    sub = subs.add_parser("fm", help="apply a cohomological transform")
    _surface_options(sub)
    sub.add_argument(
        "--map",
        choices=[
            "poincare-f", "poincare-g", "dual", "twist",
            "isotropic", "isotropic-g", "elliptic", "reflection",
        ],
    )
    _vector_option(sub)
    sub.add_argument("--twist-class", dest="twist_class", help="line bundle class")
    _isotropic_options(sub)
    _fibration_options(sub)
    _vector_option(sub, "--v1", "primitive isotropic vector (reflection)")
    _vector_option(sub, "--w1", "image of omega (reflection)")

    sub = subs.add_parser("walls", help="destabilizing walls in the ample cone")
    _surface_options(sub)
    sub.add_argument("--c1", help="first Chern class of E, comma-separated")
    sub.add_argument("--chi", type=int, help="Euler number of E")
    sub.add_argument("--l0", help="reference polarization (defaults to ample ray)")
    sub.add_argument("--point", help="test this point for generality")
    sub.add_argument("--p0", help="segment start, comma-separated")
    sub.add_argument("--p1", help="segment end, comma-separated")
    sub.add_argument(
        "--oracle", action="store_true",
        help="diff the optimized enumeration against brute force",
    )

    sub = subs.add_parser("classify", help="decision procedure verdicts")
    _surface_options(sub)
    _vector_option(sub)
    _isotropic_options(sub)
    _fibration_options(sub)
    _vector_option(sub, "--v1", "primitive isotropic vector (reflection data)")
    _vector_option(sub, "--w1", "image of omega (reflection data)")
    sub.add_argument(
        "--star-asserted", action="store_true",
        help="assert universal-fiber stability for the reflection statement",
    )

    sub = subs.add_parser("kummer", help="fiber lattice data or square-4 reduction")
    _surface_options(sub)
    _vector_option(sub)

    sub = subs.add_parser("deform", help="deformation classes, grouped")
    _surface_options(sub)
    sub.add_argument(
        "--v", action="append",
        help="Mukai vector r,c1...,a (repeat to group several)",
    )

    sub = subs.add_parser("albanese-check", help="quasi-section identity check")
    _surface_options(sub)
    sub.add_argument("--r", type=int, help="rank")
    sub.add_argument("--a", type=int, help="omega coefficient")
    sub.add_argument("--chi", type=int, help="chi of the twisting line bundle")

    sub = subs.add_parser("fujiki", help="top intersection identities")
    _surface_options(sub)
    sub.add_argument("--n", type=int, help="half the fiber dimension plus one")
    sub.add_argument("--l2", help="(l, l), integer or p/q")
    sub.add_argument("--lx", help="(l, x), integer or p/q")
    sub.add_argument("--x2", help="(x, x), integer or p/q")

    sub = subs.add_parser("report", help="render results as a table or CSV")
    _surface_options(sub)
    sub.add_argument("--input", help="JSON file with an array of result payloads")
    sub.add_argument(
        "--format", choices=["table", "csv"], default="table",
        help="output format (default table)",
    )

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    oracle = getattr(args, "oracle", False)
    try:
        objs, batch = _jobs_from_args(args)
    except (InputError, JobError) as exc:
        payload, code = error_payload(exc)
        _emit(json.dumps(payload, indent=2, sort_keys=True))
        return code
    except OSError as exc:
        payload, code = error_payload(JobError(str(exc)))
        _emit(json.dumps(payload, indent=2, sort_keys=True))
        return code

    results = [_run_one(obj, oracle) for obj in objs]
    if batch:
        payloads = [payload for payload, _ in results]
        _emit(json.dumps(payloads, indent=2, sort_keys=True))
        return max(code for _, code in results)
    payload, code = results[0]
    _print_single(args, objs[0], payload)
    return code
