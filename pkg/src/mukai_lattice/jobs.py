"""Job parsing and execution for the command-line front end.

A job is one JSON object {command, surface, inputs}; parse_job validates
it against the published schemas and builds the core objects, run_job
executes it and returns (payload, exit_code).  Payloads contain only
strings, booleans, nulls, arrays, and objects: every number, however
large, is a decimal string, rationals as "p/q".  This keeps outputs
byte-stable and float-free.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import jsonschema

from .advisor import classify, deformation_class, kummer4_reduce, special_locus
from .albanese import quasi_section_check
from .errors import InputError, InternalInvariantError, PreconditionError
from .kummer import (
    IntegralShape,
    beauville_lattice,
    fujiki_check,
    kummer_q_rank1,
    top_intersection,
)
from .lattices import perp_basis, rank2_orthogonally_decomposable
from .render import render_report
from .schemas import COMMANDS, JOB_SCHEMA, input_schema
from .surface import ABELIAN, SurfaceModel
from .transforms import (
    EllipticFibration,
    IsotropicFMParams,
    elliptic_fm,
    elliptic_params_of_triple,
    isotropic_fm,
    isotropic_g,
    poincare_fm,
    poincare_g,
    reflection_dual,
    triple_from_vector,
    vector_from_triple,
)
from .vectors import (
    MukaiVector,
    divisibility,
    is_positive,
    is_primitive,
    moduli_dim,
    mukai_dual,
    mukai_pair,
    mukai_square,
    twist,
)
from .walls import (
    brute_force_walls,
    chambers_on_segment,
    enumerate_walls,
    is_general,
)

__all__ = [
    "JobError",
    "JobSpec",
    "parse_job",
    "job_from_obj",
    "run_job",
    "run_walls_oracle",
    "error_payload",
    "serialize_int",
    "serialize_fraction",
    "serialize_vector",
    "pretty_vector",
]


class JobError(InputError):
    """Input error with an optional JSON-pointer style path."""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message if path is None else "%s (at %s)" % (message, path))
        self.path = path


@dataclass(frozen=True)
class JobSpec:
    command: str
    surface: SurfaceModel
    inputs: dict


# ---------------------------------------------------------------------------
# exact serialization


def serialize_int(x) -> str:
    return str(int(x))


def serialize_fraction(x) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def _ints(seq) -> list:
    return [serialize_int(x) for x in seq]


def _gram(rows) -> list:
    return [_ints(row) for row in rows]


def serialize_vector(v: MukaiVector) -> dict:
    return {"r": serialize_int(v.r), "c1": _ints(v.c1), "a": serialize_int(v.a)}


def _parse_rational(x) -> Fraction:
    if isinstance(x, bool):
        raise JobError("expected an integer or 'p/q' string")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError):
            raise JobError("malformed rational %r" % (x,))
    raise JobError("expected an integer or 'p/q' string")


_MINUS = "−"
_OMEGA = "ω"


def pretty_vector(v: MukaiVector) -> str:
    """Human form like '1 + H + 4w' with unicode omega; an overall -1 is
    factored out so images of the odd-degree transforms read naturally."""
    coords = v.coords()
    lead = next((x for x in coords if x != 0), 0)
    if lead < 0:
        return _MINUS + "(" + pretty_vector(-v) + ")"
    names = [""]
    if len(v.c1) == 1:
        names.append("H")
    else:
        names.extend("e%d" % (i + 1) for i in range(len(v.c1)))
    names.append(_OMEGA)
    parts = []
    for coeff, name in zip(coords, names):
        if coeff == 0:
            continue
        mag = abs(coeff)
        if name == "":
            text = str(mag)
        elif mag == 1:
            text = name
        else:
            text = "%d%s" % (mag, name)
        if not parts:
            parts.append(text)
        else:
            parts.append(("+ " if coeff > 0 else _MINUS + " ") + text)
    if not parts:
        return "0"
    return " ".join(parts)


# ---------------------------------------------------------------------------
# parsing


def _validate(obj, schema, prefix: str = ""):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(
        validator.iter_errors(obj), key=lambda e: (list(map(str, e.absolute_path)), e.message)
    )
    if errors:
        err = errors[0]
        parts = [str(p) for p in err.absolute_path]
        if parts:
            path = prefix + "/" + "/".join(parts)
        else:
            path = prefix if prefix else "/"
        raise JobError(err.message, path)


def _surface_from(obj) -> SurfaceModel:
    gram = obj["ns_gram"]
    n = len(gram)
    for i, row in enumerate(gram):
        if len(row) != n:
            raise JobError(
                "ns_gram must be square: row %d has %d entries, expected %d"
                % (i, len(row), n),
                "/surface/ns_gram/%d" % i,
            )
    for i in range(n):
        if gram[i][i] % 2 != 0:
            raise JobError(
                "ns_gram diagonal entry (%d, %d) = %d must be even"
                % (i, i, gram[i][i]),
                "/surface/ns_gram/%d/%d" % (i, i),
            )
    try:
        return SurfaceModel(
            kind=obj["kind"],
            ns_gram=tuple(tuple(row) for row in gram),
            ample_ray=tuple(obj.get("ample_ray", ())),
        )
    except (InputError, PreconditionError) as exc:
        raise JobError(str(exc), "/surface")


def _vector_from(obj, surface: SurfaceModel, path: str) -> MukaiVector:
    if len(obj["c1"]) != surface.ns_rank:
        raise JobError(
            "c1 has %d entries but the surface has NS rank %d"
            % (len(obj["c1"]), surface.ns_rank),
            path + "/c1",
        )
    return MukaiVector(obj["r"], tuple(obj["c1"]), obj["a"])


def _ns_class(seq, surface: SurfaceModel, path: str) -> Tuple[int, ...]:
    vals = tuple(int(x) for x in seq)
    if len(vals) != surface.ns_rank:
        raise JobError(
            "class has %d entries but the surface has NS rank %d"
            % (len(vals), surface.ns_rank),
            path,
        )
    return vals


def job_from_obj(obj) -> JobSpec:
    """Validate a decoded job object and build the core models."""
    _validate(obj, JOB_SCHEMA)
    command = obj["command"]
    _validate(obj["inputs"], input_schema(command), "/inputs")
    surface = _surface_from(obj["surface"])
    return JobSpec(command=command, surface=surface, inputs=obj["inputs"])


def parse_job(text: str) -> JobSpec:
    """Parse one UTF-8 JSON job document."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError("malformed JSON: %s" % exc)
    if not isinstance(obj, dict):
        raise JobError("a job document must be a JSON object")
    return job_from_obj(obj)


# ---------------------------------------------------------------------------
# command handlers


def _run_pair(surface: SurfaceModel, inputs: dict) -> dict:
    v = _vector_from(inputs["v"], surface, "/inputs/v")
    square_mode = "w" not in inputs
    w = v if square_mode else _vector_from(inputs["w"], surface, "/inputs/w")
    payload = {
        "kind": "pair",
        "v": serialize_vector(v),
        "w": serialize_vector(w),
        "pair": serialize_int(mukai_pair(v, w, surface)),
        "square_mode": square_mode,
    }
    if square_mode:
        dims = moduli_dim(v, surface)
        payload["moduli_dim"] = {
            "total": serialize_int(dims.total),
            "fiber": None if dims.fiber is None else serialize_int(dims.fiber),
        }
        payload["primitive"] = is_primitive(v)
        payload["divisibility"] = serialize_int(divisibility(v))
        payload["positive"] = (
            is_positive(v, surface) if surface.kind == ABELIAN else None
        )
    return payload


def _perp_block(v: MukaiVector, surface: SurfaceModel) -> dict:
    g = perp_basis(v, surface)
    indecomposable = None
    if g.rank == 2 and g.det != 0:
        indecomposable = not rank2_orthogonally_decomposable(g)
    return {
        "rank": serialize_int(g.rank),
        "gram": _gram(g.gram),
        "basis": [_ints(row) for row in g.basis_in_ambient],
        "det": serialize_int(g.det),
        "indecomposable": indecomposable,
    }


def _run_perp(surface: SurfaceModel, inputs: dict) -> dict:
    v = _vector_from(inputs["v"], surface, "/inputs/v")
    payload = {"kind": "perp", "v": serialize_vector(v)}
    payload.update(_perp_block(v, surface))
    return payload


def _fibration_from(inputs: dict, surface: SurfaceModel) -> EllipticFibration:
    fib = inputs["fibration"]
    return EllipticFibration(
        surface=surface,
        sigma=_ns_class(fib["sigma"], surface, "/inputs/fibration/sigma"),
        f=_ns_class(fib["f"], surface, "/inputs/fibration/f"),
        tau=_ns_class(fib["tau"], surface, "/inputs/fibration/tau"),
    )


def _isotropic_from(obj) -> IsotropicFMParams:
    return IsotropicFMParams(
        r0=obj["r0"],
        d0=obj["d0"],
        k=obj["k"],
        d1=obj.get("d1"),
        l=obj.get("l"),
    )


def _run_fm(surface: SurfaceModel, inputs: dict) -> dict:
    name = inputs["map"]
    v = _vector_from(inputs["v"], surface, "/inputs/v")
    payload = {"kind": "fm", "map": name, "v": serialize_vector(v)}

    def finish(image: MukaiVector, **extra) -> dict:
        payload["image"] = serialize_vector(image)
        payload["pretty"] = pretty_vector(image)
        payload.update(extra)
        return payload

    if name == "poincare-f":
        return finish(poincare_fm(v, surface))
    if name == "poincare-g":
        return finish(poincare_g(v, surface))
    if name == "dual":
        return finish(mukai_dual(v))
    if name == "twist":
        if "twist_class" not in inputs:
            raise JobError("twist needs twist_class", "/inputs/twist_class")
        line = _ns_class(inputs["twist_class"], surface, "/inputs/twist_class")
        return finish(twist(v, line, surface))
    if name in ("isotropic", "isotropic-g"):
        if "isotropic" not in inputs:
            raise JobError("map %r needs isotropic parameters" % name, "/inputs/isotropic")
        params = _isotropic_from(inputs["isotropic"])
        builder = isotropic_fm if name == "isotropic" else isotropic_g
        fm = builder(params, surface)
        return finish(fm.apply(v))
    if name == "elliptic":
        if "fibration" not in inputs:
            raise JobError("elliptic needs a fibration", "/inputs/fibration")
        fib = _fibration_from(inputs, surface)
        triple = triple_from_vector(v, surface)
        r, l, n = elliptic_params_of_triple(triple, fib)
        result = elliptic_fm(r, l, n, fib)
        image_vec = vector_from_triple(result.image, surface)
        return finish(
            image_vec,
            image_triple={
                "r": serialize_int(result.image.r),
                "c1": _ints(result.image.c1),
                "chi": serialize_int(result.image.chi),
            },
            r=serialize_int(r),
            l=serialize_int(l),
            n=serialize_int(n),
            sign=serialize_int(result.sign),
            all_stable=result.all_stable,
        )
    if name == "reflection":
        if "v1" not in inputs or "w1" not in inputs:
            raise JobError("reflection needs v1 and w1", "/inputs")
        v1 = _vector_from(inputs["v1"], surface, "/inputs/v1")
        w1 = _vector_from(inputs["w1"], surface, "/inputs/w1")
        res = reflection_dual(v, v1, w1, surface)
        return finish(
            res.vector,
            l=serialize_fraction(res.l),
            a=serialize_fraction(res.a),
            applicable=res.applicable,
            sign=serialize_int(res.sign),
        )
    raise JobError("unknown fm map %r" % name, "/inputs/map")


def _walls_payload(walls) -> list:
    return [
        {
            "xi": _ints(w.xi),
            "witness_c1F": _ints(w.witness_c1F),
            "witness_chiF": serialize_int(w.witness_chiF),
        }
        for w in walls
    ]


def _run_walls(surface: SurfaceModel, inputs: dict) -> dict:
    c1 = _ns_class(inputs["c1"], surface, "/inputs/c1")
    chi = int(inputs["chi"])
    ample = None
    if "l0" in inputs:
        ample = _ns_class(inputs["l0"], surface, "/inputs/l0")
    walls = enumerate_walls(c1, chi, surface, ample)
    payload = {
        "kind": "walls",
        "count": serialize_int(len(walls)),
        "walls": _walls_payload(walls),
    }
    if "point" in inputs:
        point = _ns_class(inputs["point"], surface, "/inputs/point")
        payload["is_general"] = is_general(point, walls, surface)
    if "segment" in inputs:
        seg = inputs["segment"]
        p0 = _ns_class(seg["p0"], surface, "/inputs/segment/p0")
        p1 = _ns_class(seg["p1"], surface, "/inputs/segment/p1")
        chambers = chambers_on_segment(walls, p0, p1, surface)
        payload["segment"] = {
            "crossings": [serialize_fraction(t) for t in chambers.crossings],
            "intervals": [
                {
                    "lo": serialize_fraction(lo),
                    "hi": serialize_fraction(hi),
                    "representative": [
                        serialize_fraction(x) for x in rep
                    ],
                }
                for (lo, hi), rep in zip(
                    chambers.intervals, chambers.representatives
                )
            ],
            "p0_on_wall": chambers.p0_on_wall,
            "p1_on_wall": chambers.p1_on_wall,
        }
    return payload


def run_walls_oracle(job: JobSpec) -> Tuple[dict, int]:
    """Run both wall enumerations and diff them; nonzero exit on mismatch."""
    surface, inputs = job.surface, job.inputs
    c1 = _ns_class(inputs["c1"], surface, "/inputs/c1")
    chi = int(inputs["chi"])
    ample = None
    if "l0" in inputs:
        ample = _ns_class(inputs["l0"], surface, "/inputs/l0")
    fast = enumerate_walls(c1, chi, surface, ample)
    brute = brute_force_walls(c1, chi, surface, ample)
    fast_set = {(w.xi, w.witness_c1F, w.witness_chiF) for w in fast}
    brute_set = {(w.xi, w.witness_c1F, w.witness_chiF) for w in brute}
    agree = fast == brute
    payload = {
        "kind": "walls-oracle",
        "agree": agree,
        "optimized_count": serialize_int(len(fast)),
        "brute_count": serialize_int(len(brute)),
        "only_optimized": [
            {"xi": _ints(xi), "witness_c1F": _ints(c), "witness_chiF": serialize_int(x)}
            for (xi, c, x) in sorted(fast_set - brute_set)
        ],
        "only_brute": [
            {"xi": _ints(xi), "witness_c1F": _ints(c), "witness_chiF": serialize_int(x)}
            for (xi, c, x) in sorted(brute_set - fast_set)
        ],
    }
    return payload, 0 if agree else 3


def _serialize_target(target) -> Optional[dict]:
    if target is None:
        return None
    vec = None
    pretty = None
    if target.vector is not None:
        vec = serialize_vector(target.vector)
        pretty = pretty_vector(target.vector)
    return {
        "surface": target.surface_label,
        "vector": vec,
        "pretty": pretty,
        "map_kind": target.kind,
    }


def _run_classify(surface: SurfaceModel, inputs: dict) -> dict:
    v = _vector_from(inputs["v"], surface, "/inputs/v")
    kwargs = {}
    if "isotropic" in inputs:
        kwargs["isotropic"] = _isotropic_from(inputs["isotropic"])
    if "fibration" in inputs:
        kwargs["fibration"] = _fibration_from(inputs, surface)
    if "reflection" in inputs:
        kwargs["reflection"] = (
            _vector_from(inputs["reflection"]["v1"], surface, "/inputs/reflection/v1"),
            _vector_from(inputs["reflection"]["w1"], surface, "/inputs/reflection/w1"),
        )
    if "star_asserted" in inputs:
        kwargs["star_asserted"] = bool(inputs["star_asserted"])
    verdicts = classify(v, surface, **kwargs)
    payload = {
        "kind": "classify",
        "v": serialize_vector(v),
        "square": serialize_int(mukai_square(v, surface)),
        "verdicts": [
            {
                "theorem": w.theorem_id,
                "applicable": w.applicable,
                "sign_of_image": serialize_int(w.sign_of_image),
                "conditions": [
                    {"name": c.name, "value": c.value, "required": c.required}
                    for c in w.checked_conditions
                ],
                "target": _serialize_target(w.target),
            }
            for w in verdicts
        ],
    }
    perp = _perp_block(v, surface)
    payload["perp_gram"] = perp["gram"]
    payload["indecomposable"] = perp["indecomposable"]
    return payload


def _run_kummer(surface: SurfaceModel, inputs: dict) -> dict:
    v = _vector_from(inputs["v"], surface, "/inputs/v")
    sq = mukai_square(v, surface)
    if sq == 4:
        red = kummer4_reduce(v, surface)
        return {
            "kind": "kummer",
            "mode": "reduction",
            "v": serialize_vector(v),
            "case_tag": red.case_tag,
            "w_rank": serialize_int(red.w_rank),
            "w_c1_square": serialize_int(red.w_c1_square),
            "w_omega": serialize_fraction(red.w_omega),
            "isotropy_ok": red.isotropy_ok,
        }
    data = beauville_lattice(v, surface)
    indecomposable = None
    if data.lattice.rank == 2 and data.lattice.det != 0:
        indecomposable = not rank2_orthogonally_decomposable(data.lattice)
    locus = None
    try:
        codim, components, fiber = special_locus(v, surface)
        locus = {
            "codim": serialize_int(codim),
            "components": serialize_int(components),
            "fiber_dim": serialize_int(fiber),
        }
    except PreconditionError:
        pass
    return {
        "kind": "kummer",
        "mode": "fiber",
        "v": serialize_vector(v),
        "n": serialize_int(data.n),
        "gram": _gram(data.lattice.gram),
        "det": serialize_int(data.lattice.det),
        "fujiki_constant": serialize_fraction(
            Fraction(data.fujiki_constant_num, data.fujiki_constant_den)
        ),
        "indecomposable": indecomposable,
        "special_locus": locus,
    }


def _run_deform(surface: SurfaceModel, inputs: dict) -> dict:
    has_v = "v" in inputs
    has_many = "vectors" in inputs
    if has_v == has_many:
        raise JobError("deform needs exactly one of 'v' or 'vectors'", "/inputs")
    if has_v:
        raw = [inputs["v"]]
    else:
        raw = inputs["vectors"]
    vectors = [
        _vector_from(obj, surface, "/inputs/vectors/%d" % i)
        for i, obj in enumerate(raw)
    ]
    classes = [deformation_class(v, surface) for v in vectors]

    def ser_invariants(dc) -> list:
        out = []
        for x in dc.invariants:
            out.append(x if isinstance(x, bool) else serialize_int(x))
        return out

    groups = []
    index_of = {}
    for i, dc in enumerate(classes):
        key = (dc.surface_kind,) + dc.invariants
        if key not in index_of:
            index_of[key] = len(groups)
            groups.append(
                {
                    "invariants": ser_invariants(dc),
                    "model": dc.model,
                    "members": [],
                }
            )
        groups[index_of[key]]["members"].append(serialize_int(i))
    return {
        "kind": "deform",
        "classes": [
            {
                "v": serialize_vector(v),
                "pretty": pretty_vector(v),
                "invariants": ser_invariants(dc),
                "model": dc.model,
                "hilb_index": serialize_int(dc.hilb_index),
            }
            for v, dc in zip(vectors, classes)
        ],
        "groups": groups,
    }


def _run_albanese(surface: SurfaceModel, inputs: dict) -> dict:
    r, a, chi = int(inputs["r"]), int(inputs["a"]), int(inputs["chi"])
    ok = quasi_section_check(r, a, chi)
    return {
        "kind": "albanese-check",
        "r": serialize_int(r),
        "a": serialize_int(a),
        "chi": serialize_int(chi),
        "ok": ok,
        "n": serialize_int(chi - r * a),
    }


def _run_fujiki(surface: SurfaceModel, inputs: dict) -> dict:
    n = int(inputs["n"])
    l2 = _parse_rational(inputs["l2"])
    lx = _parse_rational(inputs["lx"])
    x2 = _parse_rational(inputs["x2"])
    holds = fujiki_check(n, l2, lx, x2)
    integrals = {
        shape.value: serialize_fraction(top_intersection(n, l2, lx, x2, shape))
        for shape in IntegralShape
    }
    return {
        "kind": "fujiki",
        "n": serialize_int(n),
        "holds": holds,
        "integrals": integrals,
        "q_l": serialize_fraction(kummer_q_rank1(l2, 0, n)),
        "q_x": serialize_fraction(kummer_q_rank1(x2, 0, n)),
    }


def _run_report(surface: SurfaceModel, inputs: dict) -> dict:
    fmt = inputs.get("format", "table")
    text = render_report(inputs["results"], fmt=fmt)
    return {"kind": "report", "format": fmt, "text": text}


_HANDLERS = {
    "pair": _run_pair,
    "perp": _run_perp,
    "fm": _run_fm,
    "walls": _run_walls,
    "classify": _run_classify,
    "kummer": _run_kummer,
    "deform": _run_deform,
    "albanese-check": _run_albanese,
    "fujiki": _run_fujiki,
    "report": _run_report,
}

assert set(_HANDLERS) == set(COMMANDS)


def error_payload(exc: Exception) -> Tuple[dict, int]:
    if isinstance(exc, InputError):
        code, status = "input-error", 1
    elif isinstance(exc, PreconditionError):
        code, status = "precondition", 2
    elif isinstance(exc, InternalInvariantError):
        code, status = "internal-invariant", 3
    else:
        raise exc
    body = {"code": code, "message": str(exc)}
    path = getattr(exc, "path", None)
    if path is not None:
        body["path"] = path
    return {"error": body}, status


def run_job(job: JobSpec) -> Tuple[dict, int]:
    """Execute a validated job; never raises on core-module errors."""
    try:
        payload = _HANDLERS[job.command](job.surface, job.inputs)
    except (InputError, PreconditionError, InternalInvariantError) as exc:
        return error_payload(exc)
    return payload, 0
