"""Plain-text rendering of job results.

render_report turns a list of result payloads of one kind into an
aligned monospace table, or CSV when asked.  CSV output round-trips
through the csv module: parsing it back gives exactly the header and
rows that built it.  ANSI color is opt-in and never emitted into CSV.
"""

import csv
import io
import json

from .errors import InputError

__all__ = ["render_report", "color_mode"]

_GREEN = "\x1b[32m"
_RED = "\x1b[31m"
_RESET = "\x1b[0m"

# columns whose yes/no cells get colored in table mode
_FLAG_COLUMNS = {
    "applicable",
    "ok",
    "holds",
    "agree",
    "indecomposable",
    "primitive",
    "positive",
    "all_stable",
    "isotropy_ok",
}


def color_mode(env_value, isatty) -> bool:
    """Resolve a MUKAI_COLOR setting (auto, always, never) to a flag."""
    if env_value == "always":
        return True
    if env_value == "never":
        return False
    return bool(isatty)


def _flag(x) -> str:
    if x is True:
        return "yes"
    if x is False:
        return "no"
    return ""


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return _flag(x)
    if isinstance(x, str):
        return x
    if isinstance(x, (list, dict)):
        return json.dumps(x, sort_keys=True, separators=(", ", ": "))
    return str(x)


def _vec_cell(d) -> str:
    if d is None:
        return ""
    return "(%s, [%s], %s)" % (d["r"], ", ".join(d["c1"]), d["a"])


def _target_cell(t) -> str:
    if t is None:
        return ""
    if t["vector"] is None:
        return t["surface"]
    return "%s on %s" % (t["pretty"], t["surface"])


def _rows_classify(results):
    header = ["theorem", "applicable", "failed", "target", "map", "sign"]
    rows = []
    for res in results:
        for verdict in res["verdicts"]:
            failed = "; ".join(
                c["name"]
                for c in verdict["conditions"]
                if c["required"] and not c["value"]
            )
            target = verdict["target"]
            rows.append(
                [
                    verdict["theorem"],
                    _flag(verdict["applicable"]),
                    failed,
                    _target_cell(target),
                    "" if target is None else target["map_kind"],
                    verdict["sign_of_image"],
                ]
            )
    return header, rows


def _rows_pair(results):
    header = ["v", "w", "pair", "primitive", "divisibility", "dim", "fiber dim", "positive"]
    rows = []
    for res in results:
        dims = res.get("moduli_dim") or {}
        rows.append(
            [
                _vec_cell(res["v"]),
                _vec_cell(res["w"]),
                res["pair"],
                _flag(res.get("primitive")),
                res.get("divisibility", ""),
                dims.get("total", ""),
                _cell(dims.get("fiber")),
                _flag(res.get("positive")),
            ]
        )
    return header, rows


def _rows_perp(results):
    header = ["v", "rank", "det", "gram", "indecomposable"]
    rows = [
        [
            _vec_cell(res["v"]),
            res["rank"],
            res["det"],
            _cell(res["gram"]),
            _flag(res["indecomposable"]),
        ]
        for res in results
    ]
    return header, rows


def _rows_fm(results):
    header = ["map", "v", "image", "pretty"]
    rows = [
        [res["map"], _vec_cell(res["v"]), _vec_cell(res["image"]), res["pretty"]]
        for res in results
    ]
    return header, rows


def _rows_walls(results):
    header = ["xi", "witness c1F", "witness chiF"]
    rows = []
    for res in results:
        for wall in res["walls"]:
            rows.append(
                [
                    "[%s]" % ", ".join(wall["xi"]),
                    "[%s]" % ", ".join(wall["witness_c1F"]),
                    wall["witness_chiF"],
                ]
            )
    return header, rows


def _rows_kummer(results):
    header = [
        "mode",
        "v",
        "case",
        "n",
        "det",
        "fujiki",
        "w data",
        "indecomposable",
    ]
    rows = []
    for res in results:
        if res["mode"] == "reduction":
            rows.append(
                [
                    "reduction",
                    _vec_cell(res["v"]),
                    res["case_tag"],
                    "",
                    "",
                    "",
                    "rank %s, (c1^2) %s, omega %s"
                    % (res["w_rank"], res["w_c1_square"], res["w_omega"]),
                    "",
                ]
            )
        else:
            rows.append(
                [
                    "fiber",
                    _vec_cell(res["v"]),
                    "",
                    res["n"],
                    res["det"],
                    res["fujiki_constant"],
                    "",
                    _flag(res["indecomposable"]),
                ]
            )
    return header, rows


def _rows_deform(results):
    header = ["v", "invariants", "model", "hilb index", "group"]
    rows = []
    for res in results:
        keys = [json.dumps(g["invariants"]) for g in res["groups"]]
        for cls in res["classes"]:
            group = keys.index(json.dumps(cls["invariants"]))
            rows.append(
                [
                    cls["pretty"],
                    _cell(cls["invariants"]),
                    cls["model"],
                    cls["hilb_index"],
                    str(group),
                ]
            )
    return header, rows


def _rows_albanese(results):
    header = ["r", "a", "chi", "n", "ok"]
    rows = [
        [res["r"], res["a"], res["chi"], res["n"], _flag(res["ok"])]
        for res in results
    ]
    return header, rows


def _rows_fujiki(results):
    shapes = ["L_2n2", "L_2n3_X", "L_2n4_XX", "L_2n4_EE"]
    header = ["n", "holds", "q_l", "q_x"] + shapes
    rows = [
        [res["n"], _flag(res["holds"]), res["q_l"], res["q_x"]]
        + [res["integrals"][s] for s in shapes]
        for res in results
    ]
    return header, rows


def _rows_error(results):
    header = ["code", "message", "path"]
    rows = [
        [
            res["error"]["code"],
            res["error"]["message"],
            res["error"].get("path", ""),
        ]
        for res in results
    ]
    return header, rows


def _rows_generic(results):
    keys = sorted({k for res in results for k in res if k != "kind"})
    header = list(keys)
    rows = [[_cell(res.get(k)) for k in keys] for res in results]
    return header, rows


_RENDERERS = {
    "classify": _rows_classify,
    "pair": _rows_pair,
    "perp": _rows_perp,
    "fm": _rows_fm,
    "walls": _rows_walls,
    "kummer": _rows_kummer,
    "deform": _rows_deform,
    "albanese-check": _rows_albanese,
    "fujiki": _rows_fujiki,
    "error": _rows_error,
}


def _result_kind(res) -> str:
    if "error" in res and "kind" not in res:
        return "error"
    kind = res.get("kind")
    if not isinstance(kind, str):
        raise InputError("result object carries no kind")
    return kind


def _table(header, rows, color: bool) -> str:
    cells = [[str(x) for x in row] for row in rows]
    widths = [len(h) for h in header]
    for row in cells:
        for i, text in enumerate(row):
            widths[i] = max(widths[i], len(text))
    flag_cols = {i for i, h in enumerate(header) if h in _FLAG_COLUMNS}

    def fmt_row(row, colorize):
        out = []
        for i, text in enumerate(row):
            padded = text.ljust(widths[i])
            if colorize and i in flag_cols and text in ("yes", "no"):
                tint = _GREEN if text == "yes" else _RED
                padded = tint + padded + _RESET
            out.append(padded)
        return "  ".join(out).rstrip()

    lines = [fmt_row(header, False)]
    lines.append("  ".join("-" * w for w in widths))
    lines.extend(fmt_row(row, color) for row in cells)
    return "\n".join(lines) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([str(x) for x in row])
    return buf.getvalue()


def render_report(results, fmt: str = "table", color: bool = False) -> str:
    """Render a homogeneous list of result payloads.

    All results must be of one kind; mixing kinds in one report is an
    error because the columns would not line up.
    """
    results = list(results)
    if not results:
        raise InputError("nothing to report")
    kinds = {_result_kind(res) for res in results}
    if len(kinds) > 1:
        raise InputError(
            "cannot render mixed result kinds: %s" % ", ".join(sorted(kinds))
        )
    kind = kinds.pop()
    if kind == "report":
        raise InputError("cannot report on report results")
    header, rows = _RENDERERS.get(kind, _rows_generic)(results)
    if fmt == "csv":
        return _csv(header, rows)
    if fmt == "table":
        return _table(header, rows, color)
    raise InputError("unknown report format %r" % (fmt,))
