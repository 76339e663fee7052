"""``deformary``: run one computation from a JSON task document and emit a JSON report.

Exit status: 0 when every verdict passes, 1 when one fails or the computation
raises, 2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

from deformary import acceptance
from deformary import serialize as S
from deformary.cohomology import EPLedger, PLACES, TableModule, ep_solve, h01_fox, h1_bar, h2_bar
from deformary.errors import DeformaryError, SchemaError
from deformary.finite import catalogue
from deformary.fontaine_laffaille import fl_endomorphism_dim, fl_ext1, fl_ext1_bruteforce, fl_lift_count
from deformary.groups import intertwiner_space, lift_equivalent, rep_verify
from deformary.local import INF_CASES, chi_line_find, inf_ring_compute, parity_det_check, steinberg_check
from deformary.local_global import geometric_bounds, glue_presentation, ltg_bookkeeping, random_consistent_ledger
from deformary.universal import build_universal, hypotheses_check, schoof_example, tangent_dim_check

COMMANDS = ("check-rep", "hom", "cohomology", "ep-solve", "fl-ext", "fl-count", "steinberg", "odd", "chi-line",
            "inf-ring", "bookkeeping", "glue", "universal", "schoof-example", "verify-all")

# commands that run without an input document
NO_INPUT = {"inf-ring", "schoof-example", "verify-all", "bookkeeping"}


@dataclass
class Report:
    task: str
    inputs: dict
    options: dict
    verdicts: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    timing: dict | None = None
    error: str | None = None

    def verdict(self, name: str, passed: bool, operation: str, value=None, expected=None, identity: str = ""):
        v = {"name": name, "pass": bool(passed), "operation": operation}
        if value is not None:
            v["value"] = value
        if expected is not None:
            v["expected"] = expected
        if identity:
            v["identity"] = identity
        self.verdicts.append(v)

    @property
    def ok(self) -> bool:
        return self.error is None and all(v["pass"] for v in self.verdicts)

    def to_json(self) -> dict:
        out = {"version": S.SCHEMA, "task": self.task, "inputs": self.inputs, "options": self.options,
               "ok": self.ok, "verdicts": self.verdicts, "witnesses": self.witnesses, "warnings": self.warnings}
        if self.error is not None:
            out["error"] = self.error
        if self.timing is not None:
            out["timing"] = self.timing
        return out

    def summary(self) -> str:
        width = max([len(v["name"]) for v in self.verdicts] + [7])
        lines = [f"{self.task}: {'PASS' if self.ok else 'FAIL'}"]
        for v in self.verdicts:
            val = "" if "value" not in v else f"  {json.dumps(S.jsonable(v['value']))}"
            lines.append(f"  {'ok  ' if v['pass'] else 'FAIL'} {v['name']:<{width}}{val}")
        if self.error:
            lines.append(f"  error: {self.error}")
        for w in self.warnings:
            lines.append(f"  warning: {w}")
        return "\n".join(lines) + "\n"


# Each command is split in two: ``parse`` turns JSON into objects (errors -> exit 2),
# ``run`` computes and fills the report (errors -> exit 1).

def _parse_rep(inp, opts, args):
    return {"rep": S.read_rep(S._req(inp, "rep", "inputs"), "inputs.rep")}


def _run_check_rep(x, rep: Report, opts):
    chk = rep_verify(x["rep"])
    rep.verdict("representation", chk.ok, "rep_verify", identity="relations map to Id, images invertible")
    rep.witnesses["check"] = chk.to_json()


def _parse_hom(inp, opts, args):
    r1 = S.read_rep(S._req(inp, "rep1", "inputs"), "inputs.rep1")
    r2 = S.read_rep(S._req(inp, "rep2", "inputs"), "inputs.rep2", r1.group, r1.ring)
    return {"r1": r1, "r2": r2, "expected": S._opt_int(inp, "expected", "inputs", None, 0)}


def _run_hom(x, rep: Report, opts):
    r1, r2 = x["r1"], x["r2"]
    k1, k2 = r1.reduce() if r1.ring.l > 1 else r1, r2.reduce() if r2.ring.l > 1 else r2
    dim, basis = intertwiner_space(k1, k2)
    exp = x["expected"]
    rep.verdict("hom_dimension", exp is None or dim == exp, "intertwiner_space", dim, exp)
    rep.witnesses["basis"] = [b.to_json() for b in basis]
    if r1.ring.l > 1:
        m = lift_equivalent(r1, r2)
        rep.witnesses["lift_equivalence"] = None if m is None else m.to_json()


def _parse_cohomology(inp, opts, args):
    method = inp.get("method", "fox")
    if method == "fox":
        return {"method": "fox", "rep": S.read_rep(S._req(inp, "rep", "inputs"), "inputs.rep")}
    if method != "bar":
        raise SchemaError("inputs.method", "expected 'fox' or 'bar'")
    name = S._str(S._req(inp, "group", "inputs"), "inputs.group")
    groups = {g.name: g for g in catalogue()}
    if name not in groups:
        raise SchemaError("inputs.group", f"unknown group; choose from {sorted(groups)}")
    G = groups[name]
    p = S._int(S._req(inp, "p", "inputs"), "inputs.p", 2)
    d = S._opt_int(inp, "dim", "inputs", 1, 1)
    action = inp.get("action", "trivial")
    if action == "trivial":
        M = TableModule.trivial(G, p, d)
    else:
        images = [[S._int(c, f"inputs.action[{a}][{i}]") % p for i, c in enumerate(S._list(im, f"inputs.action[{a}]"))]
                  for a, im in enumerate(S._list(action, "inputs.action"))]
        if len(images) != G.order or any(len(im) != d * d for im in images):
            raise SchemaError("inputs.action", f"expected {G.order} flattened {d} x {d} matrices")
        M = TableModule.from_images(G, images, d, p)
        if not M.is_module():
            raise SchemaError("inputs.action", "the matrices do not define a module")
    return {"method": "bar", "module": M, "h2": bool(inp.get("h2", True))}


def _run_cohomology(x, rep: Report, opts):
    if x["method"] == "fox":
        res = h01_fox(x["rep"])
    else:
        M = x["module"]
        res = h2_bar(M) if x["h2"] else h1_bar(M)
    rep.verdict("h1 = z1 - b1", res.z1 is None or res.h1 == res.z1 - res.b1, f"h1_{x['method']}", res.h1)
    rep.witnesses["cohomology"] = res.to_json()


def _parse_ep(inp, opts, args):
    place = S._str(S._req(inp, "place", "inputs"), "inputs.place")
    if place not in PLACES:
        raise SchemaError("inputs.place", f"expected one of {list(PLACES)}")
    dims = {k: S._int(v, f"inputs.dims.{k}", 0) for k, v in S._obj(S._req(inp, "dims", "inputs"), "inputs.dims").items()}
    if "dim" not in dims:
        raise SchemaError("inputs.dims.dim", "required field missing")
    h = {k: S._opt_int(inp, k, "inputs", None, 0) for k in ("h0", "h1", "h2")}
    exp = inp.get("expected")
    if exp is not None:
        exp = {k: S._int(v, f"inputs.expected.{k}", 0) for k, v in S._obj(exp, "inputs.expected").items()}
    return {"ledger": EPLedger(place, dims), "h": h, "expected": exp}


def _run_ep(x, rep: Report, opts):
    res = ep_solve(x["ledger"], **x["h"])
    got = {"h0": res.h0, "h1": res.h1, "h2": res.h2}
    exp = x["expected"]
    ok = exp is None or all(got[k] == v for k, v in exp.items())
    rep.verdict("euler_poincare", ok, "ep_solve", got, exp, "h0 - h1 + h2 = c_EP")


def _parse_fl(inp, opts, args):
    return {"module": S.read_fl(S._req(inp, "module", "inputs"), "inputs.module"),
            "expected": S._opt_int(inp, "expected", "inputs", None, 0),
            "l": S._opt_int(inp, "l", "inputs", None, 1)}


def _run_fl_ext(x, rep: Report, opts):
    m = x["module"]
    res = fl_ext1(m)
    exp = x["expected"]
    rep.verdict("ext1_dimension", exp is None or res.dimension == exp, "fl_ext1", res.dimension, exp,
                "dim Ext^1 = 4 - rank [R, X_M]")
    if m.ring.spec.q <= 5:
        brute = fl_ext1_bruteforce(m)
        rep.verdict("bruteforce_agrees", brute == res.dimension, "fl_ext1_bruteforce", brute)
    rep.witnesses["ext"] = res.to_json()


def _run_fl_count(x, rep: Report, opts):
    m = x["module"]
    l = x["l"] or opts["precision"]
    res = fl_lift_count(m, l, opts["budget"])
    p = m.ring.p
    if fl_endomorphism_dim(m) == 1:
        rep.verdict("orbit_count", res.orbits == res.expected, "fl_lift_count", res.orbits, res.expected,
                    "p^(4(l-1)) / (p^(3(l-1)) / p^(l-1)) = p^(2(l-1))")
        rep.verdict("stabilizers_central", res.stabilizers_central, "fl_lift_count")
    else:
        rep.warnings.append("X_M has non-scalar endomorphisms; the orbit count is reported without a target")
        rep.verdict("orbit_count", True, "fl_lift_count", res.orbits)
    rep.witnesses["count"] = res.to_json()
    rep.witnesses["p"] = p


def _parse_steinberg(inp, opts, args):
    return {"rep": S.read_rep(S._req(inp, "rep", "inputs"), "inputs.rep"),
            "mark": inp.get("mark", "ell-inertia")}


def _run_steinberg(x, rep: Report, opts):
    res = steinberg_check(x["rep"], x["mark"])
    rep.verdict("steinberg", res.verdict, "steinberg_check", identity="(rho(g) - Id)^2 = 0 on inertia")
    rep.witnesses["check"] = res.to_json()


def _parse_odd(inp, opts, args):
    r = S.read_rep(S._req(inp, "rep", "inputs"), "inputs.rep")
    cond = inp.get("condition", "odd")
    if cond not in ("odd", "fixed-det"):
        raise SchemaError("inputs.condition", "expected 'odd' or 'fixed-det'")
    chi = S.read_character(inp["character"], "inputs.character", r.group, r.ring) if "character" in inp else None
    if cond == "fixed-det" and chi is None:
        raise SchemaError("inputs.character", "required for fixed-det")
    return {"rep": r, "condition": cond, "chi": chi, "mark": inp.get("mark", "infinity")}


def _run_odd(x, rep: Report, opts):
    res = parity_det_check(x["rep"], x["chi"], x["condition"], x["mark"])
    rep.verdict(x["condition"], res.verdict, "parity_det_check")
    rep.witnesses["check"] = res.to_json()


def _parse_chi(inp, opts, args):
    r = S.read_rep(S._req(inp, "rep", "inputs"), "inputs.rep")
    return {"rep": r, "chi": S.read_character(S._req(inp, "character", "inputs"), "inputs.character", r.group, r.ring),
            "expect_unique": inp.get("expect_unique")}


def _run_chi(x, rep: Report, opts):
    line = chi_line_find(x["rep"], x["chi"])
    found = line is not None
    rep.verdict("chi_line_found", found, "chi_line_find")
    if found and x["expect_unique"] is not None:
        rep.verdict("unique", line.unique == bool(x["expect_unique"]), "chi_line_find", line.unique)
    rep.witnesses["line"] = None if line is None else line.to_json()


def _parse_inf(inp, opts, args):
    case = args.case if args.case is not None else S._opt_int(inp, "case", "inputs", 3, 1)
    if case not in INF_CASES:
        raise SchemaError("inputs.case", "expected 1, 2 or 3")
    p = S._opt_int(inp, "p", "inputs", None, 2)
    if p is not None and (case == 1) == (p == 2):
        raise SchemaError("inputs.p", f"case {case} requires {INF_CASES[case][0]}")
    return {"case": case, "p": p}


def _run_inf(x, rep: Report, opts):
    res = inf_ring_compute(x["case"], x["p"], opts["precision"], opts["degree_bound"])
    shape = (len(res.presentation.varnames), len(res.presentation.relations))
    rep.verdict("presentation_shape", shape == (3, 1), "inf_ring_compute", list(shape), [3, 1])
    if x["case"] == 3:
        rel = res.relation.pretty()
        rep.verdict("relation", rel == acceptance.INF_CASE3_RELATION, "inf_ring_compute", rel,
                    acceptance.INF_CASE3_RELATION, "-(det M + 1) after eliminating d by the trace")
    rep.witnesses["ring"] = res.to_json()
    rep.warnings.extend(res.warnings)


def _parse_bookkeeping(inp, opts, args):
    if "ledger" in inp:
        return {"ledgers": [S.read_ledger(inp["ledger"], "inputs.ledger")]}
    count = S._opt_int(inp, "count", "inputs", acceptance.LEDGER_COUNT, 1)
    sizes = [S._int(s, f"inputs.sigma_sizes[{i}]", 2)
             for i, s in enumerate(S._list(inp.get("sigma_sizes", list(acceptance.LEDGER_SIGMA_SIZES)), "inputs.sigma_sizes"))]
    if not sizes:
        raise SchemaError("inputs.sigma_sizes", "empty list")
    rng = random.Random(opts["seed"])
    return {"ledgers": [random_consistent_ledger(rng, sizes[i % len(sizes)]) for i in range(count)]}


def _run_bookkeeping(x, rep: Report, opts):
    out = []
    for i, led in enumerate(x["ledgers"]):
        res = ltg_bookkeeping(led)
        for name, ok in res.verdicts.items():
            rep.verdict(f"ledger[{i}]: {name}", ok, "ltg_bookkeeping")
        out.append({"ledger": led.to_json(), **res.to_json()})
    rep.witnesses["ledgers"] = out


def _parse_glue(inp, opts, args):
    if "sigma" in inp:
        sigma = [S._str(s, f"inputs.sigma[{i}]") for i, s in enumerate(S._list(inp["sigma"], "inputs.sigma"))]
        delta = S._opt_int(inp, "delta", "inputs", 0, 0)
        return {"sigma": sigma, "delta": delta}
    locs = [S.read_presentation(p, f"inputs.locals[{i}]", opts["degree_bound"])
            for i, p in enumerate(S._list(S._req(inp, "locals", "inputs"), "inputs.locals"))]
    if not locs:
        raise SchemaError("inputs.locals", "at least one local ring required")
    dims = inp.get("local_dims")
    if dims is not None:
        dims = [S._int(d, f"inputs.local_dims[{i}]", 0) for i, d in enumerate(S._list(dims, "inputs.local_dims"))]
    return {"locals": locs, "r": S._int(S._req(inp, "r", "inputs"), "inputs.r", 0),
            "t": S._int(S._req(inp, "t", "inputs"), "inputs.t", 0), "local_dims": dims}


def _run_glue(x, rep: Report, opts):
    if "sigma" in x:
        sigma, delta = x["sigma"], x["delta"]
        n = len(sigma)
        gb = geometric_bounds(sigma, delta)
        glued = glue_presentation(acceptance.table_locals(sigma), n - 1, delta)
        rep.verdict("R_loc", gb.local == 3 * n + 1, "geometric_bounds", gb.local, 3 * n + 1, "3|Sigma| + 1")
        rep.verdict("framed", gb.framed == 4 * n - delta, "geometric_bounds", gb.framed, 4 * n - delta, "4|Sigma| - delta")
        rep.verdict("glued_bound", glued.dim_bound == gb.framed, "glue_presentation", glued.dim_bound, gb.framed)
        if delta == 0:
            rep.verdict("unframed", gb.unframed == 1, "geometric_bounds", gb.unframed, 1)
        rep.witnesses["bounds"] = gb.to_json()
        rep.witnesses["glued"] = glued.to_json()
        return
    glued = glue_presentation(x["locals"], x["r"], x["t"], x["local_dims"])
    rep.verdict("dimension_bound", True, "glue_presentation", glued.dim_bound)
    rep.witnesses["glued"] = glued.to_json()


def _parse_universal(inp, opts, args):
    b, ext = S.read_bundle(S._req(inp, "bundle", "inputs"), "inputs.bundle", opts["precision"])
    return {"bundle": b, "ext": ext, "matrix": bool(inp.get("emit_matrix", True))}


def _run_universal(x, rep: Report, opts):
    b = x["bundle"]
    hyp = hypotheses_check(b, x["ext"])
    rep.verdict("hypotheses", hyp.ok, "hypotheses_check")
    rep.witnesses["hypotheses"] = hyp.to_json()
    if x["ext"] is None:
        rep.warnings.append("ext_dims not supplied; Ext triviality is an input, not computed")
    tan = tangent_dim_check(b)
    rep.verdict("tangent_dimension", tan.ok, "tangent_dim_check", tan.framed_tangent, b.N, "dim Ad - dim Ad^G")
    rep.witnesses["tangent"] = tan.to_json()
    if not hyp.ok:
        return
    res = build_universal(b, opts["degree_bound"])
    rep.verdict("variable_count", len(res.presentation.varnames) == b.N, "build_universal",
                len(res.presentation.varnames), b.N, "N = 4n^2 - sum e_i^2")
    for name, ok in res.checks.items():
        rep.verdict(name, ok, "build_universal")
    rep.witnesses["universal"] = res.to_json(x["matrix"])


def _parse_schoof(inp, opts, args):
    g = args.g if args.g is not None else S._opt_int(inp, "g", "inputs", 1, 1)
    if g < 1:
        raise SchemaError("inputs.g", "must be >= 1")
    base = None
    if "base" in inp:
        base = S.read_bundle_rep(inp["base"], "inputs.base", None, None, None)
    return {"g": g, "base": base, "matrix": bool(inp.get("emit_matrix", True))}


def _run_schoof(x, rep: Report, opts):
    res = schoof_example(x["g"], x["base"], opts["degree_bound"], opts["precision"])
    rep.verdict("var_count", res.var_count == res.expected, "schoof_example", res.var_count, res.expected, "3g^2")
    rep.verdict("hypotheses", res.hypotheses.ok, "hypotheses_check")
    rep.verdict("tangent_dimension", res.tangent.ok, "tangent_dim_check")
    for name, ok in res.universal.checks.items():
        rep.verdict(name, ok, "build_universal")
    rep.witnesses["report"] = res.to_json(x["matrix"])
    rep.witnesses["var_count"] = res.var_count
    if x["base"] is None:
        rep.warnings.append("using the built-in proxy representation over F_2")


def _parse_none(inp, opts, args):
    return {}


def _run_verify_all(x, rep: Report, opts):
    crits = acceptance.run_all(opts["seed"], opts["degree_bound"], opts["precision"], opts["budget"])
    for c in crits:
        rep.verdict(f"{c.number}. {c.name}", c.passed, "acceptance")
    rep.witnesses["criteria"] = [c.to_json() for c in crits]
    if rep.timing is not None:
        rep.timing["criteria"] = {c.name: round(c.seconds, 3) for c in crits}


HANDLERS: dict[str, tuple[Callable, Callable]] = {
    "check-rep": (_parse_rep, _run_check_rep),
    "hom": (_parse_hom, _run_hom),
    "cohomology": (_parse_cohomology, _run_cohomology),
    "ep-solve": (_parse_ep, _run_ep),
    "fl-ext": (_parse_fl, _run_fl_ext),
    "fl-count": (_parse_fl, _run_fl_count),
    "steinberg": (_parse_steinberg, _run_steinberg),
    "odd": (_parse_odd, _run_odd),
    "chi-line": (_parse_chi, _run_chi),
    "inf-ring": (_parse_inf, _run_inf),
    "bookkeeping": (_parse_bookkeeping, _run_bookkeeping),
    "glue": (_parse_glue, _run_glue),
    "universal": (_parse_universal, _run_universal),
    "schoof-example": (_parse_schoof, _run_schoof),
    "verify-all": (_parse_none, _run_verify_all),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="deformary", description="Exact deformation-ring computations.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", metavar="PATH", help="task document (deformary/1 JSON)")
    ap.add_argument("--output", metavar="PATH", help="write the JSON report here instead of stdout")
    ap.add_argument("--degree", type=int, metavar="D", help="truncation: total degree < D")
    ap.add_argument("--precision", type=int, metavar="L", help="work modulo p^L")
    ap.add_argument("--budget", type=int, metavar="N", help="enumeration budget")
    ap.add_argument("--seed", type=int, metavar="N")
    ap.add_argument("--summary", action="store_true", help="print a verdict table")
    ap.add_argument("--timing", action="store_true", help="include wall-clock timings (breaks byte-identity)")
    ap.add_argument("--case", type=int, help="inf-ring case (1, 2 or 3)")
    ap.add_argument("--g", type=int, help="schoof-example: number of copies")
    return ap


def _load(args) -> tuple[dict, dict, dict]:
    doc = {"version": S.SCHEMA}
    if args.input:
        try:
            with open(args.input, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as e:
            raise SchemaError("$", f"cannot read {args.input}: {e.strerror}") from None
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    elif args.command not in NO_INPUT:
        raise SchemaError("$", f"{args.command} needs --input")
    task, inputs, opts = S.read_task(doc)
    if task is not None and task != args.command:
        raise SchemaError("$.task", f"document is for {task!r}, not {args.command!r}")
    for flag, key in (("degree", "degree_bound"), ("precision", "precision"), ("budget", "budget"), ("seed", "seed")):
        v = getattr(args, flag)
        if v is not None:
            if v < (0 if key == "seed" else 1):
                raise SchemaError(f"--{flag}", "out of range")
            opts[key] = v
    return doc, inputs, opts


def cli_run(argv: list[str] | None = None, stdout=None, stderr=None) -> tuple[int, Report | None]:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = build_parser().parse_args(argv)
    parse, run = HANDLERS[args.command]
    try:
        _, inputs, opts = _load(args)
        x = parse(inputs, opts, args)
    except SchemaError as e:
        print(f"deformary: malformed input at {e}", file=stderr)
        return 2, None
    except (DeformaryError, ValueError) as e:
        print(f"deformary: malformed input: {e}", file=stderr)
        return 2, None
    rep = Report(args.command, inputs, opts, timing={} if args.timing else None)
    t = time.perf_counter()
    try:
        run(x, rep, opts)
    except DeformaryError as e:
        rep.error = f"{type(e).__name__}: {e}"
    if rep.timing is not None:
        rep.timing["seconds"] = round(time.perf_counter() - t, 3)
    text = S.dumps(rep)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.summary:
        stdout.write(rep.summary())
    elif not args.output:
        stdout.write(text)
    return (0 if rep.ok else 1), rep


def main(argv: list[str] | None = None) -> int:
    code, _ = cli_run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
