"""Reading and writing the ``deformary/1`` JSON documents.

Every reader takes the JSON value and a path string such as ``inputs.reps[0].lift``;
malformed data raises :class:`SchemaError` carrying that path.
"""

from __future__ import annotations

import json
from typing import Any, Mapping

from deformary.cohomology import CohomologyReport
from deformary.errors import DeformaryError, SchemaError
from deformary.fontaine_laffaille import FLModule
from deformary.groups import Character, GroupRep, MarkedGroup, parse_letter
from deformary.local_global import ThetaLedger
from deformary.ring import FieldSpec, GaloisRing, Matrix
from deformary.series import RingPresentation, SeriesRing
from deformary.universal import BundleRep, InputBundle

SCHEMA = "deformary/1"
MAX_SAFE_INT = 2 ** 53 - 1

DEFAULT_OPTIONS = {"degree_bound": 3, "precision": 4, "budget": 1 << 24, "seed": 0}


# -- primitive accessors ----------------------------------------------------------------------

def _obj(v, path: str) -> Mapping:
    if not isinstance(v, dict):
        raise SchemaError(path, "expected an object")
    return v


def _req(obj: Mapping, key: str, path: str):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "required field missing")
    return obj[key]


def _int(v, path: str, minimum: int | None = None) -> int:
    if isinstance(v, str):
        try:
            v = int(v)
        except ValueError:
            raise SchemaError(path, f"expected an integer, got {v!r}") from None
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(path, "expected an integer")
    if minimum is not None and v < minimum:
        raise SchemaError(path, f"must be >= {minimum}")
    return v


def _opt_int(obj: Mapping, key: str, path: str, default=None, minimum: int | None = None):
    if obj.get(key) is None:
        return default
    return _int(obj[key], f"{path}.{key}", minimum)


def _list(v, path: str) -> list:
    if not isinstance(v, list):
        raise SchemaError(path, "expected a list")
    return v


def _str(v, path: str) -> str:
    if not isinstance(v, str):
        raise SchemaError(path, "expected a string")
    return v


def _wrap(path: str, fn, *args):
    """Turn library validation errors into schema errors at ``path``."""
    try:
        return fn(*args)
    except SchemaError:
        raise
    except (ValueError, DeformaryError, KeyError, TypeError) as e:
        raise SchemaError(path, str(e)) from None


# -- document --------------------------------------------------------------------------------

def read_task(doc, path: str = "$") -> tuple[str | None, dict, dict]:
    """(task, inputs, options) of a task document."""
    doc = _obj(doc, path)
    version = _req(doc, "version", path)
    if version != SCHEMA:
        raise SchemaError(f"{path}.version", f"unsupported schema {version!r} (expected {SCHEMA!r})")
    task = doc.get("task")
    if task is not None:
        _str(task, f"{path}.task")
    inputs = _obj(doc.get("inputs", {}), f"{path}.inputs")
    raw = _obj(doc.get("options", {}), f"{path}.options")
    opts = dict(DEFAULT_OPTIONS)
    for k in raw:
        if k not in DEFAULT_OPTIONS:
            raise SchemaError(f"{path}.options.{k}", "unknown option")
        opts[k] = _int(raw[k], f"{path}.options.{k}", 0 if k == "seed" else 1)
    return task, inputs, opts


# -- rings and matrices ----------------------------------------------------------------------------

def read_field(v, path: str) -> FieldSpec:
    v = _obj(v, path)
    p = _int(_req(v, "p", path), f"{path}.p", 2)
    n = _opt_int(v, "n", path, 1, 1)
    mod = v.get("modulus")
    if mod is not None:
        mod = tuple(_int(c, f"{path}.modulus[{i}]") for i, c in enumerate(_list(mod, f"{path}.modulus")))
    return _wrap(path, FieldSpec, p, n, mod)


def read_ring(v, path: str, default_l: int = 1) -> GaloisRing:
    """``{"p", "n", "modulus", "l"}`` or ``{"field": {...}, "l"}``."""
    v = _obj(v, path)
    spec = read_field(v["field"], f"{path}.field") if "field" in v else read_field(v, path)
    l = _opt_int(v, "l", path, default_l, 1)
    return GaloisRing(spec, l)


def read_element(ring: GaloisRing, v, path: str):
    if isinstance(v, dict):
        v = _req(v, "coeffs", path)
        path = f"{path}.coeffs"
    if isinstance(v, list):
        if len(v) > ring.n:
            raise SchemaError(path, f"at most {ring.n} coefficients expected")
        return ring.element([_int(c, f"{path}[{i}]") for i, c in enumerate(v)])
    return ring.element(_int(v, path))


def read_matrix(ring: GaloisRing, v, path: str, size: int | None = None) -> Matrix:
    rows = _list(v, path)
    if not rows:
        raise SchemaError(path, "empty matrix")
    out = []
    for i, row in enumerate(rows):
        row = _list(row, f"{path}[{i}]")
        if len(row) != len(rows[0]):
            raise SchemaError(f"{path}[{i}]", "ragged matrix")
        out.append([read_element(ring, x, f"{path}[{i}][{j}]") for j, x in enumerate(row)])
    m = Matrix.from_rows(ring, out)
    if size is not None and (m.rows, m.cols) != (size, size):
        raise SchemaError(path, f"expected a {size} x {size} matrix")
    return m


# -- groups and representations ------------------------------------------------------------

def read_word(v, path: str):
    """A list of letters, or one string of space-separated letters."""
    if isinstance(v, str):
        v = v.split()
    letters = _list(v, path)
    out = []
    for i, s in enumerate(letters):
        s = _str(s, f"{path}[{i}]")
        out.append(_wrap(f"{path}[{i}]", parse_letter, s))
    return tuple((g, e) for g, e in out if e)


def read_group(v, path: str) -> MarkedGroup:
    v = _obj(v, path)
    gens = [_str(g, f"{path}.generators[{i}]") for i, g in enumerate(_list(_req(v, "generators", path), f"{path}.generators"))]
    rels = tuple(read_word(r, f"{path}.relations[{i}]") for i, r in enumerate(_list(v.get("relations", []), f"{path}.relations")))
    marks = {}
    for k, m in _obj(v.get("marks", {}), f"{path}.marks").items():
        mp = f"{path}.marks.{k}"
        if isinstance(m, str):
            marks[k] = (read_word(m, mp),)
        elif isinstance(m, list) and all(isinstance(x, str) for x in m):
            # a list of strings is a list of single-letter words, i.e. several marked elements
            marks[k] = tuple(read_word(x, f"{mp}[{i}]") for i, x in enumerate(m))
        else:
            marks[k] = tuple(read_word(x, f"{mp}[{i}]") for i, x in enumerate(_list(m, mp)))
    return _wrap(path, MarkedGroup, tuple(gens), rels, marks)


def read_images(group: MarkedGroup, ring: GaloisRing, v, path: str, dim: int | None = None) -> GroupRep:
    v = _obj(v, path)
    missing = [g for g in group.generators if g not in v]
    if missing:
        raise SchemaError(f"{path}.{missing[0]}", "image of generator missing")
    extra = [g for g in v if g not in group.generators]
    if extra:
        raise SchemaError(f"{path}.{extra[0]}", "not a generator of the group")
    mats = {g: read_matrix(ring, v[g], f"{path}.{g}") for g in group.generators}
    d = dim if dim is not None else next(iter(mats.values())).rows
    for g, m in mats.items():
        if (m.rows, m.cols) != (d, d):
            raise SchemaError(f"{path}.{g}", f"expected a {d} x {d} matrix")
    return GroupRep(group, ring, d, mats)


def read_rep(v, path: str, group: MarkedGroup | None = None, ring: GaloisRing | None = None) -> GroupRep:
    """``{"group", "field" | "ring", "l", "images"}``; group and ring may be inherited."""
    v = _obj(v, path)
    if "group" in v:
        group = read_group(v["group"], f"{path}.group")
    if group is None:
        raise SchemaError(f"{path}.group", "required field missing")
    if "ring" in v:
        ring = read_ring(v["ring"], f"{path}.ring")
    elif "field" in v:
        ring = GaloisRing(read_field(v["field"], f"{path}.field"), _opt_int(v, "l", path, 1, 1))
    if ring is None:
        raise SchemaError(f"{path}.field", "required field missing")
    return read_images(group, ring, _req(v, "images", path), f"{path}.images", _opt_int(v, "dim", path, None, 1))


def read_character(v, path: str, group: MarkedGroup, ring: GaloisRing) -> Character:
    v = _obj(v, path)
    vals = _obj(_req(v, "values", path), f"{path}.values")
    out = {}
    for g in group.generators:
        if g not in vals:
            raise SchemaError(f"{path}.values.{g}", "value missing")
        out[g] = read_element(ring, vals[g], f"{path}.values.{g}")
    return _wrap(path, Character, group, ring, out)


def read_fl(v, path: str, ring: GaloisRing | None = None) -> FLModule:
    v = _obj(v, path)
    if "field" in v or "p" in v:
        ring = GaloisRing(read_field(v.get("field", v), f"{path}.field" if "field" in v else path), 1)
    if ring is None:
        raise SchemaError(f"{path}.field", "required field missing")
    xm = read_matrix(ring, _req(v, "xm", path), f"{path}.xm", 2)
    dims = tuple(_int(x, f"{path}.fil_dims[{i}]", 0) for i, x in enumerate(_list(v.get("fil_dims", [2, 1, 0]), f"{path}.fil_dims")))
    line = tuple(_int(x, f"{path}.fil_line[{i}]") for i, x in enumerate(_list(v.get("fil_line", [0, 1]), f"{path}.fil_line")))
    return _wrap(path, FLModule, ring, xm, dims, line)


# -- ledgers and presentations ----------------------------------------------------------------

def read_cohomology(v, path: str) -> CohomologyReport:
    v = _obj(v, path)
    h = [_int(_req(v, k, path), f"{path}.{k}", 0) for k in ("h0", "h1", "h2")]
    method = v.get("method", "input")
    return _wrap(path, lambda: CohomologyReport(h[0], h[1], h[2], method=str(method)))


def read_ledger(v, path: str) -> ThetaLedger:
    v = _obj(v, path)
    sigma = tuple(_str(s, f"{path}.sigma[{i}]") for i, s in enumerate(_list(_req(v, "sigma", path), f"{path}.sigma")))
    g = read_cohomology(_req(v, "global", path), f"{path}.global")
    locs = _obj(_req(v, "locals", path), f"{path}.locals")
    locals_ = {k: read_cohomology(x, f"{path}.locals.{k}") for k, x in locs.items()}
    return ThetaLedger(
        sigma, g, locals_,
        _int(_req(v, "r1", path), f"{path}.r1", 0),
        _int(_req(v, "r2", path), f"{path}.r2", 0),
        _int(_req(v, "framed_r", path), f"{path}.framed_r", 0),
        _opt_int(v, "t1", path), _opt_int(v, "delta", path),
        _opt_int(v, "n", path, 2, 1),
        bool(v.get("s_minus_sigma_nonempty", False)),
    )


def read_series(R: SeriesRing, v, path: str):
    terms = {}
    for i, t in enumerate(_list(v, path)):
        tp = f"{path}[{i}]"
        t = _obj(t, tp)
        exps = tuple(_int(e, f"{tp}.exps[{j}]", 0) for j, e in enumerate(_list(_req(t, "exps", tp), f"{tp}.exps")))
        if len(exps) != R.nvars:
            raise SchemaError(f"{tp}.exps", f"expected {R.nvars} exponents")
        c = read_element(R.ring, _req(t, "coeff", tp), f"{tp}.coeff")
        terms[exps] = terms.get(exps, R.ring.zero()) + c
    return R.from_terms(terms)


def read_presentation(v, path: str, default_D: int = 3) -> RingPresentation:
    v = _obj(v, path)
    ring = read_ring(_req(v, "ring", path), f"{path}.ring")
    names = tuple(_str(s, f"{path}.vars[{i}]") for i, s in enumerate(_list(_req(v, "vars", path), f"{path}.vars")))
    D = _opt_int(v, "degree_bound", path, default_D, 1)
    R = _wrap(path, SeriesRing, ring, names, D)
    rels = tuple(read_series(R, r, f"{path}.relations[{i}]") for i, r in enumerate(_list(v.get("relations", []), f"{path}.relations")))
    t = _opt_int(v, "unspecified_relations", path, 0, 0)
    return _wrap(path, RingPresentation, ring, names, rels, D, t, str(v.get("name", "")))


# -- the universal-construction bundle ------------------------------------------------------------

def read_bundle_rep(v, path: str, group: MarkedGroup | None, k: GaloisRing | None, W: GaloisRing | None) -> BundleRep:
    v = _obj(v, path)
    residual = read_rep(_req(v, "residual", path), f"{path}.residual", group, k)
    lift = read_rep(_req(v, "lift", path), f"{path}.lift", residual.group, W)
    e = _opt_int(v, "multiplicity", path, 1, 1)
    cert = read_fl(v["certificate"], f"{path}.certificate", residual.ring) if v.get("certificate") is not None else None
    return BundleRep(residual, lift, e, cert)


def read_bundle(v, path: str, default_l: int = 4) -> tuple[InputBundle, dict | None]:
    """``{"group", "field", "l", "reps": [...], "ext_dims", "marks"}``; returns (bundle, ext_dims)."""
    v = _obj(v, path)
    group = read_group(v["group"], f"{path}.group") if "group" in v else None
    k = W = None
    if "field" in v:
        spec = read_field(v["field"], f"{path}.field")
        k = GaloisRing(spec, 1)
        W = GaloisRing(spec, _opt_int(v, "l", path, default_l, 1))
    reps = tuple(read_bundle_rep(r, f"{path}.reps[{i}]", group, k, W)
                 for i, r in enumerate(_list(_req(v, "reps", path), f"{path}.reps")))
    if not reps:
        raise SchemaError(f"{path}.reps", "at least one representation required")
    ext = None
    if v.get("ext_dims") is not None:
        ext = {}
        raw = v["ext_dims"]
        ep = f"{path}.ext_dims"
        if isinstance(raw, list):
            for i, row in enumerate(raw):
                for j, d in enumerate(_list(row, f"{ep}[{i}]")):
                    ext[(i, j)] = _int(d, f"{ep}[{i}][{j}]", 0)
        else:
            for key, d in _obj(raw, ep).items():
                try:
                    i, j = (int(s) for s in key.split(","))
                except ValueError:
                    raise SchemaError(f"{ep}.{key}", "keys have the form 'i,j'") from None
                ext[(i, j)] = _int(d, f"{ep}.{key}", 0)
    marks = _obj(v.get("marks", {}), f"{path}.marks")
    b = _wrap(path, InputBundle, reps, marks.get("inertia", "ell-inertia"), marks.get("infinity", "infinity"))
    return b, ext


# -- output ---------------------------------------------------------------------------------

def jsonable(x: Any):
    """Plain JSON data with integers beyond 2^53 written as strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, int):
        return str(x) if abs(x) > MAX_SAFE_INT else x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(x: Any) -> str:
    return json.dumps(jsonable(x), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
