"""Command-line interface: JSON element documents, thin command wrappers
over the library, and a deterministic self-test battery.

Exit codes: 0 success, 1 domain failure (a library error or a failed
check), 2 input/parse error.  The environment variable ``SYMSPACES_TOL``
overrides the default tolerance of the checking commands.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

import numpy as np

from . import algebra as al
from . import groups as gr
from . import hitchin as hi
from . import models as md
from . import transforms as tf
from .algebra import AlgebraElement, AlgebraSpec
from .errors import SymspacesError
from .models import Kind, ModelFamily, ModelId, ModelPoint

ENV_TOL = "SYMSPACES_TOL"

# ----------------------------------------------------------------------
# sigma naming

_BASE_SIGMAS = ["transpose", "conj-transpose", "quat0", "quat1"]
_EXT_SUFFIX = {
    ("c", (1,)): "lin",
    ("c", (-1,)): "conj",
    ("h", (1, 1)): "lin",
    ("h", (-1, -1)): "star",
}


def _spec_from_doc(alg: dict) -> AlgebraSpec:
    ground = alg["ground"]
    n = int(alg["n"])
    ext = alg.get("ext", "none")
    central = bool(alg.get("centralI", False))
    name = alg["sigma"]
    base, _, suffix = name.partition("+")
    if base not in _BASE_SIGMAS:
        raise ValueError(f"unknown sigma name {name!r}")
    ext_signs = None
    if ext != "none":
        match = [signs for (e, signs), suf in _EXT_SUFFIX.items() if e == ext and suf == (suffix or "lin")]
        if not match:
            raise ValueError(f"unknown extension suffix {suffix!r} for ext {ext!r}")
        ext_signs = match[0]
    elif suffix:
        raise ValueError("sigma suffix given without an extension")
    spec = al.make_spec(n, ground=ground, base=base, ext=ext, ext_signs=ext_signs)
    if central:
        spec = al.add_central(spec)
    return spec


def _doc_from_spec(spec: AlgebraSpec) -> dict:
    t = spec.tower
    from .tower import EXT_GENS, GROUND_GENS

    gcount = len(GROUND_GENS[t.ground])
    base_signs = spec.sigma.gen_signs[:gcount]
    base = None
    for cand in _BASE_SIGMAS:
        try:
            ref = al.make_spec(spec.n, ground=t.ground, base=cand)
        except ValueError:
            continue
        if ref.sigma.gen_signs[:gcount] == base_signs:
            base = cand
            break
    if base is None:
        raise ValueError("unnamable base involution")
    name = base
    if t.ext != "none":
        ecount = len(EXT_GENS[t.ext])
        esigns = spec.sigma.gen_signs[gcount:gcount + ecount]
        name = f"{base}+{_EXT_SUFFIX[(t.ext, tuple(esigns))]}"
    return {
        "ground": t.ground,
        "n": spec.n,
        "ext": t.ext,
        "centralI": bool(t.central),
        "sigma": name,
    }


# ----------------------------------------------------------------------
# element documents


def _fmt(x: float) -> float:
    return float(f"{x:.17g}")


def parse_element(doc: dict) -> AlgebraElement:
    spec = _spec_from_doc(doc["alg"])
    rows = np.asarray(doc["rows"], dtype=float)
    if rows.ndim != 3 or rows.shape[2] != spec.dim:
        raise ValueError("rows must be a 2-d array of coefficient arrays of the tower dimension")
    return AlgebraElement(spec, rows)


def emit_element(a: AlgebraElement) -> dict:
    rows = [[[_fmt(c) for c in entry] for entry in row] for row in a.coeffs.tolist()]
    return {"alg": _doc_from_spec(a.spec), "rows": rows}


def _read_json(path: str):
    data = sys.stdin.read() if path == "-" else open(path).read()
    return json.loads(data)


def _write_json(obj, path: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# ----------------------------------------------------------------------
# command helpers

_FAMILIES = {f.value: f for f in ModelFamily}
_KINDS = {k.value: k for k in Kind}
_GROUPS = {f.value: f for f in gr.Family}


def _default_tol(args) -> float:
    if getattr(args, "tol", None) is not None:
        return args.tol
    env = os.environ.get(ENV_TOL)
    return float(env) if env else al.DEFAULT_TOL


def _model_point(fam: str, kind: str, sign: int, elem: AlgebraElement) -> ModelPoint:
    family = _FAMILIES[fam]
    base = elem.spec
    k = _KINDS[kind]
    # the document stores payload coefficients; recover the base spec
    probe = ModelId(family, k, _strip(base), sign if k in md._SIGNED_KINDS else 1)
    ps = md.payload_spec(probe)
    if ps.tower != base.tower:
        raise ValueError(f"document tower {base.tower} does not match the {fam}/{kind} payload")
    return ModelPoint(probe, AlgebraElement(ps, elem.coeffs))


def _strip(spec: AlgebraSpec) -> AlgebraSpec:
    out = spec
    if out.tower.central:
        raise ValueError("model payloads carry no extra central unit")
    if out.tower.ext != "none":
        out = al.drop_ext(out)
    return out


# ----------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    tol = _default_tol(args)
    doc = _read_json(args.infile)
    elem = parse_element(doc)
    t0 = time.perf_counter()
    if args.model == "group":
        gid = gr.GroupId(_GROUPS[args.family], elem.spec)
        residuals = gr.group_residuals(gid, elem)
        passed = all(v <= tol * max(1.0, elem.norm()) for v in residuals.values())
    else:
        p = _model_point(args.family, args.model, args.sign, elem)
        residuals = md.point_residuals(p, tol=tol)
        passed = md.contains(p, tol=tol)
    report = {
        "command": "check",
        "family": args.family,
        "model": args.model,
        "tol": tol,
        "residuals": {k: _fmt(v) for k, v in residuals.items()},
        "passed": bool(passed),
        "wall_time": _fmt(time.perf_counter() - t0),
    }
    _write_json(report, args.out)
    return 0 if passed else 1


def cmd_convert(args) -> int:
    doc = _read_json(args.infile)
    elem = parse_element(doc)
    p = _model_point(args.family, getattr(args, "from"), args.sign, elem)
    to = ModelId(p.mid.family, _KINDS[args.to], p.mid.spec,
                 args.sign if _KINDS[args.to] in md._SIGNED_KINDS else 1)
    q = tf.convert(p, to)
    _write_json(emit_element(q.value), args.out)
    return 0


def cmd_act(args) -> int:
    doc = _read_json(args.infile)
    elem = parse_element(doc)
    g = parse_element(_read_json(args.g))
    p = _model_point(args.family, args.model, args.sign, elem)
    q = md.act(g, p)
    _write_json(emit_element(q.value), args.out)
    return 0


def cmd_metric(args) -> int:
    z = parse_element(_read_json(args.z))
    v = parse_element(_read_json(args.v))
    w = parse_element(_read_json(args.w if args.w else args.v))
    p = _model_point(args.family, "U", args.sign, z)
    val = md.metric(p, AlgebraElement(p.value.spec, v.coeffs), AlgebraElement(p.value.spec, w.coeffs))
    _write_json({"command": "metric", "value": _fmt(val)}, args.out)
    return 0


def cmd_invariants(args) -> int:
    q = parse_element(_read_json(args.infile))
    fam = hi.HiggsFamily(args.family)
    hv = hi.HiggsVector(fam, q)
    vals = hi.invariants(hv)
    _write_json(
        {"command": "invariants", "family": args.family,
         "invariants": [[_fmt(c.real), _fmt(c.imag)] for c in vals]},
        args.out,
    )
    return 0


# ----------------------------------------------------------------------
# self-test battery


def _case_seed(master: int, suite: str, index: int) -> int:
    digest = hashlib.sha256(f"{master}|{suite}|{index}".encode()).hexdigest()
    return int(digest[:16], 16)


def _spec2() -> AlgebraSpec:
    return al.make_spec(2)


_MODEL_FAMS = [ModelFamily.O11, ModelFamily.AX, ModelFamily.OC, ModelFamily.SP2, ModelFamily.SP2C]
_EDGE_KINDS = [Kind.C, Kind.P, Kind.U, Kind.B]


def _mid2(fam: ModelFamily, k: Kind, s: int = 1) -> ModelId:
    return ModelId(fam, k, _spec2(), s if k in md._SIGNED_KINDS else 1)


def _suite_algebra(seed, count, tol):
    specs = [
        al.make_spec(2),
        al.make_spec(2, ground="C", base="conj-transpose"),
        al.make_spec(1, ground="H", base="quat1"),
        al.extend(al.make_spec(2), "c", ext_signs=(-1,)),
        al.extend(al.make_spec(2), "h"),
    ]
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "algebra", i))
        spec = specs[i % len(specs)]
        a = al.sample(spec, "free", rng)
        b = al.sample(spec, "free", rng)
        c = al.sample(spec, "free", rng)
        r = max(
            (al.mul(al.mul(a, b), c) - al.mul(a, al.mul(b, c))).norm(),
            (al.apply_sigma(al.mul(a, b)) - al.mul(al.apply_sigma(b), al.apply_sigma(a))).norm(),
            (al.apply_sigma(al.apply_sigma(a)) - a).norm(),
            np.linalg.norm(al.embed_complex(al.mul(a, b)) - al.embed_complex(a) @ al.embed_complex(b)),
        )
        cases.append(r)
    return cases


def _suite_groups(seed, count, tol):
    gids = [
        gr.GroupId(gr.Family.SP2, _spec2()),
        gr.GroupId(gr.Family.O11, _spec2()),
        gr.GroupId(gr.Family.AX_HAT, _spec2()),
        gr.GroupId(gr.Family.OC_HAT, _spec2()),
        gr.GroupId(gr.Family.SP2, md.spec_c(_spec2())),
    ]
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "groups", i))
        gid = gids[i % len(gids)]
        g = gr.sample_group(gid, rng)
        h = gr.sample_group(gid, rng)
        prod = al.mul(g, h)
        inv = al.inv(g)
        scale = max(1.0, prod.norm() ** 2)
        r = max(max(gr.group_residuals(gid, prod).values()),
                max(gr.group_residuals(gid, inv).values())) / scale
        cases.append(r)
    return cases


def _suite_cartan(seed, count, tol):
    gids = [gr.GroupId(gr.Family.SP2, _spec2()), gr.GroupId(gr.Family.O11, _spec2()),
            gr.GroupId(gr.Family.SP2, md.spec_c(_spec2()))]
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "cartan", i))
        gid = gids[i % len(gids)]
        proj_gid = gid if gid.spec.tower.ext == "none" else gr.GroupId(gr.Family.KSP2C, gid.spec)
        x1 = gr.sample_lie(gid, rng)
        x2 = gr.sample_lie(gid, rng)
        k1, m1 = gr.cartan_project(proj_gid, x1)
        k2, m2 = gr.cartan_project(proj_gid, x2)

        def brk(a, b):
            return al.mul(a, b) - al.mul(b, a)

        r = max(
            gr.cartan_project(proj_gid, brk(k1, k2))[1].norm(),
            gr.cartan_project(proj_gid, brk(k1, m2))[0].norm(),
            gr.cartan_project(proj_gid, brk(m1, m2))[1].norm(),
        ) / max(1.0, x1.norm() * x2.norm())
        cases.append(r)
    return cases


_COMPACT_FOR = {
    ModelFamily.O11: gr.Family.KO11,
    ModelFamily.AX: gr.Family.AX_HAT,
    ModelFamily.OC: gr.Family.OC_HAT,
    ModelFamily.SP2: gr.Family.KSP2,
    ModelFamily.SP2C: gr.Family.KSP2C,
}


def compact_stabilizer_gid(fam: ModelFamily) -> gr.GroupId:
    spec = _spec2()
    cspec = md.spec_c(spec) if fam is ModelFamily.SP2C else spec
    return gr.GroupId(_COMPACT_FOR[fam], cspec)


def _suite_stabilizers(seed, count, tol):
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "stabilizers", i))
        fam = _MODEL_FAMS[i % len(_MODEL_FAMS)]
        k = gr.exp_lie(gr.sample_compact_lie(compact_stabilizer_gid(fam), rng))
        worst = 0.0
        for kind in _EDGE_KINDS:
            b = md.basepoint(_mid2(fam, kind))
            moved = md.act(k, b)
            if kind is Kind.P:
                worst = max(worst, 0.0 if md.line_equal(moved.value, b.value) else 1.0)
            else:
                worst = max(worst, (moved.value - b.value).norm())
        cases.append(worst)
    return cases


def _edges():
    out = []
    for kf in _EDGE_KINDS:
        for kt in _EDGE_KINDS:
            if kf is not kt:
                out.append((kf, kt))
    return out


def _suite_conversions(seed, count, tol):
    cases = []
    edges = _edges()
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "conversions", i))
        fam = _MODEL_FAMS[i % len(_MODEL_FAMS)]
        kf, kt = edges[(i // len(_MODEL_FAMS)) % len(edges)]
        p = tf.sample_well_conditioned(_mid2(fam, kf), rng)
        g = gr.sample_group(md.group_for(p.mid), rng, scale=0.4)
        lhs = tf.convert(md.act(g, p), _mid2(fam, kt))
        rhs = md.act(g, tf.convert(p, _mid2(fam, kt)))
        if kt is Kind.P:
            r = 0.0 if md.line_equal(lhs.value, rhs.value) else 1.0
        else:
            r = (lhs.value - rhs.value).norm() / max(1.0, rhs.value.norm())
        cases.append(r)
    return cases


def _suite_roundtrips(seed, count, tol):
    cases = []
    edges = _edges()
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "roundtrips", i))
        fam = _MODEL_FAMS[i % len(_MODEL_FAMS)]
        kf, kt = edges[(i // len(_MODEL_FAMS)) % len(edges)]
        p = tf.sample_well_conditioned(_mid2(fam, kf), rng)
        back = tf.convert(tf.convert(p, _mid2(fam, kt)), _mid2(fam, kf))
        if kf is Kind.P:
            r = 0.0 if md.line_equal(back.value, p.value) else 1.0
        else:
            r = (back.value - p.value).norm() / max(1.0, p.value.norm())
        pu = tf.sample_well_conditioned(_mid2(fam, Kind.U), rng)
        tri = (tf.convert(pu, _mid2(fam, Kind.B)).value
               - tf.convert(tf.convert(pu, _mid2(fam, Kind.P)), _mid2(fam, Kind.B)).value).norm()
        cases.append(max(r, tri))
    return cases


def _suite_differentials(seed, count, tol):
    cases = []
    edges = _edges()
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "differentials", i))
        fam = _MODEL_FAMS[i % len(_MODEL_FAMS)]
        kf, kt = edges[(i // len(_MODEL_FAMS)) % len(edges)]
        p = tf.sample_well_conditioned(_mid2(fam, kf), rng)
        t = md.sample_tangent(p, rng)
        ana = tf.differential(p, t.value, _mid2(fam, kt))
        fd = tf.differential_fd(p, t.value, _mid2(fam, kt))
        cases.append(tf.tangent_mismatch(ana, fd) / max(1.0, ana.value.norm()))
    return cases


def _suite_metric(seed, count, tol):
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "metric", i))
        fam = _MODEL_FAMS[i % len(_MODEL_FAMS)]
        umid = _mid2(fam, Kind.U)
        p = md.sample_point(umid, rng)
        v = md.sample_tangent(p, rng).value
        w = md.sample_tangent(p, rng).value
        g = gr.sample_group(md.group_for(umid), rng, scale=0.4)
        before = md.metric(p, v, w)
        tv = md.act_tangent(g, md.TangentVector(umid, p, v))
        tw = md.act_tangent(g, md.TangentVector(umid, p, w))
        after = md.metric(tv.point, tv.value, tw.value)
        inv_err = abs(before - after) / max(1.0, abs(before))
        pos = md.metric(p, v, v)
        base = md.basepoint(umid)
        vb = md.sample_tangent(base, rng).value
        wb = md.sample_tangent(base, rng).value
        base_err = abs(md.metric(base, vb, wb) - md.metric_base(base, vb, wb))
        r = max(inv_err, base_err, 0.0 if pos > 0 else 1.0)
        cases.append(r)
    return cases


def _suite_incarnation(seed, count, tol):
    scb = md.spec_c_bar(_spec2())
    S = AlgebraElement(scb, gr.conjugator("S", _spec2()).coeffs)
    o11 = gr.GroupId(gr.Family.O11, scb)
    sp2 = gr.GroupId(gr.Family.SP2, scb)
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "incarnation", i))
        g = gr.sample_group(o11, rng)
        h = al.mul(al.mul(S, g), al.inv(S))
        cases.append(max(gr.group_residuals(sp2, h).values()) / max(1.0, h.norm() ** 2))
    return cases


def _suite_hkr(seed, count, tol):
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "hkr", i))
        q2, q4 = rng.uniform(-1.0, 1.0, 2)
        _, _, L = hi.hkr_sp4(q2, q4)
        L2 = L @ L
        r = max(
            abs(np.trace(L2) - 4.0 * q2),
            abs(np.trace(L2 @ L2) - 4.0 * (q2 * q2 + q4)),
            abs(hi.hkr_recover(L)[0] - q2),
            abs(hi.hkr_recover(L)[1] - q4),
        )
        cases.append(r)
    return cases


def _suite_hitchin(seed, count, tol):
    spec = _spec2()
    cases = []
    for i in range(count):
        rng = np.random.default_rng(_case_seed(seed, "hitchin", i))
        fam = hi.HiggsFamily.SP2C if i % 2 == 0 else hi.HiggsFamily.OC
        pattern = "sym" if fam is hi.HiggsFamily.SP2C else "antisym"
        q = al.sample(hi.higgs_spec(fam, spec), pattern, rng)
        hv = hi.HiggsVector(fam, q)
        k = hi.sample_compact(fam, spec, rng)
        hv2 = hi.congruence(k, hv)
        lhs = hi.norm_value(hv2)
        rhs = al.mul(al.mul(k, hi.norm_value(hv)), al.inv(k))
        r = (lhs - rhs).norm() / max(1.0, rhs.norm())
        i1 = np.array(hi.invariants(hv))
        i2 = np.array(hi.invariants(hv2))
        r = max(r, float(np.max(np.abs(i1 - i2)) / max(1.0, np.max(np.abs(i1)))))
        cases.append(r)
    return cases


_SUITES = {
    "algebra": (_suite_algebra, 1e-10, 40),
    "groups": (_suite_groups, 1e-9, 25),
    "cartan": (_suite_cartan, 1e-10, 25),
    "stabilizers": (_suite_stabilizers, 1e-10, 20),
    "conversions": (_suite_conversions, 1e-8, 40),
    "roundtrips": (_suite_roundtrips, 1e-8, 30),
    "differentials": (_suite_differentials, 1e-5, 30),
    "metric": (_suite_metric, 1e-8, 20),
    "incarnation": (_suite_incarnation, 1e-9, 20),
    "hkr": (_suite_hkr, 1e-10, 40),
    "hitchin": (_suite_hitchin, 1e-8, 20),
}


def run_selftest(seed: int = 42, cases: int | None = None, tol_scale: float = 1.0,
                 name_filter: str | None = None) -> dict:
    t0 = time.perf_counter()
    report = {"command": "selftest", "seed": seed, "suites": [], "passed": True}
    total = 0
    for name, (fn, tol, default_count) in _SUITES.items():
        if name_filter and name_filter not in name:
            continue
        count = cases if cases is not None else default_count
        residuals = fn(seed, count, tol)
        bound = tol * tol_scale
        ok = all(r <= bound for r in residuals)
        report["suites"].append({
            "suite": name,
            "cases": count,
            "tol": bound,
            "max_residual": _fmt(max(residuals) if residuals else 0.0),
            "residuals": [_fmt(r) for r in residuals],
            "passed": bool(ok),
        })
        report["passed"] = report["passed"] and ok
        total += count
    report["case_count"] = total
    report["wall_time"] = _fmt(time.perf_counter() - t0)
    return report


def cmd_selftest(args) -> int:
    report = run_selftest(seed=args.seed, cases=args.cases, tol_scale=args.tol,
                          name_filter=args.filter)
    _write_json(report, args.out)
    return 0 if report["passed"] else 1


# ----------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symspaces")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, model=True):
        p.add_argument("--family", required=True)
        if model:
            p.add_argument("--model", required=True, help="C, P, U, B or 'group'")
        p.add_argument("--sign", type=int, default=1, choices=(1, -1))
        p.add_argument("--out", default=None)

    p = sub.add_parser("check")
    common(p)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("convert")
    common(p, model=False)
    p.add_argument("--from", required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_convert)

    p = sub.add_parser("act")
    common(p)
    p.add_argument("--g", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(fn=cmd_act)

    p = sub.add_parser("metric")
    common(p, model=False)
    p.add_argument("--z", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--w", default=None)
    p.set_defaults(fn=cmd_metric)

    p = sub.add_parser("invariants")
    p.add_argument("--family", required=True, choices=("sp2c", "oc"))
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("selftest")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--tol", type=float, default=1.0, help="tolerance scale factor")
    p.add_argument("--filter", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SymspacesError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 1
    except (json.JSONDecodeError, KeyError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
