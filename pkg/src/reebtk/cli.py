"""Command-line front end.

Every verb reads JSON inputs, runs one computation, and prints a JSON
report to standard output (or a plain-text table under --human).
Exit codes: 0 success, 2 input validation failure, 1 computation
failure.  The environment variable REEB_TOOLKIT_TOL overrides the
default verification tolerance of 1e-9.

Flag conventions beyond the obvious:
  * torsion: --n is the twist count of the reference family member.
  * lutz-twist: --t0/--t1 bound the surgery window.
  * perturb: --t0 is the radial scale delta, --t1 the plateau radius
    epsilon of the bump (defaults 1.0 and 0.25).
  * euler: --curve names the critical-link JSON file.
  * d2: --class is given five times, in the order d12 d23 d13 e1 e2.
  * snf/homology: --manifold may name a description file or a bare
    JSON matrix (array of arrays of integers).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import cattorus, flow, graphlink
from .curves import (
    BottProfile,
    LutzCurve,
    PerturbationBump,
    alpha_curve,
    contact_defect,
    full_lutz_twist,
    perturb_critical_surface,
    torsion_count_relative,
    winding_angle,
)
from .errors import ComputationError, ValidationError
from .zlinalg import IntMatrix, graph_first_betti, homology_from_presentation, smith_normal_form

DEFAULT_TOL = 1e-9


def _tolerance() -> float:
    raw = os.environ.get("REEB_TOOLKIT_TOL", "").strip()
    if not raw:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError as exc:
        raise ValidationError(f"REEB_TOOLKIT_TOL is not a number: {raw!r}") from exc
    if tol <= 0.0:
        raise ValidationError("REEB_TOOLKIT_TOL must be positive")
    return tol


def _load_json(path: str, what: str):
    if not os.path.exists(path):
        raise ValidationError(f"{what} file not found: {path}")
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed {what} JSON in {path}: {exc}") from exc


def _load_desc(path: str) -> graphlink.GraphManifoldDesc:
    if not os.path.exists(path):
        try:
            fixture = graphlink.fixture_path(os.path.basename(path))
        except ValidationError:
            raise ValidationError(f"description file not found: {path}")
        return graphlink.GraphManifoldDesc.from_json(json.loads(fixture.read_text()))
    return graphlink.GraphManifoldDesc.from_json(_load_json(path, "description"))


def _load_curve(path: str) -> LutzCurve:
    return LutzCurve.from_json(_load_json(path, "curve"))


def _parse_ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(p.strip()) for p in text.split(",") if p.strip() != "")
    except ValueError as exc:
        raise ValidationError(f"{flag} must be comma-separated integers, got {text!r}") from exc


def _emit(report: dict, human_lines, human: bool) -> None:
    if human:
        for line in human_lines:
            print(line)
    else:
        print(json.dumps(report, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# verb handlers; each returns (report, human_lines, exit_code)


def _cmd_check_contact(args):
    curve = _load_curve(args.curve)
    ts = curve.grid(10_000)
    d = np.asarray(contact_defect(curve, ts))
    ok = bool(np.all(d < 0.0))
    report = {
        "contact": ok,
        "max_determinant": float(np.max(d)),
        "min_determinant": float(np.min(d)),
        "samples": int(ts.size),
        "domain": [curve.t_lo, curve.t_hi],
    }
    lines = [
        f"contact: {'yes' if ok else 'NO'}",
        f"determinant range: [{report['min_determinant']:.6g}, {report['max_determinant']:.6g}]",
        f"samples: {ts.size} on [{curve.t_lo:g}, {curve.t_hi:g}]",
    ]
    return report, lines, 0


def _cmd_reeb_flow(args):
    curve = _load_curve(args.curve)
    t0 = args.t0 if args.t0 is not None else 0.5 * (curve.t_lo + curve.t_hi)
    traj = flow.integrate_reeb(curve, BottProfile.linear(), (t0, 0.0, 0.0), args.T, args.dt)
    if traj.status != "ok":
        report = {"status": traj.status, "steps_completed": traj.n_done}
        return report, [f"status: {traj.status} after {traj.n_done} steps"], 1
    fin = traj.final_state
    report = {
        "status": traj.status,
        "steps": traj.n_done,
        "dt": traj.step,
        "initial": {"t": t0, "x1": 0.0, "x2": 0.0},
        "final": {"t": fin.t, "x1": fin.x1, "x2": fin.x2},
        "transverse_drift": traj.transverse_drift(),
        "profile_drift": traj.integral_drift,
    }
    lines = traj.to_csv().splitlines()
    return report, lines, 0


def _cmd_winding(args):
    curve = _load_curve(args.curve)
    t0 = args.t0 if args.t0 is not None else curve.t_lo
    t1 = args.t1 if args.t1 is not None else curve.t_hi
    w = winding_angle(curve, t0, t1)
    report = {"winding_angle": w, "turns": w / (2.0 * math.pi), "t0": t0, "t1": t1}
    return report, [f"winding angle over [{t0:g}, {t1:g}]: {w:.12g} ({w / (2 * math.pi):+.6f} turns)"], 0


def _cmd_torsion(args):
    curve = _load_curve(args.curve)
    n = args.n if args.n is not None else 0
    base = alpha_curve(n, domain=curve.domain)
    k = torsion_count_relative(curve, base)
    report = {"torsion": k, "base_n": n}
    return report, [f"torsion relative to the {n}-twist family member: {k}"], 0


def _cmd_lutz_twist(args):
    curve = _load_curve(args.curve)
    if args.t0 is None or args.t1 is None:
        raise ValidationError("lutz-twist requires --t0 and --t1 (window bounds)")
    if not (args.t0 < args.t1):
        raise ValidationError("twist window needs --t0 < --t1")
    s0 = 0.5 * (args.t0 + args.t1)
    eps = 0.5 * (args.t1 - args.t0)
    level = float(np.asarray(curve.evaluate(np.array([s0]))[1])[0])
    out = full_lutz_twist(curve, s0, eps, level)
    tw = out.meta["twist"]
    report = {
        "curve": out.to_json(),
        "winding_delta_turns": tw["winding_delta"] / (2.0 * math.pi),
        "window": list(tw["window"]),
        "level": level,
        "subannuli": [
            {"t": list(s["t"]), "axis": s["axis"], "sign": s["sign"]}
            for s in out.meta["subannuli"]
        ],
    }
    lines = [
        f"twist inserted on [{args.t0:g}, {args.t1:g}] at level {level:g}",
        f"winding delta: {report['winding_delta_turns']:+.6f} turns",
        f"output samples: {out.samples.shape[0]}",
    ] + [
        f"  subannulus {s['axis']} sign {s['sign']:+d} on t in [{s['t'][0]:.6g}, {s['t'][1]:.6g}]"
        for s in report["subannuli"]
    ]
    return report, lines, 0


def _cmd_perturb(args):
    delta = args.t0 if args.t0 is not None else 1.0
    epsilon = args.t1 if args.t1 is not None else 0.25
    bump = PerturbationBump.smoothstep(delta, epsilon)
    rep = perturb_critical_surface(bump)
    report = {
        "delta": delta,
        "epsilon": epsilon,
        "critical_points": [
            {"r": p.r, "theta": p.theta, "kind": p.kind,
             "eigenvalues": list(p.eigenvalues)}
            for p in rep.points
        ],
    }
    lines = [f"critical points of r^2 + chi(r) cos(theta), delta={delta:g} epsilon={epsilon:g}:"]
    lines += [
        f"  (r={p.r:+.6g}, theta={p.theta:.6g}): {p.kind}, eigenvalues "
        f"({p.eigenvalues[0]:+.6g}, {p.eigenvalues[1]:+.6g})"
        for p in rep.points
    ]
    return report, lines, 0


def _relations_from_manifold(path: str):
    """(relations, ngens, k) from a description file, a packaged fixture
    name, or a bare JSON matrix."""
    if os.path.exists(path):
        obj = _load_json(path, "description or matrix")
    else:
        obj = _load_desc(path).to_json()
    if isinstance(obj, list):
        mat = IntMatrix.from_json(obj)
        return mat, mat.cols, 0
    desc = graphlink.GraphManifoldDesc.from_json(obj)
    return desc.h1_relations, desc.ngens, desc.s1xs2_count


def _cmd_homology(args):
    rel, ngens, k = _relations_from_manifold(args.manifold)
    h = homology_from_presentation(rel, ngens)
    total = type(h)(free_rank=h.free_rank + k, torsion=h.torsion)
    report = {
        "h1": str(total),
        "free_rank": total.free_rank,
        "torsion": list(total.torsion),
        "irreducible_part": str(h),
        "s1xs2_count": k,
    }
    lines = [f"H1 = {total}"]
    if k:
        lines.append(f"  (irreducible part {h}, plus Z^{k} from {k} handle summand(s))")
    return report, lines, 0


def _cmd_snf(args):
    mat, _, _ = _relations_from_manifold(args.manifold)
    u, d, v = smith_normal_form(mat)
    report = {
        "U": u.to_json(),
        "D": d.to_json(),
        "V": v.to_json(),
        "diagonal": [int(x) for x in d.diagonal_entries()],
        "invariant_factors": [int(x) for x in d.diagonal_entries() if x != 0],
    }
    lines = [f"D = diag{tuple(report['diagonal'])} with D = U @ M @ V",
             f"invariant factors: {report['invariant_factors']}"]
    return report, lines, 0


def _cmd_jsj(args):
    desc = _load_desc(args.manifold)
    g = graphlink.jsj_complex(desc)
    report = {
        "vertices": g.vertex_count,
        "edges": [list(e) for e in g.edges],
        "first_betti": graph_first_betti(g),
        "components": g.component_count(),
    }
    lines = [f"JSJ complex: {g.vertex_count} vertices, {len(g.edges)} edges, "
             f"betti {report['first_betti']}"]
    return report, lines, 0


def _single_class(args, desc, flag_value, flag: str):
    if flag_value is None:
        raise ValidationError(f"this verb requires {flag}")
    if isinstance(flag_value, list):
        if len(flag_value) != 1:
            raise ValidationError(f"{flag} must be given exactly once here")
        flag_value = flag_value[0]
    return desc.class_from_coords(_parse_ints(flag_value, flag))


def _cmd_decide_graphlink(args):
    desc = _load_desc(args.manifold)
    u = _single_class(args, desc, args.cls, "--class")
    verdict = graphlink.graph_link_representable(desc, u)
    report = {"representable": verdict}
    return report, [f"representable by a graph link: {'yes' if verdict else 'no'}"], 0


def _cmd_decide_bott(args):
    desc = _load_desc(args.manifold)
    u = _single_class(args, desc, [args.euler] if args.euler is not None else None, "--euler")
    xi = graphlink.PlaneField(euler_pd=u)
    verdict = graphlink.bott_integrable_overtwisted(desc, xi)
    report = {"bott_integrable": verdict}
    return report, [f"Bott integrable (overtwisted): {'yes' if verdict else 'no'}"], 0


def _cmd_euler(args):
    desc = _load_desc(args.manifold)
    obj = _load_json(args.curve, "critical link")
    if not isinstance(obj, dict) or "components" not in obj:
        raise ValidationError("critical link JSON needs a 'components' array")
    comps = []
    for i, c in enumerate(obj["components"]):
        if not isinstance(c, dict) or "type" not in c or "class" not in c:
            raise ValidationError(f"link component {i} needs 'type' and 'class'")
        comps.append((c["type"], desc.class_from_coords(c["class"])))
    link = graphlink.CriticalLinkDesc(components=tuple(comps))
    e = graphlink.euler_from_critical_link(desc, link)
    report = {"euler_pd": list(e.coords()), "canonical": True}
    return report, [f"Euler-class dual (canonical coordinates): {list(e.coords())}"], 0


def _cmd_d2(args):
    desc = _load_desc(args.manifold)
    vals = args.cls or []
    if len(vals) != 5:
        raise ValidationError(
            "--class must be given exactly five times: d12 d23 d13 e1 e2"
        )
    d12, d23, d13, e1, e2 = (desc.class_from_coords(_parse_ints(v, "--class")) for v in vals)
    rep = graphlink.check_d2_algebra(desc, d12, d23, d13, e1, e2)
    report = {
        "additivity_holds": rep.additivity_holds,
        "doubling_holds": rep.doubling_holds,
        "all_hold": rep.all_hold,
    }
    lines = [f"additivity d12 + d23 = d13: {'pass' if rep.additivity_holds else 'FAIL'}",
             f"doubling 2 d12 = e1 - e2: {'pass' if rep.doubling_holds else 'FAIL'}"]
    return report, lines, 0


def _cmd_catmap_verify(args):
    tol = _tolerance()
    n = args.n if args.n is not None else 0
    ts = np.linspace(0.0, 3.0, 1000)

    equiv = cattorus.check_equivariance(n, ts)

    h1, h2, dh1, dh2 = cattorus.alpha_n(n, ts)
    det_resid = float(np.max(np.abs(
        (h1 * dh2 - dh1 * h2) - cattorus.contact_determinant(n, ts)
    )))

    fib_pts = []
    for t, want in ((1.0, (1.0, 1.0)), (2.0, (2.0, 3.0)), (3.0, (5.0, 8.0))):
        a1, a2, _, _ = cattorus.alpha_n(n, np.array([t]))
        fib_pts.append((float(a2[0]), want[0]))
        fib_pts.append((float(a1[0]), want[1]))
    fib_resid = [abs(got - want) for got, want in fib_pts]
    fib_max = max(fib_resid)

    b1, b2, _, _ = cattorus.alpha_n(n, np.array([0.0]))
    boundary = max(abs(float(b1[0]) - 0.0), abs(float(b2[0]) - 1.0))

    torsion = torsion_count_relative(alpha_curve(n), alpha_curve(0))

    ok = (equiv < tol and det_resid < tol and fib_max < tol
          and boundary < tol and torsion == n)
    report = {
        "n": n,
        "tolerance": tol,
        "equivariance_residual": equiv,
        "determinant_residual": det_resid,
        "fibonacci_values": [got for got, _ in fib_pts],
        "fibonacci_residual": fib_max,
        "fibonacci_exact": fib_max == 0.0,
        "boundary_residual": boundary,
        "torsion_computed": torsion,
        "torsion_expected": n,
        "pass": ok,
    }
    lines = [
        f"twist family member n = {n} (tolerance {tol:g}):",
        f"  equivariance residual: {equiv:.3e}",
        f"  contact determinant residual: {det_resid:.3e}",
        f"  boundary values residual: {boundary:.3e}",
        f"  (h2,h1) at t=1,2,3: {[got for got, _ in fib_pts]} (max residual {fib_max:.3e})",
        f"  torsion: {torsion} (expected {n})",
        f"  verdict: {'pass' if ok else 'FAIL'}",
    ]
    return report, lines, 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="reebtk",
        description="Contact-form curve algebra, Reeb flows, and graph-link decisions.",
    )
    sub = p.add_subparsers(dest="verb", required=True)

    def add(verb, handler, helptext):
        sp = sub.add_parser(verb, help=helptext)
        sp.set_defaults(handler=handler)
        sp.add_argument("--manifold", help="graph-manifold description JSON (or packaged fixture name)")
        sp.add_argument("--curve", help="curve JSON file (critical-link JSON for 'euler')")
        sp.add_argument("--n", type=int, help="twist count / family index")
        sp.add_argument("--class", dest="cls", action="append",
                        help="homology class as comma-separated integers (repeatable)")
        sp.add_argument("--euler", help="Euler-class dual as comma-separated integers")
        sp.add_argument("--t0", type=float, help="parameter (see verb docs)")
        sp.add_argument("--t1", type=float, help="parameter (see verb docs)")
        sp.add_argument("--T", type=float, default=10.0, help="flow duration")
        sp.add_argument("--dt", type=float, default=1e-3, help="integrator step")
        sp.add_argument("--human", action="store_true", help="plain-text output instead of JSON")
        return sp

    add("check-contact", _cmd_check_contact, "validate the contact condition of a curve")
    add("reeb-flow", _cmd_reeb_flow, "integrate the Reeb flow of a curve")
    add("winding", _cmd_winding, "winding angle of a curve about the origin")
    add("torsion", _cmd_torsion, "integer twist count relative to the n-twist family member")
    add("lutz-twist", _cmd_lutz_twist, "insert one full twist in a parameter window")
    add("perturb", _cmd_perturb, "critical set of the perturbed height r^2 + chi cos(theta)")
    add("homology", _cmd_homology, "first homology from a description or relation matrix")
    add("snf", _cmd_snf, "Smith normal form of a relation matrix")
    add("jsj", _cmd_jsj, "assembled JSJ complex of a description")
    add("decide-graphlink", _cmd_decide_graphlink, "graph-link representability of a class")
    add("decide-bott", _cmd_decide_bott, "Bott integrability of an overtwisted structure")
    add("euler", _cmd_euler, "Euler-class dual of a critical-orbit link")
    add("d2", _cmd_d2, "verify obstruction-class identities")
    add("catmap-verify", _cmd_catmap_verify, "identity suite for the torus-bundle family")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    missing = {
        "check-contact": ("curve",), "reeb-flow": ("curve",), "winding": ("curve",),
        "torsion": ("curve",), "lutz-twist": ("curve",),
        "homology": ("manifold",), "snf": ("manifold",), "jsj": ("manifold",),
        "decide-graphlink": ("manifold",), "decide-bott": ("manifold",),
        "euler": ("manifold", "curve"), "d2": ("manifold",),
    }
    try:
        for flag in missing.get(args.verb, ()):
            if getattr(args, flag) is None:
                raise ValidationError(f"{args.verb} requires --{flag}")
        report, lines, code = args.handler(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(report, lines, args.human)
    return code


if __name__ == "__main__":
    sys.exit(main())
