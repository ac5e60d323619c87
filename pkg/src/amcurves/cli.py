"""Command-line front end.

    amcurves curve    new|validate|genus|count|zeta|prank
    amcurves aut      claim|verify|structure|search|orbits
    amcurves quotient sigma_x|diagonal|ycurve|zcurve|yaut

Curve files and reports are JSON.  Exit codes: 0 success, 1 a checked
claim failed, 2 usage/parse/parameter error, 3 budget or genus guard refusal.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from typing import Any

from . import __version__
from .autgroup import (
    DEFAULT_BUDGET,
    AutMap,
    claimed_group,
    compare_with_claimed,
    linear_aut_search,
    sigma_orbits,
    structure_report,
    verify_automorphism,
)
from .curve import (
    AMCurve,
    CURVE_FORMAT,
    curve_from_dict,
    genus,
    l_polynomial,
    nakajima,
    new_am_curve,
    p_rank_formula,
    random_curve,
    rational_places,
)
from .errors import AMCurvesError, BudgetExceeded, DeskScaleLimit, InconsistencyError, ParameterError
from .gf import FiniteField, make_field
from .linpoly import LinearizedPoly
from .quotient import (
    YCurve,
    ZCurve,
    diagonal_quotient,
    quotient_curve_from_dict,
    quotient_sigma,
    weierstrass_places,
    y_aut_group,
    y_aut_search,
    y_curve,
    z_curve,
    z_dihedral_containment,
)

REPORT_FORMAT = "amcurves.report/1"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# input
# --------------------------------------------------------------------------


def _load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _parse_list(text: str, flag: str) -> list:
    try:
        val = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: not a JSON list ({exc.msg})") from exc
    if not isinstance(val, list):
        raise UsageError(f"{flag}: expected a JSON list of coefficients")
    return val


def _coeff_field(args, *lists) -> FiniteField:
    if args.coeff_degree:
        return make_field(args.p, args.coeff_degree, 0)
    if all(isinstance(c, int) for lst in lists for c in lst):
        return make_field(args.p, 1, 0)
    raise UsageError("--coeff-degree is required when coefficients are coordinate vectors")


def _record(path: str) -> dict:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise UsageError(f"{path}: top level must be an object")
    for field in ("format", "tower"):
        if field not in data:
            raise UsageError(f"{path}: missing field '{field}'")
    if data["format"] != CURVE_FORMAT:
        raise UsageError(f"{path}: field 'format' must be '{CURVE_FORMAT}'")
    return data


def _with_fields(path: str, fn, data):
    try:
        return fn(data)
    except KeyError as exc:
        raise UsageError(f"{path}: missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise UsageError(f"{path}: malformed field value ({exc})") from exc


def load_am_curve(args) -> AMCurve:
    if args.curve:
        data = _record(args.curve)
        if data.get("kind", "am") != "am":
            raise UsageError(f"{args.curve}: field 'kind' must be 'am' for this command")
        return _with_fields(args.curve, curve_from_dict, data)
    if args.p is None:
        raise UsageError("give --curve FILE or inline parameters --p/--n/--m (with --seed or --L1/--L2)")
    if args.L1 or args.L2:
        if not (args.L1 and args.L2):
            raise UsageError("--L1 and --L2 must be given together")
        l1, l2 = _parse_list(args.L1, "--L1"), _parse_list(args.L2, "--L2")
        F = _coeff_field(args, l1, l2)
        n = args.n or 1
        return new_am_curve(LinearizedPoly(n, F, tuple(F(c) for c in l1)), LinearizedPoly(n, F, tuple(F(c) for c in l2)))
    if args.n is None or args.m is None:
        raise UsageError("inline random curves need --p, --n, --m and --seed")
    return random_curve(args.p, args.n, args.m, args.seed)


def load_y_or_z(args, kind: str) -> YCurve | ZCurve:
    if args.curve:
        data = _record(args.curve)
        if data.get("kind") != kind:
            raise UsageError(f"{args.curve}: field 'kind' must be '{kind}'")
        return _with_fields(args.curve, quotient_curve_from_dict, data)
    if args.p is None or not args.L:
        raise UsageError("give --curve FILE or --p with --L (and --a or --b)")
    lst = _parse_list(args.L, "--L")
    F = _coeff_field(args, lst)
    L = LinearizedPoly(1, F, tuple(F(c) for c in lst))
    if kind == "y":
        return y_curve(L, F(json.loads(args.a) if args.a else 1))
    return z_curve(L, F(json.loads(args.b) if args.b else 0))


# --------------------------------------------------------------------------
# report assembly
# --------------------------------------------------------------------------


class Report:
    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.results: dict[str, Any] = {}
        self.status: list[dict] = []

    def value(self, key: str, value, source: str):
        self.results[key] = {"value": value, "source": source}

    def put(self, key: str, value):
        self.results[key] = value

    def check(self, name: str, ok: bool):
        self.status.append({"name": name, "ok": bool(ok)})

    @property
    def ok(self) -> bool:
        return all(s["ok"] for s in self.status)

    def to_dict(self) -> dict:
        inputs = {k: v for k, v in sorted(vars(self.args).items()) if k not in ("func", "out", "deterministic")}
        out = {
            "format": REPORT_FORMAT,
            "version": __version__,
            "command": self.command,
            "inputs": inputs,
            "seed": self.args.seed,
            "results": self.results,
            "status": self.status,
            "pass": self.ok,
        }
        if not self.args.deterministic:
            out["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        return out


def _curve_summary(c: AMCurve) -> dict:
    return {
        "tower": {"p": c.p, "n": c.n, "m": c.m},
        "q": c.q,
        "qbar": c.qbar,
        "L1": repr(c.L1),
        "L2": repr(c.L2),
        "count_field": repr(c.count_field),
        "ambient": repr(c.ambient),
        "regime": c.regime,
        "diagonal": c.diagonal,
    }


def _emit(args, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------------------
# curve commands
# --------------------------------------------------------------------------


def cmd_curve(args) -> Report:
    c = load_am_curve(args)
    r = Report(args, f"curve {args.action}")
    r.put("curve", _curve_summary(c))
    if args.action == "new":
        r.put("record", c.to_dict())
    elif args.action == "validate":
        r.check("member of the family (separable, equal degree, linearity clause)", True)
        r.value("kernel_sizes", [len(c.kernel1), len(c.kernel2)], "null space of the L1/L2 matrices over the ambient field")
    elif args.action == "genus":
        g = genus(c)
        r.value("genus", g, "Riemann-Hurwitz: 2g-2 = q(0-2) + q*2(q-1), different from filtration (q, q, 1)")
        r.value("p_rank_formula", p_rank_formula(c), "Deuring-Shafarevich with |Sigma| = q^2, two short orbits of length q")
        nk = nakajima(c)
        r.value("nakajima", {"sylow_order": nk.sylow_order, "bound": str(nk.bound), "tight": nk.tight},
                "Nakajima: |Sigma| <= p/(p-2) (g-1)")
        r.check("genus = (q-1)^2", g == (c.q - 1) ** 2)
        r.check("ordinary at formula level (p-rank = genus)", p_rank_formula(c) == g)
        r.check("Nakajima bound", nk.ok)
    elif args.action == "count":
        N = rational_places(c, args.k, workers=args.threads)
        r.value("N", {str(args.k): N}, "value-table enumeration of affine points + rational kernel labels at infinity")
    elif args.action in ("zeta", "prank"):
        z = l_polynomial(c)
        r.value("counts", {str(k): n for k, n in enumerate(z.counts, 1)}, "value-table enumeration over GF(Q0^k)")
        r.value("l_poly", list(z.l_poly), "Newton identities on S_k = N_k - Q0^k - 1")
        r.value("p_rank", z.p_rank, "degree of the L-polynomial mod p")
        r.value("genus", genus(c), "Riemann-Hurwitz")
        r.check("functional equation", True)
        if args.action == "prank":
            ds = p_rank_formula(c)
            r.value("p_rank_formula", ds, "Deuring-Shafarevich")
            r.check("zeta p-rank = Deuring-Shafarevich", z.p_rank == ds)
    return r


# --------------------------------------------------------------------------
# aut commands
# --------------------------------------------------------------------------


def _parse_map(text: str, F: FiniteField, lam) -> AutMap:
    if text == "xi":
        return AutMap.xi(F)
    if text == "theta":
        return AutMap.theta(lam)
    try:
        d = json.loads(text)
        return AutMap(bool(d["swap"]), F(d["lambda"]), F(d["alpha"]), F(d["beta"]))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"--map: expected 'xi', 'theta' or {{swap, lambda, alpha, beta}} ({exc})") from exc


def cmd_aut(args) -> Report:
    c = load_am_curve(args)
    r = Report(args, f"aut {args.action}")
    r.put("curve", _curve_summary(c))
    ambient = make_field(c.p, args.ambient, 0) if args.ambient and args.action != "search" else None
    if args.action in ("claim", "structure"):
        G = claimed_group(c, ambient)
        cert = structure_report(G)
        expected = (2 if G.kind == "delta" else 1) * (c.qbar - 1) * c.q**2
        r.value("order", G.order, "closure of the generators tau, theta" + (", xi" if G.kind == "delta" else ""))
        r.value("formula_order", expected, "2(qbar-1)q^2" if G.kind == "delta" else "(qbar-1)q^2")
        r.put("structure", cert.structure)
        if args.action == "structure":
            r.put("certificate", cert.to_dict())
        r.check("order matches formula", G.order == expected)
        r.check("every element verified symbolically", True)
        for rel in cert.relations:
            r.check(rel.name, rel.ok)
    elif args.action == "verify":
        G = claimed_group(c, ambient, check=False)
        phi = _parse_map(args.map, G.field, G.lam)
        v = verify_automorphism(c, phi)
        r.value("automorphism", v.ok, "symbolic comparison of L1(phi_x) L2(phi_y) - 1 with kappa (L1(X) L2(Y) - 1)")
        r.put("transcript", v.transcript)
    elif args.action == "search":
        if not args.ambient:
            raise UsageError("aut search needs --ambient D")
        found, stats = linear_aut_search(c, args.ambient, budget=args.budget, workers=args.threads)
        G = claimed_group(c)
        cmp = compare_with_claimed(found, G)
        r.value("found", found.order, "exhaustive affine-linear search with point filter and symbolic confirmation")
        r.value("claimed", G.order, "claimed group")
        r.put("search", stats.to_dict())
        r.put("comparison", cmp)
        swaps = sum(1 for m in found.elements if m.is_swap_shape)
        r.value("swap_shape_maps", swaps, "search output")
        r.check("search set = claimed set", cmp.get("equal", False))
        if not c.diagonal:
            r.check("no swap-shape map", swaps == 0)
    elif args.action == "orbits":
        od = sigma_orbits(c, ambient)
        r.value("orbits", od.to_dict(), "translation action of Sigma on the kernel labels at infinity")
        r.check("two orbits of length q", od.lengths == [c.q, c.q])
    return r


# --------------------------------------------------------------------------
# quotient commands
# --------------------------------------------------------------------------


def _small_curve_report(r: Report, Y, with_zeta: bool = True) -> None:
    g = Y.genus()
    r.value("genus", g, "Riemann-Hurwitz with filtration " + str(list(Y.ramification().filtration)))
    r.value("p_rank_formula", Y.p_rank_formula(), "Deuring-Shafarevich")
    if with_zeta:
        try:
            z = l_polynomial(Y)
        except DeskScaleLimit as exc:
            r.put("zeta", str(exc))
        else:
            r.value("l_poly", list(z.l_poly), "Newton identities on place counts")
            r.value("p_rank", z.p_rank, "degree of the L-polynomial mod p")
            r.check("zeta p-rank = Deuring-Shafarevich", z.p_rank == Y.p_rank_formula())
            r.check("zeta degree = 2g", len(z.l_poly) - 1 == 2 * g)


def cmd_quotient(args) -> Report:
    r = Report(args, f"quotient {args.action}")
    if args.action in ("sigma_x", "diagonal"):
        c = load_am_curve(args)
        r.put("curve", _curve_summary(c))
        if args.action == "sigma_x":
            sq = quotient_sigma(c, args.side)
            r.value("presentation", {"eta": sq.eta, "relation": sq.relation}, "eta invariant under Sigma")
            r.value("counts", {str(k): v for k, v in sq.counts.items()},
                    "place count of the presentation vs Sigma-orbit count of parent rational places")
            r.value("orbit_count_equal", sq.equal, "comparison")
            for k, v in sq.counts.items():
                r.check(f"quotient is rational at k={k} (N = Q0^k + 1)", v["quotient_places"] == v["genus0_expected"])
        else:
            dq = diagonal_quotient(c)
            r.value("genus", dq.curve.genus(), "Riemann-Hurwitz on the Y curve")
            r.put("ycurve", dq.curve.to_dict())
            r.put("coordinates", "eta = L2(y), t = x + y")
            for rel in dq.checks:
                r.check(rel.name, rel.ok)
        return r
    kind = "z" if args.action == "zcurve" else "y"
    Y = load_y_or_z(args, kind)
    r.put("curve", Y.to_dict())
    if args.action == "ycurve":
        _small_curve_report(r, Y)
        w = weierstrass_places(Y)
        r.value("mu_fixed_places", len(w.places), f"fixed places of mu over {w.locus}, enumerated in {w.field}")
        for rel in w.checks:
            r.check(rel.name, rel.ok)
    elif args.action == "zcurve":
        _small_curve_report(r, Y)
        cert = z_dihedral_containment(Y)
        r.value("dihedral_order", cert.order, "closure of tau_alpha and nu, verified symbolically")
        for rel in cert.relations:
            r.check(rel.name, rel.ok)
    elif args.action == "yaut":
        elems, cert = y_aut_group(Y)
        r.value("order", cert.order, "closure of tau_alpha, nu, mu")
        r.put("structure", cert.structure)
        for rel in cert.relations:
            r.check(rel.name, rel.ok)
        if args.search:
            D = args.ambient or Y.count_field.d
            found, stats = y_aut_search(Y, D, budget=args.budget)
            r.value("found", len(found), "exhaustive Moebius x affine search with point filter and symbolic confirmation")
            r.put("search", stats.to_dict())
            r.put("summary", f"found {len(found)} = 4q" if len(found) == 4 * Y.q else f"found {len(found)} != 4q = {4 * Y.q}")
            r.check("found = 4q", len(found) == 4 * Y.q)
            same = {m.key() for m in found} == {m.key() for m in elems} if stats.field == next(iter(elems)).field else None
            if same is not None:
                r.check("search set = constructed group", same)
    return r


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", metavar="FILE", help="curve file (JSON)")
    common.add_argument("--p", type=int, help="characteristic for inline construction")
    common.add_argument("--n", type=int, help="qbar = p^n")
    common.add_argument("--m", type=int, help="q = qbar^m")
    common.add_argument("--seed", type=int, default=0, help="seed for random curves (recorded in reports)")
    common.add_argument("--L1", help="JSON coefficient list a_0..a_m of L1")
    common.add_argument("--L2", help="JSON coefficient list of L2")
    common.add_argument("--L", help="JSON coefficient list of L (y/z curves, p-linearized)")
    common.add_argument("--a", help="constant a of a Y curve (int or coordinate list)")
    common.add_argument("--b", help="constant b of a Z curve")
    common.add_argument("--coeff-degree", type=int, help="degree over GF(p) of the coefficient field")
    common.add_argument("--k", type=int, default=1, help="extension degree for counting")
    common.add_argument("--ambient", type=int, help="ambient / search field degree D")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search candidate budget")
    common.add_argument("--threads", type=int, default=1, help="worker threads for counting and search")
    common.add_argument("--deterministic", action="store_true", help="omit the timestamp")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="amcurves", description="Generalized Artin-Mumford curve toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="group", required=True)

    p_curve = sub.add_parser("curve", parents=[common], help="construct and analyse curves")
    p_curve.add_argument("action", choices=["new", "validate", "genus", "count", "zeta", "prank"])
    p_curve.set_defaults(func=cmd_curve)

    p_aut = sub.add_parser("aut", parents=[common], help="automorphism groups")
    p_aut.add_argument("action", choices=["claim", "verify", "structure", "search", "orbits"])
    p_aut.add_argument("--map", default="xi", help="'xi', 'theta' or JSON {swap, lambda, alpha, beta}")
    p_aut.set_defaults(func=cmd_aut)

    p_q = sub.add_parser("quotient", parents=[common], help="quotient curves")
    p_q.add_argument("action", choices=["sigma_x", "diagonal", "ycurve", "zcurve", "yaut"])
    p_q.add_argument("--side", choices=["x", "y"], default="x", help="quotient by Sigma_x or Sigma_y")
    p_q.add_argument("--search", action="store_true", help="also run the brute-force search (yaut)")
    p_q.set_defaults(func=cmd_quotient)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        report = args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DeskScaleLimit, BudgetExceeded) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InconsistencyError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except AMCurvesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = report.results["record"] if args.group == "curve" and args.action == "new" else report.to_dict()
    _emit(args, payload)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
