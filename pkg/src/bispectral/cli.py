"""Command line front end: ``bispectral <command> ...``.

Exit codes: 0 success or verified, 1 verified-false (nonzero residual,
conjecture mismatch, violated constraint), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import sys
import time
from importlib import resources
from typing import List, Optional

from .dsl import DSLError, ProblemFile, parse, parse_expr
from .expkernel import ExpKernel, apply_left, apply_right
from .families import conjecture_family, conjecture_subspace, get_family
from .kdv import (KdVConfig, admissible_dim, check_constraints, crosscheck_scalar, tau,
                  tau_factors, theta_admissible, verify_log_identity)
from .matrix import MatRF
from .operators import DiffOp, minimal_ad_order
from .poly import BiPoly
from .ratfunc import RatFunc
from .report import (EXIT_USAGE, Report, coefficient_lists, error_report,
                     matrix_strings, residual_of)
from .scalar import ExtField, scalar_text
from .solver import (BAnsatz, LAnsatz, compare_spaces, solve_b_escalating, solve_f_space,
                     solve_theta_space)


class UsageError(Exception):
    pass


# -- input handling ---------------------------------------------------------------

def example_text(n: int) -> str:
    return resources.files("bispectral").joinpath("data", f"ex{n}.bsp").read_text(encoding="utf-8")


def load_problem(args) -> ProblemFile:
    if getattr(args, "example", None):
        return parse(example_text(args.example))
    if not getattr(args, "input", None):
        raise UsageError("give --input FILE or --example N")
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    return parse(text)


def _need(pf: ProblemFile, name: str):
    if name not in pf:
        raise UsageError(f"problem file has no binding {name!r}")


def problem_psi(pf: ProblemFile, name: str = "Psi") -> ExpKernel:
    _need(pf, name)
    psi = pf.get(name)
    if not isinstance(psi, ExpKernel):
        raise UsageError(f"{name} must be a function (fun {name} = expxz * ...)")
    if psi.m.rows != psi.m.cols:
        raise UsageError(f"{name} must be square")
    return psi


def _operator(pf: ProblemFile, name: str, size: int, var: str) -> DiffOp:
    _need(pf, name)
    op = pf.get(name, size)
    if not isinstance(op, DiffOp) or op.var != var:
        raise UsageError(f"{name} must be an operator in D{var}")
    return op


def _matrix(pf: ProblemFile, name: str, size: int) -> MatRF:
    _need(pf, name)
    m = pf.get(name, size)
    if not isinstance(m, MatRF):
        raise UsageError(f"{name} must be a scalar or matrix (let {name} = ...)")
    return m


def _bounds(ansatz) -> dict:
    return ansatz.as_dict()


# -- commands -----------------------------------------------------------------------

def cmd_verify(args, rep: Report):
    pf = load_problem(args)
    psi = problem_psi(pf)
    n = psi.size
    checks = 0
    if "L" in pf and "F" in pf:
        l = _operator(pf, "L", n, "x")
        f = _matrix(pf, "F", n)
        rep.residuals.append(residual_of("L Psi - Psi F", apply_left(l, psi) - ExpKernel(psi.m @ f)))
        checks += 1
    b_name = args.b_name
    if b_name in pf and "Theta" in pf:
        b = _operator(pf, b_name, n, "z")
        theta = _matrix(pf, "Theta", n)
        rep.residuals.append(residual_of(f"Psi {b_name} - Theta Psi",
                                         apply_right(psi, b) - ExpKernel(theta @ psi.m)))
        checks += 1
    if not checks:
        raise UsageError("nothing to verify: need L and F, or B and Theta")
    for r in rep.residuals:
        rep.say(f"{r.check}: {'0' if r.zero else 'NONZERO'}")
        for e in r.entries:
            rep.say(f"  [{e['row']},{e['col']}] = {e['value']}")
    if all(r.zero for r in rep.residuals):
        rep.status = "verified"
    else:
        rep.fail("failed")


def _family_basis(which: str, deg: int, mode: str):
    return conjecture_subspace(which, deg) if mode == "subspace" else conjecture_family(which, deg)


def _report_space(rep: Report, space, var: str):
    for eig, op in space.basis:
        if eig.is_zero():
            continue
        rep.basis.append({"eigenvalue": coefficient_lists(eig, var, space.deg), "operator": op.to_text()})
        rep.lines.append(f"  {eig.to_text()}")
    kind = "theta_dim" if space.kind == "theta" else "f_dim"
    rep.dims.update({kind: space.dim, "solution_dim": len(space.basis),
                     "unknowns": space.n_unknowns, "equations": space.n_equations})


def _compare(rep: Report, space, which: str, mode: str):
    fam = get_family(which)
    if fam.var != space.var or fam.size != space.size:
        raise UsageError(f"family {which} is {fam.size}x{fam.size} in {fam.var}; "
                         f"space is {space.size}x{space.size} in {space.var}")
    conj = _family_basis(which, space.deg, mode)
    cmp = compare_spaces(space, conj)
    rep.dims["conjectured_dim"] = cmp.dim_conjectured
    rep.dims["joint_dim"] = cmp.dim_joint
    rep.extra["relation"] = cmp.relation
    rep.extra["certificate"] = {
        "computed_outside": [matrix_strings(m) for m in cmp.computed_outside],
        "conjectured_outside": [matrix_strings(m) for m in cmp.conjectured_outside],
    }
    return cmp


def cmd_solve_theta(args, rep: Report):
    pf = load_problem(args)
    psi = problem_psi(pf)
    ansatz = BAnsatz(args.b_order, args.z_low, args.z_high)
    rounds = 4 if args.escalate else 0
    cmp = space = None
    prev_dim = None
    for k in range(rounds + 1):
        rep.bounds_used.append(_bounds(ansatz))
        space = solve_theta_space(psi, args.deg, ansatz)
        if args.compare:
            cmp = _compare(rep, space, args.compare, args.compare_mode)
            # enlarging bounds only adds elements, so an element outside the
            # conjecture is final
            if cmp.equal or cmp.computed_outside:
                break
        elif prev_dim is not None and space.dim == prev_dim:
            break
        prev_dim = space.dim
        if k < rounds:
            ansatz = ansatz.doubled()
    rep.say(f"Theta-space: dimension {space.dim} (deg <= {args.deg}, bounds {_bounds(space.ansatz)})")
    _report_space(rep, space, "x")
    if cmp is not None:
        _say_comparison(rep, cmp, args.compare)


def _say_comparison(rep: Report, cmp, which: str):
    rep.say(f"{which}: computed {cmp.dim_computed} vs conjectured {cmp.dim_conjectured}, "
            f"relation {cmp.relation}")
    for m in cmp.computed_outside:
        rep.say(f"  computed, not in {which}: {m.to_text()}")
    for m in cmp.conjectured_outside:
        rep.say(f"  in {which}, not computed: {m.to_text()}")
    if cmp.equal:
        rep.status = "equal"
    else:
        rep.fail(cmp.relation)


def _x_poly(text: str, what: str) -> BiPoly:
    try:
        v = parse_expr(text)
    except DSLError as exc:
        raise UsageError(f"bad {what}: {exc}") from None
    if not isinstance(v, RatFunc) or not v.is_poly() or not v.depends_only_on("x"):
        raise UsageError(f"{what} must be a polynomial in x")
    return v.as_poly()


def cmd_solve_f(args, rep: Report):
    pf = load_problem(args)
    psi = problem_psi(pf)
    den = _x_poly(args.den, "--den")
    ansatz = LAnsatz(args.l_order, den, args.num_deg)
    rep.bounds_used.append(_bounds(ansatz))
    space = solve_f_space(psi, args.deg, ansatz)
    rep.say(f"F-space: dimension {space.dim} (deg <= {args.deg}, bounds {_bounds(ansatz)})")
    _report_space(rep, space, "z")
    if args.compare:
        cmp = _compare(rep, space, args.compare, args.compare_mode)
        _say_comparison(rep, cmp, args.compare)


def cmd_solve_b(args, rep: Report):
    pf = load_problem(args)
    psi = problem_psi(pf)
    theta = _matrix(pf, args.theta, psi.size)
    ansatz = BAnsatz(args.b_order, args.z_low, args.z_high)
    b, tried = solve_b_escalating(psi, theta, ansatz, rounds=4 if args.escalate else 0)
    rep.bounds_used = [_bounds(t) for t in tried]
    if b is None:
        rep.say(f"no B within bounds {rep.bounds_used[-1]}")
        rep.fail("absent")
        return
    rep.basis.append({"operator": b.to_text()})
    rep.say(f"B = {b.to_text()}")
    rep.status = "found"


def cmd_ad_order(args, rep: Report):
    pf = load_problem(args)
    psi = problem_psi(pf)
    n = psi.size
    l = _operator(pf, args.l_name, n, "x")
    t = DiffOp.mult("x", _matrix(pf, args.t_name, n))
    m = minimal_ad_order(l, t, args.max_m)
    rep.bounds_used.append({"max_m": args.max_m})
    if m is None:
        rep.say(f"(ad {args.l_name})^(m+1)({args.t_name}) != 0 for all m <= {args.max_m}")
        rep.fail("absent")
        return
    rep.dims["m"] = m
    rep.say(f"minimal m = {m}: (ad {args.l_name})^{m + 1}({args.t_name}) = 0")
    rep.status = "ok"


def parse_field(text: Optional[str]) -> Optional[ExtField]:
    """Accept ``Q``, ``Q[a]/(a^2 - a + 1)`` or just the modulus ``a^2 - a + 1``."""
    if not text or text.strip() == "Q":
        return None
    t = text.strip()
    if not t.startswith("Q"):
        t = f"Q[a]/({t})"
    try:
        return parse(f"field {t};").field
    except DSLError as exc:
        raise UsageError(f"bad --field: {exc}") from None


def parse_poles(spec: str, fld: Optional[ExtField]) -> KdVConfig:
    """``p:nu,p:nu,...``; a bare ``p`` means nu = 1."""
    poles = []
    for item in spec.split(","):
        item = item.strip()
        if not item:
            continue
        p_text, _, nu_text = item.partition(":")
        try:
            v = parse_expr(p_text, fld)
            nu = int(nu_text) if nu_text else 1
        except (DSLError, ValueError) as exc:
            raise UsageError(f"bad pole {item!r}: {exc}") from None
        if not isinstance(v, RatFunc) or not v.is_const():
            raise UsageError(f"pole {p_text!r} must be a constant")
        poles.append((v.const_value(), nu))
    if not poles:
        raise UsageError("no poles given")
    try:
        return KdVConfig(tuple(poles), fld)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_kdv(args, rep: Report):
    cfg = parse_poles(args.poles, parse_field(args.field))
    rep.extra["poles"] = [{"p": scalar_text(p), "nu": nu} for p, nu in cfg.poles]
    if args.check:
        res = check_constraints(cfg)
        bad = [(p, j, r) for p, j, r in res if r]
        rep.residuals = []
        for p, j, r in res:
            rep.say(f"p = {scalar_text(p)}, j = {j}: {scalar_text(r)}")
        rep.extra["constraints"] = [{"p": scalar_text(p), "j": j, "value": scalar_text(r)} for p, j, r in res]
        if bad:
            rep.fail("violated")
        else:
            rep.status = "satisfied"
    elif args.tau:
        th = tau(cfg)
        factors = " * ".join(f"(x - ({scalar_text(p)}))^{e}" for p, e in tau_factors(cfg))
        rep.extra["tau"] = th.to_text()
        rep.extra["tau_factors"] = factors
        ok = verify_log_identity(cfg)
        rep.say(f"theta = {factors}")
        rep.say(f"      = {th.to_text()}")
        rep.say(f"V = -2 (log theta)'' : {'holds' if ok else 'FAILS'}")
        if ok:
            rep.status = "ok"
        else:
            rep.fail("failed")
    elif args.dim is not None:
        d = admissible_dim(cfg, args.dim)
        rep.dims["admissible_dim"] = d
        rep.say(f"admissible theta of degree <= {args.dim}: dimension {d}")
    elif args.crosscheck is not None:
        try:
            res = crosscheck_scalar(args.crosscheck, cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rep.bounds_used = [b.as_dict() for b in res.bounds]
        rep.dims.update({"solver_dim": res.solver_dim, "oracle_dim": res.oracle_dim})
        rep.extra["relation"] = res.relation
        rep.say(f"solver {res.solver_dim} vs derivative test {res.oracle_dim}: {res.relation}")
        if res.ok:
            rep.status = "equal"
        else:
            rep.fail(res.relation)
    elif args.theta is not None:
        poly = _x_poly(args.theta, "--theta") if cfg.field is None else _field_poly(args.theta, cfg.field)
        ok = theta_admissible(poly, cfg)
        rep.say(f"theta = {poly.to_text()}: {'admissible' if ok else 'not admissible'}")
        if ok:
            rep.status = "admissible"
        else:
            rep.fail("not_admissible")


def _field_poly(text: str, fld: ExtField) -> BiPoly:
    v = parse_expr(text, fld)
    if not isinstance(v, RatFunc) or not v.is_poly() or not v.depends_only_on("x"):
        raise UsageError("--theta must be a polynomial in x")
    return v.as_poly()


# -- argument parsing -------------------------------------------------------------

def _add_source(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--input", metavar="FILE", help="problem file (.bsp)")
    g.add_argument("--example", type=int, choices=(1, 2, 3), help="built-in example")


def _count(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print one JSON report")
    common.add_argument("--quiet", action="store_true", help="print the status line only")

    ap = argparse.ArgumentParser(prog="bispectral", parents=[common],
                                 description="Exact checks and solvers for bispectral matrix functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check L Psi = Psi F and Psi B = Theta Psi")
    _add_source(p)
    p.add_argument("--b-name", default="B", help="name of the z-operator to check (default B)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve-theta", parents=[common], help="all Theta(x) of bounded degree")
    _add_source(p)
    p.add_argument("--deg", type=_count, required=True)
    p.add_argument("--b-order", type=_count, required=True)
    p.add_argument("--z-low", type=int, required=True)
    p.add_argument("--z-high", type=int, required=True)
    p.add_argument("--compare", choices=("C1", "C2"))
    p.add_argument("--compare-mode", choices=("family", "subspace"), default="family",
                   help="family: conjecture truncated at deg; subspace: its members of degree <= deg")
    p.add_argument("--escalate", action="store_true", help="double the B bounds up to 4 times")
    p.set_defaults(func=cmd_solve_theta)

    p = sub.add_parser("solve-f", parents=[common], help="all F(z) of bounded degree")
    _add_source(p)
    p.add_argument("--deg", type=_count, required=True)
    p.add_argument("--l-order", type=_count, required=True)
    p.add_argument("--den", required=True, metavar="DPOLY", help="common denominator of L, e.g. 'x^4*(x-2)^3'")
    p.add_argument("--num-deg", type=_count, required=True)
    p.add_argument("--compare", choices=("F3",))
    p.add_argument("--compare-mode", choices=("family", "subspace"), default="family")
    p.set_defaults(func=cmd_solve_f)

    p = sub.add_parser("solve-b", parents=[common], help="find B with Psi B = Theta Psi for a given Theta")
    _add_source(p)
    p.add_argument("--theta", default="Theta", metavar="NAME")
    p.add_argument("--b-order", type=_count, required=True)
    p.add_argument("--z-low", type=int, required=True)
    p.add_argument("--z-high", type=int, required=True)
    p.add_argument("--escalate", action="store_true")
    p.set_defaults(func=cmd_solve_b)

    p = sub.add_parser("ad-order", parents=[common], help="minimal m with (ad L)^(m+1)(Theta) = 0")
    _add_source(p)
    p.add_argument("--max-m", type=_count, required=True)
    p.add_argument("--l-name", default="L")
    p.add_argument("--t-name", default="Theta")
    p.set_defaults(func=cmd_ad_order)

    p = sub.add_parser("kdv", parents=[common], help="rational KdV potentials and their tau functions")
    p.add_argument("--poles", required=True, metavar="SPEC", help="e.g. '0:1' or '-1,a,1-a' (p:nu, comma separated)")
    p.add_argument("--field", help="Q or Q[a]/(a^2 - a + 1)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--check", action="store_true", help="check the pole constraints")
    g.add_argument("--tau", action="store_true", help="print theta and check V = -2 (log theta)''")
    g.add_argument("--dim", type=_count, metavar="N", help="dimension of admissible theta, deg <= N")
    g.add_argument("--crosscheck", type=_count, metavar="N", help="compare with the matrix solver (one pole)")
    g.add_argument("--theta", metavar="POLY", help="test one polynomial for admissibility")
    p.set_defaults(func=cmd_kdv)
    return ap


def execute(args: argparse.Namespace) -> Report:
    rep = Report(args.command)
    t0 = time.perf_counter()
    try:
        args.func(args, rep)
    except (UsageError, DSLError) as exc:
        rep = error_report(args.command, str(exc))
    rep.ms = int(round((time.perf_counter() - t0) * 1000))
    return rep


def run(argv: List[str]) -> Report:
    """Parse and execute; argparse usage errors raise SystemExit(2)."""
    return execute(build_parser().parse_args(argv))


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    rep = execute(args)
    out = sys.stderr if rep.exit_code == EXIT_USAGE else sys.stdout
    print(rep.to_json() if args.json else rep.to_text(args.quiet), file=out)
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
