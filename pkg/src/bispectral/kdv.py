"""Scalar rational KdV potentials V(x) = sum_p nu_p(nu_p+1)/(x-p)^2.

Covers the pole constraints, the tau function theta(x) = prod (x-p)^{nu(nu+1)/2},
the identity V = -2 (theta'/theta)', and the description of admissible
eigenvalues theta(x) by vanishing odd derivatives at the poles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from . import upoly
from .expkernel import ExpKernel
from .linalg import rank
from .matrix import MatRF
from .poly import BiPoly
from .ratfunc import RatFunc
from .scalar import ExtElem, ExtField, inverse, to_scalar
from .solver import BAnsatz, compare_spaces, solve_theta_space


@dataclass(frozen=True)
class KdVConfig:
    """Distinct poles p with multiplicities nu_p >= 1 (poles in Q or one extension)."""

    poles: Tuple[Tuple[object, int], ...]
    field: Optional[ExtField] = None

    def __post_init__(self):
        poles = tuple((to_scalar(p), int(nu)) for p, nu in self.poles)
        object.__setattr__(self, "poles", poles)
        seen = []
        for p, nu in poles:
            if nu < 1:
                raise ValueError(f"multiplicity must be positive, got {nu} at {p}")
            if any(p == q for q in seen):
                raise ValueError(f"repeated pole {p}")
            seen.append(p)
            if isinstance(p, ExtElem) and self.field is None:
                object.__setattr__(self, "field", p.field)

    @classmethod
    def of(cls, *poles, field: Optional[ExtField] = None) -> "KdVConfig":
        return cls(tuple(poles), field)

    @property
    def total_multiplicity(self) -> int:
        return sum(nu for _, nu in self.poles)


def cube_roots_of_minus_one() -> KdVConfig:
    """Poles -1, a, 1 - a in Q[a]/(a^2 - a + 1), each with nu = 1."""
    k = ExtField([1, -1, 1], "a")
    a = k.gen()
    return KdVConfig(((-1, 1), (a, 1), (1 - a, 1)), k)


def _weight(nu: int) -> int:
    return nu * (nu + 1)


def check_constraints(cfg: KdVConfig) -> List[Tuple[object, int, object]]:
    """(p, j, sum_{q != p} nu_q(nu_q+1)/(q-p)^(2j+1)) for 1 <= j <= nu_p."""
    out = []
    for p, nu in cfg.poles:
        for j in range(1, nu + 1):
            acc = Fraction(0)
            for q, mu in cfg.poles:
                if q == p:
                    continue
                acc = acc + _weight(mu) * inverse((q - p) ** (2 * j + 1))
            out.append((p, j, to_scalar(acc)))
    return out


def in_kdv_family(cfg: KdVConfig) -> bool:
    return all(not r for _, _, r in check_constraints(cfg))


def tau_factors(cfg: KdVConfig) -> List[Tuple[object, int]]:
    """Product form of the tau function: pairs (p, nu_p(nu_p+1)/2)."""
    return [(p, _weight(nu) // 2) for p, nu in cfg.poles]


def tau(cfg: KdVConfig) -> BiPoly:
    """The expanded tau polynomial prod_p (x - p)^{nu_p(nu_p+1)/2}."""
    out = BiPoly.const(1)
    for p, e in tau_factors(cfg):
        out = out * (BiPoly.x() - BiPoly.const(p)) ** e
    return out


def potential(cfg: KdVConfig) -> RatFunc:
    v = RatFunc()
    x = RatFunc.x()
    for p, nu in cfg.poles:
        v = v + RatFunc.const(_weight(nu)) / (x - RatFunc.const(p)) ** 2
    return v


def log_potential(cfg: KdVConfig) -> RatFunc:
    """-2 (theta'/theta)' computed from the expanded tau function."""
    th = RatFunc(tau(cfg))
    return (th.derivative("x") / th).derivative("x").scale(-2)


def verify_log_identity(cfg: KdVConfig) -> bool:
    return potential(cfg) == log_potential(cfg)


def _as_coeffs(theta) -> list:
    if isinstance(theta, RatFunc):
        theta = theta.as_poly()
    if isinstance(theta, BiPoly):
        return theta.univariate("x") if theta else []
    return [to_scalar(c) for c in theta]


def theta_admissible(theta, cfg: KdVConfig) -> bool:
    """theta^(2j-1)(p) = 0 for 1 <= j <= nu_p at every pole p."""
    coeffs = _as_coeffs(theta)
    for p, nu in cfg.poles:
        d = coeffs
        for k in range(1, 2 * nu):
            d = upoly.deriv(d)
            if k % 2 == 1 and upoly.evaluate(d, p):
                return False
    return True


def condition_rows(cfg: KdVConfig, deg: int) -> List[List[object]]:
    """One row per condition; column k holds d^(2j-1)/dx^(2j-1) x^k at p."""
    rows = []
    for p, nu in cfg.poles:
        for j in range(1, nu + 1):
            m = 2 * j - 1
            row = []
            for k in range(deg + 1):
                if k < m:
                    row.append(Fraction(0))
                else:
                    falling = 1
                    for t in range(m):
                        falling *= k - t
                    row.append(to_scalar(falling * (p ** (k - m) if k > m else 1)))
            rows.append(row)
    return rows


def admissible_dim(cfg: KdVConfig, deg: int) -> int:
    rows = condition_rows(cfg, deg)
    return deg + 1 - rank(rows, deg + 1)


def admissible_basis(cfg: KdVConfig, deg: int) -> List[BiPoly]:
    """Echelon basis of admissible polynomials of degree <= deg (rational poles)."""
    from .linalg import LinearSystem, nullspace

    system = LinearSystem(deg + 1)
    for row in condition_rows(cfg, deg):
        system.add_row(dict(enumerate(row)))
    return [BiPoly.from_univariate(v, "x") for v in nullspace(system)]


# -- cross-check against the matrix machinery -------------------------------

@dataclass
class CrosscheckResult:
    ok: bool
    deg: int
    solver_dim: int
    oracle_dim: int
    relation: str
    bounds: List[BAnsatz] = field(default_factory=list)

    def __bool__(self):
        return self.ok


def one_pole_kernel(p=0) -> ExpKernel:
    """psi = e^{xz}(z - 1/(x - p)), eigenfunction of -d^2 + 2/(x-p)^2."""
    x, z = RatFunc.x(), RatFunc.z()
    return ExpKernel(MatRF([[z - 1 / (x - RatFunc.const(p))]]))


def crosscheck_scalar(deg: int, cfg: Optional[KdVConfig] = None, rounds: int = 4) -> CrosscheckResult:
    """Compare the solver's Theta-space for the one-pole psi with the derivative test.

    Bounds start at order max(deg, 1) with z-exponents down to -max(deg, 1)
    and double until the spaces agree.  Any solver element outside the
    oracle space fails immediately, since enlarging bounds cannot remove it.
    """
    cfg = cfg or KdVConfig(((0, 1),))
    if len(cfg.poles) != 1 or cfg.poles[0][1] != 1 or isinstance(cfg.poles[0][0], ExtElem):
        raise ValueError("cross-check is implemented for a single rational pole with nu = 1")
    p = cfg.poles[0][0]
    psi = one_pole_kernel(p)
    oracle = [MatRF([[RatFunc(b)]]) for b in admissible_basis(cfg, deg)]
    k = max(deg, 1)
    ansatz = BAnsatz(k, -k, 0)
    tried = []
    relation = "incomparable"
    dim = 0
    for _ in range(rounds + 1):
        tried.append(ansatz)
        space = solve_theta_space(psi, deg, ansatz)
        cmp = compare_spaces(space, oracle)
        relation, dim = cmp.relation, space.dim
        if relation == "equal" or cmp.computed_outside:
            break
        ansatz = ansatz.doubled()
    return CrosscheckResult(relation == "equal", deg, dim, len(oracle), relation, tried)
