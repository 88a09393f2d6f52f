"""Generating functions for N=2 and N=3.

For N=3 the generating function is the one-dimensional integral

    F(x; t1, t2) = int_0^1 H(x; t1, t2, xi)^(-1/2) dxi,
    H = prod_j (a0 - x_j tau1 - tau2 / x_j),

with ``u = 1 - xi^2``, ``tau = u t`` and ``a0 = 1 + u t1 t2``, valid on the
unimodular variety ``x1 x2 x3 = 1``.  The same integral expanded in
``t1, t2`` and integrated term by term gives the Phi_pq exactly in the
elementary variables ``z1, z2``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from scipy import integrate

from .errors import (
    BranchAmbiguity,
    BranchCut,
    ConstraintViolated,
    CostGuard,
    InternalMismatch,
    ToleranceNotMet,
)
from .exact import EvalPoint, Poly, from_elementary_basis, pochhammer, to_elementary_basis, x_vars

T_MAX = 0.9
SERIES_MAX_ORDER = 16


@dataclass(frozen=True)
class GenFunParams:
    t1: complex
    t2: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "t1", complex(self.t1))
        if self.t2 is not None:
            object.__setattr__(self, "t2", complex(self.t2))
        if max(abs(self.t1), abs(self.t2 or 0)) > T_MAX:
            raise ValueError(f"|t| must not exceed {T_MAX}")


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error_estimate: float
    nodes: int

    def to_json(self) -> dict:
        return {
            "value_re": self.value.real,
            "value_im": self.value.imag,
            "error": self.error_estimate,
            "nodes": self.nodes,
        }


@dataclass(frozen=True)
class IntegrandState:
    xi: float
    u: float
    tau1: complex
    tau2: complex
    a0: complex
    d: tuple
    e: tuple
    H: complex
    H0: complex
    H1: complex


def closed_form_n2(x1: complex, x2: complex, t: complex) -> complex:
    """``[(1 - x1 t)(1 - x2 t)]^(-1/2)`` on the principal branch."""
    w = (1 - x1 * t) * (1 - x2 * t)
    if w.imag == 0 and w.real <= 0:
        raise BranchCut(f"(1-x1 t)(1-x2 t) = {w} lies on the branch cut")
    return 1 / cmath.sqrt(w)


def _unimodular_coords(x) -> tuple[complex, complex, complex]:
    coords = x.coords if isinstance(x, EvalPoint) else tuple(complex(c) for c in x)
    if len(coords) != 3:
        raise ConstraintViolated("the N=3 generating function needs three coordinates")
    if abs(coords[0] * coords[1] * coords[2] - 1) > 1e-12:
        raise ConstraintViolated(f"x1 x2 x3 = {coords[0] * coords[1] * coords[2]} != 1")
    return coords


def _z(coords) -> tuple[complex, complex]:
    x1, x2, x3 = coords
    return x1 + x2 + x3, x1 * x2 + x2 * x3 + x3 * x1


def h_expanded(z1, z2, tau1, tau2, a0):
    """H written through ``z1 = e1(x)``, ``z2 = e2(x)`` with ``e3(x) = 1``.

    Works for numbers and for :class:`Poly` arguments alike.
    """
    return (
        a0 ** 3
        - a0 ** 2 * (z1 * tau1 + z2 * tau2)
        + a0 * (z2 * tau1 ** 2 + z1 * tau2 ** 2 + (z1 * z2 - 3) * tau1 * tau2)
        - (
            tau1 ** 3
            + tau2 ** 3
            + tau1 * tau2 * ((z2 ** 2 - 2 * z1) * tau1 + (z1 ** 2 - 2 * z2) * tau2)
        )
    )


def h0(z1, z2, tau1):
    return 1 - z1 * tau1 + z2 * tau1 ** 2 - tau1 ** 3


def h1(z1, z2, tau1, xi):
    """Minus the t2-derivative of H at t2 = 0."""
    s = xi * xi
    u = 1 - s
    return (
        u * z2
        - (3 * s + z1 * z2 * u) * tau1
        + (2 * z1 * s + u * z2 ** 2) * tau1 ** 2
        - z2 * tau1 ** 3
    )


def integrand_state(x, params: GenFunParams, xi: float) -> IntegrandState:
    coords = _unimodular_coords(x)
    t1, t2 = params.t1, params.t2 or 0j
    u = 1.0 - xi * xi
    tau1, tau2 = u * t1, u * t2
    a0 = 1 + u * t1 * t2
    d = tuple(xj * t1 + t2 / xj - t1 * t2 for xj in coords)
    e = tuple(a0 - xj * tau1 - tau2 / xj for xj in coords)
    z1, z2 = _z(coords)
    return IntegrandState(
        xi=xi,
        u=u,
        tau1=tau1,
        tau2=tau2,
        a0=a0,
        d=d,
        e=e,
        H=e[0] * e[1] * e[2],
        H0=h0(z1, z2, tau1),
        H1=h1(z1, z2, tau1, xi),
    )


def integrand_H(x, params: GenFunParams, xi: float) -> complex:
    """H at one node, cross-checked between product and z-expanded forms."""
    st = integrand_state(x, params, xi)
    z1, z2 = _z(_unimodular_coords(x))
    expanded = h_expanded(z1, z2, st.tau1, st.tau2, st.a0)
    scale = max(1.0, abs(st.H), abs(z1) ** 3, abs(z2) ** 3)
    if abs(expanded - st.H) > 1e-12 * scale:
        raise InternalMismatch(f"H product {st.H} != expansion {expanded}")
    return st.H


def _principal_rsqrt(h: complex, power: float, xi: float) -> complex:
    if h.real <= 0:
        raise BranchAmbiguity(f"Re H = {h.real} <= 0 at xi = {xi}")
    return h ** (-power)


def _quad(f, tol: float) -> QuadratureResult:
    if not tol > 1.2e-14:
        raise ValueError("tolerance must exceed 1.2e-14")
    val, err, info = integrate.quad(
        f, 0.0, 1.0, epsabs=0.0, epsrel=tol, limit=200, complex_func=True, full_output=True
    )
    # QUADPACK flags a vanishing imaginary part as not converged, so judge
    # by the combined error estimate only
    err = abs(err.real) + abs(err.imag) if isinstance(err, complex) else abs(err)
    nodes = info["real"][0]["neval"] + info["imag"][0]["neval"]
    if not math.isfinite(err) or err > tol * max(abs(val), 1e-300):
        raise ToleranceNotMet(f"estimated error {err:.3e} exceeds {tol:.1e} relative")
    return QuadratureResult(complex(val), float(err), int(nodes))


def quad_F(x, params: GenFunParams, tol: float = 1e-10) -> QuadratureResult:
    """Adaptive quadrature of ``H^(-1/2)`` over ``xi in [0, 1]``."""
    if params.t2 is None:
        params = GenFunParams(params.t1, 0)
    _unimodular_coords(x)

    def f(xi):
        return _principal_rsqrt(integrand_H(x, params, xi), 0.5, xi)

    return _quad(f, tol)


def quad_F0(x, t1: complex, tol: float = 1e-10) -> QuadratureResult:
    z1, z2 = _z(_unimodular_coords(x))
    t1 = complex(t1)

    def f(xi):
        return _principal_rsqrt(h0(z1, z2, (1 - xi * xi) * t1), 0.5, xi)

    return _quad(f, tol)


def quad_F1(x, t1: complex, tol: float = 1e-10) -> QuadratureResult:
    z1, z2 = _z(_unimodular_coords(x))
    t1 = complex(t1)

    def f(xi):
        tau1 = (1 - xi * xi) * t1
        return 0.5 * h1(z1, z2, tau1, xi) * _principal_rsqrt(h0(z1, z2, tau1), 1.5, xi)

    return _quad(f, tol)


def bc_substitution_check(B: float, C: float, tol: float = 1e-10) -> bool:
    """Check ``1/(B sqrt C) = int_0^1 [B(1-xi^2) + C xi^2]^(-3/2) dxi`` numerically."""
    if B <= 0 or C <= 0:
        raise ValueError("B and C must be positive")
    val, _ = integrate.quad(
        lambda s: (B * (1 - s * s) + C * s * s) ** -1.5, 0.0, 1.0, epsabs=0.0, epsrel=1e-13
    )
    exact = 1 / (B * math.sqrt(C))
    return abs(val - exact) <= tol * exact


def asymptotic_coefficient(p: int, q: int) -> Fraction:
    """Coefficient of ``z1^p z2^q`` in Phi_pq."""
    half = Fraction(1, 2)
    return (
        pochhammer(half, p) * pochhammer(half, q) / (pochhammer(1, p) * pochhammer(1, q))
        * pochhammer(1, p + q) / pochhammer(Fraction(3, 2), p + q)
    )


# Exact series extraction.

_HVARS = ("t1", "t2", "u", "z1", "z2")
_ZVARS = ("z1", "z2")


@lru_cache(maxsize=None)
def xi_moment(c: int) -> Fraction:
    """``int_0^1 (1 - xi^2)^c dxi = 4^c (c!)^2 / (2c+1)!``."""
    return Fraction(4 ** c * math.factorial(c) ** 2, math.factorial(2 * c + 1))


def h_polynomial() -> Poly:
    """H as an exact polynomial in ``(t1, t2, u, z1, z2)``."""
    t1, t2, u, z1, z2 = Poly.gens(_HVARS)
    return h_expanded(z1, z2, u * t1, u * t2, 1 + u * t1 * t2)


def _mul_trunc(a: dict, b: dict, pmax: int, qmax: int, total: int) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            p, q = e1[0] + e2[0], e1[1] + e2[1]
            if p > pmax or q > qmax or p + q > total:
                continue
            e = tuple(i + j for i, j in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def series_extract(pmax: int, qmax: int, max_total: int | None = None) -> dict:
    """Exact ``Phi_pq(z1, z2)`` for ``p <= pmax``, ``q <= qmax`` (and
    ``p + q <= max_total`` when given).

    ``H - 1`` has no t-free term, so the binomial series of ``H^(-1/2)``
    truncates at order ``pmax + qmax``; each ``u^c`` is then replaced by
    its exact xi-integral.
    """
    total = pmax + qmax if max_total is None else min(max_total, pmax + qmax)
    if pmax < 0 or qmax < 0:
        raise ValueError("pmax, qmax must be nonnegative")
    if total > SERIES_MAX_ORDER:
        raise CostGuard(f"series_extract supports total order <= {SERIES_MAX_ORDER}")
    hm1 = dict((h_polynomial() - 1).terms)
    hm1 = {e: c for e, c in hm1.items() if e[0] <= pmax and e[1] <= qmax and e[0] + e[1] <= total}
    acc = {(0,) * 5: Fraction(1)}
    power = {(0,) * 5: Fraction(1)}
    binom = Fraction(1)
    for n in range(1, total + 1):
        power = _mul_trunc(power, hm1, pmax, qmax, total)
        binom *= (Fraction(-1, 2) - (n - 1)) / n
        for e, c in power.items():
            acc[e] = acc.get(e, 0) + binom * c
    out: dict[tuple[int, int], dict] = {}
    for (p, q, c, a, b), v in acc.items():
        cell = out.setdefault((p, q), {})
        cell[(a, b)] = cell.get((a, b), 0) + v * xi_moment(c)
    table = {}
    for p in range(pmax + 1):
        for q in range(qmax + 1):
            if p + q <= total:
                table[(p, q)] = Poly(_ZVARS, out.get((p, q), {}))
    return table


def phi_pq_z(p: int, q: int) -> Poly:
    """Phi_pq in ``(z1, z2)`` with ``z3 = 1``."""
    return series_extract(p, q)[(p, q)]


@lru_cache(maxsize=None)
def phi_pq(p: int, q: int) -> Poly:
    """Phi_pq as the homogeneous degree ``p + 2q`` polynomial in ``x1, x2, x3``."""
    return from_elementary_basis(phi_pq_z(p, q), 3, degree=p + 2 * q)


def series_value(table: dict, z1: complex, z2: complex, t1: complex, t2: complex) -> complex:
    """Sum ``Phi_pq(z1, z2) t1^p t2^q`` over a table from :func:`series_extract`."""
    terms = []
    for (p, q), poly in sorted(table.items()):
        terms.append(poly(z1, z2) * t1 ** p * t2 ** q)
    return complex(math.fsum(v.real for v in terms), math.fsum(v.imag for v in terms))


def h_identity() -> tuple[Poly, Poly]:
    """Both sides of the H identity as polynomials in ``(z1, z2, a0, tau1, tau2)``.

    The left side expands ``prod_j (a0 - x_j tau1 - tau2/x_j)`` in x and
    rewrites every coefficient through the elementary basis with
    ``x1 x2 x3 = 1``; the right side is :func:`h_expanded`.
    """
    names = x_vars(3) + ("a0", "tau1", "tau2")
    g = Poly.gens(names)
    x, a0, tau1, tau2 = g[:3], g[3], g[4], g[5]
    prod = Poly.const(names, 1)
    for xj in x:
        prod = prod * (a0 - xj * tau1 - tau2 * xj ** -1)
    groups: dict[tuple, dict] = {}
    for e, c in prod.terms.items():
        groups.setdefault(e[3:], {})[e[:3]] = c
    out_vars = ("z1", "z2", "a0", "tau1", "tau2")
    lhs = {}
    for rest, terms in groups.items():
        zpoly = to_elementary_basis(Poly(x_vars(3), terms), unimodular=True)
        for ze, c in zpoly.terms.items():
            lhs[ze + rest] = lhs.get(ze + rest, 0) + c
    z1, z2, a0_, t1_, t2_ = Poly.gens(out_vars)
    rhs = h_expanded(z1, z2, t1_, t2_, a0_)
    return Poly(out_vars, lhs), rhs
