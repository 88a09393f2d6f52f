"""Zonal spherical polynomials from closed-form coefficients, with oracles.

The constructive route uses the sphere moments
``<n1^2k1 ... nN^2kN> = prod (1/2)_kj / (N/2)_l``.  The oracles integrate
over SO(3) directly in Euler angles and never touch those formulas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import CostGuard, InternalMismatch
from .exact import Poly, pochhammer, x_vars

HALF = Fraction(1, 2)
ORACLE_MAX_DEGREE = 6


@dataclass(frozen=True)
class WeightLabel:
    """Highest-weight label ``l = (l1, ..., l_{N-1})``; ``(p, q)`` for N=3."""

    N: int
    parts: tuple

    def __post_init__(self):
        parts = tuple(int(v) for v in self.parts)
        object.__setattr__(self, "parts", parts)
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if len(parts) != self.N - 1:
            raise ValueError(f"label for N={self.N} needs {self.N - 1} parts, got {len(parts)}")
        if any(v < 0 for v in parts):
            raise ValueError("label parts must be nonnegative")

    @classmethod
    def pq(cls, p: int, q: int) -> "WeightLabel":
        return cls(3, (p, q))

    @classmethod
    def fundamental(cls, N: int, l: int) -> "WeightLabel":
        return cls(N, (l,) + (0,) * (N - 2))

    @property
    def p(self) -> int:
        return self.parts[0]

    @property
    def q(self) -> int:
        return self.parts[1]

    def degree(self) -> int:
        """Total x-degree of the homogeneous polynomial form."""
        return sum((j + 1) * v for j, v in enumerate(self.parts))

    def partition(self) -> tuple[int, ...]:
        """Row lengths ``(l1+...+l_{N-1}, l2+..., ..., 0)``."""
        return tuple(sum(self.parts[j:]) for j in range(self.N - 1)) + (0,)


@dataclass(frozen=True)
class SeriesTable:
    label: WeightLabel
    entries: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "N": self.label.N,
            "label": list(self.label.parts),
            "coefficients": [
                {"k": list(k), "num": str(c.numerator), "den": str(c.denominator)}
                for k, c in sorted(self.entries.items(), reverse=True)
            ],
        }


def compositions(total: int, parts: int):
    """All ``parts``-tuples of nonnegative integers summing to ``total``, lex-descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def sphere_moment(N: int, k: Sequence[int]) -> Fraction:
    """``<n1^(2k1) ... nN^(2kN)>`` over the normalized sphere S^(N-1)."""
    if len(k) != N:
        raise ValueError("need one exponent per coordinate")
    num = Fraction(1)
    for kj in k:
        num *= pochhammer(HALF, kj)
    return num / pochhammer(Fraction(N, 2), sum(k))


def series_coefficient(N: int, k: Sequence[int]) -> Fraction:
    if len(k) != N:
        raise ValueError("need one exponent per coordinate")
    c = Fraction(1)
    for kj in k:
        c *= pochhammer(HALF, kj) / pochhammer(1, kj)
    l = sum(k)
    return c * pochhammer(1, l) / pochhammer(Fraction(N, 2), l)


def series_table(N: int, l: int) -> SeriesTable:
    return SeriesTable(
        WeightLabel.fundamental(N, l),
        {k: series_coefficient(N, k) for k in compositions(l, N)},
    )


@lru_cache(maxsize=None)
def phi_fundamental(N: int, l: int) -> Poly:
    """Phi for the weight ``(l, 0, ..., 0)``: homogeneous, symmetric, degree l."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    return Poly(x_vars(N), {k: series_coefficient(N, k) for k in compositions(l, N)})


def phi_n2(l: int) -> Poly:
    """Two-variable Phi_l; equals P_l(cos t) at ``(e^(it), e^(-it))``."""
    return phi_fundamental(2, l)


def legendre(l: int, u: float) -> float:
    """Legendre polynomial by the Bonnet recurrence."""
    if l < 0:
        raise ValueError("l must be nonnegative")
    if u == 1.0:
        return 1.0
    if u == -1.0:
        return -1.0 if l % 2 else 1.0
    prev, cur = 1.0, u
    if l == 0:
        return prev
    for n in range(1, l):
        prev, cur = cur, ((2 * n + 1) * u * cur - n * prev) / (n + 1)
    return cur


# SO(3) oracle: exact Euler-angle integration.

_TRIG = ("cphi", "sphi", "ctheta", "stheta", "cpsi", "spsi")


@lru_cache(maxsize=None)
def _frame_trig() -> tuple[tuple[Poly, ...], tuple[Poly, ...]]:
    cf, sf, ct, st, cp, sp = Poly.gens(_TRIG)
    n = (cf * st, sf * st, ct)
    a = (-sf, cf, Poly.const(_TRIG, 0))
    b = (-cf * ct, -sf * ct, st)
    m = tuple(cp * ai + sp * bi for ai, bi in zip(a, b))
    return n, m


def _double_factorial(k: int) -> int:
    return math.prod(range(k, 0, -2)) if k > 0 else 1


def _circle_mean(a: int, b: int) -> Fraction:
    """``(1/2pi) int_0^{2pi} cos^a sin^b``."""
    if a % 2 or b % 2:
        return Fraction(0)
    return Fraction(_double_factorial(a - 1) * _double_factorial(b - 1), _double_factorial(a + b))


def _theta_mean(c: int, s: int) -> tuple[Fraction, Fraction]:
    """``(1/2) int_0^pi cos^c sin^(s+1)`` as ``(rational, coefficient of pi)``."""
    if c % 2:
        return Fraction(0), Fraction(0)
    e = s + 1
    # Wallis: int_0^pi = 2 int_0^{pi/2}, which carries pi/2 iff e is even
    val = Fraction(_double_factorial(c - 1) * _double_factorial(e - 1), _double_factorial(c + e))
    if e % 2:
        return val, Fraction(0)
    return Fraction(0), val / 2


@lru_cache(maxsize=None)
def so3_moment_oracle(exponents: tuple) -> Fraction:
    """Exact Haar average over SO(3) of ``prod n_i^a_i m_i^b_i``.

    ``exponents`` is ``((a1, b1), (a2, b2), (a3, b3))``.  The integrand is
    expanded as a trigonometric polynomial in the Euler angles and each
    angle integrated in closed form with the normalized density
    ``sin(theta) dtheta dphi dpsi / (8 pi^2)``.
    """
    exps = tuple(tuple(int(v) for v in row) for row in exponents)
    if len(exps) != 3 or any(len(r) != 2 for r in exps):
        raise ValueError("exponents must be a 3x2 table")
    n, m = _frame_trig()
    f = Poly.const(_TRIG, 1)
    for i, (a, b) in enumerate(exps):
        if a:
            f = f * n[i] ** a
        if b:
            f = f * m[i] ** b
    rational, pi_part = Fraction(0), Fraction(0)
    for (cf, sf, ct, st, cp, sp), c in f.sorted_terms():
        outer = _circle_mean(cf, sf) * _circle_mean(cp, sp)
        if not outer:
            continue
        r, p = _theta_mean(ct, st)
        rational += c * outer * r
        pi_part += c * outer * p
    if pi_part:
        raise InternalMismatch(f"non-rational SO(3) moment for {exps}")
    return rational


def _multinomial(k: Sequence[int]) -> int:
    out, total = 1, 0
    for v in k:
        total += v
        out *= math.comb(total, v)
    return out


@lru_cache(maxsize=None)
def phi_pq_oracle(p: int, q: int) -> Poly:
    """Phi_pq by term-wise SO(3) integration of ``Xi1^p Xi2^q``.

    ``Xi2 = m1^2 x2 x3 + m2^2 x1 x3 + m3^2 x1 x2`` (wedge form), so the
    result is homogeneous of degree ``p + 2q``.
    """
    if p < 0 or q < 0:
        raise ValueError("p, q must be nonnegative")
    if p + q > ORACLE_MAX_DEGREE:
        raise CostGuard(f"phi_pq_oracle supports p+q <= {ORACLE_MAX_DEGREE}")
    terms: dict[tuple, Fraction] = {}
    for k in compositions(p, 3):
        for j in compositions(q, 3):
            mom = so3_moment_oracle(tuple((2 * k[i], 2 * j[i]) for i in range(3)))
            if not mom:
                continue
            e = tuple(k[i] + q - j[i] for i in range(3))
            terms[e] = terms.get(e, 0) + _multinomial(k) * _multinomial(j) * mom
    return Poly(x_vars(3), terms)


def sphere_moment_by_enumeration(N: int, k: Sequence[int]) -> Fraction:
    """Sphere moment from the Gaussian-ratio identity, as an independent check.

    ``E[prod g_j^(2k_j)] = E[|g|^(2l)] <prod n_j^(2k_j)>`` for standard normal
    ``g``; Gaussian moments are double factorials and
    ``E|g|^(2l) = prod_{i<l} (N + 2i)``.
    """
    num = math.prod(_double_factorial(2 * kj - 1) for kj in k)
    den = math.prod(N + 2 * i for i in range(sum(k)))
    return Fraction(num, den)
