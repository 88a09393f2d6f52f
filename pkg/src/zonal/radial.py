"""Radial second-order operator on symmetric (Laurent) polynomials.

With ``x_j = exp(i q_j)`` we have ``d/dq_j = i x_j d/dx_j``, so every
convention below acts on exact polynomials.  The first-order parts carry
the singular factors ``1/(x_j - x_k)``; they are applied through
:func:`exact_quotient`, which succeeds because the numerators are
antisymmetric in ``(j, k)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import DimensionMismatch, NotSymmetric
from .exact import Poly, exact_quotient


class Convention(str, enum.Enum):
    LITERAL = "literal"  # 2k cot(q_j - q_k) (d_j - d_k)
    HALF_ANGLE = "half"  # 2k cot((q_j - q_k)/2) (d_j - d_k)
    JACK = "jack"  # sum x^2 d^2 + sum_{i!=j} x_i^2/(x_i - x_j) d_i


@dataclass(frozen=True)
class OperatorSpec:
    convention: Convention = Convention.JACK
    kappa: Fraction = Fraction(1, 2)
    N: int = 3

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention(self.convention))
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")


def _check_input(spec: OperatorSpec, p: Poly):
    if p.nvars != spec.N:
        raise DimensionMismatch(f"operator on {spec.N} variables applied to {p.nvars}")
    if not p.is_symmetric():
        raise NotSymmetric(f"{p} is not symmetric")


def _radial_cleared(spec: OperatorSpec, p: Poly) -> tuple[Poly, Poly]:
    """Return ``(numer, denom)`` with ``L p = numer / denom`` exactly."""
    _check_input(spec, p)
    n = spec.N
    x = Poly.gens(p.vars)
    one = Poly.const(p.vars, 1)
    pairs = list(combinations(range(n), 2))

    if spec.convention is Convention.JACK:
        out = sum((x[j] ** 2 * p.diff(j).diff(j) for j in range(n)), Poly(p.vars))
        for i, j in pairs:
            num = x[i] ** 2 * p.diff(i) - x[j] ** 2 * p.diff(j)
            out = out + exact_quotient(num, x[i] - x[j])
        return out, one

    euler = [p.euler(j) for j in range(n)]
    second = -sum((euler[j].euler(j) for j in range(n)), Poly(p.vars))
    two_k = 2 * spec.kappa

    if spec.convention is Convention.HALF_ANGLE:
        out = second
        for j, k in pairs:
            q = exact_quotient(euler[j] - euler[k], x[j] - x[k])
            out = out - two_k * (x[j] + x[k]) * q
        return out, one

    # (x_j^2 + x_k^2)/(x_j^2 - x_k^2) leaves (x_j + x_k) in the denominator,
    # so clear it with the product over all pairs.
    denom = one
    for j, k in pairs:
        denom = denom * (x[j] + x[k])
    out = second * denom
    for j, k in pairs:
        q = exact_quotient(euler[j] - euler[k], x[j] - x[k])
        cofactor = exact_quotient(denom, x[j] + x[k])
        out = out - two_k * (x[j] ** 2 + x[k] ** 2) * q * cofactor
    return out, denom


def apply_radial(spec: OperatorSpec, p: Poly) -> Poly:
    """Apply the operator exactly.

    Raises :class:`NotSymmetric` for non-symmetric input and
    :class:`NotDivisible` when the image is not a Laurent polynomial (the
    literal convention on most inputs).
    """
    numer, denom = _radial_cleared(spec, p)
    if denom == 1:
        return numer
    return exact_quotient(numer, denom)


@dataclass(frozen=True)
class EigenResult:
    eigenvalue: Fraction | None = None
    residual: Poly | None = None
    denominator: Poly | None = None

    @property
    def ok(self) -> bool:
        return self.eigenvalue is not None

    def to_json(self) -> dict:
        if self.ok:
            return {
                "eigenvalue": {
                    "num": str(self.eigenvalue.numerator),
                    "den": str(self.eigenvalue.denominator),
                }
            }
        return {"residual": self.residual.to_json()}


def eigencheck(spec: OperatorSpec, p: Poly) -> EigenResult:
    """Decide whether ``p`` is an exact eigenfunction.

    The trial eigenvalue is the ratio of graded-lex leading coefficients.
    On failure the residual ``numer - lam * denom * p`` is reported, i.e.
    ``(L p - lam p)`` multiplied by the cleared denominator (1 unless the
    literal convention needs one).
    """
    if p.is_zero():
        raise ValueError("eigencheck needs a nonzero polynomial")
    numer, denom = _radial_cleared(spec, p)
    target = denom * p
    e, c = target.leading()
    lam = numer.coeff(e) / c
    residual = numer - target * lam
    if residual.is_zero():
        return EigenResult(eigenvalue=lam)
    return EigenResult(residual=residual, denominator=denom)


def jack_eigenvalue(partition, N: int) -> Fraction:
    """Closed-form eigenvalue of the Jack-form operator on the zonal polynomial
    of ``partition``: ``sum k_i (k_i - i) + |k| (N - 1)``."""
    parts = [int(v) for v in partition]
    rho = sum(k * (k - i) for i, k in enumerate(parts, start=1))
    return Fraction(rho + sum(parts) * (N - 1))
