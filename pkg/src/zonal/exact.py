"""Exact rational arithmetic and sparse multivariate Laurent polynomials.

Coefficients are :class:`fractions.Fraction`; a polynomial is an immutable
map from exponent tuples (one slot per variable, negative entries allowed)
to nonzero coefficients.  Terms are ordered graded-lexicographically
whenever order matters (leading terms, serialization, evaluation).
"""
from __future__ import annotations

import cmath
import heapq
import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConstraintViolated,
    DimensionMismatch,
    NotDivisible,
    NotSymmetric,
    ZeroCoordinate,
)

Exp = tuple


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``; ``k = 0`` gives 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = Fraction(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def x_vars(n: int) -> tuple[str, ...]:
    return tuple(f"x{i + 1}" for i in range(n))


def z_vars(n: int) -> tuple[str, ...]:
    return tuple(f"z{i + 1}" for i in range(n))


def _grlex_key(e: Exp):
    return (sum(e), e)


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact coefficient required, got {type(c).__name__}")


class Poly:
    """Sparse multivariate Laurent polynomial with rational coefficients."""

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exp, object] | None = None):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean: dict[Exp, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != n:
                raise DimensionMismatch(f"exponent {e} does not match {n} variables")
            c = _coerce(c)
            if c:
                clean[e] = clean.get(e, 0) + c
                if not clean[e]:
                    del clean[e]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, vars, terms: dict) -> "Poly":
        # trusted constructor: terms already canonical, no zero coefficients
        p = cls.__new__(cls)
        p.vars = vars
        p._terms = terms
        p._hash = None
        return p

    # construction helpers

    @classmethod
    def const(cls, vars, c=1) -> "Poly":
        vars = tuple(vars)
        return cls(vars, {(0,) * len(vars): c})

    @classmethod
    def var(cls, vars, i: int) -> "Poly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[i] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars, exp: Sequence[int], c=1) -> "Poly":
        return cls(vars, {tuple(exp): c})

    @classmethod
    def gens(cls, vars) -> list["Poly"]:
        vars = tuple(vars)
        return [cls.var(vars, i) for i in range(len(vars))]

    # basic properties

    @property
    def terms(self) -> Mapping[Exp, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def sorted_terms(self, reverse: bool = True) -> list[tuple[Exp, Fraction]]:
        """Terms in graded-lex order, highest first by default."""
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]), reverse=reverse)

    def leading(self, order: str = "grlex") -> tuple[Exp, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        key = _grlex_key if order == "grlex" else (lambda e: e)
        e = max(self._terms, key=key)
        return e, self._terms[e]

    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coeff(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def constant(self) -> Fraction:
        return self.coeff((0,) * self.nvars)

    def min_exponents(self) -> Exp:
        if not self._terms:
            return (0,) * self.nvars
        return tuple(min(col) for col in zip(*self._terms))

    # ring operations

    def _check(self, other: "Poly"):
        if self.vars != other.vars:
            raise DimensionMismatch(f"variables differ: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        return Poly.const(self.vars, _coerce(other))

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _coerce(other)
            if not c:
                return Poly._raw(self.vars, {})
            return Poly._raw(self.vars, {e: v * c for e, v in self._terms.items()})
        self._check(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly._raw(self.vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Poly):
            return exact_quotient(self, other)
        c = _coerce(other)
        return self * (1 / c)

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise NotDivisible("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return Poly._raw(self.vars, {tuple(k * v for v in e): c ** k})
        out = Poly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.vars == other.vars and self._terms == other._terms
        try:
            c = _coerce(other)
        except TypeError:
            return NotImplemented
        return self == Poly.const(self.vars, c)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self._terms.items())))
        return self._hash

    # calculus and symmetry

    def diff(self, i: int) -> "Poly":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly._raw(self.vars, out)

    def euler(self, i: int) -> "Poly":
        """``x_i d/dx_i``; keeps Laurent monomials closed."""
        return Poly._raw(self.vars, {e: c * e[i] for e, c in self._terms.items() if e[i]})

    def shift(self, exp: Sequence[int]) -> "Poly":
        """Multiply by the monomial ``x**exp``."""
        return Poly._raw(
            self.vars, {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()}
        )

    def permute(self, perm: Sequence[int]) -> "Poly":
        """Rename variable ``i`` to ``perm[i]``."""
        out = {}
        for e, c in self._terms.items():
            f = [0] * len(e)
            for i, v in enumerate(e):
                f[perm[i]] = v
            out[tuple(f)] = c
        return Poly._raw(self.vars, out)

    def is_symmetric(self) -> bool:
        n = self.nvars
        if n < 2:
            return True
        swap = list(range(n))
        swap[0], swap[1] = 1, 0
        cycle = [(i + 1) % n for i in range(n)]
        return self.permute(swap) == self and self.permute(cycle) == self

    def subs(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute variable ``i`` by ``images[i]`` (all sharing one ring)."""
        if len(images) != self.nvars:
            raise DimensionMismatch("need one image per variable")
        target = images[0].vars
        cache: dict[tuple[int, int], Poly] = {}

        def power(i, k):
            if (i, k) not in cache:
                cache[(i, k)] = images[i] ** k
            return cache[(i, k)]

        out = Poly(target)
        for e, c in self.sorted_terms():
            term = Poly.const(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def rename(self, vars: Sequence[str]) -> "Poly":
        if len(vars) != self.nvars:
            raise DimensionMismatch("rename must keep the variable count")
        return Poly._raw(tuple(vars), dict(self._terms))

    # numerics and I/O

    def __call__(self, *coords):
        return evaluate(self, coords)

    def at(self, values: Sequence) -> Fraction:
        """Exact value at a rational point."""
        if len(values) != self.nvars:
            raise DimensionMismatch(f"{len(values)} values for {self.nvars} variables")
        values = [Fraction(v) for v in values]
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for v, k in zip(values, e):
                if k:
                    if k < 0 and not v:
                        raise ZeroCoordinate("Laurent term at a zero coordinate")
                    term *= v ** k
            total += term
        return total

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), "num": str(c.numerator), "den": str(c.denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj) -> "Poly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(
            obj["vars"],
            {tuple(t["exp"]): Fraction(int(t["num"]), int(t["den"])) for t in obj["terms"]},
        )

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({list(self.vars)}, {self})"


def exact_quotient(num: Poly, den: Poly) -> Poly:
    """Return ``q`` with ``q * den == num``, or raise :class:`NotDivisible`.

    Multivariate division by the single divisor ``den`` in graded-lex order.
    If ``den`` divides ``num`` the leading term of every intermediate
    remainder is a multiple of ``LT(den)``, so any failure of that is a
    proof of non-divisibility.  Laurent inputs are first shifted to
    polynomials with no monomial content; the unit shift is restored on
    the quotient.  When both inputs are ordinary polynomials the quotient
    must be one too, so ``x1 / x2`` is not divisible.
    """
    num._check(den)
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if num.is_zero():
        return Poly(num.vars)
    sn, sd = num.min_exponents(), den.min_exponents()
    a = num.shift([-v for v in sn])._terms
    b = den.shift([-v for v in sd])._terms
    lt_e = max(b, key=_grlex_key)
    lt_c = b[lt_e]
    rest = [(e, c) for e, c in b.items() if e != lt_e]

    rem = dict(a)
    heap = [(-sum(e), tuple(-v for v in e)) for e in rem]
    heapq.heapify(heap)
    quot: dict[Exp, Fraction] = {}
    while heap:
        _, neg = heapq.heappop(heap)
        e = tuple(-v for v in neg)
        c = rem.pop(e, None)
        if not c:
            continue
        qe = tuple(x - y for x, y in zip(e, lt_e))
        if min(qe) < 0:
            raise NotDivisible(f"{num} is not divisible by {den}")
        qc = c / lt_c
        quot[qe] = quot.get(qe, 0) + qc
        for f, d in rest:
            g = tuple(x + y for x, y in zip(qe, f))
            v = rem.get(g, 0) - qc * d
            if v:
                if g not in rem:
                    heapq.heappush(heap, (-sum(g), tuple(-x for x in g)))
                rem[g] = v
            else:
                rem.pop(g, None)
    shift = [x - y for x, y in zip(sn, sd)]
    out = Poly(num.vars, quot).shift(shift)
    if min(sn) >= 0 and min(sd) >= 0 and min(out.min_exponents()) < 0:
        raise NotDivisible(f"{num} is not divisible by {den} in the polynomial ring")
    return out


@lru_cache(maxsize=None)
def elementary(n: int, k: int, vars: tuple[str, ...] | None = None) -> Poly:
    """The k-th elementary symmetric polynomial in ``n`` variables."""
    vars = vars or x_vars(n)
    terms = {}
    for s in itertools.combinations(range(n), k):
        e = [0] * n
        for i in s:
            e[i] = 1
        terms[tuple(e)] = 1
    return Poly(vars, terms)


@lru_cache(maxsize=4096)
def _elementary_product(n: int, exps: tuple[int, ...], vars: tuple[str, ...]) -> Poly:
    out = Poly.const(vars, 1)
    for k, a in enumerate(exps, start=1):
        if a:
            out = out * elementary(n, k, vars) ** a
    return out


def to_elementary_basis(p: Poly, unimodular: bool = False) -> Poly:
    """Rewrite a symmetric polynomial in the elementary basis ``z1..zN``.

    Gauss's algorithm: strip the lex-leading term ``c x^a`` (``a`` is then
    nonincreasing) by subtracting ``c e1^(a1-a2) ... eN^aN``.  With
    ``unimodular=True`` the top variable ``zN = x1...xN`` is set to 1 and the
    result lives in ``z1..z_{N-1}``.
    """
    n = p.nvars
    if not p.is_symmetric():
        raise NotSymmetric(f"{p} is not invariant under permutations")
    s = min(p.min_exponents()) if p else 0
    s = min(s, 0)
    work = dict(p.shift([-s] * n)._terms) if s else dict(p._terms)
    heap = [tuple(-v for v in e) for e in work]
    heapq.heapify(heap)
    out: dict[Exp, Fraction] = {}
    while heap:
        e = tuple(-v for v in heapq.heappop(heap))
        c = work.pop(e, None)
        if not c:
            continue
        if any(e[i] < e[i + 1] for i in range(n - 1)):
            raise NotSymmetric(f"{p} is not invariant under permutations")
        z = tuple(e[i] - e[i + 1] for i in range(n - 1)) + (e[-1],)
        out[z] = out.get(z, 0) + c
        for f, d in _elementary_product(n, z, p.vars)._terms.items():
            if f == e:
                continue
            v = work.get(f, 0) - c * d
            if v:
                if f not in work:
                    heapq.heappush(heap, tuple(-x for x in f))
                work[f] = v
            else:
                work.pop(f, None)
    if s:
        out = {z[:-1] + (z[-1] + s,): c for z, c in out.items()}
    if unimodular:
        flat: dict[Exp, Fraction] = {}
        for z, c in out.items():
            flat[z[:-1]] = flat.get(z[:-1], 0) + c
        return Poly(z_vars(n - 1), flat)
    return Poly(z_vars(n), out)


def from_elementary_basis(q: Poly, n: int, degree: int | None = None) -> Poly:
    """Substitute ``z_k -> e_k(x1..xn)``.

    ``q`` may omit the top variable (unimodular form).  Passing ``degree``
    restores the missing powers of ``zN`` so that the pull-back is
    homogeneous of that degree; without it ``zN`` is taken as 1.
    """
    xs = x_vars(n)
    if q.nvars == n - 1:
        if degree is not None:
            terms = {}
            for z, c in q._terms.items():
                w = sum((k + 1) * a for k, a in enumerate(z))
                top, r = divmod(degree - w, n)
                if r or top < 0:
                    raise ValueError(f"term {z} cannot be homogenized to degree {degree}")
                terms[z + (top,)] = c
            q = Poly(z_vars(n), terms)
        else:
            q = Poly(z_vars(n), {z + (0,): c for z, c in q._terms.items()})
    elif q.nvars != n:
        raise DimensionMismatch(f"expected {n} or {n - 1} elementary variables")
    return q.subs([elementary(n, k, xs) for k in range(1, n + 1)])


@dataclass(frozen=True)
class EvalPoint:
    """Evaluation point ``(x1, ..., xN)``.

    ``torus`` asserts ``|x_j| = 1``; ``unimodular`` asserts ``x1...xN = 1``.
    Both are checked to 1e-12 at construction.
    """

    coords: tuple
    torus: bool = False
    unimodular: bool = False

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if self.torus and any(abs(abs(c) - 1) > 1e-12 for c in coords):
            raise ConstraintViolated(f"{coords} is not on the unit torus")
        if self.unimodular:
            prod = 1
            for c in coords:
                prod *= c
            if abs(prod - 1) > 1e-12:
                raise ConstraintViolated(f"product of {coords} is {prod}, not 1")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    @classmethod
    def ones(cls, n: int) -> "EvalPoint":
        return cls((1.0,) * n, torus=True, unimodular=True)

    @classmethod
    def from_angles(cls, thetas: Sequence[float]) -> "EvalPoint":
        thetas = list(thetas)
        unimodular = abs(math.remainder(math.fsum(thetas), 2 * math.pi)) <= 1e-12
        return cls(tuple(cmath.exp(1j * t) for t in thetas), torus=True, unimodular=unimodular)

    def product(self) -> complex:
        prod = 1
        for c in self.coords:
            prod *= c
        return prod


def evaluate(p: Poly, pt: EvalPoint | Iterable) -> complex:
    """Evaluate in complex floating point, summing in graded-lex order."""
    coords = pt.coords if isinstance(pt, EvalPoint) else tuple(complex(c) for c in pt)
    if len(coords) != p.nvars:
        raise DimensionMismatch(f"{len(coords)} coordinates for {p.nvars} variables")
    powers: list[dict[int, complex]] = [{} for _ in coords]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            if k < 0 and coords[i] == 0:
                raise ZeroCoordinate(f"{p.vars[i]} = 0 in a Laurent term")
            cache[k] = coords[i] ** k
        return cache[k]

    re, im = [], []
    for e, c in p.sorted_terms():
        v = complex(c)
        for i, k in enumerate(e):
            if k:
                v *= power(i, k)
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im))
