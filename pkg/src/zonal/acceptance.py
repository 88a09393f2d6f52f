"""Acceptance criteria as runnable checks.

Each ``criterion_*`` returns a :class:`CriterionResult` whose ``detail`` is
plain JSON data and depends only on the inputs (seed, samples), so the
serialized report is reproducible byte for byte.  Wall time is kept out of
the report.
"""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import genfun, haar
from .exact import EvalPoint, from_elementary_basis, to_elementary_basis
from .radial import Convention, OperatorSpec, eigencheck
from .series import (
    WeightLabel,
    compositions,
    legendre,
    phi_fundamental,
    phi_n2,
    phi_pq_oracle,
    so3_moment_oracle,
    sphere_moment,
)

NSIGMA = 5.0
DEFAULT_SAMPLES = 10 ** 6


@dataclass
class CriterionResult:
    id: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0
    budget: float = 0.0

    def to_json(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed, "detail": self.detail}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.id:2d} {self.name} ({self.seconds:.2f}s / {self.budget:g}s)"


def _frac(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def constructed_phis():
    """Every Phi covered by the normalization criterion, as (tag, poly, is_z_basis)."""
    out = []
    for l in range(13):
        out.append((f"phi_n2({l})", phi_n2(l), False))
    for N in range(2, 6):
        for l in range(9):
            out.append((f"phi_fundamental({N},{l})", phi_fundamental(N, l), False))
    for p in range(5):
        for q in range(5 - p):
            out.append((f"phi_pq_oracle({p},{q})", phi_pq_oracle(p, q), False))
            out.append((f"series_extract({p},{q})", genfun.phi_pq_z(p, q), True))
    return out


def criterion_1(**_) -> CriterionResult:
    bad = []
    phis = constructed_phis()
    for tag, poly, zbasis in phis:
        point = [3, 3] if zbasis else [1] * poly.nvars
        if poly.at(point) != 1:
            bad.append(tag)
    return CriterionResult(1, "normalization at the identity", not bad, {"checked": len(phis), "failures": bad})


def criterion_2(**_) -> CriterionResult:
    thetas = np.linspace(0.0, math.pi, 100)
    worst = 0.0
    for l in range(13):
        poly = phi_n2(l)
        for th in thetas:
            z = complex(math.cos(th), math.sin(th))
            worst = max(worst, abs(poly(z, z.conjugate()) - legendre(l, math.cos(th))))
    return CriterionResult(2, "Legendre identity for N=2", worst <= 1e-12, {"max_abs_error": worst, "tolerance": 1e-12})


def criterion_3(samples=DEFAULT_SAMPLES, seed=haar.DEFAULT_SEED, threads=1, **_) -> CriterionResult:
    exact_bad = []
    count = 0
    for total in range(5):
        for k in compositions(total, 3):
            count += 1
            oracle = so3_moment_oracle(tuple((2 * kj, 0) for kj in k))
            if oracle != sphere_moment(3, k):
                exact_bad.append(list(k))
    mc = {}
    ok = not exact_bad
    for N in (2, 3, 4):
        m2, m4 = haar.mc_moments(N, samples, seed + N, threads)
        z2 = abs(m2.mean - 1 / N) / m2.stderr
        z4 = abs(m4.mean - 3 / (N * (N + 2))) / m4.stderr
        mc[str(N)] = {"k11^2": [m2.mean.real, m2.stderr], "k11^4": [m4.mean.real, m4.stderr], "z": [z2, z4]}
        ok = ok and z2 <= NSIGMA and z4 <= NSIGMA
    return CriterionResult(
        3, "moment oracles and Haar moments", ok,
        {"exact_checked": count, "exact_failures": exact_bad, "haar": mc},
    )


def torus_points(seed: int, count: int = 5) -> list[EvalPoint]:
    rng = haar.shard_rng(seed, 1 << 40)
    pts = []
    for _ in range(count):
        a, b = rng.uniform(-math.pi, math.pi, 2)
        pts.append(EvalPoint.from_angles([a, b, -a - b]))
    return pts


def criterion_4(samples=DEFAULT_SAMPLES, seed=haar.DEFAULT_SEED, threads=1, **_) -> CriterionResult:
    labels = [WeightLabel.pq(p, q) for p in range(4) for q in range(4 - p)]
    rows = []
    ok = True
    for i, pt in enumerate(torus_points(seed)):
        ests = haar.mc_phi_many(labels, pt, samples, seed + 100 + i, threads)
        for lab, est in zip(labels, ests):
            exact = genfun.phi_pq(lab.p, lab.q)(*pt.coords)
            err = abs(est.mean - exact)
            z = err / est.stderr if est.stderr else (0.0 if err < 1e-12 else math.inf)
            ok = ok and z <= NSIGMA
            rows.append({"point": i, "pq": list(lab.parts), "abs_error": err, "stderr": est.stderr, "z": z})
    return CriterionResult(4, "Haar integral representation of Phi_pq", ok, {"max_z": max(r["z"] for r in rows), "cells": rows})


def criterion_5(**_) -> CriterionResult:
    lhs, rhs = genfun.h_identity()
    return CriterionResult(5, "symbolic H identity", lhs == rhs, {"terms": len(rhs)})


def criterion_6(**_) -> CriterionResult:
    grid = [0.1, 0.2, 0.3, 0.4, 0.5]
    worst = 0.0
    for t1 in grid:
        for t2 in grid:
            res = genfun.quad_F((1, 1, 1), genfun.GenFunParams(t1, t2), tol=1e-12)
            worst = max(worst, abs(res.value - 1 / ((1 - t1) * (1 - t2))))
    return CriterionResult(6, "generating identity at x = (1,1,1)", worst <= 1e-9, {"max_abs_error": worst, "tolerance": 1e-9})


BC_CONFIGS = [
    ((2.0, 0.5, 1.0), (0.1, 0.2)),
    ((1.5, 0.8, 1 / 1.2), (0.3, 0.1)),
    ((0.5, 0.5, 4.0), (0.2, 0.15)),
    ("angles", (0.7, -0.3, -0.4), (0.25, 0.2)),
    ("angles", (2.0, -1.0, -1.0), (0.3, 0.3)),
]


def bc_points():
    out = []
    for cfg in BC_CONFIGS:
        if cfg[0] == "angles":
            out.append((EvalPoint.from_angles(cfg[1]), cfg[2]))
        else:
            out.append((EvalPoint(cfg[0], unimodular=True), cfg[1]))
    return out


def criterion_7(samples=DEFAULT_SAMPLES, seed=haar.DEFAULT_SEED, threads=1, **_) -> CriterionResult:
    rows = []
    ok = True
    for i, (pt, (t1, t2)) in enumerate(bc_points()):
        exact = genfun.quad_F(pt, genfun.GenFunParams(t1, t2), tol=1e-12).value
        est = haar.mc_bc_sphere(pt, t1, t2, samples, seed + 200 + i, threads)
        z = abs(est.mean - exact) / est.stderr
        ok = ok and z <= NSIGMA
        rows.append({"config": i, "quad": [exact.real, exact.imag], "mc": [est.mean.real, est.mean.imag], "stderr": est.stderr, "z": z})
    return CriterionResult(7, "completed C: sphere Monte Carlo vs quadrature", ok, {"configs": rows})


def criterion_8(**_) -> CriterionResult:
    bad = []
    table = genfun.series_extract(3, 3, 3)
    for (p, q), poly in sorted(table.items()):
        if poly != to_elementary_basis(phi_pq_oracle(p, q), unimodular=True):
            bad.append([p, q])
    table = genfun.series_extract(6, 0)
    for p in range(7):
        if table[(p, 0)] != to_elementary_basis(phi_fundamental(3, p), unimodular=True):
            bad.append([p, 0])
    return CriterionResult(8, "exact series extraction vs oracles", not bad, {"failures": bad})


def criterion_9(**_) -> CriterionResult:
    rows = []
    ok = True
    for p in range(5):
        for q in range(5 - p):
            top = genfun.phi_pq_z(p, q).coeff((p, q))
            want = genfun.asymptotic_coefficient(p, q)
            ok = ok and top == want
            rows.append({"pq": [p, q], "top": _frac(top), "A_pq": _frac(want)})
    return CriterionResult(9, "top coefficients A_pq", ok, {"cells": rows})


def criterion_10(**_) -> CriterionResult:
    failures = []
    eigen = {}
    for tag, poly, zbasis in constructed_phis():
        if zbasis:
            p, q = (int(v) for v in tag[tag.index("(") + 1 : -1].split(","))
            poly = from_elementary_basis(poly, 3, degree=p + 2 * q)
        res = eigencheck(OperatorSpec(Convention.JACK, N=poly.nvars), poly)
        if res.ok:
            eigen[tag] = _frac(res.eigenvalue)
        else:
            failures.append(tag)
    literal = eigencheck(OperatorSpec(Convention.LITERAL, N=2), phi_n2(1))
    ok = not failures and not literal.ok
    return CriterionResult(
        10, "Jack-form eigenfunctions; literal operator residual", ok,
        {"failures": failures, "eigenvalues": eigen, "literal_n2_l1": literal.to_json(),
         "literal_denominator": literal.denominator.to_json() if literal.denominator else None},
    )


def criterion_11(seed=haar.DEFAULT_SEED, **_) -> CriterionResult:
    rng = haar.shard_rng(seed, 1 << 41)
    pairs = rng.uniform(0.1, 10.0, (20, 2))
    bad = [[float(B), float(C)] for B, C in pairs if not genfun.bc_substitution_check(B, C, tol=1e-10)]
    return CriterionResult(11, "xi-substitution formula", not bad, {"checked": len(pairs), "failures": bad})


CRITERIA = {
    1: (criterion_1, 10.0),
    2: (criterion_2, 1.0),
    3: (criterion_3, 60.0),
    4: (criterion_4, 120.0),
    5: (criterion_5, 1.0),
    6: (criterion_6, 5.0),
    7: (criterion_7, 60.0),
    8: (criterion_8, 60.0),
    9: (criterion_9, 10.0),
    10: (criterion_10, 30.0),
    11: (criterion_11, 1.0),
}


def run_criterion(cid: int, **kwargs) -> CriterionResult:
    fn, budget = CRITERIA[cid]
    t0 = time.perf_counter()
    res = fn(**kwargs)
    res.seconds = time.perf_counter() - t0
    res.budget = budget
    return res


def run(ids=None, **kwargs) -> list[CriterionResult]:
    return [run_criterion(cid, **kwargs) for cid in (ids or sorted(CRITERIA))]


def report(results, seed: int, samples: int) -> str:
    body = {
        "seed": seed,
        "samples": samples,
        "passed": all(r.passed for r in results),
        "criteria": [r.to_json() for r in results],
    }
    return json.dumps(body, indent=1, sort_keys=True)
