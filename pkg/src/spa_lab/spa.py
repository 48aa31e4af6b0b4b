"""Structural physical approximations: noisy witnesses and critical noise levels.

The approximation of a map with witness E mixes in white noise,
E(p) = p/(dA dB) · 1 + (1−p) E, and the critical probability is the
smallest p making E(p) positive semidefinite (equivalently, the map
completely positive).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    HermitianOp,
    kron,
    max_eigenvalue,
    min_eigenvalue,
    partial_trace,
)
from .maps import MapRep

POSITIVITY_TOL = 1e-9
AGREEMENT_TOL = 1e-8


@dataclass(frozen=True)
class SpaResult:
    """Critical noise probability with its positivity certificate.

    p_star is the closed form D|λ_min|/(1 + D|λ_min|); p_bisect is the
    independent bisection estimate (the two must agree to 1e-8).
    cp_certificate is the minimum eigenvalue at p_star.
    """

    p_star: float
    p_bisect: float
    lambda_min: float
    witness_at_p_star: HermitianOp
    cp_certificate: float
    already_positive: bool


def spa_witness(e: HermitianOp, p: float) -> HermitianOp:
    """p/(dA dB) · 1 + (1−p) · E for a unit-trace witness E."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if abs(e.trace() - 1.0) > 1e-9:
        raise ValueError(f"witness must have unit trace, got {e.trace()}")
    n = e.d
    return HermitianOp(p / n * np.eye(n) + (1 - p) * e.mat, e.dims)


def critical_p(e: HermitianOp, *, tol: float = POSITIVITY_TOL,
               bisect_iters: int = 50) -> SpaResult:
    """Smallest p with spa_witness(e, p) >= 0.

    Closed form from the minimum eigenvalue, cross-checked by bisection on
    the minimum eigenvalue; disagreement beyond 1e-8 means the eigensolver
    drifted and raises.  An already positive witness gets p_star = 0 with
    the already_positive flag set.
    """
    lam = min_eigenvalue(e)
    n = e.d
    if lam >= -tol:
        w = spa_witness(e, 0.0)
        return SpaResult(0.0, 0.0, lam, w, min_eigenvalue(w), True)
    closed = n * (-lam) / (1 + n * (-lam))
    lo, hi = 0.0, 1.0
    for _ in range(bisect_iters):
        mid = (lo + hi) / 2
        if min_eigenvalue(spa_witness(e, mid)) >= 0.0:
            hi = mid
        else:
            lo = mid
    if abs(closed - hi) > AGREEMENT_TOL:
        raise RuntimeError(
            f"closed-form p* {closed} and bisection {hi} disagree beyond {AGREEMENT_TOL}"
        )
    w = spa_witness(e, closed)
    cert = min_eigenvalue(w)
    if cert < -tol:
        raise RuntimeError(f"witness at p* has min eigenvalue {cert}")
    return SpaResult(closed, hi, lam, w, cert, False)


def is_completely_positive(m: MapRep, tol: float = POSITIVITY_TOL) -> bool:
    return min_eigenvalue(m.choi) >= -tol


def contractive_norm(m: MapRep) -> float:
    """max over unit-trace states ρ of tr Λ(ρ), the top eigenvalue of Λ†(1)."""
    dual_identity = m.d_in * partial_trace(m.choi, "B").T
    return max_eigenvalue(dual_identity)


def trace_preserving_extension(m: MapRep, tol: float = POSITIVITY_TOL) -> MapRep:
    """Λ'(ρ) = Λ(ρ) + [tr ρ − tr Λ(ρ)] · 1/d_out for a contractive CP map.

    The added piece is itself a measure-and-prepare map, so separability
    of the Choi operator carries over term by term.
    """
    if not is_completely_positive(m, tol):
        raise ValueError("extension needs a completely positive map")
    if contractive_norm(m) > 1 + tol:
        raise ValueError("extension needs a contractive map (tr Λ(ρ) <= tr ρ)")
    slack_a = np.eye(m.d_in) / m.d_in - partial_trace(m.choi, "B")
    add = kron(slack_a, np.eye(m.d_out) / m.d_out)
    choi = HermitianOp(m.choi.mat + add, m.choi.dims)
    out = MapRep(m.d_in, m.d_out, choi, m.label + "+tp" if m.label else "tp-extension")
    resid = np.abs(partial_trace(out.choi, "B") - np.eye(m.d_in) / m.d_in).max()
    if resid > 1e-10:
        raise RuntimeError(f"extension is not trace preserving: residual {resid}")
    return out
