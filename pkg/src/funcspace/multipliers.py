"""Sampled multiplier-norm estimation and contraction criteria.

For kernels ``K_F``, ``K_E`` and a symbol ``w`` on a finite sample S, the
sampled multiplier norm is the least ``t >= 0`` making

    t^2 * Gram(K_E, S) - D Gram(K_F, S) D*          (D = diag of w on S)

positive semi-definite.  Restricting the defining kernel inequality to a
finite sample can only relax it, so every number reported here is a lower
estimate of the true multiplier norm; the report says so in its
``semantics`` field and no upper-bound claim is made.

Two methods are provided and must agree: ``pencil`` reads ``t^2`` off the
largest eigenvalue of the Hermitian pencil ``(D G_F D*, G_E)``, and
``bisection`` brackets the PSD transition starting from the diagonal lower
bound ``max |w| sqrt(K_F(x,x)/K_E(x,x))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DegenerateGram, SymbolNotContractive, Unbounded, ValidationError
from .geometry import EuclideanPointSet
from .kernels import (
    ClosedFormFunction,
    KernelExpr,
    PsdReport,
    compose,
    gram,
    hadamard,
    hermitian_from_upper,
    kernel_eval,
    polynomial,
    psd_check,
    szego,
)

#: Relative condition number of Gram(K_E, S) beyond which the sample is
#: rejected instead of silently regularized.
CONDITION_LIMIT = 1e12

_BRACKET_LIMIT = 1e12


@dataclass(frozen=True)
class MultNormReport:
    """Finite-sample estimate of a multiplier norm."""

    sample: EuclideanPointSet
    symbol: ClosedFormFunction
    lower_bound_sup: float
    sampled_norm: float
    bisection_interval_width: float
    method: str

    def to_json(self) -> dict:
        return {
            "sampled_norm": self.sampled_norm,
            "lower_bound_sup": self.lower_bound_sup,
            "method": self.method,
            "interval": self.bisection_interval_width,
            "semantics": "finite-sample lower estimate",
        }


def _scaled_gram_entries(K: KernelExpr, w: np.ndarray, sample: EuclideanPointSet) -> np.ndarray:
    """Hermitian matrix [(1 - w_i conj(w_j)) K(x_i, x_j)]."""
    pts = sample.points

    def entry(i, j):
        return (1.0 - w[i] * np.conj(w[j])) * kernel_eval(K, pts[i], pts[j])

    return hermitian_from_upper(entry, len(sample))


def contraction_check(K: KernelExpr, w: ClosedFormFunction, sample: EuclideanPointSet, tol: float = 1e-10) -> PsdReport:
    """Finite-sample test of membership in the closed multiplier unit ball.

    Checks that ``(1 - w (x) conj(w)) K`` restricted to the sample is PSD.
    Passing is necessary for ``||M_w|| <= 1``; failing certifies the norm
    exceeds 1 already on this sample.
    """
    values = w.eval_on(sample)
    return psd_check(_scaled_gram_entries(K, values, sample), tol=tol)


def _diag_lower_bound(w: np.ndarray, G_F: np.ndarray, G_E: np.ndarray) -> float:
    ratios = np.sqrt(np.maximum(G_F.real.diagonal(), 0.0) / G_E.real.diagonal())
    return float((np.abs(w) * ratios).max())


def sampled_mult_norm(
    K_F: KernelExpr,
    K_E: KernelExpr,
    w: ClosedFormFunction,
    sample: EuclideanPointSet,
    tol: float = 1e-9,
    method: str = "pencil",
    psd_tol: float = 1e-12,
) -> MultNormReport:
    """Least t with ``t^2 Gram(K_E) - D Gram(K_F) D*`` PSD on the sample.

    Args:
        tol: bracket width at which the bisection stops.
        method: "pencil" (generalized eigenvalue, machine accuracy) or
            "bisection" (PSD bracketing; certified feasible endpoint).
        psd_tol: relative eigenvalue tolerance for the bisection feasibility
            test; keep it well below ``tol`` so the methods agree.

    Raises:
        DegenerateGram: Gram(K_E) is singular past the conditioning limit.
        Unbounded: the bracket grew past 1e12 without reaching feasibility.
    """
    if method not in ("pencil", "bisection"):
        raise ValidationError(f"unknown method {method!r}")
    if tol <= 0.0:
        raise ValidationError("tolerance must be positive")
    values = w.eval_on(sample)
    G_F = gram(K_F, sample).entries
    G_E = gram(K_E, sample).entries
    eig_E = np.linalg.eigvalsh(G_E)
    if eig_E.min() <= 0.0 or eig_E.max() / eig_E.min() > CONDITION_LIMIT:
        raise DegenerateGram(
            f"Gram(K_E) condition exceeds {CONDITION_LIMIT:g}; perturb the sample "
            f"(eigenvalue range [{eig_E.min():.3e}, {eig_E.max():.3e}])"
        )

    def entry(i, j):
        return (values[i] * G_F[i, j]) * np.conj(values[j])

    A = hermitian_from_upper(entry, len(sample))
    sup = float(np.abs(values).max())
    t_lo = _diag_lower_bound(values, G_F, G_E)

    if method == "pencil":
        lam = scipy.linalg.eigh(A, G_E, eigvals_only=True)
        t = float(np.sqrt(max(lam.max(), 0.0)))
        return MultNormReport(sample, w, sup, t, 0.0, "pencil")

    def feasible(t: float) -> bool:
        report = psd_check(t * t * G_E - A, tol=psd_tol)
        return report.is_psd

    if feasible(t_lo):
        return MultNormReport(sample, w, sup, t_lo, 0.0, "bisection")
    hi = max(1.0, 2.0 * t_lo)
    while not feasible(hi):
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise Unbounded(f"no feasible bound below {_BRACKET_LIMIT:g}")
    lo = t_lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return MultNormReport(sample, w, sup, hi, hi - lo, "bisection")


def kl_monotonicity_check(
    K: KernelExpr,
    L: KernelExpr,
    w: ClosedFormFunction,
    sample: EuclideanPointSet,
    tol: float = 1e-10,
) -> bool:
    """Contractivity for K implies contractivity for the product kernel K*L.

    If ``(1 - w conj(w)) K`` is PSD on the sample then so is its Schur product
    with the PSD matrix of L, hence the implication holds on every instance;
    this check evaluates it and reports the implication's truth value.
    """
    on_K = contraction_check(K, w, sample, tol=tol)
    if not on_K.is_psd:
        return True
    on_KL = contraction_check(hadamard(K, L), w, sample, tol=tol)
    return on_KL.is_psd


class VonNeumannReport(NamedTuple):
    lhs: float
    rhs: float
    passed: bool


def certify_unit_sup(w: ClosedFormFunction, boundary_grid: int = 4096) -> float:
    """Certified upper bound for sup |w| on the closed unit disk, if <= 1.

    Moebius symbols and the coordinate are exact automorphisms (bound 1).
    Polynomials get a grid certificate: the boundary maximum over
    ``boundary_grid`` roots of unity plus a Lipschitz margin from the
    coefficient bound on |w'|.

    Raises:
        SymbolNotContractive: the bound exceeds 1 or the symbol family is
            not certifiable.
    """
    if boundary_grid < 8:
        raise ValidationError("boundary grid must have at least 8 points")
    if w.kind == "moebius":
        return 1.0
    if w.kind == "coordinate" and w.index == 0:
        return 1.0
    if w.kind == "polynomial":
        theta = 2.0 * np.pi * np.arange(boundary_grid) / boundary_grid
        zs = np.exp(1j * theta)
        coeffs = np.asarray(w.coeffs, dtype=complex)
        vals = np.polyval(coeffs[::-1], zs)
        deriv_bound = float(sum(k * abs(c) for k, c in enumerate(coeffs)))
        bound = float(np.abs(vals).max()) + deriv_bound * np.pi / boundary_grid
        if bound > 1.0:
            raise SymbolNotContractive(
                f"certified sup bound {bound:.6g} exceeds 1 on the closed disk"
            )
        return bound
    raise SymbolNotContractive(f"cannot certify a symbol of kind {w.kind!r}")


def von_neumann_check(
    w: ClosedFormFunction,
    p,
    sample: EuclideanPointSet,
    boundary_grid: int = 4096,
    tol: float = 1e-9,
) -> VonNeumannReport:
    """Sampled polynomial-calculus contraction test on the Hardy kernel.

    With ``||w||_inf <= 1`` certified, the multiplication operator of
    ``p o w`` on the Hardy space is bounded by the sup of |p| on the unit
    circle; the sampled norm must stay below the certified grid bound.

    Returns:
        (lhs, rhs, passed): sampled norm of ``p o w``, boundary grid maximum
        of |p| plus the grid-gap margin, and ``lhs <= rhs + tol``.
    """
    certify_unit_sup(w, boundary_grid)
    coeffs = np.asarray(list(p), dtype=complex)
    symbol = compose(polynomial(coeffs), w)
    lhs = sampled_mult_norm(szego(), szego(), symbol, sample, tol=tol).sampled_norm
    theta = 2.0 * np.pi * np.arange(boundary_grid) / boundary_grid
    vals = np.polyval(coeffs[::-1], np.exp(1j * theta))
    deriv_bound = float(sum(k * abs(c) for k, c in enumerate(coeffs)))
    rhs = float(np.abs(vals).max()) + deriv_bound * np.pi / boundary_grid
    return VonNeumannReport(lhs, rhs, bool(lhs <= rhs + tol))
