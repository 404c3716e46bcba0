"""Hardy-space truncations, Pick interpolation, and Carleson-type probes.

Polynomial multiplication on Taylor coefficients is a lower-triangular
Toeplitz matrix; conversely, a matrix acting on a degree truncation is
recognized as a multiplication operator by testing whether its adjoint fixes
the direction of every kernel coefficient vector.  Interpolation with a
multiplier-norm budget is decided by the Pick matrix

    [(t^2 - w_i conj(w_j)) / (1 - y_i conj(y_j))]

whose PSD-ness characterizes feasibility; bisecting on t gives the minimal
interpolation norm.  Node sequences whose boundary gaps halve support
bounded interpolation of every 0/1 pattern while keeping the interpolants
uniformly separated in sup norm - the finite fingerprint of a non-separable
multiplier algebra.  Finally, on the span of exp(z) and the monomials z^n
(n >= 1), multiplication maps the span into itself only for constant
symbols, and this is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DuplicatePoint,
    NotInDisk,
    PatternBudgetExceeded,
    Unbounded,
    ValidationError,
)
from .geometry import EuclideanPointSet
from .kernels import PsdReport, hermitian_from_upper, psd_check
from .serialize import complex_vector_from_json, complex_vector_to_json

_BRACKET_LIMIT = 1e12


@dataclass(frozen=True)
class PolyTruncation:
    """Finite section of the Hardy space: coefficients of sum a_n z^n, n <= degree."""

    degree: int
    coeffs: tuple

    def __init__(self, coeffs):
        coeffs = tuple(complex(c) for c in coeffs)
        if not coeffs:
            raise ValidationError("a truncation needs at least the constant coefficient")
        object.__setattr__(self, "degree", len(coeffs) - 1)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, z: complex) -> complex:
        out = 0.0 + 0.0j
        for c in reversed(self.coeffs):
            out = out * complex(z) + c
        return out


def toeplitz_mo(omega, N: int) -> np.ndarray:
    """Matrix of f -> omega * f from degree <= N into degree <= N + deg(omega).

    Lower-triangular Toeplitz in the monomial bases: column j carries the
    coefficients of omega shifted down by j.
    """
    if N < 0:
        raise ValidationError("truncation degree must be nonnegative")
    coeffs = np.asarray(list(omega), dtype=complex)
    if coeffs.size == 0:
        raise ValidationError("symbol must have at least one coefficient")
    d = coeffs.size - 1
    out = np.zeros((N + 1 + d, N + 1), dtype=complex)
    for j in range(N + 1):
        out[j : j + d + 1, j] = coeffs
    return out


def compress_square(T: np.ndarray, N: int) -> np.ndarray:
    """Keep coefficients of degree <= N: the square truncation of an MO matrix."""
    T = np.asarray(T, dtype=complex)
    if T.shape[1] != N + 1 or T.shape[0] < N + 1:
        raise ValidationError(f"expected a matrix with {N + 1} columns and at least {N + 1} rows")
    return T[: N + 1, :]


def detect_mo(T, sample: EuclideanPointSet, tol: float = 1e-6):
    """Recognize a truncated multiplication operator from its adjoint action.

    A multiplication operator's adjoint maps each kernel coefficient vector
    ``(conj(x)^n)_n`` to a multiple of itself, the factor being the
    conjugated symbol value.  For every sample point this tests that
    parallelism within the relative tolerance and, if all points pass,
    returns the recovered symbol values; otherwise returns None.

    For the square truncation of a genuine polynomial symbol the recovery
    error decays like |x|^(N + 1 - deg) in the truncation degree N.
    """
    T = np.asarray(T, dtype=complex)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise ValidationError("detect_mo needs a square matrix")
    if tol <= 0.0:
        raise ValidationError("tolerance must be positive")
    if sample.dim != 1 or len(sample) < 2:
        raise ValidationError("need a sample of at least 2 points in the disk")
    N = T.shape[0] - 1
    adj = T.conj().T
    out = []
    for pt in sample.points:
        x = complex(pt[0])
        u = np.conj(x) ** np.arange(N + 1)
        v = adj @ u
        c = np.vdot(u, v) / np.vdot(u, u)
        residual = np.linalg.norm(v - c * u)
        if residual > tol * max(np.linalg.norm(v), 1e-300):
            return None
        out.append(np.conj(c))
    return np.array(out, dtype=complex)


@dataclass(frozen=True)
class PickProblem:
    """Interpolation nodes in the open disk, targets, and a norm budget t."""

    nodes: np.ndarray
    values: np.ndarray
    bound: float

    def __init__(self, nodes, values, bound: float = 1.0):
        nodes = np.asarray(nodes, dtype=complex).reshape(-1)
        values = np.asarray(values, dtype=complex).reshape(-1)
        if nodes.size == 0 or nodes.size != values.size:
            raise ValidationError("need equally many (and at least one) nodes and targets")
        if np.any(np.abs(nodes) >= 1.0):
            raise NotInDisk("interpolation nodes must lie in the open unit disk")
        if len({complex(z) for z in nodes}) != nodes.size:
            raise DuplicatePoint("interpolation nodes must be distinct")
        if bound < 0.0:
            raise ValidationError("the norm bound must be nonnegative")
        nodes.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "bound", float(bound))

    def to_json(self) -> dict:
        return {
            "nodes": complex_vector_to_json(self.nodes),
            "values": complex_vector_to_json(self.values),
            "bound": self.bound,
        }

    @classmethod
    def from_json(cls, obj) -> "PickProblem":
        if not isinstance(obj, dict) or "nodes" not in obj or "values" not in obj:
            raise ValidationError('Pick problem JSON needs "nodes" and "values"')
        return cls(
            complex_vector_from_json(obj["nodes"]),
            complex_vector_from_json(obj["values"]),
            bound=obj.get("bound", 1.0),
        )


def _pick_matrix(nodes: np.ndarray, values: np.ndarray, t: float) -> np.ndarray:
    def entry(i, j):
        return (t * t - values[i] * np.conj(values[j])) / (1.0 - nodes[i] * np.conj(nodes[j]))

    return hermitian_from_upper(entry, nodes.size)


def pick_feasible(problem: PickProblem, tol: float = 1e-10) -> PsdReport:
    """PSD verdict of the Pick matrix at the problem's norm budget."""
    return psd_check(_pick_matrix(problem.nodes, problem.values, problem.bound), tol=tol)


def pick_min_norm(nodes, values, tol: float = 1e-9, psd_tol: float = 1e-12) -> float:
    """Minimal multiplier-norm budget t making interpolation feasible.

    Bisects the PSD transition of the Pick matrix; the returned endpoint is
    certified feasible and within ``tol`` of the transition.  The bracket
    starts at ``max |w_i|``, which every feasible t must dominate.
    """
    problem = PickProblem(nodes, values, bound=0.0)
    if tol <= 0.0:
        raise ValidationError("tolerance must be positive")

    def feasible(t: float) -> bool:
        return psd_check(_pick_matrix(problem.nodes, problem.values, t), tol=psd_tol).is_psd

    lo = float(np.abs(problem.values).max())
    if feasible(lo):
        return lo
    hi = max(1.0, 2.0 * lo)
    while not feasible(hi):
        hi *= 2.0
        if hi > _BRACKET_LIMIT:
            raise Unbounded(f"no feasible interpolation bound below {_BRACKET_LIMIT:g}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


def carleson_seq(start: float, m: int) -> np.ndarray:
    """Positive nodes marching to the boundary with exactly halving gaps.

    y_{k+1} = 1 - (1 - y_k) / 2, seeded at ``start``; returns m nodes
    (the seed itself is not included).
    """
    start = float(start)
    if not (0.0 <= start < 1.0):
        raise NotInDisk(f"start must lie in [0, 1), got {start}")
    if m < 1:
        raise ValidationError("need at least one node")
    out = np.empty(m)
    y = start
    for k in range(m):
        y = 1.0 - (1.0 - y) / 2.0
        if y >= 1.0:  # the gap fell below resolution and rounded onto the boundary
            raise NotInDisk(f"node {k + 1} rounded onto the unit circle; reduce m")
        out[k] = y
    return out


class SeparabilityReport(NamedTuple):
    max_min_norm: float
    min_pairwise_gap: float
    pattern_norms: tuple


def separability_probe(m: int, start: float = 0.0, tol: float = 1e-9) -> SeparabilityReport:
    """Interpolate every 0/1 pattern on a halving node sequence.

    Sweeps all 2^m indicator patterns, solving the minimal-norm
    interpolation for each.  ``max_min_norm`` witnesses that every pattern
    is reachable at a uniformly bounded budget, while ``min_pairwise_gap``
    is the smallest sup-distance between distinct patterns on the nodes
    (exactly 1 for indicators) - together, continuum-many uniformly
    separated multipliers in the limit.
    """
    if m > 12:
        raise PatternBudgetExceeded("pattern sweeps are capped at m = 12 (4096 solves)")
    if m < 1:
        raise ValidationError("need at least one node")
    nodes = carleson_seq(start, m)
    norms = []
    for mask in range(2**m):
        pattern = [(mask >> k) & 1 for k in range(m)]
        norms.append(pick_min_norm(nodes, np.array(pattern, dtype=complex), tol=tol))
    patterns = ((np.arange(2**m)[:, None] >> np.arange(m)[None, :]) & 1).astype(np.int8)
    gap = None
    chunk = 256
    for lo in range(0, patterns.shape[0], chunk):
        block = patterns[lo : lo + chunk]
        cheb = np.abs(block[:, None, :] - patterns[None, :, :]).max(axis=2)
        np.fill_diagonal(cheb[:, lo : lo + block.shape[0]], np.iinfo(np.int8).max)
        block_min = cheb.min()
        gap = block_min if gap is None else min(gap, block_min)
    return SeparabilityReport(float(max(norms)), float(gap), tuple(norms))


@dataclass(frozen=True)
class ExpPolySpan:
    """c * exp(z) + q(z) with q a polynomial vanishing at 0; representation unique.

    The span of exp and the positive-degree monomials meets the polynomials
    exactly in {q : q(0) = 0}, and exp is not rational, so the pair (c, q)
    is determined by the function.
    """

    c: complex
    poly: tuple

    def __init__(self, c, poly=()):
        poly = tuple(complex(v) for v in poly)
        while poly and poly[-1] == 0:
            poly = poly[:-1]
        if poly and poly[0] != 0:
            raise ValidationError("the polynomial part must vanish at 0")
        object.__setattr__(self, "c", complex(c))
        object.__setattr__(self, "poly", poly)

    def __call__(self, z: complex) -> complex:
        z = complex(z)
        out = self.c * np.exp(z)
        for k, a in enumerate(self.poly):
            out += a * z**k
        return out

    def times_polynomial(self, omega) -> "ExpPolySpan | None":
        """Exact membership of omega * self in the span, with its representation.

        ``omega * (c exp)`` stays in the span only when c = 0 or omega is
        constant: otherwise ``(omega - c') exp`` would be a nonzero rational
        multiple of exp.  The polynomial part stays automatically since its
        root at 0 is preserved.  Returns None when membership fails.
        """
        w = _trim(omega)
        q = np.asarray(self.poly, dtype=complex)
        prod_poly = np.convolve(w, q) if w.size and q.size else np.zeros(0, dtype=complex)
        if self.c == 0:
            return ExpPolySpan(0.0, prod_poly)
        if w.size == 0:
            return ExpPolySpan(0.0, prod_poly)
        if w.size == 1:
            return ExpPolySpan(self.c * w[0], prod_poly)
        return None


def _trim(coeffs) -> np.ndarray:
    w = np.asarray(list(coeffs), dtype=complex).reshape(-1)
    while w.size and w[-1] == 0:
        w = w[:-1]
    return w


def ardy_multiplier_check(omega) -> bool:
    """Decide exactly whether a polynomial multiplies the exp-monomial span
    into itself.

    Probes the two generators that pin the answer down: multiplying z must
    land in the span (a polynomial belongs iff it vanishes at 0, which
    forces the exp coefficient of the product to be 0), and multiplying
    exp(z) must land in the span, which forces the symbol to be constant.
    """
    w = _trim(omega)
    z_probe = ExpPolySpan(0.0, (0.0, 1.0))
    exp_probe = ExpPolySpan(1.0, ())
    return z_probe.times_polynomial(w) is not None and exp_probe.times_polynomial(w) is not None
