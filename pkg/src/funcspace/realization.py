"""Sequence-space realization of a finite metric space.

Given an enumeration y_1, y_2, ... of a finite metric space, the functions

    g_0 = 1,   g_n = min(rho(., {y_1..y_n}), 1)

are 1-Lipschitz, decrease pointwise, and vanish exactly on the enumerated
prefix.  With tempered weights ``b_n = 2^n sup |g_n|`` the embedding

    J f = sum_n (f_n / b_n) g_n

carries a coefficient sequence into a function on the space, point
evaluations become coefficient vectors ``(g_n(x)/b_n)_n``, and the
triangular vanishing pattern ``g_m(y_{n+1}) = 0 for m > n`` makes the map
invertible from values on the prefix.  This module builds the system and
provides the finite verification procedures: the triangular independence
pattern, the rank of point-evaluation families, the neighborhood probe
showing the g's generate the metric topology, and the coefficient
round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    CoefficientOverflow,
    DepthExceedsSequence,
    DuplicatePoint,
    ExhaustedSpace,
    IllConditionedPrefix,
    PrefixTooShallow,
    ValidationError,
)
from .geometry import MetricSpace, SampledFunction

_PIVOT_FLOOR = 1e-14


@dataclass(frozen=True)
class DenseSequence:
    """An enumeration of all points of a finite space (the density surrogate)."""

    space: MetricSpace
    order: tuple

    def __init__(self, space: MetricSpace, order):
        order = tuple(int(i) for i in order)
        n = len(space)
        if sorted(order) != list(range(n)):
            raise ValidationError("order must enumerate every point exactly once")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "order", order)

    def __len__(self) -> int:
        return len(self.order)


def build_g(dense: DenseSequence, depth: int):
    """The functions g_0..g_depth of the enumeration.

    g_0 is the constant 1; g_n is the distance to the first n enumerated
    points, clamped at 1.
    """
    if depth < 0:
        raise ValidationError("depth must be nonnegative")
    if depth > len(dense):
        raise DepthExceedsSequence(f"depth {depth} exceeds the {len(dense)}-point enumeration")
    space = dense.space
    n = len(space)
    gs = [SampledFunction(space, np.ones(n))]
    for m in range(1, depth + 1):
        prefix = list(dense.order[:m])
        vals = np.minimum(space.dist[:, prefix].min(axis=1), 1.0)
        gs.append(SampledFunction(space, vals))
    return gs


def choose_b(gs, policy: str = "default_2n", space: MetricSpace | None = None, base: int | None = None) -> np.ndarray:
    """Tempering weights b_n = 2^n * sup |g_n| over the exhaustion sets.

    Policies:
        "default_2n": sup over the whole space (trivially tempered since
            every g_n is bounded by 1).
        "balls": sup over the open ball B(base, max(n, 1)), mirroring the
            Lipschitz exhaustion by balls around the base point.

    Raises:
        ExhaustedSpace: some g_n vanishes on its exhaustion set; the
            enumeration has consumed the finite space, reduce the depth.
    """
    sups = []
    for n, g in enumerate(gs):
        if policy == "default_2n":
            sup = float(np.abs(g.values).max())
        elif policy == "balls":
            sp = space if space is not None else g.space
            b = sp.base if base is None else int(base)
            inside = sp.dist[b, :] < max(n, 1)
            sup = float(np.abs(g.values[inside]).max()) if inside.any() else 0.0
        else:
            raise ValidationError(f"unknown weight policy {policy!r}")
        if sup == 0.0:
            raise ExhaustedSpace(f"g_{n} vanishes on its exhaustion set; reduce the depth")
        sups.append(sup)
    return np.array([(2.0**n) * s for n, s in enumerate(sups)])


@dataclass(frozen=True)
class RealizationModel:
    """The realization bundle: enumeration, depth, functions g, weights b.

    Coefficient sequences live in an l^p model space (p is recorded only;
    the finite operations below use coordinates and never a norm).  The
    coordinate functionals play the role of the biorthogonal system.
    """

    dense: DenseSequence
    depth: int
    g: tuple
    b: np.ndarray
    p: float = 2.0


def build_model(
    dense: DenseSequence,
    depth: int,
    policy: str = "default_2n",
    b=None,
    p: float = 2.0,
) -> RealizationModel:
    """Assemble a :class:`RealizationModel` at the given depth."""
    gs = build_g(dense, depth)
    if b is None:
        weights = choose_b(gs, policy=policy, space=dense.space)
    else:
        weights = np.asarray(b, dtype=float)
        if len(weights) != depth + 1:
            raise ValidationError("custom weights must have length depth + 1")
        if np.any(weights <= 0.0):
            raise ValidationError("weights must be positive")
    if p < 1.0:
        raise ValidationError("the model exponent must satisfy p >= 1")
    weights = weights.copy()
    weights.flags.writeable = False
    return RealizationModel(dense, depth, tuple(gs), weights, float(p))


def _check_coeffs(f, model: RealizationModel) -> np.ndarray:
    f = np.asarray(f, dtype=complex).reshape(-1)
    if len(f) > model.depth + 1:
        raise CoefficientOverflow(f"at most {model.depth + 1} coefficients fit this model, got {len(f)}")
    if len(f) < model.depth + 1:
        f = np.concatenate([f, np.zeros(model.depth + 1 - len(f), dtype=complex)])
    return f


def embed(f, model: RealizationModel) -> SampledFunction:
    """J f = sum_n f_n * (g_n / b_n) as a function on the space.

    The sum accumulates in ascending n with the division done first, so the
    pointwise value agrees bit-for-bit with pairing f against
    :func:`point_functional`.
    """
    f = _check_coeffs(f, model)
    acc = np.zeros(len(model.dense.space), dtype=complex)
    for n in range(model.depth + 1):
        acc = acc + f[n] * (model.g[n].values / model.b[n])
    return SampledFunction(model.dense.space, acc)


def point_functional(x: int, model: RealizationModel) -> np.ndarray:
    """Coefficients of the evaluation at x: (g_n(x) / b_n) for n <= depth."""
    if not (0 <= int(x) < len(model.dense.space)):
        raise ValidationError(f"point index {x} out of range")
    return np.array([model.g[n].values[x] / model.b[n] for n in range(model.depth + 1)])


def pair(f, functional: np.ndarray) -> complex:
    """<f, functional> accumulated in the same order as :func:`embed`."""
    acc = 0.0 + 0.0j
    for fn, phi in zip(np.asarray(f, dtype=complex), functional):
        acc = acc + fn * phi
    return acc


def very_independence_check(model: RealizationModel) -> bool:
    """Exact triangular pattern of the matrix [g_m(y_{n+1})].

    True iff g_m(y_{n+1}) = 0 for every m > n (the prefix absorbs later
    points) and g_n(y_{n+1}) != 0 on the diagonal, for n, m <= depth.  This
    is the finite content of the induction showing no nonzero coefficient
    sequence can sum to the zero function.
    """
    N = model.depth
    order = model.dense.order
    if len(order) < N + 2:
        raise DepthExceedsSequence(f"need at least {N + 2} enumerated points, have {len(order)}")
    for n in range(N + 1):
        y_next = order[n]  # y_{n+1} in 1-based counting
        if model.g[n].values[y_next] == 0.0:
            return False
        for m in range(n + 1, N + 1):
            if model.g[m].values[y_next] != 0.0:
                return False
    return True


def point_eval_rank(
    points,
    M: int,
    model: RealizationModel,
    tol: float = 1e-10,
    allow_duplicates: bool = False,
) -> int:
    """Numerical rank of [g_m(x_i)] for m = 0..M over the given points.

    Equals the number of points once M is large enough; singular values
    above ``tol * sigma_max`` count toward the rank.
    """
    points = [int(i) for i in points]
    if not allow_duplicates and len(set(points)) != len(points):
        raise DuplicatePoint("points must be distinct (pass allow_duplicates to bypass)")
    if M > model.depth:
        raise DepthExceedsSequence(f"M = {M} exceeds the model depth {model.depth}")
    mat = np.array([[model.g[m].values[i] for i in points] for m in range(M + 1)])
    sv = np.linalg.svd(mat, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int((sv >= tol * sv[0]).sum())


class TopologyProbe(NamedTuple):
    n: int
    U: tuple
    passed: bool


def topology_probe(x: int, eps: float, model: RealizationModel) -> TopologyProbe:
    """Carve a neighborhood of x out of two consecutive g's.

    For the minimal n with rho(x, y_n) < eps/2, the set
    ``U = {z : g_{n-1}(z) > g_n(z) and g_n(z) < eps/2}`` is open in the
    topology generated by the g's; the probe passes when x lies in U and U
    sits inside the metric ball B(x, eps), which is the two-sided inclusion
    making the g's generate the metric topology.
    """
    if not (0.0 < eps < 1.0):
        raise ValidationError("eps must lie in (0, 1)")
    space = model.dense.space
    if not (0 <= int(x) < len(space)):
        raise ValidationError(f"point index {x} out of range")
    order = model.dense.order
    n = None
    for k in range(1, model.depth + 1):
        if space.dist[x, order[k - 1]] < eps / 2.0:
            n = k
            break
    if n is None:
        raise PrefixTooShallow(f"no enumerated point within eps/2 = {eps / 2} of point {x}")
    g_prev = model.g[n - 1].values.real
    g_cur = model.g[n].values.real
    members = np.flatnonzero((g_prev > g_cur) & (g_cur < eps / 2.0))
    in_U = int(x) in members
    inside_ball = bool(np.all(space.dist[x, members] < eps))
    return TopologyProbe(n, tuple(int(i) for i in members), in_U and inside_ball)


def coefficient_roundtrip(f, model: RealizationModel) -> np.ndarray:
    """Embed f, then recover it from the values on y_1..y_{N+1}.

    Substituting the enumerated points in order gives a triangular system
    with diagonal g_n(y_{n+1}); forward substitution returns the
    coefficients.

    Raises:
        IllConditionedPrefix: a diagonal pivot is below 1e-14.
    """
    f = _check_coeffs(f, model)
    N = model.depth
    order = model.dense.order
    if len(order) < N + 1:
        raise DepthExceedsSequence(f"need {N + 1} enumerated points, have {len(order)}")
    Jf = embed(f, model)
    recovered = np.zeros(N + 1, dtype=complex)
    for n in range(N + 1):
        y = order[n]
        pivot = model.g[n].values[y]
        if abs(pivot) < _PIVOT_FLOOR:
            raise IllConditionedPrefix(f"pivot g_{n}(y_{n + 1}) = {pivot} below {_PIVOT_FLOOR:g}")
        partial = 0.0 + 0.0j
        for m in range(n):
            partial = partial + recovered[m] * (model.g[m].values[y] / model.b[m])
        recovered[n] = (Jf.values[y] - partial) * model.b[n] / pivot
    return recovered
