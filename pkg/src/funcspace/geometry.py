"""Finite metric spaces, Lipschitz seminorms, and exact dual-norm formulas.

A :class:`MetricSpace` is an explicit distance matrix with a distinguished
base point; functions on it are finite value vectors (:class:`SampledFunction`).
The Lipschitz norm is ``dil(f) + |f(base)|``, where ``dil`` is the largest
difference quotient.  For that norm the dual norms of point evaluations have
closed forms: ``max(1, rho(x, base))`` for a single evaluation and
``rho(x, y)`` for a difference of two, each certified here by an explicit
witness function and cross-checkable against a linear-programming oracle that
maximizes over the whole unit ball.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import (
    DegenerateSpace,
    DuplicatePoint,
    EmptySet,
    SamePoint,
    ValidationError,
    ZeroFunction,
)
from .serialize import complex_vector_from_json, complex_vector_to_json


def _validate_distance_matrix(dist: np.ndarray, triangle_tol: float) -> None:
    if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
        raise ValidationError("distance matrix must be square")
    n = dist.shape[0]
    if n == 0:
        raise ValidationError("distance matrix must be nonempty")
    if not np.all(np.isfinite(dist)):
        raise ValidationError("distance matrix must be finite")
    if np.any(np.diag(dist) != 0.0):
        raise ValidationError("distance matrix must have zero diagonal")
    if not np.array_equal(dist, dist.T):
        raise ValidationError("distance matrix must be symmetric")
    if np.any(dist < 0.0):
        raise ValidationError("distances must be nonnegative")
    off = dist[~np.eye(n, dtype=bool)]
    if n > 1 and np.any(off == 0.0):
        raise ValidationError("distinct points must have positive distance")
    # d[i,k] <= d[i,j] + d[j,k] for all triples; explicit matrices are checked
    # exactly (triangle_tol == 0), induced metrics may pass a rounding allowance.
    slack = dist[:, None, :] - (dist[:, :, None] + dist[None, :, :])
    if slack.max() > triangle_tol:
        i, j, k = np.unravel_index(np.argmax(slack), slack.shape)
        raise ValidationError(
            f"triangle inequality violated at ({i},{k}) via {j}: "
            f"{dist[i, k]} > {dist[i, j]} + {dist[j, k]}"
        )


@dataclass(frozen=True)
class EuclideanPointSet:
    """A finite list of points in C^d, the common sample type for kernels."""

    points: np.ndarray
    labels: tuple | None = None

    def __init__(self, points, labels=None, require_distinct: bool = False):
        pts = np.asarray(points, dtype=complex)
        if pts.ndim == 1:  # a flat list means n points of C^1
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.size == 0:
            raise ValidationError("points must form a nonempty n-by-dim array")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != pts.shape[0]:
                raise ValidationError("labels length must equal point count")
        if require_distinct:
            seen = {tuple(p) for p in pts}
            if len(seen) != pts.shape[0]:
                raise DuplicatePoint("points must be pairwise distinct")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def distance_matrix(self) -> np.ndarray:
        """Pairwise Euclidean distances, treating C^d as R^(2d)."""
        diff = self.points[:, None, :] - self.points[None, :, :]
        return np.sqrt((np.abs(diff) ** 2).sum(axis=-1))

    def to_json(self) -> dict:
        out = {"dim": self.dim, "points": [complex_vector_to_json(p) for p in self.points]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, obj) -> "EuclideanPointSet":
        if not isinstance(obj, dict) or "points" not in obj:
            raise ValidationError('point set JSON must contain a "points" list')
        raw = obj["points"]
        pts = []
        for entry in raw:
            # dim-1 shorthand: a bare [re, im] pair or scalar per point
            if isinstance(entry, (int, float)) or (
                isinstance(entry, list) and len(entry) == 2 and all(isinstance(v, (int, float)) for v in entry)
            ):
                pts.append(complex_vector_from_json([entry]))
            else:
                pts.append(complex_vector_from_json(entry))
        arr = np.array(pts, dtype=complex)
        if "dim" in obj and int(obj["dim"]) != arr.shape[1]:
            raise ValidationError("declared dim does not match point tuples")
        return cls(arr, labels=obj.get("labels"))


@dataclass(frozen=True)
class MetricSpace:
    """Finite metric space: labeled points, a distance matrix, a base point."""

    labels: tuple
    dist: np.ndarray
    base: int = 0

    def __init__(self, dist, labels=None, base: int = 0, triangle_tol: float = 0.0):
        dist = np.asarray(dist, dtype=float)
        _validate_distance_matrix(dist, triangle_tol)
        n = dist.shape[0]
        if labels is None:
            labels = tuple(f"p{i}" for i in range(n))
        else:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise ValidationError("labels length must equal point count")
        if not (0 <= int(base) < n):
            raise ValidationError(f"base index {base} out of range for {n} points")
        dist = dist.copy()
        dist.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "base", int(base))

    def __len__(self) -> int:
        return self.dist.shape[0]

    @property
    def diameter(self) -> float:
        return float(self.dist.max())

    @classmethod
    def from_euclidean(cls, ps: EuclideanPointSet, base: int = 0) -> "MetricSpace":
        """Metric induced on a point set.  Distances are computed in floating
        point, so the triangle check runs with a small rounding allowance."""
        d = ps.distance_matrix()
        d = 0.5 * (d + d.T)
        tol = 1e-12 * max(1.0, float(d.max()))
        return cls(d, labels=ps.labels, base=base, triangle_tol=tol)

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "dist": self.dist.tolist(), "base": self.base}

    @classmethod
    def from_json(cls, obj) -> "MetricSpace":
        if not isinstance(obj, dict) or "dist" not in obj:
            raise ValidationError('metric space JSON must contain a "dist" matrix')
        return cls(np.asarray(obj["dist"], dtype=float), labels=obj.get("labels"), base=obj.get("base", 0))


@dataclass(frozen=True)
class SampledFunction:
    """A complex-valued function known through its values on a finite sample."""

    space: object
    values: np.ndarray

    def __init__(self, space, values):
        vals = np.asarray(values, dtype=complex).reshape(-1)
        if len(vals) != len(space):
            raise ValidationError(f"expected {len(space)} values, got {len(vals)}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "values", vals)

    def __add__(self, other: "SampledFunction") -> "SampledFunction":
        return SampledFunction(self.space, self.values + other.values)

    def __sub__(self, other: "SampledFunction") -> "SampledFunction":
        return SampledFunction(self.space, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            return SampledFunction(self.space, self.values * other.values)
        return SampledFunction(self.space, self.values * complex(other))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {"values": complex_vector_to_json(self.values)}

    @classmethod
    def from_json(cls, obj, space) -> "SampledFunction":
        if not isinstance(obj, dict) or "values" not in obj:
            raise ValidationError('sampled function JSON must contain a "values" list')
        return cls(space, complex_vector_from_json(obj["values"]))


def constant_function(space, value=1.0) -> SampledFunction:
    return SampledFunction(space, np.full(len(space), complex(value)))


def distance_function(space: MetricSpace, index: int) -> SampledFunction:
    """The function rho(., y) for a point y of the space."""
    return SampledFunction(space, space.dist[:, index].astype(complex))


def set_distance(space: MetricSpace, x: int, A) -> float:
    """Distance from point ``x`` to the nonempty index set ``A``."""
    idx = sorted({int(a) for a in A})
    if not idx:
        raise EmptySet("distance to the empty set is undefined")
    for a in idx:
        if not (0 <= a < len(space)):
            raise ValidationError(f"index {a} out of range")
    return float(space.dist[x, idx].min())


def _space_distances(space) -> np.ndarray:
    if isinstance(space, MetricSpace):
        return space.dist
    if isinstance(space, EuclideanPointSet):
        return space.distance_matrix()
    raise ValidationError(f"unsupported space type {type(space).__name__}")


def dil(f: SampledFunction) -> float:
    """Largest difference quotient |f(x) - f(y)| / rho(x, y) over distinct pairs."""
    d = _space_distances(f.space)
    n = d.shape[0]
    if n < 2:
        raise DegenerateSpace("dil needs at least two points")
    iu = np.triu_indices(n, k=1)
    diffs = np.abs(f.values[:, None] - f.values[None, :])[iu]
    return float((diffs / d[iu]).max())


def lip_norm(f: SampledFunction) -> float:
    """dil(f) + |f(base)|: the Lipschitz-space norm anchored at the base point."""
    space = f.space
    if not isinstance(space, MetricSpace):
        raise ValidationError("lip_norm needs a MetricSpace with a base point")
    return dil(f) + abs(f.values[space.base])


def lip_point_norm(space: MetricSpace, x: int) -> float:
    """Dual norm of the evaluation at x: max(1, rho(x, base))."""
    return max(1.0, float(space.dist[x, space.base]))


def lip_dual_pair_norm(space: MetricSpace, x: int, y: int):
    """Dual norm of (evaluation at x) - (evaluation at y), with its witness.

    The value is ``rho(x, y)``.  The witness ``rho(., y) - rho(base, y)`` has
    Lipschitz norm at most 1 and separates x from y by exactly rho(x, y),
    which pins the supremum from below; the upper bound is the Lipschitz
    estimate ``|f(x) - f(y)| <= dil(f) rho(x, y)``.

    Returns:
        (value, witness) with ``lip_norm(witness) <= 1``.
    """
    if x == y:
        raise SamePoint("the pair functional needs two distinct points")
    witness = distance_function(space, y) - constant_function(space, space.dist[space.base, y])
    return float(space.dist[x, y]), witness


def _lip_ball_lp(space: MetricSpace, objective: np.ndarray) -> float:
    """Maximize a linear objective over real f with dil(f) + |f(base)| <= 1.

    Variables are (f_0..f_{n-1}, t, s) with t bounding every difference
    quotient and s bounding |f(base)|; the complex problem reduces to this
    real one because the optimum can be rotated to be real-valued.
    """
    n = len(space)
    nv = n + 2
    rows, rhs = [], []
    for i in range(n):
        for j in range(i + 1, n):
            for sgn in (1.0, -1.0):
                row = np.zeros(nv)
                row[i] = sgn
                row[j] = -sgn
                row[n] = -space.dist[i, j]
                rows.append(row)
                rhs.append(0.0)
    for sgn in (1.0, -1.0):
        row = np.zeros(nv)
        row[space.base] = sgn
        row[n + 1] = -1.0
        rows.append(row)
        rhs.append(0.0)
    row = np.zeros(nv)
    row[n] = 1.0
    row[n + 1] = 1.0
    rows.append(row)
    rhs.append(1.0)
    c = np.zeros(nv)
    c[:n] = -objective
    bounds = [(None, None)] * n + [(0, None), (0, None)]
    res = linprog(c, A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"LP oracle failed: {res.message}")
    return float(-res.fun)


def lip_dual_pair_norm_lp(space: MetricSpace, x: int, y: int) -> float:
    """LP oracle for the pair dual norm: sup |f(x) - f(y)| over the unit ball."""
    if x == y:
        raise SamePoint("the pair functional needs two distinct points")
    obj = np.zeros(len(space))
    obj[x] = 1.0
    obj[y] = -1.0
    return _lip_ball_lp(space, obj)


def lip_point_norm_lp(space: MetricSpace, x: int) -> float:
    """LP oracle for the point dual norm: sup |f(x)| over the unit ball."""
    obj = np.zeros(len(space))
    obj[x] = 1.0
    return _lip_ball_lp(space, obj)


def submult_ratio(space: MetricSpace, fs) -> tuple:
    """Worst product-norm inflation over pairs from ``fs``.

    Returns (max_ratio, bound) where
    ``max_ratio = max lip_norm(f g) / (lip_norm(f) lip_norm(g))`` and
    ``bound = 2 max(1, diam) + 1``; the ratio never exceeds the bound, so a
    rescaled norm is submultiplicative on the sampled algebra.
    """
    fs = list(fs)
    if not fs:
        raise EmptySet("need at least one function")
    norms = []
    for f in fs:
        nf = lip_norm(f)
        if nf == 0.0:
            raise ZeroFunction("submultiplicativity ratio undefined for the zero function")
        norms.append(nf)
    max_ratio = 0.0
    for i in range(len(fs)):
        for j in range(i, len(fs)):
            ratio = lip_norm(fs[i] * fs[j]) / (norms[i] * norms[j])
            max_ratio = max(max_ratio, ratio)
    bound = 2.0 * max(1.0, space.diameter) + 1.0
    return max_ratio, bound
