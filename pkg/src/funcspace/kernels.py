"""Kernel expression algebra, Gram-matrix assembly, and PSD testing.

A :class:`KernelExpr` is a closed expression tree whose every node denotes a
positive semi-definite kernel by construction: the Szego kernel on the unit
disk, its ball analogue, nonnegative constants, rank-one kernels
``w(x) conj(w(y))``, sums, positive scalings, entrywise (Schur/Hadamard)
products, and the geometric series ``1 / (1 - K)`` of a strictly contractive
kernel.  Finite sections of a kernel on a sample are materialized as
Hermitian :class:`GramMatrix` values, and positive semi-definiteness is
decided from the smallest eigenvalue under a relative tolerance rule.

Arbitrary user matrices never enter the grammar; they can only be fed to
:func:`psd_check`, which assumes nothing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeomDiverges, NotHermitian, OutOfDomain, ValidationError
from .geometry import EuclideanPointSet
from .serialize import (
    complex_matrix_from_json,
    complex_matrix_to_json,
    complex_to_pair,
    complex_vector_from_json,
    complex_vector_to_json,
    pair_to_complex,
)

_FN_KINDS = ("coordinate", "polynomial", "moebius", "exp", "compose", "product", "sum", "scale")


@dataclass(frozen=True)
class ClosedFormFunction:
    """Symbol usable anywhere: coordinate, polynomial, Moebius, exp, and
    their compositions, products, sums, and scalar multiples.

    Polynomial coefficients are ascending (``coeffs[k]`` multiplies ``z**k``);
    the Moebius parameter must satisfy ``|a| < 1``.  Domain problems surface
    at evaluation time.
    """

    kind: str
    index: int | None = None
    coeffs: tuple | None = None
    a: complex | None = None
    factor: complex | None = None
    children: tuple = ()

    def __post_init__(self):
        if self.kind not in _FN_KINDS:
            raise ValidationError(f"unknown function kind {self.kind!r}")
        if self.kind == "moebius" and abs(self.a) >= 1.0:
            raise ValidationError(f"moebius parameter must satisfy |a| < 1, got |{self.a}| = {abs(self.a)}")

    def __call__(self, point) -> complex:
        point = np.atleast_1d(np.asarray(point, dtype=complex))
        k = self.kind
        if k == "coordinate":
            if not (0 <= self.index < point.shape[0]):
                raise OutOfDomain(f"coordinate {self.index} undefined for a point of dimension {point.shape[0]}")
            return complex(point[self.index])
        if k == "compose":
            outer, inner = self.children
            return outer(np.array([inner(point)], dtype=complex))
        if k == "product":
            out = 1.0 + 0.0j
            for child in self.children:
                out *= child(point)
            return out
        if k == "sum":
            out = 0.0 + 0.0j
            for child in self.children:
                out += child(point)
            return out
        if k == "scale":
            return self.factor * self.children[0](point)
        # remaining kinds act on a scalar
        if point.shape[0] != 1:
            raise OutOfDomain(f"{k} expects a scalar input, got dimension {point.shape[0]}")
        z = complex(point[0])
        if k == "polynomial":
            out = 0.0 + 0.0j
            for c in reversed(self.coeffs):
                out = out * z + c
            return out
        if k == "moebius":
            return (z - self.a) / (1.0 - np.conj(self.a) * z)
        if k == "exp":
            return complex(np.exp(z))
        raise AssertionError(k)

    def eval_on(self, sample: EuclideanPointSet) -> np.ndarray:
        return np.array([self(p) for p in sample.points], dtype=complex)


def coordinate(index: int = 0) -> ClosedFormFunction:
    if index < 0:
        raise ValidationError("coordinate index must be nonnegative")
    return ClosedFormFunction("coordinate", index=index)


def polynomial(coeffs) -> ClosedFormFunction:
    return ClosedFormFunction("polynomial", coeffs=tuple(complex(c) for c in coeffs))


def moebius(a) -> ClosedFormFunction:
    """The disk automorphism z -> (z - a) / (1 - conj(a) z), |a| < 1."""
    return ClosedFormFunction("moebius", a=complex(a))


def exponential() -> ClosedFormFunction:
    return ClosedFormFunction("exp")


def compose(outer: ClosedFormFunction, inner: ClosedFormFunction) -> ClosedFormFunction:
    return ClosedFormFunction("compose", children=(outer, inner))


def fn_product(*fns) -> ClosedFormFunction:
    return ClosedFormFunction("product", children=tuple(fns))


def fn_sum(*fns) -> ClosedFormFunction:
    return ClosedFormFunction("sum", children=tuple(fns))


def fn_scale(factor, fn: ClosedFormFunction) -> ClosedFormFunction:
    return ClosedFormFunction("scale", factor=complex(factor), children=(fn,))


def szego_section(z0) -> ClosedFormFunction:
    """The Szego kernel sliced at z0, i.e. x -> 1 / (1 - x conj(z0)).

    Assembled from grammar primitives: for z0 != 0 the slice equals
    ``conj(z0) / (1 - |z0|^2) * (moebius(z0) + 1/conj(z0))``.
    """
    z0 = complex(z0)
    if abs(z0) >= 1.0:
        raise ValidationError("anchor must lie in the open unit disk")
    if z0 == 0:
        return polynomial([1.0])
    c = np.conj(z0)
    return fn_scale(c / (1.0 - abs(z0) ** 2), fn_sum(moebius(z0), polynomial([1.0 / c])))


_KERNEL_OPS = ("szego", "ball", "constant", "rank1", "sum", "scale", "hadamard", "geom")


@dataclass(frozen=True)
class KernelExpr:
    """Expression tree certified to denote a positive semi-definite kernel."""

    op: str
    dim: int | None = None
    value: float | None = None
    factor: float | None = None
    fn: ClosedFormFunction | None = None
    children: tuple = ()

    def __post_init__(self):
        if self.op not in _KERNEL_OPS:
            raise ValidationError(f"unknown kernel op {self.op!r}")
        if self.op == "constant" and self.value < 0.0:
            raise ValidationError("constant kernels must be nonnegative")
        if self.op == "scale" and not self.factor > 0.0:
            raise ValidationError("kernel scalings must be positive")
        if self.op == "ball" and self.dim < 1:
            raise ValidationError("ball dimension must be >= 1")
        if self.op == "sum" and not self.children:
            raise ValidationError("kernel sum needs at least one term")


def szego() -> KernelExpr:
    return KernelExpr("szego")


def ball(dim: int) -> KernelExpr:
    return KernelExpr("ball", dim=int(dim))


def constant(value: float) -> KernelExpr:
    return KernelExpr("constant", value=float(value))


def rank_one(fn: ClosedFormFunction) -> KernelExpr:
    return KernelExpr("rank1", fn=fn)


def kernel_sum(*kernels) -> KernelExpr:
    return KernelExpr("sum", children=tuple(kernels))


def scale(factor: float, kernel: KernelExpr) -> KernelExpr:
    return KernelExpr("scale", factor=float(factor), children=(kernel,))


def hadamard(left: KernelExpr, right: KernelExpr) -> KernelExpr:
    return KernelExpr("hadamard", children=(left, right))


def geom(kernel: KernelExpr) -> KernelExpr:
    """1 / (1 - K), valid while |K| < 1 at every evaluated pair."""
    return KernelExpr("geom", children=(kernel,))


def _as_point(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=complex))


def kernel_eval(K: KernelExpr, x, y) -> complex:
    """Evaluate the kernel at a pair of points.

    Raises:
        OutOfDomain: point outside the open disk/ball of a built-in kernel.
        GeomDiverges: a ``geom`` node saw an inner value of modulus >= 1.
    """
    x = _as_point(x)
    y = _as_point(y)
    op = K.op
    if op == "szego":
        if x.shape[0] != 1 or y.shape[0] != 1:
            raise OutOfDomain("szego kernel lives on the unit disk of C^1")
        if abs(x[0]) >= 1.0 or abs(y[0]) >= 1.0:
            raise OutOfDomain(f"szego kernel needs |z| < 1, got ({x[0]}, {y[0]})")
        return 1.0 / (1.0 - x[0] * np.conj(y[0]))
    if op == "ball":
        if x.shape[0] != K.dim or y.shape[0] != K.dim:
            raise OutOfDomain(f"ball kernel expects points of dimension {K.dim}")
        if (np.abs(x) ** 2).sum() >= 1.0 or (np.abs(y) ** 2).sum() >= 1.0:
            raise OutOfDomain("ball kernel needs points inside the open unit ball")
        return 1.0 / (1.0 - complex(np.sum(x * np.conj(y))))
    if op == "constant":
        return complex(K.value)
    if op == "rank1":
        return K.fn(x) * np.conj(K.fn(y))
    if op == "sum":
        return sum((kernel_eval(child, x, y) for child in K.children), 0.0 + 0.0j)
    if op == "scale":
        return K.factor * kernel_eval(K.children[0], x, y)
    if op == "hadamard":
        return kernel_eval(K.children[0], x, y) * kernel_eval(K.children[1], x, y)
    if op == "geom":
        v = kernel_eval(K.children[0], x, y)
        if abs(v) >= 1.0:
            raise GeomDiverges(f"geometric series diverges at ({x.tolist()}, {y.tolist()}): |K| = {abs(v)}")
        return 1.0 / (1.0 - v)
    raise AssertionError(op)


@dataclass(frozen=True)
class GramMatrix:
    """Finite section of a kernel on a labeled sample; exactly Hermitian."""

    sample: EuclideanPointSet
    entries: np.ndarray

    def __init__(self, sample: EuclideanPointSet, entries):
        entries = np.asarray(entries, dtype=complex)
        n = len(sample)
        if entries.shape != (n, n):
            raise ValidationError(f"expected a {n}x{n} matrix")
        if not np.array_equal(entries, entries.conj().T):
            raise NotHermitian("Gram entries must be exactly Hermitian")
        entries = entries.copy()
        entries.flags.writeable = False
        object.__setattr__(self, "sample", sample)
        object.__setattr__(self, "entries", entries)

    def to_json(self) -> dict:
        out = {"sample": self.sample.to_json()}
        out.update(complex_matrix_to_json(self.entries))
        return out

    @classmethod
    def from_json(cls, obj) -> "GramMatrix":
        sample = EuclideanPointSet.from_json(obj["sample"])
        return cls(sample, complex_matrix_from_json(obj))


def hermitian_from_upper(entry, n: int) -> np.ndarray:
    """Fill a Hermitian matrix from an upper-triangle entry function.

    Computing each pair once and mirroring the conjugate keeps the matrix
    Hermitian to the last bit, which the PSD tolerance rule relies on.
    """
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            v = entry(i, j)
            out[i, j] = v
            if i != j:
                out[j, i] = np.conj(v)
            else:
                out[i, i] = complex(v.real, 0.0)
    return out


def gram(K: KernelExpr, sample: EuclideanPointSet) -> GramMatrix:
    """Assemble the Hermitian matrix [K(x_i, x_j)] on the sample."""
    pts = sample.points

    def entry(i, j):
        try:
            return kernel_eval(K, pts[i], pts[j])
        except (OutOfDomain, GeomDiverges) as exc:
            raise type(exc)(f"gram entry ({i},{j}): {exc}") from None

    return GramMatrix(sample, hermitian_from_upper(entry, len(sample)))


@dataclass(frozen=True)
class PsdReport:
    """Verdict of a PSD test under the relative eigenvalue rule."""

    is_psd: bool
    min_eigenvalue: float
    tolerance_used: float
    max_abs_eigenvalue: float

    def to_json(self) -> dict:
        return {
            "is_psd": self.is_psd,
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance_used": self.tolerance_used,
            "max_abs_eigenvalue": self.max_abs_eigenvalue,
        }


def psd_check(G, tol: float = 1e-10) -> PsdReport:
    """Decide positive semi-definiteness of a Hermitian matrix.

    The matrix passes when its smallest eigenvalue satisfies
    ``lambda_min >= -tol * max(1, max_i |lambda_i|)``.  ``G`` may be a
    :class:`GramMatrix` or a raw matrix; raw input must be exactly Hermitian.
    """
    if tol < 0.0:
        raise ValidationError("tolerance must be nonnegative")
    entries = G.entries if isinstance(G, GramMatrix) else np.asarray(G, dtype=complex)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1] or entries.shape[0] == 0:
        raise ValidationError("psd_check needs a nonempty square matrix")
    if not np.array_equal(entries, entries.conj().T):
        raise NotHermitian("matrix is not Hermitian")
    eigs = np.linalg.eigvalsh(entries)
    min_eig = float(eigs.min())
    max_abs = float(np.abs(eigs).max())
    return PsdReport(
        is_psd=bool(min_eig >= -tol * max(1.0, max_abs)),
        min_eigenvalue=min_eig,
        tolerance_used=tol,
        max_abs_eigenvalue=max_abs,
    )


def schur_product_check(K: KernelExpr, L: KernelExpr, sample: EuclideanPointSet, tol: float = 1e-10) -> PsdReport:
    """PSD verdict for the entrywise product of two kernels on a sample."""
    return psd_check(gram(hadamard(K, L), sample), tol=tol)


# ---------------------------------------------------------------------------
# JSON grammar


def fn_to_json(fn: ClosedFormFunction) -> dict:
    k = fn.kind
    if k == "coordinate":
        return {"kind": "coordinate", "index": fn.index}
    if k == "polynomial":
        return {"kind": "polynomial", "coeffs": complex_vector_to_json(fn.coeffs)}
    if k == "moebius":
        return {"kind": "moebius", "a": complex_to_pair(fn.a)}
    if k == "exp":
        return {"kind": "exp"}
    if k == "compose":
        return {"kind": "compose", "outer": fn_to_json(fn.children[0]), "inner": fn_to_json(fn.children[1])}
    if k == "product":
        return {"kind": "product", "factors": [fn_to_json(c) for c in fn.children]}
    if k == "sum":
        return {"kind": "sum", "terms": [fn_to_json(c) for c in fn.children]}
    if k == "scale":
        return {"kind": "scale", "factor": complex_to_pair(fn.factor), "arg": fn_to_json(fn.children[0])}
    raise AssertionError(k)


def fn_from_json(obj) -> ClosedFormFunction:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError('function JSON must contain a "kind" key')
    k = obj["kind"]
    if k == "coordinate":
        return coordinate(int(obj["index"]))
    if k == "polynomial":
        return polynomial(complex_vector_from_json(obj["coeffs"]))
    if k == "moebius":
        return moebius(pair_to_complex(obj["a"]))
    if k == "exp":
        return exponential()
    if k == "compose":
        return compose(fn_from_json(obj["outer"]), fn_from_json(obj["inner"]))
    if k == "product":
        return fn_product(*(fn_from_json(c) for c in obj["factors"]))
    if k == "sum":
        return fn_sum(*(fn_from_json(c) for c in obj["terms"]))
    if k == "scale":
        return fn_scale(pair_to_complex(obj["factor"]), fn_from_json(obj["arg"]))
    raise ValidationError(f"unknown function kind {k!r}")


def kernel_to_json(K: KernelExpr) -> dict:
    op = K.op
    if op == "szego":
        return {"op": "szego"}
    if op == "ball":
        return {"op": "ball", "dim": K.dim}
    if op == "constant":
        return {"op": "constant", "value": K.value}
    if op == "rank1":
        return {"op": "rank1", "fn": fn_to_json(K.fn)}
    if op == "sum":
        return {"op": "sum", "terms": [kernel_to_json(c) for c in K.children]}
    if op == "scale":
        return {"op": "scale", "factor": K.factor, "arg": kernel_to_json(K.children[0])}
    if op == "hadamard":
        return {"op": "hadamard", "left": kernel_to_json(K.children[0]), "right": kernel_to_json(K.children[1])}
    if op == "geom":
        return {"op": "geom", "arg": kernel_to_json(K.children[0])}
    raise AssertionError(op)


def kernel_from_json(obj) -> KernelExpr:
    if not isinstance(obj, dict) or "op" not in obj:
        raise ValidationError('kernel JSON must contain an "op" key')
    op = obj["op"]
    if op == "szego":
        return szego()
    if op == "ball":
        return ball(int(obj["dim"]))
    if op == "constant":
        return constant(float(obj["value"]))
    if op == "rank1":
        return rank_one(fn_from_json(obj["fn"]))
    if op == "sum":
        return kernel_sum(*(kernel_from_json(c) for c in obj["terms"]))
    if op == "scale":
        return scale(float(obj["factor"]), kernel_from_json(obj["arg"]))
    if op == "hadamard":
        return hadamard(kernel_from_json(obj["left"]), kernel_from_json(obj["right"]))
    if op == "geom":
        return geom(kernel_from_json(obj["arg"]))
    raise ValidationError(f"unknown kernel op {op!r}")
