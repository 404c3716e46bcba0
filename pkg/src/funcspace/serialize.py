"""JSON helpers for complex scalars and matrices.

Complex numbers travel as ``[re, im]`` pairs; complex matrices as a pair of
real matrices under the keys ``"re"`` and ``"im"``.  Real inputs are accepted
wherever a complex value is expected.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError


def complex_to_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(obj) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    raise ValidationError(f"expected a real number or an [re, im] pair, got {obj!r}")


def complex_vector_to_json(values) -> list:
    return [complex_to_pair(z) for z in np.asarray(values, dtype=complex)]


def complex_vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list):
        raise ValidationError("expected a list of [re, im] pairs")
    return np.array([pair_to_complex(z) for z in obj], dtype=complex)


def complex_matrix_to_json(mat) -> dict:
    mat = np.asarray(mat, dtype=complex)
    return {"re": mat.real.tolist(), "im": mat.imag.tolist()}


def complex_matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "re" not in obj:
        raise ValidationError('expected a matrix object with "re" (and optional "im") keys')
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.shape != im.shape:
        raise ValidationError('"re" and "im" matrices must have identical shapes')
    return re + 1j * im
