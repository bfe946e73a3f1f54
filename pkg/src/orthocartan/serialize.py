"""JSON encoding of complex matrices as row-major nested ``[re, im]`` pairs."""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionError, StructureError


def encode_matrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def decode_matrix(data) -> np.ndarray:
    """Inverse of :func:`encode_matrix`; also accepts plain real entries."""
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StructureError(f"malformed matrix: {exc}") from None
    if arr.ndim == 3 and arr.shape[2] == 2:
        out = arr[..., 0] + 1j * arr[..., 1]
    elif arr.ndim == 2:
        out = arr.astype(complex)
    else:
        raise DimensionError(f"malformed matrix of shape {arr.shape}")
    if out.shape[0] != out.shape[1]:
        raise DimensionError(f"matrix must be square, got {out.shape}")
    if not np.all(np.isfinite(out)):
        raise StructureError("matrix has non-finite entries")
    return out


def encode_vector(v) -> list:
    return [float(x) for x in np.asarray(v, dtype=float).ravel()]
