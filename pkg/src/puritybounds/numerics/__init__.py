"""Dense complex linear algebra: Hermitian eigensolver, determinant, singular values.

The inner loops live in a compiled extension (``_ckernels``). When it is not
built, or ``PURITYBOUNDS_BACKEND=python`` is set, the numpy implementation in
``_pykernels`` is used instead. Both implement the same algorithms.
"""
import os
from dataclasses import dataclass

import numpy as np

from ..errors import ContractViolation
from ..tolerances import TOL
from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_KERNELS = {"python": _pykernels}
if _ckernels is not None:
    _KERNELS["compiled"] = _ckernels


def _select_backend():
    forced = os.environ.get("PURITYBOUNDS_BACKEND", "").strip().lower()
    if forced:
        if forced not in _KERNELS:
            raise ImportError(f"backend {forced!r} unavailable; have {sorted(_KERNELS)}")
        return forced
    return "compiled" if "compiled" in _KERNELS else "python"


BACKEND = _select_backend()


def available_backends():
    return sorted(_KERNELS)


def _kernels(backend):
    name = BACKEND if backend is None else backend
    try:
        return _KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}") from None


@dataclass(frozen=True)
class HermitianEig:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_matrix(m):
    m = np.asarray(m)
    if m.ndim != 2:
        raise ContractViolation(f"expected a 2-d matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation("matrix has non-finite entries")
    return m


def hermitian_eig(m, backend=None):
    """Eigendecomposition of a Hermitian matrix.

    Householder reduction to a real tridiagonal matrix followed by
    implicit-shift QL. Eigenvalues are returned ascending, eigenvectors as
    the columns of a unitary matrix.
    """
    m = _as_matrix(m)
    n, k = m.shape
    if n != k:
        raise ContractViolation(f"hermitian_eig needs a square matrix, got {m.shape}")
    if n and np.max(np.abs(m - m.conj().T)) > TOL.hermiticity:
        raise ContractViolation("matrix is not Hermitian within %g" % TOL.hermiticity)
    kern = _kernels(backend)
    a = np.array(m, dtype=np.complex128, order="C")
    d, e, q = kern.tridiagonalize(a)
    zt = np.eye(n)
    kern.tql(d, e, zt)
    order = np.argsort(d, kind="stable")
    vecs = q @ zt[order].T
    return HermitianEig(d[order], vecs)


def det_complex(m, backend=None):
    """Determinant via LU factorization with partial pivoting."""
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ContractViolation(f"det_complex needs a square matrix, got {m.shape}")
    a = np.array(m, dtype=np.complex128, order="C")
    return _kernels(backend).lu_det(a)


def singular_values(m, backend=None):
    """Singular values, descending, from the smaller Gram matrix.

    Tiny negative eigenvalues from round-off are clamped to zero, so values
    below roughly sqrt(machine epsilon) times the largest are not resolved.
    """
    m = _as_matrix(m)
    gram = m @ m.conj().T if m.shape[0] <= m.shape[1] else m.conj().T @ m
    gram = 0.5 * (gram + gram.conj().T)
    lam = hermitian_eig(gram, backend=backend).eigenvalues
    return np.sqrt(np.clip(lam, 0.0, None))[::-1]


__all__ = [
    "BACKEND",
    "HermitianEig",
    "available_backends",
    "det_complex",
    "hermitian_eig",
    "singular_values",
]
