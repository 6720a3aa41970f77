"""Gaussian wave packets split into (d1, d2) coordinate blocks.

A packet is ``psi(x) = C exp(i/hbar [(x - X).A(x - X) + P.x])`` with complex
symmetric shape ``A`` and positive-definite ``Im A``. Purity of the reduced
packet and overlaps with block-diagonal references are closed-form
determinant expressions and contain no hbar.
"""
from dataclasses import dataclass

import numpy as np

from .errors import CausticError, ContractViolation, InvariantViolation
from .numerics import det_complex, hermitian_eig
from .tolerances import TOL

CAUSTIC_COND = 1e12


@dataclass(frozen=True)
class GaussianShape:
    d1: int
    d2: int
    A: np.ndarray

    def __post_init__(self):
        a = np.array(self.A, dtype=complex)
        d = self.d1 + self.d2
        if self.d1 < 1 or self.d2 < 1:
            raise ContractViolation(f"block dimensions must be >= 1, got ({self.d1}, {self.d2})")
        if a.shape != (d, d):
            raise ContractViolation(f"shape matrix must be {d}x{d}, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ContractViolation("shape matrix has non-finite entries")
        if np.max(np.abs(a - a.T)) > TOL.hermiticity * max(1.0, np.max(np.abs(a))):
            raise ContractViolation("shape matrix must be complex symmetric (A21 = A12^T)")
        a = 0.5 * (a + a.T)
        lam_min = float(hermitian_eig(a.imag).eigenvalues[0])
        if lam_min <= 0.0:
            raise ContractViolation(
                f"Im A is not positive definite: smallest eigenvalue {lam_min:.17g}")
        a.setflags(write=False)
        object.__setattr__(self, "A", a)

    @classmethod
    def from_blocks(cls, a11, a22, a12=None):
        a11 = np.atleast_2d(np.asarray(a11, dtype=complex))
        a22 = np.atleast_2d(np.asarray(a22, dtype=complex))
        d1, d2 = a11.shape[0], a22.shape[0]
        a12 = np.zeros((d1, d2), complex) if a12 is None else np.asarray(a12, complex).reshape(d1, d2)
        return cls(d1, d2, np.block([[a11, a12], [a12.T, a22]]))

    @property
    def d(self):
        return self.d1 + self.d2

    @property
    def A11(self):
        return self.A[:self.d1, :self.d1]

    @property
    def A12(self):
        return self.A[:self.d1, self.d1:]

    @property
    def A21(self):
        return self.A[self.d1:, :self.d1]

    @property
    def A22(self):
        return self.A[self.d1:, self.d1:]

    def is_block_diagonal(self, tol=0.0):
        return bool(np.all(np.abs(self.A12) <= tol))

    def swapped(self):
        """Same packet with the two coordinate blocks exchanged."""
        perm = np.r_[self.d1:self.d, :self.d1]
        return GaussianShape(self.d2, self.d1, self.A[np.ix_(perm, perm)])


@dataclass(frozen=True)
class GaussianPacket:
    shape: GaussianShape
    X: np.ndarray
    P: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise ContractViolation(f"hbar must be positive, got {self.hbar!r}")
        for name in ("X", "P"):
            v = np.asarray(getattr(self, name), dtype=float).reshape(-1)
            if v.size != self.shape.d:
                raise ContractViolation(f"{name} must have length {self.shape.d}")
            object.__setattr__(self, name, v)

    def norm_constant(self):
        """|C|, from |C|^2 = det(2 Im A / (pi hbar))^(1/2)."""
        m = 2.0 * self.shape.A.imag / (np.pi * self.hbar)
        return float(np.linalg.det(m) ** 0.25)

    def __call__(self, x):
        """Wavefunction at points ``x`` of shape (..., d)."""
        x = np.asarray(x, dtype=float)
        y = x - self.X
        quad = np.einsum("...i,ij,...j->...", y, self.shape.A, y)
        return self.norm_constant() * np.exp(1j / self.hbar * (quad + x @ self.P))


@dataclass(frozen=True)
class SymplecticMap:
    M: np.ndarray

    def __post_init__(self):
        m = np.array(self.M, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ContractViolation(f"symplectic map must be 2d x 2d, got {m.shape}")
        j = symplectic_form(m.shape[0] // 2)
        err = np.max(np.abs(m.T @ j @ m - j))
        if err > TOL.algebraic * max(1.0, np.max(np.abs(m)) ** 2):
            raise ContractViolation(f"matrix is not symplectic (|M^T J M - J| = {err:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "M", m)

    @property
    def d(self):
        return self.M.shape[0] // 2

    @property
    def blocks(self):
        d = self.d
        m = self.M
        return m[:d, :d], m[:d, d:], m[d:, :d], m[d:, d:]


def symplectic_form(d):
    z = np.zeros((d, d))
    e = np.eye(d)
    return np.block([[z, e], [-e, z]])


def purity_matrix(shape):
    """The 2d x 2d matrix whose determinant enters the reduced purity."""
    im11, im22 = shape.A11.imag, shape.A22.imag
    a12, a21 = shape.A12, shape.A21
    z11 = np.zeros_like(im11, dtype=complex)
    z22 = np.zeros_like(im22, dtype=complex)
    h = 0.5j
    return np.block([
        [im11, h * a12.conj(), z11, -h * a12],
        [h * a21.conj(), im22, -h * a21, z22],
        [z11, -h * a12, im11, h * a12.conj()],
        [-h * a21, z22, h * a21.conj(), im22],
    ])


def purity_gaussian(shape):
    """Purity of the reduced packet: det(Im A) |det M|^(-1/2)."""
    det_im = det_complex(shape.A.imag).real
    det_m = det_complex(purity_matrix(shape))
    if abs(det_m.imag) > 1e-9 * abs(det_m):
        raise InvariantViolation(["purity_determinant_real"], f"det = {det_m!r}")
    val = det_im / np.sqrt(abs(det_m))
    if val > 1.0 + 1e-9:
        raise InvariantViolation(["purity_at_most_one"], f"I = {val!r}")
    return float(val)


def cross_correlation_gaussian(a, b):
    """|<phi|psi>|^4 for packets with shapes ``a`` and block-diagonal ``b`` at a
    common phase-space centre: 4^d det(Im A) det(Im B) / |det(A - B*)|^2.
    """
    if (a.d1, a.d2) != (b.d1, b.d2):
        raise ContractViolation(f"block split mismatch {(a.d1, a.d2)} vs {(b.d1, b.d2)}")
    if not b.is_block_diagonal(TOL.hermiticity):
        raise ContractViolation("reference shape B must be block diagonal (B12 = B21 = 0)")
    num = det_complex(a.A.imag).real * det_complex(b.A.imag).real
    den = abs(det_complex(a.A - b.A.conj())) ** 2
    return float(4.0 ** a.d * num / den)


def optimal_reference(a):
    """Block-diagonal reference keeping A11 and A22; optimal to leading order
    in the off-diagonal coupling."""
    return GaussianShape.from_blocks(a.A11, a.A22)


def propagate_shape(a, smap):
    """Linearized transport A' = 1/2 (Mpq + 2 Mpp A)(Mqq + 2 Mqp A)^-1."""
    if smap.d != a.d:
        raise ContractViolation(f"map acts on {smap.d} degrees of freedom, shape has {a.d}")
    mqq, mqp, mpq, mpp = smap.blocks
    den = mqq + 2.0 * mqp @ a.A
    num = mpq + 2.0 * mpp @ a.A
    cond = np.linalg.cond(den)
    if not np.isfinite(cond) or cond > CAUSTIC_COND:
        raise CausticError(f"caustic: transport denominator condition number {cond:.3g}")
    out = 0.5 * np.linalg.solve(den.T, num.T).T
    out = 0.5 * (out + out.T)
    try:
        return GaussianShape(a.d1, a.d2, out)
    except ContractViolation as exc:
        raise InvariantViolation(["propagated_shape_normalizable"], str(exc)) from exc


def transported_autocorrelation(a_t, a_0):
    """Cross-correlation of the evolved shape with the initial product shape."""
    if not a_0.is_block_diagonal(TOL.hermiticity):
        raise ContractViolation("initial shape must be block diagonal (a product packet)")
    return cross_correlation_gaussian(a_t, a_0)


def rotation_map(theta):
    """One-dof harmonic flow by angle ``theta``."""
    c, s = np.cos(theta), np.sin(theta)
    return SymplecticMap(np.array([[c, s], [-s, c]]))


def quadratic_flow_map(hessian, t=1.0):
    """Flow map exp(t J K) of the quadratic Hamiltonian z.K.z/2, z = (q, p)."""
    from scipy.linalg import expm

    k = np.asarray(hessian, dtype=float)
    k = 0.5 * (k + k.T)
    return SymplecticMap(expm(t * symplectic_form(k.shape[0] // 2) @ k))


def coupled_oscillators_map(t, coupling, omega=(1.0, 1.3)):
    """Flow of two unit-mass oscillators with a q1 q2 coupling term."""
    w1, w2 = omega
    k = np.zeros((4, 4))
    k[0, 0], k[1, 1] = w1 ** 2, w2 ** 2
    k[0, 1] = k[1, 0] = coupling
    k[2, 2] = k[3, 3] = 1.0
    return quadratic_flow_map(k, t)


def random_shape(d1, d2, rng, coupling=1.0, block_diagonal=False):
    """Random valid shape: Im A with eigenvalues in [0.5, 2], O(1) real part."""
    d = d1 + d2
    q, _ = np.linalg.qr(rng.standard_normal((d, d)))
    im = (q * rng.uniform(0.5, 2.0, d)) @ q.T
    re = rng.normal(scale=0.5, size=(d, d))
    a = re + re.T + 1j * (im + im.T) / 2
    a[:d1, d1:] *= coupling
    a[d1:, :d1] *= coupling
    if block_diagonal:
        a[:d1, d1:] = 0.0
        a[d1:, :d1] = 0.0
        # principal blocks of a PD matrix stay PD
    return GaussianShape(d1, d2, a)


# Reference family for the near-unity scaling checks: A12 = eps * Z12.
EPS_FAMILY = (0.3 + 1.0j, -0.2 + 0.8j, 1.0 + 0.5j)
EPS_VALUES = (0.2, 0.1, 0.05, 0.025)


def leading_order_scaling(eps_values=EPS_VALUES, family=EPS_FAMILY):
    """Purity I and optimal-reference overlap C along A12 = eps Z12.

    Returns the log-log slope of (I - C) against eps and the ratio
    (1 - C) / (1 - I) at the smallest eps.
    """
    a11, a22, z12 = family
    eps = np.asarray(eps_values, dtype=float)
    pur = np.empty(eps.size)
    cc = np.empty(eps.size)
    for i, e in enumerate(eps):
        a = GaussianShape.from_blocks(a11, a22, e * np.asarray(z12))
        pur[i] = purity_gaussian(a)
        cc[i] = cross_correlation_gaussian(a, optimal_reference(a))
    slope = np.polyfit(np.log(eps), np.log(pur - cc), 1)[0]
    k = int(np.argmin(eps))
    return {
        "eps": eps,
        "purity": pur,
        "crosscorr": cc,
        "slope": float(slope),
        "ratio": float((1.0 - cc[k]) / (1.0 - pur[k])),
    }
