"""Pure states on H1 (x) H2: reduced densities, purity, Schmidt data and the
overlap/purity bounds.

Amplitudes are flat with index ``i1 * d2 + i2``, so ``amplitudes.reshape(d1, d2)``
is the coefficient matrix whose singular values are the Schmidt coefficients.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, NotProductStateError
from .numerics import hermitian_eig, singular_values
from .tolerances import TOL

PRODUCT_THRESHOLD = 1.0 - TOL.algebraic


@dataclass(frozen=True)
class BipartiteState:
    d1: int
    d2: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.d1 < 1 or self.d2 < 1:
            raise ContractViolation(f"dimensions must be >= 1, got ({self.d1}, {self.d2})")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.d1 * self.d2:
            raise ContractViolation(
                f"{amps.size} amplitudes do not fit a {self.d1}x{self.d2} split")
        norm2 = np.vdot(amps, amps).real
        if abs(norm2 - 1.0) > TOL.algebraic:
            raise ContractViolation(f"state is not normalized (norm^2 = {norm2!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_matrix(cls, m, normalize=False):
        m = np.asarray(m, dtype=complex)
        if normalize:
            m = m / np.linalg.norm(m)
        return cls(m.shape[0], m.shape[1], m.reshape(-1))

    @classmethod
    def product(cls, phi1, phi2, normalize=False):
        phi1 = np.asarray(phi1, dtype=complex)
        phi2 = np.asarray(phi2, dtype=complex)
        if normalize:
            phi1 = phi1 / np.linalg.norm(phi1)
            phi2 = phi2 / np.linalg.norm(phi2)
        return cls(phi1.size, phi2.size, np.kron(phi1, phi2))

    @classmethod
    def basis(cls, d1, d2, i1, i2):
        amps = np.zeros(d1 * d2, dtype=complex)
        amps[i1 * d2 + i2] = 1.0
        return cls(d1, d2, amps)

    @property
    def dims(self):
        return (self.d1, self.d2)

    @property
    def matrix(self):
        return self.amplitudes.reshape(self.d1, self.d2)


def random_vector(d, rng):
    """Haar-random unit vector: complex normal entries, normalized."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_state(d1, d2, rng):
    return BipartiteState(d1, d2, random_vector(d1 * d2, rng))


def random_product_state(d1, d2, rng):
    return BipartiteState.product(random_vector(d1, rng), random_vector(d2, rng))


def state_with_spectrum(lambdas, d1, d2, rng=None):
    """State whose Schmidt eigenvalues are ``lambdas`` (normalized to sum 1).

    With ``rng`` the Schmidt bases are Haar random; otherwise they are the
    computational bases.
    """
    lam = np.asarray(lambdas, dtype=float)
    lam = lam / lam.sum()
    r = lam.size
    if r > min(d1, d2):
        raise ContractViolation("more Schmidt values than min(d1, d2)")
    m = np.zeros((d1, d2), dtype=complex)
    m[np.arange(r), np.arange(r)] = np.sqrt(lam)
    if rng is not None:
        m = _haar_unitary(d1, rng) @ m @ _haar_unitary(d2, rng).T
    return BipartiteState.from_matrix(m, normalize=True)


def _haar_unitary(d, rng):
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@dataclass(frozen=True)
class ReducedDensity:
    dim: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise ContractViolation(f"expected {self.dim}x{self.dim}, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > TOL.algebraic:
            raise ContractViolation("reduced density is not Hermitian")
        if abs(np.trace(m) - 1.0) > TOL.algebraic:
            raise ContractViolation(f"reduced density trace {np.trace(m)!r} != 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def pure(cls, vec):
        vec = np.asarray(vec, dtype=complex)
        return cls(vec.size, np.outer(vec, vec.conj()))

    def eigenvalues(self):
        return hermitian_eig(0.5 * (self.matrix + self.matrix.conj().T)).eigenvalues

    def purity(self):
        return float(np.vdot(self.matrix, self.matrix).real)


def partial_trace(psi, over=2):
    """Reduced density of ``psi`` after tracing out subsystem ``over`` (1 or 2)."""
    m = psi.matrix
    if over == 2:
        rho = m @ m.conj().T
        dim = psi.d1
    elif over == 1:
        rho = m.T @ m.conj()
        dim = psi.d2
    else:
        raise ContractViolation(f"subsystem tag must be 1 or 2, got {over!r}")
    return ReducedDensity(dim, 0.5 * (rho + rho.conj().T))


def purity(psi):
    """tr(rho_1^2) as the sum of fourth powers of the Schmidt coefficients."""
    s = singular_values(psi.matrix)
    return float(np.sum(s ** 4))


@dataclass(frozen=True)
class SchmidtData:
    lambdas: np.ndarray
    left_vectors: np.ndarray  # columns, length d1
    right_vectors: np.ndarray  # columns, length d2

    @property
    def delta(self):
        return float(min(max(1.0 - self.lambdas[0], 0.0), 1.0))

    @property
    def purity(self):
        return float(np.sum(self.lambdas ** 2))

    def reconstruct(self):
        return (self.left_vectors * np.sqrt(self.lambdas)) @ self.right_vectors.T


def schmidt(psi):
    """Schmidt decomposition from the Gram matrix of the smaller side.

    Returns ``r = min(d1, d2)`` terms with descending eigenvalues. The
    largest-magnitude entry of each left vector is made real positive. Ties
    in the eigenvalues keep the eigensolver's order.
    """
    m = psi.matrix
    r = min(psi.d1, psi.d2)
    transpose = psi.d1 > psi.d2
    mm = m.T if transpose else m
    gram = mm @ mm.conj().T
    eig = hermitian_eig(0.5 * (gram + gram.conj().T))
    lam = np.clip(eig.eigenvalues[::-1], 0.0, None)
    u = eig.eigenvectors[:, ::-1]
    sigma = np.sqrt(lam)
    # short-side vectors come straight from the eigensolver; long side by projection
    good = int(np.count_nonzero(sigma > 1e-7 * max(sigma[0], 1e-300)))
    w = (mm.T @ u.conj()[:, :good]) / sigma[:good]
    # Gram-Schmidt in descending order cleans round-off and completes the set
    q, rr = np.linalg.qr(w, mode="complete")
    diag = np.diag(rr)
    q[:, :good] *= diag / np.abs(diag)
    w = q[:, :r]
    left, right = (w, u) if transpose else (u, w)
    # phase convention on the left vectors
    idx = np.argmax(np.abs(left), axis=0)
    ph = left[idx, np.arange(r)]
    ph = ph / np.abs(ph)
    left = left / ph
    right = right * ph
    return SchmidtData(lam / lam.sum(), left, right)


def overlap(phi, psi):
    if phi.dims != psi.dims:
        raise ContractViolation(f"dimension mismatch {phi.dims} vs {psi.dims}")
    return np.vdot(phi.amplitudes, psi.amplitudes)


def overlap4(phi, psi):
    """|<phi|psi>|^4."""
    return float(abs(overlap(phi, psi)) ** 4)


def is_product(phi):
    return purity(phi) > PRODUCT_THRESHOLD


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    rhs: float

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self):
        return self.lhs <= self.rhs + TOL.algebraic


def check_theorem(phi, psi):
    """Compare |<phi|psi>|^4 against the purity of psi's reduced state.

    ``phi`` must be a product state; otherwise the bound need not hold and
    :class:`NotProductStateError` is raised.
    """
    p_phi = purity(phi)
    if p_phi <= PRODUCT_THRESHOLD:
        raise NotProductStateError(
            f"reference state is entangled (purity {p_phi:.17g} <= 1 - {TOL.algebraic:g}); "
            "the bound only covers product references")
    return BoundReport(overlap4(phi, psi), purity(psi))


@dataclass(frozen=True)
class Sandwich:
    lower: float
    upper: float
    purity: float
    delta: float

    @property
    def holds(self):
        return self.lower - TOL.algebraic <= self.purity <= self.upper + TOL.algebraic


def sandwich_bounds(psi, schmidt_data=None):
    """Bounds on purity from the Schmidt gap delta = 1 - lambda_max:
    (1-delta)^2 + delta^2/(r-1) <= I <= (1-delta)^2 + delta^2, r = min(d1, d2).
    """
    sd = schmidt(psi) if schmidt_data is None else schmidt_data
    r = min(psi.d1, psi.d2)
    if r == 1:
        return Sandwich(1.0, 1.0, 1.0, 0.0)
    delta = sd.delta
    top = (1.0 - delta) ** 2
    return Sandwich(top + delta ** 2 / (r - 1), top + delta ** 2, sd.purity, delta)


def optimal_product_state(psi, schmidt_data=None):
    """Product of the leading Schmidt vectors; maximizes |<phi|psi>| over products."""
    sd = schmidt(psi) if schmidt_data is None else schmidt_data
    return BipartiteState.product(sd.left_vectors[:, 0], sd.right_vectors[:, 0], normalize=True)


def reduced_fidelity(rho1, sigma1):
    """tr(rho1 sigma1)."""
    if rho1.dim != sigma1.dim:
        raise ContractViolation(f"dimension mismatch {rho1.dim} vs {sigma1.dim}")
    val = np.sum(rho1.matrix * sigma1.matrix.T)
    if abs(val.imag) > TOL.hermiticity:
        raise ContractViolation(f"reduced fidelity has imaginary part {val.imag!r}")
    return float(val.real)


def best_random_product_overlap4(psi, n, rng):
    """Largest |<phi|psi>|^4 over ``n`` Haar-random product states."""
    u = rng.standard_normal((n, psi.d1)) + 1j * rng.standard_normal((n, psi.d1))
    v = rng.standard_normal((n, psi.d2)) + 1j * rng.standard_normal((n, psi.d2))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    amp = np.einsum("ni,ij,nj->n", u.conj(), psi.matrix, v.conj())
    return float(np.max(np.abs(amp) ** 4))
