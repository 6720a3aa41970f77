"""Brute-force reference computations used to check the fast routines.

Nothing here calls into the code it is meant to check.
"""
import itertools

import numpy as np


def det_cofactor(m):
    """Determinant by Laplace expansion along the first row (small matrices only)."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(m[0, 0])
    total = 0j
    for j in range(n):
        minor = np.delete(np.delete(m, 0, axis=0), j, axis=1)
        total += (-1) ** j * m[0, j] * det_cofactor(minor)
    return total


def partial_trace_loops(amps, d1, d2, over=2):
    """Reduced density by explicit summation over the traced index."""
    keep, traced = (d1, d2) if over == 2 else (d2, d1)
    rho = np.zeros((keep, keep), dtype=complex)
    for i, j, k in itertools.product(range(keep), range(keep), range(traced)):
        if over == 2:
            rho[i, j] += amps[i * d2 + k] * np.conj(amps[j * d2 + k])
        else:
            rho[i, j] += amps[k * d2 + i] * np.conj(amps[k * d2 + j])
    return rho


def _axes(shapes, hbar, n, extent, center):
    lam_min = min(np.linalg.eigvalsh(np.asarray(a).imag)[0] for a in shapes)
    sigma_max = np.sqrt(hbar / (2.0 * lam_min))
    x = np.linspace(-extent * sigma_max, extent * sigma_max, n)
    return x + center[0], x + center[1], x[1] - x[0]


def _sample(a, x1, x2, dx, hbar, center, momentum):
    """2-d packet on the grid x1 (rows) by x2 (columns), normalized on the grid."""
    a = np.asarray(a, dtype=complex)
    g1, g2 = np.meshgrid(x1, x2, indexing="ij")
    y1, y2 = g1 - center[0], g2 - center[1]
    expo = a[0, 0] * y1 ** 2 + (a[0, 1] + a[1, 0]) * y1 * y2 + a[1, 1] * y2 ** 2
    f = np.exp(1j / hbar * (expo + momentum[0] * g1 + momentum[1] * g2))
    return f / np.sqrt(np.sum(np.abs(f) ** 2) * dx * dx)


def gaussian_grid_state(a, hbar=1.0, n=256, extent=6.0, center=(0.0, 0.0), momentum=(0.0, 0.0)):
    """Packet with a 2x2 shape on a uniform n x n grid spanning +-extent
    widths; returns (psi, dx)."""
    x1, x2, dx = _axes([a], hbar, n, extent, center)
    return _sample(a, x1, x2, dx, hbar, center, momentum), dx


def gaussian_purity_quadrature(a, hbar=1.0, n=256, extent=6.0):
    """Reduced purity of a (1,1)-split packet by grid quadrature:
    rho(x1, x1') = sum_x2 psi psi* dx, I = sum |rho|^2 dx^2."""
    psi, dx = gaussian_grid_state(a, hbar, n, extent, center=(0.7, -0.4), momentum=(0.5, 0.2))
    rho = psi @ psi.conj().T * dx
    return float(np.sum(np.abs(rho) ** 2) * dx * dx)


def gaussian_overlap4_quadrature(a, b, hbar=1.0, n=256, extent=6.0,
                                 center=(0.3, -0.2), momentum=(0.4, 0.1)):
    """|<phi_B|psi_A>|^4 by grid quadrature; both packets share one centre."""
    x1, x2, dx = _axes([a, b], hbar, n, extent, center)
    psi = _sample(a, x1, x2, dx, hbar, center, momentum)
    phi = _sample(b, x1, x2, dx, hbar, center, momentum)
    return float(abs(np.sum(phi.conj() * psi) * dx * dx) ** 4)


def rk4_propagate(h, psi0, t, dt=1e-4):
    """Fixed-step fourth-order integration of i dpsi/dt = H psi."""
    from scipy import sparse

    hop = sparse.csr_matrix(h)
    steps = int(round(t / dt))
    dt = t / steps
    psi = np.array(psi0, dtype=complex)
    for _ in range(steps):
        k1 = -1j * (hop @ psi)
        k2 = -1j * (hop @ (psi + 0.5 * dt * k1))
        k3 = -1j * (hop @ (psi + 0.5 * dt * k2))
        k4 = -1j * (hop @ (psi + dt * k3))
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi
