"""Jaynes-Cummings oscillator-spin model on a truncated Fock space.

H = omega a^dag a + epsilon J_z + G / sqrt(2J) (a J_+ + a^dag J_-), hbar = 1.
Basis index is ``n * (2J + 1) + (m + J)``: Fock number major, spin
projection m = -J..J minor. The field is subsystem 1, the spin subsystem 2.
"""
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bipartite import (
    BipartiteState,
    PRODUCT_THRESHOLD,
    optimal_product_state,
    overlap,
    partial_trace,
    purity,
    reduced_fidelity,
    schmidt,
)
from .errors import ContractViolation, InvariantViolation, NotProductStateError
from .numerics import hermitian_eig
from .tolerances import TOL

BOUND_TOL = 1e-9
REFERENCES = ("initial", "mirror", "optimal")


def ladder_ops(n_max, spin_j):
    """Return (a, J_+, J_z) in the field and spin factor spaces."""
    n = np.arange(n_max + 1)
    a = np.diag(np.sqrt(n[1:]), 1).astype(float)
    m = np.arange(-spin_j, spin_j + 0.5, 1.0)
    jz = np.diag(m)
    jp = np.diag(np.sqrt(spin_j * (spin_j + 1) - m[:-1] * (m[:-1] + 1)), -1)
    return a, jp, jz


@dataclass(eq=False)
class JcModel:
    omega: float
    epsilon: float
    G: float
    J: float
    n_max: int
    H: np.ndarray = field(repr=False)

    @property
    def d_field(self):
        return self.n_max + 1

    @property
    def d_spin(self):
        return int(round(2 * self.J)) + 1

    @property
    def dim(self):
        return self.d_field * self.d_spin

    @cached_property
    def eig(self):
        return hermitian_eig(self.H)

    def excitation_number(self):
        """N = a^dag a + J_z + J, conserved by H."""
        n = np.arange(self.d_field)
        k = np.arange(self.d_spin)
        return np.diag(np.add.outer(n, k).reshape(-1).astype(float))


def build_model(omega, epsilon, G, J, n_max):
    two_j = 2 * J
    if not (two_j >= 0 and abs(two_j - round(two_j)) < 1e-12):
        raise ContractViolation(f"2J must be a non-negative integer, got J = {J!r}")
    if int(n_max) != n_max or n_max < 1:
        raise ContractViolation(f"n_max must be an integer >= 1, got {n_max!r}")
    for name, val in (("omega", omega), ("epsilon", epsilon), ("G", G)):
        if not np.isfinite(val) or np.iscomplexobj(val):
            raise ContractViolation(f"{name} must be a finite real number, got {val!r}")
    J = round(two_j) / 2
    n_max = int(n_max)
    a, jp, jz = ladder_ops(n_max, J)
    eye_f = np.eye(n_max + 1)
    eye_s = np.eye(jz.shape[0])
    h = omega * np.kron(a.T @ a, eye_s) + epsilon * np.kron(eye_f, jz)
    if J > 0:
        g = G / math.sqrt(2 * J)
        h = h + g * (np.kron(a, jp) + np.kron(a.T, jp.T))
    return JcModel(float(omega), float(epsilon), float(G), J, n_max, h.astype(complex))


def field_coherent(alpha, n_max):
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = 1.0
    for n in range(1, n_max + 1):
        c[n] = c[n - 1] * alpha / math.sqrt(n)
    return c / np.linalg.norm(c)


def spin_coherent(spin_j, theta, phi):
    """Rotated highest-weight state; amplitudes ordered m = -J..J."""
    two_j = int(round(2 * spin_j))
    ct, st = math.cos(theta / 2), math.sin(theta / 2)
    amps = np.empty(two_j + 1, dtype=complex)
    for k in range(two_j + 1):  # k = J + m
        amps[k] = (math.sqrt(math.comb(two_j, k)) * ct ** k * st ** (two_j - k)
                   * np.exp(-1j * (two_j - k) * phi))
    return amps / np.linalg.norm(amps)


def coherent_product_state(model, alpha, theta, phi_az):
    """Field coherent state (x) spin coherent state."""
    if abs(alpha) ** 2 > model.n_max / 4:
        raise ContractViolation(
            f"|alpha|^2 = {abs(alpha) ** 2:.6g} exceeds n_max/4 = {model.n_max / 4:.6g}; "
            "raise n_max")
    return BipartiteState.product(field_coherent(alpha, model.n_max),
                                  spin_coherent(model.J, theta, phi_az))


def _check_dims(model, state):
    if state.dims != (model.d_field, model.d_spin):
        raise ContractViolation(
            f"state dims {state.dims} do not match model ({model.d_field}, {model.d_spin})")


def evolve(model, state, t):
    """exp(-i H t) applied through the cached eigendecomposition."""
    _check_dims(model, state)
    eig = model.eig
    c = eig.eigenvectors.conj().T @ state.amplitudes
    out = eig.eigenvectors @ (np.exp(-1j * eig.eigenvalues * t) * c)
    return BipartiteState(model.d_field, model.d_spin, out)


def mirror_signs(model):
    """Diagonal of the parity (-1)^(a^dag a) (x) (-1)^(J_z + J)."""
    n = np.arange(model.d_field)
    k = np.arange(model.d_spin)
    return np.outer((-1.0) ** n, (-1.0) ** k).reshape(-1)


def mirror_operator(model):
    """Unitary implementing a -> -a, J_pm -> -J_pm, J_z -> J_z."""
    return np.diag(mirror_signs(model)).astype(complex)


def apply_mirror(model, state):
    _check_dims(model, state)
    return BipartiteState(state.d1, state.d2, mirror_signs(model) * state.amplitudes)


@dataclass
class TimeSeries:
    times: np.ndarray
    purity: np.ndarray
    autocorr4: np.ndarray
    mirror4: np.ndarray
    schmidt_lower: np.ndarray
    sandwich_upper: np.ndarray
    reduced_fidelity_sq: np.ndarray
    optimal4: np.ndarray
    purity_spin: np.ndarray
    norm_error: np.ndarray

    def violations(self):
        """Names of the pointwise bound invariants that fail."""
        p = self.purity
        checks = {
            "autocorr4<=purity": self.autocorr4 <= p + BOUND_TOL,
            "mirror4<=purity": self.mirror4 <= p + BOUND_TOL,
            "schmidt_lower<=purity": self.schmidt_lower <= p + BOUND_TOL,
            "purity<=sandwich_upper": p <= self.sandwich_upper + BOUND_TOL,
            "reduced_fidelity_sq<=purity": self.reduced_fidelity_sq <= p + BOUND_TOL,
            "autocorr4<=reduced_fidelity_sq": self.autocorr4 <= self.reduced_fidelity_sq + BOUND_TOL,
            "optimal4==schmidt_lower": np.abs(self.optimal4 - self.schmidt_lower) <= BOUND_TOL,
            "optimal4>=references": self.optimal4 >= np.maximum(self.autocorr4, self.mirror4) - BOUND_TOL,
            "purity_subsystem_symmetry": np.abs(p - self.purity_spin) <= TOL.algebraic,
            "norm_preserved": self.norm_error <= TOL.algebraic,
        }
        return [name for name, ok in checks.items() if not np.all(ok)]

    def columns(self):
        return {
            "t": self.times,
            "purity": self.purity,
            "autocorr4": self.autocorr4,
            "mirror4": self.mirror4,
            "schmidt_lower": self.schmidt_lower,
            "sandwich_upper": self.sandwich_upper,
            "reduced_fidelity_sq": self.reduced_fidelity_sq,
        }


def run_time_series(model, initial, t_max, n_steps, strict=True):
    """Purity and its correlation-function lower bounds on a uniform time grid.

    With ``strict`` a failed pointwise bound raises :class:`InvariantViolation`;
    otherwise call :meth:`TimeSeries.violations` on the result.
    """
    _check_dims(model, initial)
    if n_steps < 1:
        raise ContractViolation("n_steps must be >= 1")
    p0 = purity(initial)
    if p0 <= PRODUCT_THRESHOLD:
        raise NotProductStateError(f"initial state is entangled (purity {p0:.17g})")
    times = np.linspace(0.0, t_max, n_steps + 1)
    eig = model.eig
    c0 = eig.eigenvectors.conj().T @ initial.amplitudes
    mirrored = apply_mirror(model, initial)
    rho0 = partial_trace(initial, over=2)

    cols = {k: np.empty(times.size) for k in (
        "purity", "autocorr4", "mirror4", "schmidt_lower", "sandwich_upper",
        "reduced_fidelity_sq", "optimal4", "purity_spin", "norm_error")}
    for i, t in enumerate(times):
        amps = eig.eigenvectors @ (np.exp(-1j * eig.eigenvalues * t) * c0)
        norm = np.linalg.norm(amps)
        cols["norm_error"][i] = abs(norm - 1.0)
        psi = BipartiteState(model.d_field, model.d_spin, amps / norm)
        sd = schmidt(psi)
        delta = sd.delta
        cols["purity"][i] = purity(psi)
        cols["purity_spin"][i] = partial_trace(psi, over=1).purity()
        cols["autocorr4"][i] = abs(overlap(initial, psi)) ** 4
        cols["mirror4"][i] = abs(overlap(mirrored, psi)) ** 4
        cols["schmidt_lower"][i] = (1.0 - delta) ** 2
        cols["sandwich_upper"][i] = (1.0 - delta) ** 2 + delta ** 2
        cols["reduced_fidelity_sq"][i] = reduced_fidelity(partial_trace(psi, over=2), rho0) ** 2
        cols["optimal4"][i] = abs(overlap(optimal_product_state(psi, sd), psi)) ** 4
    series = TimeSeries(times, **cols)
    if strict:
        bad = series.violations()
        if bad:
            raise InvariantViolation(bad)
    return series


@dataclass(frozen=True)
class ReferenceEntry:
    t: float
    best: str
    bounds: dict
    residuals: dict


def best_reference_report(series, candidates=REFERENCES):
    """Per sample, which of psi(0), S psi(0) or the optimal product state gives
    the largest fourth-power overlap. Ties within 1e-9 go to the earlier one
    in that order. ``candidates`` restricts the competition.
    """
    unknown = set(candidates) - set(REFERENCES)
    if not candidates or unknown:
        raise ContractViolation(f"candidates must be drawn from {REFERENCES}, got {candidates!r}")
    out = []
    for i, t in enumerate(series.times):
        bounds = {
            "initial": float(series.autocorr4[i]),
            "mirror": float(series.mirror4[i]),
            "optimal": float(series.optimal4[i]),
        }
        top = max(bounds[name] for name in candidates)
        best = next(name for name in REFERENCES
                    if name in candidates and bounds[name] >= top - BOUND_TOL)
        p = float(series.purity[i])
        out.append(ReferenceEntry(float(t), best, bounds,
                                  {k: p - v for k, v in bounds.items()}))
    return out


def recoherence_analysis(series, dip_level=0.9, revival_level=0.1, significant=0.01):
    """Locate the structural features of a run.

    - ``t_dip``: first time purity falls below ``dip_level``.
    - ``t_recover``: the largest purity after the dip, if it is an interior
      local maximum; ``recover_ratio`` compares it with the post-dip maximum
      and ``recover_height`` with the lowest purity between dip and recovery.
    - ``t_revival``: first autocorr4 local maximum above ``revival_level``;
      the pre-revival window is (0, t_revival].
    - ``t_auto_first``: first autocorr4 local maximum above ``significant``.
    - ``t_mirror_peak``: argmax of mirror4 on the pre-revival window.

    Missing features are reported as ``None``.
    """
    t = series.times
    p = series.purity
    out = dict.fromkeys(("t_dip", "t_recover", "recover_ratio", "recover_height",
                         "t_revival", "t_auto_first", "t_mirror_peak", "mirror_peak"))
    below = np.flatnonzero(p < dip_level)
    if below.size:
        i_dip = below[0]
        out["t_dip"] = float(t[i_dip])
        peaks = [i for i in local_maxima(p) if i > i_dip]
        if peaks:
            i_rec = max(peaks, key=lambda i: p[i])
            out["t_recover"] = float(t[i_rec])
            out["recover_ratio"] = float(p[i_rec] / np.max(p[i_dip:]))
            out["recover_height"] = float(p[i_rec] - np.min(p[i_dip:i_rec + 1]))
    auto_peaks = local_maxima(series.autocorr4)
    rev = [i for i in auto_peaks if series.autocorr4[i] > revival_level]
    first = [i for i in auto_peaks if series.autocorr4[i] > significant]
    if first:
        out["t_auto_first"] = float(t[first[0]])
    if rev:
        i_rev = rev[0]
        out["t_revival"] = float(t[i_rev])
        i_m = 1 + int(np.argmax(series.mirror4[1:i_rev + 1]))
        out["t_mirror_peak"] = float(t[i_m])
        out["mirror_peak"] = float(series.mirror4[i_m])
    return out


def local_maxima(values):
    """Indices of strict interior local maxima (plateau starts count once)."""
    v = np.asarray(values)
    idx = []
    for i in range(1, v.size - 1):
        if v[i] > v[i - 1] and v[i] >= v[i + 1]:
            idx.append(i)
    return np.array(idx, dtype=int)
