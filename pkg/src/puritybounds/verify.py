"""Randomized property suite behind the ``verify`` subcommand.

Every property reports the number of samples it checked and its largest
violation (how far the worst sample lies on the wrong side of the inequality
or identity). A property passes when that violation does not exceed its
tolerance.
"""
import time
from dataclasses import dataclass

import numpy as np

from . import bipartite as bp
from . import gaussian as gs
from . import jaynes_cummings as jc
from . import oracles
from .numerics import det_complex, hermitian_eig, singular_values

DEFAULT_DIMS = ((2, 2), (2, 5), (3, 4), (6, 6))
DEFAULT_SAMPLES = 1000
RANDOM_PRODUCTS = 10_000
GAUSSIAN_SPLITS = ((1, 1), (1, 2), (2, 2))


@dataclass(frozen=True)
class PropertyResult:
    name: str
    samples: int
    max_violation: float
    tol: float
    seconds: float = 0.0

    @property
    def passed(self):
        return bool(np.isfinite(self.max_violation)) and self.max_violation <= self.tol

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{self.name:<44s} samples={self.samples:<7d} "
                f"max_violation={self.max_violation:.3e} tol={self.tol:.1e} {status}")


@dataclass
class Corpus:
    """Random (psi, product phi) pairs for one dimension split."""
    d1: int
    d2: int
    psis: list
    phis: list


def make_corpus(d1, d2, samples, seed):
    rng = np.random.default_rng([seed, d1, d2])
    psis = [bp.random_state(d1, d2, rng) for _ in range(samples)]
    phis = [bp.random_product_state(d1, d2, rng) for _ in range(samples)]
    return Corpus(d1, d2, psis, phis)


def _hermitian(n, rng):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (x + x.conj().T)


def _complex(shape, rng):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class Suite:
    """Collects property results. ``corrupt`` names one property whose
    compared quantity is zeroed, to exercise the failure path."""

    def __init__(self, seed=0, samples=DEFAULT_SAMPLES, dims=DEFAULT_DIMS, corrupt=None):
        self.seed = seed
        self.samples = max(1, int(samples))
        self.dims = tuple(tuple(d) for d in dims)
        self.corrupt = corrupt
        self.results = []
        self._corpora = {}

    # -- helpers -------------------------------------------------------
    def rng(self, tag):
        return np.random.default_rng([self.seed, sum(map(ord, tag)), len(tag)])

    def scale(self, name):
        return 0.0 if self.corrupt == name else 1.0

    def corpus(self, d1, d2):
        key = (d1, d2)
        if key not in self._corpora:
            self._corpora[key] = make_corpus(d1, d2, self.samples, self.seed)
        return self._corpora[key]

    def record(self, name, samples, violation, tol, start):
        res = PropertyResult(name, int(samples), float(violation), float(tol),
                             time.perf_counter() - start)
        self.results.append(res)
        return res

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    # -- numerics ------------------------------------------------------
    def eig_reconstruction(self):
        name, t0, rng = "numerics.eig_unitary_reconstruction", time.perf_counter(), self.rng("eig")
        n_mats = min(self.samples, 50)
        worst = 0.0
        for k in range(n_mats):
            n = 1 + k % 12
            m = _hermitian(n, rng)
            e = hermitian_eig(m)
            v = e.eigenvectors
            orth = np.max(np.abs(v.conj().T @ v - np.eye(n)))
            rec = np.linalg.norm(self.scale(name) * e.reconstruct() - m) / np.linalg.norm(m)
            unsorted = -float(np.min(np.diff(e.eigenvalues), initial=0.0))
            worst = max(worst, orth, rec, unsorted)
        return self.record(name, n_mats, worst, 1e-10, t0)

    def det_checks(self):
        t0, rng = time.perf_counter(), self.rng("det")
        name_c, name_p = "numerics.det_vs_cofactor", "numerics.det_multiplicative"
        n_mats = min(self.samples, 50)
        wc = wp = 0.0
        for _ in range(n_mats):
            m4 = _complex((4, 4), rng)
            ref = oracles.det_cofactor(m4)
            wc = max(wc, abs(self.scale(name_c) * det_complex(m4) - ref) / abs(ref))
            a, b = _complex((5, 5), rng), _complex((5, 5), rng)
            prod = det_complex(a) * det_complex(b)
            wp = max(wp, abs(self.scale(name_p) * det_complex(a @ b) - prod) / abs(prod))
        self.record(name_c, n_mats, wc, 1e-10, t0)
        return self.record(name_p, n_mats, wp, 1e-9, t0)

    def singular_value_checks(self):
        t0, rng = time.perf_counter(), self.rng("svd")
        name_f, name_u = "numerics.singular_values_frobenius", "numerics.singular_values_unitary_invariance"
        n_mats = min(self.samples, 50)
        wf = wu = 0.0
        for _ in range(n_mats):
            m = _complex((3, 5), rng)
            s = singular_values(m)
            if np.any(np.diff(s) > 0) or np.any(s < 0):
                wf = np.inf
            fro = np.linalg.norm(m) ** 2
            wf = max(wf, abs(self.scale(name_f) * np.sum(s ** 2) - fro) / fro)
            u = hermitian_eig(_hermitian(3, rng)).eigenvectors
            w = hermitian_eig(_hermitian(5, rng)).eigenvectors
            wu = max(wu, np.max(np.abs(self.scale(name_u) * singular_values(u @ m @ w) - s)))
        self.record(name_f, n_mats, wf, 1e-10, t0)
        return self.record(name_u, n_mats, wu, 1e-9, t0)

    # -- bipartite -----------------------------------------------------
    def theorem(self, d1, d2):
        name, t0 = f"bipartite.theorem[{d1}x{d2}]", time.perf_counter()
        c = self.corpus(d1, d2)
        s = self.scale(name)
        worst = max(bp.overlap4(phi, psi) - s * bp.purity(psi) for phi, psi in zip(c.phis, c.psis))
        return self.record(name, len(c.psis), worst, 1e-10, t0)

    def proof_links(self, d1, d2):
        c = self.corpus(d1, d2)
        t0 = time.perf_counter()
        name_u = f"bipartite.uhlmann_step[{d1}x{d2}]"
        name_c = f"bipartite.cauchy_schwarz_step[{d1}x{d2}]"
        name_r = f"bipartite.reduced_fidelity_chain[{d1}x{d2}]"
        wu = wc = wr = -np.inf
        for phi, psi in zip(c.phis, c.psis):
            rho = bp.partial_trace(psi, over=2)
            sigma = bp.partial_trace(phi, over=2)
            phi1 = bp.schmidt(phi).left_vectors[:, 0]
            ov2 = abs(bp.overlap(phi, psi)) ** 2
            uhl = float(np.vdot(phi1, rho.matrix @ phi1).real)
            wu = max(wu, ov2 - self.scale(name_u) * uhl)
            r = bp.reduced_fidelity(rho, sigma)
            wc = max(wc, r ** 2 - self.scale(name_c) * rho.purity() * sigma.purity())
            pur = bp.purity(psi)
            wr = max(wr, r ** 2 - self.scale(name_r) * pur, ov2 ** 2 - self.scale(name_r) * r ** 2)
        self.record(name_u, len(c.psis), wu, 1e-10, t0)
        self.record(name_c, len(c.psis), wc, 1e-10, t0)
        return self.record(name_r, len(c.psis), wr, 1e-10, t0)

    def sandwich(self, d1, d2):
        name, t0 = f"bipartite.sandwich[{d1}x{d2}]", time.perf_counter()
        c = self.corpus(d1, d2)
        s = self.scale(name)
        worst = -np.inf
        for psi in c.psis:
            sw = bp.sandwich_bounds(psi)
            p = bp.purity(psi)
            top = (1.0 - sw.delta) ** 2
            worst = max(worst, sw.lower - p * s, p - sw.upper, top - sw.lower)
        return self.record(name, len(c.psis), worst, 1e-10, t0)

    def sandwich_rank_two(self):
        name, t0, rng = "bipartite.sandwich_rank2_coincide", time.perf_counter(), self.rng("rank2")
        n = min(self.samples, 200)
        worst = 0.0
        for k in range(n):
            lam = rng.uniform(0.0, 1.0)
            d2 = 2 + k % 5
            psi = bp.state_with_spectrum([lam, 1.0 - lam], 2, d2)
            sw = bp.sandwich_bounds(psi)
            exact = (lam ** 2 + (1.0 - lam) ** 2) * self.scale(name)
            worst = max(worst, abs(sw.lower - exact), abs(sw.upper - exact),
                        abs(bp.purity(psi) - exact))
        return self.record(name, n, worst, 1e-12, t0)

    def optimal_product(self, d1, d2):
        c = self.corpus(d1, d2)
        t0 = time.perf_counter()
        name_v = f"bipartite.optimal_product_value[{d1}x{d2}]"
        name_b = f"bipartite.optimal_beats_random[{d1}x{d2}]"
        rng = self.rng(f"random-products-{d1}x{d2}")
        wv = wb = -np.inf
        for psi in c.psis:
            sd = bp.schmidt(psi)
            opt = bp.overlap4(bp.optimal_product_state(psi, sd), psi)
            wv = max(wv, abs(self.scale(name_v) * opt - (1.0 - sd.delta) ** 2))
            best = bp.best_random_product_overlap4(psi, RANDOM_PRODUCTS, rng)
            wb = max(wb, best - self.scale(name_b) * opt)
        self.record(name_v, len(c.psis), wv, 1e-9, t0)
        return self.record(name_b, len(c.psis) * RANDOM_PRODUCTS, wb, 1e-10, t0)

    def purity_routes(self, d1, d2):
        name, t0 = f"bipartite.purity_routes_and_spectra[{d1}x{d2}]", time.perf_counter()
        c = self.corpus(d1, d2)
        worst = 0.0
        for psi in c.psis:
            sd = bp.schmidt(psi)
            r1 = bp.partial_trace(psi, over=2)
            r2 = bp.partial_trace(psi, over=1)
            p = bp.purity(psi)
            p = p * self.scale(name)
            worst = max(worst, abs(p - sd.purity), abs(p - r1.purity()), abs(p - r2.purity()))
            l1 = np.sort(r1.eigenvalues())[::-1][:min(d1, d2)]
            l2 = np.sort(r2.eigenvalues())[::-1][:min(d1, d2)]
            worst = max(worst, np.max(np.abs(l1 - l2)))
        return self.record(name, len(c.psis), worst, 1e-10, t0)

    def near_purity(self):
        name, t0, rng = "bipartite.near_purity_quadratic_error", time.perf_counter(), self.rng("near")
        n = min(self.samples, 200)
        worst = -np.inf
        for _ in range(n):
            d1, d2 = rng.integers(2, 7, size=2)
            r = min(d1, d2)
            delta = 10 ** rng.uniform(-6, -3)
            tail = rng.dirichlet(np.ones(r - 1)) * delta
            psi = bp.state_with_spectrum(np.r_[1.0 - delta, tail], d1, d2, rng)
            sd = bp.schmidt(psi)
            err = bp.purity(psi) - (1.0 - sd.delta) ** 2
            worst = max(worst, err - self.scale(name) * 2.0 * sd.delta ** 2)
        return self.record(name, n, worst, 1e-12, t0)

    # -- gaussian ------------------------------------------------------
    def gaussian_purity_oracle(self):
        name, t0, rng = "gaussian.purity_vs_quadrature", time.perf_counter(), self.rng("gpur")
        name_one = "gaussian.block_diagonal_purity_one"
        n = min(self.samples, 20)
        worst = one = 0.0
        for _ in range(n):
            a = gs.random_shape(1, 1, rng)
            worst = max(worst, abs(gs.purity_gaussian(a) * self.scale(name)
                                   - oracles.gaussian_purity_quadrature(a.A)))
            for d1, d2 in GAUSSIAN_SPLITS:
                b = gs.random_shape(d1, d2, rng, block_diagonal=True)
                one = max(one, abs(self.scale(name_one) * gs.purity_gaussian(b) - 1.0))
        self.record(name, n, worst, 1e-5, t0)
        return self.record(name_one, n * len(GAUSSIAN_SPLITS), one, 1e-10, t0)

    def gaussian_crosscorr_oracle(self):
        name, t0, rng = "gaussian.crosscorr_vs_quadrature", time.perf_counter(), self.rng("gcc")
        name_one = "gaussian.self_overlap_one"
        n = min(self.samples, 20)
        worst = one = 0.0
        for _ in range(n):
            a = gs.random_shape(1, 1, rng)
            b = gs.random_shape(1, 1, rng, block_diagonal=True)
            cc = gs.cross_correlation_gaussian(a, b) * self.scale(name)
            worst = max(worst, abs(cc - oracles.gaussian_overlap4_quadrature(a.A, b.A)))
            for d1, d2 in GAUSSIAN_SPLITS:
                b = gs.random_shape(d1, d2, rng, block_diagonal=True)
                one = max(one, abs(self.scale(name_one) * gs.cross_correlation_gaussian(b, b) - 1.0))
        self.record(name, n, worst, 1e-5, t0)
        return self.record(name_one, n * len(GAUSSIAN_SPLITS), one, 1e-10, t0)

    def gaussian_hbar(self):
        name, t0, rng = "gaussian.hbar_independence", time.perf_counter(), self.rng("ghbar")
        n = min(self.samples, 5)
        worst = 0.0
        for _ in range(n):
            a = gs.random_shape(1, 1, rng)
            b = gs.random_shape(1, 1, rng, block_diagonal=True)
            p = gs.purity_gaussian(a) * self.scale(name)
            c = gs.cross_correlation_gaussian(a, b)
            for hbar in (0.5, 1.0, 2.0):
                worst = max(worst, abs(p - oracles.gaussian_purity_quadrature(a.A, hbar=hbar)),
                            abs(c - oracles.gaussian_overlap4_quadrature(a.A, b.A, hbar=hbar)))
        return self.record(name, n, worst, 1e-5, t0)

    def gaussian_bound_chain(self):
        name, t0, rng = "gaussian.crosscorr_below_purity", time.perf_counter(), self.rng("gchain")
        n = max(1, self.samples // 2)
        worst = -np.inf
        for d1, d2 in GAUSSIAN_SPLITS:
            for _ in range(n):
                a = gs.random_shape(d1, d2, rng)
                b = gs.random_shape(d1, d2, rng, block_diagonal=True)
                p = gs.purity_gaussian(a)
                worst = max(worst,
                            gs.cross_correlation_gaussian(a, b) - self.scale(name) * p,
                            gs.cross_correlation_gaussian(a, gs.optimal_reference(a)) - p,
                            p - 1.0)
        return self.record(name, n * len(GAUSSIAN_SPLITS), worst, 1e-9, t0)

    def gaussian_scaling(self):
        t0 = time.perf_counter()
        sc = gs.leading_order_scaling()
        name_s, name_r = "gaussian.eps4_slope", "gaussian.leading_coefficients_equal"
        slope = sc["slope"] * self.scale(name_s)
        ratio = sc["ratio"] * self.scale(name_r)
        self.record(name_s, len(sc["eps"]), abs(slope - 4.0), 0.2, t0)
        return self.record(name_r, 1, abs(ratio - 1.0), 0.01, t0)

    def gaussian_transport(self):
        name, t0, rng = "gaussian.transport_keeps_bounds", time.perf_counter(), self.rng("gmap")
        n = min(self.samples, 100)
        worst = -np.inf
        for k in range(n):
            d1, d2 = GAUSSIAN_SPLITS[k % len(GAUSSIAN_SPLITS)]
            d = d1 + d2
            hess = rng.standard_normal((2 * d, 2 * d))
            smap = gs.quadratic_flow_map(hess + hess.T, t=0.5)
            a0 = gs.random_shape(d1, d2, rng, block_diagonal=True)
            try:
                at = gs.propagate_shape(a0, smap)
            except gs.CausticError:
                continue
            p = gs.purity_gaussian(at)
            tr = gs.transported_autocorrelation(at, a0)
            opt = gs.cross_correlation_gaussian(at, gs.optimal_reference(at))
            worst = max(worst, tr - self.scale(name) * p, opt - p, p - 1.0)
        return self.record(name, n, worst, 1e-9, t0)

    def cross_module(self):
        name, t0, rng = "gaussian.grid_state_vs_bipartite", time.perf_counter(), self.rng("xmod")
        n = min(self.samples, 3)
        worst = 0.0
        for _ in range(n):
            a = gs.random_shape(1, 1, rng)
            psi, _ = oracles.gaussian_grid_state(a.A)
            state = bp.BipartiteState.from_matrix(psi, normalize=True)
            worst = max(worst, abs(bp.purity(state) * self.scale(name) - gs.purity_gaussian(a)))
        return self.record(name, n, worst, 1e-5, t0)

    # -- jaynes-cummings -----------------------------------------------
    def jc_symmetries(self):
        t0, rng = time.perf_counter(), self.rng("jcsym")
        name_n, name_m = "jc.excitation_conservation", "jc.mirror_symmetry"
        n = min(self.samples, 20)
        wn = wm = 0.0
        for _ in range(n):
            omega, eps, g = rng.uniform(-2, 2, size=3)
            spin_j = rng.integers(1, 9) / 2
            model = jc.build_model(omega, eps, g, spin_j, int(rng.integers(1, 15)))
            h = model.H
            num = model.excitation_number()
            s = jc.mirror_operator(model)
            wn = max(wn, np.max(np.abs(self.scale(name_n) * h @ num - num @ h)))
            wm = max(wm, np.max(np.abs(self.scale(name_m) * s @ h @ s.conj().T - h)),
                     np.max(np.abs(s @ s - np.eye(model.dim))))
        self.record(name_n, n, wn, 1e-10, t0)
        return self.record(name_m, n, wm, 1e-12, t0)

    def jc_series(self):
        name, t0 = "jc.time_series_bounds", time.perf_counter()
        model = jc.build_model(1.0, 1.0, 0.3, 2, 16)
        psi0 = jc.coherent_product_state(model, np.sqrt(2.0), np.pi / 2, 0.0)
        steps = min(self.samples, 200)
        series = jc.run_time_series(model, psi0, 10.0, steps, strict=False)
        s = self.scale(name)
        p = series.purity * s
        worst = max(np.max(series.autocorr4 - p), np.max(series.mirror4 - p),
                    np.max(series.schmidt_lower - p), np.max(series.purity - series.sandwich_upper),
                    np.max(series.reduced_fidelity_sq - p),
                    np.max(series.autocorr4 - series.reduced_fidelity_sq))
        if series.violations() and self.corrupt != name:
            worst = max(worst, np.inf)
        return self.record(name, steps + 1, worst, 1e-9, t0)

    # ------------------------------------------------------------------
    def run(self, report=None):
        steps = [self.eig_reconstruction, self.det_checks, self.singular_value_checks]
        for d1, d2 in self.dims:
            steps += [
                lambda d1=d1, d2=d2: self.theorem(d1, d2),
                lambda d1=d1, d2=d2: self.proof_links(d1, d2),
                lambda d1=d1, d2=d2: self.sandwich(d1, d2),
                lambda d1=d1, d2=d2: self.optimal_product(d1, d2),
                lambda d1=d1, d2=d2: self.purity_routes(d1, d2),
            ]
        steps += [
            self.sandwich_rank_two, self.near_purity,
            self.gaussian_purity_oracle, self.gaussian_crosscorr_oracle, self.gaussian_hbar,
            self.gaussian_bound_chain, self.gaussian_scaling, self.gaussian_transport,
            self.cross_module, self.jc_symmetries, self.jc_series,
        ]
        for step in steps:
            n_before = len(self.results)
            step()
            if report is not None:
                for res in self.results[n_before:]:
                    report(res)
        return self.results
