"""Named numerical checks run by ``tomodeco verify``.

Each check compares a closed form against an independent route (explicit
generator sums, Monte Carlo, composition, root finding) at one dimension and
reports the measured discrepancy next to its tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import channel, classicality, lindblad, quasiprob, states, su_algebra
from .lindblad import LindbladParams
from .quasiprob import QuasiprobSpec


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag} {self.name}: measured={self.measured:.6g} "
                f"expected={self.expected:.6g} tolerance={self.tolerance:.3g}")


def _result(name, measured, tol, expected=0.0) -> CheckResult:
    return CheckResult(name, bool(measured <= tol), float(measured), float(expected), float(tol))


def random_hermitian(N: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    return (A + A.conj().T) / 2


def check_su_algebra(N, samples, rng):
    g = su_algebra.generate_su_generators(N)
    L = g.generators
    gram = np.einsum("aij,bji->ab", L, L)
    err = np.max(np.abs(gram - 2 * np.eye(len(g))))
    err = max(err, np.max(np.abs(L - L.conj().transpose(0, 2, 1))),
              np.max(np.abs(np.trace(L, axis1=1, axis2=2))))
    sc = su_algebra.structure_constants(g)
    comm = np.einsum("aij,bjk->abik", L, L) - np.einsum("bij,ajk->abik", L, L)
    anti = np.einsum("aij,bjk->abik", L, L) + np.einsum("bij,ajk->abik", L, L)
    err = max(err, np.max(np.abs(comm - 2j * np.einsum("abc,cij->abij", sc.f, L))))
    delta = np.einsum("ab,ij->abij", np.eye(len(g)), np.eye(N))
    err = max(err, np.max(np.abs(anti - 4 / N * delta - 2 * np.einsum("abc,cij->abij", sc.d, L))))
    X = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
    closed = 2 * (np.trace(X) * np.eye(N) - X / N)
    rel = np.linalg.norm(su_algebra.completeness_map(X, g) - closed) / np.linalg.norm(closed)
    return [_result("su_algebra_identities", err, 1e-12),
            _result("su_completeness_relation", rel, 1e-10)]


def check_integral_identity(N, samples, rng):
    worst = 0.0
    for _ in range(10):
        A = random_hermitian(N, rng)

        def integrand(psis, A=A):
            q = np.einsum("si,ij,sj->s", psis.conj(), A, psis).real
            return q[:, None, None] * np.einsum("si,sj->sij", psis, psis.conj())

        est = states.fs_integrate(integrand, N, samples, rng)
        expected = (A + np.trace(A).real * np.eye(N)) / (N + 1)
        worst = max(worst, float(np.max(est.zscores(expected))))
    return [_result("integral_identity_mc", worst, 4.0)]


def check_channel(N, samples, rng):
    err = 0.0
    for _ in range(5):
        rho = states.random_density_matrix(N, rng)
        cur = rho
        for k in range(1, 21):
            cur = channel.tomographic_step(cur)
            err = max(err, np.linalg.norm(channel.tomographic_iterate(rho, k).state - cur))
    rho = states.random_density_matrix(N, rng, rank=1)
    est = channel.tomographic_step_mc(rho, samples, rng)
    z = float(np.max(est.zscores(channel.tomographic_step(rho))))
    return [_result("channel_closed_form", err, 1e-12), _result("channel_step_mc", z, 4.0)]


def check_order_shift(N, samples, rng):
    err = 0.0
    for _ in range(20):
        rho = states.random_density_matrix(N, rng)
        psi = states.haar_sample(N, rng)
        sigma = rng.uniform(-1.5, 3.0)
        for k in range(11):
            spec = QuasiprobSpec(sigma, N)
            lhs = quasiprob.w_after_k_steps(rho, psi, spec, k)
            rhs = quasiprob.evaluate_w(rho, psi, spec.shifted(-2 * k))
            err = max(err, abs(lhs - rhs))
    mismatches = 0
    pures = [states.random_density_matrix(N, rng, rank=1) for _ in range(20)]
    for sigma in (0.0, 1.0, 3.0):
        spec = QuasiprobSpec(sigma, N)
        first = next(k for k in range(10) if all(
            quasiprob.min_w(channel.tomographic_iterate(r, k).state, spec) >= -1e-12 for r in pures))
        mismatches += first != classicality.k_star(sigma)
    return [_result("order_shift", err, 1e-12), _result("k_star_threshold", mismatches, 0)]


def check_lindblad(N, samples, rng):
    p = LindbladParams(1.0, N)
    g = su_algebra.generate_su_generators(N)
    err = 0.0
    for _ in range(50):
        rho = states.random_density_matrix(N, rng)
        err = max(err, np.max(np.abs(lindblad.lindblad_rhs_full(rho, p, g)
                                     - lindblad.lindblad_rhs_reduced(rho, p))))
    rho0 = states.random_density_matrix(N, rng, rank=1)
    traj = lindblad.evolve_rk4(rho0, 1.0, p, rhs="full", t_eval=np.array([0.0, 1.0]), g=g)
    rk = np.linalg.norm(traj.final - lindblad.evolve_closed_form(rho0, 1.0, p))
    return [_result("lindblad_reduction", err, 1e-11), _result("lindblad_rk4_full", rk, 1e-10)]


def check_interpolation(N, samples, rng):
    err = 0.0
    for gamma in (0.5, 1.0, 2.0):
        p = LindbladParams(gamma, N)
        rho = states.random_density_matrix(N, rng)
        for k in range(11):
            a = lindblad.evolve_closed_form(rho, lindblad.interpolation_time(k, p), p)
            err = max(err, np.max(np.abs(a - channel.tomographic_iterate(rho, k).state)))
    return [_result("discrete_continuous_interpolation", err, 1e-13)]


def check_sharp_minimum(N, samples, rng):
    err = 0.0
    for _ in range(200):
        spec = QuasiprobSpec(rng.uniform(-1.5, 3.0), N)
        rho = states.random_density_matrix(N, rng, rank=1)
        err = max(err, abs(quasiprob.min_w(rho, spec) - quasiprob.w_min_formula(spec)))
    spot = max(abs(quasiprob.w_min_formula(QuasiprobSpec(0.0, 2)) - (1 - math.sqrt(3)) / 2),
               abs(quasiprob.w_min_formula(QuasiprobSpec(1.0, 4)) + 1.0))
    return [_result("sharp_minimum", max(err, spot), 1e-12)]


def check_timescale(N, samples, rng):
    err = 0.0
    for _ in range(50):
        p = LindbladParams(rng.uniform(0.1, 5.0), N)
        sigma = rng.uniform(-1.0, 3.0)
        err = max(err, abs(classicality.bisect_classicality_time(sigma, p) - classicality.t_star(sigma, p)))
    bad = 0
    p = LindbladParams(1.0, N)
    for sigma in (0.0, 1.0):
        ts = classicality.t_star(sigma, p)
        spec = QuasiprobSpec(sigma, N)
        for _ in range(20):
            rho = states.random_density_matrix(N, rng, rank=1)
            before = quasiprob.min_w(lindblad.evolve_closed_form(rho, 0.99 * ts, p), spec)
            after = quasiprob.min_w(lindblad.evolve_closed_form(rho, 1.01 * ts, p), spec)
            bad += not (before < 0 and after >= -1e-12)
    ratios = [classicality.t_star(0.0, LindbladParams(1.0, n)) * n / math.log(n + 1)
              for n in 2 ** np.arange(1, 10)]
    spread = max(ratios) - min(ratios)
    return [_result("timescale_bisection", err, 1e-10),
            _result("timescale_pipeline", bad, 0),
            _result("timescale_scaling", spread, 1e-14)]


def check_sigma_eff(N, samples, rng):
    err = 0.0
    for _ in range(100):
        p = LindbladParams(rng.uniform(0.1, 5.0), N)
        sigma = rng.uniform(-1.5, 3.0)
        t = rng.uniform(0.0, 2.0 / p.rate)
        rho = states.random_density_matrix(N, rng)
        psi = states.haar_sample(N, rng)
        a = quasiprob.evaluate_w(lindblad.evolve_closed_form(rho, t, p), psi, QuasiprobSpec(sigma, N))
        b = quasiprob.evaluate_w(rho, psi, QuasiprobSpec(classicality.sigma_eff(sigma, t, p), N))
        err = max(err, abs(a - b))
    p = LindbladParams(1.0, N)
    at_star = max(abs(classicality.sigma_eff(s, classicality.t_star(s, p), p) + 1) / max(1.0, abs(s))
                  for s in rng.uniform(-1.0, 5.0, 200))
    return [_result("sigma_eff_equivalence", err, 1e-12),
            _result("sigma_eff_at_t_star", at_star, 4 * np.finfo(float).eps)]


def fig1b_boundary_misses(fig) -> int:
    """Count sigma rows whose sign change in t does not bracket t*."""
    N, gamma = fig.metadata["N"], fig.metadata["gamma"]
    p = LindbladParams(gamma, N)
    ts = fig.axes["t"]
    misses = 0
    for i, s in enumerate(fig.axes["sigma"]):
        row = fig.values[i]
        tb = classicality.t_star(s, p)
        if s <= -1:
            misses += bool(np.any(row < -1e-12))
            continue
        if tb > ts[-1]:
            misses += bool(np.any(row >= 0))
            continue
        j = int(np.argmax(row >= -1e-12))
        lo = ts[j - 1] if j > 0 else ts[0]
        slack = 1e-12 * max(ts[-1], 1.0)
        misses += not (lo - slack <= tb <= ts[j] + slack) or bool(np.any(row[j:] < -1e-12))
    return misses


def fig1a_crossing_misses(fig) -> int:
    sig = fig.axes["sigma"]
    i0 = int(np.flatnonzero(sig == -1.0)[0])
    misses = 0
    for n in range(len(fig.axes["N"])):
        col = fig.values[:, n]
        misses += not (col[i0] == 0.0 and np.all(col[:i0] > 0) and np.all(col[i0 + 1:] < 0))
    return misses


def check_figures(N, samples, rng):
    grid = classicality.make_grid(*classicality.SIGMA_GRID)
    fa = classicality.figure1a_data([2, 3, 4, 5], grid)
    p = LindbladParams(1.0, 4)
    fb = classicality.figure1b_data(p, grid, classicality.default_t_grid(p))
    return [_result("fig1a_zero_crossing", fig1a_crossing_misses(fa), 0),
            _result("fig1b_boundary", fig1b_boundary_misses(fb), 0)]


def check_determinism(N, samples, rng):
    from .cli import render

    seed = int(rng.integers(2**63))
    argsets = [
        ["fig1a"],
        ["channel", "--dim", str(N), "--steps", "5", "--samples", "2000", "--seed", str(seed)],
        ["wmin", "--dim", str(N), "--samples", "2000", "--seed", str(seed)],
    ]
    diffs = sum(render(a) != render(a) for a in argsets)
    return [_result("determinism", diffs, 0)]


CHECKS: list[Callable] = [
    check_su_algebra,
    check_integral_identity,
    check_channel,
    check_order_shift,
    check_lindblad,
    check_interpolation,
    check_sharp_minimum,
    check_timescale,
    check_sigma_eff,
    check_figures,
    check_determinism,
]


def run_all(N: int, samples: int, seed: int) -> list[CheckResult]:
    streams = np.random.SeedSequence(seed).spawn(len(CHECKS))
    out = []
    for check, ss in zip(CHECKS, streams):
        out.extend(check(N, samples, np.random.default_rng(ss)))
    return out
