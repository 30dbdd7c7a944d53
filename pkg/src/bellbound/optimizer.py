"""Maximal-violation search over product projective measurements.

Three layers:

* :func:`seesaw_max_violation` -- alternating ascent.  With one party fixed,
  the value is affine in each of the other party's outcome-0 projectors, so the
  optimal rank-1 update for a setting is the projector onto the top eigenvector
  of a 2x2 effective operator (obtained by contracting the state with the fixed
  party's operators and the tilted coefficients).  Ascent is monotone because
  each update maximizes over a family containing the current projector.
* :func:`global_max_violation` -- outer scalar search over the Schmidt angle:
  a 64-point coarse grid guards against multiple local maxima, then
  golden-section refinement to 1e-8.
* :func:`critical_gamma` -- for a tilt at which the maximally entangled state
  no longer violates, bisection above the arg-max angle locates the largest
  Schmidt angle that still violates; its concurrence is the numeric upper
  bound on the concurrence of any violating state.

:func:`in_plane_grid_max_violation` is an independent oracle for Schmidt-angle
states that never touches the see-saw path, and
:func:`pure_state_value_cap` / :func:`max_value_cap` give the closed-form
analytic caps the search results are checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell_model import (
    TAU_MAXENT_CUTOFF,
    TAU_TRIVIAL,
    BellValue,
    coefficients,
    quantum_value,
)
from .errors import NumericFailure
from .quantum_core import (
    BlochVector,
    MeasurementSet,
    SchmidtState,
    TwoQubitState,
    maximally_entangled_state,
    random_measurement_set,
    schmidt_state,
)

VIOLATION_THRESHOLD = 1e-10
GAMMA_BISECTION_TOL = 1e-8
COARSE_GAMMA_POINTS = 64

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SeesawConfig:
    """Restart count, iteration cap, convergence tolerance, and RNG seed."""

    restarts: int = 8
    max_iterations: int = 500
    convergence_tol: float = 1e-11
    rng_seed: int = 2071

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.convergence_tol <= 0.0:
            raise ValueError("convergence_tol must be positive")


DEFAULT_CONFIG = SeesawConfig()


@dataclass(frozen=True)
class SeesawResult:
    """Best value over restarts, the measurements achieving it, and diagnostics.

    ``converged`` refers to the best restart; ``histories`` (present when the
    search is run with ``keep_history=True``) carries the per-iteration value
    sequence of every restart, each of which is nondecreasing.
    """

    value: BellValue
    measurements: MeasurementSet
    converged: bool
    iterations: int
    histories: tuple[tuple[float, ...], ...] | None = None


@dataclass(frozen=True)
class OptimumPoint:
    """Arg-max Schmidt angle, its violation, and the optimizing measurements."""

    tau: float
    gamma_star: float
    s_q: float
    measurements: MeasurementSet


@dataclass(frozen=True)
class CriticalCurvePoint:
    """Largest violating Schmidt angle at a tilt, and its concurrence sin(2 gamma_c)."""

    tau: float
    gamma_c: float
    c_cr: float
    s_at_peak: float


_PAULIS = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)


def _pauli_decomposition(rho: np.ndarray):
    # Local Bloch vectors and the 3x3 correlation matrix; they carry everything
    # the functional sees of the state under product projective measurements.
    r = rho.reshape(2, 2, 2, 2)
    rho_a = np.einsum("ikjk->ij", r)
    rho_b = np.einsum("ikil->kl", r)
    r_alice = np.real(np.einsum("ij,aji->a", rho_a, _PAULIS))
    r_bob = np.real(np.einsum("kl,blk->b", rho_b, _PAULIS))
    corr = np.real(np.einsum("ikjl,aji,blk->ab", r, _PAULIS, _PAULIS))
    return r_alice, r_bob, corr


def _renormalize_rows(candidate: np.ndarray, current: np.ndarray) -> np.ndarray:
    # Best rank-1 update per restart: align with the effective operator's Bloch
    # part.  A vanishing part leaves the objective flat, so the previous
    # direction is kept (deterministic tie-breaking); a zero top eigenvalue
    # still assigns its eigenvector to the outcome-0 projector.
    norms = np.linalg.norm(candidate, axis=1)
    degenerate = norms < 1e-14
    safe = np.where(degenerate, 1.0, norms)
    out = candidate / safe[:, None]
    if np.any(degenerate):
        out[degenerate] = current[degenerate]
    return out


def _seesaw_batch(r_alice, r_bob, corr, tau, starts, max_iterations, tol, keep_history):
    a0, a1, b0, b1 = (np.array([s[k] for s in starts], dtype=float) for k in range(4))
    restarts = a0.shape[0]
    previous = np.full(restarts, -np.inf)
    values = np.full(restarts, -np.inf)
    converged = np.zeros(restarts, dtype=bool)
    first_converged = np.zeros(restarts, dtype=int)
    tilt_pull_a = 2.0 * (1.0 - tau) * r_alice
    tilt_pull_b = 2.0 * (1.0 - tau) * r_bob
    history: list[np.ndarray] = []
    iterations = 0
    for iterations in range(1, max_iterations + 1):
        a0 = _renormalize_rows((b0 + b1) @ corr.T + tilt_pull_a, a0)
        a1 = _renormalize_rows((b0 - b1) @ corr.T, a1)
        b0 = _renormalize_rows((a0 + a1) @ corr + tilt_pull_b, b0)
        b1 = _renormalize_rows((a0 - a1) @ corr, b1)
        bp = b0 + b1
        bm = b0 - b1
        a_dot = a0 @ r_alice
        b_dot = b0 @ r_bob
        values = 0.25 * (
            2.0
            + 2.0 * a_dot
            + bp @ r_bob
            + np.einsum("rk,rk->r", a0, bp @ corr.T)
            + bm @ r_bob
            + np.einsum("rk,rk->r", a1, bm @ corr.T)
        ) - tau * (1.0 + 0.5 * (a_dot + b_dot))
        if keep_history:
            history.append(values.copy())
        newly = ~converged & (values - previous < tol)
        first_converged[newly] = iterations
        converged |= newly
        if np.all(converged):
            break
        previous = values.copy()
    first_converged[~converged] = iterations
    return values, (a0, a1, b0, b1), converged, first_converged, history


def _chsh_start() -> tuple[np.ndarray, ...]:
    inv = 1.0 / math.sqrt(2.0)
    return (
        np.array([0.0, 0.0, 1.0]),
        np.array([1.0, 0.0, 0.0]),
        np.array([inv, 0.0, inv]),
        np.array([-inv, 0.0, inv]),
    )


def _random_start(rng: np.random.Generator) -> tuple[np.ndarray, ...]:
    vectors = []
    for _ in range(4):
        v = rng.normal(size=3)
        while np.linalg.norm(v) < 1e-8:
            v = rng.normal(size=3)
        vectors.append(v / np.linalg.norm(v))
    return tuple(vectors)


def _measurement_set_from(vectors) -> MeasurementSet:
    units = [BlochVector.normalized(v) for v in vectors]
    return MeasurementSet(alice=(units[0], units[1]), bob=(units[2], units[3]))


def seesaw_max_violation(
    rho: TwoQubitState,
    tau: float,
    cfg: SeesawConfig = DEFAULT_CONFIG,
    *,
    keep_history: bool = False,
) -> SeesawResult:
    """Alternating ascent toward the maximal violation of a fixed state.

    Restart 0 starts from the CHSH-optimal angles; the remaining restarts draw
    random Bloch vectors from streams derived from ``cfg.rng_seed``, so results
    are reproducible.  All restarts iterate in one batch; a restart is
    converged once its value improves by less than ``cfg.convergence_tol``,
    and the best restart is returned (flagged unconverged if it exhausted
    ``cfg.max_iterations``).
    """
    coefficients(tau)  # validates the tilt range
    r_alice, r_bob, corr = _pauli_decomposition(rho.matrix)
    starts = [_chsh_start()]
    if cfg.restarts > 1:
        for child in np.random.SeedSequence(cfg.rng_seed).spawn(cfg.restarts - 1):
            starts.append(_random_start(np.random.default_rng(child)))
    values, vectors, converged, iteration_counts, history = _seesaw_batch(
        r_alice,
        r_bob,
        corr,
        float(tau),
        starts,
        cfg.max_iterations,
        cfg.convergence_tol,
        keep_history,
    )
    best = int(np.argmax(values))
    histories = None
    if keep_history:
        stacked = np.array(history)
        histories = tuple(tuple(stacked[:, r]) for r in range(len(starts)))
    return SeesawResult(
        value=BellValue(value=float(values[best]), tau=float(tau)),
        measurements=_measurement_set_from([v[best] for v in vectors]),
        converged=bool(converged[best]),
        iterations=int(iteration_counts[best]),
        histories=histories,
    )


def _golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    c = hi - _INV_GOLDEN * (hi - lo)
    d = lo + _INV_GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_GOLDEN * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def global_max_violation(tau: float, cfg: SeesawConfig = DEFAULT_CONFIG) -> OptimumPoint:
    """Maximal violation over all two-qubit states at a given tilt.

    By convexity the optimum is attained on pure states, parametrized in the
    Schmidt basis by a single angle; the scan assumes no unimodality (coarse
    64-point grid first) and golden-section refines to 1e-8 in the angle.
    """
    coefficients(tau)

    def value_at(gamma: float) -> float:
        return seesaw_max_violation(schmidt_state(gamma), tau, cfg).value.value

    grid = np.linspace(0.0, math.pi / 4, COARSE_GAMMA_POINTS)
    values = [value_at(g) for g in grid]
    peak = int(np.argmax(values))
    lo = grid[max(peak - 1, 0)]
    hi = grid[min(peak + 1, COARSE_GAMMA_POINTS - 1)]
    gamma_star = _golden_section_max(value_at, float(lo), float(hi), 1e-8)
    final = seesaw_max_violation(schmidt_state(gamma_star), tau, cfg)
    return OptimumPoint(
        tau=float(tau),
        gamma_star=float(gamma_star),
        s_q=final.value.value,
        measurements=final.measurements,
    )


def critical_gamma(tau: float, cfg: SeesawConfig = DEFAULT_CONFIG) -> CriticalCurvePoint:
    """Largest Schmidt angle whose state still violates at tilt ``tau``.

    Defined for tilts from the maximally-entangled cutoff up to (not including)
    3/2.  Bisects the violation/no-violation crossing above the arg-max angle,
    with "violates" meaning a see-saw value above 1e-10, to 1e-8 in the angle.
    """
    t = float(tau)
    if not (TAU_MAXENT_CUTOFF - 1e-12 <= t < TAU_TRIVIAL):
        raise ValueError(
            f"critical angle is defined for tilts in [{TAU_MAXENT_CUTOFF:.10f}, 1.5), got {tau!r}"
        )
    optimum = global_max_violation(t, cfg)
    if optimum.s_q <= VIOLATION_THRESHOLD:
        raise NumericFailure(
            f"no violating Schmidt angle found at tilt {t!r} (peak value {optimum.s_q:.3e} "
            f"at gamma {optimum.gamma_star:.6f}); the search is expected to violate below 3/2"
        )

    def violates(gamma: float) -> bool:
        return seesaw_max_violation(schmidt_state(gamma), t, cfg).value.value > VIOLATION_THRESHOLD

    hi = math.pi / 4
    if violates(hi):
        gamma_c = hi
    else:
        lo = optimum.gamma_star
        while hi - lo > GAMMA_BISECTION_TOL:
            mid = 0.5 * (lo + hi)
            if violates(mid):
                lo = mid
            else:
                hi = mid
        gamma_c = lo
    return CriticalCurvePoint(
        tau=t, gamma_c=gamma_c, c_cr=math.sin(2.0 * gamma_c), s_at_peak=optimum.s_q
    )


@dataclass(frozen=True)
class CutoffCheck:
    """One tilt of the maximally-entangled cutoff verification."""

    tau: float
    max_violation: float
    identity_residual: float
    passed: bool


@dataclass(frozen=True)
class CutoffReport:
    checks: tuple[CutoffCheck, ...]
    violation_tol: float
    identity_tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> tuple[CutoffCheck, ...]:
        return tuple(c for c in self.checks if not c.passed)


def verify_maximally_entangled_cutoff(
    tau_grid,
    cfg: SeesawConfig = DEFAULT_CONFIG,
    *,
    measurement_sets_per_tau: int = 100,
    violation_tol: float = 1e-9,
    identity_tol: float = 1e-12,
) -> CutoffReport:
    """Numeric check that the maximally entangled state cannot violate past the cutoff.

    For each tilt in the grid (which must lie in [cutoff, 3/2)) two facts are
    verified: (i) the see-saw on the maximally entangled state never exceeds
    ``violation_tol``; (ii) because that state's marginals under rank-1
    projective measurements are exactly 1/2, its tilted value equals its
    untilted value minus (tau - 1) -- checked on random measurement sets to
    ``identity_tol``.
    """
    rho = maximally_entangled_state()
    checks = []
    for index, tau in enumerate(np.asarray(tau_grid, dtype=float)):
        t = float(tau)
        if not (TAU_MAXENT_CUTOFF - 1e-12 <= t < TAU_TRIVIAL):
            raise ValueError(f"grid tilt {t!r} outside [{TAU_MAXENT_CUTOFF:.10f}, 1.5)")
        result = seesaw_max_violation(rho, t, cfg)
        rng = np.random.default_rng([cfg.rng_seed, index])
        residual = 0.0
        for _ in range(measurement_sets_per_tau):
            m = random_measurement_set(rng)
            tilted = quantum_value(rho, m, t).value
            untilted = quantum_value(rho, m, 1.0).value
            residual = max(residual, abs(tilted - (untilted - (t - 1.0))))
        passed = result.value.value <= violation_tol and residual <= identity_tol
        checks.append(
            CutoffCheck(
                tau=t,
                max_violation=result.value.value,
                identity_residual=residual,
                passed=passed,
            )
        )
    return CutoffReport(tuple(checks), violation_tol, identity_tol)


def pure_state_value_cap(gamma: float, tau: float) -> float:
    """Closed-form cap on the maximal violation by the Schmidt-angle state.

    max{0, 2 (1 - tau) sin^2(gamma) + (sqrt(1 + sin^2(2 gamma)) - 1) / 2}: the
    second term caps the untilted part, the first is the best case for the
    tilt penalty (both marginals at their minimum (1 - cos 2 gamma)/2).
    """
    s2 = math.sin(2.0 * gamma)
    return max(0.0, 2.0 * (1.0 - tau) * math.sin(gamma) ** 2 + (math.sqrt(1.0 + s2 * s2) - 1.0) / 2.0)


def max_value_cap(tau: float) -> float:
    """Largest value of :func:`pure_state_value_cap` over Schmidt angles.

    The stationarity condition has the closed-form solution
    cos(2 gamma) = 2 (tau - 1) sqrt(2 / (1 + 4 (tau - 1)^2)), clipped to 1.
    """
    t = float(tau) - 1.0
    c = min(1.0, 2.0 * t * math.sqrt(2.0 / (1.0 + 4.0 * t * t)))
    return pure_state_value_cap(0.5 * math.acos(c), tau)


def in_plane_grid_max_violation(
    gamma: float, tau: float, *, resolution: float = 0.002, refine: bool = True
) -> float:
    """Independent grid oracle for the maximal violation of a Schmidt-angle state.

    Scans Bob's two polar angles over [0, 2 pi) at the given resolution.  For
    in-plane measurements the objective is affine in each of Alice's Bloch
    vectors, so her optimal response per setting is exact (the norm of the
    coefficient vector); nothing is iterated, making this a genuine
    cross-check of the see-saw.  One refinement pass re-grids a window of
    +/- 2 resolution around the best Bob pair at 1/50 of the resolution.
    """
    SchmidtState(gamma)  # validates the angle range
    coefficients(tau)
    c2g = math.cos(2.0 * gamma)
    s2g = math.sin(2.0 * gamma)
    t = float(tau)

    def scan(theta0: np.ndarray, theta1: np.ndarray):
        cb1 = np.cos(theta1)
        sb1 = np.sin(theta1)
        best = -math.inf
        best_pair = (0.0, 0.0)
        chunk = 256
        for lo in range(0, theta0.size, chunk):
            th0 = theta0[lo : lo + chunk]
            cb0 = np.cos(th0)[:, None]
            sb0 = np.sin(th0)[:, None]
            u0 = 0.5 * (1.0 - t) * c2g + 0.25 * (cb0 + cb1[None, :])
            v0 = 0.25 * s2g * (sb0 + sb1[None, :])
            u1 = 0.25 * (cb0 - cb1[None, :])
            v1 = 0.25 * s2g * (sb0 - sb1[None, :])
            values = (
                (0.5 - t + 0.5 * (1.0 - t) * c2g * cb0)
                + np.hypot(u0, v0)
                + np.hypot(u1, v1)
            )
            i, j = np.unravel_index(int(np.argmax(values)), values.shape)
            if values[i, j] > best:
                best = float(values[i, j])
                best_pair = (float(th0[i]), float(theta1[j]))
        return best, best_pair

    thetas = np.arange(0.0, 2.0 * math.pi, resolution)
    best, (t0, t1) = scan(thetas, thetas)
    if refine:
        step = resolution / 50.0
        window = np.arange(-2.0 * resolution, 2.0 * resolution + step / 2, step)
        refined, _ = scan(t0 + window, t1 + window)
        best = max(best, refined)
    return best
