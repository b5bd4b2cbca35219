"""
Numerical checks of the structural inequalities behind the estimates:
partition of unity, block reconstruction, Besov interpolation / embedding /
algebra, the continuity of (1 - d_xx)^{-1} d_x, the linear transport estimate
and solver diagnostics (mean conservation, solution size, RK4 order).

Each check returns a :class:`PropertyResult` carrying the measured value and
the threshold it was compared to.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid
from scipy.optimize import brentq

from .besov import (
    BesovIndex,
    _combine,
    _partition_weights,
    besov_norm,
    block_norms,
    dyadic_block,
    phi_eval,
    q_max,
)
from .operators import (
    DX,
    INVERSE_HELMHOLTZ_DX,
    apply_multiplier,
    operator_ratio,
    random_bandlimited,
)
from .solver import SolverConfig, State, Trajectory, solve, solve_linear_transport
from .spectral import (
    GridSpec,
    PeriodicFunction,
    TrigTerm,
    derivative,
    from_terms,
    multiply,
)

__all__ = [
    "PropertyResult",
    "partition_of_unity",
    "reconstruction",
    "interpolation",
    "embedding",
    "algebra_constant",
    "sobolev_equivalence_bounds",
    "sobolev_consistency",
    "phase_invariance",
    "helmholtz_continuity",
    "dx_unbounded",
    "block_commutation",
    "mean_conservation",
    "solution_size",
    "rk4_order",
    "transport_constant",
    "fit_transport_constant",
    "transport_reversal",
]


@dataclass
class PropertyResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)

    def __str__(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: measured={self.measured:.6g} threshold={self.threshold:.6g}"


def _streams(seed: int, k: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(k)]


def _random_family(seed: int, count: int, grid: GridSpec, max_mode: int):
    rng = np.random.default_rng(seed)
    return [random_bandlimited(rng, grid, max_mode) for _ in range(count)]


def partition_of_unity(j_max: int = 2048, q_top: int = 12, tol: float = 1e-14) -> PropertyResult:
    j = np.arange(j_max + 1, dtype=float)
    total = sum(phi_eval(q, j) for q in range(-1, q_top + 1))
    err = float(np.max(np.abs(total - 1.0)))
    return PropertyResult("partition_of_unity", err <= tol, err, tol)


def reconstruction(
    seed: int = 0, count: int = 100, grid: GridSpec = GridSpec(256), tol: float = 1e-12
) -> PropertyResult:
    worst = 0.0
    for f in _random_family(seed, count, grid, grid.N // 3):
        total = sum(dyadic_block(f, q).coeffs for q in range(-1, q_max(grid.N) + 1))
        scale = np.max(np.abs(f.coeffs))
        worst = max(worst, float(np.max(np.abs(total - f.coeffs)) / scale))
    return PropertyResult("reconstruction", worst <= tol, worst, tol)


def interpolation(
    seed: int = 1,
    count: int = 100,
    grid: GridSpec = GridSpec(256),
    s1: float = 3.5,
    s2: float = 1.75,
    p: float = 2.0,
    r: float = 2.0,
    thetas=(0.25, 0.5, 0.75),
    slack: float = 1e-10,
) -> PropertyResult:
    """||f||_{B^{t s1 + (1-t) s2}} <= ||f||_{B^{s1}}^t ||f||_{B^{s2}}^{1-t}."""
    violations, worst = 0, -math.inf
    for f in _random_family(seed, count, grid, grid.N // 3):
        bn = block_norms(f, p)
        a, b = _combine(bn, s1, r), _combine(bn, s2, r)
        for th in thetas:
            lhs = _combine(bn, th * s1 + (1 - th) * s2, r)
            rhs = a**th * b ** (1 - th)
            worst = max(worst, lhs / rhs - 1.0)
            violations += lhs > rhs * (1 + slack)
    return PropertyResult(
        "interpolation", violations == 0, float(violations), 0.0,
        {"trials": count * len(thetas), "max_relative_excess": worst},
    )


def embedding(
    seed: int = 2,
    count: int = 100,
    grid: GridSpec = GridSpec(256),
    pairs=((3.0, 2.0), (2.5, 0.5), (1.0, -1.0)),
    p: float = 2.0,
    r: float = 2.0,
) -> PropertyResult:
    """||f||_{B^{s2}} <= 2^{s1 - s2} ||f||_{B^{s1}} whenever s1 >= s2."""
    violations, worst = 0, 0.0
    for f in _random_family(seed, count, grid, grid.N // 3):
        bn = block_norms(f, p)
        for s1, s2 in pairs:
            ratio = _combine(bn, s2, r) / (2.0 ** (s1 - s2) * _combine(bn, s1, r))
            worst = max(worst, ratio)
            violations += ratio > 1.0 + 1e-12
    return PropertyResult(
        "embedding", violations == 0, float(violations), 0.0,
        {"trials": count * len(pairs), "max_ratio": worst},
    )


def algebra_constant(
    seed: int = 3,
    count: int = 100,
    grid: GridSpec = GridSpec(768),
    idx: BesovIndex = BesovIndex(1.0, 2.0, 2.0),
    tol: float = 0.10,
) -> PropertyResult:
    """Fit K in ||fg|| <= K ||f|| ||g|| on two disjoint families and compare.

    Factors have modes up to N/6, so the dealiased product is exact.
    """
    if not idx.s > 1.0 / idx.p:
        raise ValueError("the algebra property needs s > 1/p")
    Ks = []
    for rng in _streams(seed, 2):
        best = 0.0
        for _ in range(count):
            f = random_bandlimited(rng, grid, grid.N // 6)
            g = random_bandlimited(rng, grid, grid.N // 6)
            best = max(best, besov_norm(multiply(f, g), idx) / (besov_norm(f, idx) * besov_norm(g, idx)))
        Ks.append(best)
    rel = abs(Ks[1] / Ks[0] - 1.0)
    return PropertyResult("algebra_constant", rel <= tol, rel, tol, {"K": Ks})


def sobolev_equivalence_bounds(N: int, s: float) -> tuple[float, float]:
    """Extremes over modes |j| <= N/3 of ||e_j||_{B^s_{2,2}} / ||e_j||_{H^s}.

    Any f is a weighted average of single modes, so its ratio lies in between.
    """
    w = _partition_weights(N)
    j = np.abs(np.fft.fftfreq(N, 1.0 / N))
    keep = j * 3 <= N
    q = np.arange(-1, w.shape[0] - 1)[:, None]
    besov_sq = np.sum((2.0 ** (s * q) * w) ** 2, axis=0)
    ratio = np.sqrt(besov_sq / (1.0 + j**2) ** s)[keep]
    return float(ratio.min()), float(ratio.max())


def sobolev_consistency(
    seed: int = 4, count: int = 100, grid: GridSpec = GridSpec(256), s: float = 3.0
) -> PropertyResult:
    c1, c2 = sobolev_equivalence_bounds(grid.N, s)
    idx = BesovIndex(s, 2.0, 2.0)
    weight = (1.0 + grid.modes.astype(float) ** 2) ** s
    ratios = []
    for f in _random_family(seed, count, grid, grid.N // 3):
        hs = math.sqrt(2 * math.pi * np.sum(weight * np.abs(f.coeffs) ** 2))
        ratios.append(besov_norm(f, idx) / hs)
    lo, hi = min(ratios), max(ratios)
    ok = c1 * (1 - 1e-12) <= lo and hi <= c2 * (1 + 1e-12)
    return PropertyResult(
        "sobolev_consistency", ok, hi - lo, c2 - c1,
        {"interval": [c1, c2], "observed": [lo, hi]},
    )


def phase_invariance(
    grid: GridSpec = GridSpec(1024),
    ns=(3, 17, 100, 300),
    shifts=(0.3, 1.0, 2.5),
    idx: BesovIndex = BesovIndex(3.0, 2.0, 2.0),
    tol: float = 1e-10,
) -> PropertyResult:
    worst = 0.0
    for n in ns:
        ref = besov_norm(from_terms([TrigTerm(1.0, n)], grid), idx)
        for a in shifts:
            val = besov_norm(from_terms([TrigTerm(1.0, n, a)], grid), idx)
            worst = max(worst, abs(val / ref - 1.0))
    return PropertyResult("phase_invariance", worst <= tol, worst, tol)


def helmholtz_continuity(
    seed: int = 5,
    s: float = 3.0,
    p: float = 2.0,
    r: float = 2.0,
    trials: int = 200,
    tol: float = 0.10,
    cap: float = 10.0,
) -> PropertyResult:
    """Empirical kappa for ||L^-1 d_x h||_{B^s} <= kappa ||h||_{B^{s-1}} on two seeds."""
    to_idx = BesovIndex(s, p, r)
    from_idx = to_idx.shifted(-1.0)
    seeds = np.random.SeedSequence(seed).generate_state(2)
    kappas = [operator_ratio(INVERSE_HELMHOLTZ_DX, from_idx, to_idx, trials, int(sd)) for sd in seeds]
    rel = abs(kappas[1] / kappas[0] - 1.0)
    j = np.arange(0, 10_000, dtype=float)
    symbol_max = float(np.max(j / (1 + j**2)))
    ok = rel <= tol and max(kappas) <= cap and symbol_max <= 0.5
    return PropertyResult(
        "helmholtz_continuity", ok, rel, tol,
        {"kappa": kappas, "cap": cap, "symbol_max": symbol_max},
    )


def dx_unbounded(
    top_modes=(8, 16, 32, 64), idx: BesovIndex = BesovIndex(3.0, 2.0, 2.0), trials: int = 20
) -> PropertyResult:
    """d_x has no B^s -> B^s bound: the probe grows with the band limit."""
    ratios = [operator_ratio(DX, idx, idx, trials, seed=7, max_mode=m) for m in top_modes]
    growing = all(b > a for a, b in zip(ratios, ratios[1:]))
    return PropertyResult(
        "dx_unbounded", growing, ratios[-1] / ratios[0], 1.0,
        {"ratios": ratios, "top_modes": list(top_modes)},
    )


def block_commutation(
    seed: int = 6, grid: GridSpec = GridSpec(256), tol: float = 1e-15
) -> PropertyResult:
    """Delta_q commutes with L^-1 d_x up to one rounding of the mode-wise product."""
    worst = 0.0
    for f in _random_family(seed, 10, grid, grid.N // 3):
        scale = np.max(np.abs(f.coeffs))
        for q in range(-1, q_max(grid.N) + 1):
            a = dyadic_block(apply_multiplier(f, INVERSE_HELMHOLTZ_DX), q)
            b = apply_multiplier(dyadic_block(f, q), INVERSE_HELMHOLTZ_DX)
            worst = max(worst, float(np.max(np.abs(a.coeffs - b.coeffs))) / scale)
    return PropertyResult("block_commutation", worst <= tol, worst, tol)


def mean_conservation(trajectories, tol: float = 1e-10) -> PropertyResult:
    """Drift of the mean of u and rho along each FW trajectory."""
    worst = 0.0
    for traj in trajectories:
        s0 = traj.states[0]
        for st in traj.states:
            worst = max(
                worst,
                abs(st.u.coeff(0) - s0.u.coeff(0)),
                abs(st.rho.coeff(0) - s0.rho.coeff(0)),
            )
    return PropertyResult("mean_conservation", worst <= tol, worst, tol)


def solution_size(
    trajectories, idx: BesovIndex = BesovIndex(3.0, 2.0, 2.0), slack: float = 1e-6
) -> PropertyResult:
    """||(u, rho)(t)|| <= 2 ||(u0, rho0)|| + slack on every completed trajectory."""
    worst, checked = -math.inf, 0
    for traj in trajectories:
        if not traj.completed:
            continue
        checked += 1
        bound = 2.0 * traj.states[0].norm(idx) + slack
        for st in traj.states:
            worst = max(worst, st.norm(idx) - bound)
    return PropertyResult(
        "solution_size", checked > 0 and worst <= 0.0, worst, 0.0, {"trajectories": checked}
    )


def rk4_order(
    grid: GridSpec = GridSpec(32),
    t_end: float = 2.0,
    dts=(0.1, 0.05, 0.025),
    tol: float = 0.2,
) -> PropertyResult:
    """Observed temporal order against a fine-step reference (dt_min / 16)."""
    u0 = from_terms([TrigTerm(0.5, 1), TrigTerm(0.2, 2, 0.4, "cos")], grid)
    rho0 = from_terms([TrigTerm(1.0, 0, 0.0, "cos"), TrigTerm(0.3, 1, 0.0, "cos")], grid)
    state0 = State(u0, rho0)

    def final(dt):
        cfg = SolverConfig(grid, dt, t_end, (0.0, t_end), blowup_factor=1e6)
        return solve(state0, cfg).states[-1]._stack()

    ref = final(min(dts) / 16)
    errs = [float(np.max(np.abs(final(dt) - ref))) for dt in dts]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    order = orders[-1]
    return PropertyResult(
        "rk4_order", abs(order - 4.0) <= tol, order, 4.0,
        {"errors": errs, "orders": orders, "dts": list(dts), "tolerance": tol},
    )


def fit_transport_constant(
    traj: Trajectory,
    v: Callable[[float], PeriodicFunction],
    idx: BesovIndex,
    F: Callable[[float], PeriodicFunction] | None = None,
    n_quad: int = 401,
) -> float:
    """Smallest C with ||f(t)|| <= e^{CV(t)} (||f0|| + C int_0^t e^{-CV} ||F||) at every sample.

    V(t) = int_0^t ||d_x v||_{B^{s-1}} d tau is evaluated with the trapezoid rule
    on ``n_quad`` nodes, which is the branch of the estimate valid for
    s > 1 + 1/p.
    """
    t_end = traj.times[-1]
    tau = np.linspace(0.0, t_end, n_quad)
    vx = np.array([besov_norm(derivative(v(t)), idx.shifted(-1.0)) for t in tau])
    V = cumulative_trapezoid(vx, tau, initial=0.0)
    Fn = (
        np.array([besov_norm(F(t), idx) for t in tau]) if F is not None else np.zeros_like(tau)
    )
    f0 = besov_norm(traj.states[0], idx)
    best = 0.0
    for t, f in traj.samples:
        if t <= 0:
            continue
        target = besov_norm(f, idx)
        m = tau <= t + 1e-12
        Vt = np.interp(t, tau, V)

        def bound(C):
            forcing = trapezoid(np.exp(-C * V[m]) * Fn[m], tau[m]) if F is not None else 0.0
            return math.exp(C * Vt) * (f0 + C * forcing) - target

        if bound(0.0) >= 0:
            continue
        hi = 1.0
        while bound(hi) < 0:
            hi *= 2.0
            if hi > 1e8:
                raise ArithmeticError("no finite constant satisfies the transport bound")
        best = max(best, brentq(bound, 0.0, hi, xtol=1e-12, rtol=1e-12))
    return best


def _transport_family(seed: int, count: int, grid: GridSpec):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        a = rng.uniform(0.8, 1.2)
        phv, phf = rng.uniform(0.0, 2 * np.pi, 2)
        amp = rng.uniform(0.5, 2.0)
        v = from_terms([TrigTerm(a, 1, phv)], grid)
        f0 = from_terms([TrigTerm(amp, 1, phf)], grid)
        out.append((v, f0))
    return out


def transport_constant(
    seed: int = 8,
    count: int = 5,
    grid: GridSpec = GridSpec(128),
    idx: BesovIndex = BesovIndex(3.0, 2.0, 2.0),
    t_end: float = 0.5,
    dt: float = 1e-3,
    tol: float = 0.20,
) -> PropertyResult:
    """Fitted transport constant for v = a sin(x + phi), f0 = A sin(x + psi).

    Members draw a in [0.8, 1.2], A in [0.5, 2] and both phases at random;
    stability means every fitted C lies within ``tol`` of the family median.
    """
    times = tuple(float(t) for t in np.linspace(0.0, t_end, 11))
    cfg = SolverConfig(grid, dt, t_end, times, blowup_factor=1e6, guard_index=idx)
    Cs = []
    for v, f0 in _transport_family(seed, count, grid):
        traj = solve_linear_transport(lambda t, v=v: v, None, f0, cfg)
        Cs.append(fit_transport_constant(traj, lambda t, v=v: v, idx))
    med = float(np.median(Cs))
    spread = max(abs(c / med - 1.0) for c in Cs)
    return PropertyResult("transport_constant", spread <= tol, spread, tol, {"C": Cs, "median": med})


def transport_reversal(
    grid: GridSpec = GridSpec(64), t_end: float = 1.0, dt: float = 1e-3, tol: float = 1e-6
) -> PropertyResult:
    """Forward with v, then backward with -v, returns the initial profile."""
    v = from_terms([TrigTerm(0.5, 1), TrigTerm(0.2, 2, 1.0, "cos")], grid)
    f0 = from_terms([TrigTerm(1.0, 1), TrigTerm(0.3, 3, 0.5)], grid)
    cfg = SolverConfig(grid, dt, t_end, (0.0, t_end), blowup_factor=1e6)
    fwd = solve_linear_transport(lambda t: v, None, f0, cfg).states[-1]
    back = solve_linear_transport(lambda t: -v, None, fwd, cfg).states[-1]
    err = float(np.max(np.abs(back.values() - f0.values())))
    return PropertyResult("transport_reversal", err <= tol, err, tol)
