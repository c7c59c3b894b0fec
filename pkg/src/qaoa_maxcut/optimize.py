"""Classical outer loop: parameter-shift gradients, BFGS, Nelder-Mead, restarts."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .ansatz import QaoaCircuit, QaoaParams
from .graphs import Graph
from .seeding import derive_seed

METHODS = ("bfgs", "nelder-mead")


class CountingFunction:
    """Objective wrapper with a monotone evaluation counter."""

    def __init__(self, fn: Callable[[np.ndarray], float], arity: Optional[int] = None):
        self.fn = fn
        self.arity = arity
        self.eval_count = 0

    def __call__(self, x: np.ndarray):
        self.eval_count += 1
        return self.fn(x)


@dataclass
class OptimizerConfig:
    method: str = "bfgs"
    max_iters: Optional[int] = None  # None = method default (200 for BFGS, 200*dim for NM)
    grad_tol: float = 1e-5
    f_tol: float = 1e-4
    x_tol: float = 1e-4
    restarts: int = 1
    init_seed: int = 0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if self.grad_tol <= 0 or self.f_tol <= 0 or self.x_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass
class OptimizeResult:
    best_params: np.ndarray
    best_value: float
    trace: list[tuple[int, float]] = field(default_factory=list)
    n_evals: int = 0
    n_grad_evals: int = 0
    wall_time_seconds: float = 0.0
    success: bool = True
    message: str = ""


def finite_difference_gradient(f, x, h: float = 1e-5) -> np.ndarray:
    """Central differences (f(x+h*e_i) - f(x-h*e_i)) / 2h."""
    if h <= 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (f(xp) - f(xm)) / (2.0 * h)
    return grad


def parameter_shift_gradient(circuit: QaoaCircuit, x) -> np.ndarray:
    """Exact gradient of the QAOA objective via per-occurrence parameter shifts.

    Every parameterized gate has a two-eigenvalue (+-1) generator, so for a
    shared angle the derivative is the sum over gate occurrences of
    f(occurrence shifted +pi/4) - f(occurrence shifted -pi/4): a ZZ
    occurrence shifts its gamma, an RX(2*beta) occurrence shifts its beta.
    The circuit prefix common to all shifts of a layer is simulated once;
    each shifted evaluation then runs the remaining suffix, which is
    arithmetically identical to re-simulating the full circuit.
    """
    if not isinstance(circuit, QaoaCircuit):
        raise TypeError(
            "parameter_shift_gradient needs a shiftable QAOA circuit, "
            f"got {type(circuit).__name__}"
        )
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size % 2 != 0 or x.size == 0:
        raise ValueError(f"parameter vector must have even positive length, got shape {x.shape}")
    p = x.size // 2
    gammas = x[:p]
    betas = x[p:]
    shift = math.pi / 4.0
    grad = np.zeros(2 * p)

    def run_suffix(amps: np.ndarray, start_layer: int) -> float:
        for j in range(start_layer, p):
            circuit.apply_cost(amps, gammas[j])
            circuit.apply_mixer(amps, betas[j])
        return circuit.expectation(amps)

    amps = circuit.initial_amps()
    psi = np.empty_like(amps)  # scratch reused by every shifted evaluation
    for k in range(p):
        circuit.apply_cost(amps, gammas[k])  # amps = state after cost layer k
        for edge in circuit.graph.edges:
            for sign in (1.0, -1.0):
                circuit.copy_with_edge_shift(psi, amps, edge, sign * shift)
                circuit.apply_mixer(psi, betas[k])
                grad[k] += sign * run_suffix(psi, k + 1)
        circuit.apply_mixer(amps, betas[k])  # amps = state after mixer layer k
        for q in range(circuit.n):
            for sign in (1.0, -1.0):
                np.copyto(psi, amps)
                # RX(2*(beta +- pi/4)) = RX(+-pi/2) . RX(2*beta)
                circuit.apply_rx_single(psi, q, sign * math.pi / 2.0)
                grad[p + k] += sign * run_suffix(psi, k + 1)
    return grad


def _strong_wolfe(f, grad_fn, x, d, fx, gx, c1, c2, max_trials):
    """Strong Wolfe line search (bracket + zoom), at most max_trials trial steps.

    Returns (alpha, f_new, g_new, ok).  On failure ok is False and the best
    Armijo-satisfying point seen (if any) is returned.
    """
    phi0 = fx
    dphi0 = float(gx @ d)
    if dphi0 >= 0.0:
        return 0.0, fx, gx, False

    best = None  # (alpha, phi, g) best point satisfying Armijo
    trials = 0

    def armijo(alpha, phi):
        return phi <= phi0 + c1 * alpha * dphi0

    def evaluate(alpha):
        # phi always; the gradient only when Armijo holds (the curvature
        # condition is only consulted then, and gradients are expensive)
        nonlocal trials, best
        trials += 1
        xt = x + alpha * d
        phi = f(xt)
        if not armijo(alpha, phi):
            return phi, None, None
        g = grad_fn(xt)
        dphi = float(g @ d)
        if best is None or phi < best[1]:
            best = (alpha, phi, g)
        return phi, dphi, g

    def zoom(lo, phi_lo, hi):
        nonlocal trials
        while trials < max_trials:
            alpha = 0.5 * (lo + hi)
            phi, dphi, g = evaluate(alpha)
            if dphi is None or phi >= phi_lo:
                hi = alpha
            else:
                if abs(dphi) <= -c2 * dphi0:
                    return alpha, phi, g, True
                if dphi * (hi - lo) >= 0.0:
                    hi = lo
                lo, phi_lo = alpha, phi
        return _fallback()

    def _fallback():
        if best is not None:
            return best[0], best[1], best[2], False
        return 0.0, fx, gx, False

    alpha_prev, phi_prev = 0.0, phi0
    alpha = 1.0
    first = True
    while trials < max_trials:
        phi, dphi, g = evaluate(alpha)
        if dphi is None or (not first and phi >= phi_prev):
            return zoom(alpha_prev, phi_prev, alpha)
        if abs(dphi) <= -c2 * dphi0:
            return alpha, phi, g, True
        if dphi >= 0.0:
            return zoom(alpha, phi, alpha_prev)
        alpha_prev, phi_prev = alpha, phi
        alpha *= 2.0
        first = False
    return _fallback()


def bfgs_minimize(obj, grad, x0, config: OptimizerConfig) -> OptimizeResult:
    """BFGS with inverse-Hessian updates and a strong-Wolfe line search.

    Stops when the gradient infinity norm drops below grad_tol or after
    max_iters accepted iterations.  Curvature updates with y.s <= 1e-10 are
    skipped to preserve positive definiteness; a failed line search returns
    the best point found, flagged via success=False.
    """
    f = obj if isinstance(obj, CountingFunction) else CountingFunction(obj)
    g_counter = grad if isinstance(grad, CountingFunction) else CountingFunction(grad)
    evals0, gevals0 = f.eval_count, g_counter.eval_count
    max_iters = 200 if config.max_iters is None else config.max_iters

    t0 = time.perf_counter()
    x = np.asarray(x0, dtype=np.float64).copy()
    dim = x.size
    fx = f(x)
    gx = np.asarray(g_counter(x), dtype=np.float64)
    hinv = np.eye(dim)
    trace = [(0, fx)]
    success = True
    message = "converged" if np.max(np.abs(gx)) < config.grad_tol else "max_iters reached"

    for it in range(1, max_iters + 1):
        if np.max(np.abs(gx)) < config.grad_tol:
            message = "converged"
            break
        d = -hinv @ gx
        if float(d @ gx) >= 0.0:  # numerical loss of descent, reset
            hinv = np.eye(dim)
            d = -gx
        alpha, f_new, g_new, ok = _strong_wolfe(
            f, lambda z: np.asarray(g_counter(z), dtype=np.float64),
            x, d, fx, gx, c1=1e-4, c2=0.9, max_trials=20,
        )
        if not ok:
            if alpha > 0.0 and f_new < fx:
                x = x + alpha * d
                fx = f_new
                trace.append((it, fx))
            success = False
            message = "line search failed"
            break
        s = alpha * d
        y = g_new - gx
        x = x + s
        fx = f_new
        gx = np.asarray(g_new, dtype=np.float64)
        ys = float(y @ s)
        if ys > 1e-10:
            rho = 1.0 / ys
            sy = np.outer(s, y)
            hinv = hinv - rho * (sy @ hinv + hinv @ sy.T) + rho * (
                rho * float(y @ hinv @ y) + 1.0
            ) * np.outer(s, s)
        trace.append((it, fx))
        message = "converged" if np.max(np.abs(gx)) < config.grad_tol else "max_iters reached"

    return OptimizeResult(
        best_params=x,
        best_value=fx,
        trace=trace,
        n_evals=f.eval_count - evals0,
        n_grad_evals=g_counter.eval_count - gevals0,
        wall_time_seconds=time.perf_counter() - t0,
        success=success,
        message=message,
    )


def nelder_mead_minimize(obj, x0, config: OptimizerConfig) -> OptimizeResult:
    """Nelder-Mead simplex: reflection 1, expansion 2, contraction 0.5, shrink 0.5.

    Initial simplex is x0 plus per-dimension steps of 0.05*max(|x0_i|, 1);
    terminates when the simplex f-spread < f_tol and coordinate spread <
    x_tol, or at max_iters (default 200*dim).
    """
    f = obj if isinstance(obj, CountingFunction) else CountingFunction(obj)
    evals0 = f.eval_count
    alpha, gamma, rho, sigma = 1.0, 2.0, 0.5, 0.5

    t0 = time.perf_counter()
    x0 = np.asarray(x0, dtype=np.float64)
    dim = x0.size
    max_iters = 200 * dim if config.max_iters is None else config.max_iters

    simplex = [x0.copy()]
    for i in range(dim):
        v = x0.copy()
        v[i] += 0.05 * max(abs(x0[i]), 1.0)
        simplex.append(v)
    fvals = [f(v) for v in simplex]

    trace = []
    message = "max_iters reached"
    it = 0
    for it in range(1, max_iters + 1):
        order = np.argsort(fvals, kind="stable")
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        trace.append((it, fvals[0]))

        f_spread = max(abs(fv - fvals[0]) for fv in fvals)
        x_spread = max(
            float(np.max(np.abs(v - simplex[0]))) for v in simplex
        )
        if f_spread < config.f_tol and x_spread < config.x_tol:
            message = "converged"
            break

        centroid = np.mean(simplex[:-1], axis=0)
        worst = simplex[-1]
        xr = centroid + alpha * (centroid - worst)
        fr = f(xr)
        if fvals[0] <= fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[0]:
            xe = centroid + gamma * (xr - centroid)
            fe = f(xe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:  # outside contraction
                xc = centroid + rho * (xr - centroid)
            else:  # inside contraction
                xc = centroid + rho * (worst - centroid)
            fc = f(xc)
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:  # shrink toward the best vertex
                for i in range(1, dim + 1):
                    simplex[i] = simplex[0] + sigma * (simplex[i] - simplex[0])
                    fvals[i] = f(simplex[i])

    best = int(np.argmin(fvals))
    return OptimizeResult(
        best_params=simplex[best].copy(),
        best_value=fvals[best],
        trace=trace,
        n_evals=f.eval_count - evals0,
        n_grad_evals=0,
        wall_time_seconds=time.perf_counter() - t0,
        success=True,
        message=message,
    )


def random_init(p: int, seed: int) -> QaoaParams:
    """Seeded uniform angles in [0, pi), a full fundamental domain (pi-periodicity)."""
    if p < 1:
        raise ValueError(f"depth p must be >= 1, got {p}")
    rng = np.random.Generator(np.random.PCG64(seed))
    gammas = rng.uniform(0.0, math.pi, p)
    betas = rng.uniform(0.0, math.pi, p)
    return QaoaParams(gammas=tuple(gammas), betas=tuple(betas))


def optimize_qaoa(
    g: Graph,
    p: int,
    config: OptimizerConfig,
    circuit: Optional[QaoaCircuit] = None,
) -> OptimizeResult:
    """Minimize the QAOA cost expectation for one graph with random restarts.

    Restart r draws its start point from derive_seed(init_seed, "restart", r);
    evaluation and gradient counts accumulate across restarts and the trace
    of the best restart is kept.
    """
    if circuit is None:
        circuit = QaoaCircuit(g)
    obj = CountingFunction(circuit.objective, arity=2 * p)
    grad = CountingFunction(lambda x: parameter_shift_gradient(circuit, x))

    best: Optional[OptimizeResult] = None
    total_wall = 0.0
    for r in range(config.restarts):
        x0 = random_init(p, derive_seed(config.init_seed, "restart", r)).to_vector()
        if config.method == "bfgs":
            res = bfgs_minimize(obj, grad, x0, config)
        else:
            res = nelder_mead_minimize(obj, x0, config)
        total_wall += res.wall_time_seconds
        if best is None or res.best_value < best.best_value:
            best = res
    assert best is not None
    best.n_evals = obj.eval_count
    best.n_grad_evals = grad.eval_count
    best.wall_time_seconds = total_wall
    return best
