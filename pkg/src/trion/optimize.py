"""BFGS with a strong-Wolfe line search and an explicit evaluation counter.

Every call of the objective, line-search probes included, counts as one
function evaluation.  Near the optimum energy differences drop below
double-precision resolution, so the line search also accepts the
approximate Wolfe condition (objective unchanged within rounding, slope
reduced enough), which keeps the iteration moving until the gradient norm
test is met.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


class OptimizerFailure(ArithmeticError):
    def __init__(self, message: str, result: "OptimizeResult"):
        super().__init__(message)
        self.result = result


@dataclass
class OptimizerConfig:
    grad_norm_tol: float = 1e-10
    max_evals: int = 20000
    c1: float = 1e-4
    c2: float = 0.9
    max_line_evals: int = 30

    def __post_init__(self):
        if not 0 < self.c1 < self.c2 < 1:
            raise ValueError("Wolfe constants need 0 < c1 < c2 < 1")
        if not self.grad_norm_tol > 0:
            raise ValueError("grad_norm_tol must be positive")
        if self.max_evals < 1:
            raise ValueError("max_evals must be positive")


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    grad: np.ndarray
    n_evals: int
    n_iter: int
    converged: bool
    status: str
    accepted_f: list = field(default_factory=list)

    @property
    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.grad))


class _Budget(Exception):
    pass


class _Counted:
    def __init__(self, f: Objective, max_evals: int, callback=None):
        self.f = f
        self.max_evals = max_evals
        self.callback = callback
        self.n = 0
        self.best = None

    def __call__(self, x):
        if self.n >= self.max_evals:
            raise _Budget
        fx, gx = self.f(x)
        self.n += 1
        fx = float(fx)
        gx = np.asarray(gx, dtype=float)
        if not np.isfinite(fx) or not np.all(np.isfinite(gx)):
            raise FloatingPointError(f"non-finite objective or gradient at evaluation {self.n}")
        if self.best is None or fx < self.best[0]:
            self.best = (fx, x.copy(), gx)
        if self.callback is not None:
            self.callback(self.n, x, fx, gx)
        return fx, gx


def _cubic_min(a, fa, da, b, fb, db):
    """Minimiser of the cubic interpolating (a, fa, da) and (b, fb, db), or None."""
    d1 = da + db - 3 * (fa - fb) / (a - b)
    rad = d1 * d1 - da * db
    if rad < 0:
        return None
    d2 = np.sign(b - a) * np.sqrt(rad)
    t = b - (b - a) * (db + d2 - d1) / (db - da + 2 * d2)
    return t


def _line_search(fc: _Counted, x, p, f0, g0, cfg: OptimizerConfig, alpha0=1.0):
    """Strong-Wolfe search along p; returns (alpha, f, g) or None."""
    d0 = float(g0 @ p)
    noise = 1e-12 * max(abs(f0), 1.0)

    def ok_decrease(a, fa):
        return fa <= f0 + cfg.c1 * a * d0

    def ok_approx(fa, da):
        # objective flat to rounding while the slope has dropped (Hager-Zhang)
        return fa <= f0 + noise and (2 * cfg.c1 - 1) * d0 >= da >= cfg.c2 * d0

    def zoom(lo, flo, dlo, hi, fhi, dhi):
        for _ in range(cfg.max_line_evals):
            a = _cubic_min(lo, flo, dlo, hi, fhi, dhi)
            span = hi - lo
            if a is None or not (min(lo, hi) + 0.1 * abs(span) <= a <= max(lo, hi) - 0.1 * abs(span)):
                a = lo + 0.5 * span
            fa, ga = fc(x + a * p)
            da = float(ga @ p)
            if abs(da) <= -cfg.c2 * d0 and (ok_decrease(a, fa) or ok_approx(fa, da)):
                return a, fa, ga
            if not ok_decrease(a, fa) or fa >= flo:
                hi, fhi, dhi = a, fa, da
            else:
                if da * (hi - lo) >= 0:
                    hi, fhi, dhi = lo, flo, dlo
                lo, flo, dlo = a, fa, da
            if abs(hi - lo) < 1e-16 * max(abs(lo), 1.0):
                break
        if lo > 0 and flo <= f0 + noise:
            return lo, flo, None
        return None

    prev, fprev, dprev = 0.0, f0, d0
    a = alpha0
    for i in range(cfg.max_line_evals):
        fa, ga = fc(x + a * p)
        da = float(ga @ p)
        if abs(da) <= -cfg.c2 * d0 and (ok_decrease(a, fa) or ok_approx(fa, da)):
            return a, fa, ga
        if not ok_decrease(a, fa) or (i > 0 and fa >= fprev):
            return zoom(prev, fprev, dprev, a, fa, da)
        if da >= 0:
            return zoom(a, fa, da, prev, fprev, dprev)
        prev, fprev, dprev = a, fa, da
        a *= 2.0
    return None


def bfgs_minimize(f: Objective, x0, cfg: OptimizerConfig | None = None,
                  callback=None) -> OptimizeResult:
    """Minimise ``f`` (returning value and gradient) from ``x0``.

    ``callback(n_eval, x, fx, gx)`` is called after every evaluation.
    Raises :class:`OptimizerFailure` on a non-finite objective.
    """
    cfg = cfg or OptimizerConfig()
    x = np.array(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("x0 must be finite")
    fc = _Counted(f, cfg.max_evals, callback)
    n = x.size
    Hinv = np.eye(n)
    accepted = []
    it = 0
    fx = gx = None
    status, converged = "budget", False

    def result():
        bx = x if fx is not None else np.array(x0, dtype=float)
        return OptimizeResult(bx.copy(), fx, gx, fc.n, it, converged, status, accepted)

    try:
        fx, gx = fc(x)
        accepted.append(fx)
        fresh = True
        while True:
            if np.linalg.norm(gx) <= cfg.grad_norm_tol:
                status, converged = "converged", True
                break
            p = -Hinv @ gx
            if p @ gx >= 0:
                Hinv = np.eye(n)
                fresh = True
                p = -gx
            alpha0 = 1.0
            if fresh and it == 0:
                alpha0 = min(1.0, 1.0 / max(np.linalg.norm(gx), 1e-300))
            ls = _line_search(fc, x, p, fx, gx, cfg, alpha0)
            if ls is None:
                if fresh:
                    status = "line search failed"
                    break
                Hinv = np.eye(n)
                fresh = True
                continue
            a, fnew, gnew = ls
            if gnew is None:
                fnew, gnew = fc(x + a * p)
            s = a * p
            y = gnew - gx
            x = x + s
            fx, gx = fnew, gnew
            accepted.append(fx)
            it += 1
            sy = float(s @ y)
            if sy > 1e-300:
                if fresh:
                    Hinv = np.eye(n) * (sy / float(y @ y))
                rho = 1.0 / sy
                Hy = Hinv @ y
                Hinv = (Hinv - rho * (np.outer(s, Hy) + np.outer(Hy, s))
                        + (rho * rho * float(y @ Hy) + rho) * np.outer(s, s))
                fresh = False
    except _Budget:
        status = "budget"
    except FloatingPointError as exc:
        status = "non-finite"
        raise OptimizerFailure(str(exc), result()) from exc
    return result()
