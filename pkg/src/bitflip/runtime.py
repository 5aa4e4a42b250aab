"""Expected first-hitting times of the (1+lambda) EA on fitness levels.

The elitist chain only moves upwards: from level ``i`` the best of ``lambda``
offspring lands on level ``j`` with probability ``varpi^(lambda)[i, j]`` and is
accepted only if ``j > i``.  Mean absorption times follow by back-substitution
on the upper-triangular system ``(I - T) t = 1``.

Matrices come in three scalar flavours: float64 arrays, object arrays of
``Fraction`` (exact) and object arrays of ``mpmath.mpf`` (high precision).
The same routines handle all three.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ._scalars import check_probability
from .errors import ConvergenceError, NotAbsorbingError
from .onemax import VarpiMatrix, level_sizes, varpi, varpi_numerators

ROW_SUM_TOL = 1e-12
#: Grid used to turn a float p into an exact dyadic rational for re-evaluation.
HP_GRID_BITS = 48
HP_DPS = 50


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    entries: np.ndarray

    @property
    def q(self) -> int:
        return self.entries.shape[0]

    @property
    def exact(self) -> bool:
        return self.entries.dtype == object


@dataclass(frozen=True, eq=False)
class AbsorptionResult:
    t: np.ndarray
    expected_runtime: object


def _row_sums_ok(M: np.ndarray) -> None:
    for i, row in enumerate(M):
        s = sum(row)
        if M.dtype == object and all(isinstance(v, (int, Fraction)) for v in row):
            if s != 1:
                raise ValueError(f"row {i} sums to {s}, not 1")
        elif abs(float(s) - 1.0) > ROW_SUM_TOL * len(row):
            raise ValueError(f"row {i} sums to {float(s)!r}, not 1")


def varpi_lambda(vp: VarpiMatrix, lam: int) -> VarpiMatrix:
    """Level transitions of the best of ``lam`` independent offspring.

    ``out[i, j] = C[i, j]**lam - C[i, j-1]**lam`` with ``C`` the row-wise
    cumulative sum.  In float mode the upper tail is rebuilt from suffix sums
    ``S`` as ``(1 - S[j+1])**lam - (1 - S[j])**lam`` to avoid cancellation.
    """
    if lam < 1 or int(lam) != lam:
        raise ValueError(f"lambda must be a positive integer, got {lam}")
    lam = int(lam)
    if lam == 1:
        return vp
    W = vp.entries
    q = W.shape[0]
    if W.dtype == object:
        out = np.empty_like(W)
        for i in range(q):
            acc = 0
            prev = 0
            for j in range(q):
                acc += W[i, j]
                cur = acc**lam
                out[i, j] = cur - prev
                prev = cur
        return VarpiMatrix(vp.n, vp.p, out, lam)
    C = np.cumsum(W, axis=1)
    out = np.diff(np.concatenate([np.zeros((q, 1)), np.minimum(C, 1.0) ** lam], axis=1), axis=1)
    # suffix sums S[i, j] = sum_{l >= j} W[i, l]; G(s) = 1 - (1 - s)**lam
    S = np.cumsum(W[:, ::-1], axis=1)[:, ::-1]
    with np.errstate(divide="ignore"):
        G = -np.expm1(lam * np.log1p(-np.minimum(S, 1.0)))
    G_next = np.concatenate([G[:, 1:], np.zeros((q, 1))], axis=1)
    upper = np.triu(np.ones((q, q), dtype=bool), 1)
    out[upper] = (G - G_next)[upper]
    return VarpiMatrix(vp.n, vp.p, out, lam)


def transition_matrix(vpl: VarpiMatrix, check: bool = True) -> TransitionMatrix:
    """Elitist chain: keep ``j > i`` moves, fold ``j <= i`` into the diagonal."""
    W = vpl.entries
    q = W.shape[0]
    if W.shape != (q, q):
        raise ValueError("transition input must be square")
    if check:
        _row_sums_ok(W)
    if W.dtype == object:
        P = np.empty_like(W)
        zero = W[0, 0] - W[0, 0]
        for i in range(q):
            for j in range(q):
                P[i, j] = zero if j < i else W[i, j]
            P[i, i] = sum(W[i, : i + 1], zero)
        return TransitionMatrix(P)
    P = np.triu(W, 1)
    P[np.diag_indices(q)] = np.tril(W).sum(axis=1)
    return TransitionMatrix(P)


def absorption_times(P: TransitionMatrix) -> np.ndarray:
    """Mean number of generations to reach the top level from each level.

    The pivot ``1 - P[i, i]`` is taken as the upper row sum, which is exact in
    rational mode and avoids cancellation in float mode.
    """
    E = P.entries
    q = P.q
    if E.dtype == object:
        t = np.empty(q, dtype=object)
        t[q - 1] = E[0, 0] - E[0, 0]
        for i in range(q - 2, -1, -1):
            row = E[i]
            out = sum(row[i + 1 :])
            if out == 0:
                raise NotAbsorbingError(i)
            t[i] = (1 + sum(row[j] * t[j] for j in range(i + 1, q))) / out
        return t
    t = np.zeros(q)
    for i in range(q - 2, -1, -1):
        out = E[i, i + 1 :].sum()
        if not out > 0:
            raise NotAbsorbingError(i)
        t[i] = (1.0 + E[i, i + 1 :] @ t[i + 1 :]) / out
    return t


def expected_runtime(t: Sequence, sizes: Sequence[int]):
    """``E[tau] = sum_l |X_l| / |X| * t_l`` under uniform initialisation."""
    if len(t) != len(sizes):
        raise ValueError(f"{len(t)} times but {len(sizes)} level sizes")
    total = sum(int(s) for s in sizes)
    if total <= 0 or total & (total - 1):
        raise ValueError(f"level sizes sum to {total}, not a power of two")
    if isinstance(t, np.ndarray) and t.dtype != object:
        return float(np.dot(np.asarray(sizes, dtype=np.float64) / total, t))
    first = t[0]
    if isinstance(first, (int, Fraction)):
        return sum((Fraction(int(s), total) * v for s, v in zip(sizes, t)), Fraction(0))
    return sum(mpmath.mpf(int(s)) / total * v for s, v in zip(sizes, t))


def _hp_varpi(n: int, p) -> VarpiMatrix:
    """ϖ as mpf values from the exact integer evaluation at a dyadic p."""
    scale = 1 << HP_GRID_BITS
    pe = p if isinstance(p, Fraction) else Fraction(round(float(p) * scale), scale)
    N, den = varpi_numerators(n, pe)
    D = mpmath.mpf(den)
    out = np.empty(N.shape, dtype=object)
    for idx, v in np.ndenumerate(N):
        out[idx] = mpmath.mpf(v) / D
    return VarpiMatrix(n, pe, out)


def onemax_runtime(n: int, p, lam: int = 1, precision: str = "auto") -> AbsorptionResult:
    """Expected generations of the (1+lambda) EA on Onemax from a random start.

    ``precision``: ``"exact"`` (rational p required), ``"float"``, ``"mp"``
    (exact ϖ at a dyadic p, then mpmath back-substitution), or ``"auto"``
    which is exact for rational p and float otherwise.
    """
    check_probability(p)
    if precision == "auto":
        precision = "exact" if isinstance(p, (int, Fraction)) and not isinstance(p, bool) else "float"
    if precision == "exact":
        vp = varpi(n, Fraction(p))
    elif precision == "float":
        vp = varpi(n, float(p))
    elif precision == "mp":
        with mpmath.workdps(HP_DPS):
            vp = _hp_varpi(n, p)
            return _pipeline(vp, n, lam, check=False)
    else:
        raise ValueError(f"unknown precision {precision!r}")
    return _pipeline(vp, n, lam)


def _pipeline(vp: VarpiMatrix, n: int, lam: int, check: bool = True) -> AbsorptionResult:
    P = transition_matrix(varpi_lambda(vp, lam), check=check)
    t = absorption_times(P)
    return AbsorptionResult(t, expected_runtime(t, level_sizes(n)))


def runtime_float(n: int, p: float, lam: int = 1) -> float:
    """Float E[tau]; ``inf`` when the chain cannot absorb (e.g. p = 1, n >= 2)."""
    try:
        return onemax_runtime(n, float(p), lam, "float").expected_runtime
    except NotAbsorbingError:
        return math.inf


@dataclass(frozen=True)
class OptimalP:
    n: int
    lam: int
    p_star: float
    runtime: float
    iterations: int
    boundary: bool

    @property
    def c(self) -> float:
        return self.p_star * self.n


def _dE(n: int, lam: int, p: float) -> float:
    h = max(1e-8, 1e-6 * p)
    if p + h >= 1.0:
        return (runtime_float(n, p, lam) - runtime_float(n, p - h, lam)) / h
    return (runtime_float(n, p + h, lam) - runtime_float(n, p - h, lam)) / (2 * h)


def optimal_p(n: int, lam: int = 1, max_iter: int = 100, high_precision: bool = True) -> OptimalP:
    """Minimise E[tau](p) over (0, 1] by safeguarded Newton on dE/dp.

    Starts at ``1/n`` inside ``(1e-4/n, 1)``.  A Newton step that leaves the
    current sign bracket of dE/dp, or meets non-positive curvature, is replaced
    by bisection.  Stops when ``|dp| < 1e-12`` (or below ``1e-10 * p``, the
    floor set by finite-difference noise) or ``|dE/dp| < 1e-10``.  The
    boundary ``p = 1`` is compared explicitly and the winner's runtime is
    re-evaluated in high precision.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lo, hi = 1e-4 / n, 1.0
    p = 1.0 / n if n > 1 else 0.5
    it = 0
    for it in range(1, max_iter + 1):
        g = _dE(n, lam, p)
        if abs(g) < 1e-10:
            break
        if g < 0:
            lo = p
        else:
            hi = p
        H = 1e-3 * p
        if p + H < 1.0:
            curv = (_dE(n, lam, p + H) - _dE(n, lam, p - H)) / (2 * H)
        else:
            curv = (g - _dE(n, lam, p - H)) / H
        step = p - g / curv if curv > 0 else math.nan
        new = step if lo < step < hi else 0.5 * (lo + hi)
        dp = abs(new - p)
        p = new
        if dp < 1e-12 or dp < 1e-10 * p or hi - lo < 1e-12:
            break
    else:
        raise ConvergenceError(f"no convergence for n={n}, lambda={lam} after {max_iter} iterations")
    interior = runtime_float(n, p, lam)
    at_one = runtime_float(n, 1.0, lam)
    boundary = at_one <= interior
    if boundary:
        p = 1.0
    if high_precision:
        value = float(onemax_runtime(n, p, lam, "mp").expected_runtime)
    else:
        value = at_one if boundary else interior
    return OptimalP(n, lam, p, value, it, boundary)


BASIS = {
    "constant": lambda x: np.ones_like(x),
    "x": lambda x: x,
    "xlogx": lambda x: x * np.log(x),
    "inv": lambda x: 1.0 / x,
    "log": lambda x: np.log(x),
}


def fit_least_squares(points, basis: Sequence[str]) -> np.ndarray:
    """Ordinary least squares by the normal equations; natural logarithms."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (x, y) pairs")
    unknown = [b for b in basis if b not in BASIS]
    if unknown:
        raise ValueError(f"unknown basis functions {unknown}; choose from {sorted(BASIS)}")
    if len(pts) < len(basis):
        raise ValueError(f"{len(pts)} points cannot determine {len(basis)} coefficients")
    x, y = pts[:, 0], pts[:, 1]
    A = np.column_stack([BASIS[b](x) for b in basis])
    if np.linalg.matrix_rank(A) < len(basis):
        raise np.linalg.LinAlgError("rank-deficient design matrix")
    return np.linalg.solve(A.T @ A, A.T @ y)


def loglog_slope(points) -> tuple[float, float]:
    """(intercept, slope) of ``log y`` against ``log x``."""
    pts = np.asarray(points, dtype=np.float64)
    if np.any(pts <= 0):
        raise ValueError("log-log fit needs positive data")
    a, b = fit_least_squares(np.log(pts), ["constant", "x"])
    return float(a), float(b)


def lambda_sweep(n: int, p, lambdas, optimal: bool = False, precision: str = "mp") -> list[tuple[int, float, float]]:
    """Rows ``(lambda, p used, E[tau])``; with ``optimal`` each lambda gets its own p*.

    Fixed-p rows default to the high-precision path; exact rationals raised to
    large ``lambda`` grow too fast to be practical.
    """
    rows = []
    for lam in sorted(lambdas):
        if optimal:
            res = optimal_p(n, lam)
            rows.append((lam, res.p_star, res.runtime))
        else:
            rows.append((lam, float(p), float(onemax_runtime(n, p, lam, precision).expected_runtime)))
    return rows


def runtime_curve(n: int, ps, lam: int = 1) -> list[tuple[float, float]]:
    return [(float(p), runtime_float(n, p, lam)) for p in sorted(ps)]
