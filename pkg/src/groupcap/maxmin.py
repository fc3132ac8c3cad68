"""Max over the weight simplex of the minimum of constant-over-linear ratios.

Solves ``t* = max_{w in simplex} min_h A_h / (c_h . w)`` by bisection on ``t``;
each step is a small linear program answered by a dense two-phase simplex
method with Bland's rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

PIVOT_TOL = 1e-12
FEAS_TOL = 1e-12


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class RatioConstraint:
    label: object
    numerator: float
    coeffs: tuple[float, ...]

    def __post_init__(self):
        c = tuple(float(x) for x in self.coeffs)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "numerator", float(self.numerator))
        if self.numerator < 0:
            raise ValueError(f"constraint {self.label}: numerator must be >= 0")
        if any(x < 0 for x in c):
            raise ValueError(f"constraint {self.label}: coefficients must be >= 0")
        if not c or max(c) <= 0:
            raise ValueError(f"constraint {self.label}: coefficient vector is zero")


@dataclass(frozen=True)
class MaxMinSolution:
    value: float
    weights: tuple[float, ...]
    active: tuple
    certificate: dict


def ratio(A: float, denom: float) -> float:
    # A zero denominator means the constraint carries no rate and never binds.
    if denom <= 0:
        return math.inf
    return A / denom


# -- simplex -----------------------------------------------------------------


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    for i in range(T.shape[0]):
        if i != row and T[i, col] != 0.0:
            T[i] -= T[i, col] * T[row]


def _run_simplex(T: np.ndarray, basis: list[int], n_cols: int, max_iter: int) -> None:
    """Minimize the objective held in the last row of tableau T (Bland's rule)."""
    m = T.shape[0] - 1
    for _ in range(max_iter):
        obj = T[-1, :n_cols]
        entering = next((j for j in range(n_cols) if obj[j] < -PIVOT_TOL), None)
        if entering is None:
            return
        col = T[:m, entering]
        rows = [i for i in range(m) if col[i] > PIVOT_TOL]
        if not rows:
            raise SolverError("linear program is unbounded")
        ratios = [T[i, -1] / col[i] for i in rows]
        best = min(ratios)
        leaving = min(
            (i for i, r in zip(rows, ratios) if r <= best + PIVOT_TOL * (1 + abs(best))),
            key=lambda i: basis[i],
        )
        _pivot(T, leaving, entering)
        basis[leaving] = entering
    raise SolverError("simplex iteration cap reached")


def simplex_min(c, A_eq, b_eq, max_iter: int = 10000):
    """Minimize ``c.x`` subject to ``A_eq x = b_eq``, ``x >= 0``.

    Returns ``(x, value)`` or ``None`` when infeasible.
    """
    A = np.array(A_eq, dtype=float)
    b = np.array(b_eq, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1

    # phase 1: artificials n..n+m-1
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _run_simplex(T, basis, n + m, max_iter)
    if -T[-1, -1] > FEAS_TOL * (1 + b.sum()):
        return None

    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if abs(T[i, j]) > PIVOT_TOL), None)
            if j is not None:
                _pivot(T, i, j)
                basis[i] = j
    keep = [i for i in range(m) if basis[i] < n]

    T2 = np.zeros((len(keep) + 1, n + 1))
    T2[:-1, :n] = T[keep, :n]
    T2[:-1, -1] = T[keep, -1]
    basis = [basis[i] for i in keep]
    T2[-1, :n] = c
    for i, bj in enumerate(basis):
        T2[-1] -= c[bj] * T2[i]
    _run_simplex(T2, basis, n, max_iter)
    x = np.zeros(n)
    for i, bj in enumerate(basis):
        x[bj] = T2[i, -1]
    return x, float(c @ x)


# -- max-min -----------------------------------------------------------------


def _validate(constraints, dim: int):
    if not constraints:
        raise ValueError("constraint list is empty")
    labels = [con.label for con in constraints]
    if len(set(labels)) != len(labels):
        raise ValueError("constraint labels must be unique")
    for con in constraints:
        if len(con.coeffs) != dim:
            raise ValueError(f"constraint {con.label} has {len(con.coeffs)} coefficients, expected {dim}")


def _min_max_excess(constraints, t: float, dim: int):
    """min over the simplex of max_h (t c_h.w - A_h), as an LP.

    Variables: w (dim), s+, s-, slack per constraint.
    """
    H = len(constraints)
    n = dim + 2 + H
    A_eq = np.zeros((H + 1, n))
    b_eq = np.zeros(H + 1)
    for h, con in enumerate(constraints):
        A_eq[h, :dim] = t * np.array(con.coeffs)
        A_eq[h, dim] = -1.0
        A_eq[h, dim + 1] = 1.0
        A_eq[h, dim + 2 + h] = 1.0
        b_eq[h] = con.numerator
    A_eq[H, :dim] = 1.0
    b_eq[H] = 1.0
    cost = np.zeros(n)
    cost[dim] = 1.0
    cost[dim + 1] = -1.0
    res = simplex_min(cost, A_eq, b_eq)
    if res is None:
        raise SolverError("feasibility LP unexpectedly infeasible")
    x, s = res
    w = np.clip(x[:dim], 0.0, None)
    return w / w.sum(), s


def feasibility_lp(constraints, t: float, dim: int):
    """A simplex point with ``t c_h.w <= A_h`` for all h, or ``None``."""
    _validate(constraints, dim)
    if t <= 0:
        raise ValueError("t must be positive")
    w, s = _min_max_excess(constraints, t, dim)
    scale = 1 + max(con.numerator for con in constraints)
    if s <= FEAS_TOL * scale:
        return tuple(float(v) for v in w)
    return None


def min_ratio(constraints, w) -> float:
    w = np.asarray(w, dtype=float)
    return min(ratio(con.numerator, float(np.dot(con.coeffs, w))) for con in constraints)


def _finish(constraints, w, tol, active_tol=1e-9) -> MaxMinSolution:
    cert = {con.label: ratio(con.numerator, float(np.dot(con.coeffs, w))) for con in constraints}
    value = min(cert.values())
    slack = max(tol, active_tol) * max(1.0, abs(value)) if math.isfinite(value) else 0.0
    active = tuple(lab for lab, r in cert.items() if r <= value + slack)
    return MaxMinSolution(float(value), tuple(float(x) for x in w), active, cert)


def _polish(constraints, w, dim: int, rel: float = 1e-7):
    """Snap ``w`` to the vertex where the near-active ratios are equal.

    Solves ``c_h.w = A_h s`` for the near-active h, ``w_i = 0`` on the
    near-zero coordinates and ``sum(w) = 1``; kept only if the min ratio rises.
    """
    value = min_ratio(constraints, w)
    if not math.isfinite(value) or value <= 0:
        return w
    rows, rhs = [], []
    for con in constraints:
        d = float(np.dot(con.coeffs, w))
        if d > 0 and ratio(con.numerator, d) <= value * (1 + rel):
            rows.append(list(con.coeffs) + [-con.numerator])
            rhs.append(0.0)
    for i in range(dim):
        if w[i] <= rel:
            rows.append([1.0 if j == i else 0.0 for j in range(dim)] + [0.0])
            rhs.append(0.0)
    rows.append([1.0] * dim + [0.0])
    rhs.append(1.0)
    sol = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    cand = np.clip(sol[:dim], 0.0, None)
    if cand.sum() <= 0:
        return w
    cand = cand / cand.sum()
    return cand if min_ratio(constraints, cand) > value else w


def maximize_min_ratio(constraints, dim: int, tol: float = 1e-12, max_iter: int = 60) -> MaxMinSolution:
    """Bisection on t with an exact LP feasibility check at each step.

    If some coordinate appears in no constraint, the vertex on that coordinate
    makes every ratio infinite and ``value`` is ``inf``.
    """
    constraints = list(constraints)
    _validate(constraints, dim)
    covered = [any(con.coeffs[i] > 0 for con in constraints) for i in range(dim)]
    if not all(covered):
        i = covered.index(False)
        w = [0.0] * dim
        w[i] = 1.0
        return _finish(constraints, w, tol)

    hi = max(
        con.numerator * dim / ci for con in constraints for ci in con.coeffs if ci > 0
    )
    lo = 0.0
    w_best = np.full(dim, 1.0 / dim)
    if hi == 0.0:
        return _finish(constraints, w_best, tol)
    # every point is feasible at t -> 0; use the LP's choice as the starting w
    w_best, _ = _min_max_excess(constraints, hi * 2.0**-max_iter, dim)
    for _ in range(max_iter):
        if hi - lo <= tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        w = feasibility_lp(constraints, mid, dim)
        if w is None:
            hi = mid
        else:
            lo = mid
            w_best = np.asarray(w)
    else:
        if hi - lo > max(1e-9, tol) * max(1.0, hi):
            raise SolverError("bisection did not converge")
    return _finish(constraints, _polish(constraints, w_best, dim), tol)


def simplex_lattice(dim: int, resolution: int) -> np.ndarray:
    """All weight vectors with entries k/resolution summing to 1, one per row."""
    if dim == 1:
        return np.ones((1, 1))
    if dim == 2:
        k = np.arange(resolution + 1)
        return np.column_stack([k, resolution - k]) / resolution
    rows = []
    for k in range(resolution + 1):
        rest = simplex_lattice(dim - 1, resolution - k) if resolution > k else np.zeros((1, dim - 1))
        scaled = rest * (resolution - k)
        rows.append(np.column_stack([np.full(len(scaled), k), scaled]))
    return np.rint(np.vstack(rows)) / resolution


def grid_cross_check(constraints, dim: int, resolution: int) -> float:
    """Grid search oracle; a lower bound on t* that tightens with resolution."""
    _validate(constraints, dim)
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if dim > 4:
        raise ValueError("grid oracle limited to dim <= 4")
    A = np.array([con.numerator for con in constraints])
    C = np.array([con.coeffs for con in constraints])
    best = -math.inf
    for k in range(resolution + 1):
        # slice on the first coordinate to bound memory
        if dim == 1:
            Wm = np.ones((1, 1))
        elif k == resolution:
            Wm = np.eye(dim)[:1]
        else:
            rest = simplex_lattice(dim - 1, resolution - k) * (resolution - k) / resolution
            Wm = np.column_stack([np.full(len(rest), k / resolution), rest])
        D = Wm @ C.T
        with np.errstate(divide="ignore", invalid="ignore"):
            R = np.where(D > 0, A[None, :] / np.where(D > 0, D, 1.0), np.inf)
        best = max(best, float(R.min(axis=1).max()))
        if dim == 1:
            break
    return best
