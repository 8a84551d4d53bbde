"""LP-backed geometric oracles.

Support functions, membership, emptiness, empirical sharpness certification,
and 2D boundary/area extraction.  Hybrid zonotope queries decompose into
per-leaf LPs over the continuous factor box; convex queries are single LPs.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from . import _simplex
from .core import (
    AnySet,
    ConstrainedZonotope,
    DEFAULT_LEAF_CAP,
    FactorForm,
    HybridZonotope,
    leaves,
)
from .errors import EmptySet, EnumerationCapExceeded, NumericalFailure

FEAS_TOL = 1e-8
SHARP_TOL = 1e-6


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LinearProgram:
    """min objective'x  s.t.  A_eq x = b_eq, lower <= x <= upper."""

    objective: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        obj = np.asarray(self.objective, dtype=np.float64).reshape(-1)
        lo = np.asarray(self.lower, dtype=np.float64).reshape(-1)
        up = np.asarray(self.upper, dtype=np.float64).reshape(-1)
        b = np.asarray(self.b_eq, dtype=np.float64).reshape(-1)
        A = np.asarray(self.A_eq, dtype=np.float64)
        if A.size == 0:
            A = A.reshape((b.shape[0], obj.shape[0]))
        if A.shape != (b.shape[0], obj.shape[0]):
            raise ValueError("A_eq must be (len(b_eq), len(objective))")
        if lo.shape != obj.shape or up.shape != obj.shape:
            raise ValueError("bounds must match objective length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(up))):
            raise ValueError("all bounds must be finite")
        if np.any(lo > up):
            raise ValueError("lower bounds must not exceed upper bounds")
        for name, arr in (("objective", obj), ("A_eq", A), ("b_eq", b),
                          ("lower", lo), ("upper", up)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    value: float | None = None
    point: np.ndarray | None = None


def solve_lp(p: LinearProgram) -> LpResult:
    st, obj, x = _simplex.solve_bounded(p.objective, p.A_eq, p.b_eq,
                                        p.lower, p.upper, feas_tol=FEAS_TOL)
    if st == 0:
        return LpResult(LpStatus.OPTIMAL, obj, x)
    if st == 1:
        return LpResult(LpStatus.INFEASIBLE)
    raise NumericalFailure(f"simplex failed with status {st}")


# --- feasibility -----------------------------------------------------------

def _cz_residual(L: ConstrainedZonotope) -> float:
    lo, up = L.factor_bounds()
    resid, _ = _simplex.min_infeasibility(L.A, L.b, lo, up)
    return resid


def _feas_scale(L: ConstrainedZonotope) -> float:
    return 1.0 + (np.max(np.abs(L.b)) if L.n_c else 0.0)


def is_feasible_cz(L: ConstrainedZonotope) -> bool:
    return _cz_residual(L) <= FEAS_TOL * _feas_scale(L)


def is_empty(S: AnySet, cap: int = DEFAULT_LEAF_CAP) -> bool:
    if isinstance(S, ConstrainedZonotope):
        return not is_feasible_cz(S)
    return all(not is_feasible_cz(L) for _, L in leaves(S, cap=cap))


# --- support ---------------------------------------------------------------

def _support_cz(L: ConstrainedZonotope, u: np.ndarray):
    """(value, point) or None if infeasible."""
    lo, up = L.factor_bounds()
    g = L.G.T @ u
    st, obj, xi = _simplex.solve_bounded(-g, L.A, L.b, lo, up, feas_tol=FEAS_TOL)
    if st == 1:
        return None
    if st != 0:
        raise NumericalFailure(f"support LP failed with status {st}")
    return float(u @ L.c) - obj, L.G @ xi + L.c


def support_point(S: AnySet, u, cap: int = DEFAULT_LEAF_CAP):
    """Support value and a maximizing point of S in direction u."""
    u = np.asarray(u, dtype=np.float64).reshape(-1)
    if isinstance(S, ConstrainedZonotope):
        out = _support_cz(S, u)
        if out is None:
            raise EmptySet("support of an empty set")
        return out
    best = None
    for _, L in leaves(S, cap=cap):
        out = _support_cz(L, u)
        if out is not None and (best is None or out[0] > best[0]):
            best = out
    if best is None:
        raise EmptySet("support of an empty set")
    return best


def support(S: AnySet, u, cap: int = DEFAULT_LEAF_CAP) -> float:
    return support_point(S, u, cap=cap)[0]


# --- membership ------------------------------------------------------------

def _leaf_interval_hull(L: ConstrainedZonotope) -> tuple[np.ndarray, np.ndarray]:
    lo, up = L.factor_bounds()
    Gpos = np.maximum(L.G, 0.0)
    Gneg = np.minimum(L.G, 0.0)
    return (L.c + Gpos @ lo + Gneg @ up, L.c + Gpos @ up + Gneg @ lo)


def _cz_contains(L: ConstrainedZonotope, p: np.ndarray, tol: float) -> bool:
    hull_lo, hull_up = _leaf_interval_hull(L)
    if np.any(p < hull_lo - tol) or np.any(p > hull_up + tol):
        return False
    A = np.vstack([L.G, L.A]) if L.n_c else L.G
    b = np.concatenate([p - L.c, L.b])
    lo, up = L.factor_bounds()
    resid, _ = _simplex.min_infeasibility(A, b, lo, up)
    return resid <= tol * (1.0 + np.max(np.abs(b), initial=0.0))


def contains(S: AnySet, p, tol: float = 1e-6, cap: int = DEFAULT_LEAF_CAP) -> bool:
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if isinstance(S, ConstrainedZonotope):
        return _cz_contains(S, p, tol)
    return any(_cz_contains(L, p, tol) for _, L in leaves(S, cap=cap))


# --- sharpness -------------------------------------------------------------

class SharpnessVerdict(enum.Enum):
    SHARP = "sharp"
    NOT_SHARP = "not_sharp"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SharpnessReport:
    directions: np.ndarray  # (n_dirs, n)
    relax_support: np.ndarray
    hull_support: np.ndarray
    max_gap: float
    verdict: SharpnessVerdict
    tol: float

    def to_obj(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "max_gap": self.max_gap,
            "tol": self.tol,
            "directions": self.directions.tolist(),
            "relax_support": self.relax_support.tolist(),
            "hull_support": self.hull_support.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj())


def direction_set(n: int, n_dirs: int, seed: int = 0) -> np.ndarray:
    """Deterministic direction sample: all +-axes, then low-discrepancy fill."""
    if n_dirs < 2 * n:
        n_dirs = 2 * n
    dirs = [np.eye(n)[i] for i in range(n)] + [-np.eye(n)[i] for i in range(n)]
    extra = n_dirs - 2 * n
    if n == 2:
        golden = (np.sqrt(5.0) - 1.0) / 2.0
        for k in range(extra):
            th = 2.0 * np.pi * (((k + 1) * golden + seed * golden ** 2) % 1.0)
            dirs.append(np.array([np.cos(th), np.sin(th)]))
    else:
        rng = np.random.default_rng(seed)
        while extra > 0:
            v = rng.normal(size=n)
            nv = np.linalg.norm(v)
            if nv > 1e-9:
                dirs.append(v / nv)
                extra -= 1
    return np.asarray(dirs)


def check_sharpness(H: AnySet, n_dirs: int = 64, tol: float = SHARP_TOL,
                    cap: int = DEFAULT_LEAF_CAP, seed: int = 0) -> SharpnessReport:
    """Compare support of the relaxation against the leafwise convex hull."""
    from .algebra import convex_relaxation

    dirs = direction_set(H.dim if isinstance(H, HybridZonotope) else H.dim, n_dirs, seed)
    relaxed = convex_relaxation(H) if isinstance(H, HybridZonotope) else H
    try:
        leaf_list = (leaves(H, cap=cap) if isinstance(H, HybridZonotope)
                     else [(None, H)])
    except EnumerationCapExceeded:
        nan = np.full(len(dirs), np.nan)
        return SharpnessReport(dirs, nan, nan, np.nan,
                               SharpnessVerdict.INCONCLUSIVE, tol)
    rs = np.empty(len(dirs))
    hs = np.empty(len(dirs))
    for i, u in enumerate(dirs):
        out = _support_cz(relaxed, u)
        if out is None:
            raise EmptySet("sharpness check on an empty set")
        rs[i] = out[0]
        best = -np.inf
        for _, L in leaf_list:
            lv = _support_cz(L, u)
            if lv is not None:
                best = max(best, lv[0])
        hs[i] = best
    max_gap = float(np.max(rs - hs))
    verdict = SharpnessVerdict.SHARP if max_gap <= tol else SharpnessVerdict.NOT_SHARP
    return SharpnessReport(dirs, rs, hs, max_gap, verdict, tol)


# --- 2D boundary and area --------------------------------------------------

def boundary_2d(S: ConstrainedZonotope, n_angles: int = 64,
                dedup_tol: float = 1e-9) -> np.ndarray:
    """Counterclockwise polygon of support-touching points of a convex 2D set.

    The polygon is inscribed in S; its accuracy improves with n_angles.
    """
    if S.dim != 2:
        raise ValueError("boundary_2d requires a 2D set")
    pts = []
    for k in range(n_angles):
        th = 2.0 * np.pi * k / n_angles
        u = np.array([np.cos(th), np.sin(th)])
        out = _support_cz(S, u)
        if out is None:
            raise EmptySet("boundary of an empty set")
        pts.append(out[1])
    pts = np.asarray(pts)
    scale = 1.0 + np.max(np.abs(pts))
    centroid = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - centroid[1], pts[:, 0] - centroid[0]),
                       kind="stable")
    pts = pts[order]
    keep = [pts[0]]
    for p in pts[1:]:
        if np.linalg.norm(p - keep[-1]) > dedup_tol * scale:
            keep.append(p)
    if len(keep) > 1 and np.linalg.norm(keep[0] - keep[-1]) <= dedup_tol * scale:
        keep.pop()
    return np.asarray(keep)


def polygon_area(poly: np.ndarray) -> float:
    if len(poly) < 3:
        return 0.0
    x, y = poly[:, 0], poly[:, 1]
    return float(0.5 * np.abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def area_2d(S: ConstrainedZonotope, n_angles: int = 256) -> float:
    """Shoelace area of the inscribed support polygon."""
    return polygon_area(boundary_2d(S, n_angles))


def polygon_to_csv(poly: np.ndarray) -> str:
    return "\n".join(f"{p[0]:.17g},{p[1]:.17g}" for p in poly) + ("\n" if len(poly) else "")
