"""Bounded-variable primal simplex kernel.

This is the hot loop of the package: every support evaluation, membership
test, and emptiness check bottoms out here.  The kernel is written in
numba-compatible vectorized numpy; by default it is jit-compiled, and setting
the environment variable ZONOSHARP_DISABLE_NUMBA=1 selects the pure-numpy
path instead (same code object, no compilation).  benchmarks/bench_lp.py
compares the two.

Pricing is Dantzig (most violated reduced cost) with an automatic switch to
Bland's rule after a run of degenerate steps, which guarantees termination.
Phase 1 uses one artificial variable per equality row.

Status codes: 0 optimal, 1 infeasible, 2 numerical failure, 3 unbounded.
"""

import os

import numpy as np

OPT_TOL = 1e-9
PIV_TOL = 1e-9
DEGEN_SWITCH = 60  # consecutive degenerate pivots before switching to Bland
DEGEN_BAIL = 10000  # consecutive degenerate pivots before giving up


def _simplex_loop(T, A_all, b, x, L, U, basis, in_basis, at_upper, cost, max_iter,
                  always_bland):
    m, N = T.shape
    degen = 0
    bland = always_bland
    it = 0
    pivots_since_refactor = 0
    while it < max_iter:
        it += 1
        if pivots_since_refactor >= 100:
            # refactor from scratch to shed accumulated pivot error; a
            # rank-deficient basis cannot be repaired, so bail out and let
            # the driver retry on a perturbed problem
            B = A_all[:, basis].copy()
            sol = np.linalg.lstsq(B, A_all, rcond=-1.0)
            if sol[2] < m:
                return 2
            T[:, :] = sol[0]
            xn = x.copy()
            for i in range(m):
                xn[basis[i]] = 0.0
            xB_new = np.linalg.lstsq(B, b - A_all @ xn, rcond=-1.0)[0]
            for i in range(m):
                x[basis[i]] = xB_new[i]
            pivots_since_refactor = 0
        cb = cost[basis]
        y = cb @ T
        rc = cost - y
        free = ~in_basis
        mask_low = free & (~at_upper) & (rc < -OPT_TOL)
        mask_up = free & at_upper & (rc > OPT_TOL)
        viol = np.where(mask_low, -rc, np.where(mask_up, rc, -1.0))
        if bland:
            cand = np.nonzero(viol > 0.0)[0]
            if cand.shape[0] == 0:
                return 0
            enter = cand[0]
        else:
            enter = int(np.argmax(viol))
            if viol[enter] <= 0.0:
                return 0
        sgn = -1.0 if at_upper[enter] else 1.0
        d = sgn * T[:, enter]

        xB = x[basis]
        lB = L[basis]
        uB = U[basis]
        pos = d > PIV_TOL
        neg = d < -PIV_TOL
        safe_pos = np.where(pos, d, 1.0)
        safe_neg = np.where(neg, -d, 1.0)
        t_arr = np.where(pos, (xB - lB) / safe_pos,
                         np.where(neg, (uB - xB) / safe_neg, np.inf))
        t_arr = np.maximum(t_arr, 0.0)
        t_basic = np.min(t_arr) if m > 0 else np.inf
        t_flip = U[enter] - L[enter]
        if t_basic == np.inf and t_flip == np.inf:
            return 3
        if t_flip < t_basic - 1e-12:
            # entering variable runs to its other bound; basis unchanged
            t = t_flip
            newxB = xB - t * d
            for i in range(m):
                x[basis[i]] = newxB[i]
            if at_upper[enter]:
                x[enter] = L[enter]
                at_upper[enter] = False
            else:
                x[enter] = U[enter]
                at_upper[enter] = True
            if t <= 1e-12:
                degen += 1
                if degen > DEGEN_SWITCH:
                    bland = True
                if degen > DEGEN_BAIL:
                    return 2
            else:
                degen = 0
                bland = always_bland
            continue
        t = t_basic
        cand = np.nonzero(t_arr <= t + 1e-9)[0]
        if bland:
            # anti-cycling: leave the smallest variable index
            leave = cand[int(np.argmin(basis[cand]))]
        else:
            # stability: pivot on the largest eligible element
            leave = cand[int(np.argmax(np.abs(d[cand])))]
        lv = basis[leave]
        enter_val = x[enter] + sgn * t
        newxB = xB - t * d
        for i in range(m):
            x[basis[i]] = newxB[i]
        if d[leave] > 0.0:
            x[lv] = L[lv]
            at_upper[lv] = False
        else:
            x[lv] = U[lv]
            at_upper[lv] = True
        basis[leave] = enter
        in_basis[enter] = True
        in_basis[lv] = False
        at_upper[enter] = False
        x[enter] = enter_val
        if np.max(np.abs(newxB)) > 1e9 * (1.0 + np.max(np.abs(U))):
            if pivots_since_refactor == 0:
                return 2  # blew up right after a clean refactor: give up
            pivots_since_refactor = 100  # force a refactor next iteration
        piv = T[leave, enter]
        prow = T[leave, :] / piv
        colv = T[:, enter].copy()
        T -= colv.reshape(-1, 1) * prow
        T[leave, :] = prow
        pivots_since_refactor += 1
        if t <= 1e-12:
            degen += 1
            if degen > DEGEN_SWITCH:
                bland = True
            if degen > DEGEN_BAIL:
                return 2
        else:
            degen = 0
            bland = always_bland
    return 2


def _refresh_basic_values(A_all, b, x, basis):
    """Re-solve the basic system to shed accumulated pivot drift."""
    m = A_all.shape[0]
    if m == 0:
        return
    xn = x.copy()
    for i in range(m):
        xn[basis[i]] = 0.0
    rhs = b - A_all @ xn
    B = A_all[:, basis].copy()
    xB = np.linalg.lstsq(B, rhs, rcond=-1.0)[0]
    for i in range(m):
        x[basis[i]] = xB[i]


def _solve_attempt(c, A, b, lo, up, feas_tol, max_iter, phase1_only, always_bland):
    """One two-phase pass.  Returns (status, objective, x, phase1_resid)."""
    m, n = A.shape
    N = n + m
    L = np.empty(N)
    U = np.empty(N)
    L[:n] = lo
    U[:n] = up
    x = np.empty(N)
    x[:n] = lo
    at_upper = np.zeros(N, dtype=np.bool_)
    r = b - A @ lo
    A_all = np.zeros((m, N))
    A_all[:, :n] = A
    T = np.zeros((m, N))
    basis = np.empty(m, dtype=np.int64)
    in_basis = np.zeros(N, dtype=np.bool_)
    # loose artificial bound: a tight bound would start every artificial at
    # its upper bound and block all progress with degenerate ratios
    art_cap = np.sum(np.abs(r)) + 1.0
    for i in range(m):
        s = 1.0 if r[i] >= 0.0 else -1.0
        A_all[i, n + i] = s
        x[n + i] = np.abs(r[i])
        L[n + i] = 0.0
        U[n + i] = art_cap
        basis[i] = n + i
        in_basis[n + i] = True
        # T = B^{-1} A_all with B = diag(s): scale row i by s
        T[i, :] = s * A_all[i, :]
        T[i, n + i] = 1.0

    cost1 = np.zeros(N)
    cost1[n:] = 1.0
    st = _simplex_loop(T, A_all, b, x, L, U, basis, in_basis, at_upper, cost1,
                       max_iter, always_bland)
    if st == 2:
        return 2, 0.0, x[:n].copy(), np.inf
    _refresh_basic_values(A_all, b, x, basis)
    p1 = 0.0
    for j in range(n, N):
        p1 += np.abs(x[j])
    scale = 1.0 + np.max(np.abs(b)) if m > 0 else 1.0
    bscale = 1.0 + max(np.max(np.abs(lo)), np.max(np.abs(up))) if n > 0 else 1.0
    bviol = 0.0
    for j in range(n):
        bviol = max(bviol, lo[j] - x[j], x[j] - up[j])
    if bviol > 100.0 * feas_tol * bscale:
        return 2, 0.0, x[:n].copy(), np.inf
    if phase1_only:
        return 0, 0.0, x[:n].copy(), p1
    if p1 > feas_tol * scale:
        return 1, 0.0, x[:n].copy(), p1

    # pin artificials at zero and optimize the true objective
    for j in range(n, N):
        L[j] = 0.0
        U[j] = 0.0
        if not in_basis[j]:
            x[j] = 0.0
            at_upper[j] = False
    cost2 = np.zeros(N)
    cost2[:n] = c
    st = _simplex_loop(T, A_all, b, x, L, U, basis, in_basis, at_upper, cost2,
                       max_iter, always_bland)
    if st != 0:
        return st, 0.0, x[:n].copy(), p1
    _refresh_basic_values(A_all, b, x, basis)
    xout = x[:n].copy()
    obj = float(c @ xout)
    # certify feasibility of the reported optimizer: equality residual and
    # variable bounds (a drifted tableau can leave a basic variable outside
    # its range even when Ax=b is re-solved exactly)
    if m > 0:
        resid = np.max(np.abs(A @ xout - b))
        if resid > 100.0 * feas_tol * scale:
            return 2, obj, xout, p1
    bviol = 0.0
    for j in range(n):
        bviol = max(bviol, lo[j] - xout[j], xout[j] - up[j])
    if bviol > 100.0 * feas_tol * bscale:
        return 2, obj, xout, p1
    return 0, obj, xout, p1


def _noise(n, seed):
    """Deterministic pseudo-noise in [-0.5, 0.5) (linear congruential)."""
    out = np.empty(n)
    s = np.int64(seed)
    for i in range(n):
        s = (np.int64(1103515245) * s + np.int64(12345)) % np.int64(2147483648)
        out[i] = s / 2147483648.0 - 0.5
    return out


def _solve_bounded(c, A, b, lo, up, feas_tol, max_iter, phase1_only):
    """Two-phase bounded simplex.  Returns (status, objective, x, phase1_resid).

    A numerically failed pass (a degenerate crawl ending in a drifted basis
    that flunks the final residual certificate) is retried on a tinily
    perturbed problem: shifting b, the bounds, and the objective by O(1e-9)
    breaks the ties that cause the stall while moving the optimum by far less
    than any tolerance used by the callers.
    """
    st, obj, x, p1 = _solve_attempt(c, A, b, lo, up, feas_tol, max_iter,
                                    phase1_only, False)
    if st != 2:
        return st, obj, x, p1
    m, n = A.shape
    cscale = 1.0 + np.max(np.abs(c)) if n > 0 else 1.0
    for k in range(5):
        # bounds only ever expand, so the perturbed problem is a superset of
        # the original and an infeasible verdict remains trustworthy
        eps = 1e-9 * 10.0 ** (k // 2)
        cp = c + eps * cscale * _noise(n, 101 + 37 * k)
        lop = lo - eps * np.abs(_noise(n, 211 + 37 * k))
        upp = up + eps * np.abs(_noise(n, 307 + 37 * k))
        st, obj, x, p1 = _solve_attempt(cp, A, b, lop, upp, feas_tol,
                                        2 * max_iter, phase1_only, False)
        if st != 2:
            return st, obj, x, p1
    return st, obj, x, p1


NUMBA_DISABLED = os.environ.get("ZONOSHARP_DISABLE_NUMBA", "0") == "1"
USING_NUMBA = False

if not NUMBA_DISABLED:
    try:
        import numba

        _simplex_loop = numba.njit(cache=True)(_simplex_loop)
        _refresh_basic_values = numba.njit(cache=True)(_refresh_basic_values)
        _solve_attempt = numba.njit(cache=True)(_solve_attempt)
        _noise = numba.njit(cache=True)(_noise)
        _solve_bounded = numba.njit(cache=True)(_solve_bounded)
        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False


def solve_bounded(c, A, b, lo, up, feas_tol=1e-8, max_iter=0):
    """Solve min c'x s.t. Ax=b, lo<=x<=up (all bounds finite).

    Returns (status, objective, x) with status 0 optimal, 1 infeasible,
    2 numerical failure, 3 unbounded.
    """
    c = np.ascontiguousarray(c, dtype=np.float64)
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    up = np.ascontiguousarray(up, dtype=np.float64)
    if max_iter <= 0:
        max_iter = 200 * (A.shape[0] + A.shape[1]) + 2000
    if A.shape[0] == 0 and A.shape[1] == 0:
        return 0, 0.0, np.zeros(0)
    st, obj, x, _ = _solve_bounded(c, A, b, lo, up, feas_tol, max_iter, False)
    return st, obj, x


def min_infeasibility(A, b, lo, up, max_iter=0):
    """Phase-1 optimum: minimal total equality violation over the box.

    Returns (residual, x).  residual ~ 0 iff the system is feasible.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    up = np.ascontiguousarray(up, dtype=np.float64)
    if max_iter <= 0:
        max_iter = 200 * (A.shape[0] + A.shape[1]) + 2000
    if A.shape[0] == 0:
        return 0.0, lo.copy()
    if A.shape[1] == 0:
        return float(np.sum(np.abs(b))), np.zeros(0)
    c = np.zeros(A.shape[1])
    st, _, x, p1 = _solve_bounded(c, A, b, lo, up, 1e-8, max_iter, True)
    if st == 2:
        return np.inf, x
    return p1, x
