"""Reformulation-linearization on the factor space of a hybrid zonotope.

The binary factors x and continuous factors y of a 01-form hybrid zonotope
satisfy an affine system A x + B y = beta.  The level-d lift introduces
products w_J ~ prod_{j in J} x_j and v_{J,k} ~ y_k * prod_{j in J} x_j,
multiplies the equality system by every monomial of degree <= d, and turns
the bound-factor product inequalities into equalities with [0,1] slacks.
Projecting the lift back to the original ambient space gives a set equal to
the input at every level; at d = n_b its relaxation is the convex hull.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .core import (
    AnySet,
    ComplexityTuple,
    ConstrainedZonotope,
    FactorForm,
    HybridZonotope,
    convert_form,
)
from .errors import LevelOutOfRange, OverlappingIndexSets


@dataclass(frozen=True)
class IndexSet:
    """Subset of {1..n_b} as a bitmask; bit i-1 stands for index i."""

    mask: int

    @classmethod
    def of(cls, *indices: int) -> "IndexSet":
        m = 0
        for i in indices:
            if i < 1:
                raise ValueError("indices are 1-based")
            m |= 1 << (i - 1)
        return cls(m)

    def cardinality(self) -> int:
        return self.mask.bit_count()

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet(self.mask | other.mask)

    def members(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.mask.bit_length())
                     if (self.mask >> i) & 1)

    def subsets(self):
        """All subsets in ascending mask order."""
        subs = []
        s = self.mask
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & self.mask
        for m in sorted(subs):
            yield IndexSet(m)

    def __len__(self) -> int:
        return self.cardinality()


def f_coefficients(J1: IndexSet, J2: IndexSet) -> dict[IndexSet, int]:
    """Signed w-coefficients of the linearized product over (J1, J2):
    (-1)^|I| on w_{J1 u I} for every I subset of J2."""
    if J1.mask & J2.mask:
        raise OverlappingIndexSets(f"{J1.members()} and {J2.members()} overlap")
    out: dict[IndexSet, int] = {}
    for I in J2.subsets():
        out[J1.union(I)] = -1 if I.cardinality() % 2 else 1
    return out


@dataclass
class RltVariableTable:
    """Column bookkeeping for the lifted factor space.

    Continuous columns: the original y block first, then w_J (|J| >= 2),
    then v_{J,k} (|J| >= 1), then slacks.  w_empty is the constant 1 and
    w_{i} is the binary x_i; neither gets a fresh column.
    """

    n_bin: int
    n_cont_orig: int
    w_index: dict[int, int] = field(default_factory=dict)
    v_index: dict[tuple[int, int], int] = field(default_factory=dict)
    slack_index: list[tuple[str, int, int, int]] = field(default_factory=list)
    slack_start: int = 0

    @property
    def n_slack_nominal(self) -> int:
        return sum(1 for kind, *_ in self.slack_index if kind != "order_D")

    @property
    def n_slack_extra(self) -> int:
        return sum(1 for kind, *_ in self.slack_index if kind == "order_D")

    @property
    def n_cols(self) -> int:
        return self.slack_start + len(self.slack_index)


def _masks_of_size(n: int, size: int):
    for m in range(1 << n):
        if m.bit_count() == size:
            yield m


def _order_pairs(n: int, order: int):
    """Disjoint (J1, J2) with |J1 u J2| = order, deterministic order."""
    for union_mask in _masks_of_size(n, order):
        for J1 in IndexSet(union_mask).subsets():
            yield J1.mask, union_mask ^ J1.mask


def _allocate_table(nb: int, ng: int) -> RltVariableTable:
    table = RltVariableTable(nb, ng)
    col = ng
    for m in range(1 << nb):
        if m.bit_count() >= 2:
            table.w_index[m] = col
            col += 1
    for m in range(1, 1 << nb):
        for k in range(ng):
            table.v_index[(m, k)] = col
            col += 1
    table.slack_start = col
    return table


class _RowBuilder:
    def __init__(self, table: RltVariableTable):
        self.table = table
        self.rows: list[tuple[dict[int, float], dict[int, float], float]] = []

    def new_row(self):
        self.rows.append(({}, {}, 0.0))

    def _bump(self, d: dict, key: int, val: float):
        d[key] = d.get(key, 0.0) + val

    def add_w(self, mask: int, coef: float):
        cont, binr, rhs = self.rows[-1]
        if coef == 0.0:
            return
        if mask == 0:
            # w_empty = 1: constant moves to the right-hand side
            self.rows[-1] = (cont, binr, rhs - coef)
        elif mask.bit_count() == 1:
            self._bump(binr, mask.bit_length() - 1, coef)
        else:
            self._bump(cont, self.table.w_index[mask], coef)

    def add_v(self, mask: int, k: int, coef: float):
        cont, _, _ = self.rows[-1]
        if coef == 0.0:
            return
        if mask == 0:
            self._bump(cont, k, coef)  # v_{empty,k} = y_k
        else:
            self._bump(cont, self.table.v_index[(mask, k)], coef)

    def add_slack(self, kind: str, J1: int, J2: int, k: int):
        col = self.table.n_cols
        self.table.slack_index.append((kind, J1, J2, k))
        cont, _, _ = self.rows[-1]
        cont[col] = -1.0


def build_xd(H: AnySet, d: int) -> tuple[HybridZonotope, RltVariableTable]:
    """Level-d lift of the factor space, as a 01-hybrid zonotope over the
    original (x, y) coordinates (x first).  All lift variables get zero
    generator columns; the ambient map back to R^n is the caller's affine map.
    """
    H = convert_form(H if isinstance(H, HybridZonotope) else H.as_hybrid(),
                     FactorForm.ZO)
    nb, ng, r = H.n_b, H.n_g, H.n_c
    if not 1 <= d <= nb:
        raise LevelOutOfRange(f"level {d} outside 1..{nb}")
    A, B, beta = H.Ab, H.Ac, H.b

    table = _allocate_table(nb, ng)
    rb = _RowBuilder(table)

    # (i) the equality system multiplied through by each monomial, |J| <= d
    for size in range(d + 1):
        for Jm in _masks_of_size(nb, size):
            members = [j for j in range(nb) if (Jm >> j) & 1]
            others = [j for j in range(nb) if not (Jm >> j) & 1]
            for i in range(r):
                rb.new_row()
                rb.add_w(Jm, sum(A[i, j] for j in members) - beta[i])
                for j in others:
                    rb.add_w(Jm | (1 << j), A[i, j])
                for k in range(ng):
                    rb.add_v(Jm, k, B[i, k])

    # (ii) order-D bound-factor products, each pinned to a fresh [0,1] slack
    D = min(d + 1, nb)
    for J1m, J2m in _order_pairs(nb, D):
        coefs = f_coefficients(IndexSet(J1m), IndexSet(J2m))
        rb.new_row()
        for J, s in coefs.items():
            rb.add_w(J.mask, float(s))
        rb.add_slack("order_D", J1m, J2m, -1)

    # (iii) order-d double inequalities, two slacks per (pair, k)
    for J1m, J2m in _order_pairs(nb, d):
        coefs = f_coefficients(IndexSet(J1m), IndexSet(J2m))
        for k in range(ng):
            rb.new_row()
            for J, s in coefs.items():
                rb.add_v(J.mask, k, float(s))
            rb.add_slack("pair_low", J1m, J2m, k)
            rb.new_row()
            for J, s in coefs.items():
                rb.add_w(J.mask, float(s))
                rb.add_v(J.mask, k, -float(s))
            rb.add_slack("pair_gap", J1m, J2m, k)

    n_cont = table.n_cols
    n_rows = len(rb.rows)
    Ac = np.zeros((n_rows, n_cont))
    Ab = np.zeros((n_rows, nb))
    b = np.zeros(n_rows)
    for idx, (cont, binr, rhs) in enumerate(rb.rows):
        for col, val in cont.items():
            Ac[idx, col] = val
        for col, val in binr.items():
            Ab[idx, col] = val
        b[idx] = rhs

    # ambient (x, y): x from the binaries, y from the first ng continuous cols
    dim = nb + ng
    Gb = np.vstack([np.eye(nb), np.zeros((ng, nb))])
    Gc = np.zeros((dim, n_cont))
    Gc[nb:, :ng] = np.eye(ng)
    lifted = HybridZonotope(Gc, Gb, np.zeros(dim), Ac, Ab, b, FactorForm.ZO)
    return lifted, table


def rlt_sharpen(H: AnySet, d: int) -> HybridZonotope:
    """Equal set, re-represented so the level-d lift tightens the relaxation.

    At d = n_b the relaxation of the output is the convex hull of H.
    Output is in 01 form; an n_b = 0 input is returned unchanged.
    """
    H = H.as_hybrid() if isinstance(H, ConstrainedZonotope) else H
    if H.n_b == 0:
        return H
    Hz = convert_form(H, FactorForm.ZO)
    lifted, _ = build_xd(Hz, d)
    R = np.hstack([Hz.Gb, Hz.Gc])  # ambient of the lift is (x, y)
    from .algebra import affine_map
    return affine_map(lifted, R, Hz.c)


def rlt_convex_hull(H: AnySet) -> ConstrainedZonotope:
    from .algebra import convex_relaxation
    H = H.as_hybrid() if isinstance(H, ConstrainedZonotope) else H
    if H.n_b == 0:
        return convex_relaxation(H)
    return convex_relaxation(rlt_sharpen(H, H.n_b))


def rlt_complexity(t: ComplexityTuple, d: int) -> ComplexityTuple:
    """Closed-form (nominal) complexity of the level-d output."""
    ng, nb, nc = t.n_g, t.n_b, t.n_c
    if not 1 <= d <= nb:
        raise LevelOutOfRange(f"level {d} outside 1..{nb}")
    ng_out = 2 ** nb * (ng + 1) + 2 ** (d + 1) * comb(nb, d) * ng - nb - 1
    nc_out = nc * sum(comb(nb, i) for i in range(d + 1)) + 2 ** (d + 1) * comb(nb, d) * ng
    return ComplexityTuple(ng_out, nb, nc_out)


def rlt_report(H: AnySet, d: int) -> tuple[HybridZonotope, dict]:
    """Sharpened set plus a complexity report.

    The closed-form count omits the slacks of the order-D rows, so the
    constructed set is slightly larger; both tuples are reported.
    """
    from .core import complexity
    H = H.as_hybrid() if isinstance(H, ConstrainedZonotope) else H
    nominal = rlt_complexity(complexity(H), d)
    out = rlt_sharpen(H, d)
    actual = complexity(out)
    report = {
        "level": d,
        "nominal": {"n_g": nominal.n_g, "n_b": nominal.n_b, "n_c": nominal.n_c},
        "actual": {"n_g": actual.n_g, "n_b": actual.n_b, "n_c": actual.n_c},
    }
    return out, report
