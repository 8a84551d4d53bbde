import numpy as np
import pytest

from zonosharp import (
    ConstrainedZonotope,
    EmptySet,
    FactorForm,
    HybridZonotope,
    LinearProgram,
    LpStatus,
    SharpnessVerdict,
    area_2d,
    boundary_2d,
    box,
    check_sharpness,
    contains,
    convex_relaxation,
    direction_set,
    interval,
    is_empty,
    point,
    polygon_area,
    solve_lp,
    support,
    support_point,
    union,
)
from zonosharp.oracle import polygon_to_csv


def _unit_square(form=FactorForm.ZO):
    return box(np.array([[0.0, 1.0], [0.0, 1.0]]), form)


def _two_squares():
    return union([_unit_square(),
                  box(np.array([[2.0, 3.0], [0.0, 1.0]]), FactorForm.ZO)])


class TestSolveLp:
    def test_optimal(self):
        p = LinearProgram(np.array([1.0, 1.0]), np.ones((1, 2)), np.ones(1),
                          np.zeros(2), np.ones(2))
        r = solve_lp(p)
        assert r.status is LpStatus.OPTIMAL
        assert r.value == pytest.approx(1.0)

    def test_infeasible(self):
        p = LinearProgram(np.zeros(1), np.ones((1, 1)), np.array([2.0]),
                          np.zeros(1), np.ones(1))
        assert solve_lp(p).status is LpStatus.INFEASIBLE

    def test_validation(self):
        with pytest.raises(ValueError):
            LinearProgram(np.zeros(2), np.zeros((0, 2)), np.zeros(0),
                          np.zeros(2), np.array([np.inf, 1.0]))
        with pytest.raises(ValueError):
            LinearProgram(np.zeros(1), np.zeros((0, 1)), np.zeros(0),
                          np.ones(1), np.zeros(1))


class TestSupport:
    def test_box_support_analytic(self):
        B = box(np.array([[-1.0, 2.0], [0.0, 3.0]]))
        assert support(B, [1.0, 0.0]) == pytest.approx(2.0, abs=1e-8)
        assert support(B, [-1.0, 0.0]) == pytest.approx(1.0, abs=1e-8)
        assert support(B, [0.0, 1.0]) == pytest.approx(3.0, abs=1e-8)
        assert support(B, [1.0, 1.0]) == pytest.approx(5.0, abs=1e-8)

    def test_support_point_achieves_value(self):
        rng = np.random.default_rng(0)
        Z = ConstrainedZonotope(rng.normal(size=(2, 4)), rng.normal(size=2),
                                np.zeros((0, 4)), np.zeros(0), FactorForm.PM1)
        for _ in range(10):
            u = rng.normal(size=2)
            val, p = support_point(Z, u)
            assert u @ p == pytest.approx(val, abs=1e-8)
            assert contains(Z, p, tol=1e-6)

    def test_hybrid_support_is_leaf_max(self):
        H = _two_squares()
        assert support(H, [1.0, 0.0]) == pytest.approx(3.0, abs=1e-6)
        assert support(H, [-1.0, 0.0]) == pytest.approx(0.0, abs=1e-6)

    def test_empty_raises(self):
        E = ConstrainedZonotope(np.eye(1), np.zeros(1), np.ones((1, 1)),
                                np.array([5.0]), FactorForm.ZO)
        with pytest.raises(EmptySet):
            support(E, [1.0])


class TestMembership:
    def test_point_membership_by_rejection_sampling(self):
        rng = np.random.default_rng(1)
        H = _two_squares()
        for _ in range(100):
            p = rng.uniform([-0.5, -0.5], [3.5, 1.5])
            expected = ((0 <= p[0] <= 1) or (2 <= p[0] <= 3)) and 0 <= p[1] <= 1
            near_edge = min(abs(p[0] - v) for v in (0, 1, 2, 3)) < 1e-3 or \
                min(abs(p[1] - v) for v in (0, 1)) < 1e-3
            if not near_edge:
                assert contains(H, p) == expected, p

    def test_point_set(self):
        P = point([1.0, -2.0])
        assert contains(P, [1.0, -2.0])
        assert not contains(P, [1.0, -1.99])


class TestEmptiness:
    def test_nonempty(self):
        assert not is_empty(_unit_square())

    def test_empty_cz(self):
        E = ConstrainedZonotope(np.eye(1), np.zeros(1), np.ones((1, 1)),
                                np.array([5.0]), FactorForm.ZO)
        assert is_empty(E)

    def test_hybrid_with_one_empty_leaf(self):
        # binary selects b in {1 (feasible), 3 (infeasible on [0,1])}
        H = HybridZonotope(np.eye(1), np.zeros((1, 1)), np.zeros(1),
                           np.ones((1, 1)), np.array([[2.0]]), np.array([1.0]),
                           FactorForm.ZO)
        assert not is_empty(H)


class TestSharpness:
    def test_zonotope_sharp(self):
        rep = check_sharpness(_unit_square())
        assert rep.verdict is SharpnessVerdict.SHARP
        assert rep.max_gap <= 1e-9

    def test_union_of_squares_sharp(self):
        rep = check_sharpness(_two_squares())
        assert rep.verdict is SharpnessVerdict.SHARP

    def test_not_sharp_detected(self):
        # ReLU graph cut at s <= 0.4: the relaxation keeps a piece of the
        # triangle above the chord, strictly beyond the hull of the V-shape
        from zonosharp import generalized_intersection, relu_graph_1d
        V = relu_graph_1d(-1.0, 1.0)
        band = interval(-1.0, 0.4, FactorForm.ZO)
        H = generalized_intersection(V, band, np.array([[0.0, 1.0]]))
        rep = check_sharpness(H)
        assert rep.verdict is SharpnessVerdict.NOT_SHARP
        assert rep.max_gap > 1e-3

    def test_inconclusive_on_cap(self):
        Gb = np.ones((1, 25))
        H = HybridZonotope(np.zeros((1, 0)), Gb, np.zeros(1),
                           np.zeros((0, 0)), np.zeros((0, 25)), np.zeros(0),
                           FactorForm.ZO)
        rep = check_sharpness(H)
        assert rep.verdict is SharpnessVerdict.INCONCLUSIVE

    def test_report_serializes(self):
        rep = check_sharpness(_unit_square())
        obj = rep.to_obj()
        assert obj["verdict"] == "sharp"
        rep.to_json()

    def test_direction_set_contains_axes(self):
        dirs = direction_set(3, 16)
        assert dirs.shape == (16, 3)
        for i in range(3):
            e = np.eye(3)[i]
            assert any(np.allclose(d, e) for d in dirs)
            assert any(np.allclose(d, -e) for d in dirs)


class TestBoundary2d:
    def test_square_polygon_and_area(self):
        sq = convex_relaxation(_unit_square())
        poly = boundary_2d(sq, n_angles=16)
        assert len(poly) == 4
        assert polygon_area(poly) == pytest.approx(1.0, abs=1e-9)
        assert area_2d(sq, n_angles=64) == pytest.approx(1.0, abs=1e-9)

    def test_counterclockwise(self):
        poly = boundary_2d(convex_relaxation(_unit_square()), n_angles=16)
        x, y = poly[:, 0], poly[:, 1]
        signed = 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
        assert signed > 0

    def test_requires_2d(self):
        with pytest.raises(ValueError):
            boundary_2d(convex_relaxation(interval(0, 1)))

    def test_csv_format(self):
        poly = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 1.0]])
        text = polygon_to_csv(poly)
        rows = [r.split(",") for r in text.strip().splitlines()]
        assert len(rows) == 3 and float(rows[2][1]) == 1.0
