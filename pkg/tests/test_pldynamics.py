import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sixcircles.chain import circle_from_u, run_chain
from sixcircles.errors import DomainExceeded, InvalidParams, MaxIterExceeded
from sixcircles.pldynamics import (
    PLMapParams, beta_cycle, canonical_start, chain_preperiod_bound, classify, composite,
    composite_params, f_eval, fixed_point, intervals, is_reversed, malfatti_phis, orbit,
    periodic_window, phi_from_u, preperiod_bound, step_map, to_fraction, u_from_phi,
)
from sixcircles.triangle import triangle_from_sides

from conftest import random_triangles

WEB = PLMapParams(3.6, 4.2)
WEB_X = PLMapParams.exact("3.6", "4.2")


def test_phi_u_conversions():
    assert phi_from_u(0.0, 7.0) == 0.0
    assert phi_from_u(math.sqrt(7.0), 7.0) == pytest.approx(math.pi / 2)
    assert phi_from_u(0.723874, 6.0) == pytest.approx(0.3, abs=1e-6)
    for phi in (0.0, 0.1, 0.7, 1.5):
        assert phi_from_u(u_from_phi(phi, 3.3), 3.3) == pytest.approx(phi, abs=1e-12)
    with pytest.raises(DomainExceeded):
        phi_from_u(3.0, 6.0)


def test_step_map():
    assert step_map(0.4, 0.4) == 0
    assert step_map(0.3, 1.150262) == pytest.approx(0.850262, abs=1e-12)
    assert step_map(0.890453, 1.150262) == pytest.approx(0.259809, abs=1e-12)


class TestParams:
    def test_equilateral(self, equilateral):
        p = composite_params(equilateral)
        assert p.a == pytest.approx(1.0, abs=1e-12)
        assert p.b == pytest.approx(1.0, abs=1e-12)

    def test_345(self, tri345):
        p = composite_params(tri345)
        assert p.a == pytest.approx(1.2163469, abs=1e-7)
        assert p.b == pytest.approx(1.4645591, abs=1e-7)
        assert p.b < p.a + 1

    def test_near_degenerate(self):
        p = composite_params(triangle_from_sides(1, 1, 2 - 1e-6))
        assert 0 < p.a + 1 - p.b < 1e-2

    def test_invalid(self):
        for a, b in ((0.5, 1.0), (2.0, 1.5), (1.0, 2.0)):
            with pytest.raises(InvalidParams):
                PLMapParams(a, b)

    def test_exact(self):
        p = PLMapParams.exact(3.6, 4.2)
        assert p.a == Fraction(18, 5) and p.b == Fraction(21, 5)
        assert to_fraction(0.1) == Fraction(1, 10)


class TestFEval:
    def test_examples(self):
        assert f_eval(WEB, 0.0) == pytest.approx(1.6, abs=1e-12)
        assert f_eval(WEB, 10.0) == pytest.approx(1.2, abs=1e-12)
        assert f_eval(WEB, 0.8) == pytest.approx(0.8, abs=1e-12)
        assert f_eval(WEB_X, Fraction(0)) == Fraction(8, 5)
        assert f_eval(WEB_X, Fraction(10)) == Fraction(6, 5)

    def test_linear_tail(self):
        for x in (8.8, 9.0, 50.0, 123.4):
            assert f_eval(WEB, x) == pytest.approx(x - 8.8, abs=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(st.fractions(1, 5, max_denominator=1000), st.fractions(0, 1, max_denominator=1000),
           st.fractions(0, 1, max_denominator=10**6))
    def test_involution_on_window(self, a, d, t):
        b = a + d * Fraction(999, 1000)
        for rev in (False, True):
            params = PLMapParams(a, b, rev)
            w = intervals(params)[1]
            x = w.lo + t * w.length
            fx = f_eval(params, x)
            assert f_eval(params, fx) == x
            assert fx == 2 * fixed_point(params) - x
            assert classify(params, fx) == "I2"


class TestIntervals:
    def test_web(self):
        i1, i2, i3 = intervals(WEB_X)
        assert (i1.lo, i1.hi) == (0, Fraction(3, 5))
        assert (i2.lo, i2.hi) == (Fraction(3, 5), 1)
        assert (i3.lo, i3.hi) == (1, Fraction(21, 5))

    def test_equal_params(self):
        i1, i2, i3 = intervals(PLMapParams.exact(2, 2))
        assert (i1.lo, i1.hi, i2.lo, i2.hi, i3.lo, i3.hi) == (0, 0, 0, 1, 1, 2)

    def test_eps_family(self):
        i2 = intervals(PLMapParams.exact(1, "1.99"))[1]
        assert (i2.lo, i2.hi) == (Fraction(99, 100), 1)
        assert i2.length == Fraction(1, 100)

    def test_classify(self):
        assert classify(WEB_X, Fraction(3, 10)) == "I1"
        assert classify(WEB_X, Fraction(3, 5)) == "I2"
        assert classify(WEB_X, Fraction(1)) == "I2"
        assert classify(WEB_X, Fraction(2)) == "I3"
        assert classify(WEB_X, Fraction(5)) == "AboveB"


class TestOrbit:
    def test_eps_family(self):
        rep = orbit(PLMapParams(1, 1.99), 0.01, exact=True)
        assert rep.pre_period == 99
        assert rep.period == 2
        assert set(rep.cycle) == {Fraction(1), Fraction(99, 100)}
        assert rep.trajectory[:3] == [Fraction(1, 100), Fraction(198, 100), Fraction(197, 100)]
        assert rep.trajectory[99] == 1
        assert rep.interval_trace[0] == "I1"
        assert all(lab == "I3" for lab in rep.interval_trace[1:99])

    def test_fixed_point(self):
        rep = orbit(WEB, 0.8)
        assert (rep.pre_period, rep.period) == (0, 1)
        assert rep.cycle[0] == pytest.approx(0.8)

    def test_two_cycle(self):
        rep = orbit(WEB_X, Fraction(7, 10), exact=True)
        assert (rep.pre_period, rep.period) == (0, 2)
        assert rep.cycle == (Fraction(7, 10), Fraction(9, 10))

    def test_web_from_zero(self):
        rep = orbit(WEB_X, 0, exact=True)
        assert rep.trajectory[:4] == [0, Fraction(8, 5), Fraction(6, 5), Fraction(4, 5)]
        assert (rep.pre_period, rep.period) == (3, 1)

    def test_max_iter(self):
        with pytest.raises(MaxIterExceeded):
            orbit(PLMapParams(1, 1.99), 0.01, exact=True, max_iter=50)

    def test_negative_start(self):
        with pytest.raises(DomainExceeded):
            orbit(WEB, -1.0)

    def test_keep(self):
        assert len(orbit(WEB, 0.7, keep=10).trajectory) == 11

    def test_exact_and_float_agree(self):
        rng = random.Random(2)
        for _ in range(400):
            a = Fraction(rng.randint(10**5, 3 * 10**5), 10**5)
            b = a + Fraction(rng.randint(0, 10**6 - 1), 10**6)
            x0 = Fraction(rng.randint(0, 10**7), rng.randint(1, 10**6))
            for rev in (False, True):
                params = PLMapParams(a, b, rev)
                ex = orbit(params, x0, exact=True)
                fl = orbit(PLMapParams(float(a), float(b), rev), float(x0))
                if min(abs(ex.trajectory[-1 - k] - v) for k in range(2) for v in intervals(params)[1].__dict__.values()) < Fraction(1, 10**7):
                    continue  # start of window within float noise
                assert (ex.pre_period, ex.period) == (fl.pre_period, fl.period)


class TestBounds:
    def test_examples(self):
        eps = PLMapParams.exact(1, "1.99")
        n = preperiod_bound(eps, Fraction(1, 100))
        assert 99 <= n <= 102
        assert preperiod_bound(WEB, 0.8) >= 0
        assert preperiod_bound(WEB, 100) >= math.ceil((100 - 4.2) / 8.8)
        assert orbit(WEB_X, 100, exact=True).pre_period <= preperiod_bound(WEB, 100)

    @pytest.mark.parametrize("a,b", [(3.6, 4.2), (1, 1.99), (1.2, 1.5), (1.0, 1.0), (2.5, 3.4)])
    @pytest.mark.parametrize("rev", [False, True])
    def test_absorption_grid(self, a, b, rev):
        params = PLMapParams(float(a), float(b), rev)
        for k in range(10001):
            x0 = k / 100
            rep = orbit(params, x0)
            assert rep.pre_period <= preperiod_bound(params, x0)
            for v in rep.trajectory[rep.pre_period:]:
                assert classify(params, v, 1e-9) == "I2"

    @pytest.mark.parametrize("rev", [False, True])
    def test_absorption_exact(self, rev):
        params = PLMapParams.exact("1.3", "2.05", rev)
        for k in range(0, 10001, 7):
            x0 = Fraction(k, 100)
            assert orbit(params, x0, exact=True).pre_period <= preperiod_bound(params, x0)


class TestGeometry:
    def test_malfatti_345(self, tri345):
        params = composite_params(tri345)
        assert fixed_point(params) == pytest.approx(0.624106, abs=1e-6)
        mid = sorted(tri345.betas)[1]
        k = tri345.betas.index(mid)
        phis = malfatti_phis(tri345)
        assert fixed_point(params) * min(tri345.betas) == pytest.approx(phis[k], abs=1e-12)
        assert phis[k] == pytest.approx(0.4901718, abs=1e-7)

    def test_malfatti_equilateral(self, equilateral):
        assert fixed_point(composite_params(equilateral)) == pytest.approx(0.5)

    def test_composite_matches_steps(self, tri345):
        assert beta_cycle(tri345, 1) == (tri345.betas[2], tri345.betas[0], tri345.betas[1])
        phi = 0.3
        for beta in beta_cycle(tri345, 1):
            phi = step_map(phi, beta)
        assert composite(tri345, 1, 0.3) == phi == pytest.approx(0.890453, abs=1e-6)

    def test_window_is_involution(self):
        rng = random.Random(4)
        for tri in random_triangles(300, seed=14):
            v = rng.randint(1, 3)
            lo, hi = periodic_window(tri, v)
            assert hi > lo
            x = rng.uniform(lo, hi)
            assert composite(tri, v, composite(tri, v, x)) == pytest.approx(x, abs=1e-12)

    def test_scaled_view_matches_canonical_start(self):
        for tri in random_triangles(300, seed=15):
            params = composite_params(tri)
            v = canonical_start(tri)
            m = min(tri.betas)
            lo, hi = periodic_window(tri, v)
            w = intervals(params)[1]
            assert lo / m == pytest.approx(w.lo, abs=1e-9)
            assert hi / m == pytest.approx(w.hi, abs=1e-9)
            for x in (0.05, 0.4, 0.9, 1.3):
                assert composite(tri, v, x * m) / m == pytest.approx(f_eval(params, x), abs=1e-9)

    def test_both_orientations_occur(self):
        flags = {is_reversed(t) for t in random_triangles(200, seed=16)}
        assert flags == {False, True}

    def test_conjugacy_with_chains(self):
        rng = random.Random(5)
        for tri in random_triangles(400, seed=17):
            start = rng.randint(1, 3)
            phi0 = rng.uniform(0, min(tri.betas))
            rec = run_chain(tri, circle_from_u(tri, start, u_from_phi(phi0, tri.p)))
            assert rec.period in (3, 6)
            assert rec.pre_period <= chain_preperiod_bound(tri, start, phi0)
            # advance to the canonical start and iterate the scaled map
            v, phi, off = start, phi0, 0
            while v != canonical_start(tri):
                phi, v, off = abs(phi - tri.out_beta(v)), tri.next_vertex(v), off + 1
            params = composite_params(tri)
            m = min(tri.betas)
            rep = orbit(params, phi / m)
            lo = off + 3 * rep.pre_period
            assert rec.pre_period <= lo
            assert lo - rec.pre_period <= 3
            assert rec.period == 3 * rep.period
            chain_phis = rec.phis()
            for k in range(rep.period):
                assert chain_phis[lo + 3 * k] / m == pytest.approx(rep.trajectory[rep.pre_period + k], abs=1e-7)
