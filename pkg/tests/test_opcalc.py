import cmath
import json
import math

import numpy as np
import pytest

from fracspace.grid import (
    FULL_LINE,
    Grid,
    GridFunction,
    HALF_LINE,
    PowerWeight,
    dual_pairing,
    weighted_lp_norm,
)
from fracspace import fourier, halfline
from fracspace.opcalc import (
    DIRICHLET,
    MINUS,
    HalfLineOperator,
    fractional_power,
    integration_by_parts_check,
    resolvent,
    riemann_liouville,
    domain_norm_ratio,
    sectoriality_probe,
    _op_norm_singular_value,
)
from fracspace.harness import generate_test_family

from helpers import plateau

W0 = PowerWeight(0.0)
OP_D = HalfLineOperator(DIRICHLET, 2.0, 0.0)
OP_M = HalfLineOperator(MINUS, 2.0, 0.0)


def _relative(a: GridFunction, b: GridFunction) -> float:
    return (weighted_lp_norm(a - b, 2.0, W0) / weighted_lp_norm(b, 2.0, W0))


class TestResolvent:
    def test_step_response(self):
        g = Grid(40.0, 4096, HALF_LINE)
        t = g.points
        f = GridFunction(g, plateau(t, 0.0, 20.0, 35.0))
        u = resolvent(OP_D, 1.0, f)
        mask = t <= 18.0
        assert np.max(np.abs(u.values[mask, 0] - (1 - np.exp(-t[mask])))) < 1e-8

    def test_exponential_forcing(self):
        # piecewise-linear exactness: the interpolation error sits at O(h^2),
        # so the 1e-8 comparison runs on a fine grid
        g = Grid(40.0, 2 ** 17, HALF_LINE)
        t = g.points
        u = resolvent(OP_D, 1.0, GridFunction(g, np.exp(-t)))
        assert np.max(np.abs(u.values[:, 0] - t * np.exp(-t))) < 1e-8

    def test_minus_variant_exponential(self):
        g = Grid(40.0, 2 ** 17, HALF_LINE)
        t = g.points
        u = resolvent(OP_M, 1.0, GridFunction(g, np.exp(-t)))
        keep = t <= 35.0
        assert np.max(np.abs(u.values[keep, 0] - np.exp(-t[keep]) / 2)) < 1e-8

    def test_dirichlet_boundary_exact(self):
        g = Grid(40.0, 2048, HALF_LINE)
        f = generate_test_family(g, 50, 1)[0]
        u = resolvent(OP_D, complex(2.0, 1.0), f)
        assert u.values[0, 0] == 0.0

    def test_rejects_left_half_plane(self):
        g = Grid(40.0, 1024, HALF_LINE)
        f = GridFunction(g, np.exp(-g.points))
        with pytest.raises(ValueError):
            resolvent(OP_D, complex(-1.0, 0.5), f)

    def test_ode_residual(self):
        g = Grid(40.0, 2 ** 16, HALF_LINE)
        fam = generate_test_family(g, 51, 5, support=(0.2, 0.6))
        rng = np.random.default_rng(52)
        for f in fam:
            lam = complex(rng.uniform(1, 4), rng.uniform(-2, 2))
            u = resolvent(OP_D, lam, f)
            du = fourier.spectral_derivative(halfline.zero_extend(u))
            res = halfline.restrict_plus(du) + lam * u - f
            assert weighted_lp_norm(res, 2.0, W0) <= 1e-6 * weighted_lp_norm(f, 2.0, W0)

    def test_resolvent_identity_discretization_consistent(self):
        # the piecewise-linear re-sampling between compositions carries an
        # O(h^2) consistency error, so the identity is checked at that scale
        # together with its refinement rate
        lam, mu = complex(1.0, 0.5), complex(2.5, -0.3)
        worst = {}
        for n in (4096, 16384):
            g = Grid(40.0, n, HALF_LINE)
            fam = generate_test_family(g, 53, 5)
            w = 0.0
            for f in fam:
                lhs = resolvent(OP_D, lam, f) - resolvent(OP_D, mu, f)
                rhs = (mu - lam) * resolvent(OP_D, lam, resolvent(OP_D, mu, f))
                w = max(w, weighted_lp_norm(lhs - rhs, 2.0, W0)
                        / weighted_lp_norm(f, 2.0, W0))
            worst[n] = w
        assert worst[4096] < 5e-5
        assert worst[16384] < worst[4096] / 8.0  # second-order refinement

    def test_left_inverse_kernel_triviality(self):
        # (lam + A) has trivial kernel on the discretization: the resolvent
        # inverts it back to the input at the piecewise-linear consistency level
        worst = {}
        for n in (4096, 16384):
            g = Grid(40.0, n, HALF_LINE)
            fam = generate_test_family(g, 54, 5)
            lam = complex(1.5, 0.4)
            w = 0.0
            for u in fam:
                au = OP_D.apply(u)
                f = GridFunction(g, lam * u.values + au.values)
                back = resolvent(OP_D, lam, f)
                w = max(w, weighted_lp_norm(back - u, 2.0, W0)
                        / weighted_lp_norm(u, 2.0, W0))
            worst[n] = w
        assert worst[4096] < 2e-4
        assert worst[16384] < worst[4096] / 8.0

    def test_adjoint_relation(self):
        # <T(lam) f, g> = <f, S(conj lam) g> for the Dirichlet/minus pair
        g = Grid(40.0, 4096, HALF_LINE)
        fam_f = generate_test_family(g, 55, 6)
        fam_g = generate_test_family(g, 56, 6)
        lam = complex(1.3, 0.7)
        for f, v in zip(fam_f, fam_g):
            lhs = dual_pairing(resolvent(OP_D, lam, f), v)
            rhs = dual_pairing(f, resolvent(OP_M, np.conj(lam), v))
            scale = weighted_lp_norm(f, 2.0, W0) * weighted_lp_norm(v, 2.0, W0)
            assert abs(lhs - rhs) <= 1e-8 * scale


class TestSectorialityProbe:
    def test_real_axis_contraction(self):
        g = Grid(40.0, 2048, HALF_LINE)
        for r in (1e-3, 1e-1, 1.0, 1e1, 1e3):
            est = _op_norm_singular_value(OP_D, complex(r), g)
            assert est <= 1.0 + 1e-6

    def test_dilation_covariance_unweighted(self):
        g = Grid(40.0, 2048, HALF_LINE)
        for phi in (0.0, 0.6):
            a = _op_norm_singular_value(OP_D, 2.0 * cmath.exp(1j * phi), g)
            b = _op_norm_singular_value(OP_D, 4.0 * cmath.exp(1j * phi), g)
            assert abs(a - b) <= 0.05 * a

    def test_probe_structure_and_methods(self):
        g = Grid(40.0, 1024, HALF_LINE)
        probes = sectoriality_probe(OP_D, g, [3 * math.pi / 4], [0.5, 2.0])
        probe = probes[0]
        assert probe.supremum < math.inf
        assert all(e["method"] == "singular-value" for e in probe.entries)
        rec = json.loads(probe.to_json())
        assert set(rec) == {"variant", "p", "gamma", "angle", "entries"}
        # probing below the true type angle reaches outside the resolvent set
        wide = sectoriality_probe(OP_D, g, [math.pi / 4], [1.0])[0]
        assert wide.supremum == math.inf
        assert any(e["method"] == "outside-resolvent-set" for e in wide.entries)

    def test_random_probe_label_for_general_p(self):
        g = Grid(40.0, 1024, HALF_LINE)
        op = HalfLineOperator(DIRICHLET, 3.0, 0.0)
        probe = sectoriality_probe(op, g, [3 * math.pi / 4], [1.0])[0]
        assert all(e["method"] == "random-probe" for e in probe.entries)
        assert 0.0 < probe.supremum < math.inf

    def test_weighted_probe_finite(self):
        g = Grid(40.0, 1024, HALF_LINE)
        op = HalfLineOperator(DIRICHLET, 2.0, 0.5)
        probe = sectoriality_probe(op, g, [3 * math.pi / 4 - 0.1], [0.25, 1.0, 4.0])[0]
        assert 0.0 < probe.supremum < math.inf


class TestFractionalPower:
    def test_matches_causal_derivative(self):
        g = Grid(40.0, 4096, HALF_LINE)
        fam = generate_test_family(g, 57, 5, support=(0.1, 0.5))
        for theta in (0.25, 0.5, 0.75):
            for f in fam:
                a = fractional_power(OP_D, theta, f)
                b = riemann_liouville(f, theta)
                assert _relative(a, b) < 1e-3

    def test_theta_to_one_limit(self):
        # the gap has the analytic floor (pi/2)(1-theta) set by the symbol's
        # logarithm, so the limit is checked through its rate constant
        g = Grid(40.0, 4096, HALF_LINE)
        t = g.points
        f = GridFunction(g, np.exp(-((t - 16.0) / 4.0) ** 2) * np.exp(1j * t)
                         * plateau(t, 16.0, 9.0, 14.0))
        af = OP_D.apply(f)
        gaps = []
        for theta in (0.99, 0.999):
            a = fractional_power(OP_D, theta, f)
            gaps.append(_relative(a, af))
        assert gaps[1] < 2e-3
        assert gaps[1] == pytest.approx(gaps[0] / 10.0, rel=0.05)
        assert gaps[1] / 0.001 == pytest.approx(math.pi / 2.0, rel=0.1)

    def test_halving_composition(self):
        g = Grid(40.0, 4096, HALF_LINE)
        t = g.points
        f = GridFunction(g, np.exp(-((t - 14.0) / 3.0) ** 2) * np.sin(t - 14.0)
                         * plateau(t, 14.0, 8.0, 12.0))
        h1 = fractional_power(OP_D, 0.5, f)
        h2 = fractional_power(OP_D, 0.5, h1)
        assert _relative(h2, OP_D.apply(f)) < 5e-3

    def test_domain_violation_rejected(self):
        g = Grid(40.0, 2048, HALF_LINE)
        f = GridFunction(g, np.exp(-g.points))  # f(0) = 1
        with pytest.raises(ValueError):
            fractional_power(OP_D, 0.5, f)
        with pytest.raises(ValueError):
            fractional_power(OP_D, 1.5, generate_test_family(g, 58, 1)[0])

    def test_minus_variant_finite_and_consistent(self):
        g = Grid(40.0, 4096, HALF_LINE)
        f = generate_test_family(g, 59, 1, support=(0.2, 0.6))[0]
        a = fractional_power(OP_M, 0.5, f)
        b = fractional_power(OP_M, 0.5, a)
        assert _relative(b, OP_M.apply(f)) < 5e-3


class TestRiemannLiouville:
    @pytest.mark.parametrize("theta", [0.3, 0.6])
    def test_power_function(self, theta):
        g = Grid(40.0, 4096, HALF_LINE)
        t = g.points
        f = GridFunction(g, t * plateau(t, 0.0, 2.0, 6.0))
        out = riemann_liouville(f, theta)
        mask = (t >= g.h) & (t <= 0.5)
        ref = t[mask] ** (1 - theta) / math.gamma(2 - theta)
        assert np.max(np.abs(out.values[mask, 0] - ref) / ref) < 1e-4

    def test_theta_to_zero_limit(self):
        # rate-constant check against the analytic floor (pi/2) theta
        g = Grid(40.0, 4096, HALF_LINE)
        t = g.points
        f = GridFunction(g, np.exp(-((t - 16.0) / 4.0) ** 2) * np.exp(1j * t)
                         * plateau(t, 16.0, 9.0, 14.0))
        gaps = [_relative(riemann_liouville(f, th), f) for th in (0.1, 0.01)]
        assert gaps[1] < 2e-2
        assert gaps[1] == pytest.approx(gaps[0] / 10.0, rel=0.1)

    def test_linearity(self):
        g = Grid(40.0, 2048, HALF_LINE)
        fam = generate_test_family(g, 60, 2)
        a, b = 1.7, -0.4 + 0.2j
        lhs = riemann_liouville(GridFunction(
            g, a * fam[0].values + b * fam[1].values), 0.5)
        rhs = a * riemann_liouville(fam[0], 0.5) + b * riemann_liouville(fam[1], 0.5)
        scale = np.max(np.abs(lhs.values))
        assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12 * scale

    def test_rejects_bad_order(self):
        g = Grid(40.0, 1024, HALF_LINE)
        f = GridFunction(g, np.zeros(1024))
        with pytest.raises(ValueError):
            riemann_liouville(f, 1.2)


class TestDomainNormRatio:
    def test_band_is_tight_for_dirichlet(self):
        g = Grid(40.0, 2048, HALF_LINE)
        fam = generate_test_family(g, 61, 20, support=(0.1, 0.6))
        ratios = [domain_norm_ratio(OP_D, 0.5, f) for f in fam]
        assert max(ratios) / min(ratios) < 3.0

    def test_theta_one_uses_first_order_data(self):
        g = Grid(40.0, 2048, HALF_LINE)
        f = generate_test_family(g, 62, 1, support=(0.1, 0.6))[0]
        r = domain_norm_ratio(OP_D, 1.0, f)
        numer = (weighted_lp_norm(f, 2.0, W0)
                 + weighted_lp_norm(OP_D.apply(f), 2.0, W0))
        denom = fourier.hsp_norm(halfline.zero_extend(f), 1.0, 2.0, W0)
        assert r == pytest.approx(numer / denom, rel=1e-12)

    def test_minus_variant_uses_reflection_bound(self):
        g = Grid(40.0, 2048, HALF_LINE)
        f = generate_test_family(g, 63, 1, support=(0.1, 0.6))[0]
        r = domain_norm_ratio(OP_M, 0.5, f)
        assert 0.0 < r < math.inf


class TestIntegrationByParts:
    def test_exponential_closed_form(self):
        g = Grid(40.0, 4096, HALF_LINE)
        u = GridFunction(g, np.exp(-g.points))
        assert integration_by_parts_check(u, u) < 1e-8

    def test_zero_boundary_reduces_to_antisymmetry(self):
        g = Grid(40.0, 4096, HALF_LINE)
        t = g.points
        u0 = GridFunction(g, t * np.exp(-t))
        u = GridFunction(g, np.exp(-t))
        assert integration_by_parts_check(u0, u) < 1e-8

    def test_random_windowed_pairs(self):
        g = Grid(40.0, 4096, HALF_LINE)
        fam_u = generate_test_family(g, 64, 20)
        fam_v = generate_test_family(g, 65, 20)
        for u, v in zip(fam_u, fam_v):
            scale = (fourier.wkp_norm(u, 1, 2.0, W0)
                     * fourier.wkp_norm(v, 1, 2.0, W0))
            assert integration_by_parts_check(u, v) <= 1e-7 * scale


class TestOperatorValidation:
    def test_variant_checked(self):
        with pytest.raises(ValueError):
            HalfLineOperator("sideways", 2.0, 0.0)

    def test_weight_admissibility_checked(self):
        with pytest.raises(Exception):
            HalfLineOperator(DIRICHLET, 2.0, 1.5)
