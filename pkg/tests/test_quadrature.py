"""Quadrature layer: areas, integration-by-parts identity, rigidity demo."""

import math

import numpy as np
import pytest

from cartanq.errors import QuadratureEvaluationError
from cartanq.quadrature import (
    CompactMetric,
    QuadratureScheme,
    RadialFunction,
    calabi_identity_check,
    integrate_surface,
    rigidity_demo,
    symbolic_numeric_gap,
)
from fractions import Fraction

FS = CompactMetric()  # psi = 0: Fubini-Study, curvature 4
BUMP = CompactMetric([0, Fraction(1, 10), Fraction(-1, 10)])  # psi = u(1-u)/10
QUAD = CompactMetric([0, 0, Fraction(1, 100)])  # psi = u^2/100
SCHEME = QuadratureScheme()


def ones(z):
    return np.ones(z.shape)


# -- surface integrals ---------------------------------------------------------


def test_fubini_study_area():
    area, err = integrate_surface(ones, FS, SCHEME)
    assert abs(area - math.pi) < 1e-10
    assert abs(area - math.pi) <= max(err, 1e-12)


def test_area_with_fiber_factor():
    area, _ = integrate_surface(ones, FS, SCHEME)
    assert abs(2 * math.pi * area - 2 * math.pi**2) < 1e-9


def test_odd_angular_integrand_vanishes():
    profile = FS.radial_polynomial([1, Fraction(-1, 2)]).evaluator()
    value, _ = integrate_surface(lambda z: z.real * profile(z).real, FS, SCHEME)
    assert abs(value) < 1e-12


def test_non_finite_integrand_reports_node():
    def bad(z):
        out = np.ones(z.shape)
        out[0, 0] = np.nan
        return out

    with pytest.raises(QuadratureEvaluationError) as err:
        integrate_surface(bad, FS, SCHEME)
    assert err.value.node is not None


def test_positivity_on_grid():
    for metric in (FS, BUMP, QUAD):
        assert metric.e2phi_positive_on_grid(SCHEME)


# -- Calabi identity corpus ------------------------------------------------------------


def test_calabi_constant_curvature():
    check = calabi_identity_check("K", FS, SCHEME)
    assert abs(check.lhs) < 1e-10 and abs(check.rhs) < 1e-10


def test_calabi_curvature_of_bump():
    check = calabi_identity_check("K", BUMP, SCHEME)
    assert check.lhs > 0 and check.rhs > 0
    assert check.relative_residual < 1e-6
    assert check.passes(SCHEME.rel_tolerance)
    # regression value for the common integral
    assert abs(check.lhs - 1.020205286564) < 1e-9


def test_calabi_polynomial_function():
    check = calabi_identity_check([0, 1], BUMP, SCHEME)  # f = u
    assert check.relative_residual < 1e-6


def test_calabi_rejects_non_invariant_f():
    with pytest.raises(ValueError):
        calabi_identity_check(RadialFunction(1, 1), BUMP, SCHEME)
    with pytest.raises(ValueError):
        calabi_identity_check("R", BUMP, SCHEME)


def test_calabi_positivity():
    for metric in (FS, BUMP, QUAD):
        assert calabi_identity_check("K", metric, SCHEME).lhs >= -1e-12


# -- rigidity demo ------------------------------------------------------------------------


def test_rigidity_spherical_metric():
    report = rigidity_demo(FS, SCHEME)
    assert report.numeric_spherical and report.symbolic_spherical
    assert abs(report.i2) < SCHEME.abs_tolerance


def test_rigidity_non_spherical_metrics():
    for metric in (BUMP, QUAD):
        report = rigidity_demo(metric, SCHEME)
        assert not report.numeric_spherical and not report.symbolic_spherical
        assert report.consistent
        assert report.relative_gap < 1e-6


def test_rigidity_verdicts_stable_across_tolerances():
    for tol in (1e-8, 1e-10):
        scheme = QuadratureScheme(abs_tolerance=tol)
        for metric, expected in ((FS, True), (BUMP, False), (QUAD, False)):
            report = rigidity_demo(metric, scheme)
            assert report.numeric_spherical is expected
            assert report.consistent


# -- convergence and consistency ------------------------------------------------------------


def test_doubling_within_error_estimate():
    integrands = [ones, FS.gauss_curvature.evaluator()]
    for metric in (FS, BUMP):
        for f in integrands:
            g = lambda z, f=f: np.asarray(f(z)).real
            value, err = integrate_surface(g, metric, SCHEME)
            refined, _ = integrate_surface(g, metric, SCHEME.refined())
            assert abs(refined - value) <= max(err, 1e-13)


def test_scheme_validation():
    with pytest.raises(ValueError):
        QuadratureScheme(radial_panels=0)
    with pytest.raises(ValueError):
        QuadratureScheme(angular_nodes=8)


def test_taylor_chart_matches_closed_form():
    chart = FS.taylor_chart(8)
    # (1+z zb)^-2 expansion: alternating (k+1) coefficients on the diagonal
    for j in range(5):
        assert chart.e2phi.coeff(j, j).re == (-1) ** j * (j + 1)


def test_symbolic_numeric_gap():
    for metric in (FS, BUMP, QUAD):
        assert symbolic_numeric_gap(metric) < 1e-6
