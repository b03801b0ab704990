from fractions import Fraction

import numpy as np
import pytest
from scipy import special

from src.exceptions import DomainError, InfeasibleError
from src.models.domain import Ellipse, Harmonic, SupportDomain
from src.models.family import FamilySpec
from src.services.elliptic import beta_caustic
from src.services.geometry import perimeter
from src.services.rigidity import (
    CAUSTIC,
    VARIATIONAL,
    RigiditySolver,
    disk_beta,
    kernel_marginals,
    kernel_sign,
)
from src.utils.numerics import TWO_PI

ELLIPSE = Ellipse(2.0, 1.0)
ELLIPSE_PERIMETER = 8.0 * special.ellipe(0.75)


@pytest.fixture(scope="module")
def solver():
    return RigiditySolver()


def random_population(count, seed):
    """Ellipses with a in [0.5, 3], e in [0, 0.95] and two distinct rotation numbers.

    Rotation numbers come from [0.05, 0.4] and the half turn 1/2; the first case
    always includes 1/2.
    """
    rng = np.random.default_rng(seed)
    candidates = np.append(np.linspace(0.05, 0.4, 36), 0.5)
    cases = []
    for i in range(count):
        ellipse = Ellipse.from_eccentricity(rng.uniform(0.5, 3.0), rng.uniform(0.0, 0.95))
        rho0, rho1 = rng.choice(candidates, size=2, replace=False)
        if i == 0 and 0.5 not in (rho0, rho1):
            rho0 = 0.5
        cases.append((ellipse, float(rho0), float(rho1)))
    return cases


# Families

@pytest.mark.parametrize("e", [0.0, 0.3, 0.9])
def test_isobeta_member_at_half_turn(solver, e):
    member = solver.isobeta_member(0.5, -4.0, e)
    assert member.a == pytest.approx(2.0, rel=1e-15)
    assert member.b == pytest.approx(2.0 * np.sqrt(1 - e * e), rel=1e-15)


@pytest.mark.parametrize("rho0", [0.1, 0.25, 0.4])
def test_isobeta_member_at_zero_eccentricity_is_a_disk(solver, rho0):
    member = solver.isobeta_member(rho0, -3.0, 0.0)
    assert member.is_disk
    assert member.a == pytest.approx(3.0 / (2 * np.sin(np.pi * rho0)), rel=1e-11)


@pytest.mark.parametrize("rho0, c, e", [(0.25, -2.0, 0.5), (1 / 3, -0.7, 0.8), (0.1, -5.0, 0.2)])
def test_isobeta_member_round_trip(solver, rho0, c, e):
    member = solver.isobeta_member(rho0, c, e)
    assert member.eccentricity == pytest.approx(e, rel=1e-12)
    assert solver.beta(member, rho0) == pytest.approx(c, rel=1e-10)


def test_isobeta_member_is_homogeneous(solver):
    member = solver.isobeta_member(0.3, -2.0, 0.6)
    scaled = solver.isobeta_member(0.3, -2.0 * 3.5, 0.6)
    assert scaled.a == pytest.approx(3.5 * member.a, rel=1e-14)
    assert scaled.b == pytest.approx(3.5 * member.b, rel=1e-14)


def test_perimeter_member(solver):
    disk = solver.perimeter_member(TWO_PI, 0.0)
    assert disk.a == pytest.approx(1.0, rel=1e-15) and disk.is_disk
    member = solver.perimeter_member(ELLIPSE_PERIMETER, np.sqrt(3.0) / 2)
    assert (member.a, member.b) == (pytest.approx(2.0, rel=1e-12), pytest.approx(1.0, rel=1e-12))
    for e in (0.2, 0.7, 0.99):
        assert perimeter(solver.perimeter_member(5.0, e)) == pytest.approx(5.0, rel=1e-10)


def test_family_members_reject_bad_arguments(solver):
    with pytest.raises(DomainError):
        solver.isobeta_member(0.25, 1.0, 0.5)
    with pytest.raises(DomainError):
        solver.isobeta_member(0.6, -1.0, 0.5)
    with pytest.raises(DomainError):
        solver.perimeter_member(-1.0, 0.5)
    with pytest.raises(DomainError):
        solver.perimeter_member(1.0, 1.0)


# Scans

@pytest.mark.parametrize("probe, e_top", [(0.25, 0.99), (1 / 3, 0.99), (0.41, 0.95)])
def test_constant_perimeter_scan_is_strictly_decreasing(solver, probe, e_top):
    grid = list(np.arange(20) * 0.05) + ([e_top] if e_top > 0.95 else [])
    result = solver.scan_family(FamilySpec.const_perimeter(TWO_PI, grid), probe)
    assert result.verdict.strict and result.verdict.direction == "decreasing"
    assert all(row.margin < 0 for row in result.rows[1:])
    assert np.isnan(result.rows[0].margin)
    assert abs(result.rows[0].beta_at_probe - disk_beta(probe)) <= 1e-9


def test_isobeta_scan_is_strictly_monotone(solver):
    spec = FamilySpec.iso_beta(0.5, -4.0, np.linspace(0.0, 0.9, 10))
    result = solver.scan_family(spec, 0.25)
    assert result.verdict.strict
    assert result.verdict.direction == "increasing"
    for row in result.rows:
        assert row.a == pytest.approx(2.0)


def test_isobeta_scan_rejects_its_own_rotation_number(solver):
    with pytest.raises(DomainError):
        solver.scan_family(FamilySpec.iso_beta(0.25, -2.0, [0.0, 0.5]), 0.25)


def test_scan_frame_has_the_csv_columns(solver):
    result = solver.scan_family(FamilySpec.const_perimeter(TWO_PI, [0.0, 0.5]), 0.25)
    frame = result.to_frame()
    assert list(frame.columns) == ["e", "a", "b", "beta", "margin"]
    assert len(frame) == 2


def test_family_spec_validation():
    with pytest.raises(DomainError):
        FamilySpec.const_perimeter(TWO_PI, [0.5, 0.2])
    with pytest.raises(DomainError):
        FamilySpec.const_perimeter(TWO_PI, [0.0, 0.999])
    with pytest.raises(DomainError):
        FamilySpec.iso_beta(0.25, 2.0, [0.0])
    with pytest.raises(DomainError):
        FamilySpec("circle", (0.0,))


# Two-value recovery

def test_recover_ellipse_from_two_values(solver):
    c0, c1 = beta_caustic(ELLIPSE, 0.25), beta_caustic(ELLIPSE, 1 / 3)
    result = solver.recover_two_values(0.25, c0, 1 / 3, c1)
    assert result.ellipse.a == pytest.approx(2.0, rel=1e-7)
    assert result.ellipse.b == pytest.approx(1.0, rel=1e-7)
    assert max(abs(r) for r in result.residuals) <= 1e-9


def test_recover_disk_from_two_values(solver):
    result = solver.recover_two_values(0.2, disk_beta(0.2, 1.7), 0.35, disk_beta(0.35, 1.7))
    assert result.e == 0.0
    assert result.ellipse.a == pytest.approx(1.7, rel=1e-10)


def test_recover_with_the_half_turn(solver):
    c1 = beta_caustic(Ellipse(1.5, 0.9), 0.3)
    result = solver.recover_two_values(0.5, -3.0, 0.3, c1)
    assert result.ellipse.a == pytest.approx(1.5, rel=1e-12)
    assert result.ellipse.b == pytest.approx(0.9, rel=1e-7)


@pytest.mark.parametrize("ellipse, rho0, rho1", random_population(20, seed=17))
def test_two_value_round_trip(solver, ellipse, rho0, rho1):
    result = solver.recover_two_values(rho0, beta_caustic(ellipse, rho0),
                                       rho1, beta_caustic(ellipse, rho1))
    assert result.ellipse.a == pytest.approx(ellipse.a, rel=1e-7)
    assert result.ellipse.b == pytest.approx(ellipse.b, rel=1e-7)


def test_two_value_recovery_rejects_bad_data(solver):
    with pytest.raises(DomainError):
        solver.recover_two_values(0.25, -2.0, 0.25, -2.0)
    with pytest.raises(DomainError):
        solver.recover_two_values(0.25, -2.0, 0.3, 1.0)
    # beta(1/3) of a disk is the largest possible given beta(1/4)
    c0 = disk_beta(0.25)
    with pytest.raises(InfeasibleError):
        solver.recover_two_values(0.25, c0, 1 / 3, disk_beta(1 / 3) * 0.5)


# Value plus perimeter recovery

def test_recover_disk_from_value_and_perimeter(solver):
    result = solver.recover_value_perimeter(0.3, -(5.0 / np.pi) * np.sin(0.3 * np.pi), 5.0)
    assert result.e == 0.0
    assert result.ellipse.a == pytest.approx(5.0 / TWO_PI, rel=1e-12)


def test_recover_from_value_and_perimeter(solver):
    result = solver.recover_value_perimeter(1 / 3, beta_caustic(ELLIPSE, 1 / 3), ELLIPSE_PERIMETER)
    assert result.ellipse.a == pytest.approx(2.0, rel=1e-7)
    assert result.ellipse.b == pytest.approx(1.0, rel=1e-7)


@pytest.mark.parametrize("ellipse, rho, unused", random_population(20, seed=23))
def test_value_perimeter_round_trip(solver, ellipse, rho, unused):
    result = solver.recover_value_perimeter(rho, beta_caustic(ellipse, rho), perimeter(ellipse))
    assert result.ellipse.a == pytest.approx(ellipse.a, rel=1e-7)
    assert result.ellipse.b == pytest.approx(ellipse.b, rel=1e-7)


def test_value_above_the_disk_bound_is_infeasible(solver):
    with pytest.raises(InfeasibleError):
        solver.recover_value_perimeter(0.25, 0.9 * disk_beta(0.25), TWO_PI)


# Disk comparison

@pytest.mark.parametrize("rho", [0.1, 0.25, 1 / 3, 0.45])
def test_disk_has_zero_slack(solver, rho):
    assert abs(solver.bbs_slack(Ellipse(1.3, 1.3), rho).slack) <= 1e-9


def test_ellipse_has_positive_slack(solver):
    report = solver.bbs_slack(ELLIPSE, 0.25)
    assert report.slack > 0
    assert report.perimeter == pytest.approx(ELLIPSE_PERIMETER, rel=1e-12)
    assert report.beta == pytest.approx(-np.sqrt(5.0), rel=1e-10)


@pytest.mark.parametrize("e", [0.3, 0.5, 0.9])
@pytest.mark.parametrize("rho", [Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)])
def test_ellipse_slack_is_strictly_positive(solver, e, rho):
    assert solver.bbs_slack(Ellipse.from_eccentricity(1.0, e), rho).slack >= 1e-6


def random_support_domain(rng):
    order = rng.integers(2, 7, size=rng.integers(1, 4))
    coeffs = rng.uniform(-1.0, 1.0, size=(order.size, 2))
    weight = sum((k * k - 1) * (abs(c) + abs(s)) for k, (c, s) in zip(order, coeffs))
    scale = rng.uniform(0.05, 0.5) / weight
    return SupportDomain(1.0, tuple(Harmonic(int(k), c * scale, s * scale)
                                    for k, (c, s) in zip(order, coeffs)))


@pytest.mark.parametrize("seed", range(50))
def test_convex_domains_never_beat_the_disk(solver, seed):
    domain = random_support_domain(np.random.default_rng(seed))
    assert domain.certified_curvature_bound() > 0
    for rho in (Fraction(1, 3), Fraction(2, 5), Fraction(1, 4)):
        assert solver.bbs_slack(domain, rho, VARIATIONAL).slack >= -1e-9


def test_small_harmonic_slack(solver):
    domain = SupportDomain(1.0, (Harmonic(3, 0.01),))
    assert solver.bbs_slack(domain, Fraction(1, 3), VARIATIONAL).slack >= -1e-9


def test_slack_methods_agree_on_ellipses(solver):
    caustic = solver.bbs_slack(ELLIPSE, Fraction(1, 3), CAUSTIC)
    variational = solver.bbs_slack(ELLIPSE, Fraction(1, 3), VARIATIONAL)
    assert variational.slack == pytest.approx(caustic.slack, abs=1e-6)


def test_slack_method_preconditions(solver):
    with pytest.raises(DomainError):
        solver.bbs_slack(SupportDomain(1.0), 0.25, CAUSTIC)
    with pytest.raises(DomainError):
        solver.bbs_slack(ELLIPSE, np.sqrt(2) / 4, VARIATIONAL)
    with pytest.raises(DomainError):
        solver.bbs_slack(ELLIPSE, 0.25, "spectral")


# Kernel and constant-perimeter slope

def test_kernel_sign_on_the_diagonal():
    assert abs(kernel_sign(0.5, 0.2, 0.2)) <= 1e-12


def test_kernel_sign_grid():
    for e in (0.0, 0.3, 0.6, 0.9, 0.95):
        for k0sq in (0.0, 0.1, 0.5, 2.0, 10.0):
            for step in (0.05, 1.0, 20.0):
                k1sq = k0sq + step
                value = kernel_sign(e, k0sq, k1sq)
                assert value < 0
                assert kernel_sign(e, k1sq, k0sq) == pytest.approx(-value, rel=1e-12)


@pytest.mark.parametrize("e, k0sq, k1sq", [
    (0.0, 0.0, 1.0),
    (0.3, 0.1, 0.6),
    (0.6, 0.5, 2.0),
    (0.9, 2.0, 0.2),
])
def test_kernel_sign_matches_the_double_integral(e, k0sq, k1sq):
    nodes, weights = np.polynomial.legendre.leggauss(80)
    t = (nodes + 1.0) * np.pi / 4
    w = weights * np.pi / 4

    def f(k2, s):
        return 1.0 / np.sqrt((1.0 - e * e * np.sin(s) ** 2) * (1.0 + k2 * np.sin(s) ** 2))

    x, y = np.meshgrid(t, t, indexing="ij")
    ratio = lambda s: f(k1sq, s) / f(k0sq, s)  # noqa: E731
    integrand = (np.sin(y) ** 2 - np.sin(x) ** 2) * (ratio(y) - ratio(x)) * f(k0sq, x) * f(k0sq, y)
    expected = w @ integrand @ w
    assert kernel_sign(e, k0sq, k1sq) == pytest.approx(expected, rel=1e-9)


def test_kernel_marginals_of_the_circle():
    u, v = kernel_marginals(0.0, 0.0)
    assert u == pytest.approx(np.pi, rel=1e-14)
    assert v == pytest.approx(np.pi, rel=1e-14)


@pytest.mark.parametrize("rho", [0.25, 0.3, 0.5])
@pytest.mark.parametrize("e", [0.3, 0.7])
def test_perimeter_family_slope_matches_finite_differences(solver, rho, e):
    step = 1e-4
    plus = solver.beta(solver.perimeter_member(TWO_PI, e + step), rho)
    minus = solver.beta(solver.perimeter_member(TWO_PI, e - step), rho)
    slope = solver.perimeter_family_slope(TWO_PI, e, rho)
    assert slope < 0
    assert slope == pytest.approx((plus - minus) / (2 * step), rel=1e-5)


def test_perimeter_family_slope_vanishes_at_the_disk(solver):
    assert solver.perimeter_family_slope(TWO_PI, 0.0, 0.25) == 0.0
