import json
from pathlib import Path

import numpy as np
import pytest
from scipy import special

from src.exceptions import DomainError
from src.models.domain import Ellipse, Harmonic, SupportDomain
from src.services.domain_loader import DomainLoader
from src.services.geometry import (
    boundary_point,
    ellipse_perimeter,
    perimeter,
    radius_of_curvature,
    support_eval,
    validate_convex,
)
from src.utils.numerics import TWO_PI, integrate_periodic

DOMAINS = Path(__file__).parent.parent / "domains"
ELLIPSE = Ellipse(2.0, 1.0)
DISK = SupportDomain(a0=1.0)


def test_support_at_vertices():
    h, dh, _ = support_eval(ELLIPSE, 0.0)
    assert float(h) == 2.0 and float(dh) == 0.0
    h, dh, _ = support_eval(ELLIPSE, np.pi / 2)
    assert float(h) == pytest.approx(1.0)
    assert float(dh) == pytest.approx(0.0, abs=1e-15)


def test_support_of_unit_disk():
    psi = np.linspace(0, TWO_PI, 7)
    h, dh, d2h = support_eval(DISK, psi)
    np.testing.assert_allclose(h, 1.0)
    np.testing.assert_allclose(dh, 0.0)
    np.testing.assert_allclose(d2h, 0.0)


def test_support_derivatives_match_finite_differences():
    domain = SupportDomain(1.0, (Harmonic(2, 0.05, 0.01), Harmonic(5, -0.002, 0.003)))
    psi, step = 0.7, 1e-5
    for shape in (ELLIPSE, domain):
        h_plus, dh_plus, _ = shape.support(psi + step)
        h_minus, dh_minus, _ = shape.support(psi - step)
        _, dh, d2h = shape.support(psi)
        assert dh == pytest.approx((h_plus - h_minus) / (2 * step), rel=1e-8)
        assert d2h == pytest.approx((dh_plus - dh_minus) / (2 * step), rel=1e-7)


def test_boundary_point_disk_and_vertex():
    for psi in (0.0, 0.4, 2.0):
        x, y = boundary_point(DISK, psi)
        assert float(x) == pytest.approx(np.cos(psi))
        assert float(y) == pytest.approx(np.sin(psi))
    x, y = boundary_point(ELLIPSE, 0.0)
    assert (float(x), float(y)) == (2.0, 0.0)


def test_boundary_point_lies_on_ellipse_with_given_normal():
    x, y = boundary_point(ELLIPSE, np.pi / 4)
    assert abs(x ** 2 / 4 + y ** 2 - 1.0) <= 1e-12
    # gradient of x^2/4 + y^2 points along the outward normal
    assert np.arctan2(2 * y, x / 2) == pytest.approx(np.pi / 4, abs=1e-12)


@pytest.mark.parametrize("domain, expected", [
    (DISK, TWO_PI),
    (Ellipse(1.0, 1.0), TWO_PI),
    (ELLIPSE, 8.0 * special.ellipe(0.75)),
    (SupportDomain(1.0, (Harmonic(2, 0.05),)), TWO_PI),
])
def test_perimeter(domain, expected):
    assert perimeter(domain) == pytest.approx(expected, rel=1e-12)


def test_ellipse_perimeter_closed_form():
    assert ellipse_perimeter(ELLIPSE) == pytest.approx(9.6884482, abs=1e-7)
    assert ellipse_perimeter(ELLIPSE) == pytest.approx(perimeter(ELLIPSE), rel=1e-12)


def test_radius_of_curvature_integrates_to_perimeter():
    domain = SupportDomain(1.0, (Harmonic(3, 0.01), Harmonic(4, 0.0, 0.02)))
    total = integrate_periodic(lambda psi: radius_of_curvature(domain, psi))
    assert total == pytest.approx(perimeter(domain), rel=1e-12)
    assert radius_of_curvature(ELLIPSE, 0.0) == pytest.approx(0.5)
    assert radius_of_curvature(ELLIPSE, np.pi / 2) == pytest.approx(4.0)


def test_ellipse_is_convex():
    report = validate_convex(Ellipse(5.0, 0.3))
    assert report.ok
    assert report.min_radius == pytest.approx(0.3 ** 2 / 5.0, rel=1e-9)


def test_large_harmonic_breaks_convexity():
    report = validate_convex(SupportDomain(1.0, (Harmonic(2, 0.5),)))
    assert not report.ok
    assert report.min_radius == pytest.approx(-0.5, abs=1e-9)
    assert report.certified_bound < 0


def test_small_harmonic_keeps_convexity():
    report = validate_convex(SupportDomain(1.0, (Harmonic(3, 0.01),)))
    assert report.ok
    assert report.certified_bound == pytest.approx(0.92)
    assert report.min_radius == pytest.approx(0.92, abs=1e-12)


def test_invalid_domains():
    with pytest.raises(DomainError):
        Ellipse(1.0, 2.0)
    with pytest.raises(DomainError):
        Ellipse(1.0, 0.0)
    with pytest.raises(DomainError):
        Harmonic(1, 0.1)
    with pytest.raises(DomainError):
        SupportDomain(-1.0)
    assert Ellipse.from_axes(1.0, 2.0) == Ellipse(2.0, 1.0)


# Domain files

def test_sample_domain_files_load():
    loader = DomainLoader()
    assert loader.load(DOMAINS / "disk1.json") == Ellipse(1.0, 1.0)
    assert loader.load(DOMAINS / "ellipse_2_1.json") == ELLIPSE
    perturbed = loader.load(DOMAINS / "perturbed_disk.json")
    assert isinstance(perturbed, SupportDomain)
    assert [hm.k for hm in perturbed.harmonics] == [2, 3]


def test_loader_orders_ellipse_axes():
    assert DomainLoader().parse({"type": "Ellipse", "a": 1, "b": 3}) == Ellipse(3.0, 1.0)


@pytest.mark.parametrize("data", [
    {"type": "polygon"},
    {"type": "ellipse", "a": 2.0},
    {"type": "ellipse", "a": 2.0, "b": -1.0},
    {"type": "support_fourier", "a0": 1.0, "harmonics": [{"k": 1, "cos": 0.1}]},
    {"type": "support_fourier", "a0": 1.0, "harmonics": [{"k": 2, "cos": 0.5}]},
    ["not", "an", "object"],
])
def test_loader_rejects_bad_descriptions(data):
    with pytest.raises(DomainError):
        DomainLoader().parse(data)


def test_loader_reports_unreadable_files(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{ not json")
    with pytest.raises(DomainError):
        DomainLoader().load(broken)
    with pytest.raises(DomainError):
        DomainLoader().load(tmp_path / "missing.json")


def test_loader_reads_written_file(tmp_path):
    path = tmp_path / "domain.json"
    path.write_text(json.dumps({"type": "support_fourier", "a0": 2.0,
                                "harmonics": [{"k": 4, "sin": 0.01}]}))
    domain = DomainLoader().load(path)
    assert domain == SupportDomain(2.0, (Harmonic(4, 0.0, 0.01),))


@pytest.fixture
def convexity_calls(monkeypatch):
    calls = []

    def counted(domain, *args, **kwargs):
        calls.append(domain)
        return validate_convex(domain, *args, **kwargs)

    monkeypatch.setattr("src.services.domain_loader.validate_convex", counted)
    return calls


@pytest.mark.parametrize("data", [
    {"type": "ellipse", "a": 5.0, "b": 0.3},
    {"type": "support_fourier", "a0": 1.0, "harmonics": [{"k": 3, "cos": 0.01}]},
])
def test_certified_domains_skip_the_curvature_scan(data, convexity_calls):
    DomainLoader().parse(data)
    assert convexity_calls == []


def test_uncertified_domains_are_scanned(convexity_calls):
    # a0 - sum (k^2-1)(|c|+|s|) = -0.09, yet the radius of curvature stays above 0.08
    convex = {"type": "support_fourier", "a0": 1.0,
              "harmonics": [{"k": 2, "cos": 0.15}, {"k": 3, "sin": 0.08}]}
    domain = DomainLoader().parse(convex)
    assert len(convexity_calls) == 1
    assert validate_convex(domain).min_radius > 0.08

    with pytest.raises(DomainError):
        DomainLoader().parse({"type": "support_fourier", "a0": 1.0,
                              "harmonics": [{"k": 2, "cos": 0.5}]})
    assert len(convexity_calls) == 2
