import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voicelab.exceptions import DomainError
from voicelab.groups import (AFFINE, AFFINE_CIRCLE, LINE, ONE, Weight, compose, haar_density, inverse, modular,
                             poly_weight, sample_elements, validate_weight, weight_from_name)


def test_affine_law():
    assert compose(AFFINE, (0.0, 1.0), (2.5, 3.0)) == (2.5, 3.0)
    assert compose(AFFINE, (1.0, 2.0), (3.0, 4.0)) == (7.0, 8.0)


def test_circle_angles_add_mod_two_pi():
    b, a, phi = compose(AFFINE_CIRCLE, (0.0, 1.0, np.pi), (0.0, 1.0, 1.5 * np.pi))
    assert (b, a) == (0.0, 1.0)
    assert phi == pytest.approx(0.5 * np.pi)


def test_inverses():
    assert inverse(AFFINE, (0.0, 1.0)) == (0.0, 1.0)
    assert inverse(AFFINE, (4.0, 2.0)) == (-2.0, 0.5)
    assert np.all(np.asarray(inverse(LINE, 3.0)) == -3.0)


@pytest.mark.parametrize("spec", [LINE, AFFINE, AFFINE_CIRCLE])
def test_group_axioms_on_random_triples(spec):
    s = sample_elements(spec, 10000, rng=5)
    t = sample_elements(spec, 10000, rng=6)
    g, h, k = s.x, s.y, t.x
    lhs = compose(spec, compose(spec, g, h), k)
    rhs = compose(spec, g, compose(spec, h, k))
    lhs, rhs = np.atleast_2d(lhs), np.atleast_2d(rhs)
    for i, (x, y) in enumerate(zip(lhs, rhs)):
        if i == 2:  # angles: compare on the circle
            assert np.abs(np.angle(np.exp(1j * (x - y)))).max() < 1e-12
        else:
            assert np.max(np.abs(x - y) / (1 + np.abs(y))) < 1e-12
    e = np.atleast_2d(compose(spec, g, inverse(spec, g)))
    assert np.abs(e[0]).max() < 1e-12
    if spec is not LINE:
        assert np.abs(e[1] - 1).max() < 1e-12


def test_modular_function():
    assert modular(LINE, 5.0) == 1.0
    assert modular(AFFINE, (3.0, 4.0)) == 0.25
    assert modular(AFFINE_CIRCLE, (0.0, 2.0, 0.0)) == 0.5
    assert modular(AFFINE, (0.0, 1.0)) == 1.0


def test_haar_density_left_invariance_of_box_integral():
    # int f(x^-1 y) dy = int f(y) dy for a smooth bump, Riemann sums in (b, log a)
    t = np.linspace(-6, 6, 801)
    bb = np.linspace(-30, 30, 1201)
    B, T = np.meshgrid(bb, t, indexing="ij")
    A = np.exp(T)

    def f(b, a):
        return np.exp(-b ** 2 - np.log(a) ** 2)

    dens = haar_density(AFFINE, (B, A)) * A  # da = a dt
    base = np.sum(f(B, A) * dens)
    x = (1.5, 2.0)
    y = compose(AFFINE, inverse(AFFINE, x), (B, A))
    moved = np.sum(f(*y) * dens)
    assert abs(moved - base) / base < 1e-8
    # right translation picks up Delta(x^-1) = a_x
    y = compose(AFFINE, (B, A), x)
    right = np.sum(f(*y) * dens)
    assert abs(right - modular(AFFINE, inverse(AFFINE, x)) * base) / base < 1e-8


def test_weight_certificates():
    s = sample_elements(LINE, 2000, rng=0)
    w = validate_weight(LINE, ONE, s)
    assert all(c.holds for c in w.certificates.values())
    w = validate_weight(LINE, poly_weight(1.0), s)
    assert w.certificates["submultiplicative"].holds
    assert w.certificates["symmetric"].holds
    assert w.certificates["bounded_below_by_one"].holds


def test_decaying_weight_has_no_positive_infimum():
    w = Weight(lambda b: np.exp(-np.abs(b)), "exp")
    small = validate_weight(LINE, w, sample_elements(LINE, 2000, b_halfwidth=5, rng=0))
    wide = validate_weight(LINE, w, sample_elements(LINE, 2000, b_halfwidth=50, rng=0))
    assert wide.certificates["positive_infimum"].worst < small.certificates["positive_infimum"].worst
    assert not wide.certificates["positive_infimum"].holds


def test_poly_weight_on_affine_group_is_reported_not_fixed():
    s = sample_elements(AFFINE, 2000, rng=1)
    w = validate_weight(AFFINE, weight_from_name("poly:1"), s)
    assert not w.certificates["symmetric"].holds


def test_weight_presets():
    assert weight_from_name("one") is ONE
    with pytest.raises(DomainError):
        weight_from_name("poly:x")
    with pytest.raises(DomainError):
        weight_from_name("gauss")
    with pytest.raises(DomainError):
        validate_weight(LINE, ONE, sample_elements(LINE, 10))


finite = st.floats(-1e3, 1e3)
scale = st.floats(1e-3, 1e3)


@given(finite, scale, finite, scale)
def test_affine_inverse_and_modular_are_homomorphic(b1, a1, b2, a2):
    g, h = (b1, a1), (b2, a2)
    gh = compose(AFFINE, g, h)
    assert modular(AFFINE, gh) == pytest.approx(modular(AFFINE, g) * modular(AFFINE, h), rel=1e-12)
    lhs = inverse(AFFINE, gh)
    rhs = compose(AFFINE, inverse(AFFINE, h), inverse(AFFINE, g))
    assert lhs[1] == pytest.approx(rhs[1], rel=1e-12)
    assert lhs[0] == pytest.approx(rhs[0], rel=1e-9, abs=1e-9 * (1 + abs(b1) / a1 + abs(b2) / (a1 * a2)))
