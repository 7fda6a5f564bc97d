"""Sampler and z-test checks for the Monte Carlo oracle."""

from fractions import Fraction

import numpy as np
import pytest

from wgcalc.mc import (
    EnsembleSpec,
    compare_with_exact,
    estimate_moment,
    estimate_moments,
    haar_orthogonal,
    haar_unitary,
    sample_aiii,
    sample_coe,
)
from wgcalc.moments import MomentSpec

SEED = 20260822


def test_haar_unitary_is_unitary():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 0]))
    u = haar_unitary(4, rng)
    assert u.shape == (4, 4)
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-12


def test_haar_orthogonal_is_real_orthogonal():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 1]))
    o = haar_orthogonal(3, rng)
    assert o.dtype == np.float64
    assert np.max(np.abs(o @ o.T - np.eye(3))) < 1e-12


def test_coe_sample_is_symmetric_unitary():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 2]))
    s = sample_coe(3, rng)
    assert np.max(np.abs(s - s.T)) < 1e-12
    assert np.max(np.abs(s @ s.conj().T - np.eye(3))) < 1e-11


def test_aiii_sample_constraints():
    rng = np.random.Generator(np.random.Philox(key=[SEED, 3]))
    s = sample_aiii(2, 1, rng)
    assert np.max(np.abs(s - s.conj().T)) < 1e-11
    assert abs(np.trace(s) - 1) < 1e-10
    assert np.max(np.abs(s @ s - np.eye(3))) < 1e-11


def test_estimates_are_reproducible_and_chunk_independent():
    spec = MomentSpec("u", rows=(1,), cols=(1,), crows=(1,), ccols=(1,), d=3)
    ens = EnsembleSpec("u", 3)
    first = estimate_moments(ens, [spec], 2000, SEED)[0]
    again = estimate_moments(ens, [spec], 2000, SEED)[0]
    rechunked = estimate_moments(ens, [spec], 2000, SEED, chunk=173)[0]
    assert first == again
    assert first == rechunked


def test_unitary_phase_mean_near_zero():
    spec = MomentSpec("u", rows=(1,), cols=(1,), d=1)
    report = compare_with_exact(spec, 4000, SEED)
    assert report.exact == 0
    assert report.passed


def test_unitary_second_and_fourth_moments():
    spec2 = MomentSpec("u", rows=(1,), cols=(1,), crows=(1,), ccols=(1,), d=3)
    report = compare_with_exact(spec2, 20000, SEED)
    assert report.exact == Fraction(1, 3)
    assert report.passed
    spec4 = MomentSpec("u", rows=(1, 2), cols=(1, 2), crows=(1, 2), ccols=(2, 1), d=2)
    report = compare_with_exact(spec4, 20000, SEED)
    assert report.exact == Fraction(-1, 6)
    assert report.passed


def test_orthogonal_moments():
    spec = MomentSpec("o", rows=(1, 1), cols=(1, 1), d=2)
    report = compare_with_exact(spec, 20000, SEED)
    assert report.exact == Fraction(1, 2)
    assert report.passed
    spec = MomentSpec("o", rows=(1, 1, 2, 2), cols=(1, 2, 1, 2), d=2)
    report = compare_with_exact(spec, 20000, SEED)
    assert report.exact == Fraction(-1, 8)
    assert report.passed


def test_coe_degenerate_monomial_hits_absolute_floor():
    spec = MomentSpec("coe", rows=(1,), cols=(1,), crows=(1,), ccols=(1,), d=1)
    report = compare_with_exact(spec, 1000, SEED)
    assert report.exact == 1
    assert report.passed


def test_coe_fourth_moment():
    spec = MomentSpec("coe", rows=(1, 1), cols=(2, 2), crows=(1, 1), ccols=(2, 2), d=3)
    report = compare_with_exact(spec, 20000, SEED)
    assert report.exact == Fraction(2, 18)
    assert report.passed


def test_aiii_moments():
    spec = MomentSpec("aiii", rows=(1,), cols=(1,), d=3, dminus=1)
    report = compare_with_exact(spec, 20000, SEED)
    assert report.exact == Fraction(1, 3)
    assert report.passed
    spec = MomentSpec("aiii", rows=(1, 2), cols=(2, 1), d=3, dminus=1)
    report = compare_with_exact(spec, 20000, SEED)
    assert report.exact == Fraction(1, 3)
    assert report.passed


def test_ensemble_validation():
    with pytest.raises(ValueError):
        EnsembleSpec("sp", 2)
    with pytest.raises(ValueError):
        EnsembleSpec("aiii", 3, 1, 2)
    with pytest.raises(ValueError):
        EnsembleSpec("aiii", 4, 2, 1)
    with pytest.raises(ValueError):
        EnsembleSpec("u", 3, 2, 1)
    with pytest.raises(ValueError):
        EnsembleSpec("u", 0)


def test_estimate_rejects_bad_requests():
    spec = MomentSpec("u", rows=(1,), cols=(1,), crows=(1,), ccols=(1,), d=3)
    with pytest.raises(ValueError):
        estimate_moment(spec, 999, SEED)
    with pytest.raises(ValueError):
        estimate_moments(EnsembleSpec("o", 3), [spec], 2000, SEED)
    big = MomentSpec("u", rows=(5,), cols=(1,), crows=(5,), ccols=(1,), d=3)
    with pytest.raises(ValueError):
        estimate_moments(EnsembleSpec("u", 3), [big], 2000, SEED)
    odd = MomentSpec("aiii", rows=(1,), cols=(1,), d=3, dminus=2)
    with pytest.raises(ValueError):
        estimate_moment(odd, 2000, SEED)
