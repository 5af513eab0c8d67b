import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncgasket import algebra, classical, energy, tensor


def test_corner_unit_energy_is_four():
    # two vertex pairs see a unit jump, each counted once per order
    report = energy.energy(algebra.alpha(0, 1))
    assert report.level == 0
    assert math.isclose(report.energy, 4.0, rel_tol=0, abs_tol=1e-14)
    assert report.per_pair == (1.0, 1.0, 0.0)


def test_identity_energy_is_zero():
    for n in (0, 1, 2):
        assert energy.energy(algebra.identity(n)).energy == 0.0


def test_renormalized_factor():
    rng = np.random.default_rng(3)
    for n in (0, 1, 2):
        report = energy.energy(algebra.random_element(n, rng))
        assert math.isclose(report.renormalized,
                            (5.0 / 3.0) ** n * report.energy, rel_tol=1e-14)


def test_report_as_dict_keys():
    d = energy.energy(algebra.alpha(0, 2)).as_dict()
    assert set(d) == {"level", "energy", "renormalized", "per_pair"}
    assert set(d["per_pair"]) == {"12", "13", "23"}


def test_harmonic_extension_scales_energy_by_three_fifths():
    rng = np.random.default_rng(7)
    for n in (0, 1, 2):
        a = algebra.random_element(n, rng)
        base = energy.energy(a).energy
        up = energy.energy(algebra.harmonic_extension(a)).energy
        assert math.isclose(up, 0.6 * base, rel_tol=1e-12)


def test_selfsimilar_decomposition():
    rng = np.random.default_rng(11)
    for n in (1, 2, 3):
        e = algebra.random_element(n, rng)
        lhs, rhs = energy.check_selfsimilarity(e)
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))
    with pytest.raises(ValueError):
        energy.check_selfsimilarity(algebra.identity(0))


def test_slice_form_validation():
    f = algebra.to_v0form(algebra.identity(1))
    with pytest.raises(ValueError):
        energy.slice_form(algebra.identity(0), 1, 1)
    with pytest.raises(ValueError):
        energy.slice_form(f, 0, 1)
    with pytest.raises(ValueError):
        energy.slice_form(f, 1, 4)


def test_fiber_minimum_of_corner_unit():
    # the minimizing extension of a corner unit is the harmonic one
    b = algebra.alpha(0, 1)
    minimizer, best = energy.minimize_over_fiber(b)
    assert math.isclose(best, 12.0 / 5.0, rel_tol=1e-12)
    assert minimizer.allclose(algebra.harmonic_extension(b), tol=1e-10)
    assert algebra.restrict(minimizer).allclose(b, tol=1e-12)
    assert math.isclose(energy.energy(minimizer).energy, best, rel_tol=1e-12)


def test_fiber_minimum_matches_harmonic_generally():
    rng = np.random.default_rng(19)
    for n in (0, 1):
        a = algebra.random_element(n, rng, hermitian=True)
        minimizer, best = energy.minimize_over_fiber(a)
        harmonic = algebra.harmonic_extension(a)
        assert math.isclose(best, energy.energy(harmonic).energy,
                            rel_tol=1e-10, abs_tol=1e-12)
        assert minimizer.allclose(harmonic, tol=1e-8)


def test_fiber_minimization_validation():
    a = algebra.random_element(2, np.random.default_rng(0))
    with pytest.raises(ValueError):
        energy.minimize_over_fiber(a)
    with pytest.raises(ValueError):
        energy.minimize_over_fiber(algebra.identity(0), n=1)


def test_check_chain_rejects_broken_links():
    rng = np.random.default_rng(23)
    a = algebra.random_element(0, rng)
    chain = algebra.extension_chain(a, 0.6, 3)
    energy.check_chain(chain)
    with pytest.raises(ValueError):
        energy.check_chain([chain[0], chain[2]])
    with pytest.raises(ValueError):
        energy.check_chain([chain[0], algebra.random_element(1, rng)])


def test_renormalized_sequence_harmonic_is_constant():
    rng = np.random.default_rng(29)
    a = algebra.random_element(0, rng)
    chain = algebra.extension_chain(a, 0.6, 5)
    seq = energy.renormalized_energy_sequence(chain)
    assert len(seq) == 6
    for value in seq[1:]:
        assert math.isclose(value, seq[0], rel_tol=1e-10)


def test_renormalized_sequence_affine_increases():
    rng = np.random.default_rng(31)
    a = algebra.random_element(0, rng)
    chain = algebra.extension_chain(a, 0.5, 4)
    seq = energy.renormalized_energy_sequence(chain)
    assert seq[-1] > 1.01 * seq[0]


def test_energy_splits_over_conditional_expectation():
    # entrywise orthogonality of diagonal and off-diagonal parts
    rng = np.random.default_rng(37)
    for n in (1, 2, 3):
        b = algebra.random_element(n, rng)
        diag = algebra.cond_expectation(b)
        rest = b - diag
        total = energy.energy(b).energy
        split = energy.energy(diag).energy + energy.energy(rest).energy
        assert abs(total - split) <= 1e-10 * max(1.0, total)


def test_classical_clamp_does_not_increase_energy():
    rng = np.random.default_rng(41)
    labels = classical.enumerate_vertices(2)
    f = classical.ClassicalFunction(
        2, {lab: v for lab, v in zip(labels, 2.0 * rng.standard_normal(len(labels)))})
    clamped = classical.ClassicalFunction(
        2, {lab: min(max(f.value(lab).real, 0.0), 1.0) for lab in labels})
    assert classical.classical_energy(clamped) <= classical.classical_energy(f) + 1e-12


def test_norm_energy_constant_value():
    assert math.isclose(energy.NORM_ENERGY_CONSTANT, 6.0 + 1.5 * math.sqrt(15.0))


def test_norm_energy_bounds_on_harmonic_chain():
    rng = np.random.default_rng(43)
    a = algebra.random_element(0, rng, hermitian=True)
    chain = algebra.extension_chain(a, 0.6, 5)
    e_inf = max(energy.renormalized_energy_sequence(chain))
    report = energy.check_norm_energy_bounds(chain, e_inf)
    assert report["worst_slack"] >= -1e-10
    assert [row["level"] for row in report["levels"]] == [0, 1, 2, 3, 4]
    assert "vanishing_base" not in report


def test_norm_energy_vanishing_base_branch():
    rng = np.random.default_rng(47)
    b = algebra.random_element(0, rng, hermitian=True)
    # two extensions of the same base differ by a kernel element
    c = algebra.symmetric_extension(b, 0.5) - algebra.symmetric_extension(b, 0.8)
    chain = algebra.extension_chain(c, 0.6, 5)
    assert chain[0].norm() < 1e-14
    e_inf = max(energy.renormalized_energy_sequence(chain))
    report = energy.check_norm_energy_bounds(chain, e_inf)
    assert report["worst_slack"] >= -1e-10
    extra = report["vanishing_base"]
    assert extra["norm_sq"] <= extra["bound"] + 1e-10
    assert extra["slack"] >= -1e-10


def test_restriction_defect_matches_dense_difference():
    rng = np.random.default_rng(53)
    a = algebra.random_element(0, rng, hermitian=True)
    chain = algebra.extension_chain(a, 0.6, 3)
    for n in (0, 1, 2):
        got = energy.restriction_defect_norm(chain, n)
        dense = algebra.to_dense(chain[n + 1 - chain[0].level])
        lower = algebra.to_dense(chain[n - chain[0].level])
        want = tensor.op_norm(dense - np.kron(lower, np.eye(3)))
        assert math.isclose(got, want, rel_tol=1e-12, abs_tol=1e-14)
    with pytest.raises(ValueError):
        energy.restriction_defect_norm(chain, 5)


def test_sobolev_sample_shape_and_bound():
    report = energy.sobolev_sample(8, 4, seed=61)
    assert len(report["samples"]) == 8
    assert 0.0 < report["max_ratio"] <= energy.NORM_ENERGY_CONSTANT + 1.0
    again = energy.sobolev_sample(8, 4, seed=61)
    assert again["max_ratio"] == report["max_ratio"]
    with pytest.raises(ValueError):
        energy.sobolev_sample(0, 4, seed=61)


@settings(max_examples=25, deadline=None)
@given(level=st.integers(min_value=0, max_value=2),
       seed=st.integers(min_value=0, max_value=2 ** 32 - 1),
       re=st.floats(min_value=-3, max_value=3),
       im=st.floats(min_value=-3, max_value=3))
def test_energy_is_a_quadratic_form(level, seed, re, im):
    a = algebra.random_element(level, np.random.default_rng(seed))
    c = complex(re, im)
    base = energy.energy(a).energy
    assert base >= 0.0
    scaled = energy.energy(a.scale(c)).energy
    assert abs(scaled - abs(c) ** 2 * base) <= 1e-9 * max(1.0, base)
