import math

import numpy as np
import pytest

from ncgasket import algebra, classical, energy, tensor


def random_classical(level, rng, real=False):
    labels = classical.enumerate_vertices(level)
    vals = rng.standard_normal(len(labels))
    if not real:
        vals = vals + 1j * rng.standard_normal(len(labels))
    return classical.ClassicalFunction(level, dict(zip(labels, vals)))


def test_vertex_counts():
    assert [classical.vertex_count(n) for n in range(6)] == [3, 6, 15, 42, 123, 366]
    for n in range(6):
        assert len(classical.enumerate_vertices(n)) == classical.vertex_count(n)
    for n in range(9):
        assert classical.vertex_count(n) == (3 ** (n + 1) + 3) // 2


def test_corner_maps_fix_their_corner_through_letter_two():
    for j in (1, 2, 3):
        image = classical.corner_map(j, classical.ROOT_VERTICES[2])
        assert np.allclose(image, classical.ROOT_VERTICES[j], atol=1e-14)


def test_two_addresses_identify_one_vertex():
    label = classical.address_to_label(1, (1, 1))
    other = classical.address_to_label(1, (3, 3))
    assert label == other
    assert label.addresses() == ((1, 1), (3, 3))
    assert label.name() == "11"
    x, y = classical.label_to_point(label)
    assert math.isclose(x, 0.5, abs_tol=1e-14)
    assert math.isclose(y, 0.0, abs_tol=1e-14)


def test_every_address_resolves_back():
    for n in (0, 1, 2, 3):
        for label in classical.enumerate_vertices(n):
            for address in label.addresses():
                assert len(address) == n + 1
                assert classical.address_to_label(n, address) == label


def test_points_are_distinct_and_consistent():
    for n in (1, 2, 3):
        points = [classical.label_to_point(label)
                  for label in classical.enumerate_vertices(n)]
        arr = np.array(points)
        for i in range(len(arr) - 1):
            d = np.linalg.norm(arr[i + 1:] - arr[i], axis=1)
            assert d.min() > 1e-9
    for j in (1, 2, 3):
        got = classical.label_to_point(classical.outer_label(2, j))
        assert np.allclose(got, classical.ROOT_VERTICES[j], atol=1e-14)


def test_age_relabel_restrict_roundtrip():
    for n in (1, 2, 3):
        for label in classical.enumerate_vertices(n):
            age = classical.vertex_age(label)
            if label.kind == "outer":
                assert age == n
            else:
                assert age == label.k - 1
            up = classical.relabel_in(label, n + 2)
            assert classical.vertex_age(up) == age + 2
            assert classical.restrict_label(up, n) == label
            assert up.address() == label.address() + (2, 2)


def test_label_validation_errors():
    with pytest.raises(ValueError):
        classical.address_to_label(2, (1, 1))
    with pytest.raises(ValueError):
        classical.address_to_label(1, (1, 4))
    with pytest.raises(ValueError):
        classical.relabel_in(classical.outer_label(2, 1), 1)
    with pytest.raises(ValueError):
        classical.restrict_label(classical.inner_label(2, (), 1, 1), 1)
    with pytest.raises(ValueError):
        classical.inner_label(2, (1, 2), 1, 2)


def test_enumerate_edges():
    for n in (0, 1, 2):
        edges = classical.enumerate_edges(n)
        assert len(edges) == 6 * 3 ** n
        for a, b in edges:
            assert a != b
            assert (b, a) in edges


def test_harmonic_step_split_of_a_corner_spike():
    f = classical.ClassicalFunction.characteristic(classical.outer_label(0, 1))
    up = classical.classical_harmonic_step(f, t=0.6)
    assert up.value_at((1, 2)) == 1.0
    assert up.value_at((2, 2)) == 0.0
    born = {j: up.value(classical.inner_label(1, (), j, 1)) for j in (1, 2, 3)}
    assert math.isclose(born[1].real, 0.4, abs_tol=1e-15)
    assert math.isclose(born[2].real, 0.4, abs_tol=1e-15)
    assert math.isclose(born[3].real, 0.2, abs_tol=1e-15)
    with pytest.raises(ValueError):
        classical.classical_harmonic_step(f, t=0.3)


def test_harmonic_step_preserves_constants():
    f = classical.ClassicalFunction.constant(1, 2.5 - 1j)
    up = classical.classical_harmonic_step(f)
    assert all(v == 2.5 - 1j for v in up.values.values())
    assert classical.classical_energy(up) == 0.0


def test_harmonic_step_energy_ratio():
    rng = np.random.default_rng(8)
    f = random_classical(1, rng)
    base = classical.classical_energy(f)
    up = classical.classical_energy(classical.classical_harmonic_step(f, 0.6))
    assert math.isclose(up, 0.6 * base, rel_tol=1e-12)
    affine = classical.classical_energy(classical.classical_harmonic_step(f, 0.5))
    assert affine >= up - 1e-12


def test_classical_restrict_inverts_the_step():
    rng = np.random.default_rng(14)
    f = random_classical(2, rng)
    up = classical.classical_harmonic_step(f)
    back = classical.classical_restrict(up)
    assert back.level == 2
    assert all(back.value(lab) == f.value(lab) for lab in f.values)
    with pytest.raises(ValueError):
        classical.classical_restrict(classical.ClassicalFunction.constant(0, 1.0))


def test_diagonal_bridge_energy_osc_and_extension():
    rng = np.random.default_rng(20)
    f = random_classical(2, rng)
    e = classical.to_element(f)
    assert e.level == 2
    quantum = energy.energy(e).energy
    assert math.isclose(quantum, classical.classical_energy(f), rel_tol=1e-12)
    assert math.isclose(algebra.osc(e), classical.classical_osc(f), rel_tol=1e-12)
    up = classical.to_element(classical.classical_harmonic_step(f))
    assert up.allclose(algebra.harmonic_extension(e), tol=1e-12)
    down = classical.to_element(classical.classical_restrict(f))
    assert down.allclose(algebra.restrict(e), tol=1e-12)


def test_element_roundtrip_and_diagonality_check():
    rng = np.random.default_rng(26)
    f = random_classical(2, rng)
    back = classical.from_element(classical.to_element(f))
    assert all(back.value(lab) == f.value(lab) for lab in f.values)
    generic = algebra.random_element(2, np.random.default_rng(0))
    with pytest.raises(ValueError):
        classical.from_element(generic)


def test_selfsimilar_measure_values_and_validation():
    assert classical.selfsimilar_measure(()) == 1.0
    assert math.isclose(classical.selfsimilar_measure((1, 2)), 1.0 / 9.0)
    assert math.isclose(classical.selfsimilar_measure((1,), (0.5, 0.3, 0.2)), 0.5)
    assert math.isclose(classical.selfsimilar_measure((2, 3), (0.5, 0.3, 0.2)), 0.06)
    with pytest.raises(ValueError):
        classical.selfsimilar_measure((1,), (0.5, 0.3, 0.3))
    with pytest.raises(ValueError):
        classical.selfsimilar_measure((1,), (1.5, -0.3, -0.2))
    with pytest.raises(ValueError):
        classical.selfsimilar_measure((4,))


def test_cylinder_measure_matches_normalized_dense_trace():
    # indicator of a word prefix, as a diagonal matrix over (word, corner)
    n = 3
    for prefix in ((), (2,), (2, 1), (1, 3, 2)):
        hits = sum(1 for w in tensor.words(n) if w[:len(prefix)] == prefix)
        trace = 3 * hits
        assert math.isclose(trace / 3.0 ** (n + 1),
                            classical.selfsimilar_measure(prefix), rel_tol=1e-14)


def _algebra_basis_dense(n):
    dims = 3 ** (n + 1)
    out = []
    for j in (1, 2, 3):
        out.append(algebra.to_dense(algebra.alpha(n, j)))
    for k in range(1, n + 1):
        d = 3 ** (n - k)
        for j in (1, 2, 3):
            for p in range(1, d + 1):
                for q in range(1, d + 1):
                    unit = tensor.matrix_unit(d, p, q)
                    out.append(algebra.to_dense(algebra.beta_block(n, k, j, unit)))
    assert all(m.shape == (dims, dims) for m in out)
    return out


def test_diagonal_image_is_maximal_abelian():
    # the commutant of the vertex functions inside the algebra is
    # exactly the vertex functions themselves
    for n in (1, 2):
        labels = classical.enumerate_vertices(n)
        diag = [algebra.to_dense(classical.to_element(
            classical.ClassicalFunction.characteristic(lab))) for lab in labels]
        for i, a in enumerate(diag):
            for b in diag[i + 1:]:
                assert np.allclose(a @ b, b @ a)
        basis = _algebra_basis_dense(n)
        cols = []
        for m in basis:
            cols.append(np.concatenate([(m @ d - d @ m).ravel() for d in diag]))
        system = np.array(cols).T
        kernel_dim = len(basis) - np.linalg.matrix_rank(system)
        assert kernel_dim == len(labels)


def test_vertex_and_edge_rows():
    rows = classical.vertex_rows(2)
    assert len(rows) == 15
    names = [r[0] for r in rows]
    assert len(set(names)) == 15
    for name, x, y, age in rows:
        label = classical.address_to_label(2, tuple(int(c) for c in name))
        assert classical.vertex_age(label) == age
        px, py = classical.label_to_point(label)
        assert (px, py) == (x, y)
    edges = classical.edge_rows(1)
    assert len(edges) == 18
    assert all(isinstance(a, str) and isinstance(b, str) for a, b in edges)
