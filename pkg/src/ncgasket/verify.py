"""Seeded verification suites behind the command-line harness.

Each suite draws its randomness from one seeded generator, exercises a
single family of identities, and returns a list of case dicts with the
worst measured deviation per case.  The CLI wraps suites into JSON
reports; the acceptance tests run the same functions directly, so the
command line and the test suite certify exactly the same checks.
"""

import math
import time

import numpy as np

from . import algebra, classical, energy, tensor, triple


def _case(name, measured, tolerance, expected=0.0, ok=None):
    if ok is None:
        ok = bool(measured <= tolerance)
    return {
        "name": name,
        "status": "pass" if ok else "fail",
        "measured": float(measured),
        "expected": float(expected),
        "tolerance": float(tolerance),
    }


def _dense_restrict(a, level):
    d = 3 ** level
    return a.reshape(d, 3, d, 3)[:, 1, :, 1]


def _extension_profile(t, u, j):
    # Coefficient of the midpoint-j generator in the extension of the
    # corner-u generator.
    if u == j:
        return 1.0 - t
    if u == algebra._mod3(j + 2):
        return 1.0 - t
    return 2.0 * t - 1.0


def _dense_extension(a, level, t):
    """Extension computed straight from the dense matrix."""
    d = 3 ** level
    blocks = a.reshape(d, 3, d, 3)
    out = np.zeros((9 * d, 9 * d), dtype=np.complex128)
    for u in (1, 2, 3):
        lam = np.kron(tensor.matrix_unit(3, u, u), tensor.matrix_unit(3, 2, 2))
        for j in (1, 2, 3):
            j2 = algebra._mod3(j + 2)
            pattern = (np.kron(tensor.matrix_unit(3, j, j), tensor.matrix_unit(3, 1, 1))
                       + np.kron(tensor.matrix_unit(3, j2, j2), tensor.matrix_unit(3, 3, 3)))
            lam = lam + _extension_profile(t, u, j) * pattern
        out += np.kron(blocks[:, u - 1, :, u - 1], lam)
    return out


def dense_oracle_suite(seed, level_cap=4, pairs=200):
    """Blockwise arithmetic against literal matrix computation."""
    rng = np.random.default_rng(seed)
    ts = (0.5, 0.6, 0.8)
    cases = []
    for n in range(level_cap + 1):
        worst_ops = 0.0
        worst_norm = 0.0
        for p in range(pairs):
            a = algebra.random_element(n, rng)
            b = algebra.random_element(n, rng)
            da, db = algebra.to_dense(a), algebra.to_dense(b)
            worst_ops = max(
                worst_ops,
                np.abs(algebra.to_dense(a * b) - da @ db).max(),
                np.abs(algebra.to_dense(a + b) - (da + db)).max(),
                np.abs(algebra.to_dense(a.adjoint()) - da.conj().T).max())
            if n > 0:
                worst_ops = max(worst_ops, np.abs(
                    algebra.to_dense(algebra.restrict(a)) - _dense_restrict(da, n)).max())
            t = ts[p % len(ts)]
            ext = algebra.symmetric_extension(a, t)
            worst_ops = max(worst_ops, np.abs(
                algebra.to_dense(ext) - _dense_extension(da, n, t)).max())
            worst_norm = max(worst_norm, abs(a.norm() - tensor.op_norm(da)))
        cases.append(_case("level-%d-operations" % n, worst_ops, 1e-10))
        cases.append(_case("level-%d-norm" % n, worst_norm, 1e-8))
    return cases


def eigenform_suite(seed, level_cap=5, samples=100):
    """Energy drops by exactly 3/5 under the harmonic extension."""
    rng = np.random.default_rng(seed)
    cases = []
    for n in range(level_cap + 1):
        worst = 0.0
        for _ in range(samples):
            b = algebra.random_element(n, rng)
            base = energy.energy(b).energy
            ext = energy.energy(algebra.harmonic_extension(b)).energy
            worst = max(worst, abs(ext / base - 0.6))
        cases.append(_case("level-%d-ratio" % n, worst, 1e-10, expected=0.6))
    return cases


def fiber_suite(seed, samples=20):
    """Quadratic minimum over a restriction fiber hits 3/5 of the energy."""
    rng = np.random.default_rng(seed)
    cases = []
    for n in (0, 1):
        worst_value = 0.0
        worst_argmin = 0.0
        for _ in range(samples):
            b = algebra.random_element(n, rng, hermitian=True)
            base = energy.energy(b).energy
            minimizer, best = energy.minimize_over_fiber(b)
            harmonic = algebra.harmonic_extension(b)
            worst_value = max(worst_value, abs(best - 0.6 * base))
            diff = minimizer - harmonic
            worst_argmin = max(worst_argmin, diff.norm())
        cases.append(_case("level-%d-minimum" % n, worst_value, 1e-8))
        cases.append(_case("level-%d-argmin" % n, worst_argmin, 1e-8))
    return cases


def selfsim_suite(seed, level_cap=4, samples=100):
    """Energy of an element is the sum of its nine sliced energies."""
    rng = np.random.default_rng(seed)
    cases = []
    for n in range(1, level_cap + 1):
        worst = 0.0
        for _ in range(samples):
            b = algebra.random_element(n, rng)
            lhs, rhs = energy.check_selfsimilarity(b)
            worst = max(worst, abs(lhs - rhs))
        cases.append(_case("level-%d-split" % n, worst, 1e-10))
    return cases


def osc_suite(seed, level_cap=3, samples=100):
    """Oscillation contraction and approximation under extensions."""
    rng = np.random.default_rng(seed)
    worst_osc = 0.0
    worst_dist = 0.0
    for n in range(level_cap + 1):
        for p in range(samples):
            a = algebra.random_element(n, rng)
            t = (0.5, 0.6, 0.8)[p % 3]
            base_osc = algebra.osc(a)
            ext = algebra.symmetric_extension(a, t)
            worst_osc = max(worst_osc, algebra.osc(ext) - t * base_osc)
            da = algebra.to_dense(a)
            form = algebra.to_v0form(ext)
            dist = max(tensor.op_norm(form.value(u) - da) for u in (1, 2, 3))
            worst_dist = max(worst_dist, dist - t * base_osc)
    return [
        _case("osc-contraction", worst_osc, 1e-12),
        _case("approximation-distance", worst_dist, 1e-10),
    ]


def commutator_suite(seed, level_cap=3, samples=20):
    """Dense commutator norms against the oscillation formula."""
    rng = np.random.default_rng(seed)
    cases = []
    for n in range(level_cap + 1):
        worst = 0.0
        for _ in range(samples):
            a = algebra.random_element(rng.integers(n, level_cap + 1), rng)
            worst = max(worst, abs(
                triple.dense_commutator_norm(a, n) - triple.commutator_norm(a, n)))
        cases.append(_case("level-%d-commutator" % n, worst, 1e-8))
    return cases


def lip_suite(seed, base_cap=2, extra_levels=3, samples=10):
    """Lip-norm of affine chains: value, stationarity, approximation."""
    rng = np.random.default_rng(seed)
    worst_value = 0.0
    stationary_ok = True
    worst_bound = 0.0
    for n in range(base_cap + 1):
        for _ in range(samples):
            a = algebra.random_element(n, rng, hermitian=True)
            chain = algebra.extension_chain(a, 0.5, n + extra_levels)
            value, stationary = triple.lip_norm(chain)
            expected = 2.0 ** n * algebra.osc(a)
            worst_value = max(worst_value, abs(value - expected) / max(1.0, expected))
            stationary_ok = stationary_ok and stationary
            top = chain[-1]
            dense_top_form = algebra.to_v0form(top)
            for e in chain[:-1]:
                gap = top.level - e.level
                embedded = algebra.to_dense(e)
                embedded = np.kron(embedded, np.eye(3 ** (gap - 1)))
                dist = max(tensor.op_norm(dense_top_form.value(u) - embedded)
                           for u in (1, 2, 3))
                worst_bound = max(worst_bound, dist - 2.0 ** (-e.level) * value)
    cases = [
        _case("affine-lip-value", worst_value, 1e-10),
        _case("affine-stationary", 0.0 if stationary_ok else 1.0, 0.5),
        _case("approximation-bound", worst_bound, 1e-10),
    ]
    return cases


def dimension_suite(seed=None, t_max=2 ** 20):
    """Least-squares dimension of the eigenvalue counting function."""
    del seed
    measured = triple.dimension_fit(t_max)
    return [
        _case("counting-at-1", abs(triple.eigenvalue_counting(1) - 6), 0.0, expected=6.0),
        _case("counting-at-2", abs(triple.eigenvalue_counting(2) - 24), 0.0, expected=24.0),
        _case("slope", abs(measured - triple.METRIC_DIMENSION), 0.01,
              expected=triple.METRIC_DIMENSION),
    ]


def connes_suite(seed, level_cap=3, samples=5):
    """Residues of the trace zeta function along harmonic chains."""
    rng = np.random.default_rng(seed)
    worst_analytic = 0.0
    worst_numeric = 0.0
    worst_trace = 0.0
    for n in range(level_cap + 1):
        for _ in range(samples):
            a = algebra.random_element(n, rng, hermitian=True)
            while abs(a.trace().real) < 1.0:
                # The relative check on the residue needs a trace away
                # from zero.
                a = algebra.random_element(n, rng, hermitian=True)
            chain = algebra.extension_chain(a, 0.6, n + 4)
            expected = 3.0 ** (-n) * a.trace().real / triple.LOG2
            analytic = triple.connes_trace_residue(chain, analytic=True)
            numeric = triple.connes_trace_residue(chain, analytic=False)
            scale = max(1.0, abs(expected))
            worst_analytic = max(worst_analytic, abs(analytic - expected) / scale)
            worst_numeric = max(worst_numeric, abs(numeric - expected) / abs(expected))
            worst_trace = max(worst_trace, abs(
                np.trace(triple.dense_pi(a, n)).real
                - 2.0 * np.trace(algebra.to_dense(algebra.restrict_to(a, n))).real))
    return [
        _case("analytic-residue", worst_analytic, 1e-12),
        _case("numeric-residue", worst_numeric, 1e-3),
        _case("hilbert-trace-factor", worst_trace, 1e-10),
    ]


def energy_residue_suite(seed, level_cap=3, samples=3):
    """Residues of the energy zeta function along harmonic chains."""
    rng = np.random.default_rng(seed)
    worst_analytic = 0.0
    worst_numeric = 0.0
    worst_dense = 0.0
    for n in range(level_cap + 1):
        for _ in range(samples):
            a = algebra.random_element(n, rng, hermitian=True)
            chain = algebra.extension_chain(a, 0.6, n + 4)
            e_inf = (5.0 / 3.0) ** n * energy.energy(a).energy
            expected = e_inf / triple.LOG2
            analytic = triple.energy_residue(chain, analytic=True, dense_check_cap=-1)
            numeric = triple.energy_residue(chain, analytic=False, dense_check_cap=-1)
            worst_analytic = max(worst_analytic, abs(analytic - expected) / expected)
            worst_numeric = max(worst_numeric, abs(numeric - expected) / expected)
            for e in chain:
                if e.level > 3:
                    continue
                formula = triple.commutator_hs_sq(e, e.level)
                dense = triple.dense_commutator_hs_sq(e, e.level)
                worst_dense = max(worst_dense, abs(formula - dense) / max(1.0, dense))
    return [
        _case("analytic-residue", worst_analytic, 1e-8),
        _case("dense-hilbert-path", worst_dense, 1e-8),
        _case("numeric-residue", worst_numeric, 1e-3),
    ]


def traces_suite(seed, level_cap=3, pairs=100):
    """Tracial and unital checks plus the corner-pair state identity."""
    rng = np.random.default_rng(seed)
    worst_tracial = 0.0
    worst_unital = 0.0
    worst_corner = 0.0
    for p in range(pairs):
        n = int(rng.integers(0, level_cap + 1))
        a = algebra.random_element(n, rng)
        b = algebra.random_element(n, rng)
        one = algebra.identity(n)
        ab, ba = a * b, b * a
        forms = [algebra.trace_tau]
        forms.extend((lambda e, j=j: algebra.char_chi(e, j)) for j in (1, 2, 3))
        if n >= 1:
            m = int(rng.integers(1, n + 1))
            j = int(rng.integers(1, 4))
            forms.append(lambda e, m=m, j=j: algebra.trace_tau_mj(e, m, j))
        for form in forms:
            worst_tracial = max(worst_tracial, abs(form(ab) - form(ba)))
            worst_unital = max(worst_unital, abs(form(one) - 1.0))
        state = algebra.corner_pair_state()
        got = algebra.eval_product_state(a, state)
        want = 0.5 * (algebra.char_chi(a, 1) + algebra.char_chi(a, 3))
        worst_corner = max(worst_corner, abs(got - want))
    return [
        _case("tracial", worst_tracial, 1e-10),
        _case("unital", worst_unital, 1e-10),
        _case("corner-pair-state", worst_corner, 1e-10),
    ]


def norm_energy_suite(seed, level_cap=5, samples=10):
    """Restriction defects dominated by the renormalized energy."""
    rng = np.random.default_rng(seed)
    worst = None
    for n in range(3):
        for _ in range(samples):
            b = algebra.random_element(n, rng, hermitian=True)
            chain = algebra.extension_chain(b, 0.6, level_cap)
            e_inf = (5.0 / 3.0) ** n * energy.energy(b).energy
            report = energy.check_norm_energy_bounds(chain, e_inf)
            slack = report["worst_slack"]
            worst = slack if worst is None else min(worst, slack)
    return [_case("margin", -worst, 1e-10)]


def classical_suite(seed, count_cap=8, bridge_cap=3, samples=10):
    """Vertex counts and the diagonal bridge to the matrix model."""
    rng = np.random.default_rng(seed)
    count_bad = 0
    for n in range(count_cap + 1):
        if len(classical.enumerate_vertices(n)) != classical.vertex_count(n):
            count_bad += 1
    worst_bridge = 0.0
    worst_commute = 0.0
    for n in range(bridge_cap + 1):
        for _ in range(samples):
            f = classical.ClassicalFunction.from_callable(
                n, lambda label: complex(rng.standard_normal(), rng.standard_normal()))
            e = classical.to_element(f)
            stepped = classical.to_element(classical.classical_harmonic_step(f))
            diff = stepped - algebra.harmonic_extension(e)
            worst_bridge = max(worst_bridge, diff.norm())
            worst_bridge = max(worst_bridge, abs(
                classical.classical_energy(f) - energy.energy(e).energy))
            if n >= 1:
                back = classical.to_element(classical.classical_restrict(f))
                worst_bridge = max(worst_bridge, (back - algebra.restrict(e)).norm())
            g = classical.ClassicalFunction.from_callable(
                n, lambda label: complex(rng.standard_normal(), rng.standard_normal()))
            h = classical.to_element(g)
            worst_commute = max(worst_commute, (e * h - h * e).norm())
    return [
        _case("vertex-counts", count_bad, 0.0, expected=0.0),
        _case("diagonal-bridge", worst_bridge, 1e-12),
        _case("pairwise-commute", worst_commute, 1e-12),
    ]


SUITES = {
    "dense-oracle": dense_oracle_suite,
    "eigenform": eigenform_suite,
    "fiber": fiber_suite,
    "selfsim": selfsim_suite,
    "osc": osc_suite,
    "commutator": commutator_suite,
    "lip": lip_suite,
    "dimension": dimension_suite,
    "connes": connes_suite,
    "energy-residue": energy_residue_suite,
    "traces": traces_suite,
    "norm-energy": norm_energy_suite,
    "classical": classical_suite,
}


def run_suite(name, seed, **kwargs):
    """Run one named suite and report cases plus elapsed seconds."""
    if name not in SUITES:
        raise KeyError("unknown suite %r" % name)
    start = time.perf_counter()
    cases = SUITES[name](seed, **kwargs)
    elapsed = time.perf_counter() - start
    return {
        "suite": name,
        "cases": cases,
        "seed": int(seed),
        "elapsed": elapsed,
    }


def suite_passed(report):
    return all(case["status"] == "pass" for case in report["cases"])
