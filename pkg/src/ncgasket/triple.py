"""Discrete spectral triple on the gasket levels.

The level-n Hilbert space is spanned by (word, oriented edge) pairs,
where the six oriented edges are the off-diagonal matrix units of a
3x3 algebra.  The orientation flip F transposes the unit, the Dirac
operator is 2^n F per level, and the algebra acts through its
root-vertex values.  The module computes commutator norms, Lip-norm
data along restriction chains, the eigenvalue counting function with
its dimension fit, and the zeta-residue machinery for the trace and
energy formulas.
"""

import math

import numpy as np

from . import algebra, energy, tensor

# Oriented edges as ordered index pairs; edge p runs along the matrix
# unit e_{i, j} and its reversal is the transposed unit.
EDGE_UNITS = ((2, 1), (3, 2), (1, 3), (1, 2), (2, 3), (3, 1))

LOG2 = math.log(2.0)
METRIC_DIMENSION = math.log(3.0) / LOG2
ENERGY_ABSCISSA = 2.0 - math.log(5.0 / 3.0) / LOG2


class EdgeStateVector:
    """Vector in the level-n edge Hilbert space.

    Amplitudes are stored as an array of shape (3^n, 6), rows indexed
    by words and columns by the oriented edges in EDGE_UNITS order.
    """

    __slots__ = ("level", "amplitudes")

    def __init__(self, level, amplitudes=None):
        self.level = int(level)
        shape = (3 ** self.level, 6)
        if amplitudes is None:
            amplitudes = np.zeros(shape, dtype=np.complex128)
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != shape:
            raise ValueError("expected amplitude shape %s, got %s" % (shape, amplitudes.shape))
        self.amplitudes = amplitudes

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, word, pair):
        return self.amplitudes[tensor.word_index(word), EDGE_UNITS.index(pair)]


def random_state(level, rng):
    shape = (3 ** level, 6)
    return EdgeStateVector(level, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


_FLIP = [EDGE_UNITS.index((j, i)) for (i, j) in EDGE_UNITS]


def apply_F(v):
    """Orientation flip: transpose the matrix-unit coordinate."""
    return EdgeStateVector(v.level, v.amplitudes[:, _FLIP])


def apply_pi(a, v):
    """Action of an element: its value at the edge's row vertex.

    The element is first restricted to the state's level; left
    multiplication by a diagonal unit keeps only matching row indices.
    """
    a = algebra.restrict_to(a, v.level)
    f = algebra.to_v0form(a)
    out = np.empty_like(v.amplitudes)
    for col, (i, _) in enumerate(EDGE_UNITS):
        out[:, col] = f.values[i - 1] @ v.amplitudes[:, col]
    return EdgeStateVector(v.level, out)


def dense_F(n):
    dim = 6 * 3 ** n
    m = np.zeros((dim, dim), dtype=np.complex128)
    for col, flipped in enumerate(_FLIP):
        block = np.eye(3 ** n)
        m[flipped::6, col::6] = block
    return m


def dense_pi(a, n):
    """Dense matrix of the level-n action, basis ordered word-major."""
    a = algebra.restrict_to(a, n)
    f = algebra.to_v0form(a)
    dim = 6 * 3 ** n
    m = np.zeros((dim, dim), dtype=np.complex128)
    for col, (i, _) in enumerate(EDGE_UNITS):
        m[col::6, col::6] = f.values[i - 1]
    return m


def hilbert_trace(a, n):
    """Trace of the level-n action; twice the matrix trace."""
    a = algebra.restrict_to(a, n)
    f = algebra.to_v0form(a)
    return 2.0 * sum(complex(np.trace(v)) for v in f.values)


def commutator_norm(a, n):
    """Norm of [F_n, pi_n(a)]; equals the oscillation of the restriction."""
    return algebra.osc(algebra.restrict_to(a, n))


def dense_commutator_norm(a, n):
    """Same commutator norm through dense singular values."""
    f = dense_F(n)
    p = dense_pi(a, n)
    return tensor.op_norm(f @ p - p @ f)


def commutator_hs_sq(a, n):
    """Hilbert-Schmidt square of [D_n, pi_n(a)] via the energy identity."""
    return 4.0 ** n * energy.energy(algebra.restrict_to(a, n)).energy


def dense_commutator_hs_sq(a, n):
    """Same quantity summed over the dense Hilbert-space matrix."""
    f = dense_F(n)
    p = dense_pi(a, n)
    c = 2.0 ** n * (f @ p - p @ f)
    return float(np.sum(np.abs(c) ** 2))


def lip_norm(chain, cutoff=None):
    """Lip-norm data of a restriction chain.

    Returns (value, stationary) where value = max over levels of
    2^k osc(rho_k(a)) and stationary reports whether the maximum is
    attained strictly before the last level, so that a larger cutoff
    cannot raise it.
    """
    energy.check_chain(chain)
    if cutoff is not None:
        chain = [e for e in chain if e.level <= cutoff]
        if not chain:
            raise ValueError("cutoff excludes every chain level")
    values = [2.0 ** e.level * algebra.osc(e) for e in chain]
    value = max(values)
    tol = 1e-12 * max(1.0, value)
    first = next(i for i, v in enumerate(values) if v >= value - tol)
    stationary = bool(first < len(values) - 1)
    return value, stationary


def eigenvalue_counting(t):
    """Number of Dirac eigenvalues (with multiplicity) of modulus <= t.

    Level k contributes the eigenvalue 2^k with multiplicity 6 * 3^k.
    """
    if t < 1.0:
        return 0
    count = 0
    k = 0
    while 2 ** k <= t:
        count += 6 * 3 ** k
        k += 1
    return count


def dimension_fit(t_max):
    """Least-squares slope of log N(2^m) versus m log 2."""
    m_top = int(math.floor(math.log2(t_max)))
    if m_top < 1:
        raise ValueError("need t_max >= 2 for a slope")
    ms = np.arange(m_top + 1)
    x = ms * LOG2
    y = np.log([eigenvalue_counting(2.0 ** m) for m in ms])
    return float(np.polyfit(x, y, 1)[0])


class ZetaProfile:
    """Partial zeta sums over an s-grid with optional geometric tail.

    For weights w_j the partial sum at s is sum_{j <= cutoff}
    2^(-s j) w_j; a geometric tail model carries the ratio of the
    neglected terms and the first neglected term per s.
    """

    __slots__ = ("s_grid", "partial_sums", "cutoff", "tail_model")

    def __init__(self, s_grid, partial_sums, cutoff, tail_model=None):
        self.s_grid = list(s_grid)
        self.partial_sums = list(partial_sums)
        self.cutoff = cutoff
        self.tail_model = tail_model

    def tail_corrected(self, idx):
        """Partial sum plus the summed geometric tail at grid index idx."""
        if self.tail_model is None:
            return self.partial_sums[idx]
        ratio = self.tail_model["ratio"][idx]
        first = self.tail_model["first_neglected"][idx]
        if ratio >= 1.0:
            raise ValueError("geometric tail diverges at s = %s" % self.s_grid[idx])
        return self.partial_sums[idx] + first / (1.0 - ratio)

    def rows(self):
        for idx, s in enumerate(self.s_grid):
            corrected = self.tail_corrected(idx) if self.tail_model else self.partial_sums[idx]
            yield s, self.partial_sums[idx], corrected


def certify_geometric_tail(weights, ratio, rel_tol=1e-6, window=5):
    """Check that the last weights follow the given ratio."""
    tail = weights[-window:]
    for a, b in zip(tail, tail[1:]):
        if a == 0 and b == 0:
            continue
        if a == 0 or abs(b / a - ratio) > rel_tol * ratio:
            return False
    return True


def trace_weights(chain):
    """Matrix traces of the chain levels; zeta weights for the trace formula."""
    return [e.trace().real for e in chain]


def energy_weights(chain, dense_check_cap=-1):
    """Weights tr |[D_n, pi_n(a)]|^2 per chain level.

    Computed through the energy identity; levels up to dense_check_cap
    are cross-checked against the dense Hilbert-space sum.
    """
    weights = []
    for e in chain:
        w = commutator_hs_sq(e, e.level)
        if e.level <= dense_check_cap:
            dense = dense_commutator_hs_sq(e, e.level)
            if abs(dense - w) > 1e-8 * max(1.0, abs(w)):
                raise AssertionError(
                    "energy weight mismatch at level %d: %r vs %r" % (e.level, w, dense))
        weights.append(w)
    return weights


def zeta_profile(weights, s_grid, stationary_ratio=None):
    """Assemble a ZetaProfile from per-level weights.

    When the asymptotic weight ratio (per level, before the 2^-s
    factor) is supplied, a geometric tail model is attached; it must
    be certified by the trailing weights.
    """
    s_grid = list(s_grid)
    cutoff = len(weights) - 1
    partial = []
    for s in s_grid:
        partial.append(sum(2.0 ** (-s * j) * w for j, w in enumerate(weights)))
    tail_model = None
    if stationary_ratio is not None:
        if not certify_geometric_tail(weights, stationary_ratio):
            raise ValueError("trailing weights do not follow ratio %r" % stationary_ratio)
        ratios = [stationary_ratio * 2.0 ** (-s) for s in s_grid]
        first = [2.0 ** (-s * (cutoff + 1)) * weights[-1] * stationary_ratio for s in s_grid]
        tail_model = {"kind": "geometric", "ratio": ratios, "first_neglected": first}
    return ZetaProfile(s_grid, partial, cutoff, tail_model)


def zeta_trace(chain, s_grid):
    """Trace zeta profile of a chain; extensions triple the trace per level."""
    return zeta_profile(trace_weights(chain), s_grid, stationary_ratio=3.0)


def zeta_energy(chain, s_grid, dense_check_cap=-1):
    """Energy zeta profile of a harmonic chain; weight ratio 12/5."""
    weights = energy_weights(chain, dense_check_cap=dense_check_cap)
    return zeta_profile(weights, s_grid, stationary_ratio=12.0 / 5.0)


def _extrapolate_to_zero(hs, gs):
    """Value at h = 0 of the polynomial through the points (h, g)."""
    total = 0.0
    for i, g in enumerate(gs):
        weight = 1.0
        for j, h in enumerate(hs):
            if j != i:
                weight *= h / (h - hs[i])
        total += weight * g
    return total


def residue_estimate(weights, pole, ratio, analytic=True):
    """Residue of the zeta series sum 2^(-s j) w_j at the given pole.

    With a certified geometric tail (per-level weight ratio such that
    ratio * 2^(-pole) = 1) the residue is evaluated analytically from
    the closed form; otherwise numerically as the limit of
    (s - pole) * f(s) along s = pole + 10^-q, q = 1..4, with
    polynomial extrapolation.

    Parameters
    ----------
    weights : list of float
        Per-level weights, assumed to continue geometrically with the
        stated ratio beyond the last entry.
    pole : float
        Location of the simple pole.
    ratio : float
        Per-level weight growth ratio (3 for traces, 12/5 for energy).
    analytic : bool
        Analytic closed form when True, extrapolation ladder when
        False.
    """
    if not certify_geometric_tail(weights, ratio):
        raise ValueError("tail not certified: trailing weights do not follow ratio %r" % ratio)
    if abs(ratio * 2.0 ** (-pole) - 1.0) > 1e-12:
        raise ValueError("pole %r does not match weight ratio %r" % (pole, ratio))
    cutoff = len(weights) - 1
    if analytic:
        # Split off the pure geometric series from the top weight:
        # sum_{k>=0} 2^(-s (cutoff+k)) w_cutoff ratio^k has residue
        # 2^(-pole cutoff) w_cutoff / log 2; the remaining finite sum
        # is entire and contributes nothing.
        return 2.0 ** (-pole * cutoff) * weights[-1] / LOG2

    def f(s):
        partial = sum(2.0 ** (-s * j) * w for j, w in enumerate(weights[:-1]))
        geo = 2.0 ** (-s * cutoff) * weights[-1] / (1.0 - ratio * 2.0 ** (-s))
        return partial + geo

    hs = [10.0 ** (-q) for q in range(1, 5)]
    gs = [h * f(pole + h) for h in hs]
    return _extrapolate_to_zero(hs, gs)


def connes_trace_residue(chain, analytic=True):
    """Residue at the metric dimension of the trace zeta of a chain."""
    return residue_estimate(trace_weights(chain), METRIC_DIMENSION, 3.0, analytic=analytic)


def energy_residue(chain, analytic=True, dense_check_cap=-1):
    """Residue at the energy abscissa of the energy zeta of a chain."""
    weights = energy_weights(chain, dense_check_cap=dense_check_cap)
    return residue_estimate(weights, ENERGY_ABSCISSA, 12.0 / 5.0, analytic=analytic)
