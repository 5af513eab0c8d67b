"""Self-similar Dirichlet energy on the gasket levels.

The level-n energy of an element is the sum over ordered root-vertex
pairs of tr |a(v_i) - a(v_j)|^2 (non-normalized trace).  The module
carries the self-similarity decomposition into first-letter slices,
the harmonic structure (minimizing extensions scale the energy by
3/5), renormalized energy sequences along restriction chains, the
norm-energy estimates they imply, and a sampling diagnostic for the
Sobolev constant.
"""

import math
import warnings

import numpy as np

from . import algebra
from .algebra import GasketElement, V0Form, to_v0form

# Accumulated geometric constant for the norm bound on chains that
# vanish at level 0: (sum_{n>=1} (3/5)^{n/2})^2 = 6 + 1.5*sqrt(15).
NORM_ENERGY_CONSTANT = 6.0 + 1.5 * math.sqrt(15.0)


class EnergyReport:
    """Energy of one element: total, renormalized, per-pair split."""

    __slots__ = ("level", "energy", "renormalized", "per_pair")

    def __init__(self, level, energy, per_pair):
        self.level = level
        self.energy = energy
        self.renormalized = (5.0 / 3.0) ** level * energy
        self.per_pair = per_pair

    def as_dict(self):
        return {
            "level": self.level,
            "energy": self.energy,
            "renormalized": self.renormalized,
            "per_pair": {"12": self.per_pair[0], "13": self.per_pair[1], "23": self.per_pair[2]},
        }


def energy(f):
    """Energy report of a V0Form or element.

    Each unordered pair contributes tr |a(v_i) - a(v_j)|^2, counted
    twice for ordered pairs.
    """
    if isinstance(f, GasketElement):
        f = to_v0form(f)
    per_pair = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        d = f.values[i] - f.values[j]
        per_pair.append(float(np.sum(np.abs(d) ** 2)))
    return EnergyReport(f.level, 2.0 * sum(per_pair), tuple(per_pair))


def slice_form(e, i, j):
    """Contract the first tensor factor against the (i, j) matrix unit.

    The output is a general V0Form one level down; it need not lie in
    the algebra.
    """
    if isinstance(e, GasketElement):
        e = to_v0form(e)
    if e.level < 1:
        raise ValueError("cannot slice a level-0 form")
    if i not in (1, 2, 3) or j not in (1, 2, 3):
        raise ValueError("slice indices must lie in {1, 2, 3}")
    dim = 3 ** (e.level - 1)
    values = []
    for v in e.values:
        t = v.reshape(3, dim, 3, dim)
        values.append(t[i - 1, :, j - 1, :])
    return V0Form(e.level - 1, values)


def check_selfsimilarity(e):
    """Both sides of the first-letter energy decomposition."""
    if e.level < 1:
        raise ValueError("self-similarity needs level >= 1")
    lhs = energy(e).energy
    rhs = 0.0
    f = to_v0form(e)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            rhs += energy(slice_form(f, i, j)).energy
    return lhs, rhs


def minimize_over_fiber(b, n=None):
    """Minimize the next-level energy over the restriction fiber of b.

    The fiber is the element's coembedding plus the kernel of the
    restriction, parametrized by the three new top blocks.  The
    quadratic is solved as a complex least-squares problem (minimum
    norm on degeneracy).

    Parameters
    ----------
    b : GasketElement
        Base element at level n in {0, 1}.

    Returns
    -------
    (minimizer, min_energy) : (GasketElement, float)
    """
    if n is None:
        n = b.level
    if n != b.level:
        raise ValueError("level argument disagrees with the element")
    if n not in (0, 1):
        raise ValueError("fiber minimization is supported at levels 0 and 1 only")
    f = to_v0form(b)
    m = 3 ** n
    mm = m * m
    # Unknowns: top blocks y_1, y_2, y_3 flattened and stacked.
    # Energy/2 = sum_j |y_j - b_j|^2 + |y_{j+1} - b_j|^2 + |y_j - y_{j+1}|^2.
    pattern = np.zeros((9, 3))
    target = np.zeros((9, mm), dtype=np.complex128)
    row = 0
    for j in range(3):
        pattern[row, j] = 1.0
        target[row] = f.values[j].reshape(mm)
        row += 1
        pattern[row, (j + 1) % 3] = 1.0
        target[row] = f.values[j].reshape(mm)
        row += 1
        pattern[row, j] = 1.0
        pattern[row, (j + 1) % 3] = -1.0
        row += 1
    a_mat = np.kron(pattern, np.eye(mm))
    rhs = target.reshape(9 * mm)
    sol, _, rank, _ = np.linalg.lstsq(a_mat.astype(np.complex128), rhs, rcond=None)
    if rank < 3 * mm:
        warnings.warn("fiber normal equations are singular; minimum-norm solution used")
    residual = a_mat @ sol - rhs
    min_energy = 2.0 * float(np.sum(np.abs(residual) ** 2))
    minimizer = algebra.coembed(b)
    for j in (1, 2, 3):
        minimizer._set_block(n, j, sol[(j - 1) * mm: j * mm].reshape(m, m))
    return minimizer, min_energy


def check_chain(chain):
    """Validate that consecutive chain entries are linked by restriction."""
    for lower, upper in zip(chain, chain[1:]):
        if upper.level != lower.level + 1:
            raise ValueError("chain levels must increase by one")
        if not algebra.restrict(upper).allclose(lower, tol=1e-12):
            raise ValueError("chain entries are not linked by restriction")


def renormalized_energy_sequence(chain, slack=1e-12):
    """Per-level renormalized energies (5/3)^m E_m along a chain.

    The slack tolerance is relative to the magnitude of the values.
    """
    check_chain(chain)
    seq = [energy(e).renormalized for e in chain]
    for a, b in zip(seq, seq[1:]):
        if b < a - slack * max(1.0, abs(a)):
            raise ValueError("renormalized energy decreased along the chain: %r" % (seq,))
    return seq


def restriction_defect_norm(chain, n):
    """Operator norm of rho_{n+1}(b) - rho_n(b) tensor I.

    Both terms have a diagonal last factor, so the norm is the largest
    root-vertex-value defect.
    """
    if not chain[0].level <= n < chain[-1].level:
        raise ValueError("chain does not contain levels %d and %d" % (n, n + 1))
    upper = chain[n + 1 - chain[0].level]
    lower = chain[n - chain[0].level]
    if upper.level != n + 1 or lower.level != n:
        raise ValueError("chain does not contain levels %d and %d" % (n, n + 1))
    dense_lower = algebra.to_dense(lower)
    f = to_v0form(upper)
    return max(algebra.op_norm(v - dense_lower) for v in f.values)


def check_norm_energy_bounds(chain, e_inf):
    """Per-level norm-energy inequalities along a finite-energy chain.

    Returns a report dict with the worst per-level slack of
    ||rho_{n+1}(b) - rho_n(b) x I||^2 <= (3/5)^(n+1) E_inf and, when
    the chain vanishes at level 0, the accumulated bound
    ||b||^2 <= C * E_inf.
    """
    check_chain(chain)
    base = chain[0].level
    levels = []
    worst = math.inf
    for n in range(base, chain[-1].level):
        lhs = restriction_defect_norm(chain, n) ** 2
        rhs = (3.0 / 5.0) ** (n + 1) * e_inf
        slack = rhs - lhs
        worst = min(worst, slack)
        levels.append({"level": n, "lhs": lhs, "rhs": rhs, "slack": slack})
    report = {"levels": levels, "worst_slack": worst}
    if base == 0 and chain[0].norm() < 1e-14:
        norm_sq = max(e.norm() for e in chain) ** 2
        report["vanishing_base"] = {
            "norm_sq": norm_sq,
            "bound": NORM_ENERGY_CONSTANT * e_inf,
            "slack": NORM_ENERGY_CONSTANT * e_inf - norm_sq,
        }
    return report


def sobolev_sample(sample_count, level_cap, seed):
    """Empirical lower estimate of the Sobolev constant.

    Samples harmonic extensions of random elements and returns the
    largest observed ||b||^2 / (E_inf[b] + tau(b*b)), evaluated at the
    truncation level.  A diagnostic, not a theorem check.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be positive")
    rng = np.random.default_rng(seed)
    best = 0.0
    rows = []
    for _ in range(sample_count):
        base_level = int(rng.integers(0, 2))
        a = algebra.random_element(base_level, rng, hermitian=True)
        top = algebra.extend_to(a, 0.6, level_cap)
        e_inf = energy(a).renormalized
        tau_bb = algebra.trace_tau(top.adjoint().mul(top)).real
        ratio = top.norm() ** 2 / (e_inf + tau_bb)
        rows.append({"base_level": base_level, "e_inf": e_inf,
                     "tau_bb": tau_bb, "ratio": ratio})
        best = max(best, ratio)
    return {"max_ratio": best, "samples": rows, "seed": seed, "level_cap": level_cap}
