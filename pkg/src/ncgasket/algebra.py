"""Finite levels of the quantum gasket algebra.

A level-n element lives in M_3(C)^{(n+1) tensor factors} and is stored
in its canonical block form: three scalars xi_j attached to the corner
projections alpha(n, j), and a family of matrix components eta_{k, j}
(k = 0..n-1, j = 1..3, each of size 3^k) attached to the beta
generators.  The generators have mutually orthogonal supports, so all
arithmetic is componentwise and the operator norm is the maximum of
the component norms.

The module also provides the restriction epimorphisms (contraction of
trailing factors against the vector state at diagonal position 2), the
symmetric extensions that invert them, root-vertex evaluation
(V0Form), oscillation, conditional expectation onto the diagonal
subalgebra, trace functionals and product-state evaluation.
"""

import numpy as np

from . import tensor
from .tensor import kron, kron_all, matrix_unit, op_norm

E11 = matrix_unit(3, 1, 1)
E22 = matrix_unit(3, 2, 2)
E33 = matrix_unit(3, 3, 3)


def _mod3(j):
    """Map an integer index into the representative set {1, 2, 3}."""
    return (j - 1) % 3 + 1


class GasketElement:
    """An element of the level-n approximation algebra in block form.

    Attributes
    ----------
    level : int
        The level n; the dense realization has dimension 3^(n+1).
    xi : ndarray, shape (3,)
        Coefficients of the three corner projections.
    blocks : dict
        Maps (k, j) with 0 <= k < n, j in {1,2,3} to a 3^k x 3^k
        complex matrix; absent keys mean zero blocks.
    """

    __slots__ = ("level", "xi", "blocks")

    def __init__(self, level, xi=None, blocks=None):
        if level < 0:
            raise ValueError("level must be nonnegative")
        self.level = int(level)
        if xi is None:
            xi = np.zeros(3, dtype=np.complex128)
        self.xi = np.array(xi, dtype=np.complex128).reshape(3)
        self.blocks = {}
        if blocks:
            for (k, j), mat in blocks.items():
                self._set_block(k, j, mat)

    def _set_block(self, k, j, mat):
        if not (0 <= k < self.level) or j not in (1, 2, 3):
            raise ValueError("invalid block key (%s, %s) at level %d" % (k, j, self.level))
        mat = tensor.check_matrix(mat, dim=3 ** k)
        if np.any(mat):
            self.blocks[(k, j)] = mat

    def block(self, k, j):
        """The eta_{k,j} component; zeros if absent."""
        if not (0 <= k < self.level) or j not in (1, 2, 3):
            raise ValueError("invalid block key (%s, %s) at level %d" % (k, j, self.level))
        got = self.blocks.get((k, j))
        if got is None:
            return np.zeros((3 ** k, 3 ** k), dtype=np.complex128)
        return got

    def _check_level(self, other):
        if self.level != other.level:
            raise ValueError("level mismatch: %d vs %d" % (self.level, other.level))

    def add(self, other):
        self._check_level(other)
        out = GasketElement(self.level, self.xi + other.xi)
        for key in set(self.blocks) | set(other.blocks):
            out._set_block(key[0], key[1], self.block(*key) + other.block(*key))
        return out

    def scale(self, c):
        out = GasketElement(self.level, c * self.xi)
        for (k, j), mat in self.blocks.items():
            out._set_block(k, j, c * mat)
        return out

    def sub(self, other):
        return self.add(other.scale(-1.0))

    def mul(self, other):
        """Product; componentwise because generator supports are orthogonal."""
        self._check_level(other)
        out = GasketElement(self.level, self.xi * other.xi)
        for key in set(self.blocks) & set(other.blocks):
            out._set_block(key[0], key[1], self.blocks[key] @ other.blocks[key])
        return out

    def adjoint(self):
        out = GasketElement(self.level, self.xi.conj())
        for (k, j), mat in self.blocks.items():
            out._set_block(k, j, mat.conj().T)
        return out

    def norm(self):
        """Operator norm: max of |xi_j| and the block norms."""
        best = float(np.max(np.abs(self.xi)))
        for mat in self.blocks.values():
            best = max(best, op_norm(mat))
        return best

    def trace(self):
        """Non-normalized trace of the dense realization."""
        # Each beta support carries two orthogonal copies of its block.
        tot = complex(np.sum(self.xi))
        for mat in self.blocks.values():
            tot += 2.0 * complex(np.trace(mat))
        return tot

    def allclose(self, other, tol=1e-12):
        if self.level != other.level:
            return False
        if not np.allclose(self.xi, other.xi, rtol=0.0, atol=tol):
            return False
        for key in set(self.blocks) | set(other.blocks):
            if not np.allclose(self.block(*key), other.block(*key), rtol=0.0, atol=tol):
                return False
        return True

    def is_hermitian(self, tol=1e-12):
        return self.allclose(self.adjoint(), tol=tol)

    def copy(self):
        return GasketElement(self.level, self.xi.copy(),
                             {k: v.copy() for k, v in self.blocks.items()})

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __mul__(self, other):
        if isinstance(other, GasketElement):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __repr__(self):
        return "GasketElement(level=%d, %d nonzero blocks)" % (self.level, len(self.blocks))


class V0Form:
    """Values of an element at the three root vertices.

    Each value is a 3^n x 3^n matrix; the element itself acts at level
    n, its values live one tensor factor down.
    """

    __slots__ = ("level", "values")

    def __init__(self, level, values):
        if len(values) != 3:
            raise ValueError("a V0Form has exactly three values")
        dim = 3 ** level
        self.level = int(level)
        self.values = [tensor.check_matrix(v, dim=dim) for v in values]

    def value(self, i):
        """Value at root vertex v_i, i in {1, 2, 3}."""
        if i not in (1, 2, 3):
            raise ValueError("root vertex index must lie in {1, 2, 3}")
        return self.values[i - 1]


class ProductState:
    """A product state given by per-factor coefficient matrices.

    Each factor is a 3x3 matrix w acting on a matrix A as
    sum_{ij} w[i, j] * A[i, j]; the tail factor repeats beyond the
    explicit prefix.  Factors must be unital (diagonal sum 1) and
    positive semidefinite.
    """

    __slots__ = ("factors", "tail")

    def __init__(self, factors, tail):
        self.factors = [self._check_factor(f) for f in factors]
        self.tail = self._check_factor(tail)

    @staticmethod
    def _check_factor(w, tol=1e-12):
        w = tensor.check_matrix(w, dim=3)
        if abs(np.trace(w) - 1.0) > 1e-10:
            raise ValueError("state factor is not unital: trace %s" % np.trace(w))
        if op_norm(w - w.conj().T) > tol:
            raise ValueError("state factor is not Hermitian")
        if np.min(np.linalg.eigvalsh(w)) < -tol:
            raise ValueError("state factor is not positive semidefinite")
        return w

    def factor(self, i):
        return self.factors[i] if i < len(self.factors) else self.tail


def zero(n):
    return GasketElement(n)


def identity(n):
    """The unit of the level-n algebra: xi = (1,1,1), all blocks I."""
    e = GasketElement(n, xi=[1.0, 1.0, 1.0])
    for k in range(n):
        for j in (1, 2, 3):
            e._set_block(k, j, tensor.identity_matrix(3 ** k))
    return e


def alpha(n, j):
    """Corner projection generator at level n."""
    if j not in (1, 2, 3):
        raise ValueError("generator index j must lie in {1, 2, 3}")
    xi = np.zeros(3, dtype=np.complex128)
    xi[j - 1] = 1.0
    return GasketElement(n, xi=xi)


def beta_block(n, k, j, x):
    """Element with the single component eta_{n-k, j} = x.

    The index k is the generation of the beta generator (1 <= k <= n);
    x must have dimension 3^(n-k).
    """
    if not (1 <= k <= n):
        raise ValueError("beta generation k must satisfy 1 <= k <= n")
    if j not in (1, 2, 3):
        raise ValueError("generator index j must lie in {1, 2, 3}")
    x = tensor.check_matrix(x, dim=3 ** (n - k))
    return GasketElement(n, blocks={(n - k, j): x})


def random_element(n, rng, hermitian=False, scale=1.0):
    """Random dense-in-every-block element, reproducible from rng."""
    xi = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    blocks = {}
    for k in range(n):
        for j in (1, 2, 3):
            m = rng.standard_normal((3 ** k, 3 ** k)) + 1j * rng.standard_normal((3 ** k, 3 ** k))
            blocks[(k, j)] = m
    if hermitian:
        xi = xi.real.astype(np.complex128)
        blocks = {key: (m + m.conj().T) / 2.0 for key, m in blocks.items()}
    e = GasketElement(n, xi=scale * xi)
    for (k, j), m in blocks.items():
        e._set_block(k, j, scale * m)
    return e


def _beta_pattern(generation, j):
    """Dense pattern of the generation-k beta generator, dim 3^(k+1)."""
    j2 = _mod3(j + 2)
    head = kron(matrix_unit(3, j, j), E11) + kron(matrix_unit(3, j2, j2), E33)
    return kron_all([head] + [E22] * (generation - 1))


def to_dense(e):
    """Dense realization in M_3^{(n+1)}; the brute-force oracle."""
    n = e.level
    dim = 3 ** (n + 1)
    if dim > tensor.DENSE_DIM_CAP:
        raise ValueError("dense dimension %d exceeds cap %d" % (dim, tensor.DENSE_DIM_CAP))
    out = np.zeros((dim, dim), dtype=np.complex128)
    tail = kron_all([E22] * n)
    for j in (1, 2, 3):
        if e.xi[j - 1] != 0:
            out += e.xi[j - 1] * kron(matrix_unit(3, j, j), tail)
    for (k, j), mat in e.blocks.items():
        out += kron(mat, _beta_pattern(n - k, j))
    return out


def from_dense(a, n, tol=1e-10):
    """Read the canonical block form back off a dense matrix.

    Parameters
    ----------
    a : array
        Dense matrix of dimension 3^(n+1).
    n : int
        Target level.
    tol : float
        Relative membership tolerance; the reconstruction residual
        (Frobenius, relative to the input) must not exceed it.

    Raises
    ------
    ValueError
        If the matrix lies outside the algebra; the message carries
        the residual norm.
    """
    dim = 3 ** (n + 1)
    a = tensor.check_matrix(a, dim=dim)
    t = a.reshape((3,) * (2 * (n + 1)))
    xi = np.zeros(3, dtype=np.complex128)
    for j in (1, 2, 3):
        idx = (j - 1,) + (1,) * n
        xi[j - 1] = t[idx + idx]
    e = GasketElement(n, xi=xi)
    for k in range(n):
        for j in (1, 2, 3):
            j2 = _mod3(j + 2)
            free = (slice(None),) * k
            fixed1 = (j - 1, 0) + (1,) * (n - 1 - k)
            fixed3 = (j2 - 1, 2) + (1,) * (n - 1 - k)
            m1 = t[free + fixed1 + free + fixed1].reshape(3 ** k, 3 ** k)
            m3 = t[free + fixed3 + free + fixed3].reshape(3 ** k, 3 ** k)
            # The two support copies carry the same block; averaging is
            # the orthogonal projection onto the generator span.
            e._set_block(k, j, (m1 + m3) / 2.0)
    residual = np.linalg.norm(a - to_dense(e))
    if residual > tol * max(1.0, np.linalg.norm(a)):
        raise ValueError("matrix is not in the level-%d algebra: residual %.3e" % (n, residual))
    return e


def restrict(e):
    """Level n -> n-1 restriction; contracts the last factor at position 2."""
    n = e.level
    if n < 1:
        raise ValueError("cannot restrict below level 0")
    out = GasketElement(n - 1, xi=e.xi.copy())
    for (k, j), mat in e.blocks.items():
        if k <= n - 2:
            out._set_block(k, j, mat)
    return out


def restrict_to(e, m):
    """Iterated restriction down to level m."""
    if m > e.level:
        raise ValueError("cannot restrict level %d to level %d" % (e.level, m))
    out = e
    while out.level > m:
        out = restrict(out)
    return out


def coembed(e):
    """Non-unital embedding into the next level (append the position-2 unit)."""
    out = GasketElement(e.level + 1, xi=e.xi.copy())
    for (k, j), mat in e.blocks.items():
        out._set_block(k, j, mat)
    return out


def to_v0form(e):
    """Evaluate the last tensor factor at the three diagonal positions."""
    n = e.level
    if n == 0:
        return V0Form(0, [e.xi[i].reshape(1, 1) for i in range(3)])
    v2 = to_dense(restrict(e))
    dim = 3 ** n
    v1 = np.zeros((dim, dim), dtype=np.complex128)
    v3 = np.zeros((dim, dim), dtype=np.complex128)
    for j in (1, 2, 3):
        top = e.blocks.get((n - 1, j))
        if top is None:
            continue
        j2 = _mod3(j + 2)
        v1 += kron(top, matrix_unit(3, j, j))
        v3 += kron(top, matrix_unit(3, j2, j2))
    return V0Form(n, [v1, v2, v3])


def v0form_to_element(f, tol=1e-10):
    """Inverse of to_v0form on forms that lie in the algebra."""
    n = f.level
    if n == 0:
        return GasketElement(0, xi=[f.values[0][0, 0], f.values[1][0, 0], f.values[2][0, 0]])
    lower = from_dense(f.values[1], n - 1, tol=tol)
    e = coembed(lower)
    t1 = f.values[0].reshape((3 ** (n - 1), 3, 3 ** (n - 1), 3))
    t3 = f.values[2].reshape((3 ** (n - 1), 3, 3 ** (n - 1), 3))
    for j in (1, 2, 3):
        j2 = _mod3(j + 2)
        top = (t1[:, j - 1, :, j - 1] + t3[:, j2 - 1, :, j2 - 1]) / 2.0
        e._set_block(n - 1, j, top)
    back = to_v0form(e)
    scale = max(1.0, max(np.linalg.norm(v) for v in f.values))
    residual = max(np.linalg.norm(back.values[i] - f.values[i]) for i in range(3))
    if residual > tol * scale:
        raise ValueError("form is not in the level-%d algebra: residual %.3e" % (n, residual))
    return e


def osc(f):
    """Largest operator-norm gap between root-vertex values."""
    if isinstance(f, GasketElement):
        f = to_v0form(f)
    return max(
        op_norm(f.values[0] - f.values[1]),
        op_norm(f.values[0] - f.values[2]),
        op_norm(f.values[1] - f.values[2]),
    )


def symmetric_extension(e, t):
    """The parameter-t extension into the next level.

    Keeps xi and all existing blocks (so restriction inverts it) and
    fills the new top family from the root-vertex values a_i:
    new top block j = (1-t) a_j + (2t-1) a_{j+1} + (1-t) a_{j+2}.
    """
    if not (0.5 <= t < 1.0):
        raise ValueError("extension parameter t must lie in [1/2, 1)")
    n = e.level
    f = to_v0form(e)
    out = coembed(e)
    for j in (1, 2, 3):
        a_j = f.values[j - 1]
        a_j1 = f.values[_mod3(j + 1) - 1]
        a_j2 = f.values[_mod3(j + 2) - 1]
        out._set_block(n, j, (1.0 - t) * a_j + (2.0 * t - 1.0) * a_j1 + (1.0 - t) * a_j2)
    return out


def harmonic_extension(e):
    """Symmetric extension at the energy-minimizing parameter 3/5."""
    return symmetric_extension(e, 0.6)


def affine_extension(e):
    """Symmetric extension at t = 1/2: midpoints average their endpoints."""
    return symmetric_extension(e, 0.5)


def extend_to(e, t, m):
    """Iterate the parameter-t extension up to level m."""
    if m < e.level:
        raise ValueError("target level %d below element level %d" % (m, e.level))
    out = e
    while out.level < m:
        out = symmetric_extension(out, t)
    return out


def extend_tail_bound(e, t, m):
    """Distance bound from the level-m truncation to the extension limit.

    The oscillation contracts by t per step, so the Cauchy tail is
    osc(e) * t^(m - level + 1) / (1 - t).
    """
    if m < e.level:
        raise ValueError("target level %d below element level %d" % (m, e.level))
    return osc(e) * t ** (m - e.level + 1) / (1.0 - t)


def extension_chain(e, t, m):
    """Restriction-consistent chain [rho_0(b), ..., rho_m(b)] of the extension."""
    top = extend_to(e, t, m)
    chain = [top]
    while chain[0].level > 0:
        chain.insert(0, restrict(chain[0]))
    return chain


def character_xi(e, j):
    """The j-th character: the coefficient of the corner projection."""
    if j not in (1, 2, 3):
        raise ValueError("character index must lie in {1, 2, 3}")
    return complex(e.xi[j - 1])


def rep_eta(e, k, j):
    """The (k, j) matrix component, a unital morphism onto M_3^{k}."""
    return e.block(k, j)


def cond_expectation(e):
    """Diagonal restriction of every block: the classical subalgebra part."""
    out = GasketElement(e.level, xi=e.xi.copy())
    for (k, j), mat in e.blocks.items():
        out._set_block(k, j, np.diag(np.diag(mat)))
    return out


def is_classical(e, tol=1e-12):
    """True when every block is diagonal."""
    for mat in e.blocks.values():
        if np.max(np.abs(mat - np.diag(np.diag(mat)))) > tol:
            return False
    return True


def trace_tau(e):
    """Normalized trace of the dense realization."""
    return e.trace() / 3 ** (e.level + 1)


def char_chi(e, j):
    """Character through the level-0 restriction."""
    return character_xi(restrict_to(e, 0), j)


def trace_tau_mj(e, m, j):
    """Normalized trace through the (m-1, j) component of rho_m."""
    if not (1 <= m <= e.level):
        raise ValueError("trace index m must satisfy 1 <= m <= level")
    block = restrict_to(e, m).block(m - 1, j)
    return complex(np.trace(block)) / 3 ** (m - 1)


def eval_product_state(e, state):
    """Apply a product state to the dense realization, factor by factor."""
    n = e.level
    a = to_dense(e)
    for i in range(n + 1):
        w = state.factor(i)
        rest = a.shape[0] // 3
        a = np.einsum("ij,iajb->ab", w, a.reshape(3, rest, 3, rest))
    return complex(a[0, 0])


def diagonal_state(weights):
    """The product state with one diagonal factor repeated."""
    w = np.diag(np.asarray(weights, dtype=np.complex128))
    return ProductState([], w)


def corner_pair_state():
    """The pure state supported on corners 1 and 3, then position 2 forever."""
    w0 = np.zeros((3, 3), dtype=np.complex128)
    w0[0, 0] = w0[0, 2] = w0[2, 0] = w0[2, 2] = 0.5
    return ProductState([w0], E22)


def element_to_json_dict(e):
    """Serializable dict form of an element; zero blocks are omitted."""
    blocks = []
    for (k, j) in sorted(e.blocks):
        mat = e.blocks[(k, j)]
        blocks.append({
            "k": k,
            "j": j,
            "matrix": [[[z.real, z.imag] for z in row] for row in mat],
        })
    return {
        "schema": 1,
        "level": e.level,
        "xi": [[z.real, z.imag] for z in e.xi],
        "blocks": blocks,
    }


def element_from_json_dict(doc):
    """Parse the JSON schema, reporting the path of any violation."""
    if not isinstance(doc, dict):
        raise ValueError("element document must be an object")
    schema = doc.get("schema")
    if schema != 1:
        raise ValueError("schema: unsupported version %r (expected 1)" % (schema,))
    if "level" not in doc or not isinstance(doc["level"], int) or doc["level"] < 0:
        raise ValueError("level: expected a nonnegative integer")
    n = doc["level"]
    xi_raw = doc.get("xi")
    if not isinstance(xi_raw, list) or len(xi_raw) != 3:
        raise ValueError("xi: expected a list of three [re, im] pairs")
    xi = []
    for i, pair in enumerate(xi_raw):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ValueError("xi[%d]: expected an [re, im] pair" % i)
        xi.append(complex(pair[0], pair[1]))
    blocks = {}
    for b, entry in enumerate(doc.get("blocks", [])):
        if not isinstance(entry, dict):
            raise ValueError("blocks[%d]: expected an object" % b)
        k, j = entry.get("k"), entry.get("j")
        if not isinstance(k, int) or not (0 <= k < n):
            raise ValueError("blocks[%d].k: expected an integer in [0, %d)" % (b, n))
        if j not in (1, 2, 3):
            raise ValueError("blocks[%d].j: expected 1, 2 or 3" % b)
        rows = entry.get("matrix")
        dim = 3 ** k
        if not isinstance(rows, list) or len(rows) != dim:
            raise ValueError("blocks[%d].matrix: expected %d rows" % (b, dim))
        mat = np.zeros((dim, dim), dtype=np.complex128)
        for r, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != dim:
                raise ValueError("blocks[%d].matrix[%d]: expected %d entries" % (b, r, dim))
            for c, pair in enumerate(row):
                if not isinstance(pair, list) or len(pair) != 2:
                    raise ValueError(
                        "blocks[%d].matrix[%d][%d]: expected an [re, im] pair" % (b, r, c))
                mat[r, c] = complex(pair[0], pair[1])
        if (k, j) in blocks:
            raise ValueError("blocks[%d]: duplicate key (%d, %d)" % (b, k, j))
        blocks[(k, j)] = mat
    return GasketElement(n, xi=xi, blocks=blocks)
