"""Dense complex matrix engine.

Kronecker products, matrix units, traces and operator norms on complex
matrices, used as the ground-truth oracle layer for every blockwise
operation in the rest of the package.  Matrices are numpy arrays of
complex128; in all flattened tensor indices the leftmost factor is the
most significant digit.
"""

import numpy as np

# Dense realizations are refused above this dimension; blockwise paths
# carry further.
DENSE_DIM_CAP = 3 ** 7

# Largest dimension for which the operator norm goes through a full
# singular value decomposition; power iteration is used above.
SVD_DIM_LIMIT = 729


def matrix_unit(dim, i, j):
    """Return the matrix unit e_{ij} of size dim, indices 1-based."""
    if not (1 <= i <= dim and 1 <= j <= dim):
        raise ValueError("matrix unit indices (%s, %s) out of range for dim %s" % (i, j, dim))
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[i - 1, j - 1] = 1.0
    return m


def identity_matrix(dim):
    return np.eye(dim, dtype=np.complex128)


def adjoint(a):
    return np.asarray(a).conj().T


def trace(a):
    return complex(np.trace(np.asarray(a)))


def kron(a, b, cap=DENSE_DIM_CAP):
    """Kronecker product with the left factor most significant.

    Raises if the product dimension exceeds the dense cap.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    out_dim = a.shape[0] * b.shape[0]
    if cap is not None and out_dim > cap:
        raise ValueError("kron output dimension %d exceeds dense cap %d" % (out_dim, cap))
    return np.kron(a, b)


def kron_all(factors, cap=DENSE_DIM_CAP):
    """Kronecker product of a sequence of matrices, left to right."""
    out = np.eye(1, dtype=np.complex128)
    for f in factors:
        out = kron(out, f, cap=cap)
    return out


def power_norm(a, tol=1e-12, max_iter=10000, rng=None):
    """Largest singular value of a by power iteration on a*a.

    Parameters
    ----------
    a : array
        Complex square or rectangular matrix.
    tol : float
        Relative stagnation tolerance on successive estimates.
    max_iter : int
        Iteration budget; non-convergence raises with the achieved
        tolerance.
    """
    a = np.asarray(a, dtype=np.complex128)
    if rng is None:
        rng = np.random.default_rng(0)
    n = a.shape[1]
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        w = a.conj().T @ (a @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new_est = np.sqrt(max(np.vdot(v, w).real, 0.0))
        v = w / nw
        delta = abs(new_est - est)
        est = new_est
        if delta <= tol * max(1.0, est):
            return est
    raise RuntimeError(
        "power iteration did not converge in %d steps; achieved tolerance %.3e"
        % (max_iter, delta / max(1.0, est))
    )


def op_norm(a):
    """Operator norm (largest singular value) of a complex matrix."""
    a = np.asarray(a, dtype=np.complex128)
    if a.size == 0:
        return 0.0
    if max(a.shape) <= SVD_DIM_LIMIT:
        return float(np.linalg.norm(a, 2))
    return float(power_norm(a))


def check_matrix(a, dim=None):
    """Validate a dense matrix: square, finite entries, optional dim."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError("expected a square matrix, got shape %s" % (a.shape,))
    if dim is not None and a.shape[0] != dim:
        raise ValueError("expected dimension %d, got %d" % (dim, a.shape[0]))
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix entries must be finite")
    return a


def words(n):
    """Iterate all words of length n over the alphabet {1, 2, 3}."""
    if n == 0:
        yield ()
        return
    for head in words(n - 1):
        for letter in (1, 2, 3):
            yield head + (letter,)


def word_index(word):
    """Flattened index of a word, leftmost letter most significant."""
    idx = 0
    for letter in word:
        if letter not in (1, 2, 3):
            raise ValueError("word letters must lie in {1, 2, 3}")
        idx = 3 * idx + (letter - 1)
    return idx


def index_word(idx, n):
    """Inverse of word_index for words of length n."""
    letters = []
    for _ in range(n):
        idx, r = divmod(idx, 3)
        letters.append(r + 1)
    if idx:
        raise ValueError("index out of range for word length %d" % n)
    return tuple(reversed(letters))
