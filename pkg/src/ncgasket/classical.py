"""Vertex model of the gasket levels.

Level n carries (3^(n+1) + 3)/2 vertices: the three outer corners and,
for each generation, one midpoint-type vertex per triangular cell.  A
vertex is addressed by a word over {1, 2, 3} followed by a corner
letter; inner vertices carry exactly two such addresses, identified
here into a single label.  The module resolves labels to plane
coordinates, runs the classical harmonic extension and graph energy,
evaluates self-similar cylinder measures, and converts between vertex
functions and the diagonal elements of the matrix model.
"""

import numpy as np

from . import algebra, tensor

ROOT_VERTICES = {
    1: np.array([0.0, 0.0]),
    2: np.array([0.5, 0.5 * np.sqrt(3.0)]),
    3: np.array([1.0, 0.0]),
}

_CENTROID = (ROOT_VERTICES[1] + ROOT_VERTICES[2] + ROOT_VERTICES[3]) / 3.0


def _mod3(j):
    return (j - 1) % 3 + 1


def _rotation(j):
    # Corner maps permute the outer vertices cyclically; the letter-2
    # map is the plain half-scale similitude toward its corner.
    angle = {1: 2.0 * np.pi / 3.0, 2: 0.0, 3: -2.0 * np.pi / 3.0}[j]
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


_ROTATIONS = {j: _rotation(j) for j in (1, 2, 3)}


def corner_map(j, point):
    """Half-scale map of the gasket into the corner-j cell."""
    rotated = _CENTROID + _ROTATIONS[j] @ (np.asarray(point, dtype=float) - _CENTROID)
    return ROOT_VERTICES[j] + 0.5 * (rotated - ROOT_VERTICES[j])


class VertexLabel:
    """Identified vertex of a level-n graph.

    Outer vertices are the three corners of the root triangle.  An
    inner vertex is born inside the cell of a word sigma and carries
    the two equivalent addresses sigma.j.1.2^(k-1) and
    sigma.(j+2).3.2^(k-1); the trailing-2 exponent k-1 is its age.
    """

    __slots__ = ("level", "kind", "j", "word", "k")

    def __init__(self, level, kind, j, word=(), k=None):
        level = int(level)
        j = int(j)
        word = tuple(int(letter) for letter in word)
        if level < 0 or j not in (1, 2, 3):
            raise ValueError("bad vertex label")
        if any(letter not in (1, 2, 3) for letter in word):
            raise ValueError("address letters must lie in {1, 2, 3}")
        if kind == "outer":
            if word or k is not None:
                raise ValueError("outer labels carry no word")
        elif kind == "inner":
            k = int(k)
            if not 1 <= k <= level or len(word) != level - k:
                raise ValueError("inner label needs |word| = level - k with 1 <= k <= level")
        else:
            raise ValueError("kind must be outer or inner")
        self.level = level
        self.kind = kind
        self.j = j
        self.word = word
        self.k = k

    def addresses(self):
        """All equivalent letter addresses, length level + 1 each."""
        if self.kind == "outer":
            return ((self.j,) + (2,) * self.level,)
        tail = (2,) * (self.k - 1)
        first = self.word + (self.j, 1) + tail
        second = self.word + (_mod3(self.j + 2), 3) + tail
        return (first, second) if first < second else (second, first)

    def address(self):
        """Canonical (lexicographically smallest) address."""
        return self.addresses()[0]

    def name(self):
        return "".join(str(letter) for letter in self.address())

    def __eq__(self, other):
        if not isinstance(other, VertexLabel):
            return NotImplemented
        return (self.level, self.kind, self.j, self.word, self.k) == (
            other.level, other.kind, other.j, other.word, other.k)

    def __hash__(self):
        return hash((self.level, self.kind, self.j, self.word, self.k))

    def __repr__(self):
        return "VertexLabel(%r)" % self.name()


def outer_label(level, j):
    return VertexLabel(level, "outer", j)


def inner_label(level, word, j, k):
    return VertexLabel(level, "inner", j, word, k)


def address_to_label(level, address):
    """Resolve a raw letter address of length level + 1 to its label."""
    address = tuple(int(letter) for letter in address)
    if len(address) != level + 1:
        raise ValueError("address must have %d letters" % (level + 1))
    if any(letter not in (1, 2, 3) for letter in address):
        raise ValueError("address letters must lie in {1, 2, 3}")
    core = list(address)
    while len(core) > 1 and core[-1] == 2:
        core.pop()
    if len(core) == 1:
        return outer_label(level, core[0])
    k = level + 1 - len(core)
    last, prev = core[-1], core[-2]
    if last == 1:
        j = prev
    elif last == 3:
        j = _mod3(prev + 1)
    else:
        raise ValueError("malformed address: inner core cannot end in 2")
    return inner_label(level, tuple(core[:-2]), j, k + 1)


def enumerate_vertices(n):
    """All level-n labels: the corners, then inner vertices oldest first."""
    labels = [outer_label(n, j) for j in (1, 2, 3)]
    for k in range(n, 0, -1):
        for j in (1, 2, 3):
            for word in tensor.words(n - k):
                labels.append(inner_label(n, word, j, k))
    return labels


def vertex_count(n):
    return (3 ** (n + 1) + 3) // 2


def point_of_address(address):
    point = ROOT_VERTICES[address[-1]]
    for letter in reversed(address[:-1]):
        point = corner_map(letter, point)
    return point


def label_to_point(label):
    """Plane coordinates of a vertex; both addresses must agree."""
    points = [point_of_address(a) for a in label.addresses()]
    if len(points) == 2 and not np.allclose(points[0], points[1], atol=1e-12):
        raise AssertionError("the two addresses of %r disagree geometrically" % label)
    return float(points[0][0]), float(points[0][1])


def vertex_age(label):
    """Levels survived since birth; corners are as old as the graph."""
    if label.kind == "outer":
        return label.level
    return label.k - 1


def relabel_in(label, m):
    """The same vertex as a member of the level-m graph, m >= level."""
    if m < label.level:
        raise ValueError("cannot relabel into a coarser level")
    if label.kind == "outer":
        return outer_label(m, label.j)
    return inner_label(m, label.word, label.j, label.k + (m - label.level))


def restrict_label(label, m):
    """Inverse of relabel_in; needs the vertex old enough to exist at m."""
    if m > label.level:
        raise ValueError("restrict_label lowers the level")
    if label.kind == "outer":
        return outer_label(m, label.j)
    if label.k - (label.level - m) < 1:
        raise ValueError("vertex is younger than level %d" % m)
    return inner_label(m, label.word, label.j, label.k - (label.level - m))


def enumerate_edges(n):
    """Ordered vertex pairs along the 6 * 3^n oriented level-n edges."""
    edges = []
    for word in tensor.words(n):
        cell = [address_to_label(n, word + (i,)) for i in (1, 2, 3)]
        for i in range(3):
            for j in range(3):
                if i != j:
                    edges.append((cell[i], cell[j]))
    return edges


class ClassicalFunction:
    """Complex-valued function on the level-n vertices."""

    __slots__ = ("level", "values")

    def __init__(self, level, values):
        self.level = int(level)
        self.values = dict(values)
        expected = enumerate_vertices(self.level)
        if len(self.values) != len(expected) or any(
                label not in self.values for label in expected):
            raise ValueError("values must cover every level-%d vertex" % self.level)
        for label in self.values:
            self.values[label] = complex(self.values[label])

    @classmethod
    def from_callable(cls, level, fn):
        return cls(level, {label: fn(label) for label in enumerate_vertices(level)})

    @classmethod
    def constant(cls, level, value):
        return cls.from_callable(level, lambda label: value)

    @classmethod
    def characteristic(cls, label):
        return cls.from_callable(label.level, lambda other: 1.0 if other == label else 0.0)

    def value(self, label):
        return self.values[label]

    def value_at(self, address):
        return self.values[address_to_label(self.level, address)]

    def copy(self):
        return ClassicalFunction(self.level, self.values)


def classical_harmonic_step(f, t=0.6):
    """One self-similar extension step on vertex functions.

    Old vertices keep their values; the vertex born at letter j inside
    the cell of a word sigma receives (1-t) f(sigma.j) +
    (2t-1) f(sigma.(j+1)) + (1-t) f(sigma.(j+2)).
    """
    if not 0.5 <= t < 1.0:
        raise ValueError("extension parameter must lie in [1/2, 1)")
    n = f.level
    values = {relabel_in(label, n + 1): value for label, value in f.values.items()}
    for word in tensor.words(n):
        corners = [f.value_at(word + (i,)) for i in (1, 2, 3)]
        for j in (1, 2, 3):
            new = ((1.0 - t) * corners[j - 1]
                   + (2.0 * t - 1.0) * corners[_mod3(j + 1) - 1]
                   + (1.0 - t) * corners[_mod3(j + 2) - 1])
            values[inner_label(n + 1, word, j, 1)] = new
    return ClassicalFunction(n + 1, values)


def classical_restrict(f):
    """Forget the youngest generation of vertices."""
    if f.level == 0:
        raise ValueError("level-0 functions have no coarser restriction")
    values = {}
    for label, value in f.values.items():
        if vertex_age(label) >= 1:
            values[restrict_label(label, f.level - 1)] = value
    return ClassicalFunction(f.level - 1, values)


def classical_energy(f):
    """Graph Dirichlet energy: sum over ordered edges of |jump|^2."""
    total = 0.0
    for word in tensor.words(f.level):
        corners = [f.value_at(word + (i,)) for i in (1, 2, 3)]
        for i in range(3):
            for j in range(3):
                if i != j:
                    total += abs(corners[i] - corners[j]) ** 2
    return total


def classical_osc(f):
    """Largest jump of f along any level edge."""
    best = 0.0
    for word in tensor.words(f.level):
        corners = [f.value_at(word + (i,)) for i in (1, 2, 3)]
        for i in range(3):
            for j in range(i + 1, 3):
                best = max(best, abs(corners[i] - corners[j]))
    return best


def selfsimilar_measure(word_prefix, weights=None):
    """Mass of the cylinder over a word prefix under a product measure."""
    if weights is None:
        weights = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    weights = tuple(float(w) for w in weights)
    if len(weights) != 3 or abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("weights must be three numbers summing to 1")
    if any(w < 0.0 for w in weights):
        raise ValueError("weights must be nonnegative")
    mass = 1.0
    for letter in word_prefix:
        if letter not in (1, 2, 3):
            raise ValueError("prefix letters must lie in {1, 2, 3}")
        mass *= weights[letter - 1]
    return mass


def to_element(f):
    """Diagonal matrix-model element with the same vertex values."""
    n = f.level
    xi = [f.value(outer_label(n, j)) for j in (1, 2, 3)]
    blocks = {}
    for k in range(1, n + 1):
        dim = 3 ** (n - k)
        for j in (1, 2, 3):
            diag = np.zeros(dim, dtype=np.complex128)
            for idx, word in enumerate(tensor.words(n - k)):
                diag[idx] = f.value(inner_label(n, word, j, k))
            blocks[(n - k, j)] = np.diag(diag)
    return algebra.GasketElement(n, xi, blocks)


def from_element(e, tol=1e-10):
    """Vertex function of a diagonal element; rejects off-diagonal mass."""
    scale = max(e.norm(), 1.0)
    n = e.level
    values = {}
    for j in (1, 2, 3):
        values[outer_label(n, j)] = complex(e.xi[j - 1])
    for k in range(1, n + 1):
        for j in (1, 2, 3):
            block = e.block(n - k, j)
            off = block - np.diag(np.diag(block))
            if np.abs(off).max() > tol * scale:
                raise ValueError("element is not diagonal in block (%d, %d)" % (n - k, j))
            for idx, word in enumerate(tensor.words(n - k)):
                values[inner_label(n, word, j, k)] = complex(block[idx, idx])
    return ClassicalFunction(n, values)


def vertex_rows(n):
    """Rows (name, x, y, age) for every level-n vertex."""
    rows = []
    for label in enumerate_vertices(n):
        x, y = label_to_point(label)
        rows.append((label.name(), x, y, vertex_age(label)))
    return rows


def edge_rows(n):
    """Rows (from_name, to_name) for every oriented level-n edge."""
    return [(a.name(), b.name()) for a, b in enumerate_edges(n)]
