import itertools
from math import factorial

import numpy as np
import pytest

from superopt.errors import NumericalError
from superopt.wedge import (WedgeGridVector, exterior_append, project_out_frame,
                            wedge_gram_inner, wedge_index_set, wedge_of)


def _const(vectors, size=1):
    return [np.tile(np.asarray(v, complex), (size, 1)) for v in vectors]


def _antisym_tensor(vectors):
    """Full antisymmetrised tensor sum_sigma sgn(sigma) v_sigma(1) x ... x v_sigma(p)."""
    p = len(vectors)
    out = 0
    for perm in itertools.permutations(range(p)):
        sign = np.linalg.det(np.eye(p)[list(perm)])
        t = vectors[perm[0]]
        for k in perm[1:]:
            t = np.multiply.outer(t, vectors[k])
        out = out + sign * t
    return out


def _random_frame(rng, p, n=4):
    return [rng.normal(size=n) + 1j * rng.normal(size=n) for _ in range(p)]


def test_basic_wedges():
    e1, e2 = np.eye(2)
    w = wedge_of(_const([e1, e2]))
    assert w.coords[0] == pytest.approx([1])
    assert np.allclose(wedge_of(_const([e1, e1])).coords, 0)
    assert wedge_of(_const([e1 + e2, e2])).coords[0] == pytest.approx([1])
    assert wedge_of(_const([e2, e1])).coords[0] == pytest.approx([-1])


def test_gram_inner_examples():
    e1, e2 = np.eye(2)
    assert wedge_gram_inner([e1, e2], [e1, e2]) == pytest.approx(1)
    assert wedge_gram_inner([e1, e2], [e2, e1]) == pytest.approx(-1)


def test_index_set_is_lexicographic():
    assert wedge_index_set(4, 2) == ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_coordinates_are_minors(rng, p):
    vs = _random_frame(rng, p)
    w = wedge_of(_const(vs))
    mat = np.array(vs).T  # columns v_i
    for idx, s in enumerate(wedge_index_set(4, p)):
        assert w.coords[0, idx] == pytest.approx(np.linalg.det(mat[list(s)]), abs=1e-12)


@pytest.mark.parametrize("p", [2, 3])
def test_determinant_identity_vs_brute_force(rng, p):
    worst = 0.0
    for _ in range(50):
        u, x = _random_frame(rng, p), _random_frame(rng, p)
        brute = np.vdot(_antisym_tensor(x), _antisym_tensor(u)) / factorial(p)
        det = wedge_gram_inner(u, x)
        coords = wedge_of(_const(u)).pointwise_inner(wedge_of(_const(x)))[0]
        worst = max(worst, abs(brute - det), abs(coords - det))
    assert worst < 1e-10


def test_orthonormal_frame_norm_identity(rng):
    size, n = 32, 4
    worst = 0.0
    for j in range(1, n):
        a = rng.normal(size=(size, n, n)) + 1j * rng.normal(size=(size, n, n))
        q, _ = np.linalg.qr(a)
        frame = [q[:, :, i] for i in range(j)]
        x = rng.normal(size=(size, n)) + 1j * rng.normal(size=(size, n))
        lhs = exterior_append(wedge_of(frame), x).pointwise_norm()
        rhs = np.linalg.norm(project_out_frame(x, frame), axis=1)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    assert worst < 1e-10


def test_dependent_vectors_wedge_to_zero(rng):
    a, b = _random_frame(rng, 2)
    c = 2 * a - 1j * b
    assert np.max(np.abs(wedge_of(_const([a, b, c])).coords)) < 1e-12
    assert np.max(np.abs(wedge_of(_const([a, b])).coords)) > 1e-3


def test_project_out_frame():
    size = 8
    e = np.eye(3)
    frame = _const([e[0], e[1]], size)
    v = _const([e[2]], size)[0] * 5
    assert np.allclose(project_out_frame(v, frame), v)
    assert np.allclose(project_out_frame(frame[0], frame), 0)
    with pytest.raises(NumericalError):
        project_out_frame(v, [2 * frame[0]])


def test_shape_errors():
    w = WedgeGridVector.unit(2, 4)
    with pytest.raises(ValueError):
        exterior_append(w, np.zeros((4, 3)))
    with pytest.raises(ValueError):
        wedge_index_set(2, 3)
