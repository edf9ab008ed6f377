"""Shared fixtures: small spaces and the handful of tensors most tests lean on."""
import json

import pytest
from hypothesis import settings
from sympy import Matrix, eye

from curvkit.bivector import vee_operator, wedge_coords
from curvkit.curvature import CurvatureTensor, zero_tensor
from curvkit.generators import constant_curvature, direct_sum, product_tensor, signature_gram
from curvkit.space import make_space

# exact arithmetic is slow per example; keep hypothesis runs short and untimed
settings.register_profile("curvkit", max_examples=30, deadline=None)
settings.load_profile("curvkit")


def e(n, i):
    return eye(n)[:, i]


@pytest.fixture
def euclid2():
    return make_space(eye(2))


@pytest.fixture
def euclid3():
    return make_space(eye(3))


@pytest.fixture
def euclid4():
    return make_space(eye(4))


@pytest.fixture
def minkowski3():
    """Basis p, q, x with ⟨p,q⟩ = 1, ⟨x,x⟩ = 1, p and q isotropic."""
    return make_space(Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))


@pytest.fixture
def isotropic_tensor(minkowski3):
    """(p∧x)∨(p∧x): Ricci isotropic, h(K) spanned by p∧x."""
    omega = wedge_coords(e(3, 0), e(3, 2))
    return CurvatureTensor(space=minkowski3, matrix=vee_operator(minkowski3, omega, omega))


@pytest.fixture
def round3(euclid3):
    return constant_curvature(euclid3, 1)


@pytest.fixture
def flat_round_sum():
    """Flat ℝ^{1,1} ⊕ unit round Euclidean plane; Lorentzian, χ = X(X+1)."""
    flat = make_space(signature_gram(1, 1))
    plane = make_space(eye(2))
    return direct_sum([(flat, zero_tensor(flat)), (plane, constant_curvature(plane, 1))])


@pytest.fixture
def non_semisymmetric(euclid4):
    """project((e1∧e2)∨(e3∧e4) + 2(e1∧e3)∨(e1∧e3)) on Euclidean ℝ⁴."""
    E = [e(4, i) for i in range(4)]
    return product_tensor(euclid4, [(E[0], E[1], E[2], E[3], 1), (E[0], E[2], E[0], E[2], 2)])


@pytest.fixture
def constant_document():
    return json.dumps({
        "gram": [["1", "0"], ["0", "1"]],
        "tensor": {"basis": "lex-bivector", "matrix": [["3"]]},
    })


@pytest.fixture
def write_instance(tmp_path):
    """Serialize (space, tensor) to a temp file and return its path."""
    from curvkit.instance import serialize_instance

    def _write(space, tensor, name="instance.json"):
        path = tmp_path / name
        path.write_text(serialize_instance(space, tensor))
        return str(path)

    return _write

