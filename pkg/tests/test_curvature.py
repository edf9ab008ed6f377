"""Tests for the Bianchi map, curvature symmetries and Ricci contraction."""
import itertools

import pytest
from sympy import Matrix, Rational, diag, eye, zeros

from curvkit.bivector import bivector_inner, induced_gram, vee_operator, wedge_coords
from curvkit.curvature import (
    CurvatureTensor,
    apply_K,
    basis_endomorphisms,
    bianchi_map,
    bianchi_residual,
    check_symmetries,
    classify_ricci,
    four_tensor,
    make_curvature,
    operator_square,
    project_to_curvature,
    ricci,
    ricci_form,
    zero_tensor,
)
from curvkit.errors import ValidationError
from curvkit.generators import SplitMix64, constant_curvature, random_projected
from curvkit.space import basis_vector, inner, is_metric_skew, make_space, vee_endo, wedge_endo

SIGNATURES = [(3, 0), (2, 1), (1, 2), (2, 2), (3, 1), (4, 0)]
# every signature with 2 <= p + q <= 6
SMALL_SIGNATURES = [(p, n - p) for n in range(2, 7) for p in range(n + 1)]


def signature_space(p, q):
    return make_space(diag(*([1] * p + [-1] * q)))


def e(n, i):
    return eye(n)[:, i]


class TestBianchiMap:
    def test_zero(self, euclid3):
        assert bianchi_map(euclid3, zeros(3, 3)) == zeros(3, 3)

    def test_repeated_pair_vanishes(self, euclid3):
        alpha = wedge_coords(e(3, 0), e(3, 1))
        assert bianchi_map(euclid3, vee_operator(euclid3, alpha, alpha)) == zeros(3, 3)

    def test_disjoint_pairs(self, euclid4):
        T = vee_operator(euclid4, wedge_coords(e(4, 0), e(4, 1)), wedge_coords(e(4, 2), e(4, 3)))
        assert bianchi_map(euclid4, T) != zeros(6, 6)
        assert bianchi_residual(euclid4, T) is not None

    def test_map_equals_cyclic_sum(self, euclid4):
        E = [e(4, i) for i in range(4)]

        def vee(a, b, c, d):
            return vee_operator(euclid4, wedge_coords(a, b), wedge_coords(c, d))

        expected = vee(E[0], E[1], E[2], E[3]) + vee(E[1], E[2], E[0], E[3]) + vee(E[2], E[0], E[1], E[3])
        assert bianchi_map(euclid4, vee(E[0], E[1], E[2], E[3])) == expected


class TestProjection:
    def test_constant_is_fixed(self):
        for p, q in SIGNATURES:
            s = signature_space(p, q)
            K = constant_curvature(s, Rational(2, 3))
            assert project_to_curvature(s, K.matrix).matrix == K.matrix

    def test_isotropic_generator_is_fixed(self, isotropic_tensor):
        s = isotropic_tensor.space
        assert project_to_curvature(s, isotropic_tensor.matrix).matrix == isotropic_tensor.matrix

    def test_closed_form(self, euclid4):
        T = vee_operator(euclid4, wedge_coords(e(4, 0), e(4, 1)), wedge_coords(e(4, 2), e(4, 3)))
        projected = project_to_curvature(euclid4, T)
        assert projected.matrix == T - bianchi_map(euclid4, T) / 3
        assert bianchi_residual(euclid4, projected.matrix) is None

    def test_projection_lands_in_kernel(self):
        s = signature_space(2, 2)
        basis = [e(6, k) for k in range(6)]
        for i, j in itertools.combinations_with_replacement(range(6), 2):
            T = vee_operator(s, basis[i], basis[j])
            assert bianchi_map(s, project_to_curvature(s, T).matrix) == zeros(6, 6)


class TestValidation:
    def test_unprojected_rejected(self, euclid4):
        T = vee_operator(euclid4, wedge_coords(e(4, 0), e(4, 1)), wedge_coords(e(4, 2), e(4, 3)))
        with pytest.raises(ValidationError) as info:
            make_curvature(euclid4, T)
        assert info.value.invariant == "first Bianchi identity"
        assert info.value.witness["value"] != "0"

    def test_not_self_adjoint(self, euclid3):
        M = zeros(3, 3)
        M[0, 1] = 1
        with pytest.raises(ValidationError) as info:
            make_curvature(euclid3, M)
        assert info.value.invariant == "self-adjointness on bivectors"

    def test_wrong_shape(self, euclid3):
        with pytest.raises(ValidationError):
            make_curvature(euclid3, eye(2))

    def test_accepts_constant(self, euclid3):
        assert make_curvature(euclid3, 5 * eye(3)).matrix == 5 * eye(3)


class TestFourTensor:
    def test_constant_curvature_component(self, euclid3):
        lam = Rational(7, 2)
        K = constant_curvature(euclid3, lam)
        alpha = wedge_coords(e(3, 0), e(3, 1))
        assert four_tensor(K, e(3, 0), e(3, 1), e(3, 0), e(3, 1)) == lam * bivector_inner(euclid3, alpha, alpha)
        assert four_tensor(K, e(3, 0), e(3, 1), e(3, 0), e(3, 1)) == -lam

    def test_repeated_first_pair(self, non_semisymmetric):
        v = Matrix([1, 2, -1, 3])
        assert four_tensor(non_semisymmetric, v, v, e(4, 0), e(4, 2)) == 0

    def test_random_projected_symmetries(self):
        for seed in range(100):
            p, q = SMALL_SIGNATURES[seed % len(SMALL_SIGNATURES)]
            K = random_projected(signature_space(p, q), SplitMix64(seed))
            report = check_symmetries(K)
            assert report.ok, (p, q, seed, report.witness)
            form = ricci_form(K)
            assert form == form.T

    def test_pair_exchange_identity(self):
        s = signature_space(2, 2)
        K = random_projected(s, SplitMix64(11))
        E = [e(4, i) for i in range(4)]
        endos = {(a, b): apply_K(K, E[a], E[b]) for a, b in itertools.product(range(4), repeat=2)}
        for a, b, u, v in itertools.product(range(4), repeat=4):
            lhs = inner(s, endos[(a, b)] * E[u], E[v])
            rhs = inner(s, endos[(u, v)] * E[a], E[b])
            assert lhs == rhs

    def test_unprojected_fails_bianchi(self, euclid4):
        T = vee_operator(euclid4, wedge_coords(e(4, 0), e(4, 1)), wedge_coords(e(4, 2), e(4, 3)))
        report = check_symmetries(CurvatureTensor(space=euclid4, matrix=T))
        assert not report.first_bianchi
        assert report.pair_symmetry
        assert not report.ok


class TestApplyK:
    def test_constant_curvature(self, minkowski3):
        K = constant_curvature(minkowski3, 3)
        u, v = Matrix([1, 2, 0]), Matrix([0, 1, -1])
        assert apply_K(K, u, v) == 3 * wedge_endo(minkowski3, u, v)

    def test_isotropic_generator(self, isotropic_tensor):
        s = isotropic_tensor.space
        alpha = wedge_coords(e(3, 0), e(3, 2))
        p_wedge_x = wedge_endo(s, e(3, 0), e(3, 2))
        for u, v in itertools.product([Matrix([1, 0, 2]), Matrix([0, 1, 1]), Matrix([2, -1, 0])], repeat=2):
            coeff = bivector_inner(s, alpha, wedge_coords(u, v))
            assert apply_K(isotropic_tensor, u, v) == coeff * p_wedge_x

    def test_equal_vectors(self, round3):
        v = Matrix([1, 1, 1])
        assert apply_K(round3, v, v) == zeros(3, 3)

    def test_values_are_skew(self, non_semisymmetric):
        for _, A in basis_endomorphisms(non_semisymmetric):
            assert is_metric_skew(non_semisymmetric.space, A)


class TestRicci:
    def test_constant_curvature(self):
        for p, q in SIGNATURES:
            s = signature_space(p, q)
            lam = Rational(3, 2)
            assert ricci(constant_curvature(s, lam)).operator == lam * (1 - s.n) * eye(s.n)

    def test_unit_round_three_space(self, round3):
        rd = ricci(round3)
        assert rd.operator == -2 * eye(3)
        assert classify_ricci(rd).kind == "einstein"
        assert classify_ricci(rd).einstein_constant == -2
        assert classify_ricci(rd).label() == "einstein(-2)"

    def test_isotropic_example(self, isotropic_tensor):
        rd = ricci(isotropic_tensor)
        expected_form = zeros(3, 3)
        expected_form[1, 1] = 1
        assert rd.form == expected_form
        assert rd.operator * e(3, 1) == e(3, 0)
        assert rd.operator * e(3, 0) == zeros(3, 1)
        assert rd.operator * e(3, 2) == zeros(3, 1)
        assert rd.operator != zeros(3, 3)
        assert rd.operator * rd.operator == zeros(3, 3)
        assert classify_ricci(rd).kind == "isotropic"

    def test_zero(self, euclid3):
        assert classify_ricci(ricci(zero_tensor(euclid3))).kind == "zero"

    def test_mixed_spectrum(self, flat_round_sum):
        _, K = flat_round_sum
        assert classify_ricci(ricci(K)).kind == "other"

    @pytest.mark.parametrize("signature", [(4, 0), (3, 1), (2, 2), (1, 3)])
    def test_vee_product_formula(self, signature):
        s = signature_space(*signature)
        rng = SplitMix64(sum(signature) * 101 + signature[1])
        for _ in range(13):
            u, v, w, t = (Matrix([rng.small_int(-2, 2) for _ in range(4)]) for _ in range(4))
            K = CurvatureTensor(space=s, matrix=vee_operator(s, wedge_coords(u, v), wedge_coords(w, t)))
            expected = (
                inner(s, u, w) * vee_endo(s, t, v)
                + inner(s, v, t) * vee_endo(s, u, w)
                - inner(s, v, w) * vee_endo(s, t, u)
                - inner(s, u, t) * vee_endo(s, v, w)
            )
            assert ricci_form(K) == s.G * expected

    def test_form_and_operator_agree(self):
        s = signature_space(2, 1)
        K = random_projected(s, SplitMix64(5))
        rd = ricci(K)
        assert rd.form == rd.form.T
        assert s.G * rd.operator == rd.form


def test_operator_square(isotropic_tensor, round3):
    assert operator_square(isotropic_tensor) == zeros(3, 3)
    assert operator_square(round3) == eye(3)
    assert induced_gram(round3.space) * operator_square(round3) == -eye(3)
