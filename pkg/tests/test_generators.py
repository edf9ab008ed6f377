"""Tests for seeded generators and the suite plan."""
import pytest
from sympy import Rational, eye

from curvkit import generators
from curvkit.analysis import is_semisymmetric
from curvkit.curvature import check_symmetries, ricci
from curvkit.errors import GaveUp, SpecInvalid
from curvkit.exactnum import make_poly
from curvkit.generators import (
    GeneratorSpec,
    SplitMix64,
    adversarial_perturbation,
    constant_curvature,
    direct_sum,
    generate,
    isotropic_block,
    random_isometry,
    random_semisymmetric,
    signature_gram,
    spec_dimension,
    suite_specs,
)
from curvkit.space import is_isometry, make_space


class TestSplitMix64:
    def test_reference_values(self):
        rng = SplitMix64(0)
        assert rng.next_u64() == 0xE220A8397B1DCDAF
        assert rng.next_u64() == 0x6E789E6AA1B965F4

    def test_deterministic(self):
        first, second = SplitMix64(1234), SplitMix64(1234)
        assert [first.next_u64() for _ in range(5)] == [second.next_u64() for _ in range(5)]

    def test_small_int_range(self):
        rng = SplitMix64(99)
        draws = [rng.small_int(-2, 2) for _ in range(200)]
        assert set(draws) == {-2, -1, 0, 1, 2}
        assert all(rng.nonzero_int(3) != 0 for _ in range(50))


class TestConstructors:
    def test_direct_sum_single_block(self, euclid3, round3):
        assert direct_sum([(euclid3, round3)]) == (euclid3, round3)

    def test_direct_sum_empty(self):
        with pytest.raises(SpecInvalid):
            direct_sum([])

    def test_direct_sum_layout(self, flat_round_sum):
        s, K = flat_round_sum
        assert s.signature == (3, 1)
        # e3∧e4 is the last lexicographic pair
        assert K.matrix[5, 5] == 1
        assert sum(abs(x) for x in K.matrix) == 1

    def test_isotropic_block(self):
        s, K = isotropic_block(2, 2, Rational(1, 2))
        assert s.signature == (2, 2)
        assert check_symmetries(K).ok
        rd = ricci(K)
        assert rd.operator * rd.operator == 0 * eye(4)
        assert rd.operator != 0 * eye(4)

    def test_isotropic_block_needs_indefinite(self):
        with pytest.raises(SpecInvalid):
            isotropic_block(0, 3, 1)
        with pytest.raises(SpecInvalid):
            isotropic_block(1, 1, 1)

    def test_random_isometry(self):
        s = make_space(signature_gram(2, 2))
        for seed in range(3):
            assert is_isometry(s, random_isometry(s, SplitMix64(seed)))


class TestRandomSemisymmetric:
    def test_minpoly_survives_conjugation(self):
        spec = GeneratorSpec(seed=5, kind="random_semisym", params={"blocks": [
            {"type": "flat", "signature": [1, 1]},
            {"type": "constant", "signature": [2, 0], "curvature": "3"},
        ]})
        s, K = random_semisymmetric(spec)
        assert s.signature == (3, 1)
        assert ricci(K).minpoly == make_poly([0, 3, 1])

    def test_unplanned_seeds(self):
        for seed in range(4):
            _, K = random_semisymmetric(GeneratorSpec(seed=seed, kind="random_semisym"))
            assert is_semisymmetric(K)

    def test_definite_isotropic_block_rejected(self):
        spec = GeneratorSpec(seed=1, kind="random_semisym", params={"blocks": [
            {"type": "isotropic", "signature": [0, 3]},
        ]})
        with pytest.raises(SpecInvalid):
            random_semisymmetric(spec)

    def test_wrong_kind(self):
        with pytest.raises(SpecInvalid):
            random_semisymmetric(GeneratorSpec(seed=1, kind="constant"))


class TestAdversarial:
    def test_zero_epsilon_is_identity(self, round3):
        result = adversarial_perturbation(round3, GeneratorSpec(seed=3, kind="adversarial", params={"epsilon": "0"}))
        assert result.tensor is round3
        assert result.witness is None
        assert result.attempts == 0

    def test_breaks_constant_curvature(self, euclid4):
        K = constant_curvature(euclid4, 2)
        result = adversarial_perturbation(K, GeneratorSpec(seed=17, kind="adversarial"))
        assert result.witness is not None
        assert not is_semisymmetric(result.tensor)
        assert check_symmetries(result.tensor).ok
        assert result.seed == 17 + result.attempts - 1

    def test_surfaces_cannot_be_broken(self, euclid2, monkeypatch):
        monkeypatch.setattr(generators, "MAX_ATTEMPTS", 20)
        with pytest.raises(GaveUp) as info:
            adversarial_perturbation(constant_curvature(euclid2, 1), GeneratorSpec(seed=0, kind="adversarial"))
        assert info.value.attempts == 20


class TestGeneratorSpec:
    def test_from_dict(self):
        spec = GeneratorSpec.from_dict({"kind": "constant", "seed": 4, "params": {"curvature": "2"}})
        assert spec == GeneratorSpec(seed=4, kind="constant", params={"curvature": "2"})
        assert GeneratorSpec.from_dict(spec.to_dict()) == spec

    @pytest.mark.parametrize("raw", [
        [],
        {"kind": "sphere"},
        {"kind": "constant", "seed": -1},
        {"kind": "constant", "seed": True},
        {"kind": "constant", "seed": 2 ** 64},
        {"kind": "constant", "params": [1, 2]},
    ])
    def test_rejects(self, raw):
        with pytest.raises(SpecInvalid):
            GeneratorSpec.from_dict(raw)


class TestGenerate:
    def test_constant(self):
        out = generate(GeneratorSpec(seed=0, kind="constant", params={"signature": [2, 1], "curvature": "-1/2"}))
        assert out.space.signature == (2, 1)
        assert out.tensor.matrix == Rational(-1, 2) * eye(3)
        assert out.meta["name"] == "constant"

    def test_product_with_explicit_quadruples(self):
        quads = [[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], "1"]]
        out = generate(GeneratorSpec(seed=0, kind="product", params={"quadruples": quads}))
        assert check_symmetries(out.tensor).ok
        assert out.tensor.matrix != 0 * eye(6)

    def test_bad_signature(self):
        with pytest.raises(SpecInvalid):
            generate(GeneratorSpec(seed=0, kind="constant", params={"signature": [0, 0]}))

    def test_bad_curvature(self):
        with pytest.raises(SpecInvalid):
            generate(GeneratorSpec(seed=0, kind="constant", params={"curvature": "0.5"}))

    def test_direct_sum_needs_blocks(self):
        with pytest.raises(SpecInvalid):
            generate(GeneratorSpec(seed=0, kind="direct_sum"))

    def test_isotropic_in_definite_signature(self):
        with pytest.raises(SpecInvalid):
            generate(GeneratorSpec(seed=0, kind="isotropic", params={"signature": [0, 3]}))

    def test_adversarial_meta(self):
        out = generate(GeneratorSpec(seed=8, kind="adversarial"))
        assert out.meta["adversarial"]["witness"] is not None
        assert len(out.meta["adversarial"]["witness"]) == 4
        assert not is_semisymmetric(out.tensor)

    def test_nested_adversarial_rejected(self):
        spec = GeneratorSpec(seed=1, kind="adversarial", params={"base": {"kind": "adversarial"}})
        with pytest.raises(SpecInvalid):
            generate(spec)

    def test_projected_is_a_curvature_tensor(self):
        out = generate(GeneratorSpec(seed=2, kind="projected", params={"signature": [2, 2]}))
        assert check_symmetries(out.tensor).ok

    def test_same_spec_same_output(self):
        spec = GeneratorSpec(seed=77, kind="random_semisym")
        assert generate(spec).tensor.matrix == generate(spec).tensor.matrix


class TestSpecDimension:
    @pytest.mark.parametrize("raw, dim", [
        ({"kind": "constant"}, 3),
        ({"kind": "constant", "params": {"signature": [3, 1]}}, 4),
        ({"kind": "product"}, 4),
        ({"kind": "projected", "params": {"signature": [9, 0]}}, 9),
        ({"kind": "isotropic"}, 3),
        ({"kind": "direct_sum", "params": {"blocks": [{"type": "flat", "signature": [1, 1]}, {"type": "constant"}]}}, 4),
        ({"kind": "adversarial"}, 3),
        ({"kind": "adversarial", "params": {"base": {"kind": "isotropic", "params": {"signature": [3, 2]}}}}, 5),
    ])
    def test_read_off_spec(self, raw, dim):
        assert spec_dimension(GeneratorSpec.from_dict(raw)) == dim

    def test_matches_generated_instances(self):
        for spec in suite_specs(5, 12) + [GeneratorSpec(seed=seed, kind="random_semisym") for seed in range(6)]:
            assert spec_dimension(spec) == generate(spec).space.n

    @pytest.mark.parametrize("raw", [
        {"kind": "constant", "params": {"signature": [0, 0]}},
        {"kind": "direct_sum"},
        {"kind": "direct_sum", "params": {"blocks": ["flat"]}},
        {"kind": "adversarial", "params": {"base": {"kind": "adversarial"}}},
    ])
    def test_rejects(self, raw):
        with pytest.raises(SpecInvalid):
            spec_dimension(GeneratorSpec.from_dict(raw))


class TestSuitePlan:
    def test_deterministic(self):
        assert suite_specs(7, 12) == suite_specs(7, 12)
        assert suite_specs(7, 12) != suite_specs(8, 12)

    def test_kind_cycle(self):
        kinds = [spec.kind for spec in suite_specs(1, 6)]
        assert kinds == ["constant", "random_semisym", "isotropic", "projected", "direct_sum", "adversarial"]

    def test_specs_are_generatable(self):
        for spec in suite_specs(3, 6):
            out = generate(spec)
            assert out.space.n == out.tensor.n
